"""Tests for FuzzyRec."""
