"""Unit tests for FuzzyRec components."""
