"""
Pytest configuration and fixtures for FuzzyRec tests.
"""

import sys
from pathlib import Path

import numpy as np
import pytest
from click.testing import CliRunner

# Add src to path for testing
src_path = Path(__file__).parent.parent / "src"
if str(src_path) not in sys.path:
    sys.path.insert(0, str(src_path))

from fuzzyrec.domain.data.services.movielens_parser import parse_movielens
from fuzzyrec.domain.data.services.synthetic_generator import generate_synthetic
from fuzzyrec.domain.network.models.rule_network import RuleNetwork
from fuzzyrec.infrastructure.config.settings import Settings

MOVIES = [
    b"1::Toy Story (1995)::Animation|Children's|Comedy",
    b"2::Heat (1995)::Action|Crime|Thriller",
    b"3::Casablanca (1942)::Drama|Romance|War",
    b"4::Metropolis (1927)::Sci-Fi",
    b"5::Alien (1979)::Action|Horror|Sci-Fi",
    b"6::Fargo (1996)::Crime|Drama|Thriller",
    b"7::Gladiator (2000)::Action|Drama",
    "8::Le Café (1994)::Comedy|Romance".encode("latin-1"),
]

USERS = [
    b"1::F::1::10::48067",
    b"2::M::56::16::70072",
    b"3::M::25::15::55117",
    b"4::F::45::7::02460",
    b"5::M::18::4::55455",
    b"6::F::35::12::55117",
]


def movielens_ratings() -> list:
    """Every user rates every movie; timestamps are a fixed shuffle."""
    order = np.random.default_rng(7).permutation(48)
    lines = []
    index = 0
    for user in range(1, 7):
        for movie in range(1, 9):
            rating = 1 + (user * 3 + movie * 2 + user * movie) % 5
            lines.append(f"{user}::{movie}::{rating}::{978300000 + int(order[index]) * 60}")
            index += 1
    return [line.encode("ascii") for line in lines]


@pytest.fixture
def movielens_dir(tmp_path) -> Path:
    """A tiny MovieLens 1M style directory (6 users, 8 movies, 48 ratings)."""
    directory = tmp_path / "ml-1m"
    directory.mkdir()
    (directory / "movies.dat").write_bytes(b"\n".join(MOVIES) + b"\n")
    (directory / "users.dat").write_bytes(b"\n".join(USERS) + b"\n")
    (directory / "ratings.dat").write_bytes(b"\n".join(movielens_ratings()) + b"\n")
    return directory


@pytest.fixture
def movielens_data(movielens_dir):
    return parse_movielens(
        movielens_dir / "ratings.dat", movielens_dir / "users.dat", movielens_dir / "movies.dat"
    )


@pytest.fixture
def synthetic_corpus():
    """2000-sample synthetic corpus (seed 0)."""
    return generate_synthetic(seed=0, n_samples=2000, n_users=40, n_items=30)


@pytest.fixture
def tiny_network() -> RuleNetwork:
    """Two rules over three atoms with hand-picked weights."""
    return RuleNetwork(np.array([[2.0, -1.0, 0.5], [-3.0, 0.0, 4.0]]))


@pytest.fixture
def fast_settings() -> Settings:
    """Synthetic preset shrunk so whole pipelines run in a second."""
    return Settings.synthetic_preset().with_overrides(
        {
            "epochs": 20,
            "synthetic_samples": 600,
            "synthetic_users": 30,
            "synthetic_items": 20,
            "runs": 2,
            "threads": 1,
            "log_every": 10,
        }
    )


@pytest.fixture
def movielens_settings(movielens_dir) -> Settings:
    """MovieLens preset on the tiny directory."""
    return Settings.movielens_preset().with_overrides(
        {
            "movielens_dir": str(movielens_dir),
            "epochs": 10,
            "selection_epochs": 5,
            "runs": 2,
            "threads": 1,
        }
    )


@pytest.fixture
def runner() -> CliRunner:
    """Create CLI test runner."""
    return CliRunner()
