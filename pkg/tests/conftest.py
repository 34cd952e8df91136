"""Shared test fixtures and configuration."""

import tempfile
from dataclasses import dataclass
from pathlib import Path

import pytest

from src.cycles import point_poly
from src.exactfield import zeta_pow
from src.jacobian import HypersurfaceSpec
from src.polyring import binary_form_from_roots, fermat_form


@dataclass(frozen=True)
class TestConfig:
    """Test configuration matching the real Config interface."""

    project_root: Path = Path("/tmp/test_project")
    output_dir: Path = Path("/tmp/test_project/reports")
    problems_dir: Path = Path("/tmp/test_project/problems")
    monomial_order: str = "grevlex"
    parallel_workers: int = 2
    random_seed: int = 1234
    log_level: str = "WARNING"


@pytest.fixture
def temp_dir():
    """Create a temporary directory for test files."""
    with tempfile.TemporaryDirectory() as tmpdir:
        yield Path(tmpdir)


@pytest.fixture
def test_config(temp_dir: Path) -> TestConfig:
    """Create a test configuration with temporary paths."""
    return TestConfig(
        project_root=temp_dir,
        output_dir=temp_dir / "reports",
        problems_dir=temp_dir / "problems",
    )


@pytest.fixture
def fermat_cubic_curve() -> HypersurfaceSpec:
    """x0^3 + x1^3: three points on the projective line."""
    return HypersurfaceSpec(fermat_form(2, 3), "grevlex")


@pytest.fixture
def fermat_quartic_curve() -> HypersurfaceSpec:
    """x0^4 + x1^4."""
    return HypersurfaceSpec(fermat_form(2, 4), "grevlex")


@pytest.fixture
def fermat_cubic_surface() -> HypersurfaceSpec:
    """x0^3 + x1^3 + x2^3 + x3^3."""
    return HypersurfaceSpec(fermat_form(4, 3), "grevlex")


@pytest.fixture
def split_cubic() -> HypersurfaceSpec:
    """x0 (x0 - x1) (x0 + x1): a binary cubic with roots 0, 1, -1."""
    return HypersurfaceSpec(binary_form_from_roots([0, 1, -1]), "grevlex")


@pytest.fixture
def cubic_point(fermat_cubic_curve):
    """The point (zeta_6 : 1) on x0^3 + x1^3."""
    return point_poly(fermat_cubic_curve, zeta_pow(6, 1))


@pytest.fixture
def problem_file(temp_dir: Path):
    """Write problem text to a file and return its path."""

    def write(text: str, name: str = "problem.txt") -> Path:
        path = temp_dir / name
        path.write_text(text, encoding="utf-8")
        return path

    return write
