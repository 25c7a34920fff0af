import json
import os
import sys

import pytest

# Add project root to Python Path so modules can be imported
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.core.cube_models import corpus, cube, prism, square, square_pyramid, triangle
from src.core.face_lattice import faces
from src.core.orderings import PolytopeContext
from src.core.oriented_matroid import OrientedMatroid

# ============================================================================
# 1. CORPUS POLYTOPES (built once per session)
# ============================================================================

@pytest.fixture(scope="session")
def square_context():
    """Unit square: rank 3, f = (1,4,4,1)."""
    return PolytopeContext.from_configuration(square())

@pytest.fixture(scope="session")
def triangle_context():
    """Triangle: rank 3, f = (1,3,3,1)."""
    return PolytopeContext.from_configuration(triangle())

@pytest.fixture(scope="session")
def cube3_context():
    """C^3: rank 4, f = (1,8,12,6,1)."""
    return PolytopeContext.from_configuration(cube(3))

@pytest.fixture(scope="session")
def prism_context():
    """Triangular prism: rank 4, f = (1,6,9,5,1)."""
    return PolytopeContext.from_configuration(prism())

@pytest.fixture(scope="session")
def pyramid_context():
    """Square pyramid: not simple."""
    return PolytopeContext.from_configuration(square_pyramid())

@pytest.fixture(scope="session")
def corpus_lattices():
    """Face lattices of every corpus configuration, keyed by name."""
    return {config.name: faces(OrientedMatroid.from_points(config)) for config in corpus()}

# ============================================================================
# 2. INPUT FILES
# ============================================================================

@pytest.fixture
def write_config(tmp_path):
    """Writes a PointConfiguration to a JSON file and returns its path."""
    def _write(config, name=None):
        path = tmp_path / f"{name or config.name.replace('^', '')}.json"
        path.write_text(json.dumps(config.to_dict()), encoding="utf-8")
        return str(path)
    return _write

@pytest.fixture
def write_document(tmp_path):
    """Writes any JSON document to a file and returns its path."""
    def _write(document, name):
        path = tmp_path / name
        path.write_text(json.dumps(document), encoding="utf-8")
        return str(path)
    return _write
