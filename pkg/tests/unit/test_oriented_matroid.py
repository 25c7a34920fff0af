import pickle

import pytest

from src.core.cube_models import cube, square, triangle
from src.core.oriented_matroid import (
    ConfigurationError,
    DegenerateConfigurationError,
    OrientedMatroid,
    PointConfiguration,
    UnknownElementError,
    exact_rank,
)
from src.core.sign_vectors import SignVector, is_orthogonal


class TestPointConfiguration:
    """Validation of input configurations."""

    def test_default_labels(self):
        """Test that labels default to e1..en in input order."""
        config = PointConfiguration("seg", 1, ((0,), (1,)))
        assert config.labels == ("e1", "e2")
        assert config.lifted() == [(0, 1), (1, 1)]

    def test_repeated_points(self):
        """Test that duplicated points are degenerate."""
        with pytest.raises(DegenerateConfigurationError):
            PointConfiguration("dup", 2, ((0, 0), (0, 0), (1, 0)))

    def test_wrong_dimension(self):
        with pytest.raises(ConfigurationError):
            PointConfiguration("bad", 2, ((0, 0), (1,)))

    def test_non_integer_coordinates(self):
        with pytest.raises(ConfigurationError):
            PointConfiguration("bad", 1, ((0.5,), (1,)))

    def test_from_dict_infers_dim(self):
        config = PointConfiguration.from_dict({"name": "s", "points": [[0, 0], [1, 0], [0, 1]]})
        assert config.dim == 2
        assert config.to_dict()["points"] == [[0, 0], [1, 0], [0, 1]]

    def test_from_dict_missing_points(self):
        with pytest.raises(ConfigurationError):
            PointConfiguration.from_dict({"name": "s"})

    def test_restrict_keeps_labels(self):
        """Test that a sub-configuration keeps the original labels and order."""
        sub = square().restrict(["e4", "e1"])
        assert sub.labels == ("e1", "e4")
        assert sub.points == ((0, 0), (1, 1))

    def test_unknown_label(self):
        with pytest.raises(UnknownElementError):
            square().index_of("e9")


class TestCocircuits:
    """Cocircuits from exact nullspaces."""

    def test_square_cocircuits(self):
        """Test that the square has one cocircuit pair per line through two points."""
        om = OrientedMatroid.from_points(square())
        assert om.rank == 3
        assert len(om.cocircuits) == 12
        # Line through e1=(0,0) and e2=(1,0): e3 and e4 lie on the same side.
        assert SignVector.from_string("00++") in om.cocircuits or SignVector.from_string("00--") in om.cocircuits
        # Diagonal through e1 and e4 separates e2 from e3.
        assert SignVector.from_string("0+-0") in om.cocircuits

    def test_cube_has_forty_cocircuits(self):
        """Test the 20 planes through at least three vertices of C^3."""
        om = OrientedMatroid.from_points(cube(3))
        assert om.rank == 4
        assert len(om.cocircuits) == 40

    def test_cocircuits_closed_under_negation(self):
        om = OrientedMatroid.from_points(cube(3))
        assert all(-c in om.cocircuits for c in om.cocircuits)

    def test_segment_rank_two(self):
        om = OrientedMatroid.from_points(cube(1))
        assert om.rank == 2
        assert om.cocircuits == frozenset({
            SignVector.from_string("0+"), SignVector.from_string("0-"),
            SignVector.from_string("+0"), SignVector.from_string("-0"),
        })

    def test_single_point(self):
        """Test the rank-1 configuration of one point."""
        om = OrientedMatroid.from_points(PointConfiguration("pt", 1, ((3,),)))
        assert om.rank == 1
        assert om.is_matroid_polytope()

    def test_exact_rank(self):
        assert exact_rank([[1, 2], [2, 4]]) == 1
        assert exact_rank([]) == 0


class TestCovectors:
    """Covector closure and membership."""

    def test_triangle_is_boolean(self):
        """Test that three independent vectors realize all 27 sign vectors."""
        om = OrientedMatroid.from_points(triangle())
        assert len(om.covectors()) == 27

    def test_square_covector_count(self):
        """Test 1 zero + 12 cocircuits + 24 edges + 14 topes on the sphere."""
        om = OrientedMatroid.from_points(square())
        assert len(om.covectors()) == 51

    def test_membership_agrees_with_closure(self):
        om = OrientedMatroid.from_points(square())
        covectors = om.covectors()
        for plus in range(16):
            for minus in range(16):
                if plus & minus:
                    continue
                vector = SignVector(4, plus, minus)
                assert om.is_covector(vector) == (vector in covectors)

    def test_nonnegative_covectors_are_covectors(self):
        om = OrientedMatroid.from_points(cube(3))
        nonnegative = om.nonnegative_covectors()
        assert all(om.is_covector(v) for v in nonnegative)
        assert SignVector.all_plus(8) in nonnegative


class TestPolytopeProperties:
    """Acyclicity, extreme points, circuits and reorientation."""

    def test_square_is_matroid_polytope(self):
        om = OrientedMatroid.from_points(square())
        assert om.is_acyclic()
        assert om.is_matroid_polytope()

    def test_interior_point_is_not_extreme(self):
        """Test that the centre of a square is not an extreme point."""
        config = PointConfiguration("centred", 2, ((0, 0), (2, 0), (0, 2), (2, 2), (1, 1)))
        om = OrientedMatroid.from_points(config)
        assert om.is_acyclic()
        assert not om.is_extreme("e5")
        assert om.is_extreme("e1")
        assert not om.is_matroid_polytope()

    def test_square_circuit(self):
        """Test the single circuit e1 + e4 = e2 + e3 of the square."""
        om = OrientedMatroid.from_points(square())
        assert om.circuits() == frozenset({SignVector.from_string("+--+"), SignVector.from_string("-++-")})

    def test_cocircuits_orthogonal_to_circuits(self):
        om = OrientedMatroid.from_points(cube(3))
        circuits = om.circuits()
        assert circuits
        assert all(is_orthogonal(c, d) for c in om.cocircuits for d in circuits)

    def test_flipping_antipodal_pair_is_not_acyclic(self):
        """Test that reorienting the diagonal {e1, e4} of the square leaves a cycle."""
        om = OrientedMatroid.from_points(square())
        assert not om.reorient(["e1", "e4"]).is_acyclic()
        assert om.reorient(["e1", "e2"]).is_acyclic()
        assert not om.is_acyclic_after_flip(0b1001)
        assert om.is_acyclic_after_flip(0b0011)

    def test_reorient_initial(self):
        om = OrientedMatroid.from_points(square())
        ordering = ["e1", "e4", "e2", "e3"]
        assert om.reorient_initial(ordering, 0) is om
        assert om.reorient_initial(ordering, 1).is_acyclic()
        assert not om.reorient_initial(ordering, 2).is_acyclic()
        assert om.reorient_initial(ordering, 4).is_acyclic()

    def test_reorient_initial_out_of_range(self):
        om = OrientedMatroid.from_points(square())
        with pytest.raises(ValueError):
            om.reorient_initial(["e1", "e2", "e3", "e4"], 5)

    def test_flip_shortcut_matches_reorientation(self):
        om = OrientedMatroid.from_points(cube(3))
        for mask in range(0, 256, 7):
            assert om.is_acyclic_after_flip(mask) == om._reoriented(mask).is_acyclic()

    def test_pickle_round_trip(self):
        """Test that instances cross process boundaries."""
        om = OrientedMatroid.from_points(square())
        om.covectors()
        clone = pickle.loads(pickle.dumps(om))
        assert clone.cocircuits == om.cocircuits
        assert len(clone.covectors()) == 51

    def test_deletion_keeps_other_elements_extreme(self):
        """Test deleting each vertex of C^3 in turn."""
        config = cube(3)
        for label in config.labels:
            om = OrientedMatroid.from_points(config.delete(label))
            assert om.rank == 4
            assert all(om.is_extreme(other) for other in om.labels)
