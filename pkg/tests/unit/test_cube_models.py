import logging

import pytest

from src.core.cube_models import (
    CubeConfig,
    CubeDimensionError,
    CubeSpec,
    binomial_row,
    corpus,
    cube,
    cube_face_count,
    cube_h_star_identity,
    problem_experiment,
    simplex,
    square_pyramid,
)
from src.core.orderings import EnumerationMode, PolytopeContext
from src.core.polytope_graph import is_simple


class TestGenerators:
    """Cubes, simplices and the small corpus."""

    def test_cube_points_in_binary_order(self):
        config = cube(2)
        assert config.points == ((0, 0), (1, 0), (0, 1), (1, 1))
        assert config.labels == ("e1", "e2", "e3", "e4")
        assert config.name == "C^2"

    def test_cube_size(self):
        spec = CubeSpec(4)
        assert spec.n == 16
        assert spec.rank == 5
        assert len(cube(4).points) == 16

    @pytest.mark.parametrize("d", [0, -1, 2.0, True])
    def test_bad_dimension(self, d):
        with pytest.raises(CubeDimensionError):
            cube(d)

    def test_large_cube_warns(self, caplog):
        with caplog.at_level(logging.WARNING, logger="src.core.cube_models"):
            cube(CubeConfig.DESK_MAX_DIM + 1)
        assert any("[WARN]" in record.message for record in caplog.records)

    def test_simplex(self):
        config = simplex(3)
        assert config.points == ((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1))
        with pytest.raises(ValueError):
            simplex(0)

    def test_corpus(self):
        names = [config.name for config in corpus()]
        assert len(names) == 11
        assert "prism" in names
        assert square_pyramid().name in names
        assert len(set(names)) == len(names)


class TestCounting:
    """Closed-form face counts of cubes."""

    def test_face_counts(self):
        assert [cube_face_count(3, rank) for rank in range(0, 5)] == [0, 8, 12, 6, 1]
        assert cube_face_count(4, 2) == 32
        assert cube_face_count(3, 7) == 0

    def test_binomial_row(self):
        assert binomial_row(4) == (1, 4, 6, 4, 1)


class TestHStarIdentity:
    """h*(C^d) equals the binomial row, degree histograms included."""

    def test_square_exhaustive(self, square_context):
        report = cube_h_star_identity(2, context=square_context)
        assert report.mode == "exhaustive"
        assert report.h_star == (1, 2, 1)
        assert report.orderings_checked == 16
        assert report.ok

    def test_cube3_exhaustive(self, cube3_context):
        report = cube_h_star_identity(3, context=cube3_context)
        assert report.h_star == report.expected == (1, 3, 3, 1)
        assert report.histogram_failures == 0
        assert report.ok

    def test_cube3_sampled(self, cube3_context):
        """Test that generic functionals always give identity-respecting K-orderings."""
        report = cube_h_star_identity(3, mode=EnumerationMode.SAMPLE, seed=7, samples=25, context=cube3_context)
        assert report.mode == "sample"
        assert report.orderings_checked == 25
        assert report.ok
        assert report.to_dict()["ok"] is True

    def test_cube4_sampled(self):
        context = PolytopeContext.from_configuration(cube(4))
        assert context.simple
        assert is_simple(context.graph, 5)
        assert context.om.is_matroid_polytope()
        report = cube_h_star_identity(4, seed=3, samples=40, context=context)
        assert report.mode == "sample"
        assert report.h_star == (1, 4, 6, 4, 1)
        assert report.orderings_checked == 40
        assert report.ok


class TestProblemExperiment:
    """K-orderings against shelling orderings on cubes."""

    def test_square_coincide(self, square_context):
        experiment = problem_experiment(2, context=square_context)
        summary = experiment.summary
        assert (summary.total, summary.k, summary.shelling) == (24, 16, 16)
        assert summary.k_not_shelling == 0
        assert experiment.coincide
        assert experiment.witnesses == []
        assert experiment.rejected == 0

    def test_report_dict(self, square_context):
        document = problem_experiment(2, context=square_context).to_dict()
        assert document["dim"] == 2
        assert document["coincide"] is True
        assert document["witnesses"] == 0

    def test_exhaustive_refused_above_limit(self):
        with pytest.raises(CubeDimensionError):
            problem_experiment(CubeConfig.EXHAUSTIVE_MAX_DIM + 1, mode=EnumerationMode.EXHAUSTIVE)
