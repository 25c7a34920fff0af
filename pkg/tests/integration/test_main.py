import json

import pytest

# Import main (requires project root in path)
from src import main
from src.core.cube_models import cube, prism, simplex, square, square_pyramid


def _lines(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def _manifest(stderr):
    documents = [json.loads(line) for line in stderr.splitlines() if line.startswith('{"manifest"')]
    assert len(documents) == 1
    return documents[0]["manifest"]


class TestMainCommands:
    """End-to-end runs of every subcommand through main(argv)."""

    # ========================================================================
    # 1. LATTICE AND GRAPH
    # ========================================================================

    def test_faces(self, write_config, capsys):
        code = main.main(["faces", "--input", write_config(square())])
        out, err = capsys.readouterr()
        document = json.loads(out)
        assert code == main.EXIT_OK
        assert document["f"] == [1, 4, 4, 1]
        assert document["h_star"] == [1, 2, 1]
        assert _manifest(err)["exit_code"] == 0

    def test_fvector_from_h_star(self, capsys):
        code = main.main(["fvector", "--h-star", "1,4,6,4,1"])
        document = json.loads(capsys.readouterr().out)
        assert code == main.EXIT_OK
        assert document["f"] == [1, 16, 32, 24, 8, 1]
        assert document["euler_ok"] is True

    def test_fvector_from_input(self, write_config, capsys):
        main.main(["fvector", "--input", write_config(prism())])
        document = json.loads(capsys.readouterr().out)
        assert document["f"] == [1, 6, 9, 5, 1]
        assert document["h_star"] == [1, 2, 2, 1]

    def test_graph(self, write_config, capsys):
        main.main(["graph", "--input", write_config(square_pyramid())])
        document = json.loads(capsys.readouterr().out)
        assert len(document["edges"]) == 8
        assert document["simple"] is False

    # ========================================================================
    # 2. ORDERINGS
    # ========================================================================

    def test_check_ordering(self, write_config, capsys):
        """Test that e1 < e4 < e2 < e3 on the square is neither K nor shelling."""
        code = main.main(["check-ordering", "--input", write_config(square()), "--ordering", "e1,e4,e2,e3"])
        report = json.loads(capsys.readouterr().out)
        assert code == main.EXIT_OK
        assert report["is_k"] is False
        assert report["is_shelling"] is False
        assert report["ordering"] == ["e1", "e4", "e2", "e3"]

    def test_check_ordering_unknown_label(self, write_config, capsys):
        code = main.main(["check-ordering", "--input", write_config(square()), "--ordering", "e1,e2,e3,e9"])
        assert code == main.EXIT_VALIDATION
        assert "error:" in capsys.readouterr().err

    def test_enumerate_streams_then_summary(self, write_config, capsys):
        code = main.main(["enumerate", "--input", write_config(square()), "--filter", "k"])
        documents = _lines(capsys.readouterr().out)
        summary = documents[-1]
        assert code == main.EXIT_OK
        assert len(documents) == 17
        assert all(d["is_k"] for d in documents[:-1])
        assert (summary["total"], summary["k"], summary["shelling"]) == (24, 16, 16)

    def test_enumerate_budget_is_partial(self, write_config, capsys):
        code = main.main(["enumerate", "--input", write_config(square()), "--filter", "all", "--budget", "4"])
        summary = _lines(capsys.readouterr().out)[-1]
        assert code == main.EXIT_PARTIAL
        assert summary["partial"] is True

    def test_enumerate_sample_records_seed(self, write_config, capsys):
        main.main(["enumerate", "--input", write_config(square()), "--mode", "sample",
                   "--budget", "30", "--seed", "5", "--filter", "k"])
        out, err = capsys.readouterr()
        summary = _lines(out)[-1]
        assert summary["seed"] == 5
        assert summary["total"] == 30
        assert _manifest(err)["seed"] == 5

    def test_verify(self, write_config, capsys):
        code = main.main(["verify", "--input", write_config(prism())])
        report = json.loads(capsys.readouterr().out)
        assert code == main.EXIT_OK
        assert report["ok"] is True
        assert report["orderings"] == 720

    def test_verify_rejects_non_simple(self, write_config, capsys):
        code = main.main(["verify", "--input", write_config(square_pyramid())])
        assert code == main.EXIT_VALIDATION
        assert capsys.readouterr().out == ""

    # ========================================================================
    # 3. RECONSTRUCTION
    # ========================================================================

    def test_reconstruct_with_oracle(self, write_config, capsys):
        path = write_config(cube(3))
        code = main.main(["reconstruct", "--input", path, "--oracle", path])
        document = json.loads(capsys.readouterr().out)
        assert code == main.EXIT_OK
        assert document["comparison"]["isomorphic"] is True
        assert document["search"]["minimum"] == 27
        assert document["lattice"]["f"] == [1, 8, 12, 6, 1]

    def test_reconstruct_from_graph_file(self, write_config, write_document, capsys):
        main.main(["graph", "--input", write_config(simplex(3))])
        graph_document = json.loads(capsys.readouterr().out)
        code = main.main(["reconstruct", "--graph", write_document(graph_document, "tetra.json")])
        document = json.loads(capsys.readouterr().out)
        assert code == main.EXIT_OK
        assert document["lattice"]["f"] == [1, 4, 6, 4, 1]

    @pytest.mark.parametrize("budget", ["8", "16", "400"])
    def test_reconstruct_budget_is_partial(self, write_config, capsys, budget):
        path = write_config(cube(3))
        code = main.main(["reconstruct", "--input", path, "--oracle", path, "--budget", budget])
        out, err = capsys.readouterr()
        document = json.loads(out)
        assert code == main.EXIT_PARTIAL
        assert document["search"]["partial"] is True
        assert document["lattice"] is None
        assert "comparison" not in document
        assert _manifest(err)["exit_code"] == main.EXIT_PARTIAL

    def test_reconstruct_irregular_graph(self, write_document, capsys):
        path = write_document({"vertices": ["a", "b", "c"], "edges": [["a", "b"], ["b", "c"]]}, "path.json")
        assert main.main(["reconstruct", "--graph", path]) == main.EXIT_VALIDATION

    # ========================================================================
    # 4. CUBES
    # ========================================================================

    def test_cube(self, capsys):
        main.main(["cube", "--dim", "2"])
        document = json.loads(capsys.readouterr().out)
        assert document["points"] == [[0, 0], [1, 0], [0, 1], [1, 1]]

    def test_cube_identity(self, capsys):
        main.main(["cube", "--dim", "2", "--identity"])
        assert json.loads(capsys.readouterr().out)["ok"] is True

    def test_cube_bad_dimension(self, capsys):
        assert main.main(["cube", "--dim", "0"]) == main.EXIT_VALIDATION

    def test_experiment_square(self, capsys):
        code = main.main(["experiment", "--dim", "2"])
        documents = _lines(capsys.readouterr().out)
        assert code == main.EXIT_OK
        assert len(documents) == 1
        assert documents[0]["coincide"] is True
        assert (documents[0]["k"], documents[0]["shelling"], documents[0]["k_not_shelling"]) == (16, 16, 0)

    def test_corpus(self, tmp_path, capsys):
        code = main.main(["corpus", "--write-dir", str(tmp_path)])
        documents = _lines(capsys.readouterr().out)
        assert code == main.EXIT_OK
        assert len(documents) == 11
        assert (tmp_path / "C3.json").exists()


class TestMainErrors:
    """Exit codes, manifest and logging options."""

    def test_missing_command(self, capsys):
        assert main.main([]) == main.EXIT_USAGE

    def test_unknown_filter(self, write_config, capsys):
        code = main.main(["enumerate", "--input", write_config(square()), "--filter", "bogus"])
        assert code == main.EXIT_USAGE

    @pytest.mark.parametrize("command,option", [
        ("enumerate", "--budget"),
        ("verify", "--budget"),
        ("reconstruct", "--budget"),
        ("enumerate", "--workers"),
        ("reconstruct", "--workers"),
    ])
    @pytest.mark.parametrize("value", ["0", "-3"])
    def test_non_positive_counts_rejected(self, write_config, capsys, command, option, value):
        code = main.main([command, "--input", write_config(square()), option, value])
        assert code == main.EXIT_USAGE
        assert capsys.readouterr().out == ""

    def test_non_positive_samples_rejected(self, capsys):
        assert main.main(["cube", "--dim", "2", "--identity", "--samples", "0"]) == main.EXIT_USAGE

    def test_missing_input_file(self, tmp_path, capsys):
        code = main.main(["faces", "--input", str(tmp_path / "absent.json")])
        assert code == main.EXIT_VALIDATION
        assert _manifest(capsys.readouterr().err)["exit_code"] == main.EXIT_VALIDATION

    def test_malformed_json(self, tmp_path, capsys):
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        assert main.main(["faces", "--input", str(path)]) == main.EXIT_VALIDATION

    def test_bad_h_star(self, capsys):
        assert main.main(["fvector", "--h-star", "1,x"]) == main.EXIT_VALIDATION

    def test_manifest_file(self, write_config, tmp_path, capsys):
        config_path = write_config(square())
        manifest_path = tmp_path / "run.json"
        main.main(["--manifest", str(manifest_path), "faces", "--input", config_path])
        written = json.loads(manifest_path.read_text(encoding="utf-8"))["manifest"]
        assert written["command"] == "faces"
        assert len(written["inputs"][config_path]) == 64

    def test_log_dir(self, write_config, tmp_path, capsys):
        main.main(["--log-level", "INFO", "--log-dir", str(tmp_path), "faces", "--input", write_config(square())])
        assert (tmp_path / "app.log").exists()
