import csv
import json

import numpy as np
import pytest

from dcloc import AxisBox, Ball, Halfspace, ProblemInstance, Singleton, WeightedSet
from dcloc.cli import EXIT_OK, EXIT_SOLVER, EXIT_VALIDATION, main
from dcloc.instance_io import (
    ParseError,
    ValidationError,
    instance_from_dict,
    instance_to_dict,
    load_instance,
    load_points_csv,
    shape_from_dict,
    shape_to_dict,
    write_instance,
)

INF = np.inf


class TestShapeRoundTrip:
    @pytest.mark.parametrize("shape", [
        Singleton([1.0, -2.0]),
        Ball([0.0, 0.5], 2.5),
        AxisBox([-1.0, 0.0], [1.0, 3.0]),
        AxisBox([-INF, 0.0], [INF, 0.0]),
        Halfspace([0.0, 1.0], -1.0),
    ])
    def test_exact_round_trip(self, shape):
        doc = shape_to_dict(shape)
        json.dumps(doc)  # must be serializable as-is
        assert shape_from_dict(doc) == shape

    def test_unknown_kind(self):
        with pytest.raises(ParseError):
            shape_from_dict({"kind": "cone", "apex": [0, 0]})

    def test_missing_field(self):
        with pytest.raises(ParseError):
            shape_from_dict({"kind": "ball", "center": [0, 0]})


class TestInstanceRoundTrip:
    def make(self):
        return ProblemInstance(
            2,
            [WeightedSet(AxisBox([-INF, 0], [INF, 0]), 1.5)],
            [WeightedSet(Halfspace([0, 1], -1.0), 0.5)],
            Ball([0, 0], 10.0),
        )

    def test_dict_round_trip(self):
        inst = self.make()
        again = instance_from_dict(instance_to_dict(inst))
        assert again.dimension == inst.dimension
        assert [w.set for w in again.attractions] == [w.set for w in inst.attractions]
        assert [w.weight for w in again.repulsions] == [w.weight for w in inst.repulsions]
        assert again.constraint == inst.constraint

    def test_file_round_trip(self, tmp_path):
        path = tmp_path / "inst.json"
        write_instance(self.make(), path)
        again = load_instance(path)
        assert again.constraint == self.make().constraint
        # writing again yields byte-identical output (sorted keys)
        path2 = tmp_path / "inst2.json"
        write_instance(again, path2)
        assert path.read_text() == path2.read_text()

    def test_fixture_loads(self, fixtures_dir):
        inst = load_instance(fixtures_dir / "line_between_halfplanes.json")
        assert inst.dimension == 2
        assert inst.constraint == Ball([0, 0], 10.0)

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(ParseError):
            load_instance(path)

    def test_no_attractions(self):
        doc = {
            "dimension": 1,
            "attractions": [],
            "repulsions": [],
            "constraint": {"kind": "box", "lower": ["-inf"], "upper": ["inf"]},
        }
        with pytest.raises(ValidationError):
            instance_from_dict(doc)

    def test_nonpositive_weight(self):
        doc = {
            "dimension": 1,
            "attractions": [{"shape": {"kind": "point", "point": [0.0]}, "weight": 0.0}],
            "constraint": {"kind": "box", "lower": ["-inf"], "upper": ["inf"]},
        }
        with pytest.raises(ValidationError):
            instance_from_dict(doc)

    def test_dimension_mismatch(self):
        doc = {
            "dimension": 2,
            "attractions": [{"shape": {"kind": "point", "point": [0.0]}, "weight": 1.0}],
            "constraint": {
                "kind": "box", "lower": ["-inf", "-inf"], "upper": ["inf", "inf"],
            },
        }
        with pytest.raises(ValidationError):
            instance_from_dict(doc)


class TestLoadPointsCsv:
    def write_csv(self, path, rows, header=None):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            if header:
                writer.writerow(header)
            writer.writerows(rows)

    def test_points_with_header(self, tmp_path):
        path = tmp_path / "pts.csv"
        self.write_csv(path, [[1.0, 2.0], [3.0, 4.0]], header=["lat", "lon"])
        sets = load_points_csv(path)
        assert len(sets) == 2
        assert sets[0].set == Singleton([1.0, 2.0])
        assert sets[0].weight == 1.0

    def test_points_without_header(self, tmp_path):
        path = tmp_path / "pts.csv"
        self.write_csv(path, [[1.0, 2.0]])
        assert len(load_points_csv(path)) == 1

    def test_squares(self, tmp_path):
        path = tmp_path / "pts.csv"
        self.write_csv(path, [[10.0, 20.0]])
        sets = load_points_csv(path, shape="square", half_side=5.0)
        assert sets[0].set == AxisBox([5.0, 15.0], [15.0, 25.0])

    def test_square_needs_half_side(self, tmp_path):
        path = tmp_path / "pts.csv"
        self.write_csv(path, [[0.0, 0.0]])
        with pytest.raises(ParseError):
            load_points_csv(path, shape="square")

    def test_bad_row_reported_with_number(self, tmp_path):
        path = tmp_path / "pts.csv"
        self.write_csv(path, [[1.0, 2.0], ["x", 4.0]], header=["a", "b"])
        with pytest.raises(ParseError, match="row 3"):
            load_points_csv(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "pts.csv"
        path.write_text("")
        with pytest.raises(ParseError):
            load_points_csv(path)

    def test_bundled_fixtures(self, fixtures_dir):
        a = load_points_csv(fixtures_dir / "group_a.csv")
        b = load_points_csv(fixtures_dir / "group_b.csv")
        assert len(a) == 1097 and len(b) == 120
        assert all(s.set.dim == 2 for s in a)


class TestCliSolve:
    def test_instance_solve_to_file(self, fixtures_dir, tmp_path):
        out = tmp_path / "report.json"
        code = main([
            "solve",
            "--instance", str(fixtures_dir / "line_between_halfplanes.json"),
            "--starts", "5", "--seed", "1",
            "--output", str(out),
        ])
        assert code == EXIT_OK
        doc = json.loads(out.read_text())
        assert np.isclose(doc["final_value"], -2.0, atol=1e-5)
        assert doc["prng"] == "philox" and doc["seed"] == 1

    def test_deterministic_reports(self, fixtures_dir, tmp_path):
        outs = []
        for name in ("a.json", "b.json"):
            out = tmp_path / name
            main([
                "solve",
                "--instance", str(fixtures_dir / "line_between_halfplanes.json"),
                "--starts", "3", "--seed", "9",
                "--output", str(out),
            ])
            outs.append(out.read_text())
        assert outs[0] == outs[1]

    def test_explicit_start_and_trajectory(self, fixtures_dir, tmp_path):
        out = tmp_path / "report.json"
        traj = tmp_path / "traj.csv"
        code = main([
            "solve",
            "--instance", str(fixtures_dir / "line_between_halfplanes.json"),
            "--x0", "3,0.5",
            "--trajectory", str(traj),
            "--output", str(out),
        ])
        assert code == EXIT_OK
        with open(traj, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["k", "x_1", "x_2", "f", "step_norm"]
        assert [float(c) for c in rows[1][:3]] == [0.0, 3.0, 0.5]
        final = json.loads(out.read_text())
        assert np.isclose(float(rows[-1][3]), final["final_value"], atol=1e-9)

    def test_csv_group_solve(self, fixtures_dir, tmp_path):
        out = tmp_path / "report.json"
        code = main([
            "solve",
            "--attractions-csv", str(fixtures_dir / "group_a.csv"),
            "--repulsions-csv", str(fixtures_dir / "group_b.csv"),
            "--constraint-ball", "30,-160,30",
            "--seed", "0",
            "--output", str(out),
        ])
        assert code == EXIT_OK
        doc = json.loads(out.read_text())
        assert len(doc["final_x"]) == 2

    def test_missing_input_is_validation_error(self, capsys):
        assert main(["solve"]) == EXIT_VALIDATION
        assert "error:" in capsys.readouterr().err

    def test_infeasible_start_is_solver_error(self, fixtures_dir, capsys):
        code = main([
            "solve",
            "--instance", str(fixtures_dir / "line_between_halfplanes.json"),
            "--x0", "50,50",
        ])
        assert code == EXIT_SOLVER


class TestCliExistence:
    def test_no_attainment_fixture(self, fixtures_dir, capsys):
        code = main([
            "existence",
            "--instance", str(fixtures_dir / "independent_singletons.json"),
        ])
        assert code == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        assert doc["verdict"] == "no_solution_infimum_not_attained"
        assert np.isclose(doc["infimum"], -np.sqrt(2.0), atol=1e-12)

    def test_bounded_constraint_fixture(self, fixtures_dir, capsys):
        code = main([
            "existence",
            "--instance", str(fixtures_dir / "line_between_halfplanes.json"),
        ])
        assert code == EXIT_OK
        assert json.loads(capsys.readouterr().out)["verdict"] == "exists"


class TestCliClassify:
    def test_probe_points(self, fixtures_dir, capsys):
        code = main([
            "classify",
            "--instance", str(fixtures_dir / "segment_vs_point.json"),
            "--point", "2,0",
        ])
        assert code == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        assert doc["stationary"] is True and doc["critical"] is True
        assert np.allclose(doc["witness"], [1.0, 0.0])

    def test_wrong_shape_count(self, fixtures_dir, capsys):
        code = main([
            "classify",
            "--instance", str(fixtures_dir / "line_between_halfplanes.json"),
            "--point", "0,0",
        ])
        assert code == EXIT_VALIDATION


class TestCliOracle:
    def test_grid_agrees_with_solver(self, fixtures_dir, capsys):
        code = main([
            "oracle",
            "--instance", str(fixtures_dir / "line_between_halfplanes.json"),
            "--grid=-10..10@201",
        ])
        assert code == EXIT_OK
        doc = json.loads(capsys.readouterr().out)
        assert np.isclose(doc["best_value"], -2.0, atol=doc["spacing"])
        assert doc["evaluations"] == 201**2

    def test_bad_grid_spec(self, fixtures_dir, capsys):
        code = main([
            "oracle",
            "--instance", str(fixtures_dir / "line_between_halfplanes.json"),
            "--grid", "banana",
        ])
        assert code == EXIT_VALIDATION


class TestCliGen:
    def test_deterministic_and_loadable(self, tmp_path):
        d1 = tmp_path / "one"
        d2 = tmp_path / "two"
        d1.mkdir(); d2.mkdir()
        for d in (d1, d2):
            assert main([
                "gen", "--seed", "5", "--out-dir", str(d),
                "--group-a", "40", "--group-b", "10",
            ]) == EXIT_OK
        assert (d1 / "group_a.csv").read_text() == (d2 / "group_a.csv").read_text()
        assert (d1 / "group_b.csv").read_text() == (d2 / "group_b.csv").read_text()
        assert len(load_points_csv(d1 / "group_a.csv")) == 40
        assert len(load_points_csv(d1 / "group_b.csv")) == 10
