"""End-to-end tests of the command line: file formats, output shapes, the
CSV report, and the exit-code contract (0 pass, 1 parse, 2 domain, 3 usage)."""

import json

import numpy as np
import pytest

from wstargeo.cli import main
from wstargeo.io import REPORT_HEADER

E12 = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)


def write_algebra(path, blocks, matrices):
    data = {
        "blocks": list(blocks),
        "matrices": {
            name: {
                "rows": m.shape[0],
                "cols": m.shape[1],
                "re": [float(x) for x in m.real.ravel()],
                "im": [float(x) for x in m.imag.ravel()],
            }
            for name, m in matrices.items()
        },
    }
    path.write_text(json.dumps(data))
    return str(path)


def write_vectors(path, vectors):
    data = {
        "vectors": [
            {
                "re": [float(x) for x in np.asarray(v).real],
                "im": [float(x) for x in np.asarray(v).imag],
            }
            for v in vectors
        ]
    }
    path.write_text(json.dumps(data))
    return str(path)


class TestPolar:
    def test_oracle(self, tmp_path, capsys):
        f = write_algebra(tmp_path / "a.json", [2], {"a": E12})
        assert main(["polar", f]) == 0
        out = capsys.readouterr().out
        assert "u:" in out and "h:" in out
        assert "reconstruction=0.000000e+00" in out
        assert "isometry=0.000000e+00" in out

    def test_named_matrix(self, tmp_path, capsys):
        f = write_algebra(
            tmp_path / "a.json", [2], {"a": E12, "b": np.eye(2, dtype=complex)}
        )
        assert main(["polar", f, "--name", "b"]) == 0
        assert main(["polar", f]) == 3  # two matrices, none picked
        assert main(["polar", f, "--name", "zzz"]) == 3
        err = capsys.readouterr().err
        assert "usage error" in err

    def test_missing_file(self, tmp_path, capsys):
        assert main(["polar", str(tmp_path / "nope.json")]) == 1
        assert "file not found" in capsys.readouterr().err

    def test_bad_json(self, tmp_path, capsys):
        p = tmp_path / "bad.json"
        p.write_text('{"blocks": [2,\n  "matrices": }')
        assert main(["polar", str(p)]) == 1
        err = capsys.readouterr().err
        assert "line" in err and "column" in err


class TestVerify:
    def test_single_suite(self, tmp_path, capsys):
        report = tmp_path / "out.csv"
        code = main(
            ["verify", "kks", "--algebra", "2", "--trials", "10", "--seed", "1",
             "--report", str(report)]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "verify: 2 rows, 2 passed, 0 failed" in out
        assert "kks/identity" in out and "kks/calibration" in out
        lines = report.read_text().strip().splitlines()
        assert lines[0] == REPORT_HEADER
        assert len(lines) == 3
        fields = lines[1].split(",")
        assert fields[0] == "kks/identity"
        assert fields[1] == "10" and fields[2] == "1"
        assert fields[5] == "pass"
        float(fields[3])
        float(fields[4])
        float(fields[6])

    def test_forced_failure_exit_code(self, tmp_path, capsys):
        code = main(["verify", "kks", "--algebra", "2", "--trials", "5",
                     "--tol", "1e-300"])
        assert code == 2
        out = capsys.readouterr().out
        assert "FAIL" in out

    def test_unknown_suite(self, capsys):
        assert main(["verify", "no-such-suite", "--trials", "2"]) == 3
        assert "usage error" in capsys.readouterr().err

    def test_invalid_trials(self, capsys):
        assert main(["verify", "kks", "--trials", "0"]) == 2
        assert "domain error" in capsys.readouterr().err

    def test_bad_algebra_flag(self, capsys):
        assert main(["verify", "kks", "--algebra", "2,x", "--trials", "2"]) == 3
        assert main(["verify", "kks", "--algebra", "0", "--trials", "2"]) == 3
        capsys.readouterr()

    def test_all_suites(self, capsys):
        code = main(["verify", "all", "--algebra", "2", "--trials", "5"])
        assert code == 0
        out = capsys.readouterr().out
        last = out.strip().splitlines()[-1]
        assert last.startswith("verify: ")
        assert "0 failed" in last

    def test_report_deterministic_modulo_wall_time(self, tmp_path, capsys):
        r1, r2 = tmp_path / "r1.csv", tmp_path / "r2.csv"
        assert main(["verify", "charts", "--algebra", "2", "--trials", "8",
                     "--report", str(r1)]) == 0
        assert main(["verify", "charts", "--algebra", "2", "--trials", "8",
                     "--report", str(r2)]) == 0
        capsys.readouterr()
        strip = lambda text: [  # noqa: E731
            ",".join(line.split(",")[:-1]) for line in text.strip().splitlines()
        ]
        assert strip(r1.read_text()) == strip(r2.read_text())

    def test_repair_flag(self, capsys):
        code = main(["verify", "groupoid-axioms", "--algebra", "2",
                     "--trials", "5", "--repair"])
        assert code == 0
        capsys.readouterr()


class TestAmplitude:
    def test_oracle(self, tmp_path, capsys):
        s = 1.0 / np.sqrt(2.0)
        f = write_vectors(
            tmp_path / "v.json",
            [np.array([1.0, 0.0]), np.array([s, s]), np.array([0.0, 1.0])],
        )
        assert main(["amplitude", f]) == 0
        out = capsys.readouterr().out
        assert "steps: 2" in out
        assert "amplitude: +0.500000000000+0.000000000000j" in out
        assert "probability: 0.250000000000" in out

    def test_non_unit_vector(self, tmp_path, capsys):
        f = write_vectors(
            tmp_path / "v.json", [np.array([1.0, 0.0]), np.array([0.0, 2.0])]
        )
        assert main(["amplitude", f]) == 2
        assert "domain error" in capsys.readouterr().err

    def test_short_path(self, tmp_path, capsys):
        f = write_vectors(tmp_path / "v.json", [np.array([1.0, 0.0])])
        assert main(["amplitude", f]) == 2
        capsys.readouterr()

    def test_malformed_vectors(self, tmp_path, capsys):
        p = tmp_path / "v.json"
        p.write_text('{"vectors": [{"im": [1.0]}]}')
        assert main(["amplitude", str(p)]) == 1
        capsys.readouterr()


class TestOrbit:
    def test_oracle(self, tmp_path, capsys):
        f = write_algebra(
            tmp_path / "d.json", [2], {"d": np.diag([0.0, 3.0]).astype(complex)}
        )
        assert main(["orbit", f]) == 0
        out = capsys.readouterr().out
        assert "block 0 (2x2): spectrum [3.000000e+00] support rank 1" in out
        assert "stabilizer dimension: 1" in out

    def test_two_blocks(self, tmp_path, capsys):
        d = np.zeros((5, 5), dtype=complex)
        d[0, 0] = d[1, 1] = 1.0
        d[2, 2] = d[3, 3] = d[4, 4] = 2.0
        f = write_algebra(tmp_path / "d.json", [2, 3], {"d": d})
        assert main(["orbit", f, "--algebra", "2,3"]) == 0
        out = capsys.readouterr().out
        assert "block 0 (2x2)" in out and "block 1 (3x3)" in out
        assert "stabilizer dimension: 13" in out  # 2^2 + 3^2

    def test_algebra_mismatch(self, tmp_path, capsys):
        f = write_algebra(tmp_path / "d.json", [2], {"d": np.eye(2, dtype=complex)})
        assert main(["orbit", f, "--algebra", "3"]) == 3
        capsys.readouterr()

    def test_non_positive_density(self, tmp_path, capsys):
        f = write_algebra(
            tmp_path / "d.json", [2], {"d": np.diag([-1.0, 1.0]).astype(complex)}
        )
        assert main(["orbit", f]) == 2
        assert "domain error" in capsys.readouterr().err

    def test_off_block_density(self, tmp_path, capsys):
        d = np.zeros((5, 5), dtype=complex)
        d[0, 3] = d[3, 0] = 1.0  # couples the two blocks
        d[0, 0] = d[3, 3] = 1.0
        f = write_algebra(tmp_path / "d.json", [2, 3], {"d": d})
        assert main(["orbit", f]) == 2
        capsys.readouterr()


class TestTopLevel:
    def test_no_subcommand(self, capsys):
        assert main([]) == 3
        assert "subcommand" in capsys.readouterr().err

    def test_unknown_flag(self, capsys):
        assert main(["polar", "x.json", "--bogus"]) == 3
        capsys.readouterr()

    def test_wrong_shape_matrix(self, tmp_path, capsys):
        p = tmp_path / "a.json"
        p.write_text(json.dumps({
            "blocks": [2],
            "matrices": {"a": {"rows": 3, "cols": 3, "re": [0.0] * 9}},
        }))
        assert main(["polar", str(p)]) == 1
        assert "dimension" in capsys.readouterr().err
