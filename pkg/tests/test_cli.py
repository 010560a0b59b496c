import json
import subprocess
import sys
from pathlib import Path

import pytest

from homlie import algebrafile
from homlie.algebrafile import fixture_path, load
from homlie.cli import main
from homlie.deform import expand_all
from homlie.paperverify import J1, Sl2Setup

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def fx(name):
    return str(fixture_path(name))


QUADRATIC = {
    "dim": 3, "basis": ["x1", "x2", "x3"], "params": ["u", "v"], "truncation": 3,
    "brackets": [
        {"order": 0, "entries": [[1, 2, ["0", "2", "0"]], [1, 3, ["0", "0", "-2"]], [2, 3, ["1", "0", "0"]]]},
        {"order": 1, "entries": [[1, 2, ["0", "0", "u"]], [2, 3, ["0", "v", "0"]]]},
    ],
    "maps": [],
}


class TestCheck:
    def test_sl2(self, capsys):
        code, out, _ = run(capsys, "check", fx("sl2.json"))
        assert code == 0 and out.startswith("holds")

    def test_generic_alpha_witness(self, capsys):
        code, out, _ = run(capsys, "check", fx("sl2_with_generic_alpha.json"))
        assert code == 1
        assert "witness: 2*a22 - 2*a33" in out

    def test_json(self, capsys):
        code, out, _ = run(capsys, "check", fx("sl2_with_generic_alpha.json"), "--json")
        doc = json.loads(out)
        assert code == 1 and doc["witness"] == "2*a22 - 2*a33" and doc["triple"] == [1, 2, 3]

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "check", str(tmp_path / "missing.json"))
        assert code == 2 and "no such file" in err

    def test_bare_fixture_name(self, capsys, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        assert run(capsys, "check", "sl2.json")[0] == 0

    def test_deformed_counterexample(self, capsys):
        # order 1 vanishes, the Jacobi identity of the bracket does not
        assert run(capsys, "check", fx("sl2_counterexample.json"), "--deformed", "--order", "1")[0] == 0

    def test_deformed_sl2_fails_with_j1(self, capsys):
        code, out, _ = run(capsys, "check", fx("sl2_paper_deformation.json"), "--deformed")
        assert code == 1
        assert f"witness: {J1[0]}" in out

    def test_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["check"])
        assert exc.value.code == 2
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2


class TestDerive:
    def test_sl2_deformation_order_one(self, capsys):
        code, out, _ = run(capsys, "derive", fx("sl2_paper_deformation.json"), "--order", "1")
        assert code == 0
        for line in J1:
            assert f"  {line} = 0" in out
        assert "solved (linear constraints):" in out
        assert "free:" in out

    def test_theorem_family(self, capsys):
        code, out, _ = run(capsys, "derive", fx("sl2_paper_deformation.json"), "--twist-hom-lie", "--json")
        doc = json.loads(out)
        assert code == 0 and len(doc["linear_solution"]["free"]) == 12

    def test_sl2_no_constraints(self, capsys):
        code, out, _ = run(capsys, "derive", fx("sl2.json"), "--order", "0")
        assert code == 0 and out == "no constraints\n"

    def test_quadratic_listed_as_nonlinear(self, capsys, tmp_path):
        path = tmp_path / "quad.json"
        path.write_text(json.dumps(QUADRATIC))
        code, out, _ = run(capsys, "derive", str(path), "--order", "2")
        assert code == 0
        assert out.split("nonlinear (not solved):\n")[1] == "  u*v = 0\n"
        # oracle: the degree-2 coordinates of the direct expansion
        reports = expand_all(load(path).to_deformation(), "hom_jacobi", 2)
        direct = {str(c) for r in reports for m in range(3) for c in r.order(m).coords if c.degree() == 2}
        assert direct == {"u*v"}


class TestUntwist:
    def test_sl2_deformation(self, capsys, tmp_path):
        out_path = tmp_path / "u.json"
        code, out, _ = run(capsys, "untwist", fx("sl2_paper_deformation.json"), "--out", str(out_path))
        assert code == 0 and out == f"wrote {out_path}\n"
        d = load(out_path).to_deformation()
        setup = Sl2Setup.build()
        b0, b1 = setup.deformation().bracket_orders
        assert d.bracket_orders == (b0, b1 - setup.alpha1 @ b0)
        assert len(d.map_orders) == 1 and d.map_orders[0].is_identity()

    @pytest.mark.parametrize("name", ["sl2_paper_deformation.json", "sl2_counterexample.json", "sl2.json"])
    def test_retwist_round_trip(self, capsys, name):
        code, out, _ = run(capsys, "untwist", fx(name), "--retwist")
        assert code == 0
        assert out == algebrafile.dumps(load(fixture_path(name)))

    def test_not_unipotent(self, capsys):
        code, _, err = run(capsys, "untwist", fx("sl2_with_generic_alpha.json"))
        assert code == 2 and "alpha_0 must be the identity" in err


class TestVerifyAll:
    def test_passes(self, capsys):
        code, out, _ = run(capsys, "verify-paper")
        assert code == 0 and out.endswith("6/6 scenarios passed\n")

    def test_golden(self, capsys, tmp_path):
        code, out, _ = run(capsys, "verify-paper", "--json", str(tmp_path / "r.json"))
        assert out == (GOLDEN / "verify_paper.txt").read_text()
        assert (tmp_path / "r.json").read_text() == (GOLDEN / "verify_paper.json").read_text()

    def test_byte_stable(self, capsys, tmp_path):
        run(capsys, "verify-paper", "--json", str(tmp_path / "a.json"))
        run(capsys, "verify-paper", "--json", str(tmp_path / "b.json"))
        assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()

    def test_json_steps(self, capsys, tmp_path):
        run(capsys, "verify-paper", "--json", str(tmp_path / "r.json"))
        doc = json.loads((tmp_path / "r.json").read_text())
        assert doc["overall"] == "pass" and len(doc["scenarios"]) == 6
        assert all(s["verdict"] == "pass" for sc in doc["scenarios"] for s in sc["steps"])

    def test_fault_injection(self, capsys):
        code, out, _ = run(capsys, "verify-paper", "--inject-fault")
        assert code == 1
        assert out.splitlines()[-1].startswith("first failing step: constraint_H: ")


class TestAudit:
    def test_theorem_family(self, capsys):
        code, out, _ = run(capsys, "audit", fx("sl2_paper_deformation.json"), "--family", "theorem",
                           "--samples", "1000", "--seed", "42")
        assert code == 0 and out.startswith("1000/1000 samples exactly zero")

    def test_counterexample(self, capsys):
        code, out, _ = run(capsys, "audit", fx("sl2_counterexample.json"), "--samples", "10")
        assert code == 1
        assert "first failure: sample 0: order 1, triple (1, 2, 3), x1 = -2" in out

    def test_zero_samples(self, capsys):
        code, _, err = run(capsys, "audit", fx("sl2.json"), "--samples", "0")
        assert code == 2 and "--samples" in err

    def test_env_seed(self, capsys, monkeypatch):
        args = ("audit", fx("sl2_paper_deformation.json"), "--family", "deformation", "--samples", "5", "--json")
        monkeypatch.setenv("HLD_SEED", "9")
        from_env = run(capsys, *args)
        explicit = run(capsys, *args, "--seed", "9")
        other = run(capsys, *args, "--seed", "10")
        assert from_env == explicit
        assert from_env[1] != other[1]

    def test_bad_env_seed(self, capsys, monkeypatch):
        monkeypatch.setenv("HLD_SEED", "abc")
        assert run(capsys, "audit", fx("sl2.json"))[0] == 2

    def test_deformation_family_hom_jacobi(self, capsys):
        code, _, _ = run(capsys, "audit", fx("sl2_paper_deformation.json"), "--family", "deformation",
                         "--identity", "hom-jacobi", "--samples", "50")
        assert code == 0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "homlie", "check", fx("sl2.json")],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("holds")
