import os

import numpy as np
import pytest

from ccopkit.cli import LoadError, load_problem_file, main

DATA = os.path.join(os.path.dirname(__file__), "data")


def path(name):
    return os.path.join(DATA, name)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out


def test_load_problem_file_full_round_trip():
    pf = load_problem_file(path("well_ones.prob"))
    assert pf.problem.n == 2 and pf.problem.s == 1
    assert np.allclose(pf.c, [0.3, 0.7]) and pf.eps == 0.5
    assert not pf.override
    assert set(pf.points) == {"origin", "e1", "bad", "lifted_origin", "lifted_e1"}
    assert pf.points["lifted_origin"].size == 4


def test_load_problem_file_tolerance_overrides():
    pf = load_problem_file(path("constrained.prob"))
    assert pf.tol_overrides == {"tol_act": 1e-8}
    assert len(pf.problem.g) == 1


def test_load_rejects_malformed_input(tmp_path):
    bad = tmp_path / "bad.prob"
    bad.write_text("[problem]\nn = 2\n")  # missing s and f
    with pytest.raises(LoadError):
        load_problem_file(str(bad))
    bad.write_text("n = 2\n")
    with pytest.raises(LoadError, match="outside any section"):
        load_problem_file(str(bad))
    bad.write_text("[problem]\nn = 2\ns = 1\nf = \"x9\"\n")
    with pytest.raises(LoadError, match="out of range"):
        load_problem_file(str(bad))
    bad.write_text("[problem]\nn = 2\ns = 1\nf = \"x1\"\n[points]\np = [1, 2, 3]\n")
    with pytest.raises(LoadError, match="length 3"):
        load_problem_file(str(bad))


def test_certify_exit_codes(capsys):
    code, _ = run(capsys, "certify", path("well_ones.prob"), "e1", "--side", "m")
    assert code == 0
    code, _ = run(capsys, "certify", path("well_e1.prob"), "origin", "--side", "m")
    assert code == 1
    code, _ = run(capsys, "certify", path("well_ones.prob"), "bad", "--side", "m")
    assert code == 2
    code = main(["certify", path("well_ones.prob"), "missing", "--side", "m"])
    capsys.readouterr()
    assert code == 3


def test_certify_t_side_regression(capsys):
    code, out = run(
        capsys, "certify", path("well_e1.prob"), "lifted_origin", "--side", "t",
        "--format", "machine",
    )
    assert code == 1
    assert 'certificate.reason = "NDT5"' in out
    assert "certificate.ndt.4 = true" in out
    assert "certificate.ndt.5 = false" in out


def test_certify_t_side_clean_point(capsys):
    code, out = run(
        capsys, "certify", path("well_ones.prob"), "lifted_origin", "--side", "t",
        "--format", "machine",
    )
    assert code == 0
    assert 'verdict = "nondegenerate"' in out
    assert "certificate.index.t = 1" in out


def test_certify_t_requires_regularization_section(tmp_path, capsys):
    plain = tmp_path / "plain.prob"
    plain.write_text('[problem]\nn = 2\ns = 1\nf = "x1^2 + x2^2"\n[points]\np = [0, 0, 0, 1]\n')
    code = main(["certify", str(plain), "p", "--side", "t"])
    capsys.readouterr()
    assert code == 3


def test_lift_and_project_commands(capsys):
    code, out = run(capsys, "lift", path("well_ones.prob"), "origin", "--format", "machine")
    assert code == 0
    assert "expected_count = 1" in out
    assert "companion.0.y = [0.0, 1.0]" in out
    code, _ = run(capsys, "lift", path("well_ones.prob"), "bad")
    assert code == 2
    code, out = run(capsys, "project", path("well_ones.prob"), "lifted_e1", "--format", "machine")
    assert code == 0
    assert "projected.index.m = 0" in out


def test_census_command_and_verdict(capsys):
    code, out = run(capsys, "census", path("well_ones.prob"), "--format", "machine")
    assert code == 0
    assert "m.by_index.0 = 2" in out
    assert "m.by_index.1 = 1" in out
    assert "t.by_index.1 = 1" in out
    assert 'verdict = "ok"' in out


def test_census_quadratic_rejects_transcendental(tmp_path, capsys):
    cos_file = tmp_path / "cos.prob"
    cos_file.write_text('[problem]\nn = 2\ns = 1\nf = "(x1-1)^2 + cos(x2)"\n')
    code = main(["census", str(cos_file), "--side", "m", "--method", "quadratic"])
    capsys.readouterr()
    assert code == 4
    code, out = run(capsys, "census", str(cos_file), "--side", "m", "--method", "newton")
    assert code == 0


def test_census_override_fixture(capsys):
    code, out = run(
        capsys, "census", path("well_ones_relaxed.prob"), "--side", "t", "--format", "machine"
    )
    assert code == 0
    assert "complete = false" in out
    assert out.count('.reason = "NDT') >= 3


def test_check_licq_both_sides(capsys):
    code, out = run(capsys, "check-licq", path("well_ones.prob"), "origin")
    assert code == 0 and "holds = true" in out
    code, out = run(capsys, "check-licq", path("well_ones.prob"), "lifted_origin")
    assert code == 0 and "holds = true" in out


def test_verify_command_green(capsys):
    code, out = run(capsys, "verify", path("well_ones.prob"), "--format", "machine")
    assert code == 0
    assert "failures = 0" in out


def test_reports_are_byte_identical_across_runs(capsys):
    args = ("census", path("well_ones.prob"), "--format", "machine")
    _, first = run(capsys, *args)
    _, second = run(capsys, *args)
    assert first == second
    args = ("certify", path("well_e1.prob"), "lifted_origin", "--side", "t")
    _, first = run(capsys, *args)
    _, second = run(capsys, *args)
    assert first == second


def test_machine_format_is_flat_key_value(capsys):
    _, out = run(
        capsys, "certify", path("well_ones.prob"), "e1", "--side", "m", "--format", "machine"
    )
    lines = [line for line in out.strip().splitlines()]
    assert all(" = " in line for line in lines)
    assert lines[0] == 'schema = "ccopkit-report/1"'
    assert "tolerances.tol_feas = 1e-09" in lines


def test_tolerance_flag_overrides_file(capsys):
    _, out = run(
        capsys, "certify", path("constrained.prob"), "origin", "--side", "m",
        "--tol-act", "1e-6", "--format", "machine",
    )
    assert "tolerances.tol_act = 1e-06" in out
