import json
import subprocess
import sys

import pytest

from uhecke import cli


def run(capsys, *argv):
    status = cli.main(list(argv))
    out, err = capsys.readouterr()
    return status, (json.loads(out) if out.strip() else None), err


def test_lfactor_example(capsys):
    status, out, _ = run(capsys, "lfactor", "--r", "1", "--eps", "-", "--sigma", "1/2")
    assert status == 0
    assert out["result"] == "1/(1 - q^-1 X^2)"
    assert out["sigma"] == ["q"]


def test_epsilon_example(capsys):
    status, out, _ = run(capsys, "epsilon", "--r", "3", "--eps", "-", "--c", "0", "--sigma", "1/2,0,1")
    assert status == 0 and out["result"] == "-q X^2"


def test_negative_sigma_tokens(capsys):
    status, out, _ = run(capsys, "classify", "--eps", "-", "--sigma", "-1/2,0")
    assert status == 0 and out["result"] == "almost_unramified"


def test_hecke_mul(capsys):
    status, out, _ = run(capsys, "hecke-mul", "--r", "1", "--u", "[-1]", "--v", "[-1]")
    assert out["result"] == "q T[1] + (-1 + q) T[-1]"


def test_eigenvector(capsys):
    _, out, _ = run(capsys, "eigenvector", "--r", "1", "--eps", "-")
    assert out["result"] == "T[1] - q^-1 T[-1]"


def test_ideal_member_false_is_not_an_error(capsys):
    tensor = json.dumps([{"left": "T1 + T1^-1", "right": "1"}])
    status, out, _ = run(capsys, "ideal-member", "--r", "1", "--d", "1", "--eps", "+", "--tensor", tensor)
    assert status == 0 and out["result"] is False


@pytest.mark.parametrize("argv,flag", [
    (["lfactor", "--r", "2", "--eps", "-", "--sigma", "1/2"], "--sigma"),
    (["lfactor", "--r", "9", "--eps", "-", "--sigma", "1/2"], "--r"),
    (["epsilon", "--r", "1", "--eps", "-", "--sigma", "0"], "--sigma"),
    (["weil-verify", "--p", "7"], "--p"),
    (["verify"], "--suite"),
    (["verify", "--suite", "hecke-core", "--rmax", "0"], "--rmax"),
])
def test_usage_errors_name_the_flag(capsys, argv, flag):
    status, _, err = run(capsys, *argv)
    assert status == 2
    assert json.loads(err)["flag"] == flag


def test_argparse_error_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["lfactor", "--eps", "x"])
    assert exc.value.code == 2


def test_max_rank_env(monkeypatch, capsys):
    monkeypatch.setenv("UHECKE_MAX_R", "2")
    status, _, err = run(capsys, "gk", "--r", "3", "--eps", "-")
    assert status == 2 and json.loads(err)["flag"] == "--r"


def test_failing_check_exits_1(monkeypatch, capsys):
    def broken(rmax, seed, **_):
        rep = cli.Report("intertwining", {})
        rep.add("always-false", "test", 1, 2)
        return rep
    monkeypatch.setitem(cli.SUITE_FUNCS, "intertwining", broken)
    status, out, _ = run(capsys, "verify", "--suite", "intertwining")
    assert status == 1
    assert out["summary"] == {"total": 1, "passed": 0, "failed": 1}


def test_zeta_suite_lists_display_note(capsys):
    status, out, _ = run(capsys, "verify", "--suite", "zeta-identities", "--rmax", "3")
    assert status == 0
    assert out["summary"]["failed"] == 0
    assert any("1 - q^-1 X^2" in n for n in out["notes"])
    assert any(c["id"] == "zeta-r1-display-flag" for c in out["checks"])


def test_records_have_required_fields(capsys):
    _, out, _ = run(capsys, "verify", "--suite", "intertwining", "--rmax", "2")
    for c in out["checks"]:
        assert set(c) >= {"id", "paper_ref", "pass", "lhs", "rhs", "notes"}


def test_deterministic_and_json_out(tmp_path, capsys):
    path = tmp_path / "rep.json"
    cli.main(["verify", "--suite", "theta-maps", "--rmax", "2", "--json-out", str(path)])
    first = capsys.readouterr().out
    cli.main(["verify", "--suite", "theta-maps", "--rmax", "2"])
    second = capsys.readouterr().out
    assert first == second
    assert path.read_text() == first


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "uhecke", "lfactor", "--r", "1", "--eps", "-", "--sigma", "1/2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"] == "1/(1 - q^-1 X^2)"
