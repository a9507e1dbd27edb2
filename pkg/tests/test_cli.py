import json

import pytest

from fiprimes.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_xi_pinned(capsys):
    code, out, _ = run_cli(capsys, "xi", "--q", "4", "--a", "3")
    assert code == 0
    assert out.splitlines()[0] == "0"


def test_xi_rational_output(capsys):
    code, out, _ = run_cli(capsys, "xi", "--q", "3", "--a", "2")
    assert code == 0
    assert out.splitlines()[0] == "4/3"


def test_xi_bruteforce_agrees(capsys):
    _, out_fast, _ = run_cli(capsys, "xi", "--q", "45", "--a", "7", "--json")
    _, out_brute, _ = run_cli(capsys, "xi", "--q", "45", "--a", "7", "--brute-force", "--json")
    assert json.loads(out_fast)["xi"] == json.loads(out_brute)["xi"]


def test_constants_json_roundtrip(capsys):
    code, out, _ = run_cli(capsys, "constants", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["schema"] == "fi/1"
    assert payload["alpha_plus"] <= 2.9739
    assert json.loads(json.dumps(payload)) == payload  # idempotent round trip


def test_constants_band_violation_exit_code(capsys):
    code, _, err = run_cli(capsys, "constants", "--xi1", "0.16")
    assert code == 2
    assert "assertion" in err


def test_verify_ternary(capsys):
    code, out, _ = run_cli(capsys, "verify-ternary", "--limit", "100", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["exceptions"] == [3, 7, 11, 19, 27, 35, 43]
    rows = {r["x"]: r for r in payload["rows"]}
    assert rows[15] == {"x": 15, "p1": 5, "p2": 5, "p3": 5}
    assert rows[19] == {"x": 19, "status": "exception"}


def test_verify_ternary_csv(capsys):
    code, out, _ = run_cli(capsys, "verify-ternary", "--limit", "20", "--csv")
    lines = out.splitlines()
    assert lines[0] == "x,p1,p2,p3"
    assert "15,5,5,5" in lines
    assert "19,,,exception" in lines


def test_enumerate_with_cache(tmp_path, capsys):
    code, out, _ = run_cli(
        capsys, "enumerate", "--limit", "100", "--json", "--cache-dir", str(tmp_path)
    )
    assert code == 0
    assert json.loads(out)["primes"] == [5, 13, 29, 41, 53, 61, 73, 89]
    assert (tmp_path / "fi-primes.txt").exists()


def test_threads_do_not_change_output(capsys):
    _, out1, _ = run_cli(capsys, "rough", "--limit", "10000", "--z", "100", "--json", "--threads", "1")
    _, out4, _ = run_cli(capsys, "rough", "--limit", "10000", "--z", "100", "--json", "--threads", "4")
    assert out1 == out4


def test_threads_validation(capsys):
    code, _, err = run_cli(capsys, "rough", "--limit", "100", "--z", "10", "--threads", "0")
    assert code == 1


def test_validation_error_exit_code(capsys):
    code, _, err = run_cli(capsys, "rough", "--limit", "10", "--z", "100")
    assert code == 1
    assert "error" in err


def test_buchstab_command(capsys):
    code, out, _ = run_cli(capsys, "buchstab", "--u", "1.5", "--json")
    assert code == 0
    assert json.loads(out)["B"] == pytest.approx(2.0 / 3.0)


def test_lattice_command(capsys):
    code, out, _ = run_cli(
        capsys, "lattice", "--l1", "1,1", "--d1", "6", "--l2", "2,1", "--d2", "10", "--json"
    )
    assert code == 0
    assert json.loads(out)["delta"] == 60


def test_expsum_minsum_json(capsys):
    code, out, _ = run_cli(
        capsys, "expsum", "minsum", "--gamma", "1/2", "--J", "4", "--K", "10", "--json"
    )
    payload = json.loads(out)
    assert payload["value_re"] == pytest.approx(24.0)
    assert payload["bound"] == pytest.approx(34.158883, abs=1e-4)
    assert payload["ratio"] == pytest.approx(24.0 / 34.158883, abs=1e-4)


def test_sieve_command(capsys):
    code, out, _ = run_cli(capsys, "sieve", "--x", "100000", "--n", "35", "--sign", "+", "--json")
    assert code == 0
    payload = json.loads(out)
    assert "theta" in payload and "lambda_plus" in payload


def test_3ap_command(capsys):
    code, out, _ = run_cli(capsys, "3ap", "--limit", "53", "--json")
    assert code == 0
    assert [5, 29, 53] in json.loads(out)["aps"]


def test_lq_command(capsys):
    code, out, _ = run_cli(capsys, "lq", "--x", "100000", "--q", "2.5", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["moment_ratio"] < 10.0


def test_3ap_csv(capsys):
    code, out, _ = run_cli(capsys, "3ap", "--limit", "53", "--csv")
    lines = out.splitlines()
    assert lines[0] == "p,mid,third"
    assert "5,29,53" in lines


def test_expsum_s0_json(capsys):
    code, out, _ = run_cli(capsys, "expsum", "s0", "--gamma", "0", "--N", "9", "--json")
    payload = json.loads(out)
    assert payload["value_re"] == pytest.approx(9.0)
    assert payload["value_im"] == pytest.approx(0.0)


def test_expsum_type2_json(capsys):
    code, out, _ = run_cli(capsys, "expsum", "type2", "--gamma", "0", "--N", "16", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["value_im"] == pytest.approx(0.0, abs=1e-9)


def test_enumerate_csv(capsys):
    code, out, _ = run_cli(capsys, "enumerate", "--limit", "30", "--csv")
    assert out.splitlines() == ["p", "5", "13", "29"]
