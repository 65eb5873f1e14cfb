import csv
import io
import json

import pytest

from cyclosplit import __version__
from cyclosplit.cli import main, run
from oracles import minkowski_float


def call(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def envelope(capsys, *argv):
    code, out, err = call(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_phi(capsys):
    env = envelope(capsys, "phi", "--n", "3", "--u", "19", "--v", "18")
    assert env["results"] == {"value": "1027"}
    assert env["schema_version"] == 1 and env["command"] == "phi"
    assert env["inputs"] == {"n": "3", "u": "19", "v": "18", "policy": "regular", "family": "thm1", "index": "0"}
    assert env["timing"] is None and env["version"] == __version__


def test_envelope_keys_are_sorted(capsys):
    code, out, _ = call(capsys, "phi", "--n", "6", "--u", "2", "--v", "1")
    assert code == 0
    assert out == json.dumps(json.loads(out), sort_keys=True, indent=2) + "\n"


def test_symbol_with_and_without_u(capsys):
    base = ["symbol", "--p", "3", "--q", "13", "--u", "19", "--v", "18", "--elem", "(1+xi*zeta)"]
    assert envelope(capsys, *base)["results"]["mu"] == [1]
    res = envelope(capsys, *base, "--times-u")["results"]
    assert res["mu"] == [0]
    assert res["word"] == "(19)*(1 + xi*zeta)"


def test_order_and_regular(capsys):
    res = envelope(capsys, "order", "--q", "13", "--u", "19", "--v", "18", "--p", "3")["results"]
    assert res == {"a": "3", "n": 3, "d": 1, "r": 1}
    res = envelope(capsys, "regular", "--p", "37")["results"]
    assert res["regular"] is False and res["irregular_indices"] == [32]
    assert float(res["minkowski_bound"]) == pytest.approx(minkowski_float(37), rel=1e-12)


def test_context_free_and_split(capsys):
    res = envelope(capsys, "context", "--p", "5", "--q", "11", "--n", "5")["results"]
    assert res["xi_bar"] == "4" and res["u"] is None
    res = envelope(capsys, "split", "--p", "3", "--q", "13", "--u", "19", "--v", "18")["results"]
    assert res["totally_split"] is True and res["family"] == "Thm1"


def test_scan_p3(capsys):
    res = envelope(capsys, "scan-p3", "--smax", "5", "--qmax", "200")["results"]
    assert res["all_split"] is True and res["pairs"] == 52


def test_verify_and_lemma(capsys):
    res = envelope(capsys, "verify", "--case", "C2", "--p", "3", "--u", "19", "--v", "18", "--q", "13")["results"]
    assert res["overall"] is False and res["conditions"][0]["observed"] == "4"
    res = envelope(capsys, "lemma", "--variant", "eps", "--p", "5", "--x", "-49", "--y", "81", "--q", "401")["results"]
    assert res["overall"] is True


def test_witness_and_rank(capsys):
    res = envelope(capsys, "witness", "--kind", "cj3", "--p", "5", "--qmax", "100")["results"]
    assert res["found"] is True and res["q"] == "11"
    res = envelope(capsys, "rank", "--p", "5", "--u", "1", "--v", "2", "--qmax", "200", "--family", "cj3")["results"]
    assert res["profile"] == sorted(res["profile"]) and res["delta_lower_bound"] <= 2


def test_csv_output(capsys):
    code, out, _ = call(capsys, "split", "--p", "5", "--q", "11", "--u", "1", "--v", "2", "--family", "cj3", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows == [{"Q": "0", "generator": "0", "mu": "1"}, {"Q": "0", "generator": "1", "mu": "3"}]
    code, out, _ = call(capsys, "phi", "--n", "3", "--u", "19", "--v", "18", "--format", "csv")
    assert out == "key,value\nvalue,1027\n"


@pytest.mark.parametrize(
    "argv,code",
    [
        (["phi", "--n", "3"], 2),
        (["bogus"], 2),
        (["symbol", "--p", "3", "--q", "13", "--u", "19", "--v", "18", "--elem", "1 +"], 2),
        (["symbol", "--p", "3", "--q", "13", "--u", "19", "--v", "18", "--elem", "1 + xi/zeta"], 2),
        (["phi", "--n", "3", "--u", "1", "--v", "2", "--jobs", "0"], 2),
        (["verify", "--case", "C2", "--p", "3", "--u", "19", "--v", "18", "--q", "7"], 3),
        (["context", "--p", "3", "--q", "3", "--u", "19", "--v", "18"], 3),
        (["context", "--p", "9", "--q", "13", "--u", "19", "--v", "18"], 3),
        (["context", "--p", "5", "--q", "11", "--n", "3"], 3),
        (["witness", "--kind", "cj3", "--p", "37", "--qmax", "50"], 3),
        (["verify", "--case", "C4", "--p", "5", "--u", "1", "--v", "6", "--q", "101", "--policy", "table:/nonexistent"], 3),
        (["regular", "--p", "103"], 3),
    ],
)
def test_exit_codes(capsys, argv, code):
    got, out, err = call(capsys, *argv)
    assert got == code
    assert out == "" and err


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "bounds.cfg"
    cfg.write_text("# bounds\np_max = 7\nq_max=120\n")
    assert call(capsys, "regular", "--p", "11", "--config", str(cfg))[0] == 3
    env = envelope(capsys, "witness", "--kind", "cj3", "--p", "7", "--config", str(cfg))
    assert "config" not in env["inputs"]
    cfg.write_text("q_max = lots\n")
    assert call(capsys, "regular", "--p", "7", "--config", str(cfg))[0] == 2
    cfg.write_text("colour = blue\n")
    assert call(capsys, "regular", "--p", "7", "--config", str(cfg))[0] == 2


def test_timing_is_opt_in(capsys):
    env = envelope(capsys, "phi", "--n", "3", "--u", "19", "--v", "18", "--timing")
    assert env["timing"]["seconds"] >= 0


def test_run_alias(capsys):
    assert run(["phi", "--n", "1", "--u", "5", "--v", "2"]) == 0
    assert json.loads(capsys.readouterr().out)["results"]["value"] == "3"
