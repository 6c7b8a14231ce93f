import csv
import io
import json

import mpmath
import pytest

from regulab import __version__
from regulab.cli import RunConfig, UsageError, main, merge_reports, parse_number
from regulab.suites import DEFAULT_SEED, SUITES, payload


def run(capsys, *argv, environ=None):
    code = main(list(argv), environ or {})
    out, err = capsys.readouterr()
    return code, out, err


# ---------------------------------------------------------------- eval

def test_eval_bloch_wigner(capsys):
    code, out, _ = run(capsys, "eval", "L2", "0.5+0.5i")
    z = mpmath.mpc(0.5, 0.5)
    ref = float(mpmath.im(mpmath.polylog(2, z)) + mpmath.arg(1 - z) * mpmath.log(abs(z)))
    value = json.loads(out)
    assert code == 0 and abs(value["value"] - ref) < 1e-14
    assert value["method"]


def test_eval_beta_kp_vanishes(capsys):
    code, out, _ = run(capsys, "eval", "beta_kp", "1", "4")
    assert code == 0 and json.loads(out)["value"] == "0"


def test_eval_cross_ratio_exact(capsys):
    code, out, _ = run(capsys, "eval", "cross-ratio", "1", "2", "3", "5/2")
    assert code == 0 and json.loads(out)["value"] == "2/3"


def test_eval_infinity(capsys):
    code, out, _ = run(capsys, "eval", "L", "3", "inf")
    assert code == 0 and json.loads(out)["value"] == 0.0


def test_eval_field(capsys):
    code, out, _ = run(capsys, "eval", "field", "-23")
    assert code == 0 and json.loads(out)["value"]["h"] == 3


def test_eval_unknown_function(capsys):
    code, _, err = run(capsys, "eval", "nope", "1")
    assert code == 2 and "unknown function" in err


def test_eval_bad_arity(capsys):
    code, _, err = run(capsys, "eval", "L2", "1", "2")
    assert code == 2 and "argument" in err


def test_eval_domain_error_is_usage(capsys):
    code, _, _ = run(capsys, "eval", "Li", "1", "1")
    assert code == 2


@pytest.mark.parametrize("text, value", [("3/4", "3/4"), ("2", "2"), ("1+2i", 1 + 2j), ("inf", None), ("0.5", "1/2")])
def test_parse_number(text, value):
    got = parse_number(text)
    assert (str(got) if value is not None and not isinstance(value, complex) else got) == value


def test_parse_number_rejects_junk():
    with pytest.raises(UsageError):
        parse_number("abc")


# ---------------------------------------------------------------- verify and exit codes

def test_verify_all_pass(capsys):
    code, out, _ = run(capsys, "verify", "abel5", "--seed", "7", "--tol", "1e-9")
    rep = json.loads(out)
    assert code == 0 and len(rep["records"]) == 100
    assert rep["version"] == __version__ and rep["config"]["seed"] == 7
    assert all(r["anchor"] for r in rep["records"])


def test_verify_beta_identities_exact(capsys):
    code, out, _ = run(capsys, "verify", "beta-identities")
    rep = json.loads(out)
    assert code == 0 and all(r["abs_err"] == 0 for r in rep["records"])


def test_verify_failure_exits_one(capsys):
    code, out, _ = run(capsys, "verify", "abel5", "--budget", "5", "--tol", "1e-30")
    assert code == 1 and not all(r["pass"] for r in json.loads(out)["records"])


def test_record_pass_matches_tolerance(capsys):
    _, out, _ = run(capsys, "verify", "relators", "--budget", "10")
    for r in json.loads(out)["records"]:
        assert r["pass"] == (r["abs_err"] <= r["tolerance"])


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "nope"],
        ["verify", "abel5", "--tol", "-1"],
        ["verify", "abel5", "--seed", "-3"],
        ["verify", "abel5", "--budget", "0"],
        ["frobnicate"],
        [],
    ],
)
def test_usage_errors_exit_two(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_help_exits_zero(capsys):
    assert run(capsys, "--help")[0] == 0


def test_suite_names():
    assert set(SUITES) == {
        "abel5", "trilog7", "beta-identities", "chain-map", "grassmann-n2", "grassmann-n3",
        "psi", "relators", "residues", "coproduct", "zeta-leibniz", "class-number",
    }


def test_default_seed():
    assert RunConfig("verify abel5").seed == DEFAULT_SEED


# ---------------------------------------------------------------- determinism

@pytest.mark.parametrize("suite, budget", [("abel5", "20"), ("relators", "10"), ("psi", "16"), ("beta-identities", "8")])
def test_rerun_payload_identical(capsys, suite, budget):
    _, a, _ = run(capsys, "verify", suite, "--seed", "99", "--budget", budget)
    _, b, _ = run(capsys, "verify", suite, "--seed", "99", "--budget", budget)
    assert payload(json.loads(a)) == payload(json.loads(b))


def test_seed_changes_payload(capsys):
    _, a, _ = run(capsys, "verify", "abel5", "--seed", "1", "--budget", "5")
    _, b, _ = run(capsys, "verify", "abel5", "--seed", "2", "--budget", "5")
    assert payload(json.loads(a)) != payload(json.loads(b))


# ---------------------------------------------------------------- settings precedence

def test_config_file_env_and_flag_precedence(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults for CI\nseed = 5\nbudget = 3\ntol = 1e-8\n")
    _, out, _ = run(capsys, "verify", "abel5", "--config", str(cfg))
    cfg_echo = json.loads(out)["config"]
    assert (cfg_echo["seed"], cfg_echo["budget"], cfg_echo["tol"]) == (5, 3, 1e-8)
    _, out, _ = run(capsys, "verify", "abel5", "--config", str(cfg), environ={"REGULAB_SEED": "6"})
    assert json.loads(out)["config"]["seed"] == 6
    _, out, _ = run(capsys, "verify", "abel5", "--config", str(cfg), "--seed", "8", environ={"REGULAB_SEED": "6"})
    rep = json.loads(out)
    assert rep["config"]["seed"] == 8 and rep["config"]["budget"] == 3


def test_config_file_errors(capsys, tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    assert run(capsys, "verify", "abel5", "--config", str(bad))[0] == 2
    bad.write_text("just words\n")
    assert run(capsys, "verify", "abel5", "--config", str(bad))[0] == 2
    assert run(capsys, "verify", "abel5", "--config", str(tmp_path / "missing.cfg"))[0] == 2
    assert run(capsys, "verify", "abel5", environ={"REGULAB_SEED": "x"})[0] == 2


def test_output_file_and_csv(capsys, tmp_path):
    path = tmp_path / "out.csv"
    code, out, _ = run(capsys, "verify", "coproduct", "--budget", "3", "--format", "csv", "--out", str(path))
    assert code == 0 and out == ""
    rows = list(csv.DictReader(io.StringIO(path.read_text())))
    assert len(rows) == 6 and rows[0]["pass"] == "True"


# ---------------------------------------------------------------- report-merge

def _write(tmp_path, name, argv, capsys):
    _, out, _ = run(capsys, *argv)
    path = tmp_path / name
    path.write_text(out)
    return str(path), json.loads(out)


def test_merge_union_and_dedupe(capsys, tmp_path):
    a, _ = _write(tmp_path, "a.json", ["verify", "abel5", "--budget", "3"], capsys)
    b, _ = _write(tmp_path, "b.json", ["verify", "relators", "--budget", "2"], capsys)
    code, out, _ = run(capsys, "report-merge", a, b)
    merged = json.loads(out)
    assert code == 0 and len(merged["records"]) == 5
    code, out, _ = run(capsys, "report-merge", a, a, b)
    assert len(json.loads(out)["records"]) == 5


def test_merge_keeps_same_name_under_different_configs(capsys, tmp_path):
    a, _ = _write(tmp_path, "a.json", ["verify", "abel5", "--budget", "2", "--seed", "1"], capsys)
    b, _ = _write(tmp_path, "b.json", ["verify", "abel5", "--budget", "2", "--seed", "2"], capsys)
    _, out, _ = run(capsys, "report-merge", a, b)
    assert len(json.loads(out)["records"]) == 4


def test_merge_mixed_versions(capsys, tmp_path):
    a, ra = _write(tmp_path, "a.json", ["verify", "abel5", "--budget", "1"], capsys)
    ra["version"] = "0.0.0-other"
    other = tmp_path / "other.json"
    other.write_text(json.dumps(ra))
    code, _, err = run(capsys, "report-merge", a, str(other))
    assert code == 2 and "versions" in err


def test_merge_schema_errors(capsys, tmp_path):
    junk = tmp_path / "junk.json"
    junk.write_text("{not json")
    assert run(capsys, "report-merge", str(junk))[0] == 2
    junk.write_text(json.dumps({"version": __version__}))
    assert run(capsys, "report-merge", str(junk))[0] == 2
    with pytest.raises(UsageError):
        merge_reports([])


def test_merge_propagates_failures(capsys, tmp_path):
    a, _ = _write(tmp_path, "a.json", ["verify", "abel5", "--budget", "2", "--tol", "1e-30"], capsys)
    assert run(capsys, "report-merge", a)[0] == 1


# ---------------------------------------------------------------- zeta-check

def test_zeta_check_single(capsys):
    code, out, _ = run(capsys, "zeta-check", "--disc", "-23")
    row = json.loads(out)
    assert code == 0 and row["h"] == 3 and abs(row["lhs"] + 1.5) < 1e-10


def test_zeta_check_sweep_csv(capsys):
    code, out, _ = run(capsys, "zeta-check", "--sweep=-30..-3", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and [int(r["D"]) for r in rows] == [-24, -23, -20, -19, -15, -11, -8, -7, -4, -3]


def test_zeta_check_errors(capsys):
    assert run(capsys, "zeta-check")[0] == 2
    assert run(capsys, "zeta-check", "--disc", "12", "--disc", "9")[0] == 2
    assert run(capsys, "zeta-check", "--sweep", "5-9")[0] == 2
