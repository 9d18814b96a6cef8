"""Command-line behavior: outputs, exit codes, configuration layering, and
byte determinism."""

import io
import json

from fqcount import cli, counting
from fqcount.counting import ExactCount


def run(argv):
    out = io.StringIO()
    code = cli.run_command(argv, out=out)
    return code, out.getvalue()


def test_count_gap1_anchor():
    code, text = run(["count", "--gap", "1", "--p", "2", "--e", "1", "--n", "3", "--k", "1"])
    assert code == 0
    payload = json.loads(text)
    assert payload["value"] == "4"
    assert payload["method"] == "closed-form"


def test_count_gap3_example_both_methods():
    code, text = run(["count", "--gap", "3", "--p", "3", "--e", "2",
                      "--n", "3", "--k", "1", "--method", "both"])
    assert code == 0
    payload = json.loads(text)
    assert payload["value"] == "9"
    assert payload["oracle_value"] == "9"
    assert payload["match"] is True


def test_field_summary():
    code, text = run(["field", "--p", "3", "--e", "2"])
    assert code == 0
    payload = json.loads(text)
    assert payload["q"] == "9"
    assert payload["modulus"] == ["1", "0", "1"]
    assert len(payload["elements"]) == 9
    assert payload["elements"][0] == ["0", "0"]
    assert payload["elements"][4] == ["1", "1"]


def test_subcommand_smoke():
    assert run(["subset-sum", "--p", "5", "--e", "1", "--n", "2", "--b", "0",
                "--method", "both"])[0] == 0
    assert run(["mss2", "--p", "3", "--e", "2", "--t", "4"])[0] == 0
    assert run(["quadlin", "--p", "3", "--e", "1", "--a", "1,2", "--a0", "0",
                "--b", "1,1", "--b0", "0"])[0] == 0
    assert run(["sieve", "--p", "3", "--e", "2", "--n", "4", "--system", "two-moment"])[0] == 0
    assert run(["sieve", "--p", "3", "--e", "1", "--n", "2"])[0] == 0


def test_wenger_both_methods_verified(tmp_path):
    export = tmp_path / "edges.txt"
    code, text = run(["wenger", "--variant", "1", "--p", "3", "--e", "1", "--m", "1",
                      "--method", "both", "--export", str(export), "--check-moments", "3"])
    assert code == 0
    payload = json.loads(text)
    assert payload["formula"]["verified"] is True
    assert payload["oracle"]["levels"] == [
        {"i": "3", "mult": "1"}, {"i": "2", "mult": "2"},
        {"i": "1", "mult": "2"}, {"i": "0", "mult": "4"}]
    assert payload["moment_check"] is True
    assert payload["exported_edges"] == "27"
    assert export.read_text().count("\n") == 27


def test_usage_errors_exit_1():
    assert run(["count", "--gap", "4", "--p", "3", "--e", "1", "--n", "5", "--k", "1"])[0] == 1
    assert run(["nonsense"])[0] == 1
    assert run(["count", "--gap", "1", "--p", "4", "--e", "1", "--n", "2", "--k", "0"])[0] == 1
    assert run(["count", "--gap", "3", "--p", "3", "--e", "1", "--n", "4", "--k", "1"])[0] == 1
    assert run(["quadlin", "--p", "2", "--e", "2", "--a", "1", "--b", "1"])[0] == 1
    assert run(["count", "--gap", "1", "--p", "2", "--e", "1", "--n", "3", "--k", "1",
                "--budget", "10"])[0] == 1  # below the budget floor


def test_budget_exceeded_exit_2():
    code, _ = run(["--budget", "10000", "count", "--gap", "1", "--p", "5", "--e", "1",
                   "--n", "7", "--k", "1", "--method", "oracle"])
    assert code == 2


def test_help_exits_zero():
    assert run(["--help"])[0] == 0


def test_verify_single_suite_ok():
    code, text = run(["verify", "--suite", "gap1", "--max-q", "5", "--max-n", "4"])
    assert code == 0
    payload = json.loads(text)
    assert payload["ok"] is True
    assert payload["suites"]["gap1"]["mismatches"] == "0"


def test_verify_detects_corrupted_formula(monkeypatch):
    """Harness self-test: a deliberately wrong closed form must surface as
    exit code 3 with a reproducer line."""
    real = counting.count_nk_gap2

    def corrupted(field, n, k, b):
        result = real(field, n, k, b)
        if n == 3 and k == 1:
            return ExactCount(result.value + 1, result.method, result.query)
        return result

    monkeypatch.setattr(counting, "count_nk_gap2", corrupted)
    code, text = run(["verify", "--suite", "gap2", "--max-q", "3"])
    assert code == 3
    assert "MISMATCH" in text
    assert "count --gap 2" in text


def test_verify_csv_rows(tmp_path):
    path = tmp_path / "rows.csv"
    code, _ = run(["verify", "--suite", "subset", "--max-q", "4", "--csv", str(path)])
    assert code == 0
    lines = path.read_text().splitlines()
    assert lines[0] == "suite,q,n,ell,k,b,formula_value,oracle_value,match"
    assert all(line.endswith(",yes") for line in lines[1:])


def test_output_byte_determinism_across_parallelism():
    args = ["verify", "--suite", "quadlin", "--max-q", "5", "--max-n", "2"]
    _, seq = run(["--parallelism", "1"] + args)
    _, par = run(["--parallelism", "4"] + args)
    assert seq == par
    _, again = run(["--parallelism", "4"] + args)
    assert par == again


def test_config_file_and_env_layering(tmp_path, monkeypatch):
    config = tmp_path / "fqcount.conf"
    config.write_text("# comment\nbudget = 20000\noutput_format = plain\n")
    # config file value applies
    code, text = run(["--config", str(config), "count", "--gap", "1", "--p", "5",
                      "--e", "1", "--n", "7", "--k", "1", "--method", "oracle"])
    assert code == 2  # 5^7 tails over the configured 20000
    # env overrides the file
    monkeypatch.setenv(cli.ENV_BUDGET, str(10 ** 8))
    code, text = run(["--config", str(config), "count", "--gap", "1", "--p", "5",
                      "--e", "1", "--n", "7", "--k", "1", "--method", "oracle"])
    assert code == 0
    assert "value = " in text  # plain format from the config file
    # flag overrides the env
    code, _ = run(["--config", str(config), "--budget", "20000", "count", "--gap", "1",
                   "--p", "5", "--e", "1", "--n", "7", "--k", "1", "--method", "oracle"])
    assert code == 2


def test_env_parallelism_and_format(monkeypatch):
    monkeypatch.setenv(cli.ENV_PARALLELISM, "2")
    monkeypatch.setenv(cli.ENV_FORMAT, "plain")
    code, text = run(["count", "--gap", "1", "--p", "2", "--e", "1", "--n", "3", "--k", "1"])
    assert code == 0
    assert 'value = "4"' in text
    monkeypatch.setenv(cli.ENV_PARALLELISM, "-3")
    assert run(["field", "--p", "2", "--e", "1"])[0] == 1


def test_config_file_rejects_garbage(tmp_path):
    config = tmp_path / "bad.conf"
    config.write_text("budget: 123\n")
    code, _ = run(["--config", str(config), "field", "--p", "2", "--e", "1"])
    assert code == 1
    code, _ = run(["--config", str(tmp_path / "missing.conf"), "field", "--p", "2", "--e", "1"])
    assert code == 1


def test_counts_serialize_as_strings():
    code, text = run(["count", "--gap", "1", "--p", "3", "--e", "2", "--n", "6", "--k", "0"])
    assert code == 0
    payload = json.loads(text)
    assert isinstance(payload["value"], str)
    int(payload["value"])  # decimal string


def test_csv_output_format_single_command():
    code, text = run(["--format", "csv", "count", "--gap", "1", "--p", "2", "--e", "1",
                      "--n", "3", "--k", "1"])
    assert code == 0
    assert any(line.startswith("value,") for line in text.splitlines())
