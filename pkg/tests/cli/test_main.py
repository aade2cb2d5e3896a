import json
import os
from unittest import mock

import pytest

from cmfe_gelation.cli.main import main
from cmfe_gelation.integrator import CMFENumericalError
from cmfe_gelation.verification import SuiteVerdict


@pytest.fixture(autouse=True)
def quiet_logging():
    """Leave the root logger to pytest."""
    with mock.patch("cmfe_gelation.cli.main.setup_logging"):
        yield


def test_check_admissible(write_config, capsys):
    """check prints one line per condition and exits 0."""
    assert main(["check", write_config()]) == 0
    assert "PASS sigma-range" in capsys.readouterr().out


def test_check_inadmissible(write_config, minimal_document):
    """An inadmissible model is reported, not rejected, by check."""
    assert main(["check", write_config(minimal_document.replace("sigma = 0.25", "sigma = 0.6"))]) == 3


def test_simulate(write_config, capsys):
    """simulate prints a one-line summary."""
    path = write_config(extra="[controls]\nt_end = 0.0\n")
    assert main(["--quiet", "simulate", path]) == 0
    assert capsys.readouterr().out.startswith("t = 0: N1 = ")


def test_simulate_rejects_inadmissible(write_config, minimal_document):
    """simulate refuses a model outside the admissible range."""
    assert main(["simulate", write_config(minimal_document.replace("sigma = 0.25", "sigma = 0.6"))]) == 1


def test_missing_file(tmpdir):
    """A missing configuration is a usage error."""
    assert main(["simulate", str(tmpdir.join("nope.toml"))]) == 1


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["simulate"],
        ["launch", "run.toml"],
        ["--debug", "--quiet", "check", "run.toml"],
    ],
)
def test_usage_errors(argv):
    """Bad command lines exit 1."""
    assert main(argv) == 1


def test_version(capsys):
    """--version exits 0."""
    assert main(["--version"]) == 0
    assert capsys.readouterr().out.startswith("cmfe-gelation ")


def test_numerical_failure(write_config):
    """NaN or Inf during a run exits 2."""
    with mock.patch("cmfe_gelation.cli.main.cmd_simulate", side_effect=CMFENumericalError("Non-finite density")):
        assert main(["simulate", write_config()]) == 2


def test_converge_top_edges(write_config, bounds_document):
    """--top-edge overrides analysis.top_edges."""
    path = write_config(bounds_document)
    with mock.patch("cmfe_gelation.cli.main.cmd_converge", return_value=None) as cmd_converge:
        assert main(["converge", path, "--top-edge", "20", "--top-edge", "10"]) == 0
    assert cmd_converge.call_args.kwargs["levels"] == [20.0, 10.0]


def test_verify_unknown_suite(tmpdir):
    """An unknown suite name is a usage error."""
    assert main(["verify", "--suite", "no_such_suite", "--output", str(tmpdir)]) == 1


def test_verify_failure(tmpdir):
    """A failed suite exits 3 and is recorded in the manifest."""
    verdicts = [SuiteVerdict("analytic_values", False, 0.01, 10)]
    with mock.patch("cmfe_gelation.verification.run_suites", return_value=verdicts):
        assert main(["verify", "--suite", "analytic_values", "--output", str(tmpdir)]) == 3
    with open(os.path.join(str(tmpdir), "manifest.json"), encoding="utf-8") as fp:
        assert json.load(fp)["verdicts"][0]["passed"] is False
