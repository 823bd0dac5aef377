# tests/test_commands.py
import json

import pytest

from app_config import EXIT_INCONCLUSIVE, EXIT_OK, EXIT_PARSE_ERROR, EXIT_USAGE, EXIT_VIOLATION
from database.ig26_tables import IG26_SPEC_TEXT
from main import main
from utils.spec_format import parse_spec_text
from tests.test_spec_format import TINY_SPEC


def _machine(capsys):
    return json.loads(capsys.readouterr().out)


def test_verify_small_built_in(capsys):
    assert main(["verify-small"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "all checks passed" in out
    assert "Radical at q = 1: dimension 1" in out


def test_verify_small_machine_output(capsys):
    assert main(["verify-small", "--format", "machine"]) == EXIT_OK
    report = _machine(capsys)
    assert report["axioms"]["success"]
    assert report["character_table"]["success"]
    assert report["nilpotent_witness"]["squares_to_zero"]
    assert report["radical"]["dimension"] == 1


def test_verify_small_at_q0(capsys):
    assert main(["verify-small", "--q", "0", "--format", "machine"]) == EXIT_OK
    report = _machine(capsys)
    assert report["q"] == "0"
    assert "character_table" not in report


def test_verify_small_spec_file(tmp_path, capsys):
    path = tmp_path / "tiny.spec"
    path.write_text(TINY_SPEC)
    assert main(["verify-small", "--spec", str(path)]) == EXIT_OK
    assert "Nilpotent witness" not in capsys.readouterr().out


def test_verify_small_reports_violations(tmp_path, capsys):
    path = tmp_path / "broken.spec"
    path.write_text(TINY_SPEC.replace("D1 * D2 = q*D0", "D1 * D2 = q*D1"))
    assert main(["verify-small", "--spec", str(path)]) == EXIT_VIOLATION
    assert "violations found" in capsys.readouterr().out


def test_unparsable_spec(tmp_path, capsys):
    path = tmp_path / "bad.spec"
    path.write_text("BASIS\nD0 0\nNOISE\n")
    assert main(["verify-small", "--spec", str(path)]) == EXIT_PARSE_ERROR
    assert "error:" in capsys.readouterr().err


def test_certify_gamma(capsys):
    assert main(["certify", "gamma", "--order", "2"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "P1(x) = -30*q*x^10" in out
    assert "Verdict: Semisimple" in out


def test_certify_euler(capsys):
    assert main(["certify", "--element", "euler", "--order", "4"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "39062500*q^3" in out
    assert "simple spectrum" in out


def test_certify_euler_third_order_is_inconclusive(capsys):
    assert main(["certify", "euler", "--order", "3"]) == EXIT_INCONCLUSIVE
    assert "Verdict: Inconclusive" in capsys.readouterr().out


def test_certify_machine_output_is_deterministic(capsys):
    main(["certify", "gamma", "--format", "machine"])
    first = capsys.readouterr().out
    main(["certify", "gamma", "--format", "machine"])
    assert capsys.readouterr().out == first
    report = json.loads(first)
    assert report["bootstrap_order"] == 2
    assert report["certificate"]["verdict"] == "Semisimple"
    assert report["certificate"]["resultant_valuation"] == "Exact(1)"


@pytest.mark.parametrize("argv", [
    ["certify", "gamma", "--order", "8"],
    ["certify", "gamma", "--q", "0"],
    ["certify", "gamma", "--q", "x"],
    ["certify", "gamma", "--order", "0"],
    ["certify", "bogus"],
])
def test_certify_usage_errors(argv, capsys):
    assert main(argv) == EXIT_USAGE
    assert "error:" in capsys.readouterr().err


def test_order_error_names_the_limit(capsys):
    main(["certify", "gamma", "--order", "8"])
    err = capsys.readouterr().err
    assert "bootstrap order 6 at most" in err
    assert "9-point invariant" in err


def test_dump_round_trip(capsys):
    assert main(["dump"]) == EXIT_OK
    text = capsys.readouterr().out
    assert parse_spec_text(text) == parse_spec_text(IG26_SPEC_TEXT)
    basis = text[text.index("BASIS"):text.index("GRADING")].split("\n")
    assert len([line for line in basis[1:] if line.strip()]) == 12


@pytest.mark.parametrize("element", ["gamma", "euler", "D1 + D2"])
def test_certify_needs_a_deformation_class(tmp_path, capsys, element):
    path = tmp_path / "tiny.spec"
    path.write_text(TINY_SPEC)
    assert main(["certify", element, "--spec", str(path)]) == EXIT_USAGE
    err = capsys.readouterr().err
    assert "DEFORM" in err
    assert "DNone" not in err


def test_unknown_report_format_is_rejected_by_the_parser(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["verify-small", "--format", "xml"])
    assert excinfo.value.code == EXIT_USAGE
    assert "invalid choice" in capsys.readouterr().err
