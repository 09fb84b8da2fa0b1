import json
from unittest.mock import patch

import pytest

from src.cli import EXIT_NOT_CONVERGED, EXIT_OK, EXIT_PARSE, build_parser, main, to_csv, to_json
from src.configuration import MockConfigProvider
from tests.decorators import with_test_config

# pylint: disable=unused-argument

GEOMETRIC = '{"kind": "geometric", "r": 0.5}'


@pytest.fixture(autouse=True)
def skip_config_store():
    """The test provider is installed by the tests themselves."""
    with patch("src.cli.setup_config_store"):
        yield


def run(capsys, *argv: str) -> tuple[int, str]:
    code: int = main(list(argv))
    return code, capsys.readouterr().out


class TestOutput:
    """JSON and CSV rendering of reports"""

    def test_json_is_sorted_and_handles_complex(self):
        text = to_json({"b": 1, "a": complex(1.0, 2.0)})
        assert text.index('"a"') < text.index('"b"')
        assert json.loads(text)["a"] == [1.0, 2.0]

    def test_csv_flattens_nested_fields(self):
        text = to_csv([{"name": "x", "detail": {"k": 1}, "window": [0, 1]}])
        header, row = text.strip().split("\n")
        assert header == "detail.k,name,window"
        assert row.startswith("1,x,")


class TestNorm:
    """radial-multipliers norm"""

    @with_test_config
    def test_geometric(self, test_provider: MockConfigProvider, capsys):
        code, out = run(capsys, "norm", "--phi", GEOMETRIC, "--trunc", "60")
        assert code == EXIT_OK
        record = json.loads(out)
        assert record["converged"] is True
        assert record["norm"] == pytest.approx(1.0, abs=1e-6)
        assert record["class"] == "C"

    @with_test_config
    def test_alternating_not_in_prime_class(self, test_provider: MockConfigProvider, capsys):
        code, out = run(capsys, "norm", "--phi", '{"kind": "alternating", "value": 1.0}', "--class", "Cprime", "--trunc", "40")
        assert code == EXIT_NOT_CONVERGED
        assert json.loads(out)["converged"] is False

    @pytest.mark.parametrize("phi", ["{not json", '{"kind": "geometric", "r": 1.5}', '{"kind": "nothing"}'])
    @with_test_config
    def test_unreadable_input(self, phi, test_provider: MockConfigProvider, capsys):
        code, out = run(capsys, "norm", "--phi", phi)
        assert code == EXIT_PARSE
        assert out == ""

    def test_phi_is_required(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["norm"])


class TestDecompose:
    """radial-multipliers decompose"""

    @with_test_config
    def test_csv_rows(self, test_provider: MockConfigProvider, capsys):
        code, out = run(capsys, "decompose", "--phi", GEOMETRIC, "--trunc", "60", "--out", "csv")
        assert code == EXIT_OK
        assert len(out.strip().split("\n")) == 2

    @with_test_config
    def test_json_record(self, test_provider: MockConfigProvider, capsys):
        code, out = run(capsys, "decompose", "--phi", GEOMETRIC, "--trunc", "60")
        record = json.loads(out)
        assert code == EXIT_OK
        assert record["nuclear_sum"] == pytest.approx(1.0, abs=1e-6)
        assert len(record["pairs"]) == 1


class TestVerify:
    """radial-multipliers verify"""

    @with_test_config
    def test_coxeter_suite(self, test_provider: MockConfigProvider, capsys):
        code, out = run(capsys, "verify", "--suite", "coxeter", "--seed", "3", "--samples", "3")
        report = json.loads(out)
        assert code == EXIT_OK
        assert report["seed"] == 3
        assert [s["suite"] for s in report["suites"]] == ["coxeter"]
        assert all(s["passed"] for s in report["suites"])

    def test_unknown_suite(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["verify", "--suite", "nothing"])


class TestTable:
    """radial-multipliers table"""

    @with_test_config
    def test_delta_family(self, test_provider: MockConfigProvider, capsys):
        code, out = run(capsys, "table", "--family", "delta", "--grid", "0,1", "--fock-trunc", "2", "--trials", "2", "--trunc", "40")
        payload = json.loads(out)
        assert code == EXIT_OK
        assert payload["family"] == "delta"
        assert [row["parameter"] for row in payload["rows"]] == [0.0, 1.0]
        assert all(row["converged_C"] for row in payload["rows"])
        assert all(row["cb_lower_bound"] is not None for row in payload["rows"])

    @with_test_config
    def test_unknown_family(self, test_provider: MockConfigProvider, capsys):
        code, _ = run(capsys, "table", "--family", "bogus", "--grid", "0.5")
        assert code == EXIT_PARSE


class TestDemo:
    """radial-multipliers demo"""

    @with_test_config
    def test_dihedral(self, test_provider: MockConfigProvider, capsys):
        code, out = run(capsys, "demo", "--words", "1")
        record = json.loads(out)
        assert code == EXIT_OK
        assert record["factors"] == 2
        assert len(record["words"]) == 2
        assert record["words"][0]["psi"] == pytest.approx(0.5)
        assert max(w["defect"] for w in record["words"]) < 1e-8

    @with_test_config
    def test_invalid_spec(self, test_provider: MockConfigProvider, capsys):
        code, _ = run(capsys, "demo", "--spec", '{"P": {"blocks": []}}')
        assert code == EXIT_PARSE
