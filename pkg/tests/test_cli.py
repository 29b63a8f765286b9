"""Command-line behavior: output contract, formatting knobs, exit codes."""

from __future__ import annotations

import json
from fractions import Fraction

import pytest

from geomax.cli import UsageError, figure_rows, format_value, main, parse_range

HEADER = "n,s,quantity,method,value,error_bound"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def csv_rows(out: str) -> list[dict]:
    lines = [line for line in out.splitlines() if line]
    header = lines[0].split(",")
    return [dict(zip(header, line.split(","))) for line in lines[1:]]


class TestFormatting:
    def test_fractions_render_as_ratios(self):
        assert format_value(Fraction(8, 3), 12) == "8/3"
        assert format_value(Fraction(6, 3), 12) == "2"
        assert format_value(Fraction(0), 12) == "0"

    def test_floats_use_significant_digits(self):
        assert format_value(8 / 3, 12) == "2.66666666667"
        assert format_value(8 / 3, 3) == "2.67"
        assert format_value(14.0, 6) == "14"

    def test_parse_range(self):
        assert parse_range("4") == (4, 4)
        assert parse_range("2..9") == (2, 9)
        for bad in ("0", "3..2", "a..b", "1..2..3", ""):
            with pytest.raises(UsageError):
                parse_range(bad)


class TestCompute:
    def test_exact_mean_prints_a_ratio(self, capsys):
        code, out, _ = run(
            capsys, "compute", "--n", "2", "--s", "2", "--quantity", "mean",
            "--mode", "exact",
        )
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == HEADER
        assert lines[1] == "2,2,mean,closed-alternating,8/3,0"

    def test_float_mean_and_error_bound(self, capsys):
        code, out, _ = run(
            capsys, "compute", "--n", "2", "--s", "2", "--quantity", "mean"
        )
        assert code == 0
        row = csv_rows(out)[0]
        assert row["value"] == "2.66666666667"
        assert float(row["error_bound"]) < 1e-12
        assert row["method"] == "closed-alternating"

    def test_ranges_expand_inclusively(self, capsys):
        code, out, _ = run(
            capsys, "compute", "--n", "2..3", "--s", "5..6", "--quantity", "mean",
            "--mode", "exact",
        )
        assert code == 0
        rows = csv_rows(out)
        assert [(r["n"], r["s"]) for r in rows] == [
            ("2", "5"), ("2", "6"), ("3", "5"), ("3", "6")
        ]

    def test_method_forcing_changes_the_tag(self, capsys):
        for method, tag in [
            ("series", "series"),
            ("recursive", "recursive"),
            ("matrix-power", "matrix-power"),
        ]:
            code, out, _ = run(
                capsys, "compute", "--n", "3", "--s", "6", "--quantity", "variance",
                "--method", method,
            )
            assert code == 0
            row = csv_rows(out)[0]
            assert row["method"] == tag
            # 41112990/1002001, pinned by closed form and hand recursion
            assert float(row["value"]) == pytest.approx(41.0308871947, abs=1e-9)

    def test_pmf_point_exact(self, capsys):
        code, out, _ = run(
            capsys, "compute", "--n", "2", "--s", "2", "--quantity", "pmf",
            "--y", "2", "--mode", "exact",
        )
        assert code == 0
        assert csv_rows(out)[0]["value"] == "5/16"

    def test_quantile(self, capsys):
        code, out, _ = run(
            capsys, "compute", "--n", "2", "--s", "6", "--quantity", "quantile",
            "--prob", "0.99",
        )
        assert code == 0
        assert csv_rows(out)[0]["value"] == "30"

    def test_json_mirrors_csv_fields(self, capsys):
        code, out, _ = run(
            capsys, "compute", "--n", "2", "--s", "2", "--quantity", "mean",
            "--mode", "exact", "--format", "json",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload == [
            {
                "n": 2,
                "s": 2,
                "quantity": "mean",
                "method": "closed-alternating",
                "value": "8/3",
                "error_bound": "0",
            }
        ]

    def test_relaxed_flag_gates_oversized_dice_counts(self, capsys):
        code, _, err = run(
            capsys, "compute", "--n", "5", "--s", "2", "--quantity", "mean"
        )
        assert code == 2
        assert "--relaxed" in err
        code, out, _ = run(
            capsys, "compute", "--n", "5", "--s", "2", "--quantity", "mean",
            "--relaxed", "--mode", "exact",
        )
        assert code == 0
        assert csv_rows(out)[0]["value"] == "2470/651"


class TestPrecision:
    def test_flag_controls_digits(self, capsys):
        code, out, _ = run(
            capsys, "compute", "--n", "2", "--s", "2", "--quantity", "mean",
            "--precision", "4",
        )
        assert code == 0
        assert csv_rows(out)[0]["value"] == "2.667"

    def test_environment_default(self, capsys, monkeypatch):
        monkeypatch.setenv("GEOMAX_PRECISION", "5")
        code, out, _ = run(
            capsys, "compute", "--n", "2", "--s", "2", "--quantity", "mean"
        )
        assert code == 0
        assert csv_rows(out)[0]["value"] == "2.6667"

    def test_flag_beats_environment(self, capsys, monkeypatch):
        monkeypatch.setenv("GEOMAX_PRECISION", "5")
        code, out, _ = run(
            capsys, "compute", "--n", "2", "--s", "2", "--quantity", "mean",
            "--precision", "3",
        )
        assert code == 0
        assert csv_rows(out)[0]["value"] == "2.67"

    def test_bad_environment_value_is_a_usage_error(self, capsys, monkeypatch):
        monkeypatch.setenv("GEOMAX_PRECISION", "lots")
        code, _, err = run(
            capsys, "compute", "--n", "2", "--s", "2", "--quantity", "mean"
        )
        assert code == 2
        assert "GEOMAX_PRECISION" in err
        monkeypatch.setenv("GEOMAX_PRECISION", "40")
        code, _, _ = run(
            capsys, "compute", "--n", "2", "--s", "2", "--quantity", "mean"
        )
        assert code == 2

    def test_out_of_range_flag_rejected(self, capsys):
        code, _, _ = run(
            capsys, "compute", "--n", "2", "--s", "2", "--quantity", "mean",
            "--precision", "18",
        )
        assert code == 2


class TestExitCodes:
    def test_missing_point_for_pmf(self, capsys):
        code, _, err = run(
            capsys, "compute", "--n", "2", "--s", "2", "--quantity", "pmf"
        )
        assert code == 2
        assert "--y" in err

    def test_missing_level_for_quantile(self, capsys):
        code, _, _ = run(
            capsys, "compute", "--n", "2", "--s", "2", "--quantity", "quantile"
        )
        assert code == 2

    def test_monte_carlo_is_not_a_compute_method(self, capsys):
        code, _, err = run(
            capsys, "compute", "--n", "2", "--s", "2", "--quantity", "mean",
            "--method", "monte-carlo",
        )
        assert code == 2
        assert "simulate" in err

    def test_cancellation_exit_code(self, capsys):
        # compare forces the closed path without fallback; at the 30,30
        # corner its cancellation estimate crosses the refusal threshold
        code, _, err = run(capsys, "compare", "--n-max", "30", "--s-max", "30")
        assert code == 3
        assert "precision" in err

    def test_compare_size_guard(self, capsys):
        assert run(capsys, "compare", "--n-max", "45", "--s-max", "45")[0] == 2

    def test_unknown_subcommand(self, capsys):
        assert run(capsys, "frobnicate")[0] == 2

    def test_compare_happy_path(self, capsys):
        code, out, err = run(capsys, "compare", "--n-max", "3", "--s-max", "5")
        assert code == 0
        rows = csv_rows(out)
        assert all(row["status"] == "ok" for row in rows)
        assert all(float(row["max_discrepancy"]) < 1e-9 for row in rows)
        # one row per playable pair with s <= 5
        assert len(rows) == sum(min(3, s) for s in range(1, 6))

    def test_compare_misordered_limits(self, capsys):
        assert run(capsys, "compare", "--n-max", "6", "--s-max", "3")[0] == 2


class TestFigures:
    def test_panel_values_match_library(self, capsys):
        code, out, _ = run(
            capsys, "figures", "--figure", "ev-bounds", "--panel", "fixed-s"
        )
        assert code == 0
        rows = csv_rows(out)
        assert [r["n"] for r in rows] == ["2", "4", "6", "8", "10"]
        assert all(r["s"] == "10" for r in rows)
        first = rows[0]
        assert float(first["exact"]) == pytest.approx(280 / 19, rel=1e-11)
        assert float(first["elementary_bound"]) == 20.0
        assert float(first["improved_bound"]) == pytest.approx(280 / 19, rel=1e-11)

    def test_figure_rows_ordering_invariant(self):
        for figure in ("ev-bounds", "var-bounds"):
            for panel in ("fixed-s", "fixed-n"):
                for n, s, exact, elementary, improved in figure_rows(figure, panel):
                    assert exact <= improved <= elementary
                    assert n <= s


class TestSimulateCommand:
    def test_moments_report(self, capsys):
        code, out, _ = run(
            capsys, "simulate", "--n", "2", "--s", "2", "--trials", "4000",
            "--seed", "1",
        )
        assert code == 0
        row = csv_rows(out)[0]
        assert row["trials"] == "4000" and row["seed"] == "1"
        assert abs(float(row["mean"]) - 8 / 3) < 5 * float(row["std_error_mean"])

    def test_histogram_report_counts_sum_to_trials(self, capsys):
        code, out, _ = run(
            capsys, "simulate", "--n", "2", "--s", "3", "--trials", "2000",
            "--seed", "2", "--report", "histogram",
        )
        assert code == 0
        rows = csv_rows(out)
        assert sum(int(r["count"]) for r in rows) == 2000
        assert all(int(r["turn_count"]) >= 1 for r in rows)

    def test_signature_report_labels(self, capsys):
        code, out, _ = run(
            capsys, "simulate", "--n", "4", "--s", "4", "--trials", "500",
            "--seed", "3", "--report", "signatures",
        )
        assert code == 0
        rows = csv_rows(out)
        assert sum(int(r["count"]) for r in rows) == 500
        labels = {r["signature"] for r in rows}
        assert labels <= {"4444", "4441", "4422", "4421", "4333", "4331", "4322", "4321"}
        counts = [int(r["count"]) for r in rows]
        assert counts == sorted(counts, reverse=True)

    def test_bad_trials_and_seed(self, capsys):
        assert run(capsys, "simulate", "--n", "2", "--s", "2", "--trials", "0")[0] == 2
        assert run(capsys, "simulate", "--n", "2", "--s", "2", "--seed", "-4")[0] == 2


class TestSignaturesCommand:
    def test_listing(self, capsys):
        code, out, _ = run(capsys, "signatures", "--n", "4")
        assert code == 0
        assert out.splitlines() == [
            "signature", "4444", "4441", "4422", "4421", "4333", "4331", "4322", "4321",
        ]

    def test_count_only_skips_enumeration(self, capsys):
        code, out, _ = run(capsys, "signatures", "--n", "40", "--count-only")
        assert code == 0
        assert out.splitlines() == ["count", str(2**39)]

    def test_refuses_oversized_enumeration(self, capsys):
        code, _, err = run(capsys, "signatures", "--n", "25")
        assert code == 2
