import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cvarnet import (
    Frequency,
    Panel,
    RawSeriesSet,
    VariableKind,
    align_panel,
    interpolate_annual_to_quarterly,
    load_series_csv,
    panel_from_csv,
    panel_to_csv,
)
from cvarnet.errors import (
    AlignmentError,
    ContinuityError,
    InsufficientDataError,
    LabelMismatchError,
    SchemaError,
)
from cvarnet.panel import quarter_index, quarter_label


def write_csv(path, header, rows):
    lines = [",".join(header)] + [",".join(str(c) for c in row) for row in rows]
    path.write_text("\n".join(lines) + "\n")
    return path


def quarterly_rows(start="2012Q4", count=45, ncols=3, base=100.0):
    q0 = quarter_index(start)
    return [
        [quarter_label(q0 + t)] + [base + t + 10 * j for j in range(ncols)]
        for t in range(count)
    ]


class TestLoadSeriesCsv:
    def test_well_formed_quarterly(self, tmp_path):
        path = write_csv(
            tmp_path / "gdp.csv", ["period", "AAA", "BBB", "CCC"], quarterly_rows()
        )
        rs = load_series_csv(path, VariableKind.GDP, Frequency.QUARTERLY)
        assert rs.labels == ("AAA", "BBB", "CCC")
        assert len(rs.periods) == 45
        assert rs.values.shape == (45, 3)

    def test_period_gap_names_missing_quarter(self, tmp_path):
        rows = quarterly_rows(start="2015Q1", count=4)
        del rows[1]  # 2015Q2
        path = write_csv(tmp_path / "g.csv", ["period", "AAA"], [[r[0], r[1]] for r in rows])
        with pytest.raises(ContinuityError, match="2015Q2"):
            load_series_csv(path, VariableKind.GDP, Frequency.QUARTERLY)

    def test_duplicate_period(self, tmp_path):
        path = write_csv(
            tmp_path / "g.csv",
            ["period", "AAA"],
            [["2015Q1", 1.0], ["2015Q1", 2.0]],
        )
        with pytest.raises(ContinuityError, match="duplicate"):
            load_series_csv(path, VariableKind.GDP, Frequency.QUARTERLY)

    def test_bad_header(self, tmp_path):
        path = write_csv(tmp_path / "g.csv", ["date", "AAA"], [["2015Q1", 1.0]])
        with pytest.raises(SchemaError, match="period"):
            load_series_csv(path, VariableKind.GDP, Frequency.QUARTERLY)

    def test_non_numeric_cell_names_row_and_column(self, tmp_path):
        path = write_csv(
            tmp_path / "g.csv",
            ["period", "AAA", "BBB"],
            [["2015Q1", 1.0, 2.0], ["2015Q2", "oops", 3.0]],
        )
        with pytest.raises(SchemaError, match=r"3.*AAA|AAA.*3"):
            load_series_csv(path, VariableKind.GDP, Frequency.QUARTERLY)

    def test_paper_window_has_45_periods(self, tmp_path):
        # 2012Q4 through 2023Q4 inclusive
        path = write_csv(
            tmp_path / "g.csv",
            ["period"] + [f"C{i:02d}" for i in range(13)],
            quarterly_rows(start="2012Q4", count=45, ncols=13),
        )
        rs = load_series_csv(path, VariableKind.GDP, Frequency.QUARTERLY)
        assert rs.periods[0] == "2012Q4"
        assert rs.periods[-1] == "2023Q4"
        assert len(rs.periods) == 45


def annual_set(values, labels=("AAA",), start_year=2012):
    values = np.atleast_2d(np.asarray(values, dtype=float))
    if values.shape[1] != len(labels):
        values = values.T
    return RawSeriesSet(
        variable_kind=VariableKind.CPI,
        frequency=Frequency.ANNUAL,
        labels=tuple(labels),
        periods=tuple(str(start_year + t) for t in range(values.shape[0])),
        values=values,
    )


class TestInterpolation:
    def test_constant_series_stays_constant(self):
        out = interpolate_annual_to_quarterly(annual_set([50, 50, 50]), anchor=4)
        assert np.all(out.values == 50.0)

    def test_equally_spaced_linear_steps(self):
        out = interpolate_annual_to_quarterly(annual_set([40, 44]), anchor=4)
        assert out.periods == ("2012Q4", "2013Q1", "2013Q2", "2013Q3", "2013Q4")
        assert out.values[:, 0].tolist() == [40.0, 41.0, 42.0, 43.0, 44.0]

    def test_twelve_years_anchor_q4_gives_45_quarters(self):
        out = interpolate_annual_to_quarterly(annual_set(list(range(12))), anchor=4)
        assert len(out.periods) == 45
        assert out.periods[0] == "2012Q4"
        assert out.periods[-1] == "2023Q4"

    def test_anchored_values_exact(self):
        vals = [40.1, 47.7, 39.3, 55.5]
        out = interpolate_annual_to_quarterly(annual_set(vals), anchor=2)
        for t, v in enumerate(vals):
            assert out.values[4 * t, 0] == v  # bit-for-bit

    def test_too_few_points(self):
        with pytest.raises(InsufficientDataError):
            interpolate_annual_to_quarterly(annual_set([50]), anchor=4)

    def test_rejects_quarterly_input(self):
        rs = annual_set([1, 2, 3])
        quarterly = interpolate_annual_to_quarterly(rs)
        with pytest.raises(SchemaError):
            interpolate_annual_to_quarterly(quarterly)

    @settings(max_examples=40, deadline=None)
    @given(
        values=st.lists(
            st.floats(min_value=-1e3, max_value=1e3), min_size=2, max_size=8
        ),
        a=st.floats(min_value=-5, max_value=5),
        b=st.floats(min_value=-100, max_value=100),
    )
    def test_affine_equivariance(self, values, a, b):
        base = interpolate_annual_to_quarterly(annual_set(values), anchor=4)
        scaled = interpolate_annual_to_quarterly(
            annual_set([a * v + b for v in values]), anchor=4
        )
        expected = a * base.values + b
        scale = max(1.0, np.max(np.abs(expected)))
        assert np.max(np.abs(scaled.values - expected)) <= 1e-12 * scale


def quarterly_set(kind, labels, start, values):
    q0 = quarter_index(start)
    return RawSeriesSet(
        variable_kind=kind,
        frequency=Frequency.QUARTERLY,
        labels=tuple(labels),
        periods=tuple(quarter_label(q0 + t) for t in range(values.shape[0])),
        values=values,
    )


class TestAlignPanel:
    def test_identity_alignment(self):
        rng = np.random.default_rng(0)
        g = quarterly_set(VariableKind.GDP, ("AAA", "BBB"), "2012Q4", rng.normal(size=(45, 2)))
        c = quarterly_set(VariableKind.CPI, ("AAA", "BBB"), "2012Q4", rng.normal(size=(45, 2)))
        panel = align_panel(g, c)
        assert panel.T == 45
        assert np.array_equal(panel.x, g.values)
        assert np.array_equal(panel.y, c.values)

    def test_extra_quarter_is_dropped(self):
        rng = np.random.default_rng(1)
        g = quarterly_set(VariableKind.GDP, ("AAA",), "2012Q4", rng.normal(size=(46, 1)))
        c = quarterly_set(VariableKind.CPI, ("AAA",), "2012Q4", rng.normal(size=(45, 1)))
        panel = align_panel(g, c)
        assert panel.T == 45
        assert panel.quarters[-1] == "2023Q4"

    def test_column_reorder_to_gdp_order(self):
        g = quarterly_set(VariableKind.GDP, ("AAA", "BBB"), "2020Q1",
                          np.array([[1.0, 2.0], [3.0, 4.0]]))
        c = quarterly_set(VariableKind.CPI, ("BBB", "AAA"), "2020Q1",
                          np.array([[20.0, 10.0], [40.0, 30.0]]))
        panel = align_panel(g, c)
        assert panel.labels == ("AAA", "BBB")
        assert panel.y.tolist() == [[10.0, 20.0], [30.0, 40.0]]

    def test_label_mismatch_lists_difference(self):
        g = quarterly_set(VariableKind.GDP, ("AAA", "BBB"), "2020Q1", np.zeros((3, 2)))
        c = quarterly_set(VariableKind.CPI, ("AAA", "CCC"), "2020Q1", np.zeros((3, 2)))
        with pytest.raises(LabelMismatchError) as exc:
            align_panel(g, c)
        assert exc.value.only_gdp == ["BBB"]
        assert exc.value.only_cpi == ["CCC"]

    def test_empty_intersection(self):
        g = quarterly_set(VariableKind.GDP, ("AAA",), "2010Q1", np.zeros((4, 1)))
        c = quarterly_set(VariableKind.CPI, ("AAA",), "2020Q1", np.zeros((4, 1)))
        with pytest.raises(AlignmentError):
            align_panel(g, c)

    def test_idempotent(self):
        rng = np.random.default_rng(2)
        g = quarterly_set(VariableKind.GDP, ("AAA", "BBB"), "2012Q4", rng.normal(size=(45, 2)))
        c = quarterly_set(VariableKind.CPI, ("AAA", "BBB"), "2012Q4", rng.normal(size=(45, 2)))
        p1 = align_panel(g, c)
        g2 = quarterly_set(VariableKind.GDP, p1.labels, p1.quarters[0], p1.x)
        c2 = quarterly_set(VariableKind.CPI, p1.labels, p1.quarters[0], p1.y)
        p2 = align_panel(g2, c2)
        assert np.array_equal(p1.x, p2.x)
        assert np.array_equal(p1.y, p2.y)
        assert p1.quarters == p2.quarters


class TestPanelRoundTrip:
    def test_csv_round_trip_exact(self, tmp_path):
        rng = np.random.default_rng(3)
        panel = Panel(
            labels=("AAA", "BBB"),
            quarters=tuple(quarter_label(quarter_index("2012Q4") + t) for t in range(10)),
            x=rng.normal(size=(10, 2)) * 1e4,
            y=rng.normal(size=(10, 2)),
        )
        path = tmp_path / "panel.csv"
        panel_to_csv(panel, path)
        back = panel_from_csv(path)
        assert back.labels == panel.labels
        assert back.quarters == panel.quarters
        assert np.array_equal(back.x, panel.x)
        assert np.array_equal(back.y, panel.y)


class TestBundledSnapshot:
    def test_reconstruction_t45_n13(self, data_dir):
        g = load_series_csv(data_dir / "gdp_quarterly.csv", VariableKind.GDP, Frequency.QUARTERLY)
        c = load_series_csv(data_dir / "cpi_annual.csv", VariableKind.CPI, Frequency.ANNUAL)
        cq = interpolate_annual_to_quarterly(c, anchor=4)
        panel = align_panel(g, cq)
        assert panel.T == 45
        assert panel.n == 13
        assert panel.quarters[0] == "2012Q4"
        assert panel.quarters[-1] == "2023Q4"
