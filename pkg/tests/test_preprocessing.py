import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crtree import (
    MISSING,
    MISSING_LABEL,
    AttributeSchema,
    BinDirective,
    Dataset,
    ValidationError,
    apply_schema_discretization,
    discretize,
    resolve_missing,
)
from crtree.preprocessing import fit_bin_rule

from helpers import bp_example_dataset


def column_dataset(values, name="x"):
    schema = [AttributeSchema(name, kind="numeric"), AttributeSchema("label", role="class")]
    return Dataset(schema, [(v, "p") for v in values])


class TestEqualWidth:
    def test_bp_column_cut_points_and_bins(self):
        # [60, 120] in 3 bins cuts at 60+20k: 80 and 100
        d = discretize(bp_example_dataset(), "BP", "equal-width", 3)
        rule = fit_bin_rule([60.0, 120.0], "equal-width", 3)
        assert rule.cut_points == (80.0, 100.0)
        col = dict(zip(bp_example_dataset().column("BP"), d.column("BP")))
        assert col[75.0] == "bin-1"
        assert col[95.0] == "bin-2"
        assert col[120.0] == "bin-3"

    def test_boundary_goes_to_upper_bin_last_closed(self):
        rule = fit_bin_rule([60.0, 120.0], "equal-width", 3)
        assert rule.assign(80.0) == "bin-2"
        assert rule.assign(100.0) == "bin-3"
        assert rule.assign(120.0) == "bin-3"
        assert rule.assign(60.0) == "bin-1"

    def test_constant_column_single_populated_bin(self):
        d = discretize(column_dataset([5.0, 5.0, 5.0]), "x", "equal-width", 5)
        assert d.column("x") == ["bin-1", "bin-1", "bin-1"]

    def test_attribute_becomes_categorical(self):
        d = discretize(column_dataset([1.0, 2.0]), "x", "equal-width", 2)
        attr = d.attribute("x")
        assert attr.kind == "categorical"
        assert attr.domain == ("bin-1", "bin-2")
        assert attr.discretize is None


class TestEqualFrequency:
    def test_median_cut(self):
        d = discretize(column_dataset([1.0, 2.0, 3.0, 4.0]), "x", "equal-frequency", 2)
        assert d.column("x") == ["bin-1", "bin-1", "bin-2", "bin-2"]

    def test_ties_go_to_lower_bin(self):
        d = discretize(column_dataset([1.0, 1.0, 1.0, 2.0]), "x", "equal-frequency", 2)
        assert d.column("x") == ["bin-1", "bin-1", "bin-1", "bin-2"]

    def test_degrades_to_one_bin_per_distinct_value(self):
        d = discretize(column_dataset([1.0, 1.0, 2.0]), "x", "equal-frequency", 5)
        assert d.column("x") == ["bin-1", "bin-1", "bin-2"]

    def test_duplicate_cuts_collapse(self):
        values = [1.0] * 6 + [2.0, 3.0]
        d = discretize(column_dataset(values), "x", "equal-frequency", 4)
        assert set(d.column("x")) == {"bin-1", "bin-2", "bin-3"}


class TestDiscretizeContract:
    def test_missing_stays_missing(self):
        schema = [AttributeSchema("x", kind="numeric"), AttributeSchema("label", role="class")]
        d = Dataset(schema, [(1.0, "p"), (MISSING, "p"), (3.0, "p")])
        out = discretize(d, "x", "equal-width", 2)
        assert out.column("x")[1] is MISSING

    def test_other_columns_untouched_and_row_count_kept(self):
        d = bp_example_dataset()
        out = discretize(d, "BP", "equal-width", 5)
        assert len(out) == len(d)
        assert out.column("BS") == d.column("BS")
        assert out.class_column() == d.class_column()

    def test_requires_numeric(self):
        d = discretize(column_dataset([1.0, 2.0]), "x", "equal-width", 2)
        with pytest.raises(ValidationError):
            discretize(d, "x", "equal-width", 2)

    def test_rejects_bins_below_two(self):
        with pytest.raises(ValidationError):
            discretize(column_dataset([1.0, 2.0]), "x", "equal-width", 1)

    def test_all_missing_rejected(self):
        schema = [AttributeSchema("x", kind="numeric"), AttributeSchema("label", role="class")]
        d = Dataset(schema, [(MISSING, "p")])
        with pytest.raises(ValidationError):
            discretize(d, "x", "equal-width", 2)

    @given(
        values=st.lists(st.floats(-1e6, 1e6), min_size=2, max_size=30),
        method=st.sampled_from(["equal-width", "equal-frequency"]),
        bins=st.integers(2, 6),
        seed=st.randoms(),
    )
    @settings(max_examples=60, deadline=None)
    def test_row_permutation_leaves_cuts_and_assignment_unchanged(
        self, values, method, bins, seed
    ):
        d = column_dataset(values)
        out = dict(zip(values, discretize(d, "x", method, bins).column("x")))
        shuffled = list(values)
        seed.shuffle(shuffled)
        out2 = dict(zip(shuffled, discretize(column_dataset(shuffled), "x", method, bins).column("x")))
        assert out == out2

    def test_apply_schema_discretization(self):
        schema = [
            AttributeSchema("a", kind="numeric", discretize=None),
            AttributeSchema("b", kind="numeric", discretize=BinDirective("equal-width", 2)),
            AttributeSchema("label", role="class"),
        ]
        d = Dataset(schema, [(1.0, 10.0, "p"), (2.0, 20.0, "n")])
        out = apply_schema_discretization(d)
        assert out.attribute("a").kind == "numeric"
        assert out.column("b") == ["bin-1", "bin-2"]


class TestResolveMissing:
    def make(self, values, domain=None):
        schema = [
            AttributeSchema("x", domain=domain),
            AttributeSchema("label", role="class"),
        ]
        return Dataset(schema, [(v, "p") for v in values])

    def test_mode_impute_unique_mode(self):
        d = self.make(["a", "a", "b", MISSING])
        assert resolve_missing(d, "mode-impute").column("x") == ["a", "a", "b", "a"]

    def test_own_category(self):
        d = self.make(["a", "a", "b", MISSING])
        out = resolve_missing(d, "own-category")
        assert out.column("x") == ["a", "a", "b", MISSING_LABEL]

    def test_mode_tie_broken_by_domain_order(self):
        d = self.make(["a", "b", MISSING], domain=("a", "b"))
        assert resolve_missing(d, "mode-impute").column("x")[2] == "a"
        d2 = self.make(["a", "b", MISSING], domain=("b", "a"))
        assert resolve_missing(d2, "mode-impute").column("x")[2] == "b"

    def test_numeric_mode_tie_takes_smallest(self):
        schema = [AttributeSchema("x", kind="numeric"), AttributeSchema("label", role="class")]
        d = Dataset(schema, [(2.0, "p"), (1.0, "p"), (MISSING, "p")])
        assert resolve_missing(d, "mode-impute").column("x")[2] == 1.0

    def test_entirely_missing_column_rejected_under_mode(self):
        d = self.make([MISSING, MISSING])
        with pytest.raises(ValidationError):
            resolve_missing(d, "mode-impute")

    def test_own_category_extends_declared_domain(self):
        d = self.make(["a", MISSING], domain=("a", "b"))
        out = resolve_missing(d, "own-category")
        assert MISSING_LABEL in out.attribute("x").domain

    @pytest.mark.parametrize("policy", ["own-category", "mode-impute"])
    def test_idempotent(self, policy):
        d = self.make(["a", "a", "b", MISSING])
        once = resolve_missing(d, policy)
        twice = resolve_missing(once, policy)
        assert once.rows == twice.rows

    def test_no_missing_feature_cells_remain(self):
        schema = [
            AttributeSchema("x"),
            AttributeSchema("n", kind="numeric"),
            AttributeSchema("label", role="class"),
        ]
        d = Dataset(schema, [("a", 1.0, "p"), (MISSING, MISSING, "n")])
        out = resolve_missing(d, "own-category")
        assert all(v is not MISSING for row in out.rows for v in row)

    def test_own_category_then_discretize_keeps_reserved_label(self):
        schema = [AttributeSchema("x", kind="numeric"), AttributeSchema("label", role="class")]
        d = Dataset(schema, [(1.0, "p"), (MISSING, "n"), (5.0, "p")])
        out = discretize(resolve_missing(d, "own-category"), "x", "equal-width", 2)
        assert out.column("x") == ["bin-1", MISSING_LABEL, "bin-2"]
        assert MISSING_LABEL in out.attribute("x").domain

    def test_identifier_columns_left_alone(self):
        schema = [
            AttributeSchema("id", role="identifier"),
            AttributeSchema("x"),
            AttributeSchema("label", role="class"),
        ]
        d = Dataset(schema, [(MISSING, "a", "p")])
        out = resolve_missing(d, "own-category")
        assert out.rows[0][0] is MISSING
