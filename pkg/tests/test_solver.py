import math

import pytest

from invroot import catalog
from invroot.errors import (
    AdmissibilityError,
    BracketError,
    ConfigurationError,
    DegenerateOffsetError,
    DomainError,
    NoRootInBracketError,
)
from invroot.model import FunctionModel
from invroot.numeric import Interval, Tolerance
from invroot.solver import (
    ComparisonError,
    SolverConfig,
    compare_methods,
    solve_identity,
    solve_oracle_bisect,
)

import oracles


@pytest.fixture
def ln_model():
    return catalog.make("log")


@pytest.fixture
def affine():
    return catalog.make("affine", (2, -4))


# -- identity solver ---------------------------------------------------------


def test_solve_ln(ln_model):
    result = solve_identity(ln_model, SolverConfig(Interval(0.2, 5.0)))
    assert result.root == pytest.approx(1.0, abs=1e-12)
    assert result.method == "identity" and result.ok
    assert not result.spurious_filtered
    assert result.h_used != 0


def test_solve_affine_filters_spurious(affine):
    result = solve_identity(affine, SolverConfig(Interval(-1.0, 3.0)))
    assert result.root == pytest.approx(2.0, abs=1e-12)
    assert result.spurious_filtered
    # R factors as -alpha * (2 alpha - 4)
    assert result.residual_at_root == pytest.approx(-result.root * (2 * result.root - 4), abs=1e-12)


def test_solve_exp_shift():
    m = catalog.make("exp-shift", (2,))
    result = solve_identity(m, SolverConfig(Interval(0.1, 2.0)))
    assert result.root == pytest.approx(oracles.EXP_SHIFT_ROOT, abs=1e-12)


def test_without_filtering_spurious_zero_is_flagged(affine):
    result = solve_identity(affine, SolverConfig(Interval(-1.0, 1.0), filter_spurious=False))
    assert result.root == pytest.approx(0.0, abs=1e-12)
    assert result.status == "spurious" and not result.ok


def test_genuine_root_at_zero_is_returned():
    m = catalog.make("affine", (3.0, 0.0))
    result = solve_identity(m, SolverConfig(Interval(-1.0, 2.0)))
    assert result.root == 0.0 and result.ok and not result.spurious_filtered


def test_fixed_offset(ln_model):
    result = solve_identity(ln_model, SolverConfig(Interval(0.2, 5.0), h=-0.05))
    assert result.root == pytest.approx(1.0, abs=1e-12)
    assert result.h_used == -0.05


def test_bracket_filling_domain(ln_model):
    result = solve_identity(ln_model, SolverConfig(ln_model.domain))
    assert result.root == pytest.approx(1.0, abs=1e-12)


# -- errors ------------------------------------------------------------------


def test_no_sign_change(ln_model):
    with pytest.raises(BracketError) as exc:
        solve_identity(ln_model, SolverConfig(Interval(2.0, 5.0)))
    assert not isinstance(exc.value, NoRootInBracketError)


def test_spurious_only_bracket(affine):
    with pytest.raises(NoRootInBracketError):
        solve_identity(affine, SolverConfig(Interval(-1.0, 1.0)))


def test_offset_leaving_domain(ln_model):
    with pytest.raises(DomainError):
        solve_identity(ln_model, SolverConfig(Interval(0.2, 5.0), h=6.0))


def test_bracket_outside_domain(ln_model):
    with pytest.raises(DomainError):
        solve_identity(ln_model, SolverConfig(Interval(0.05, 5.0)))


def test_inadmissible_model():
    with pytest.raises(AdmissibilityError):
        solve_identity(FunctionModel(lambda x: x * x - 1, Interval(-2.0, 2.0)), SolverConfig(Interval(0.5, 2.0)))


def test_config_validation():
    with pytest.raises(DegenerateOffsetError):
        SolverConfig(Interval(0.0, 1.0), h=0.0)
    with pytest.raises(ConfigurationError):
        SolverConfig(Interval(0.0, 1.0), h="tiny")
    with pytest.raises(ConfigurationError):
        SolverConfig(Interval(0.0, 1.0), h=math.inf)


# -- oracle and comparison ---------------------------------------------------


@pytest.mark.parametrize("model, bracket, expected", [
    (catalog.make("log"), Interval(0.2, 5.0), 1.0),
    (catalog.make("affine", (2, -4)), Interval(0.0, 5.0), 2.0),
    (catalog.make("exp-shift", (2,)), Interval(0.0, 2.0), oracles.EXP_SHIFT_ROOT),
])
def test_oracle_examples(model, bracket, expected):
    result = solve_oracle_bisect(model, bracket)
    assert result.root == pytest.approx(expected, abs=1e-12)
    assert result.method == "oracle" and result.h_used is None


def test_oracle_no_sign_change(ln_model):
    with pytest.raises(BracketError):
        solve_oracle_bisect(ln_model, Interval(2.0, 5.0))


def test_oracle_iteration_cap(ln_model):
    with pytest.raises(Exception) as exc:
        solve_oracle_bisect(ln_model, Interval(0.2, 5.0), Tolerance(max_iterations=3))
    assert exc.value.best is not None


@pytest.mark.parametrize("model, bracket, bound", [
    (catalog.make("log"), Interval(0.2, 5.0), 1e-10),
    (catalog.make("affine", (2, -4)), Interval(-1.0, 3.0), 1e-12),
    (catalog.make("reciprocal", (1.0,), Interval(0.3, 4.0)), Interval(0.3, 4.0), 1e-10),
])
def test_compare_examples(model, bracket, bound):
    report = compare_methods(model, SolverConfig(bracket))
    assert report.difference <= bound
    assert report.agrees


def test_compare_tags_failing_method(ln_model):
    with pytest.raises(ComparisonError) as exc:
        compare_methods(ln_model, SolverConfig(Interval(2.0, 5.0)))
    assert set(exc.value.errors) == {"identity", "oracle"}
    assert exc.value.exit_code == 2


# -- properties --------------------------------------------------------------


def random_root_brackets(model, root, rng, n=20):
    d = model.domain
    for _ in range(n):
        yield Interval(rng.uniform(d.lo, root), rng.uniform(root, d.hi))


def _default(family):
    spec = catalog.family_info(family).default
    return catalog.instantiate(spec), catalog.known_root(spec)


@pytest.mark.parametrize("family", [info.family for info in catalog.list_families()])
def test_oracle_equivalence(family, rng):
    model, root = _default(family)
    for bracket in random_root_brackets(model, root, rng):
        a = solve_identity(model, SolverConfig(bracket)).root
        b = solve_oracle_bisect(model, bracket).root
        assert abs(a - b) <= 1e-9 * (1 + abs(root))
        assert bracket.lo <= a <= bracket.hi


@pytest.mark.parametrize("family", ["affine", "exp-shift", "cube-shift"])
def test_spurious_never_returned(family, rng):
    model, root = _default(family)
    d = model.domain
    assert 0.0 in d and model(0.0) != 0.0
    for _ in range(20):
        bracket = Interval(rng.uniform(d.lo, min(0.0, root)), rng.uniform(max(0.0, root), d.hi))
        result = solve_identity(model, SolverConfig(bracket))
        assert result.spurious_filtered
        assert abs(result.f_at_root) <= 1e-10
        assert abs(result.root - root) <= 1e-9 * (1 + abs(root))


@pytest.mark.parametrize("family", [info.family for info in catalog.list_families()])
def test_offset_policy_irrelevance(family, rng):
    model, root = _default(family)
    d = model.domain
    for _ in range(10):
        # leave room on the right for the largest offset
        lo = rng.uniform(d.lo, root)
        hi = rng.uniform(root, root + 0.5 * (d.hi - root))
        width = hi - lo
        if hi + 0.5 * width > d.hi:
            continue
        bracket = Interval(lo, hi)
        r1 = solve_identity(model, SolverConfig(bracket, h=0.1 * width)).root
        r2 = solve_identity(model, SolverConfig(bracket, h=0.5 * width)).root
        assert abs(r1 - r2) <= 1e-9 * (1 + abs(root))
