import math

import numpy as np
import pytest

from sobesov.corpus import GeneratorSpec, SampledFunction, dilate, generate, lp_norm, make_grid
from sobesov.errors import ConditionViolated, InvalidArgument
from sobesov.inequalities import EvalContext
from sobesov.norms import sobolev_seminorm
from sobesov.pointwise import (
    averaged_difference_integral,
    dyadic_radii,
    g_functional,
    maximal_function,
    pointwise_bound_check,
)


@pytest.fixture(scope="module")
def grid():
    return make_grid(1, 256, 16.0)


@pytest.fixture(scope="module")
def ctx(grid):
    return EvalContext.build(grid)


@pytest.fixture(scope="module")
def gaussian(grid):
    return generate(GeneratorSpec("gaussian", {"width": 1.0}), grid)


def constant(grid, c):
    return SampledFunction(grid=grid, values=np.full(grid.n_per_axis, c), label=f"c{c}")


def test_dyadic_radii(grid):
    radii = dyadic_radii(grid)
    assert radii[0] == grid.spacing
    assert radii[-1] == 8.0
    assert len(radii) == 8


def test_maximal_of_constant(grid):
    m = maximal_function(constant(grid, -2.0))
    assert np.allclose(m.values, 2.0, rtol=0, atol=1e-14)


def test_maximal_lower_bound_smallest_radius(grid, gaussian):
    # M f dominates the smallest-radius average everywhere
    m = maximal_function(gaussian).values
    absf = np.abs(gaussian.values)
    small = (absf + np.roll(absf, 1) + np.roll(absf, -1)) / 3.0
    assert np.all(m >= small - 1e-14)


def test_maximal_sup_bound(grid, gaussian):
    m = maximal_function(gaussian)
    assert np.max(m.values) <= np.max(np.abs(gaussian.values)) + 1e-14


def test_maximal_l2_bound(grid):
    # measured operator bound on the corpus, frozen as a regression limit
    from sobesov.corpus import reference_corpus_specs

    worst = 0.0
    for spec in reference_corpus_specs(grid):
        f = generate(spec, grid)
        m = maximal_function(f)
        mf = SampledFunction(grid=grid, values=m.values, label=f"M({f.label})")
        worst = max(worst, lp_norm(mf, 2) / lp_norm(f, 2))
    assert worst <= 10.0


def test_g_constant_vanishes(grid):
    g = g_functional(constant(grid, 4.0), 0.5, 2)
    assert np.max(g.values) == 0.0


def test_g_p_monotonicity(grid, gaussian):
    # averaging then p-th root grows with p on each ball
    g1 = g_functional(gaussian, 0.5, 1).values
    g2 = g_functional(gaussian, 0.5, 2).values
    g4 = g_functional(gaussian, 0.5, 4).values
    assert np.all(g1 <= g2 * (1 + 1e-12))
    assert np.all(g2 <= g4 * (1 + 1e-12))


def test_g_lp_controlled_by_seminorm(grid, gaussian):
    g = g_functional(gaussian, 0.5, 2)
    gf = SampledFunction(grid=grid, values=g.values, label="G(gaussian)")
    ratio = lp_norm(gf, 2) / sobolev_seminorm(gaussian, 0.5, 2).value
    assert ratio <= 10.0


def test_g_rejects_bad_params(grid, gaussian):
    with pytest.raises(InvalidArgument):
        g_functional(gaussian, 1.5, 2)
    with pytest.raises(InvalidArgument):
        g_functional(gaussian, 0.5, math.inf)


def test_bound_check_zero_function(grid, ctx):
    z = constant(grid, 0.0)
    rep = pointwise_bound_check(z, "eq1.1", {"s": 1, "alpha": 0.5, "p": 2}, ctx)
    assert rep.empirical_c == 0.0
    assert np.all(rep.lhs.values == 0.0)


@pytest.mark.parametrize(
    "bound_id,params",
    [
        ("eq1.1", {"s": 1, "alpha": 0.5, "p": 2}),
        ("eq1.1b", {"s": 1}),
        ("eq1.13", {"alpha1": 0.25, "alpha2": 0.75, "p1": 2, "p": 1}),
        ("eq1.23", {"alpha1": 0.5, "p1": 2}),
        ("eq2.5a", {"alpha0": 0.2, "alpha1": 0.5, "alpha2": 0.8, "p0": 2, "p1": 2, "p2": 2}),
        ("eq2.5", {"alpha0": 0.2, "alpha1": 0.5, "p0": 2, "p1": 2}),
    ],
)
def test_bound_scaling_invariance(grid, ctx, gaussian, bound_id, params):
    # every estimate is exactly balanced, so the max ratio ignores rescaling
    a = pointwise_bound_check(gaussian, bound_id, params, ctx)
    b = pointwise_bound_check(gaussian.scaled(7.0), bound_id, params, ctx)
    assert a.empirical_c > 0.0
    assert b.empirical_c == pytest.approx(a.empirical_c, rel=1e-10)


def test_bound_dilation_stability(grid, ctx, gaussian):
    a = pointwise_bound_check(gaussian, "eq1.1", {"s": 1, "alpha": 0.5, "p": 2}, ctx)
    b = pointwise_bound_check(
        dilate(gaussian, 2), "eq1.1", {"s": 1, "alpha": 0.5, "p": 2}, ctx
    )
    assert b.empirical_c == pytest.approx(a.empirical_c, rel=0.15)


def test_bound_rejects_bad_exponents(grid, ctx, gaussian):
    with pytest.raises(ConditionViolated):
        pointwise_bound_check(gaussian, "eq1.13", {"alpha1": 0.8, "alpha2": 0.5, "p1": 2, "p": 1}, ctx)


def test_two_term_envelope_dominates_integral(grid, gaussian):
    # the z-integral is controlled by the best two-term split over dyadic t
    a1, p1, a2 = 0.25, 2.0, 0.75
    lhs = averaged_difference_integral(gaussian, a1, p1).values
    m = maximal_function(gaussian).values
    g = g_functional(gaussian, a2, 1).values
    best = None
    for t in dyadic_radii(grid):
        cand = t ** ((a2 - a1) * p1) * g ** p1 + t ** (-a1 * p1) * m ** p1
        best = cand if best is None else np.minimum(best, cand)
    mask = best > 1e-12 * best.max()
    c = np.max(lhs[mask] / best[mask])
    assert c <= 50.0  # bounded two-term envelope constant


def test_2d_fields_smoke():
    g2 = make_grid(2, 32, 8.0)
    f = generate(GeneratorSpec("gaussian", {"width": 0.5}), g2)
    m = maximal_function(f)
    assert m.values.shape == (32, 32)
    assert np.max(m.values) <= 1.0 + 1e-12
    gf = g_functional(f, 0.5, 2)
    assert np.all(gf.values >= 0)
    ad = averaged_difference_integral(f, 0.5, 2)
    assert np.all(ad.values >= 0)


def test_export_field_csv(tmp_path, grid, gaussian):
    from sobesov.pointwise import export_field_csv

    m = maximal_function(gaussian)
    path = tmp_path / "field.csv"
    export_field_csv(m, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "x,value"
    assert len(lines) == grid.n_per_axis + 1
