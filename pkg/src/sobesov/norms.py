"""Homogeneous norms and seminorms on sampled periodic functions.

Singular integrals are plain Riemann sums over grid offsets with the
natural periodic cutoffs (spacing <= |h| <= box/2); every result carries a
truncation record so that both sides of an inequality are always compared
under identical cutoffs.  Negative-smoothness and zero-smoothness band norms
subtract the mean first (the periodic stand-in for working modulo
polynomials); the raw variant stays available behind a flag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .corpus import Grid, SampledFunction, array_lp_norm, lp_norm
from .errors import InvalidArgument, MomentOrderTooLow
from .lpdecomp import (
    FilterBank,
    MollifierFamily,
    band,
    derivative_components,
    derivative_magnitude,
    mollify,
)


@dataclass(frozen=True)
class NormResult:
    """A computed norm value plus the discretization bookkeeping behind it."""

    value: float
    kind: str
    params: dict = field(default_factory=dict)
    truncation: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))
        if not (math.isfinite(self.value) and self.value >= 0.0):
            raise InvalidArgument(f"norm value must be finite and >= 0, got {self.value}")

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "value": self.value,
            "kind": self.kind,
            "params": dict(self.params),
            "truncation": dict(self.truncation),
        }


# ---------------------------------------------------------------------------
# offset machinery for the double-sum seminorms


def _offset_distances_1d(grid: Grid) -> np.ndarray:
    n = grid.n_per_axis
    i = np.arange(1, n)
    return np.minimum(i, n - i) * grid.spacing


def _pair_iter_1d(values: np.ndarray, grid: Grid):
    """Yield (periodic |h|, |f(x+h) - f(x)| array) for every nonzero offset."""
    n = grid.n_per_axis
    dists = _offset_distances_1d(grid)
    for i in range(1, n):
        yield dists[i - 1], np.abs(np.roll(values, -i) - values)


def _pair_iter_2d(values: np.ndarray, grid: Grid):
    n = grid.n_per_axis
    h = grid.spacing
    ax = np.minimum(np.arange(n), n - np.arange(n)) * h
    for a in range(n):
        da = ax[a]
        rolled_a = np.roll(values, -a, axis=0)
        for b in range(n):
            if a == 0 and b == 0:
                continue
            dist = math.hypot(da, ax[b])
            if dist > 0.5 * grid.box_length:
                continue
            yield dist, np.abs(np.roll(rolled_a, -b, axis=1) - values)


def _pair_iter(f: SampledFunction):
    if f.grid.dim == 1:
        return _pair_iter_1d(f.values, f.grid)
    return _pair_iter_2d(f.values, f.grid)


def sobolev_seminorm(f: SampledFunction, alpha: float, p: float) -> NormResult:
    """Gagliardo double-sum seminorm for smoothness in (0, 1), p < inf.

    (sum_x sum_h |f(x+h)-f(x)|^p / |h|^(n + alpha p) * cell^2)^(1/p) with the
    periodic offset range spacing <= |h| <= box/2.
    """
    if not (0.0 < alpha < 1.0):
        raise InvalidArgument(
            f"alpha must be in (0,1) for the double-sum form, got {alpha}; "
            "use sobolev_norm_general for other orders"
        )
    if p == math.inf:
        raise InvalidArgument("p = inf dispatches to holder_seminorm")
    if p < 1:
        raise InvalidArgument(f"p must be >= 1, got {p}")
    grid = f.grid
    n_dim = grid.dim
    acc = 0.0
    for dist, diff in _pair_iter(f):
        if p == 2.0:
            s = float(np.sum(diff * diff))
        elif p == 1.0:
            s = float(np.sum(diff))
        else:
            s = float(np.sum(diff ** p))
        acc += s * dist ** (-(n_dim + alpha * p))
    value = (acc * grid.cell_volume ** 2) ** (1.0 / p)
    return NormResult(
        value=value,
        kind="sobolev",
        params={"alpha": alpha, "p": p},
        truncation={"h_min": grid.spacing, "h_max": 0.5 * grid.box_length},
    )


def holder_seminorm(f: SampledFunction, alpha: float) -> NormResult:
    """Max difference quotient |f(x+h)-f(x)| / |h|^alpha over grid pairs."""
    if not (0.0 < alpha < 1.0):
        raise InvalidArgument(f"alpha must be in (0,1), got {alpha}")
    grid = f.grid
    best = 0.0
    for dist, diff in _pair_iter(f):
        m = float(np.max(diff))
        best = max(best, m / dist ** alpha)
    return NormResult(
        value=best,
        kind="holder",
        params={"alpha": alpha},
        truncation={"h_min": grid.spacing, "h_max": 0.5 * grid.box_length},
    )


# ---------------------------------------------------------------------------
# band-sum and mollifier-sup norms


def besov_norm(
    f: SampledFunction,
    s: float,
    p: float,
    q: float,
    bank: FilterBank,
    subtract_mean: bool = True,
) -> NormResult:
    """Dyadic band norm (sum_j 2^(j s q) ||band_j f||_p^q)^(1/q); sup when q = inf."""
    if p < 1 or q < 1:
        raise InvalidArgument(f"p, q must be in [1, inf], got p={p}, q={q}")
    g = f
    mean = float(np.mean(f.values))
    if subtract_mean:
        g = SampledFunction(grid=f.grid, values=f.values - mean, label=f"{f.label}-mean")
    band_norms = []
    recon = np.zeros_like(f.values)
    for j in bank.bands:
        bj = band(g, j, bank)
        recon = recon + bj.values
        band_norms.append((j, array_lp_norm(bj.values, f.grid, p)))
    if q == math.inf:
        value = max((2.0 ** (j * s) * bn for j, bn in band_norms), default=0.0)
    else:
        value = sum((2.0 ** (j * s) * bn) ** q for j, bn in band_norms) ** (1.0 / q)

    centered = g.values
    total_energy = float(np.sum(centered * centered))
    if total_energy > 0.0:
        resid = centered - recon
        residual_mass = float(np.sum(resid * resid)) / total_energy
    else:
        residual_mass = 0.0
    peak = float(np.max(np.abs(f.values)))
    dc_mass = abs(mean) / peak if peak > 0 else 0.0
    return NormResult(
        value=float(value),
        kind="besov",
        params={"s": s, "p": p, "q": q},
        truncation={
            "j_min": bank.j_min,
            "j_max": bank.j_max,
            "residual_mass": residual_mass,
            "dc_mass": dc_mass,
            "mean_subtracted": subtract_mean,
        },
    )


def besov_sup_mollifier(
    f: SampledFunction,
    s: float,
    family: MollifierFamily,
    subtract_mean: bool = True,
) -> NormResult:
    """Sup over the family of eps^(-s) * ||phi_eps * f||_inf."""
    if s >= family.moment_order:
        raise MomentOrderTooLow(
            f"smoothness {s} requires moment order > s, family has {family.moment_order}"
        )
    g = f
    if subtract_mean:
        g = SampledFunction(
            grid=f.grid,
            values=f.values - float(np.mean(f.values)),
            label=f"{f.label}-mean",
        )
    value = 0.0
    for eps in family.epsilons:
        sup = float(np.max(np.abs(mollify(g, eps, family).values)))
        value = max(value, eps ** (-s) * sup)
    return NormResult(
        value=value,
        kind="besov_sup_mollifier",
        params={"s": s},
        truncation={
            "epsilons": list(family.epsilons),
            "moment_order": family.moment_order,
            "mean_subtracted": subtract_mean,
        },
    )


# ---------------------------------------------------------------------------
# BMO


def _window_means_1d(values: np.ndarray, w: int, anchors: np.ndarray) -> np.ndarray:
    csum = np.concatenate([[0.0], np.cumsum(np.concatenate([values, values]))])
    return (csum[anchors + w] - csum[anchors]) / w


def bmo_norm(f: SampledFunction) -> NormResult:
    """Max mean oscillation over dyadic anchored cubes.

    Cube side lengths are box/2^i for i = 1 .. log2(n)-2, anchored on the
    half-side lattice, so the smallest cube spans 4 cells and neighboring
    cubes overlap by half a side.  This under-approximates the all-cubes sup
    by a bounded factor, which is fine for one-sided embedding checks.
    """
    grid = f.grid
    n = grid.n_per_axis
    v = f.values
    levels = int(math.log2(n)) - 2
    best = 0.0
    sides = []
    for i in range(1, levels + 1):
        w = n >> i
        sides.append(w * grid.spacing)
        step = max(1, w // 2)
        anchors = np.arange(0, n, step)
        if grid.dim == 1:
            ext = np.concatenate([v, v])
            for a in anchors:
                win = ext[a : a + w]
                mu = win.mean()
                best = max(best, float(np.mean(np.abs(win - mu))))
        else:
            ext = np.concatenate([v, v], axis=0)
            ext = np.concatenate([ext, ext], axis=1)
            for a in anchors:
                for b in anchors:
                    win = ext[a : a + w, b : b + w]
                    mu = win.mean()
                    best = max(best, float(np.mean(np.abs(win - mu))))
    return NormResult(
        value=best,
        kind="bmo",
        params={},
        truncation={"cube_sides": sides, "anchoring": "half-side lattice"},
    )


# ---------------------------------------------------------------------------
# directional differences


def directional_difference_seminorm(f: SampledFunction, s: float, p: float) -> NormResult:
    """Axis-difference seminorm (sum_k int ||f(.+t e_k) - f||_p^p dt / t^(1+sp))^(1/p).

    The t-integral runs over a geometric grid of ratio 2^(1/8) between spacing
    and box/2; shifts at non-grid t use linear interpolation between the two
    neighboring grid shifts (method recorded in the truncation metadata).
    """
    if not (0.0 < s < 1.0):
        raise InvalidArgument(f"s must be in (0,1), got {s}")
    if not (1.0 <= p < math.inf):
        raise InvalidArgument(f"p must be in [1, inf), got {p}")
    grid = f.grid
    h = grid.spacing
    t_max = 0.5 * grid.box_length
    ratio = 2.0 ** (1.0 / 8.0)
    ts = []
    t = h
    while t <= t_max * (1.0 + 1e-12):
        ts.append(t)
        t *= ratio
    log_step = math.log(ratio)
    acc = 0.0
    v = f.values
    for axis in range(grid.dim):
        for t in ts:
            cells = t / h
            lo = int(math.floor(cells))
            frac = cells - lo
            shifted = np.roll(v, -lo, axis=axis)
            if frac > 1e-12:
                shifted = (1.0 - frac) * shifted + frac * np.roll(v, -(lo + 1), axis=axis)
            diff = np.abs(shifted - v)
            if p == 2.0:
                sp_ = float(np.sum(diff * diff))
            elif p == 1.0:
                sp_ = float(np.sum(diff))
            else:
                sp_ = float(np.sum(diff ** p))
            # dt = t * log(ratio) on the geometric grid
            acc += sp_ * grid.cell_volume * t ** (-(1.0 + s * p)) * t * log_step
    value = acc ** (1.0 / p)
    return NormResult(
        value=value,
        kind="sobolev_directional",
        params={"s": s, "p": p},
        truncation={
            "t_min": h,
            "t_max": t_max,
            "ratio": "2^(1/8)",
            "shift_method": "roll+linear-interp",
        },
    )


# ---------------------------------------------------------------------------
# general-order dispatcher


def sobolev_norm_general(f: SampledFunction, alpha: float, p: float) -> NormResult:
    """Homogeneous Sobolev norm for any alpha >= 0.

    alpha = 0 is the plain L^p norm; integer alpha is the L^p norm of the
    pointwise derivative magnitude; fractional alpha applies the double-sum
    seminorm (or the Holder quotient at p = inf) to the derivative
    components of order floor(alpha), aggregated in l2 over components.
    """
    if alpha < 0:
        raise InvalidArgument(f"alpha must be >= 0, got {alpha}")
    if alpha == 0:
        return NormResult(
            value=lp_norm(f, p),
            kind="lp",
            params={"p": p},
            truncation={},
        )
    m = int(math.floor(alpha))
    s = alpha - m
    if s == 0.0:
        mag = derivative_magnitude(f, m)
        return NormResult(
            value=lp_norm(mag, p),
            kind="sobolev",
            params={"alpha": alpha, "p": p},
            truncation={"derivative_order": m},
        )
    if m == 0:
        if p == math.inf:
            inner = holder_seminorm(f, s)
        else:
            inner = sobolev_seminorm(f, s, p)
        return NormResult(
            value=inner.value,
            kind="sobolev",
            params={"alpha": alpha, "p": p},
            truncation=inner.truncation,
        )
    comps = derivative_components(f, m)
    if p == math.inf:
        pieces = [holder_seminorm(c, s) for c in comps]
    else:
        pieces = [sobolev_seminorm(c, s, p) for c in comps]
    value = math.sqrt(sum(r.value ** 2 for r in pieces))
    trunc = dict(pieces[0].truncation)
    trunc["derivative_order"] = m
    trunc["component_aggregation"] = "l2"
    return NormResult(
        value=value,
        kind="sobolev",
        params={"alpha": alpha, "p": p},
        truncation=trunc,
    )
