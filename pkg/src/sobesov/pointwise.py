"""Pointwise fields: the dyadic maximal function, the ball-averaged
difference-quotient functional, and the pointwise-estimate checks that
compare |f|, averaged-difference integrals, and products of those fields.

All sups over radii run on the dyadic set {spacing * 2^i <= box/2}; the
continuum sup is bracketed by this choice at the cost of a bounded factor
that the empirical constants absorb.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .corpus import Grid, SampledFunction
from .errors import InvalidArgument
from .inequalities import EvalContext, validate_pointwise_bound, _bes
from .lpdecomp import derivative_magnitude

RHS_GUARD = 1e-12  # points with rhs below this fraction of max(rhs) are excluded


@dataclass(frozen=True)
class PointwiseField:
    grid: Grid
    values: np.ndarray
    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if not np.all(np.isfinite(v)) or np.any(v < 0):
            raise InvalidArgument(f"{self.kind} field must be finite and nonnegative")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)


def dyadic_radii(grid: Grid) -> list:
    """Radii spacing * 2^i up to box/2."""
    out = []
    r = grid.spacing
    while r <= 0.5 * grid.box_length * (1 + 1e-12):
        out.append(r)
        r *= 2.0
    return out


def _sorted_offsets(grid: Grid, max_dist: float):
    """Nonzero periodic offsets with distance <= max_dist, ascending."""
    n, h = grid.n_per_axis, grid.spacing
    ax = np.minimum(np.arange(n), n - np.arange(n)) * h
    if grid.dim == 1:
        pairs = [(ax[i], (i,)) for i in range(1, n) if ax[i] <= max_dist * (1 + 1e-12)]
    else:
        pairs = []
        for a in range(n):
            for b in range(n):
                if a == 0 and b == 0:
                    continue
                d = math.hypot(ax[a], ax[b])
                if d <= max_dist * (1 + 1e-12):
                    pairs.append((d, (a, b)))
    pairs.sort(key=lambda t: t[0])
    return pairs


def _roll(values: np.ndarray, offset: tuple) -> np.ndarray:
    out = values
    for axis, o in enumerate(offset):
        if o:
            out = np.roll(out, -o, axis=axis)
    return out


def _ball_average_snapshots(grid: Grid, term, radii: list) -> dict:
    """Running ball averages of ``term(offset)`` over |y| <= r for each r.

    ``term(offset)`` returns the array contribution of one offset; the center
    offset contributes ``term(None)``.  Returns {radius: average array}.
    """
    acc = term(None).astype(np.float64).copy()
    count = 1
    snapshots = {}
    targets = sorted(radii)
    ti = 0
    offsets = _sorted_offsets(grid, targets[-1])
    oi = 0
    while ti < len(targets):
        r = targets[ti]
        while oi < len(offsets) and offsets[oi][0] <= r * (1 + 1e-12):
            acc += term(offsets[oi][1])
            count += 1
            oi += 1
        snapshots[r] = acc / count
        ti += 1
    return snapshots


def maximal_function(f: SampledFunction) -> PointwiseField:
    """Dyadic-radius maximal function: max over radii of the ball average of |f|."""
    radii = dyadic_radii(f.grid)
    absf = np.abs(f.values)

    def term(offset):
        if offset is None:
            return absf
        return _roll(absf, offset)

    snaps = _ball_average_snapshots(f.grid, term, radii)
    out = np.maximum.reduce([snaps[r] for r in radii])
    return PointwiseField(grid=f.grid, values=out, kind="maximal", params={"radii": radii})


def g_functional(f: SampledFunction, alpha: float, p: float) -> PointwiseField:
    """Scale-sup of ball-averaged p-mean difference quotients:
    sup over radii eps of ( avg_{|y|<=eps} |f(x)-f(x-y)|^p / eps^(alpha p) )^(1/p)."""
    if not (0.0 < alpha <= 1.0):
        raise InvalidArgument(f"alpha must be in (0,1], got {alpha}")
    if not (1.0 <= p < math.inf):
        raise InvalidArgument(f"p must be in [1, inf), got {p}")
    radii = dyadic_radii(f.grid)
    v = f.values

    def term(offset):
        if offset is None:
            return np.zeros_like(v)
        # f(x - y) is the +offset roll
        diff = np.abs(v - _roll_back(v, offset))
        return diff ** p if p != 1.0 else diff

    snaps = _ball_average_snapshots(f.grid, term, radii)
    best = np.zeros_like(v)
    for r in radii:
        best = np.maximum(best, snaps[r] / r ** (alpha * p))
    return PointwiseField(
        grid=f.grid,
        values=best ** (1.0 / p),
        kind="g_functional",
        params={"alpha": alpha, "p": p, "radii": radii},
    )


def _roll_back(values: np.ndarray, offset: tuple) -> np.ndarray:
    out = values
    for axis, o in enumerate(offset):
        if o:
            out = np.roll(out, o, axis=axis)
    return out


def averaged_difference_integral(f: SampledFunction, alpha1: float, p1: float) -> PointwiseField:
    """The z-integral of ball-averaged differences,
    int (avg_{|y|<=2|z|} |f(x)-f(x+y)| dy)^p1 dz / |z|^(n + alpha1 p1),
    over grid offsets with spacing <= |z| <= box/4."""
    grid = f.grid
    h = grid.spacing
    v = f.values
    z_offsets = _sorted_offsets(grid, 0.25 * grid.box_length)
    needed = sorted({2.0 * d for d, _ in z_offsets})

    def term(offset):
        if offset is None:
            return np.zeros_like(v)
        return np.abs(_roll(v, offset) - v)

    snaps = _ball_average_snapshots(grid, term, needed)
    acc = np.zeros_like(v)
    n_dim = grid.dim
    for d, off in z_offsets:
        a = snaps[2.0 * d]
        acc += (a ** p1) * d ** (-(n_dim + alpha1 * p1))
    acc *= grid.cell_volume
    return PointwiseField(
        grid=grid,
        values=acc,
        kind="bound_lhs",
        params={"alpha1": alpha1, "p1": p1, "z_max": 0.25 * grid.box_length},
    )


# ---------------------------------------------------------------------------
# bound checks


@dataclass(frozen=True)
class PointwiseBoundReport:
    bound_id: str
    lhs: PointwiseField
    rhs: PointwiseField
    empirical_c: float
    excluded_points: int
    params: dict


def pointwise_bound_check(
    f: SampledFunction, bound_id: str, params: dict, ctx: EvalContext
) -> PointwiseBoundReport:
    """Evaluate one pointwise estimate as a pair of fields plus the max ratio.

    bound ids: "eq1.1" (|f| vs negative-band-norm times the difference
    functional), "eq1.1b" (|f| vs the maximal gradient form), "eq1.13" /
    "eq1.23" (averaged-difference integral vs maximal/difference products),
    "eq2.5a" / "eq2.5" (same integral vs two difference functionals).
    """
    full = validate_pointwise_bound(bound_id, params)
    grid = f.grid
    if bound_id == "eq1.1":
        s, alpha, p = full["s"], full["alpha"], full["p"]
        lhs_vals = np.abs(f.values)
        bnorm = ctx.norm(f, _bes(-s))
        gfun = g_functional(f, alpha, p).values
        rhs_vals = bnorm ** full["power_low"] * gfun ** full["power_high"]
        kindp = {"s": s, "alpha": alpha, "p": p}
    elif bound_id == "eq1.1b":
        s = full["s"]
        lhs_vals = np.abs(f.values)
        bnorm = ctx.norm(f, _bes(-s))
        mgrad = maximal_function(derivative_magnitude(f, 1)).values
        rhs_vals = bnorm ** full["power_low"] * mgrad ** full["power_high"]
        kindp = {"s": s}
    elif bound_id == "eq1.13":
        a1, a2, p1, p = full["alpha1"], full["alpha2"], full["p1"], full["p"]
        lhs_vals = averaged_difference_integral(f, a1, p1).values
        mf = maximal_function(f).values
        gf = g_functional(f, a2, p).values
        rhs_vals = mf ** full["power_low"] * gf ** full["power_high"]
        kindp = {"alpha1": a1, "alpha2": a2, "p1": p1, "p": p}
    elif bound_id == "eq1.23":
        a1, p1 = full["alpha1"], full["p1"]
        lhs_vals = averaged_difference_integral(f, a1, p1).values
        mf = maximal_function(f).values
        mgrad = maximal_function(derivative_magnitude(f, 1)).values
        rhs_vals = mf ** full["power_low"] * mgrad ** full["power_high"]
        kindp = {"alpha1": a1, "p1": p1}
    elif bound_id == "eq2.5a":
        a0, a1, a2 = full["alpha0"], full["alpha1"], full["alpha2"]
        p0, p1, p2 = full["p0"], full["p1"], full["p2"]
        lhs_vals = averaged_difference_integral(f, a1, p1).values
        g_lo = g_functional(f, a0, p0).values
        g_hi = g_functional(f, a2, p2).values
        rhs_vals = g_lo ** full["power_low"] * g_hi ** full["power_high"]
        kindp = {"alpha0": a0, "alpha1": a1, "alpha2": a2, "p0": p0, "p1": p1, "p2": p2}
    else:  # eq2.5
        a0, a1 = full["alpha0"], full["alpha1"]
        p0, p1 = full["p0"], full["p1"]
        lhs_vals = averaged_difference_integral(f, a1, p1).values
        g_lo = g_functional(f, a0, p0).values
        mgrad = maximal_function(derivative_magnitude(f, 1)).values
        rhs_vals = g_lo ** full["power_low"] * mgrad ** full["power_high"]
        kindp = {"alpha0": a0, "alpha1": a1, "p0": p0, "p1": p1}

    rhs_max = float(np.max(rhs_vals))
    if rhs_max == 0.0:
        mask = np.zeros_like(rhs_vals, dtype=bool)
    else:
        mask = rhs_vals > RHS_GUARD * rhs_max
    excluded = int(rhs_vals.size - np.count_nonzero(mask))
    if np.any(mask):
        empirical_c = float(np.max(lhs_vals[mask] / rhs_vals[mask]))
    else:
        empirical_c = 0.0
    return PointwiseBoundReport(
        bound_id=bound_id,
        lhs=PointwiseField(grid=grid, values=lhs_vals, kind="bound_lhs", params=kindp),
        rhs=PointwiseField(grid=grid, values=rhs_vals, kind="bound_rhs", params=kindp),
        empirical_c=empirical_c,
        excluded_points=excluded,
        params=dict(full),
    )


def export_field_csv(field_: PointwiseField, path) -> None:
    """Write (coordinates..., value) rows."""
    grid = field_.grid
    with open(path, "w") as fh:
        if grid.dim == 1:
            fh.write("x,value\n")
            for x, v in zip(grid.axis_coords(), field_.values):
                fh.write(f"{float(x)!r},{float(v)!r}\n")
        else:
            fh.write("x,y,value\n")
            xx, yy = grid.coords()
            for xr, yr, vr in zip(xx.ravel(), yy.ravel(), field_.values.ravel()):
                fh.write(f"{float(xr)!r},{float(yr)!r},{float(vr)!r}\n")
