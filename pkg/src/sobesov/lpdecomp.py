"""Dyadic frequency-band filters, compactly supported mollifier families, and
spectral calculus on the periodic grid.

The band filters live entirely on the Fourier side: a smooth bump on the
annulus (1/2, 2) is normalized by its own dyadic sum, which makes the
partition of unity exact (to rounding) at every covered lattice frequency.
The mollifiers live on the spatial side, built by iterated centered
differences of a compactly supported bump with grid-aligned steps, so all
low-order moments vanish to machine precision under the grid quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .corpus import Grid, SampledFunction
from .errors import (
    BandOutOfRange,
    DegenerateMollifier,
    EpsilonUnderResolved,
    GridTooCoarse,
    InvalidArgument,
    InvalidEpsilon,
    NotBandLimited,
)

PARTITION_TOL = 1e-12
MIN_BANDS = 3
MIN_EPSILON_CELLS = 8
SPECTRAL_TAIL_SHELL = 0.9  # band-limit check looks above this fraction of max |xi|
SPECTRAL_TAIL_LIMIT = 1e-8


# ---------------------------------------------------------------------------
# dyadic band filters


def _annulus_bump(r: np.ndarray) -> np.ndarray:
    """C-infinity bump supported on 1/2 < r < 2: exp(-1/((r-1/2)(2-r)))."""
    out = np.zeros_like(r)
    inside = (r > 0.5) & (r < 2.0)
    ri = r[inside]
    out[inside] = np.exp(-1.0 / ((ri - 0.5) * (2.0 - ri)))
    return out


def _dyadic_sum(r: np.ndarray) -> np.ndarray:
    """Sum over integer j of the annulus bump at 2^-j r (3 terms can touch r>0)."""
    r = np.asarray(r, dtype=np.float64)
    total = np.zeros_like(r)
    pos = r > 0.0
    jc = np.zeros_like(r)
    jc[pos] = np.floor(np.log2(r[pos]))
    for shift in (-1.0, 0.0, 1.0):
        scale = np.exp2(-(jc + shift))
        total[pos] += _annulus_bump(r[pos] * scale[pos])
    return total


def normalized_transfer(r: np.ndarray, j: int) -> np.ndarray:
    """Transfer value of band j at radial frequency r."""
    r = np.asarray(r, dtype=np.float64)
    out = np.zeros_like(r)
    pos = r > 0.0
    denom = _dyadic_sum(r[pos])
    out[pos] = _annulus_bump(r[pos] * 2.0 ** (-j)) / denom
    return out


@dataclass(frozen=True)
class FilterBank:
    """Dyadic band transfer functions on the grid's frequency lattice.

    Band j is supported on the open annulus 2^(j-1) < |xi| < 2^(j+1); the
    bands in [j_min, j_max] sum to one at every nonzero lattice frequency
    with 2^j_min <= |xi| <= 2^j_max.
    """

    grid: Grid
    j_min: int
    j_max: int
    transfer: dict
    partition_residual: float

    @property
    def bands(self) -> range:
        return range(self.j_min, self.j_max + 1)


def band_range_for_grid(grid: Grid) -> tuple[int, int]:
    """(j_min, j_max): lowest band touching the lattice, highest fully below Nyquist."""
    xi_min = 2.0 * math.pi / grid.box_length
    xi_nyq = grid.nyquist
    # smallest j whose open annulus contains a nonzero lattice magnitude
    j = math.floor(math.log2(xi_min)) - 1
    while 2.0 ** (j - 1) >= xi_min or 2.0 ** (j + 1) <= xi_min:
        j += 1
    j_min = j
    j_max = math.floor(math.log2(xi_nyq)) - 1
    while 2.0 ** (j_max + 2) <= xi_nyq:
        j_max += 1
    return j_min, j_max


def build_filter_bank(grid: Grid) -> FilterBank:
    j_min, j_max = band_range_for_grid(grid)
    if j_max - j_min + 1 < MIN_BANDS:
        raise GridTooCoarse(
            f"only {max(0, j_max - j_min + 1)} dyadic bands fit between the lattice "
            f"floor and Nyquist; need >= {MIN_BANDS}"
        )
    r = grid.freq_magnitude()
    transfer = {}
    for j in range(j_min, j_max + 1):
        t = normalized_transfer(r, j)
        t.setflags(write=False)
        transfer[j] = t
    total = np.zeros_like(r)
    for t in transfer.values():
        total = total + t
    covered = (r >= 2.0 ** j_min) & (r <= 2.0 ** j_max)
    residual = float(np.max(np.abs(total[covered] - 1.0))) if np.any(covered) else 0.0
    if residual > PARTITION_TOL:
        raise GridTooCoarse(f"partition residual {residual:.3e} exceeds {PARTITION_TOL}")
    return FilterBank(
        grid=grid, j_min=j_min, j_max=j_max, transfer=transfer, partition_residual=residual
    )


def band(f: SampledFunction, j: int, bank: FilterBank) -> SampledFunction:
    """Frequency-band component of f: inverse transform of transfer_j * fhat."""
    if j < bank.j_min or j > bank.j_max:
        raise BandOutOfRange(f"band {j} outside [{bank.j_min}, {bank.j_max}]")
    spec = np.fft.fftn(f.values)
    out = np.real(np.fft.ifftn(spec * bank.transfer[j]))
    return SampledFunction(
        grid=f.grid, values=out, label=f"{f.label}|band{j}", effective_support_radius=None
    )


def export_transfer_csv(bank: FilterBank, path) -> None:
    """Write (|xi|, transfer_j ...) rows sorted by frequency magnitude."""
    r = bank.grid.freq_magnitude().ravel()
    order = np.argsort(r)
    cols = [bank.transfer[j].ravel()[order] for j in bank.bands]
    with open(path, "w") as fh:
        fh.write("freq," + ",".join(f"band_{j}" for j in bank.bands) + "\n")
        for i, ri in enumerate(r[order]):
            fh.write(f"{float(ri)!r}," + ",".join(repr(float(c[i])) for c in cols) + "\n")


# ---------------------------------------------------------------------------
# mollifier families


@dataclass(frozen=True)
class MollifierFamily:
    """Compactly supported kernels phi_eps with vanishing moments below k.

    Each kernel is an iterated centered difference (step aligned to the grid)
    of a smooth bump, rescaled so its support fits the ball of radius eps and
    normalized to unit discrete L1 mass, which makes the L1 norm exactly
    scale-independent.  ``annulus_floor`` is the smallest |phihat_eps| over
    lattice frequencies in [1/(2 eps), 2/eps], minimized over the family;
    it must be positive for the sup-characterization to be usable.
    """

    grid: Grid
    moment_order: int
    epsilons: tuple
    kernels: dict
    mother: SampledFunction
    annulus_floor: float
    l1_norm: float = 1.0
    _kernel_ffts: dict = field(default_factory=dict, repr=False, compare=False)

    def kernel(self, eps: float) -> np.ndarray:
        key = self._eps_key(eps)
        if key is None:
            raise InvalidEpsilon(f"epsilon {eps} is not in the family {self.epsilons}")
        return self.kernels[key]

    def _eps_key(self, eps: float):
        for e in self.epsilons:
            if abs(e - eps) <= 1e-12 * e:
                return e
        return None


def _difference_kernel(grid: Grid, eps: float, k: int) -> np.ndarray:
    """Sampled kernel: per-axis k-fold centered differences of a bump, summed."""
    h = grid.spacing
    k_eff = k if grid.dim == 1 else k + (k % 2)
    # shift unit u in cells; full step between difference samples is 2u cells,
    # offsets are (k_eff - 2i) * u cells, grid-aligned for both parities
    u = max(1, round(eps / (4.0 * k_eff * h)))
    step_half = u * h
    # shifts act along one axis at a time, so support radius grows by at most
    # the largest single offset k_eff * step_half in any dimension
    r_eta = eps - k_eff * step_half
    if r_eta <= 2.0 * h:
        raise EpsilonUnderResolved(
            f"inner bump radius {r_eta:.3g} under-resolved at eps={eps:.3g} (h={h:.3g})"
        )
    rho = grid.radial_coords()
    uu = (rho / r_eta) ** 2
    eta = np.zeros_like(rho)
    inside = uu < 1.0
    eta[inside] = np.exp(-1.0 / (1.0 - uu[inside]))

    coeffs = [(-1.0) ** i * math.comb(k_eff, i) for i in range(k_eff + 1)]
    out = np.zeros_like(eta)
    for axis in range(grid.dim):
        for i, c in enumerate(coeffs):
            out += c * np.roll(eta, shift=-(k_eff - 2 * i) * u, axis=axis)
    return out


def build_mollifiers(grid: Grid, k: int, eps_count: int) -> MollifierFamily:
    if k < 1:
        raise InvalidArgument(f"moment order k must be >= 1, got {k}")
    if eps_count < 4:
        raise InvalidArgument(f"eps_count must be >= 4, got {eps_count}")
    h = grid.spacing
    eps_min = 2.0 ** math.ceil(math.log2(MIN_EPSILON_CELLS * h))
    eps_max = eps_min * 2.0 ** (eps_count - 1)
    if eps_max > grid.box_length / 4.0 + 1e-12:
        raise EpsilonUnderResolved(
            f"{eps_count} dyadic scales need eps up to {eps_max:.3g}, exceeding box/4; "
            f"grid too coarse for this family"
        )
    epsilons = tuple(eps_max * 2.0 ** (-i) for i in range(eps_count))

    kernels = {}
    ffts = {}
    for eps in epsilons:
        ker = _difference_kernel(grid, eps, k)
        l1 = float(np.sum(np.abs(ker))) * grid.cell_volume
        if l1 == 0.0:
            raise DegenerateMollifier(f"kernel at eps={eps} vanished")
        ker = ker / l1
        ker.setflags(write=False)
        kernels[eps] = ker
        ffts[eps] = np.fft.fftn(np.fft.ifftshift(ker)) * grid.cell_volume

    floor = math.inf
    r = grid.freq_magnitude()
    for eps in epsilons:
        ring = (r >= 1.0 / (2.0 * eps)) & (r <= 2.0 / eps)
        if not np.any(ring):
            continue
        floor = min(floor, float(np.min(np.abs(ffts[eps][ring]))))
    if not (floor > 0.0) or floor == math.inf:
        raise DegenerateMollifier(
            f"transfer magnitude floor {floor:.3e} on the required annuli is not positive"
        )

    mother = SampledFunction(
        grid=grid,
        values=kernels[epsilons[0]],
        label=f"mollifier_mother_k{k}",
        effective_support_radius=epsilons[0],
    )
    return MollifierFamily(
        grid=grid,
        moment_order=k,
        epsilons=epsilons,
        kernels=kernels,
        mother=mother,
        annulus_floor=floor,
        l1_norm=1.0,
        _kernel_ffts=ffts,
    )


def mollify(f: SampledFunction, eps: float, family: MollifierFamily) -> SampledFunction:
    """Circular convolution phi_eps * f via the transform pair."""
    key = family._eps_key(eps)
    if key is None:
        raise InvalidEpsilon(f"epsilon {eps} is not in the family {family.epsilons}")
    spec = np.fft.fftn(f.values) * family._kernel_ffts[key]
    out = np.real(np.fft.ifftn(spec))
    return SampledFunction(
        grid=f.grid, values=out, label=f"{f.label}|moll{eps:g}", effective_support_radius=None
    )


def multi_indices(dim: int, order: int) -> list[tuple]:
    """All multi-indices of the given total order."""
    if dim == 1:
        return [(order,)]
    return [(a, order - a) for a in range(order + 1)]


def verify_moments(family: MollifierFamily) -> float:
    """Max |integral of x^gamma * mother| over all |gamma| < moment_order."""
    grid = family.grid
    vals = family.mother.values
    coords = grid.coords()
    worst = 0.0
    for order in range(family.moment_order):
        for gamma in multi_indices(grid.dim, order):
            if grid.dim == 1:
                mono = coords ** gamma[0]
            else:
                mono = coords[0] ** gamma[0] * coords[1] ** gamma[1]
            worst = max(worst, abs(float(np.sum(mono * vals)) * grid.cell_volume))
    return worst


# ---------------------------------------------------------------------------
# spectral calculus


def spectral_tail_fraction(f: SampledFunction, shell: float = SPECTRAL_TAIL_SHELL) -> float:
    """Energy fraction carried by lattice frequencies above shell * max|xi|."""
    spec = np.fft.fftn(f.values)
    power = np.abs(spec) ** 2
    r = f.grid.freq_magnitude()
    total = float(np.sum(power))
    if total == 0.0:
        return 0.0
    return float(np.sum(power[r >= shell * r.max()])) / total


def spectral_derivative(f: SampledFunction, gamma) -> SampledFunction:
    """Partial derivative D^gamma f by Fourier multiplier (i xi)^gamma.

    Requires an effectively band-limited input: the top decade of the lattice
    spectrum must carry less than 1e-8 of the energy.
    """
    if isinstance(gamma, int):
        gamma = (gamma,)
    gamma = tuple(int(g) for g in gamma)
    if len(gamma) != f.grid.dim or any(g < 0 for g in gamma):
        raise InvalidArgument(f"bad multi-index {gamma} for dim {f.grid.dim}")
    if all(g == 0 for g in gamma):
        return f
    tail = spectral_tail_fraction(f)
    if tail >= SPECTRAL_TAIL_LIMIT:
        raise NotBandLimited(
            f"{f.label!r}: top-of-spectrum energy fraction {tail:.3e} >= {SPECTRAL_TAIL_LIMIT}"
        )
    spec = np.fft.fftn(f.values)
    xi = f.grid.axis_freqs()
    n = f.grid.n_per_axis
    for axis, g in enumerate(gamma):
        if g == 0:
            continue
        mult = (1j * xi) ** g
        if g % 2 == 1:
            mult[n // 2] = 0.0  # Nyquist mode has no well-defined odd derivative
        shape = [1] * f.grid.dim
        shape[axis] = n
        spec = spec * mult.reshape(shape)
    out = np.real(np.fft.ifftn(spec))
    name = "".join(f"d{axis}^{g}" for axis, g in enumerate(gamma) if g > 0)
    return SampledFunction(
        grid=f.grid,
        values=out,
        label=f"{f.label}|{name}",
        effective_support_radius=None,
    )


def derivative_components(f: SampledFunction, order: int) -> list[SampledFunction]:
    """All components D^gamma f with |gamma| = order."""
    return [spectral_derivative(f, g) for g in multi_indices(f.grid.dim, order)]


def derivative_magnitude(f: SampledFunction, order: int) -> SampledFunction:
    """Pointwise Euclidean magnitude over the multi-index components of D^order f."""
    comps = derivative_components(f, order)
    sq = np.zeros_like(f.values)
    for c in comps:
        sq = sq + c.values ** 2
    return SampledFunction(
        grid=f.grid,
        values=np.sqrt(sq),
        label=f"{f.label}|D^{order}|",
        effective_support_radius=None,
    )
