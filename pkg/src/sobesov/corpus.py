"""Sampled functions on a uniform periodic box and the deterministic test corpus.

The box is centered at the origin: axis coordinates run over
``[-box_length/2, box_length/2)`` with ``n_per_axis`` samples.  All generators
are closed-form and deterministic, so a corpus regenerates bit-identically
from its JSON description.  ``random_trig`` coefficients come from a
splitmix64 stream (documented in :func:`splitmix64_uniforms`) so that other
implementations can reproduce the same corpus from the same seed.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.special import erf

from .errors import InvalidArgument, SupportOverflow, UnsupportedDilation

SCHEMA_VERSION = 1

# |f| below this fraction of max|f| counts as "outside the support"
SUPPORT_TOL = 1e-10

GENERATOR_KINDS = ("gaussian", "bump", "wavepacket", "random_trig", "smoothed_step")


# ---------------------------------------------------------------------------
# grid


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on a centered box, dim 1 or 2.

    ``spacing`` is always derived from ``box_length / n_per_axis`` and is never
    stored independently in serialized files.
    """

    dim: int
    n_per_axis: int
    box_length: float

    @property
    def spacing(self) -> float:
        return self.box_length / self.n_per_axis

    @property
    def n_sites(self) -> int:
        return self.n_per_axis ** self.dim

    @property
    def cell_volume(self) -> float:
        return self.spacing ** self.dim

    @property
    def nyquist(self) -> float:
        """Largest representable axis frequency, pi / spacing."""
        return math.pi / self.spacing

    def axis_coords(self) -> np.ndarray:
        n, h = self.n_per_axis, self.spacing
        return -0.5 * self.box_length + h * np.arange(n)

    def coords(self):
        """Coordinate arrays; (n,) for dim 1, a pair of (n, n) arrays for dim 2."""
        x = self.axis_coords()
        if self.dim == 1:
            return x
        return np.meshgrid(x, x, indexing="ij")

    def radial_coords(self) -> np.ndarray:
        """Distance from the box center at every sample site."""
        if self.dim == 1:
            return np.abs(self.axis_coords())
        xx, yy = self.coords()
        return np.hypot(xx, yy)

    def axis_freqs(self) -> np.ndarray:
        """Angular frequencies 2*pi*m/box_length in FFT layout."""
        return 2.0 * math.pi * np.fft.fftfreq(self.n_per_axis, d=self.spacing)

    def freq_magnitude(self) -> np.ndarray:
        xi = self.axis_freqs()
        if self.dim == 1:
            return np.abs(xi)
        kx, ky = np.meshgrid(xi, xi, indexing="ij")
        return np.hypot(kx, ky)

    def to_json(self) -> dict:
        return {"dim": self.dim, "n_per_axis": self.n_per_axis, "box_length": self.box_length}

    @classmethod
    def from_json(cls, obj: dict) -> "Grid":
        return make_grid(int(obj["dim"]), int(obj["n_per_axis"]), float(obj["box_length"]))


def make_grid(dim: int, n_per_axis: int, box_length: float) -> Grid:
    """Validated grid constructor.

    The implied frequency lattice is ``2*pi*m / box_length`` for integer
    ``m`` in ``[-n/2, n/2)``.
    """
    if dim not in (1, 2):
        raise InvalidArgument(f"dim must be 1 or 2, got {dim}")
    if n_per_axis < 8 or (n_per_axis & (n_per_axis - 1)) != 0:
        raise InvalidArgument(f"n_per_axis must be a power of two >= 8, got {n_per_axis}")
    if not (box_length > 0.0 and math.isfinite(box_length)):
        raise InvalidArgument(f"box_length must be positive and finite, got {box_length}")
    return Grid(dim=dim, n_per_axis=n_per_axis, box_length=float(box_length))


# ---------------------------------------------------------------------------
# generator specs


@dataclass(frozen=True)
class GeneratorSpec:
    """Recipe for one corpus function: a kind plus kind-specific parameters."""

    kind: str
    params: dict = field(default_factory=dict)
    label: str = ""

    def with_params(self, **updates) -> "GeneratorSpec":
        p = dict(self.params)
        p.update(updates)
        return replace(self, params=p)

    def to_json(self) -> dict:
        return {"kind": self.kind, "params": dict(self.params), "label": self.label}

    @classmethod
    def from_json(cls, obj: dict) -> "GeneratorSpec":
        return cls(kind=obj["kind"], params=dict(obj["params"]), label=obj.get("label", ""))


# ---------------------------------------------------------------------------
# sampled functions


@dataclass(frozen=True)
class SampledFunction:
    """Real samples of a function on a periodic grid.

    ``effective_support_radius`` (when set) asserts that the function is
    negligible outside the centered ball of that radius; the assertion is
    checked at construction time.  Whole-box functions (the smoothed steps)
    record ``box_length/2``, which makes the check vacuous and marks them as
    globally supported for dilation bookkeeping.
    """

    grid: Grid
    values: np.ndarray
    label: str
    effective_support_radius: float | None = None
    generator: GeneratorSpec | None = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        expected = (self.grid.n_per_axis,) * self.grid.dim
        if v.shape != expected:
            raise InvalidArgument(f"values shape {v.shape} does not match grid {expected}")
        if not np.all(np.isfinite(v)):
            raise InvalidArgument(f"non-finite samples in {self.label!r}")
        v = v.copy()
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        esr = self.effective_support_radius
        if esr is not None:
            if not esr > 0:
                raise InvalidArgument("effective_support_radius must be positive")
            peak = float(np.max(np.abs(v)))
            if peak > 0.0:
                outside = self.grid.radial_coords() > esr
                if np.any(outside):
                    tail = float(np.max(np.abs(v[outside])))
                    if tail >= SUPPORT_TOL * peak:
                        raise SupportOverflow(
                            f"{self.label!r}: |f| reaches {tail:.3e} outside radius {esr} "
                            f"(limit {SUPPORT_TOL * peak:.3e})"
                        )

    def with_values(self, values: np.ndarray, label: str | None = None) -> "SampledFunction":
        return SampledFunction(
            grid=self.grid,
            values=values,
            label=self.label if label is None else label,
            effective_support_radius=self.effective_support_radius,
            generator=self.generator,
        )

    def scaled(self, c: float) -> "SampledFunction":
        out = SampledFunction(
            grid=self.grid,
            values=c * self.values,
            label=f"{self.label}*{c:g}",
            effective_support_radius=self.effective_support_radius,
            generator=None,
        )
        return out


# ---------------------------------------------------------------------------
# deterministic seed expansion for random_trig


_MASK64 = (1 << 64) - 1


def splitmix64_uniforms(seed: int, count: int) -> list[float]:
    """First ``count`` uniforms in [0, 1) of the splitmix64 stream.

    State update: s += 0x9E3779B97F4A7C15; output mixing:
    z = s; z = (z ^ z>>30) * 0xBF58476D1CE4E5B9; z = (z ^ z>>27) * 0x94D049BB133111EB;
    out = (z ^ z>>31) / 2**64.  All arithmetic mod 2**64.
    """
    state = seed & _MASK64
    out = []
    for _ in range(count):
        state = (state + 0x9E3779B97F4A7C15) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        z = z ^ (z >> 31)
        out.append(z / 2.0 ** 64)
    return out


# ---------------------------------------------------------------------------
# generators


def _require_positive(params: dict, key: str, kind: str) -> float:
    val = float(params[key])
    if not (val > 0 and math.isfinite(val)):
        raise InvalidArgument(f"{kind}: parameter {key!r} must be strictly positive, got {val}")
    return val


def _gaussian_radius(width: float) -> float:
    # exp(-r^2 / 2w^2) = SUPPORT_TOL  =>  r = w * sqrt(-2 ln tol)
    return width * math.sqrt(-2.0 * math.log(SUPPORT_TOL))


def generate(spec: GeneratorSpec, grid: Grid) -> SampledFunction:
    """Evaluate a generator on a grid.  Deterministic given (spec, grid)."""
    if spec.kind not in GENERATOR_KINDS:
        raise InvalidArgument(f"unknown generator kind {spec.kind!r}")
    label = spec.label or spec.kind
    half = 0.5 * grid.box_length
    p = spec.params

    if spec.kind == "gaussian":
        width = _require_positive(p, "width", spec.kind)
        center = float(p.get("center", 0.0))
        esr = abs(center) + _gaussian_radius(width)
        if esr > half:
            raise SupportOverflow(f"gaussian support radius {esr:.3g} exceeds box/2 = {half:.3g}")
        r2 = _centered_dist2(grid, center)
        values = np.exp(-r2 / (2.0 * width * width))

    elif spec.kind == "bump":
        width = _require_positive(p, "width", spec.kind)  # support radius
        center = float(p.get("center", 0.0))
        esr = abs(center) + width
        if esr > half:
            raise SupportOverflow(f"bump support radius {esr:.3g} exceeds box/2 = {half:.3g}")
        r2 = _centered_dist2(grid, center)
        u = r2 / (width * width)
        values = np.zeros_like(r2)
        inside = u < 1.0
        # normalized so the peak value is 1 at the center
        values[inside] = np.exp(1.0 - 1.0 / (1.0 - u[inside]))

    elif spec.kind == "wavepacket":
        width = _require_positive(p, "width", spec.kind)
        freq = _require_positive(p, "frequency", spec.kind)
        center = float(p.get("center", 0.0))
        if freq >= grid.nyquist:
            raise InvalidArgument(
                f"wavepacket frequency {freq:.3g} at or above Nyquist {grid.nyquist:.3g}"
            )
        esr = abs(center) + _gaussian_radius(width)
        if esr > half:
            raise SupportOverflow(f"wavepacket support radius {esr:.3g} exceeds box/2 = {half:.3g}")
        r2 = _centered_dist2(grid, center)
        x1 = (grid.coords() if grid.dim == 1 else grid.coords()[0]) - center
        values = np.exp(-r2 / (2.0 * width * width)) * np.cos(freq * x1)

    elif spec.kind == "random_trig":
        values = _random_trig(spec, grid)
        esr = None

    elif spec.kind == "smoothed_step":
        width = _require_positive(p, "width", spec.kind)
        center = float(p.get("center", 0.0))
        plateau = float(p.get("plateau_radius", grid.box_length / 4.0))
        if not plateau > 0:
            raise InvalidArgument("smoothed_step: plateau_radius must be positive")
        if abs(center) + plateau + 4.0 * width > half:
            raise SupportOverflow(
                f"smoothed_step plateau+transition exceeds box/2 = {half:.3g}"
            )
        rho = _periodic_dist(grid, center)
        # sign-like profile: +1 on the plateau, -1 outside, erf transition of scale w
        values = erf((plateau - rho) / width)
        esr = half  # occupies the whole box; radius box/2 makes the support check vacuous

    return SampledFunction(
        grid=grid,
        values=values,
        label=label,
        effective_support_radius=esr,
        generator=spec,
    )


def _centered_dist2(grid: Grid, center: float) -> np.ndarray:
    """Squared distance from (center, 0[, ...]) without periodic wrap."""
    if grid.dim == 1:
        x = grid.axis_coords() - center
        return x * x
    xx, yy = grid.coords()
    return (xx - center) ** 2 + yy ** 2


def _periodic_dist(grid: Grid, center: float) -> np.ndarray:
    """Periodic distance from (center, 0[, ...])."""
    L = grid.box_length
    if grid.dim == 1:
        d = np.abs(grid.axis_coords() - center)
        return np.minimum(d, L - d)
    xx, yy = grid.coords()
    dx = np.abs(xx - center)
    dx = np.minimum(dx, L - dx)
    dy = np.abs(yy)
    dy = np.minimum(dy, L - dy)
    return np.hypot(dx, dy)


def _random_trig(spec: GeneratorSpec, grid: Grid) -> np.ndarray:
    p = spec.params
    seed = int(p.get("seed", 0))
    decay = _require_positive(p, "decay", "random_trig")
    n_modes = int(p.get("n_modes", 16))
    mode_scale = int(p.get("mode_scale", 1))
    if n_modes < 1:
        raise InvalidArgument("random_trig: n_modes must be >= 1")
    if mode_scale < 1:
        raise InvalidArgument("random_trig: mode_scale must be >= 1")
    if n_modes * mode_scale >= grid.n_per_axis // 2:
        raise InvalidArgument(
            f"random_trig: top mode {n_modes * mode_scale} at or above Nyquist index "
            f"{grid.n_per_axis // 2}"
        )
    k0 = 2.0 * math.pi / grid.box_length

    if grid.dim == 1:
        x = grid.axis_coords()
        u = splitmix64_uniforms(seed, 2 * n_modes)
        values = np.zeros_like(x)
        for m in range(1, n_modes + 1):
            amp = (2.0 * u[2 * (m - 1)] - 1.0) * m ** (-decay)
            phase = 2.0 * math.pi * u[2 * (m - 1) + 1]
            values += amp * np.cos(k0 * m * mode_scale * x + phase)
        return values

    xx, yy = grid.coords()
    # one representative per +/- pair of 2D wavevectors, fixed iteration order
    modes = [(0, m2) for m2 in range(1, n_modes + 1)]
    modes += [(m1, m2) for m1 in range(1, n_modes + 1) for m2 in range(-n_modes, n_modes + 1)]
    u = splitmix64_uniforms(seed, 2 * len(modes))
    values = np.zeros_like(xx)
    for i, (m1, m2) in enumerate(modes):
        amp = (2.0 * u[2 * i] - 1.0) * math.hypot(m1, m2) ** (-decay)
        phase = 2.0 * math.pi * u[2 * i + 1]
        values += amp * np.cos(k0 * mode_scale * (m1 * xx + m2 * yy) + phase)
    return values


# ---------------------------------------------------------------------------
# dilation


def _is_pow2(lam: float) -> bool:
    if lam <= 0:
        return False
    m = math.log2(lam)
    return abs(m - round(m)) < 1e-12


def dilate(f: SampledFunction, lam: float) -> SampledFunction:
    """Return f_lam with f_lam(x) = f(lam * x) on the same grid.

    Generator-backed functions are regenerated analytically (exact for every
    power-of-two lam); bare sample arrays are resampled by index stride, which
    is exact for integer lam >= 1.
    """
    if not _is_pow2(lam):
        raise UnsupportedDilation(f"dilation factor must be a power of two, got {lam}")
    if lam == 1.0:
        return f
    half = 0.5 * f.grid.box_length
    if lam < 1.0 and f.effective_support_radius is not None:
        # f(lam*x) stretches the support to esr/lam, which must still fit the box
        if f.effective_support_radius / lam > half + 1e-12:
            raise SupportOverflow(
                f"dilate by {lam}: support radius {f.effective_support_radius:.3g} exceeds "
                f"box/(2*lam) = {half * lam:.3g}"
            )

    if f.generator is not None:
        spec = _dilated_spec(f.generator, lam, f.grid)
        out = generate(spec, f.grid)
        return out

    if lam < 1.0:
        raise UnsupportedDilation(
            "lam < 1 requires analytic regeneration; this function has no generator"
        )
    k = int(round(lam))
    n = f.grid.n_per_axis
    if f.effective_support_radius is not None and f.effective_support_radius < half:
        values = _stride_centered(f.values, k, f.grid.dim)
    else:
        values = _stride_modular(f.values, k, f.grid.dim)
    return SampledFunction(
        grid=f.grid,
        values=values,
        label=f"{f.label}_dil{k}",
        effective_support_radius=(
            None
            if f.effective_support_radius is None
            else min(f.effective_support_radius / k + f.grid.spacing, half)
        ),
        generator=None,
    )


def _stride_centered(values: np.ndarray, k: int, dim: int) -> np.ndarray:
    """Single-copy dilation: f(k*x) where k*x stays inside the box, zero elsewhere."""
    n = values.shape[0]
    c = n // 2
    src = k * (np.arange(n) - c) + c
    ok = (src >= 0) & (src <= n - 1)
    if dim == 1:
        out = np.zeros(n)
        out[ok] = values[src[ok]]
        return out
    out = np.zeros_like(values)
    out[np.ix_(ok, ok)] = values[np.ix_(src[ok], src[ok])]
    return out


def _stride_modular(values: np.ndarray, k: int, dim: int) -> np.ndarray:
    """Periodic dilation for globally supported (e.g. trigonometric) functions."""
    n = values.shape[0]
    c = n // 2
    idx = (k * (np.arange(n) - c) + c) % n
    if dim == 1:
        return values[idx]
    return values[np.ix_(idx, idx)]


def _dilated_spec(spec: GeneratorSpec, lam: float, grid: Grid) -> GeneratorSpec:
    p = dict(spec.params)
    label = f"{spec.label or spec.kind}_dil{lam:g}"
    if spec.kind == "gaussian" or spec.kind == "bump":
        p["width"] = p["width"] / lam
        p["center"] = p.get("center", 0.0) / lam
    elif spec.kind == "wavepacket":
        p["width"] = p["width"] / lam
        p["center"] = p.get("center", 0.0) / lam
        p["frequency"] = p["frequency"] * lam
    elif spec.kind == "smoothed_step":
        p["width"] = p["width"] / lam
        p["center"] = p.get("center", 0.0) / lam
        p["plateau_radius"] = p.get("plateau_radius", grid.box_length / 4.0) / lam
    elif spec.kind == "random_trig":
        scaled = p.get("mode_scale", 1) * lam
        if abs(scaled - round(scaled)) > 1e-12 or scaled < 1:
            raise UnsupportedDilation(
                f"random_trig dilation by {lam} does not map modes to lattice modes"
            )
        p["mode_scale"] = int(round(scaled))
    return GeneratorSpec(kind=spec.kind, params=p, label=label)


# ---------------------------------------------------------------------------
# Lp norms


def lp_norm(f: SampledFunction, p: float) -> float:
    """Riemann-sum L^p norm; p = inf returns max|f|."""
    return array_lp_norm(f.values, f.grid, p)


def array_lp_norm(values: np.ndarray, grid: Grid, p: float) -> float:
    if p == math.inf:
        return float(np.max(np.abs(values)))
    if p < 1:
        raise InvalidArgument(f"p must be in [1, inf], got {p}")
    a = np.abs(np.asarray(values, dtype=np.float64))
    if p == 1.0:
        s = float(np.sum(a))
    elif p == 2.0:
        s = float(np.sum(a * a))
    else:
        s = float(np.sum(a ** p))
    return (s * grid.cell_volume) ** (1.0 / p)


# ---------------------------------------------------------------------------
# corpus files


def reference_corpus_specs(grid: Grid) -> list[GeneratorSpec]:
    """The 10-function reference corpus used by the verification suite."""
    L = grid.box_length
    return [
        GeneratorSpec("gaussian", {"width": 1.0, "center": 0.0}, "gaussian_a"),
        GeneratorSpec("gaussian", {"width": 0.5, "center": -2.0}, "gaussian_b"),
        GeneratorSpec("bump", {"width": 3.5, "center": 0.0}, "bump_a"),
        GeneratorSpec("bump", {"width": 4.0, "center": 1.5}, "bump_b"),
        GeneratorSpec("wavepacket", {"width": 1.0, "frequency": 2.0 * math.pi, "center": 0.0}, "wavepacket_a"),
        GeneratorSpec("wavepacket", {"width": 0.8, "frequency": math.pi, "center": 0.0}, "wavepacket_b"),
        GeneratorSpec("random_trig", {"seed": 7, "decay": 2.0, "n_modes": 20}, "random_trig_a"),
        GeneratorSpec("random_trig", {"seed": 1234567, "decay": 1.5, "n_modes": 20}, "random_trig_b"),
        GeneratorSpec("smoothed_step", {"width": 0.25, "center": 0.0, "plateau_radius": L / 4.0}, "step_a"),
        GeneratorSpec("smoothed_step", {"width": 0.5, "center": 1.0, "plateau_radius": L / 4.0}, "step_b"),
    ]


def save_corpus(grid: Grid, specs: list[GeneratorSpec], path) -> None:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "grid": grid.to_json(),
        "functions": [s.to_json() for s in specs],
    }
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def load_corpus(path) -> tuple[Grid, list[SampledFunction]]:
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise InvalidArgument(f"corpus {path}: unsupported schema_version {doc.get('schema_version')}")
    grid = Grid.from_json(doc["grid"])
    funcs = [generate(GeneratorSpec.from_json(o), grid) for o in doc["functions"]]
    return grid, funcs
