"""The inequality catalog: exponent relations, norm recipes, ratio records,
and the structural checks (exact band interpolation, norm equivalence,
band lifting, the two-scale mollifier bound, the embedding chain).

Exponent algebra is exact: inputs become ``fractions.Fraction`` (floats via
their shortest decimal repr), every completed set is checked against the
scaling-dimension balance symbolically (the coefficient of the dimension and
the smoothness part must match on both sides), and all right-hand powers sum
to one, which is what makes every cataloged ratio invariant under rescaling
of the function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .corpus import Grid, SampledFunction, array_lp_norm, lp_norm
from .errors import (
    ConditionViolated,
    ExponentMismatch,
    InvalidArgument,
    MissingExponent,
)
from .lpdecomp import (
    FilterBank,
    MollifierFamily,
    band,
    build_filter_bank,
    build_mollifiers,
    mollify,
    multi_indices,
    spectral_derivative,
)
from .norms import (
    NormResult,
    besov_norm,
    besov_sup_mollifier,
    bmo_norm,
    directional_difference_seminorm,
    sobolev_norm_general,
    sobolev_seminorm,
)

INF = math.inf

CASE_IDS = (
    "thm1_2",
    "thm1_3",
    "lem3_2",
    "lem3_5",
    "eq1_1a",
    "eq1_21",
    "eq1_0",
    "eq2_m3",
    "eq2_m2",
    "eq2_m4",
    "eq2_0a",
    "eq2_0b",
    "eq2_3",
    "gn_classic",
)

DEGENERATE_TOL = 1e-12


# ---------------------------------------------------------------------------
# exact exponent arithmetic


def _frac(x):
    """Exact exponent value: Fraction, or inf for unbounded integrability."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise InvalidArgument(f"boolean is not an exponent: {x}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        if x.strip().lower() in ("inf", "infinity"):
            return INF
        return Fraction(x)
    if isinstance(x, float):
        if math.isinf(x):
            return INF
        if not math.isfinite(x):
            raise InvalidArgument(f"non-finite exponent {x}")
        return Fraction(str(x))
    raise InvalidArgument(f"cannot interpret exponent {x!r}")


def _inv(p):
    """1/p with 1/inf = 0, exact."""
    if p == INF:
        return Fraction(0)
    return Fraction(1) / p


def _recip(inv_p):
    """Inverse of _inv."""
    if inv_p == 0:
        return INF
    return Fraction(1) / inv_p


def _check_integrability(name, p, allow_inf=True):
    if p == INF:
        if not allow_inf:
            raise ConditionViolated(f"{name} must be finite", condition=f"{name} < inf")
        return
    if p < 1:
        raise ConditionViolated(f"{name} = {p} must be >= 1", condition=f"{name} >= 1")


# ---------------------------------------------------------------------------
# norm recipes


@dataclass(frozen=True)
class NormSpec:
    """A single norm evaluation request; ``kind`` selects the route.

    kinds: "sobolev" (general-order dispatcher, p = inf means the sup/Holder
    route), "lp", "besov" (band route), "besov_sup" (mollifier route).
    Parameters stay exact (Fraction, or inf) until dispatch.
    """

    kind: str
    params: tuple

    @classmethod
    def make(cls, kind, **params) -> "NormSpec":
        items = tuple(sorted((k, _frac(v)) for k, v in params.items()))
        return cls(kind=kind, params=items)

    def float_params(self) -> dict:
        return {k: (INF if v == INF else float(v)) for k, v in self.params}

    def scaling_pair(self):
        """Exact (smoothness, 1/p) entering the dilation dimension s - n/p."""
        d = dict(self.params)
        if self.kind == "sobolev":
            return d["alpha"], _inv(d["p"])
        if self.kind == "lp":
            return Fraction(0), _inv(d["p"])
        if self.kind == "besov":
            return d["s"], _inv(d["p"])
        if self.kind == "besov_sup":
            return d["s"], Fraction(0)
        raise InvalidArgument(f"unknown norm kind {self.kind}")

    def describe(self) -> dict:
        return {"kind": self.kind, "params": {k: _exp_str(v) for k, v in self.params}}


def _sob(alpha, p) -> NormSpec:
    return NormSpec.make("sobolev", alpha=alpha, p=p)


def _lp(p) -> NormSpec:
    return NormSpec.make("lp", p=p)


def _bes(s, p=INF, q=INF) -> NormSpec:
    return NormSpec.make("besov", s=s, p=p, q=q)


def _bsup(s) -> NormSpec:
    return NormSpec.make("besov_sup", s=s)


# ---------------------------------------------------------------------------
# case definitions


@dataclass(frozen=True)
class InequalityCase:
    """One cataloged inequality: completed exponents plus norm recipes."""

    id: str
    exponents: dict
    lhs: NormSpec
    rhs: tuple  # of (NormSpec, Fraction power)
    condition_ok: bool
    condition: str = ""

    def describe(self) -> dict:
        return {
            "id": self.id,
            "exponents": {k: _exp_str(v) for k, v in self.exponents.items()},
            "lhs": self.lhs.describe(),
            "rhs": [
                {**spec.describe(), "power": float(power)} for spec, power in self.rhs
            ],
            "condition_ok": self.condition_ok,
            "condition": self.condition,
        }


def _exp_str(v):
    if v == INF:
        return "inf"
    if isinstance(v, Fraction):
        return str(v)
    return repr(v)


def _need(given, *names):
    missing = [n for n in names if n not in given]
    if missing:
        raise MissingExponent(f"missing exponents {missing}; given {sorted(given)}")


def _exactly_one_of(given, names):
    present = [n for n in names if n in given]
    if len(present) == 0:
        raise MissingExponent(f"need one of {names}; given {sorted(given)}")
    return present


def _require(cond: bool, description: str):
    if not cond:
        raise ConditionViolated(f"side condition violated: {description}", condition=description)


def _scaled_p(p_ref, num, den):
    """p_ref * num / den with inf passthrough."""
    if p_ref == INF:
        return INF
    return p_ref * num / den


def _complete_harmonic(given, out_name, pairs, target_name="p1"):
    """Solve 1/target = sum coeff/p over the named pairs, for whichever entry
    is missing (exactly one of target and the pair p's may be absent)."""
    # pairs: list of (coeff Fraction, name)
    names = [n for _, n in pairs]
    unknown = [n for n in [target_name] + names if n not in given]
    if len(unknown) > 1:
        raise MissingExponent(f"underdetermined: missing {unknown}")
    if not unknown:
        # fully given; verify consistency
        lhs = _inv(given[target_name])
        rhs = sum(c * _inv(given[n]) for c, n in pairs)
        if lhs != rhs:
            raise ExponentMismatch(
                f"harmonic relation violated: 1/{target_name} = {lhs} but factors give {rhs}"
            )
        return dict(given)
    out = dict(given)
    missing = unknown[0]
    if missing == target_name:
        out[target_name] = _recip(sum(c * _inv(given[n]) for c, n in pairs))
    else:
        coeff = dict((n, c) for c, n in pairs)[missing]
        rest = sum(c * _inv(given[n]) for c, n in pairs if n != missing)
        inv_val = (_inv(given[target_name]) - rest) / coeff
        if inv_val < 0:
            raise ConditionViolated(
                f"derived 1/{missing} = {inv_val} < 0", condition=f"1/{missing} >= 0"
            )
        out[missing] = _recip(inv_val)
    return out


def derive_exponents(case_id: str, given: dict) -> dict:
    """Complete and validate the exponent set of a catalog case.

    Exact rational arithmetic throughout; raises MissingExponent when the
    given subset does not determine the rest, ConditionViolated when a side
    condition fails (the message names it), ExponentMismatch on inconsistent
    over-determined input.
    """
    if case_id not in CASE_IDS:
        raise InvalidArgument(f"unknown case id {case_id!r}")
    g = {k: _frac(v) for k, v in given.items()}
    out = _DERIVERS[case_id](g)
    _assert_balance(case_id, out)
    return out


def _powers_sum_check(powers):
    total = sum(powers)
    if total != 1:
        raise ExponentMismatch(f"rhs powers {powers} sum to {total}, not 1")


def _assert_balance(case_id, exp):
    """Scaling-dimension balance: smoothness part and 1/p part match exactly."""
    lhs, rhs, _, _ = _RECIPES[case_id](exp)
    s_l, c_l = lhs.scaling_pair()
    s_r = Fraction(0)
    c_r = Fraction(0)
    for spec, power in rhs:
        sm, ip = spec.scaling_pair()
        s_r += power * sm
        c_r += power * ip
    if (s_l, c_l) != (s_r, c_r):
        raise ExponentMismatch(
            f"{case_id}: scaling dimension mismatch lhs=({s_l},{c_l}) rhs=({s_r},{c_r})"
        )


# --- per-case derivations ---------------------------------------------------


def _derive_thm1_2(g):
    _need(g, "alpha1", "alpha2", "sigma")
    a1, a2, s = g["alpha1"], g["alpha2"], g["sigma"]
    _require(s > 0, "sigma > 0")
    _require(0 <= a1 < a2, "0 <= alpha1 < alpha2")
    _exactly_one_of(g, ["p1", "p2"])
    out = dict(g)
    if "p2" in g:
        out["p1"] = _scaled_p(g["p2"], a2 + s, a1 + s)
    else:
        out["p2"] = _scaled_p(g["p1"], a1 + s, a2 + s)
    if "p1" in g and "p2" in g and g["p1"] != _scaled_p(g["p2"], a2 + s, a1 + s):
        raise ExponentMismatch("p1 != p2*(alpha2+sigma)/(alpha1+sigma)")
    p1, p2 = out["p1"], out["p2"]
    _check_integrability("p1", p1)
    _check_integrability("p2", p2)
    _require(p2 == INF or p2 * (a2 + s) > 1, "p2*(alpha2+sigma) > 1")
    out["power_low"] = (a2 - a1) / (a2 + s)
    out["power_high"] = (a1 + s) / (a2 + s)
    _powers_sum_check([out["power_low"], out["power_high"]])
    return out


def _derive_thm1_3(g):
    _need(g, "alpha1", "alpha2")
    a1, a2 = g["alpha1"], g["alpha2"]
    _require(0 < a1 < a2, "0 < alpha1 < alpha2")
    _exactly_one_of(g, ["p1", "p2"])
    out = dict(g)
    if "p2" in g:
        out["p1"] = _scaled_p(g["p2"], a2, a1)
    else:
        out["p2"] = _scaled_p(g["p1"], a1, a2)
    if "p1" in g and "p2" in g and g["p1"] != _scaled_p(g["p2"], a2, a1):
        raise ExponentMismatch("p1 != alpha2*p2/alpha1")
    p1, p2 = out["p1"], out["p2"]
    _check_integrability("p1", p1)
    _check_integrability("p2", p2)
    _require(p2 == INF or a2 * p2 > 1, "alpha2*p2 > 1")
    out["power_low"] = (a2 - a1) / a2
    out["power_high"] = a1 / a2
    _powers_sum_check([out["power_low"], out["power_high"]])
    return out


def _derive_lem3_2(g):
    _need(g, "alpha1", "alpha2")
    a1, a2 = g["alpha1"], g["alpha2"]
    _require(0 < a1 < a2 < 1, "0 < alpha1 < alpha2 < 1")
    theta = a1 / a2
    out = _complete_harmonic(g, "p1", [(1 - theta, "r"), (theta, "p2")])
    _check_integrability("p1", out["p1"], allow_inf=False)
    _check_integrability("p2", out["p2"], allow_inf=False)
    _require(out["r"] == INF or out["r"] > 1, "r > 1")
    out["power_low"] = 1 - theta
    out["power_high"] = theta
    _powers_sum_check([out["power_low"], out["power_high"]])
    return out


def _derive_lem3_5(g):
    _need(g, "alpha0", "alpha1", "alpha2")
    a0, a1, a2 = g["alpha0"], g["alpha1"], g["alpha2"]
    _require(0 < a0 < a1 < a2 <= 1, "0 < alpha0 < alpha1 < alpha2 <= 1")
    theta = (a2 - a1) / (a2 - a0)
    out = _complete_harmonic(g, "p1", [(theta, "p0"), (1 - theta, "p2")])
    out["theta"] = theta
    for name in ("p0", "p1", "p2"):
        _check_integrability(name, out[name])
    _require(
        a0 - _inv(out["p0"]) < a2 - _inv(out["p2"]),
        "alpha0 - 1/p0 < alpha2 - 1/p2",
    )
    out["power_low"] = theta
    out["power_high"] = 1 - theta
    _powers_sum_check([theta, 1 - theta])
    return out


def _derive_eq1_1a(g):
    _need(g, "s")
    s = g["s"]
    _require(s > 0, "s > 0")
    _exactly_one_of(g, ["p1", "p2"])
    out = dict(g)
    if "p2" in g:
        out["p1"] = _scaled_p(g["p2"], s + 1, s)
    else:
        out["p2"] = _scaled_p(g["p1"], s, s + 1)
    _check_integrability("p1", out["p1"])
    _check_integrability("p2", out["p2"])
    out["power_low"] = 1 / (s + 1)
    out["power_high"] = s / (s + 1)
    _powers_sum_check([out["power_low"], out["power_high"]])
    return out


def _derive_eq1_21(g):
    _need(g, "alpha1")
    a1 = g["alpha1"]
    _require(0 < a1 < 1, "0 < alpha1 < 1")
    out = _complete_harmonic(g, "p1", [(1 - a1, "r"), (a1, "p2")])
    _check_integrability("p1", out["p1"], allow_inf=False)
    _check_integrability("p2", out["p2"])
    _require(out["r"] > 1, "r > 1")  # r = 1 is recorded as untested
    out["power_low"] = 1 - a1
    out["power_high"] = a1
    _powers_sum_check([out["power_low"], out["power_high"]])
    return out


def _derive_eq1_0(g):
    _need(g, "alpha1", "alpha2", "sigma")
    a1, a2, s = g["alpha1"], g["alpha2"], g["sigma"]
    _require(s > 0, "sigma > 0")
    _require(0 < a1 < a2 < 1, "0 < alpha1 < alpha2 < 1")
    out = dict(g)
    out["p1"] = INF
    out["p2"] = INF
    out["power_low"] = (a2 - a1) / (a2 + s)
    out["power_high"] = (a1 + s) / (a2 + s)
    _powers_sum_check([out["power_low"], out["power_high"]])
    return out


def _derive_eq2_m3(g):
    _need(g, "alpha2", "sigma")
    a2, s = g["alpha2"], g["sigma"]
    _require(s > 0, "sigma > 0")
    _require(0 < a2 < 1, "0 < alpha2 < 1")
    out = dict(g)
    out["alpha1"] = Fraction(0)
    out["power_low"] = a2 / (a2 + s)
    out["power_high"] = s / (a2 + s)
    _powers_sum_check([out["power_low"], out["power_high"]])
    return out


def _derive_eq2_m2(g):
    # printed side conditions in the source are inconsistent for this display;
    # implemented for 0 < alpha1 < alpha2 < 1 with no negative-order factor
    _need(g, "alpha1", "alpha2")
    a1, a2 = g["alpha1"], g["alpha2"]
    _require(0 < a1 < a2 < 1, "0 < alpha1 < alpha2 < 1")
    out = dict(g)
    out["sigma"] = Fraction(0)
    out["power_low"] = (a2 - a1) / a2
    out["power_high"] = a1 / a2
    _powers_sum_check([out["power_low"], out["power_high"]])
    return out


def _derive_eq2_m4(g):
    _need(g, "alpha1", "sigma")
    a1, s = g["alpha1"], g["sigma"]
    _require(s > 0, "sigma > 0")
    _require(0 < a1 < 1, "0 < alpha1 < 1")
    out = dict(g)
    out["alpha2"] = Fraction(1)
    out["power_low"] = (1 - a1) / (1 + s)
    out["power_high"] = (a1 + s) / (1 + s)
    _powers_sum_check([out["power_low"], out["power_high"]])
    return out


def _derive_eq2_0a(g):
    _need(g, "alpha1", "alpha2")
    a1, a2 = g["alpha1"], g["alpha2"]
    _require(0 < a1 < 1, "0 < alpha1 < 1")
    _require(
        a2 != INF and a2 >= 1 and a2.denominator == 1, "alpha2 integer >= 1"
    )
    out = dict(g)
    out["power_low"] = (a2 - a1) / a2
    out["power_high"] = a1 / a2
    _powers_sum_check([out["power_low"], out["power_high"]])
    return out


def _derive_eq2_0b(g):
    _need(g, "alpha1", "alpha2")
    a1, a2 = g["alpha1"], g["alpha2"]
    _require(0 < a1 < 1, "0 < alpha1 < 1")
    _require(
        a2 != INF and a2 > 1 and a2.denominator != 1, "alpha2 > 1 non-integer"
    )
    out = dict(g)
    out["power_low"] = (a2 - a1) / a2
    out["power_high"] = a1 / a2
    _powers_sum_check([out["power_low"], out["power_high"]])
    return out


def _derive_eq2_3(g):
    _need(g, "alpha1")
    a1 = g["alpha1"]
    _require(0 < a1 < 1, "0 < alpha1 < 1")
    have = _exactly_one_of(g, ["p1", "p2"])
    out = dict(g)
    if "p2" in g:
        out["p1"] = _scaled_p(g["p2"], Fraction(1), a1)
    else:
        out["p2"] = _scaled_p(g["p1"], a1, Fraction(1))
    _check_integrability("p1", out["p1"])
    _check_integrability("p2", out["p2"])
    _require(out["p2"] == INF or out["p2"] > 1, "alpha2*p2 = p2 > 1")
    out["power_low"] = 1 - a1
    out["power_high"] = a1
    _powers_sum_check([out["power_low"], out["power_high"]])
    return out


def _derive_gn_classic(g):
    _need(g, "alpha1", "alpha2")
    a1, a2 = g["alpha1"], g["alpha2"]
    _require(0 <= a1 < a2, "0 <= alpha1 < alpha2")
    theta = a1 / a2
    out = _complete_harmonic(g, "p1", [(1 - theta, "q"), (theta, "p2")])
    _check_integrability("p1", out["p1"])
    _check_integrability("p2", out["p2"])
    _check_integrability("q", out["q"])
    out["power_low"] = 1 - theta
    out["power_high"] = theta
    _powers_sum_check([out["power_low"], out["power_high"]])
    return out


_DERIVERS = {
    "thm1_2": _derive_thm1_2,
    "thm1_3": _derive_thm1_3,
    "lem3_2": _derive_lem3_2,
    "lem3_5": _derive_lem3_5,
    "eq1_1a": _derive_eq1_1a,
    "eq1_21": _derive_eq1_21,
    "eq1_0": _derive_eq1_0,
    "eq2_m3": _derive_eq2_m3,
    "eq2_m2": _derive_eq2_m2,
    "eq2_m4": _derive_eq2_m4,
    "eq2_0a": _derive_eq2_0a,
    "eq2_0b": _derive_eq2_0b,
    "eq2_3": _derive_eq2_3,
    "gn_classic": _derive_gn_classic,
}


# --- recipes: lhs spec, rhs factor list, low-end pair for the borderline ----


def _recipe_thm1_2(e):
    lhs = _sob(e["alpha1"], e["p1"])
    rhs = (
        (_bes(-e["sigma"]), e["power_low"]),
        (_sob(e["alpha2"], e["p2"]), e["power_high"]),
    )
    return lhs, rhs, None, "negative-order band norm controls the low end"


def _recipe_thm1_3(e):
    lhs = _sob(e["alpha1"], e["p1"])
    rhs = (
        (_bes(0), e["power_low"]),
        (_sob(e["alpha2"], e["p2"]), e["power_high"]),
    )
    return lhs, rhs, None, "zero-order band norm controls the low end"


def _recipe_lem3_2(e):
    lhs = _sob(e["alpha1"], e["p1"])
    rhs = (
        (_lp(e["r"]), e["power_low"]),
        (_sob(e["alpha2"], e["p2"]), e["power_high"]),
    )
    low = (Fraction(0), e["r"], e["alpha2"], e["p2"])
    return lhs, rhs, low, ""


def _recipe_lem3_5(e):
    lhs = _sob(e["alpha1"], e["p1"])
    rhs = (
        (_sob(e["alpha0"], e["p0"]), e["power_low"]),
        (_sob(e["alpha2"], e["p2"]), e["power_high"]),
    )
    low = (e["alpha0"], e["p0"], e["alpha2"], e["p2"])
    return lhs, rhs, low, ""


def _recipe_eq1_1a(e):
    lhs = _lp(e["p1"])
    rhs = (
        (_bes(-e["s"]), e["power_low"]),
        (_sob(Fraction(1), e["p2"]), e["power_high"]),
    )
    return lhs, rhs, None, ""


def _recipe_eq1_21(e):
    lhs = _sob(e["alpha1"], e["p1"])
    rhs = (
        (_lp(e["r"]), e["power_low"]),
        (_sob(Fraction(1), e["p2"]), e["power_high"]),
    )
    low = (Fraction(0), e["r"], Fraction(1), e["p2"])
    return lhs, rhs, low, ""


def _recipe_eq1_0(e):
    lhs = _sob(e["alpha1"], INF)
    rhs = (
        (_bes(-e["sigma"]), e["power_low"]),
        (_sob(e["alpha2"], INF), e["power_high"]),
    )
    return lhs, rhs, None, ""


def _recipe_eq2_m3(e):
    lhs = _lp(INF)
    rhs = (
        (_bes(-e["sigma"]), e["power_low"]),
        (_bes(e["alpha2"]), e["power_high"]),
    )
    return lhs, rhs, None, ""


def _recipe_eq2_m2(e):
    lhs = _bes(e["alpha1"])
    rhs = (
        (_bes(0), e["power_low"]),
        (_bes(e["alpha2"]), e["power_high"]),
    )
    return lhs, rhs, None, ""


def _recipe_eq2_m4(e):
    lhs = _bes(e["alpha1"])
    rhs = (
        (_bes(-e["sigma"]), e["power_low"]),
        (_sob(Fraction(1), INF), e["power_high"]),
    )
    return lhs, rhs, None, ""


def _recipe_eq2_0a(e):
    # proved through vanishing moments, so both band norms take the
    # mollifier-sup route; the filter bank stays available as a cross-check
    lhs = _bsup(e["alpha1"])
    rhs = (
        (_bsup(0), e["power_low"]),
        (_sob(e["alpha2"], INF), e["power_high"]),
    )
    return lhs, rhs, None, ""


_recipe_eq2_0b = _recipe_eq2_0a


def _recipe_eq2_3(e):
    lhs = _sob(e["alpha1"], e["p1"])
    rhs = (
        (_bes(0), e["power_low"]),
        (_sob(Fraction(1), e["p2"]), e["power_high"]),
    )
    return lhs, rhs, None, ""


def _recipe_gn_classic(e):
    lhs = _sob(e["alpha1"], e["p1"])
    rhs = (
        (_lp(e["q"]), e["power_low"]),
        (_sob(e["alpha2"], e["p2"]), e["power_high"]),
    )
    low = (Fraction(0), e["q"], e["alpha2"], e["p2"])
    return lhs, rhs, low, ""


_RECIPES = {
    "thm1_2": _recipe_thm1_2,
    "thm1_3": _recipe_thm1_3,
    "lem3_2": _recipe_lem3_2,
    "lem3_5": _recipe_lem3_5,
    "eq1_1a": _recipe_eq1_1a,
    "eq1_21": _recipe_eq1_21,
    "eq1_0": _recipe_eq1_0,
    "eq2_m3": _recipe_eq2_m3,
    "eq2_m2": _recipe_eq2_m2,
    "eq2_m4": _recipe_eq2_m4,
    "eq2_0a": _recipe_eq2_0a,
    "eq2_0b": _recipe_eq2_0b,
    "eq2_3": _recipe_eq2_3,
    "gn_classic": _recipe_gn_classic,
}


def borderline_condition_holds(case: "InequalityCase") -> bool:
    """Whether the low-end/high-end exponents satisfy the strict validity
    condition alpha_low - 1/p_low < alpha_high - 1/p_high.

    Cases whose low end is a band norm always satisfy it (that replacement is
    exactly what repairs the borderline)."""
    return case.condition_ok


def _build_case(case_id, exponents) -> InequalityCase:
    lhs, rhs, low, note = _RECIPES[case_id](exponents)
    if low is None:
        cond_ok = True
        cond = note or "band-norm low end"
    else:
        a_lo, p_lo, a_hi, p_hi = low
        cond_ok = (a_lo - _inv(p_lo)) < (a_hi - _inv(p_hi))
        cond = "alpha_low - 1/p_low < alpha_high - 1/p_high"
    return InequalityCase(
        id=case_id,
        exponents=exponents,
        lhs=lhs,
        rhs=rhs,
        condition_ok=cond_ok,
        condition=cond,
    )


def make_case(case_id: str, given: dict) -> InequalityCase:
    return _build_case(case_id, derive_exponents(case_id, given))


def reference_cases() -> dict:
    """The default exponent instance of every catalog case."""
    settings = {
        "thm1_2": {"alpha1": "1/4", "alpha2": "3/4", "sigma": 1, "p2": 2},
        "thm1_3": {"alpha1": "1/2", "alpha2": 1, "p2": 2},
        "lem3_2": {"alpha1": "3/10", "alpha2": "4/5", "p2": 2, "r": 4},
        "lem3_5": {"alpha0": "1/5", "alpha1": "1/2", "alpha2": 1, "p0": 2, "p2": 2},
        "eq1_1a": {"s": 1, "p2": 2},
        "eq1_21": {"alpha1": "1/2", "p2": 2, "r": 4},
        "eq1_0": {"alpha1": "3/10", "alpha2": "7/10", "sigma": "1/2"},
        "eq2_m3": {"alpha2": "7/10", "sigma": "1/2"},
        "eq2_m2": {"alpha1": "3/10", "alpha2": "7/10"},
        "eq2_m4": {"alpha1": "2/5", "sigma": "1/2"},
        "eq2_0a": {"alpha1": "1/2", "alpha2": 1},
        "eq2_0b": {"alpha1": "1/2", "alpha2": "3/2"},
        "eq2_3": {"alpha1": "1/2", "p2": 2},
        "gn_classic": {"alpha1": "1/2", "alpha2": 1, "q": 2, "p2": 2},
    }
    return {cid: make_case(cid, given) for cid, given in settings.items()}


def blowup_reference_case() -> InequalityCase:
    """The borderline-violating instance probed by the blow-up study."""
    return make_case("gn_classic", {"alpha1": "1/2", "alpha2": 1, "q": "inf", "p2": 1})


# ---------------------------------------------------------------------------
# evaluation context and ratio records


@dataclass
class EvalContext:
    """Shared bank/family plus a per-label norm cache."""

    grid: Grid
    bank: FilterBank
    family: MollifierFamily
    _cache: dict = field(default_factory=dict, repr=False)

    @classmethod
    def build(cls, grid: Grid, moment_order: int = 2, eps_count: int = 4) -> "EvalContext":
        return cls(
            grid=grid,
            bank=build_filter_bank(grid),
            family=build_mollifiers(grid, k=moment_order, eps_count=eps_count),
        )

    def norm_result(self, f: SampledFunction, spec: NormSpec) -> NormResult:
        key = (f.label, spec)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        d = spec.float_params()
        if spec.kind == "sobolev":
            res = sobolev_norm_general(f, d["alpha"], d["p"])
        elif spec.kind == "lp":
            res = NormResult(value=lp_norm(f, d["p"]), kind="lp", params={"p": d["p"]})
        elif spec.kind == "besov":
            res = besov_norm(f, d["s"], d["p"], d["q"], self.bank)
        elif spec.kind == "besov_sup":
            res = besov_sup_mollifier(f, d["s"], self.family)
        else:
            raise InvalidArgument(f"unknown norm kind {spec.kind}")
        self._cache[key] = res
        return res

    def norm(self, f: SampledFunction, spec: NormSpec) -> float:
        return self.norm_result(f, spec).value

    def grid_meta(self) -> dict:
        return {
            "grid": self.grid.to_json(),
            "j_range": [self.bank.j_min, self.bank.j_max],
            "epsilons": list(self.family.epsilons),
            "h_min": self.grid.spacing,
            "h_max": 0.5 * self.grid.box_length,
            "negative_smoothness_mean_zero": True,
        }


@dataclass(frozen=True)
class RatioRecord:
    """One (case, function) evaluation: both sides plus the ratio."""

    case_id: str
    function_label: str
    lhs: float
    rhs_factors: tuple  # of (kind descriptor dict, value, power)
    rhs: float
    ratio: float
    grid_meta: dict
    degenerate: bool = False

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "case_id": self.case_id,
            "function_label": self.function_label,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "ratio": self.ratio,
            "rhs_factors": [
                {"kind": k, "value": v, "power": p} for k, v, p in self.rhs_factors
            ],
            "degenerate": self.degenerate,
            "grid_meta": self.grid_meta,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "RatioRecord":
        return cls(
            case_id=obj["case_id"],
            function_label=obj["function_label"],
            lhs=obj["lhs"],
            rhs_factors=tuple(
                (f["kind"], f["value"], f["power"]) for f in obj["rhs_factors"]
            ),
            rhs=obj["rhs"],
            ratio=obj["ratio"],
            grid_meta=obj.get("grid_meta", {}),
            degenerate=obj.get("degenerate", False),
        )


def evaluate(case: InequalityCase, f: SampledFunction, ctx: EvalContext) -> RatioRecord:
    """Compute both sides of a cataloged inequality for one function."""
    lhs = float(ctx.norm(f, case.lhs))
    factors = []
    rhs = 1.0
    for spec, power in case.rhs:
        v = float(ctx.norm(f, spec))
        pw = float(power)
        factors.append((_spec_label(spec), v, pw))
        rhs *= v ** pw
    scale = max(lhs, rhs)
    degenerate = bool(rhs <= DEGENERATE_TOL * max(scale, 1.0) or rhs == 0.0)
    ratio = 0.0 if degenerate else lhs / rhs
    return RatioRecord(
        case_id=case.id,
        function_label=f.label,
        lhs=lhs,
        rhs_factors=tuple(factors),
        rhs=rhs,
        ratio=ratio,
        grid_meta=ctx.grid_meta(),
        degenerate=degenerate,
    )


def _spec_label(spec: NormSpec) -> str:
    d = spec.float_params()
    if spec.kind == "lp":
        return f"L^{d['p']:g}"
    if spec.kind == "sobolev":
        return f"W^({d['alpha']:g},{d['p']:g})"
    if spec.kind == "besov":
        return f"B^({d['s']:g},{d['p']:g},{d['q']:g})"
    if spec.kind == "besov_sup":
        return f"Bsup^{d['s']:g}"
    return spec.kind


# ---------------------------------------------------------------------------
# structural checks


@dataclass(frozen=True)
class BandHolderReport:
    alpha1: float
    p1: float
    alpha2: float
    p2: float
    per_band: tuple  # of (j, lhs_j, rhs_j)
    max_violation: float  # relative; <= 0 means the inequality held everywhere


def band_holder_check(
    f: SampledFunction, alpha1, p1, alpha2, p2, bank: FilterBank
) -> BandHolderReport:
    """Exact per-band interpolation: with alpha1*p1 = alpha2*p2 and p1 >= p2,
    2^(j a1 p1) ||band_j||_p1^p1 <= 2^(j a2 p2) ||band_j||_p2^p2 * B0^(p1-p2),
    where B0 is the sup-over-bands of ||band_j||_inf."""
    a1, a2 = _frac(alpha1), _frac(alpha2)
    q1, q2 = _frac(p1), _frac(p2)
    if a1 * q1 != a2 * q2:
        raise ExponentMismatch(f"alpha1*p1 = {a1 * q1} != alpha2*p2 = {a2 * q2}")
    if q1 < q2:
        raise ExponentMismatch(f"need p1 >= p2, got {q1} < {q2}")
    fa1, fp1, fa2, fp2 = float(a1), float(q1), float(a2), float(q2)
    centered = SampledFunction(
        grid=f.grid, values=f.values - float(np.mean(f.values)), label=f"{f.label}-mean"
    )
    bands = {j: band(centered, j, bank).values for j in bank.bands}
    b0 = max(float(np.max(np.abs(bv))) for bv in bands.values())
    rows = []
    worst = -math.inf
    for j, bv in bands.items():
        n1 = array_lp_norm(bv, f.grid, fp1)
        n2 = array_lp_norm(bv, f.grid, fp2)
        lhs_j = 2.0 ** (j * fa1 * fp1) * n1 ** fp1
        rhs_j = 2.0 ** (j * fa2 * fp2) * n2 ** fp2 * b0 ** (fp1 - fp2)
        rows.append((j, lhs_j, rhs_j))
        denom = max(rhs_j, 1e-300)
        worst = max(worst, (lhs_j - rhs_j) / denom)
    return BandHolderReport(
        alpha1=fa1, p1=fp1, alpha2=fa2, p2=fp2, per_band=tuple(rows), max_violation=worst
    )


@dataclass(frozen=True)
class EquivalenceReport:
    s: float
    p: float
    gagliardo_over_band: float
    directional_over_band: float
    degenerate: bool


def equivalence_check(f: SampledFunction, s: float, p: float, ctx: EvalContext) -> EquivalenceReport:
    """Both difference forms of the fractional seminorm against the band form."""
    bb = besov_norm(f, s, p, p, ctx.bank).value
    if bb == 0.0:
        return EquivalenceReport(s=s, p=p, gagliardo_over_band=0.0, directional_over_band=0.0, degenerate=True)
    ga = sobolev_seminorm(f, s, p).value
    di = directional_difference_seminorm(f, s, p).value
    return EquivalenceReport(
        s=s, p=p, gagliardo_over_band=ga / bb, directional_over_band=di / bb, degenerate=False
    )


@dataclass(frozen=True)
class LiftingReport:
    s: float
    order: int
    ratios: tuple  # per multi-index
    degenerate: bool

    @property
    def max_ratio(self) -> float:
        return max(self.ratios) if self.ratios else 0.0


def lifting_check(f: SampledFunction, s: float, order: int, ctx: EvalContext) -> LiftingReport:
    """Differentiation drops the band-norm order by the derivative order:
    ratio of B^(s-m) of D^gamma f to B^s of f, per component."""
    den = besov_norm(f, s, INF, INF, ctx.bank).value
    if den == 0.0:
        return LiftingReport(s=s, order=order, ratios=(), degenerate=True)
    ratios = []
    for gamma in multi_indices(f.grid.dim, order):
        df = spectral_derivative(f, gamma if f.grid.dim > 1 else gamma[0])
        num = besov_norm(df, s - order, INF, INF, ctx.bank).value
        ratios.append(num / den)
    return LiftingReport(s=s, order=order, ratios=tuple(ratios), degenerate=False)


@dataclass(frozen=True)
class TwoScaleReport:
    alpha1: float
    alpha2: float
    sigma: float
    max_ratio: float
    grid_pairs: int


def two_scale_bound_check(
    f: SampledFunction,
    alpha1: float,
    alpha2: float,
    sigma: float,
    ctx: EvalContext,
    deltas=None,
) -> TwoScaleReport:
    """Mollified sup at one scale against the two-term band bound:
    eps^-a1 ||phi_eps * f||_inf <= C (delta^(a2-a1) B^(a2) + delta^-(a1+sigma) B^(-sigma))
    for every dyadic (eps, delta) pair; returns the max observed ratio."""
    if not alpha1 < alpha2:
        raise ConditionViolated("alpha1 < alpha2 required", condition="alpha1 < alpha2")
    if ctx.family.moment_order <= alpha2:
        raise ConditionViolated(
            f"mollifier moment order {ctx.family.moment_order} must exceed alpha2 = {alpha2}",
            condition="moment_order > alpha2",
        )
    if deltas is None:
        deltas = ctx.family.epsilons
    b_hi = besov_norm(f, alpha2, INF, INF, ctx.bank).value
    b_lo = besov_norm(f, -sigma, INF, INF, ctx.bank).value
    g = SampledFunction(
        grid=f.grid, values=f.values - float(np.mean(f.values)), label=f"{f.label}-mean"
    )
    worst = 0.0
    pairs = 0
    for eps in ctx.family.epsilons:
        sup = float(np.max(np.abs(mollify(g, eps, ctx.family).values)))
        lhs = eps ** (-alpha1) * sup
        for delta in deltas:
            rhs = delta ** (alpha2 - alpha1) * b_hi + delta ** (-(alpha1 + sigma)) * b_lo
            pairs += 1
            if rhs > 0:
                worst = max(worst, lhs / rhs)
    return TwoScaleReport(
        alpha1=alpha1, alpha2=alpha2, sigma=sigma, max_ratio=worst, grid_pairs=pairs
    )


@dataclass(frozen=True)
class EmbeddingReport:
    band0_over_bmo: float
    bmo_over_sup: float
    degenerate: bool


def embedding_chain_check(f: SampledFunction, ctx: EvalContext) -> EmbeddingReport:
    """Computed-value version of the chain sup-norm -> mean-oscillation ->
    zero-order band norm: both one-sided ratios."""
    bmo = bmo_norm(f).value
    sup = lp_norm(f, INF)
    if bmo == 0.0 or sup == 0.0:
        return EmbeddingReport(band0_over_bmo=0.0, bmo_over_sup=0.0, degenerate=True)
    b0 = besov_norm(f, 0.0, INF, INF, ctx.bank).value
    return EmbeddingReport(band0_over_bmo=b0 / bmo, bmo_over_sup=bmo / sup, degenerate=False)


# ---------------------------------------------------------------------------
# resolution bookkeeping for dilation studies

DERIVATIVE_TAIL_LIMIT = 1e-8  # matches the spectral_derivative gate
# functions whose (mean-removed) spectral energy leaks past the mollifier
# family's frequency reach by more than this are not resolved for the
# mollifier-route recipes; 5e-3 separates the smooth corpus members from the
# step/packet members whose fine content sits below the smallest kernel
MOLLIFIER_REACH_LIMIT = 5e-3


def mollifier_reach_fraction(f: SampledFunction, family: MollifierFamily) -> float:
    """Spectral energy fraction of mean-removed f outside the frequency range
    the mollifier family can see, [1/(2 eps_max), 2/eps_min]."""
    spec = np.fft.fftn(f.values - float(np.mean(f.values)))
    power = np.abs(spec) ** 2
    total = float(np.sum(power))
    if total == 0.0:
        return 0.0
    r = f.grid.freq_magnitude()
    lo = 1.0 / (2.0 * max(family.epsilons))
    hi = 2.0 / min(family.epsilons)
    outside = (r < lo) | (r > hi)
    outside &= r > 0
    return float(np.sum(power[outside])) / total


def case_resolution_obstacles(
    case: InequalityCase, f: SampledFunction, ctx: EvalContext
) -> list:
    """Reasons this function is not resolved for this case's instruments.

    Empty list means every norm in the recipe sees the function's spectral
    content: derivative-bearing factors need the band-limit gate, and
    mollifier-route factors need the content inside the family's reach.
    """
    from .lpdecomp import spectral_tail_fraction

    obstacles = []
    specs = [case.lhs] + [s for s, _ in case.rhs]
    needs_derivative = any(
        s.kind == "sobolev" and dict(s.params)["alpha"] >= 1 for s in specs
    )
    uses_mollifier = any(s.kind == "besov_sup" for s in specs)
    if needs_derivative:
        tail = spectral_tail_fraction(f)
        if tail >= DERIVATIVE_TAIL_LIMIT:
            obstacles.append(f"spectral tail {tail:.2e} blocks derivatives")
    if uses_mollifier:
        reach = mollifier_reach_fraction(f, ctx.family)
        if reach >= MOLLIFIER_REACH_LIMIT:
            obstacles.append(f"energy fraction {reach:.2e} outside mollifier reach")
    return obstacles


def is_resolved_for_case(case: InequalityCase, f: SampledFunction, ctx: EvalContext) -> bool:
    return not case_resolution_obstacles(case, f, ctx)


# ---------------------------------------------------------------------------
# parameter validation for the pointwise estimates


POINTWISE_BOUND_IDS = ("eq1.1", "eq1.1b", "eq1.13", "eq1.23", "eq2.5a", "eq2.5")


def validate_pointwise_bound(bound_id: str, params: dict) -> dict:
    """Check the exponent relations of a pointwise estimate and return the
    completed float parameter set (powers included)."""
    if bound_id not in POINTWISE_BOUND_IDS:
        raise InvalidArgument(f"unknown pointwise bound {bound_id!r}")
    g = {k: _frac(v) for k, v in params.items()}
    if bound_id == "eq1.1":
        _need(g, "s", "alpha", "p")
        _require(g["s"] > 0, "s > 0")
        _require(0 < g["alpha"] <= 1, "0 < alpha <= 1")
        _check_integrability("p", g["p"], allow_inf=False)
        denom = g["s"] + g["alpha"]
        out = dict(g, power_low=g["alpha"] / denom, power_high=g["s"] / denom)
    elif bound_id == "eq1.1b":
        _need(g, "s")
        _require(g["s"] > 0, "s > 0")
        out = dict(g, power_low=1 / (g["s"] + 1), power_high=g["s"] / (g["s"] + 1))
    elif bound_id == "eq1.13":
        _need(g, "alpha1", "alpha2", "p1", "p")
        _require(0 < g["alpha1"] < g["alpha2"] <= 1, "0 < alpha1 < alpha2 <= 1")
        _check_integrability("p1", g["p1"], allow_inf=False)
        _check_integrability("p", g["p"], allow_inf=False)
        out = dict(
            g,
            power_low=(g["alpha2"] - g["alpha1"]) * g["p1"] / g["alpha2"],
            power_high=g["alpha1"] * g["p1"] / g["alpha2"],
        )
    elif bound_id == "eq1.23":
        _need(g, "alpha1", "p1")
        _require(0 < g["alpha1"] < 1, "0 < alpha1 < 1")
        _check_integrability("p1", g["p1"], allow_inf=False)
        out = dict(
            g,
            power_low=(1 - g["alpha1"]) * g["p1"],
            power_high=g["alpha1"] * g["p1"],
        )
    elif bound_id == "eq2.5a":
        _need(g, "alpha0", "alpha1", "alpha2", "p0", "p1", "p2")
        _require(
            0 < g["alpha0"] < g["alpha1"] < g["alpha2"] < 1,
            "0 < alpha0 < alpha1 < alpha2 < 1",
        )
        theta = (g["alpha2"] - g["alpha1"]) / (g["alpha2"] - g["alpha0"])
        out = dict(g, theta=theta, power_low=theta * g["p1"], power_high=(1 - theta) * g["p1"])
    else:  # eq2.5
        _need(g, "alpha0", "alpha1", "p0", "p1")
        _require(0 < g["alpha0"] < g["alpha1"] < 1, "0 < alpha0 < alpha1 < 1")
        out = dict(
            g,
            power_low=(1 - g["alpha1"]) / (1 - g["alpha0"]) * g["p1"],
            power_high=(g["alpha1"] - g["alpha0"]) / (1 - g["alpha0"]) * g["p1"],
        )
    return {k: (float(v) if v != INF else INF) for k, v in out.items()}
