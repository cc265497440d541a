"""Independent brute-force oracles, kept free of the library's own
implementations: plain Python double loops over sample pairs."""

import math


def naive_sobolev_seminorm(values, box_length, alpha, p):
    """Direct O(N^2) double sum over all periodic sample pairs, 1D."""
    n = len(values)
    h = box_length / n
    acc = 0.0
    for x in range(n):
        for i in range(1, n):
            dist = min(i, n - i) * h
            diff = abs(values[(x + i) % n] - values[x])
            acc += diff ** p / dist ** (1.0 + alpha * p)
    return (acc * h * h) ** (1.0 / p)


def naive_lp_norm(values, box_length, p):
    n = len(values)
    h = box_length / n
    if p == math.inf:
        return max(abs(v) for v in values)
    return (sum(abs(v) ** p for v in values) * h) ** (1.0 / p)


def single_mode_besov_oracle(k, mode_lp_norm, s, q, transfer_at):
    """Band norm of a pure cosine mode: the diagonal two-term formula.

    ``transfer_at(j)`` returns the built transfer value at radial frequency k.
    """
    terms = []
    j = -60
    while j < 60:
        t = transfer_at(j)
        if t > 0.0:
            terms.append(2.0 ** (j * s) * t * mode_lp_norm)
        j += 1
    if not terms:
        return 0.0
    if q == math.inf:
        return max(terms)
    return sum(t ** q for t in terms) ** (1.0 / q)
