"""Bracketed scalar root finding: a sign-change scan followed by bisection."""

import numpy as np

from .errors import RootNotBracketedError

SCAN_INTERVALS = 10_000
XTOL = 1e-12


def bisect(func, lo, hi, xtol=XTOL, max_iter=200):
    """Bisection on ``[lo, hi]``; ``func(lo)`` and ``func(hi)`` must differ in sign."""
    flo = func(lo)
    fhi = func(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if np.sign(flo) == np.sign(fhi):
        raise RootNotBracketedError(f"no sign change on [{lo}, {hi}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fmid = func(mid)
        if fmid == 0.0:
            return mid
        if np.sign(fmid) == np.sign(flo):
            lo, flo = mid, fmid
        else:
            hi = mid
        if hi - lo <= xtol:
            break
    # endpoint with the smaller residual
    return lo if abs(flo) <= abs(func(hi)) else hi


def scan_brackets(func, lo, hi, intervals=SCAN_INTERVALS):
    """Return ``(x0, x1, direction)`` for every subinterval where ``func`` changes sign.

    ``direction`` is +1 for a negative-to-positive crossing and -1 otherwise.
    ``func`` must accept numpy arrays. Exact zeros on grid nodes are reported as
    degenerate brackets ``(x, x, direction)`` when the neighbours differ in sign.
    """
    xs = np.linspace(lo, hi, intervals + 1)
    with np.errstate(all="ignore"):
        vs = np.asarray(func(xs), dtype=float)
    sv = np.sign(vs)
    out = []
    i = 0
    while i < intervals:
        if sv[i] != 0 and sv[i + 1] != 0 and sv[i] != sv[i + 1]:
            out.append((xs[i], xs[i + 1], int(sv[i + 1])))
        elif sv[i + 1] == 0 and 0 < i + 1 < intervals and sv[i] != 0:
            # zero on a node: look past it
            j = i + 1
            while j < intervals and sv[j] == 0:
                j += 1
            if sv[j] != 0 and sv[j] != sv[i]:
                out.append((xs[i + 1], xs[i + 1], int(sv[j])))
            i = j
            continue
        i += 1
    return out


def find_roots(func, lo, hi, intervals=SCAN_INTERVALS, xtol=XTOL):
    """All sign-change roots of ``func`` on ``[lo, hi]`` as ``(root, direction)`` pairs."""
    roots = []
    for x0, x1, direction in scan_brackets(func, lo, hi, intervals):
        if x0 == x1:
            roots.append((float(x0), direction))
        else:
            roots.append((float(bisect(lambda t: float(func(t)), x0, x1, xtol)), direction))
    return roots
