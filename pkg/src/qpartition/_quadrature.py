"""Half-line quadrature for smooth integrands with power-law tails.

The panel layout is shared; the rules are not.  ``integrate_gk`` runs
QUADPACK's adaptive Gauss-Kronrod on each panel and is used by
:mod:`qpartition.partition`.  ``integrate_gl`` applies fixed composite
Gauss-Legendre (error from an order-halving comparison) and is used by
:mod:`qpartition.verify`, so agreement between the two is evidence.
"""

from __future__ import annotations

import warnings
from functools import lru_cache

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .errors import AccuracyError, DivergenceError

_DECADES_ABOVE = 14


def panel_edges(features, hi_factor=10.0 ** _DECADES_ABOVE):
    """Breakpoints ``0 = e0 < e1 < ...`` resolving every ``(center, width)`` feature.

    A geometric (ratio 2) grid starts from an eighth of the smallest width;
    each resonance adds points at ``center +- width * 2**k`` until they
    reach half the center.
    """
    widths = [w for _, w in features if w > 0]
    centers = [c for c, _ in features]
    base = min(widths)
    top = max(max(centers), max(widths)) * hi_factor
    pts = [0.0]
    pts.extend(base * 2.0 ** np.arange(-3, int(np.log2(top / base)) + 2))
    for c, w in features:
        if c <= 0:
            continue
        k = np.arange(-3, max(int(np.log2(c / w)), -2))
        off = w * 2.0 ** k
        pts.extend(c - off[off < 0.5 * c])
        pts.extend(c + off[off < 0.5 * c])
        pts.append(c)
    edges = np.unique(np.asarray(pts))
    keep = np.concatenate(([True], np.diff(edges) > 1e-13 * edges[1:]))
    return edges[keep]


def _tail(f_b, f_half, b, p):
    tail = f_b * b / (p - 1)
    amp_b = f_b * b ** p
    amp_h = f_half * (b / 2) ** p
    err = abs(amp_b - amp_h) * b ** (1 - p) / (p - 1)
    return tail, err


def integrate_gk(f, features, tail_exponent, *, tail_start=0.0, rel_tail=1e-8,
                 tail_atol=0.0, tail_rtol=1e-11, epsrel=1e-13, epsabs=0.0):
    """Adaptive integration of scalar ``f`` over ``[0, inf)``.

    ``f(omega) ~ A omega**-tail_exponent`` beyond ``tail_start`` and the last
    feature.  Panels are consumed left to right until the closed-form tail
    falls below ``rel_tail`` of the running total and its own error estimate
    below ``tail_atol + tail_rtol * |total|``; the tail is then added.

    Returns ``(value, abs_error, omega_max)``.
    """
    if tail_exponent <= 1:
        raise DivergenceError(
            f"integrand decays like omega^-{tail_exponent}; the integral diverges logarithmically"
            if tail_exponent == 1 else
            f"integrand decays like omega^-{tail_exponent}; the integral diverges")
    edges = panel_edges(features)
    last_feature = max(c + w for c, w in features)
    start = max(tail_start, 4 * last_feature)
    total = 0.0
    err = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        with warnings.catch_warnings():
            # QUADPACK's roundoff warnings are reflected in the returned error.
            warnings.simplefilter("ignore", IntegrationWarning)
            val, e = quad(f, a, b, epsabs=epsabs, epsrel=epsrel, limit=200)
        total += val
        err += e
        if b >= start:
            tail, tail_err = _tail(f(b), f(b / 2), b, tail_exponent)
            if (abs(tail) <= rel_tail * abs(total)
                    and tail_err <= tail_atol + tail_rtol * abs(total)):
                return total + tail, err + tail_err, b
    raise AccuracyError(
        f"tail did not drop below {rel_tail:g} of the total by omega={edges[-1]:g}",
        estimate=total, error=err)


@lru_cache(maxsize=None)
def _gauss_legendre(n):
    return np.polynomial.legendre.leggauss(n)


def composite_gl(f, a, b, n):
    """Gauss-Legendre of order ``n`` on each panel ``[a_i, b_i]``; per-panel sums."""
    x, w = _gauss_legendre(n)
    mid = 0.5 * (a + b)[:, None]
    half = 0.5 * (b - a)[:, None]
    vals = f(mid + half * x[None, :])
    return (half * vals * w[None, :]).sum(axis=1)


def integrate_gl(f, features, *, lower=0.0, order=32, rel_tail=1e-9, tail_start=0.0):
    """Composite Gauss-Legendre over ``[lower, inf)`` for vectorized ``f``.

    The tail exponent is measured from the integrand itself (``f(b)`` vs
    ``f(2b)``) rather than supplied.  Returns ``(value, abs_error, omega_max)``.
    """
    if lower:
        features = [(max(c - lower, 0.0), w) for c, w in features]
        features.append((0.0, lower))
        edges = lower + panel_edges(features)
    else:
        edges = panel_edges(features)
    a, b = edges[:-1], edges[1:]
    hi = composite_gl(f, a, b, order)
    lo = composite_gl(f, a, b, order // 2)
    cum = np.cumsum(hi)
    cum_err = np.cumsum(np.abs(hi - lo))
    last_feature = lower + max(c + w for c, w in features)
    start = max(tail_start, 4 * last_feature)
    fb, f2b, fhalf = f(b), f(2 * b), f(b / 2)
    with np.errstate(divide="ignore", invalid="ignore"):
        q = np.log(np.abs(fb / f2b)) / np.log(2.0)
    for i in np.nonzero(b >= start)[0]:
        if fb[i] == 0:
            return cum[i], cum_err[i], b[i]
        if not np.isfinite(q[i]) or q[i] <= 1.02:
            continue
        tail, tail_err = _tail(fb[i], fhalf[i], b[i], q[i])
        if abs(tail) <= rel_tail * abs(cum[i]):
            return cum[i] + tail, cum_err[i] + tail_err, b[i]
    if np.isfinite(q[-1]) and q[-1] < 1.02:
        raise DivergenceError(f"integrand decays like omega^-{q[-1]:.3f}; the integral diverges")
    raise AccuracyError("tail did not converge within the panel layout",
                        estimate=cum[-1], error=cum_err[-1])
