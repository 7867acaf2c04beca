"""Vectorised adaptive Gauss-Legendre quadrature with interval bisection.

Every pass evaluates all still-active panels at once: each panel gets an
``order``-point rule on the whole panel and on its two halves, and the
difference is the error estimate. Panels whose estimate is within their share
of the tolerance (proportional to their length) are accepted; the rest are
bisected. Accepted contributions are summed in panel order with ``math.fsum``
so the result does not depend on the order panels converge in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import QuadratureError


@dataclass(frozen=True)
class QuadResult:
    value: complex | float
    error: float
    panels: int
    evaluations: int


_RULES: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _rule(order):
    if order not in _RULES:
        _RULES[order] = np.polynomial.legendre.leggauss(order)
    return _RULES[order]


def _panel_sums(f, a, b, order):
    x, w = _rule(order)
    half = 0.5 * (b - a)
    nodes = (0.5 * (a + b))[:, None] + half[:, None] * x[None, :]
    values = f(nodes)
    return half * (values @ w)


def integrate(
    f,
    edges,
    atol: float,
    order: int = 10,
    max_passes: int = 40,
    max_panels: int = 2_000_000,
) -> QuadResult:
    """Integrate ``f`` over the interval spanned by the sorted ``edges``.

    ``f`` takes an ndarray of abscissae (any shape) and returns values of the
    same shape, real or complex. Interior edges are initial panel boundaries;
    place them at kinks, discontinuities and oscillation nodes.

    Raises QuadratureError when the estimated total error after
    ``max_passes`` bisection rounds still exceeds ``atol``.
    """
    edges = np.asarray(edges, dtype=float)
    if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0):
        raise ValueError("edges must be a strictly increasing sequence of >= 2 points")
    total_length = edges[-1] - edges[0]
    a, b = edges[:-1], edges[1:]
    whole = _panel_sums(f, a, b, order)
    done_a, done_v, done_e = [], [], []
    evaluations = whole.size * order
    for _ in range(max_passes):
        mid = 0.5 * (a + b)
        left = _panel_sums(f, a, mid, order)
        right = _panel_sums(f, mid, b, order)
        evaluations += 2 * a.size * order
        fine = left + right
        err = np.abs(fine - whole)
        ok = err <= atol * (b - a) / total_length
        done_a.append(a[ok])
        done_v.append(fine[ok])
        done_e.append(err[ok])
        if ok.all():
            a = a[:0]
            break
        bad = ~ok
        a = np.concatenate([a[bad], mid[bad]])
        b = np.concatenate([mid[bad], b[bad]])
        whole = np.concatenate([left[bad], right[bad]])
        if a.size > max_panels:
            break
    if a.size:
        # unconverged panels still contribute their best estimate
        done_a.append(a)
        done_v.append(whole)
        done_e.append(np.full(a.size, np.inf))
    starts = np.concatenate(done_a)
    values = np.concatenate(done_v)
    errors = np.concatenate(done_e)
    order_idx = np.argsort(starts, kind="stable")
    values = values[order_idx]
    error = float(errors.sum())
    if np.iscomplexobj(values):
        value = complex(math.fsum(values.real), math.fsum(values.imag))
    else:
        value = math.fsum(values)
    if not error <= atol:
        raise QuadratureError(
            f"adaptive quadrature did not converge: error estimate {error:.3g} > {atol:.3g}"
        )
    return QuadResult(value=value, error=error, panels=int(starts.size), evaluations=evaluations)
