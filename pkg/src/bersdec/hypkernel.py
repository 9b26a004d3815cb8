"""Scalar hyperbolic trigonometry and SL(2,R) matrix algebra.

Matrices are stored projectively: a generator and its negative describe the
same isometry, so every length is read off ``|trace|``.
"""
from __future__ import annotations

import math
from typing import Iterable, NamedTuple

import mpmath

from .errors import (DegenerateBound, DegenerateLength, EllipticAxis,
                     NonHyperbolicTrace, TraceMismatch)

TOL_ELLIPTIC = 1e-9
ASINH1 = math.asinh(1.0)


class Mat2(NamedTuple):
    a: float
    b: float
    c: float
    d: float

    def __matmul__(self, o: "Mat2") -> "Mat2":
        return Mat2(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                    self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d)

    @property
    def tr(self) -> float:
        return self.a + self.d

    @property
    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    def inv(self) -> "Mat2":
        # adjugate; equals the inverse when det == 1
        return Mat2(self.d, -self.b, -self.c, self.a)

    def neg(self) -> "Mat2":
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def close_to(self, o: "Mat2", tol: float = 1e-8, projective: bool = True) -> bool:
        same = max(abs(x - y) for x, y in zip(self, o)) <= tol
        if same or not projective:
            return same
        return max(abs(x + y) for x, y in zip(self, o)) <= tol


IDENTITY = Mat2(1.0, 0.0, 0.0, 1.0)


def _lib(x):
    # extended-precision entries stay in mpmath; everything else uses math
    return mpmath if isinstance(x, mpmath.mpf) else math


def to_mp(m: Mat2) -> Mat2:
    return Mat2(*(mpmath.mpf(v) for v in m))


def to_float(m: Mat2) -> Mat2:
    return Mat2(*(float(v) for v in m))


def multiply(*ms: Mat2) -> Mat2:
    return product(ms)


def invert(m: Mat2) -> Mat2:
    return m.inv()


def trace(m: Mat2) -> float:
    return m.tr


def conjugate(c: Mat2, m: Mat2) -> Mat2:
    """Return ``c m c^-1``."""
    return c @ m @ c.inv()


def renormalize(m: Mat2) -> Mat2:
    """Divide out determinant drift so that det == 1."""
    det = m.det
    lib = _lib(det)
    if not det > 0 or not lib.isfinite(det):
        raise TraceMismatch(f"matrix with non-positive determinant {det!r}")
    s = lib.sqrt(det)
    return Mat2(m.a / s, m.b / s, m.c / s, m.d / s)


def product(ms: Iterable[Mat2], renorm_every: int = 8) -> Mat2:
    out = IDENTITY
    for k, m in enumerate(ms, 1):
        out = out @ m
        if k % renorm_every == 0:
            out = renormalize(out)
    return out


def length_from_trace(t: float, tol: float = TOL_ELLIPTIC) -> float:
    """Translation length ``2 arccosh(|t|/2)`` of an element with trace ``t``."""
    at = abs(t)
    if not at > 2.0 + tol:
        raise NonHyperbolicTrace(f"|trace| = {at!r} is not hyperbolic")
    return 2.0 * math.acosh(at / 2.0)


def trace_from_length(length: float) -> float:
    """Negative trace convention used for every boundary of a pair of pants."""
    return -2.0 * math.cosh(length / 2.0)


def collar_halfwidth(length: float) -> float:
    if length <= 0.0:
        raise DegenerateLength("collar of a zero-length geodesic is unbounded")
    return math.asinh(1.0 / math.sinh(length / 2.0))


def crossing_length_bound(l_gamma: float, l_arc: float) -> float:
    """Upper bound ``2 arccosh(sinh(l_gamma/2) sinh(l_arc/2))`` on a projected curve.

    The product equal to 1 is allowed (value 0); below 1 the bound is vacuous.
    """
    prod = math.sinh(l_gamma / 2.0) * math.sinh(l_arc / 2.0)
    if prod < 1.0 - 1e-12:
        raise DegenerateBound(f"sinh product {prod!r} < 1")
    return 2.0 * math.acosh(max(prod, 1.0))


def pentagon_side(length: float) -> float:
    """Equal sides of the right-angled pentagon whose far side is ``length/4``."""
    if length < 0:
        raise DegenerateLength("negative length")
    return 2.0 * math.asinh(math.sqrt(math.cosh(length / 8.0)))


# -- axis geometry -----------------------------------------------------------

def _eigvec(m: Mat2, lam: float) -> tuple[float, float]:
    lib = _lib(lam)
    v1 = (m.b, lam - m.a)
    v2 = (lam - m.d, m.c)
    n1 = lib.hypot(*v1)
    n2 = lib.hypot(*v2)
    v = v1 if n1 >= n2 else v2
    n = max(n1, n2)
    return v[0] / n, v[1] / n


def axis_frame(m: Mat2) -> tuple[Mat2, float]:
    """Return ``(P, lam)`` with ``P^-1 m P = diag(lam, 1/lam)``, ``|lam| > 1``, det P = 1.

    In the frame, the axis of ``m`` is the imaginary axis and ``m`` translates
    upward by its length.
    """
    t = m.tr
    if abs(t) <= 2.0 + TOL_ELLIPTIC:
        raise EllipticAxis(f"|trace| = {abs(t)!r} has no axis")
    lib = _lib(t)
    root = lib.sqrt(t * t - 4.0)
    lam = (t + root) / 2.0 if t >= 0 else (t - root) / 2.0
    u = _eigvec(m, lam)
    w = _eigvec(m, 1.0 / lam)
    det = u[0] * w[1] - w[0] * u[1]
    s = lib.sqrt(abs(det))
    if det < 0:
        w = (-w[0], -w[1])
    p = Mat2(u[0] / s, w[0] / s, u[1] / s, w[1] / s)
    return p, lam


def twist_along_axis(m: Mat2, tau: float) -> Mat2:
    """Translation by signed distance ``tau`` along the axis of ``m``.

    Positive ``tau`` moves in the direction ``m`` translates.
    """
    p, _ = axis_frame(m)
    e = math.exp(tau / 2.0)
    return p @ Mat2(e, 0.0, 0.0, 1.0 / e) @ p.inv()


def foot_height(x: Mat2) -> float:
    """Log-height of the foot of the perpendicular from the imaginary axis to ``x``.

    ``x`` is given in a frame where the reference axis is the imaginary axis;
    its fixed set (axis, ideal point or interior point) must avoid that axis.
    """
    a, b, c, d = x
    t = a + d
    lib = _lib(t)
    if abs(c) < 1e-300:
        raise TraceMismatch("fixed set meets the reference axis at infinity")
    if abs(t) > 2.0 + TOL_ELLIPTIC:
        disc = (d - a) ** 2 + 4.0 * b * c
        r = lib.sqrt(disc)
        p = ((a - d) + r) / (2.0 * c)
        q = ((a - d) - r) / (2.0 * c)
        pq = p * q
        if pq <= 0:
            raise TraceMismatch("axis crosses the reference axis")
        return 0.5 * lib.log(pq)
    if abs(t) >= 2.0 - TOL_ELLIPTIC:
        # parabolic: (a - d) / 2c is the ideal fixed point
        return lib.log(abs((a - d) / (2.0 * c)))
    y = lib.sqrt(4.0 - t * t) / (2.0 * abs(c))
    xr = (a - d) / (2.0 * c)
    return 0.5 * lib.log(xr * xr + y * y)
