"""Closed-form upper and lower bounds on pants-decomposition lengths.

Each bound is a pure function of a few integer/real parameters. ``evaluate``
wraps them with domain checks and returns a :class:`BoundValue` tagged with
the formula it evaluates.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError

ASINH1 = math.asinh(1.0)
LN6PI = math.log(6.0 * math.pi)
BOUNDARY_C = 30.0 * math.sqrt(2.0) + 2.0 * math.sqrt(math.pi)

UPPER, LOWER = "upper", "lower"


@dataclass(frozen=True)
class BoundValue:
    bound_id: str
    params: dict
    value: float
    direction: str
    citation: str
    alternate: float | None = None
    note: str = ""

    def row(self) -> list:
        ps = ";".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return [self.bound_id, ps, repr(self.value), self.direction, self.citation]


@dataclass(frozen=True)
class _Entry:
    direction: str
    citation: str
    needs: tuple[str, ...]
    fn: object
    optional: tuple[str, ...] = field(default=())


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise DomainError(msg)


def _int_param(params: dict, key: str, low: int) -> int:
    v = params[key]
    _need(isinstance(v, (int,)) and not isinstance(v, bool), f"{key} must be an integer")
    _need(v >= low, f"{key} >= {low} required (got {v})")
    return v


def _len_param(params: dict, key: str = "ell") -> float:
    v = float(params[key])
    _need(math.isfinite(v) and v >= 0.0, f"{key} must be a finite nonnegative length")
    return v


# -- formulas ----------------------------------------------------------------

def buser_closed(g: int) -> float:
    return 6.0 * math.sqrt(3.0 * math.pi) * (g - 1)


def buser_closed_lower(g: int) -> float:
    return math.sqrt(6.0 * g) - 2.0


def punctured_linear(n: int) -> float:
    return 3.0 * math.sqrt(3.0 * math.pi) * (n - 1)


def sys_floor(bers: float) -> float:
    return min(2.0 * math.asinh(1.0 / math.sinh(bers)), 2.0 * ASINH1)


def splitter(n2: int, theta: float = 0.0) -> float:
    rad = (2.0 * math.pi - theta) * n2 - 4.0 * math.pi
    _need(rad > 0.0, f"radicand (2pi - theta) n2 - 4pi = {rad:.6g} is not positive")
    return 4.0 * math.sqrt(rad)


def sphere_sqrt(n: int) -> float:
    return 30.0 * math.sqrt(2.0 * math.pi * (n - 2))


def sphere_area_form(area: float) -> float:
    return 30.0 * math.sqrt(area)


def cone_greedy_k(n: int, k: int | None = None) -> float:
    if k is None:
        return 4.0 * LN6PI * (n - 3)
    return 4.0 * k * math.log(4.0 * math.pi * (n - 2) / k)


def cone_sqrt(n: int) -> float:
    return 10.0 * LN6PI * math.sqrt(n - 4)


def fourhole(ell: float) -> float:
    return 2.0 * ell + 12.0


def hyperelliptic(g: int) -> float:
    return 40.0 * LN6PI * math.sqrt(2.0 * (g - 1)) + 12.0


def boundary_rough(n: int, ell: float) -> float:
    return 60.0 * math.sqrt(math.pi * (n - 1)) + n * ell


def boundary_splitter(n2: int, ell: float) -> float:
    rad = 2.0 * math.pi * (n2 - 2) + n2 * ell * ell / (2.0 * math.pi)
    _need(rad > 0.0, "radicand 2pi(n2-2) + n2 l^2/2pi is not positive")
    return 4.0 * math.sqrt(rad)


def boundary_sqrt(n: int, ell: float) -> float:
    return BOUNDARY_C * math.sqrt(2.0 * math.pi * (n - 2)) * math.hypot(ell / (2.0 * math.pi), 1.0)


def lower_punctured(n: int) -> float:
    return 8.0 * ASINH1 * (math.sqrt((n - 4) / 2.0) - 1.0)


def lower_boundary(n: int, ell: float) -> float:
    return math.sqrt(n) * ell / (2.0 * math.sqrt(2.0))


def lower_closed(g: int, factor: float = 4.0) -> float:
    return factor * ASINH1 * (math.sqrt(g - 2) - 1.0)


def lower_hyperelliptic(g: int) -> float:
    return 4.0 * ASINH1 * (math.sqrt((g - 3) / 2.0) - 1.0)


# -- catalog -----------------------------------------------------------------

def _e_buser(p):
    g = _int_param(p, "g", 2)
    return buser_closed(g), buser_closed_lower(g), "lower companion sqrt(6g) - 2"


def _e_sys(p):
    b = float(p["ell"])
    _need(math.isfinite(b) and b > 0, "ell (the Bers constant plugged in) must be positive")
    return sys_floor(b), None, ""


def _e_splitter(p):
    n2 = _int_param(p, "n", 2)
    theta = float(p.get("theta", 0.0))
    _need(0.0 <= theta <= math.pi, "theta must lie in [0, pi]")
    return splitter(n2, theta), None, "n is the larger side count n2"


def _e_cone_greedy(p):
    n = _int_param(p, "n", 4)
    k = p.get("k")
    if k is None:
        return cone_greedy_k(n), None, "aggregate 4 ln(6pi) (n - 3)"
    k = _int_param(p, "k", 1)
    _need(k <= n - 3, "k <= n - 3 required")
    return cone_greedy_k(n, k), None, ""


def _e_boundary_splitter(p):
    n2 = _int_param(p, "n", 2)
    return boundary_splitter(n2, _len_param(p)), None, "n is the larger side count n2"


def _e_lower_closed(p):
    g = _int_param(p, "g", 3)
    return (lower_closed(g, 4.0), lower_closed(g, 8.0),
            "two printed constants disagree (4 vs 8 arcsinh 1); alternate uses 8")


_CATALOG: dict[str, _Entry] = {
    "buser_closed": _Entry(UPPER, "6 √(3π) (g−1); √(6g) − 2 below", ("g",), _e_buser),
    "punctured_linear": _Entry(UPPER, "3 √(3π) (n−1)", ("n",),
                               lambda p: (punctured_linear(_int_param(p, "n", 4)), None, "")),
    "sys_floor": _Entry(LOWER, "min{2 arcsinh(1/sinh B), 2 arcsinh 1}", ("ell",), _e_sys),
    "splitter": _Entry(UPPER, "4 √((2π−θ) n₂ − 4π)", ("n",), _e_splitter, ("theta",)),
    "sphere_sqrt": _Entry(UPPER, "30 √(2π (n−2))", ("n",),
                          lambda p: (sphere_sqrt(_int_param(p, "n", 4)), None, "")),
    "cone_greedy_k": _Entry(UPPER, "4k ln(4π(n−2)/k); 4 ln(6π) (n−3)", ("n",), _e_cone_greedy, ("k",)),
    "cone_sqrt": _Entry(UPPER, "10 ln(6π) √(n−4)", ("n",),
                        lambda p: (cone_sqrt(_int_param(p, "n", 5)), None, "")),
    "fourhole": _Entry(UPPER, "2ℓ + 12", ("ell",), lambda p: (fourhole(_len_param(p)), None, "")),
    "hyperelliptic": _Entry(UPPER, "40 ln(6π) √(2(g−1)) + 12", ("g",),
                            lambda p: (hyperelliptic(_int_param(p, "g", 2)), None, "")),
    "boundary_rough": _Entry(UPPER, "60 √(π(n−1)) + nℓ", ("n", "ell"),
                             lambda p: (boundary_rough(_int_param(p, "n", 4), _len_param(p)), None, "")),
    "boundary_splitter": _Entry(UPPER, "4 √(2π(n₂−2) + n₂ ℓ²/2π)", ("n", "ell"), _e_boundary_splitter),
    "boundary_sqrt": _Entry(UPPER, "(30√2 + 2√π) √(2π(n−2)) √((ℓ/2π)² + 1)", ("n", "ell"),
                            lambda p: (boundary_sqrt(_int_param(p, "n", 4), _len_param(p)), None, "")),
    "lower_punctured": _Entry(LOWER, "8 arcsinh 1 (√((n−4)/2) − 1)", ("n",),
                              lambda p: (lower_punctured(_int_param(p, "n", 6)), None, "")),
    "lower_boundary": _Entry(LOWER, "√n ℓ / (2√2)", ("n", "ell"),
                             lambda p: (lower_boundary(_int_param(p, "n", 4), _len_param(p)), None, "")),
    "lower_closed": _Entry(LOWER, "4 arcsinh 1 (√(g−2) − 1)", ("g",), _e_lower_closed),
    "lower_hyperelliptic": _Entry(LOWER, "4 arcsinh 1 (√((g−3)/2) − 1)", ("g",),
                                  lambda p: (lower_hyperelliptic(_int_param(p, "g", 5)), None, "")),
}

BOUND_IDS = tuple(_CATALOG)


def evaluate(bound_id: str, **params) -> BoundValue:
    if bound_id not in _CATALOG:
        raise DomainError(f"unknown bound id {bound_id!r}")
    entry = _CATALOG[bound_id]
    for key in entry.needs:
        if params.get(key) is None:
            raise DomainError(f"{bound_id} needs parameter {key!r}")
    extra = set(params) - set(entry.needs) - set(entry.optional)
    if extra:
        raise DomainError(f"{bound_id} does not take {sorted(extra)}")
    value, alt, note = entry.fn(params)
    if not (math.isfinite(value) and value >= 0.0):
        raise DomainError(f"{bound_id}{params} evaluates to {value!r} outside its domain")
    return BoundValue(bound_id, dict(params), value, entry.direction, entry.citation, alt, note)


# a representative parameter set per id, used by the `bounds` table
DEFAULT_TABLE = (
    ("buser_closed", {"g": 2}),
    ("punctured_linear", {"n": 12}),
    ("sys_floor", {"ell": sphere_sqrt(12)}),
    ("splitter", {"n": 6, "theta": 0.0}),
    ("sphere_sqrt", {"n": 12}),
    ("cone_greedy_k", {"n": 12, "k": 3}),
    ("cone_sqrt", {"n": 12}),
    ("fourhole", {"ell": 1.0}),
    ("hyperelliptic", {"g": 2}),
    ("boundary_rough", {"n": 12, "ell": 1.0}),
    ("boundary_splitter", {"n": 6, "ell": 1.0}),
    ("boundary_sqrt", {"n": 12, "ell": 1.0}),
    ("lower_punctured", {"n": 12}),
    ("lower_boundary", {"n": 12, "ell": 1.0}),
    ("lower_closed", {"g": 12}),
    ("lower_hyperelliptic", {"g": 12}),
)


def table() -> list[BoundValue]:
    return [evaluate(b, **p) for b, p in DEFAULT_TABLE]


# -- arithmetic consistency --------------------------------------------------

@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str
    informational: bool = False


def induction_step_ok(c: int, n: int) -> bool:
    """Whether (C + 4) sqrt(3n/4) <= C sqrt(n - 2)."""
    return (c + 4) * math.sqrt(0.75 * n) <= c * math.sqrt(n - 2)


def cone_step_f(n: int) -> float:
    den = 2.0 * math.sqrt(n - 4) - math.sqrt(3 * n - 8)
    return math.inf if den <= 0 else 4.0 * math.sqrt(3 * n - 8) / den


def boundary_step_f(n: int) -> float:
    den = 2.0 * math.sqrt(n - 2) - math.sqrt(3 * n - 8)
    return math.inf if den <= 0 else 4.0 * math.sqrt(3.0) * math.sqrt(3 * n - 8) / den


def consistency_suite(n_max: int = 10_000) -> list[Check]:
    out: list[Check] = []

    bad = [n for n in range(4, 64) if punctured_linear(n) > sphere_sqrt(n)]
    out.append(Check("a_base_case", not bad,
                     f"linear <= sqrt form for 4 <= n <= 63; at 63: "
                     f"{punctured_linear(63):.2f} <= {sphere_sqrt(63):.2f}; failures {bad[:5]}"))

    fail30 = [n for n in range(63, n_max + 1) if not induction_step_ok(30, n)]
    fail29 = not induction_step_ok(29, 63)
    smaller = [c for c in range(1, 30) if all(induction_step_ok(c, n) for n in range(63, n_max + 1))]
    lhs30, rhs30 = 34 * math.sqrt(0.75 * 63), 30 * math.sqrt(61)
    lhs29, rhs29 = 33 * math.sqrt(0.75 * 63), 29 * math.sqrt(61)
    out.append(Check("b_minimal_C", not fail30 and fail29 and not smaller,
                     f"C=30 at 63: {lhs30:.2f} <= {rhs30:.2f}; C=29 at 63: {lhs29:.2f} > {rhs29:.2f}; "
                     f"C=30 failures up to {n_max}: {len(fail30)}; smaller C passing: {smaller}"))

    f5 = boundary_step_f(5)
    out.append(Check("c_boundary_constant", BOUNDARY_C < 46.0 and f5 < BOUNDARY_C,
                     f"30 sqrt2 + 2 sqrt(pi) = {BOUNDARY_C:.4f} < 46; f(5) = {f5:.3f} < C"))

    lhs, rhs = 10.0 * LN6PI, 17.0 * math.sqrt(math.pi)
    out.append(Check("d_cone_comparison", lhs < rhs, f"10 ln(6pi) = {lhs:.3f} < 17 sqrt(pi) = {rhs:.3f}"))

    lhs = 40.0 * LN6PI * math.sqrt(2.0) + 12.0
    rhs = 51.0 * math.sqrt(4.0 * math.pi) + 12.0
    out.append(Check("e_hyperelliptic_comparison", lhs < rhs, f"{lhs:.3f} < {rhs:.3f} at g=2"))

    pairs = []
    for n in range(6, 201):
        pairs.append(("lower_punctured", lower_punctured(n), "sphere_sqrt", sphere_sqrt(n), n))
    for g in range(5, 201):
        pairs.append(("lower_hyperelliptic", lower_hyperelliptic(g), "hyperelliptic", hyperelliptic(g), g))
    for g in range(3, 201):
        pairs.append(("lower_closed", lower_closed(g, 8.0), "buser_closed", buser_closed(g), g))
    for n in range(4, 201):
        for ell in (0.5, 1.0, 5.0, 20.0):
            pairs.append(("lower_boundary", lower_boundary(n, ell), "boundary_sqrt", boundary_sqrt(n, ell), n))
    viol = [p for p in pairs if not p[1] < p[3]]
    out.append(Check("lower_below_upper", not viol,
                     f"{len(pairs)} pairs compared; violations {viol[:3]}"))

    # the cone-point induction asserts a small value of its step function at n = 9;
    # reported for information, the step function is in fact large there
    f9 = cone_step_f(9)
    c = 10.0 * LN6PI
    first_ok = next(n for n in range(9, n_max) if cone_step_f(n) <= c)
    out.append(Check("cone_step_value", f9 < 11.0,
                     f"f(9) = {f9:.3f}; f(n) <= 10 ln(6pi) from n = {first_ok}", informational=True))
    return out
