"""Exact subgroup/coset counts and the explicit bound and constant evaluators.

Real-valued bounds are evaluated with mpmath at 50 significant digits.  A
value above 1e300 is never rounded to infinity: it is kept as a natural
logarithm plus a nested-exponential string.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import mpmath

from .errors import PreconditionError
from .partition import Partition, as_partition, conjugate, enumerate_subtypes, weight
from .qbinom import gaussian_binomial, ilog, require_prime

MP = mpmath.MPContext()
MP.dps = 50

OVERFLOW_LOG = MP.log(MP.mpf(10) ** 300)


@dataclass(frozen=True, eq=False)
class BoundValue:
    """A bound or constant together with the parameters that produced it.

    ``value`` is an ``int`` for exact integers, an mpmath real otherwise, and
    None when the magnitude overflowed; ``log_value`` is always present
    (natural log) unless the value is 0.  For pure prime-power bounds
    ``base``/``exponent`` hold the exact form base**exponent.
    """

    kind: str
    value: object
    log_value: object = None
    symbolic: str | None = None
    constants: dict = field(default_factory=dict)
    base: int | None = None
    exponent: Fraction | None = None

    def __post_init__(self):
        if self.kind not in ("exact", "upper", "lower"):
            raise ValueError(f"unknown bound kind {self.kind!r}")

    @property
    def overflowed(self) -> bool:
        return self.value is None

    def _cmp(self, n: int) -> int:
        """Sign of (n - bound), computed exactly where possible."""
        if isinstance(self.value, int):
            return (n > self.value) - (n < self.value)
        if self.exponent is not None:
            num, den = self.exponent.numerator, self.exponent.denominator
            # n^den vs base^num, cross-multiplied to stay in integers
            lhs, rhs = n ** den, 1
            if num >= 0:
                rhs = self.base ** num
            else:
                lhs *= self.base ** (-num)
            return (lhs > rhs) - (lhs < rhs)
        if n <= 0:
            return -1
        ln = MP.log(n)
        return (ln > self.log_value) - (ln < self.log_value)

    def holds_for(self, n: int) -> bool:
        """True iff the exact integer ``n`` is on the right side of the bound."""
        c = self._cmp(n)
        if self.kind == "upper":
            return c <= 0
        if self.kind == "lower":
            return c >= 0
        return c == 0

    def text(self) -> str:
        if self.value is None:
            return self.symbolic
        if isinstance(self.value, int):
            return str(self.value)
        v = self.value
        near = MP.nint(v)
        # 45 of the 50 working digits are trusted when snapping to an integer
        if abs(v - near) <= MP.mpf(10) ** -45 * max(1, abs(v)) and abs(v) < 10 ** 40:
            return str(int(near))
        return MP.nstr(v, 17)

    def to_json(self) -> dict:
        out = {"kind": self.kind, "value": self.text(),
               "constants": {k: _json_const(v) for k, v in self.constants.items()}}
        if self.symbolic is not None:
            out["symbolic"] = self.symbolic
        if self.log_value is not None:
            out["log"] = MP.nstr(self.log_value, 17)
        if self.exponent is not None:
            out["power"] = {"base": self.base, "exponent": str(self.exponent)}
        return out


def _json_const(v):
    if isinstance(v, (int, str, bool)) or v is None:
        return v
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, float):
        return v
    return MP.nstr(v, 17)


def _power_bound(kind: str, p: int, exponent: Fraction, constants: dict) -> BoundValue:
    exponent = Fraction(exponent)
    if exponent.denominator == 1 and exponent >= 0:
        value = p ** int(exponent)
        return BoundValue(kind, value, MP.log(value) if value else None, None,
                          constants, p, exponent)
    log_value = MP.mpf(exponent.numerator) / exponent.denominator * MP.log(p)
    if log_value > OVERFLOW_LOG:
        return BoundValue(kind, None, log_value, f"{p}^({exponent})", constants, p, exponent)
    return BoundValue(kind, MP.exp(log_value), log_value, None, constants, p, exponent)


def _real_bound(kind: str, log_value, symbolic: str, constants: dict) -> BoundValue:
    # the symbolic form is kept even when the value fits, for provenance
    value = None if log_value > OVERFLOW_LOG else MP.exp(log_value)
    return BoundValue(kind, value, log_value, symbolic, constants)


# exact counts by type -------------------------------------------------------

def subtype_term(p: int, alpha: Partition, beta: Partition) -> int:
    """Number of subgroups of type ``beta`` in the group of type ``alpha``."""
    ac, bc = conjugate(alpha), conjugate(beta)
    term = 1
    for i in range(1, alpha.part(1) + 1):
        top = ac.part(i) - bc.part(i + 1)
        bottom = bc.part(i) - bc.part(i + 1)
        term *= gaussian_binomial(top, bottom, p) * p ** ((ac.part(i) - bc.part(i)) * bc.part(i + 1))
    return term


def count_subgroups(p: int, alpha, r: int) -> int:
    """Number of subgroups of order p^r in Z_{p^a1} + ... (type ``alpha``)."""
    require_prime(p)
    alpha = as_partition(alpha)
    if r < 0:
        raise PreconditionError(f"negative r={r}")
    return sum(subtype_term(p, alpha, beta) for beta in enumerate_subtypes(alpha, r))


def count_cosets(p: int, alpha, r: int) -> int:
    """Number of cosets of cardinality p^r: subgroups times index."""
    alpha = as_partition(alpha)
    if r > weight(alpha):
        require_prime(p)
        return 0
    return count_subgroups(p, alpha, r) * p ** (weight(alpha) - r)


def rectangular(a: int, N: int) -> Partition:
    return Partition((a,) * N)


# appendix bounds -------------------------------------------------------------

def _check_grid(p: int, N: int, a: int, r: int) -> None:
    require_prime(p)
    if N < 1 or a < 1:
        raise PreconditionError(f"N={N} and a={a} must be positive")
    if not 0 <= r <= N * a:
        raise PreconditionError(f"r={r} outside [0, N*a={N * a}]")


def subgroup_count_upper_bound(p: int, N: int, a: int, r: int) -> BoundValue:
    """2^(r-1) p^(N r + b r) with b = min(r, N), the largest possible first
    part of a conjugate subtype; clamped to 1 at r = 0."""
    _check_grid(p, N, a, r)
    b = min(r, N)
    value = 1 if r == 0 else 2 ** (r - 1) * p ** (N * r + b * r)
    return BoundValue("upper", value, MP.log(value), None,
                      {"p": p, "N": N, "a": a, "r": r, "b1": b})


def lower_bound_exponent(N: int, a: int, r: int, b1: int) -> Fraction:
    return Fraction(a, a - 1) * N * r - 2 * r * b1


def subgroup_count_lower_bound(p: int, N: int, a: int, r: int, b1: int) -> BoundValue:
    """p^((a/(a-1)) N r - 2 r b1): a floor on the number of subgroups of
    order p^r in any group of order p^(Na) whose parts are all <= a - 1."""
    _check_grid(p, N, a, r)
    if a < 2:
        raise PreconditionError("lower bound needs a >= 2")
    if b1 < r or (b1 < 1 and r > 0):
        raise PreconditionError(f"b1={b1} must be positive and at least r={r}")
    return _power_bound("lower", p, lower_bound_exponent(N, a, r, b1),
                        {"p": p, "N": N, "a": a, "r": r, "b1": b1})


def admissible_gamma_types(N: int, a: int) -> list[Partition]:
    """Types of weight N*a with every part at most a - 1."""
    total = N * a
    cap = a - 1
    out = []

    def gen(rem: int, mx: int, acc: tuple):
        if rem == 0:
            out.append(Partition(acc))
            return
        for v in range(min(rem, mx), 0, -1):
            gen(rem - v, v, acc + (v,))

    if cap >= 1:
        gen(total, cap, ())
    return out


def coset_count_bounds(p: int, N: int, a: int, r: int | None = None, *,
                       b1: int | None = None, slack_coeff: int = 2,
                       R: int | None = None) -> tuple[BoundValue, BoundValue]:
    """(lower, upper) for the number of cosets of cardinality p^r.

    The upper bound concerns the rectangular group (a,...,a); the lower bound
    concerns every type with parts <= a - 1 and the same order.  Both are
    the subgroup bounds times the index p^(Na - r), widened by a linear slack
    p^(slack_coeff * N) standing in for the unspecified O(N) term.
    """
    if R is not None:
        if R < 1 or N % R:
            raise PreconditionError(f"N={N} is not divisible by R={R}")
        if r is None:
            r = N // R
        elif r != N // R:
            raise PreconditionError(f"r={r} differs from N/R={N // R}")
    if r is None:
        raise PreconditionError("either r or R is required")
    _check_grid(p, N, a, r)
    b1 = r if b1 is None else b1
    slack = slack_coeff * N
    index_exp = N * a - r
    consts = {"p": p, "N": N, "a": a, "r": r, "b1": b1, "slack": slack}
    up = subgroup_count_upper_bound(p, N, a, r).value * p ** (index_exp + slack)
    upper = BoundValue("upper", up, MP.log(up), None, consts)
    if a < 2:
        lower = BoundValue("lower", 1, MP.mpf(0), None, consts)
    else:
        lower = _power_bound("lower", p,
                             lower_bound_exponent(N, a, r, max(b1, 1)) + index_exp - slack,
                             consts)
    return lower, upper


# constants ------------------------------------------------------------------

def lambda_ceiling(L: int, p: int) -> int:
    """ceil(L + log_p L), computed in integers."""
    k = 0
    while p ** k < L:
        k += 1
    return L + k


def lambda_constant(L: int, p: int) -> BoundValue:
    """Loss exponent L + log_p L of the large-coset extraction."""
    require_prime(p)
    if L < 1:
        raise PreconditionError(f"L={L} must be positive")
    try:
        value = MP.mpf(L + ilog(p, L))
    except ValueError:
        value = L + MP.log(L) / MP.log(p)
    return BoundValue("exact", value, MP.log(value), None,
                      {"L": L, "p": p, "ceil": lambda_ceiling(L, p)})


def green_sanders_L(C_norm, D) -> BoundValue:
    """exp(exp(D * C_norm^4)); overflow keeps D*C^4 and one exp level."""
    C_norm, D = MP.mpf(C_norm), MP.mpf(D)
    inner = D * C_norm ** 4
    log_value = MP.exp(inner)
    return _real_bound("upper", log_value, f"exp(exp({MP.nstr(inner, 17)}))",
                       {"C_norm": C_norm, "D": D, "inner": inner})


def evertse_bound(n: int, C1, C2) -> BoundValue:
    """C1 * exp(C2 * n^3 * ln n)."""
    if n < 1:
        raise PreconditionError(f"n={n} must be at least 1")
    C1, C2 = MP.mpf(C1), MP.mpf(C2)
    if C1 <= 0:
        raise PreconditionError("C1 must be positive")
    inner = C2 * MP.mpf(n) ** 3 * MP.log(n)
    return _real_bound("upper", MP.log(C1) + inner,
                       f"{MP.nstr(C1, 17)}*exp({MP.nstr(inner, 17)})",
                       {"n": n, "C1": C1, "C2": C2})


PHI_THRESHOLDS = {"p_group": 16, "no_p_subgroup": 3814280}


def distortion_floor(n: int, mode: str, c) -> BoundValue:
    """c (ln ln n)^(1/4) for p-groups, c (ln ln ln n)^(1/4) without p-subgroups."""
    if mode not in PHI_THRESHOLDS:
        raise PreconditionError(f"unknown mode {mode!r}; expected one of {sorted(PHI_THRESHOLDS)}")
    if n < PHI_THRESHOLDS[mode]:
        raise PreconditionError(
            f"n={n} is below the threshold {PHI_THRESHOLDS[mode]} for mode {mode}")
    x = MP.log(MP.log(n))
    if mode == "no_p_subgroup":
        x = MP.log(x)
    value = MP.mpf(c) * x ** MP.mpf(0.25)
    return BoundValue("lower", value, MP.log(value) if value > 0 else None, None,
                      {"n": n, "mode": mode, "c": MP.mpf(c)})


# local representability -------------------------------------------------------

@dataclass(frozen=True)
class GroupClassSpec:
    """Direct sum over (q, s) of countably many copies of Z_{q^s}."""

    factors: tuple[tuple[int, int], ...]

    def __init__(self, factors: Iterable[tuple[int, int]]):
        fs = []
        for q, s in factors:
            require_prime(int(q))
            if int(s) < 1:
                raise PreconditionError(f"exponent {s} must be at least 1")
            fs.append((int(q), int(s)))
        object.__setattr__(self, "factors", tuple(fs))

    @classmethod
    def parse(cls, text: str) -> "GroupClassSpec":
        """'2^2,3^5' -> ((2, 2), (3, 5)); a bare prime means exponent 1."""
        out = []
        for tok in filter(None, (t.strip() for t in text.split(","))):
            m = re.fullmatch(r"(\d+)(?:\^(\d+))?", tok)
            if not m:
                raise PreconditionError(f"bad factor {tok!r}")
            out.append((int(m.group(1)), int(m.group(2) or 1)))
        return cls(out)

    def __str__(self) -> str:
        return ",".join(f"{q}^{s}" for q, s in self.factors)


def representable(source: GroupClassSpec, target: GroupClassSpec) -> bool:
    """Each source factor (p, s) needs a target factor (p, r) with s <= r."""
    return all(any(q == p and s <= r for q, r in target.factors)
               for p, s in source.factors)
