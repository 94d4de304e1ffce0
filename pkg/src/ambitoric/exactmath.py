"""Exact rational polynomial algebra.

Quadratics use the binary-form convention q(z) = q0 z^2 + 2 q1 z + q2, so the
stored middle coefficient is half the ordinary one.  Quartics are stored in
descending degree: ``Quartic(c4, c3, c2, c1, c0)``.  The names a0..a4 used for
the coefficient conditions refer to the same order (a0 multiplies z^4).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


def to_q(value) -> Fraction:
    """Coerce ints, strings like "3/4", and Fractions to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not accepted where an exact rational is required")
    return Fraction(value)


# Dense polynomials in ascending order, as lists of Fractions.

def _trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def padd(p: Sequence, r: Sequence) -> list[Fraction]:
    n = max(len(p), len(r))
    out = [Fraction(0)] * n
    for i, c in enumerate(p):
        out[i] += c
    for i, c in enumerate(r):
        out[i] += c
    return _trim(out)


def pscale(p: Sequence, k) -> list[Fraction]:
    return _trim([c * k for c in p])


def pmul(p: Sequence, r: Sequence) -> list[Fraction]:
    if not p or not r:
        return []
    out = [Fraction(0)] * (len(p) + len(r) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(r):
                out[i + j] += a * b
    return _trim(out)


def pderiv(p: Sequence) -> list[Fraction]:
    return _trim([i * p[i] for i in range(1, len(p))])


def peval(p: Sequence, z):
    acc = 0 * z
    for c in reversed(p):
        acc = acc * z + c
    return acc


def pdivmod(p: Sequence, d: Sequence) -> tuple[list[Fraction], list[Fraction]]:
    d = _trim(list(d))
    if not d:
        raise ZeroDivisionError("polynomial division by zero")
    r = _trim([Fraction(c) for c in p])
    if len(r) < len(d):
        return [], r
    quot = [Fraction(0)] * (len(r) - len(d) + 1)
    lead = d[-1]
    while len(r) >= len(d):
        k = len(r) - len(d)
        c = r[-1] / lead
        quot[k] = c
        for i, dc in enumerate(d):
            r[i + k] -= c * dc
        r.pop()
        _trim(r)
    return _trim(quot), r


def pgcd(p: Sequence, r: Sequence) -> list[Fraction]:
    a, b = _trim(list(p)), _trim(list(r))
    while b:
        a, b = b, pdivmod(a, b)[1]
    if not a:
        return []
    return [c / a[-1] for c in a]


@dataclass(frozen=True)
class Quadratic:
    """q(z) = q0 z^2 + 2 q1 z + q2."""

    q0: Fraction
    q1: Fraction
    q2: Fraction

    def __post_init__(self):
        for name in ("q0", "q1", "q2"):
            object.__setattr__(self, name, to_q(getattr(self, name)))

    @classmethod
    def from_plain(cls, a, b, c) -> "Quadratic":
        """Build from ordinary coefficients a z^2 + b z + c."""
        return cls(to_q(a), to_q(b) / 2, to_q(c))

    def plain(self) -> tuple[Fraction, Fraction, Fraction]:
        """Ordinary coefficients (z^2, z, 1)."""
        return (self.q0, 2 * self.q1, self.q2)

    def ascending(self) -> list[Fraction]:
        return _trim([self.q2, 2 * self.q1, self.q0])

    def triple(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.q0, self.q1, self.q2)

    def __call__(self, z):
        return (self.q0 * z + 2 * self.q1) * z + self.q2

    def __add__(self, other: "Quadratic") -> "Quadratic":
        return Quadratic(self.q0 + other.q0, self.q1 + other.q1, self.q2 + other.q2)

    def __neg__(self) -> "Quadratic":
        return Quadratic(-self.q0, -self.q1, -self.q2)

    def __sub__(self, other: "Quadratic") -> "Quadratic":
        return self + (-other)

    def scale(self, k) -> "Quadratic":
        k = to_q(k)
        return Quadratic(k * self.q0, k * self.q1, k * self.q2)

    def is_zero(self) -> bool:
        return self.q0 == self.q1 == self.q2 == 0


@dataclass(frozen=True)
class Quartic:
    """c4 z^4 + c3 z^3 + c2 z^2 + c1 z + c0, stored in descending order."""

    c4: Fraction
    c3: Fraction
    c2: Fraction
    c1: Fraction
    c0: Fraction

    def __post_init__(self):
        for name in ("c4", "c3", "c2", "c1", "c0"):
            object.__setattr__(self, name, to_q(getattr(self, name)))

    @classmethod
    def from_coeffs(cls, coeffs: Iterable) -> "Quartic":
        """Descending coefficients; shorter lists are padded on the left."""
        cs = [to_q(c) for c in coeffs]
        if len(cs) > 5:
            if any(cs[: len(cs) - 5]):
                raise ValueError("degree exceeds four")
            cs = cs[len(cs) - 5:]
        return cls(*([Fraction(0)] * (5 - len(cs)) + cs))

    @classmethod
    def from_ascending(cls, coeffs: Sequence) -> "Quartic":
        return cls.from_coeffs(list(reversed(list(coeffs))))

    @classmethod
    def from_roots(cls, roots: Sequence, lead=1) -> "Quartic":
        p: list[Fraction] = [to_q(lead)]
        for r in roots:
            p = pmul(p, [-to_q(r), Fraction(1)])
        return cls.from_ascending(p)

    def coeffs(self) -> tuple[Fraction, ...]:
        """Descending: (a0, a1, a2, a3, a4) in the per-type naming."""
        return (self.c4, self.c3, self.c2, self.c1, self.c0)

    def ascending(self) -> list[Fraction]:
        return _trim(list(reversed(self.coeffs())))

    def __call__(self, z):
        acc = self.c4
        for c in (self.c3, self.c2, self.c1, self.c0):
            acc = acc * z + c
        return acc

    def derivative(self, z, order: int = 1):
        return poly_eval_derive(self, z, order)

    def __add__(self, other: "Quartic") -> "Quartic":
        return Quartic(*(a + b for a, b in zip(self.coeffs(), other.coeffs())))

    def __neg__(self) -> "Quartic":
        return Quartic(*(-a for a in self.coeffs()))

    def __sub__(self, other: "Quartic") -> "Quartic":
        return self + (-other)

    def scale(self, k) -> "Quartic":
        k = to_q(k)
        return Quartic(*(k * a for a in self.coeffs()))

    def is_zero(self) -> bool:
        return not any(self.coeffs())

    def __str__(self) -> str:
        terms = []
        for deg, c in zip(range(4, -1, -1), self.coeffs()):
            if c:
                mono = {0: "", 1: "z"}.get(deg, f"z^{deg}")
                terms.append(f"{c}{'*' if mono else ''}{mono}")
        return " + ".join(terms) if terms else "0"


def poly_eval_derive(P: Quartic, z, order: int = 0):
    """Value of P, P' or P'' at z (exact for rational z)."""
    if order not in (0, 1, 2):
        raise ValueError("order must be 0, 1 or 2")
    a0, a1, a2, a3, a4 = P.coeffs()
    if order == 0:
        return P(z)
    if order == 1:
        return ((4 * a0 * z + 3 * a1) * z + 2 * a2) * z + a3
    return (12 * a0 * z + 6 * a1) * z + 2 * a2


def polarize(q: Quadratic, x, y):
    """Symmetric bilinear polarization q(x, y) = q0 x y + q1 (x + y) + q2."""
    return q.q0 * x * y + q.q1 * (x + y) + q.q2


def poisson_bracket(q: Quadratic, w: Quadratic) -> Quadratic:
    """{q, w} = q' w - w' q, which is again a quadratic."""
    return Quadratic(
        2 * q.q0 * w.q1 - 2 * q.q1 * w.q0,
        q.q0 * w.q2 - q.q2 * w.q0,
        2 * q.q1 * w.q2 - 2 * q.q2 * w.q1,
    )


def discriminant_form(q: Quadratic) -> Fraction:
    """Q(q) = q1^2 - q0 q2; negative exactly when q has no real root."""
    return q.q1 * q.q1 - q.q0 * q.q2


def inner(q: Quadratic, p: Quadratic) -> Fraction:
    """The polarization of Q: <q, p> = q1 p1 - (q2 p0 + q0 p2) / 2."""
    return q.q1 * p.q1 - (q.q2 * p.q0 + q.q0 * p.q2) / 2


def quadratic_invariants(q: Quadratic, p: Quadratic) -> tuple[Fraction, Fraction]:
    return discriminant_form(q), inner(q, p)


def transvect(q: Quadratic, P: Quartic) -> tuple[Quadratic, Quadratic]:
    """Return (q.P, {q, q.P}) where q.P = q P'' - 3 q' P' + 6 q'' P.

    The raw expansion has degree six; its top coefficients cancel identically,
    and this is checked rather than assumed.
    """
    qa = q.ascending()
    Pa = P.ascending()
    raw = padd(padd(pmul(qa, pderiv(pderiv(Pa))), pscale(pmul(pderiv(qa), pderiv(Pa)), -3)),
               pscale(pmul(pderiv(pderiv(qa)), Pa), 6))
    if len(raw) > 3:
        raise ArithmeticError(f"transvectant failed to cancel above z^2: {raw}")
    raw = raw + [Fraction(0)] * (3 - len(raw))
    qP = Quadratic.from_plain(raw[2], raw[1], raw[0])
    return qP, poisson_bracket(q, qP)


class Positivity(enum.Enum):
    POSITIVE = "positive"
    NONNEGATIVE_WITH_ROOT = "nonnegative_with_root"
    # some point of the interval has P < 0, or P vanishes identically
    CHANGES_SIGN = "changes_sign"


@dataclass(frozen=True)
class PositivityResult:
    verdict: Positivity
    witness: Fraction | None = None      # a point with P(witness) <= 0 when not positive
    root_interval: tuple[Fraction, Fraction] | None = None
    roots: tuple[tuple[Fraction, Fraction], ...] = ()   # isolating intervals of interior roots

    def ok(self, strict: bool = True) -> bool:
        if self.verdict is Positivity.POSITIVE:
            return True
        return not strict and self.verdict is Positivity.NONNEGATIVE_WITH_ROOT


def sturm_chain(p: Sequence) -> list[list[Fraction]]:
    chain = [_trim([Fraction(c) for c in p])]
    chain.append(pderiv(chain[0]))
    while chain[-1]:
        rem = pdivmod(chain[-2], chain[-1])[1]
        chain.append(pscale(rem, -1))
    chain.pop()
    return chain


def _variations(chain, z) -> int:
    signs = [v > 0 for v in (peval(p, z) for p in chain) if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def squarefree_part(p: Sequence) -> list[Fraction]:
    p = _trim([Fraction(c) for c in p])
    g = pgcd(p, pderiv(p))
    return pdivmod(p, g)[0] if len(g) > 1 else p


_SPLITS = [Fraction(1, 2), Fraction(1, 3), Fraction(2, 3), Fraction(1, 4), Fraction(3, 4),
           Fraction(2, 5), Fraction(3, 5), Fraction(1, 5), Fraction(4, 5)]


def _split_point(S, lo: Fraction, hi: Fraction) -> Fraction:
    for t in _SPLITS:
        m = lo + (hi - lo) * t
        if peval(S, m) != 0:
            return m
    # a square-free quartic has at most four roots, so the list above suffices
    raise AssertionError("no regular split point found")


def isolate_roots(S: Sequence, a: Fraction, b: Fraction) -> list[tuple[Fraction, Fraction]]:
    """Disjoint open intervals, each holding exactly one root of the square-free S in (a, b)."""
    chain = sturm_chain(S)

    def count(lo, hi):
        # V(lo) - V(hi) counts roots in (lo, hi]; drop hi itself if it is a root
        return _variations(chain, lo) - _variations(chain, hi) - (1 if peval(S, hi) == 0 else 0)

    out = []
    stack = [(a, b)]
    while stack:
        lo, hi = stack.pop()
        n = count(lo, hi)
        if n == 0:
            continue
        if n == 1:
            out.append((lo, hi))
            continue
        m = _split_point(S, lo, hi)
        stack.extend([(lo, m), (m, hi)])
    return sorted(out)


def _tighten(S, chain_count, lo, hi, side):
    """Shrink an isolating interval away from `side` ('lo' or 'hi') until that end is a non-root."""
    while True:
        m = _split_point(S, lo, hi)
        if side == "lo":
            if chain_count(lo, m) == 1:
                hi = m
            else:
                return m, hi
        else:
            if chain_count(m, hi) == 1:
                lo = m
            else:
                return lo, m


def sturm_positive_on(P: Quartic, a, b, strict: bool = True) -> PositivityResult:
    """Exact sign classification of P on the open interval (a, b).

    `strict` is recorded only through ``PositivityResult.ok``; the verdict itself
    always distinguishes a touching root from a sign change.
    """
    a, b = to_q(a), to_q(b)
    if a >= b:
        raise ValueError(f"empty interval ({a}, {b})")
    p = P.ascending()
    if not p:
        return PositivityResult(Positivity.CHANGES_SIGN, witness=(a + b) / 2)
    S = squarefree_part(p)
    if len(S) <= 1:   # nonzero constant
        if p[0] > 0:
            return PositivityResult(Positivity.POSITIVE)
        return PositivityResult(Positivity.CHANGES_SIGN, witness=(a + b) / 2)

    chain = sturm_chain(S)

    def count(lo, hi):
        return _variations(chain, lo) - _variations(chain, hi) - (1 if peval(S, hi) == 0 else 0)

    roots = isolate_roots(S, a, b)
    if not roots:
        samples = [(a + b) / 2]
    else:
        roots = list(roots)
        if roots[0][0] == a:
            roots[0] = _tighten(S, count, *roots[0], side="lo")
        if roots[-1][1] == b:
            roots[-1] = _tighten(S, count, *roots[-1], side="hi")
        # every interior interval end is a non-root, so these points sit in the gaps
        samples = [roots[0][0]] + [r[1] for r in roots]
    for z in samples:
        if peval(p, z) < 0:
            return PositivityResult(Positivity.CHANGES_SIGN, witness=z, roots=tuple(roots))
    if not roots:
        return PositivityResult(Positivity.POSITIVE)
    # P >= 0 everywhere with interior zeros: report the first root interval
    lo, hi = roots[0]
    return PositivityResult(Positivity.NONNEGATIVE_WITH_ROOT, witness=rational_root_in(P, lo, hi),
                            root_interval=(lo, hi), roots=tuple(roots))


def rational_root_in(P: Quartic, lo: Fraction, hi: Fraction) -> Fraction | None:
    """A rational root of P in [lo, hi] if one exists (rational root test)."""
    from math import gcd

    coeffs = P.ascending()
    if not coeffs:
        return (lo + hi) / 2
    while coeffs and coeffs[0] == 0:
        if lo <= 0 <= hi:
            return Fraction(0)
        coeffs = coeffs[1:]
    den = 1
    for c in coeffs:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in coeffs]
    lead, const = abs(ints[-1]), abs(ints[0])

    def divisors(n):
        return [d for d in range(1, n + 1) if n % d == 0] if n <= 10**5 else []

    for pn in divisors(const):
        for qd in divisors(lead):
            for r in (Fraction(pn, qd), Fraction(-pn, qd)):
                if lo <= r <= hi and peval(coeffs, r) == 0:
                    return r
    return None
