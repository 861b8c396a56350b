"""Exact coefficient arithmetic: rationals and sparse polynomials in t, k, K.

Every coefficient in the engine is a polynomial over Q in the two deformation
parameters t, k and the formal rank parameter K.  No floats, no division by
polynomials, no GCD machinery: the only divisions that ever happen are exact
rational ones.  ParamPoly is immutable; arithmetic returns fresh objects and
zero coefficients are always dropped, so ``p == q`` is plain dict equality.

The text form is deterministic (graded lexicographic on the exponent triple
(d_t, d_k, d_K), highest first) and round-trips exactly, e.g.
``3/2*t^2*k - K + 1``.
"""

from __future__ import annotations

import re
from fractions import Fraction

# The Rational type of the engine.  Fraction already guarantees reduced form
# and positive denominator.
Rational = Fraction

_VARS = ("t", "k", "K")


class InconsistentSamples(Exception):
    """Interpolation samples exceed the degree bound's freedom and disagree."""


def parse_rational(text) -> Fraction:
    """Parse 'a/b' or 'a' into a Fraction (exact)."""
    return Fraction(str(text).strip())


def format_rational(q: Fraction) -> str:
    return str(q)


def _term_key(exps):
    # graded lex: total degree first, then the exponent triple itself
    return (exps[0] + exps[1] + exps[2], exps)


class ParamPoly:
    """Sparse polynomial in Q[t, k, K], keyed by exponent triples."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=None, _internal=False):
        if _internal:
            self._terms = terms
        else:
            clean = {}
            for exps, coeff in (terms or {}).items():
                c = Fraction(coeff)
                if c:
                    clean[(int(exps[0]), int(exps[1]), int(exps[2]))] = c
            self._terms = clean
        self._hash = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "ParamPoly":
        return cls({}, _internal=True)

    @classmethod
    def const(cls, q) -> "ParamPoly":
        q = Fraction(q)
        return cls({(0, 0, 0): q} if q else {}, _internal=True)

    @classmethod
    def one(cls) -> "ParamPoly":
        return cls.const(1)

    @classmethod
    def var_t(cls) -> "ParamPoly":
        return cls({(1, 0, 0): Fraction(1)}, _internal=True)

    @classmethod
    def var_k(cls) -> "ParamPoly":
        return cls({(0, 1, 0): Fraction(1)}, _internal=True)

    @classmethod
    def var_K(cls) -> "ParamPoly":
        return cls({(0, 0, 1): Fraction(1)}, _internal=True)

    # -- inspection --------------------------------------------------------

    @property
    def terms(self):
        """Term dict (treat as read-only)."""
        return self._terms

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return not self._terms or set(self._terms) == {(0, 0, 0)}

    def constant_value(self) -> Fraction:
        """The rational value of a constant polynomial."""
        if not self._terms:
            return Fraction(0)
        if set(self._terms) != {(0, 0, 0)}:
            raise ValueError("not a constant: %s" % self)
        return self._terms[(0, 0, 0)]

    def total_degree(self) -> int:
        if not self._terms:
            return 0
        return max(dt + dk + dK for (dt, dk, dK) in self._terms)

    def degree_in(self, var: str) -> int:
        i = _VARS.index(var)
        if not self._terms:
            return 0
        return max(e[i] for e in self._terms)

    def degree_tk(self) -> int:
        """Total degree in t and k only."""
        if not self._terms:
            return 0
        return max(dt + dk for (dt, dk, _) in self._terms)

    # -- arithmetic --------------------------------------------------------

    def _coerced(self, other):
        if isinstance(other, ParamPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return ParamPoly.const(other)
        return None

    def __add__(self, other):
        other = self._coerced(other)
        if other is None:
            return NotImplemented
        if not self._terms:
            return other
        if not other._terms:
            return self
        terms = dict(self._terms)
        for exps, c in other._terms.items():
            s = terms.get(exps, 0) + c
            if s:
                terms[exps] = s
            else:
                terms.pop(exps, None)
        return ParamPoly(terms, _internal=True)

    __radd__ = __add__

    def __neg__(self):
        return ParamPoly({e: -c for e, c in self._terms.items()}, _internal=True)

    def __sub__(self, other):
        other = self._coerced(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerced(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if not q:
                return ParamPoly.zero()
            if q == 1:
                return self
            return ParamPoly(
                {e: c * q for e, c in self._terms.items()}, _internal=True
            )
        if not isinstance(other, ParamPoly):
            return NotImplemented
        st, ot = self._terms, other._terms
        if not st or not ot:
            return ParamPoly.zero()
        # Monomial factors cannot produce key collisions, so skip the
        # accumulator in that (very common) case.
        if len(ot) == 1:
            (e2, q2), = ot.items()
            if e2 == (0, 0, 0):
                if q2 == 1:
                    return self
                return ParamPoly({e: c * q2 for e, c in st.items()}, _internal=True)
            a2, b2, c2 = e2
            return ParamPoly(
                {(a1 + a2, b1 + b2, c1 + c2): q1 * q2
                 for (a1, b1, c1), q1 in st.items()},
                _internal=True,
            )
        if len(st) == 1:
            (e1, q1), = st.items()
            if e1 == (0, 0, 0):
                if q1 == 1:
                    return other
                return ParamPoly({e: q1 * c for e, c in ot.items()}, _internal=True)
            a1, b1, c1 = e1
            return ParamPoly(
                {(a1 + a2, b1 + b2, c1 + c2): q1 * q2
                 for (a2, b2, c2), q2 in ot.items()},
                _internal=True,
            )
        terms = {}
        for (a1, b1, c1), q1 in st.items():
            for (a2, b2, c2), q2 in ot.items():
                key = (a1 + a2, b1 + b2, c1 + c2)
                s = terms.get(key, 0) + q1 * q2
                if s:
                    terms[key] = s
                else:
                    terms.pop(key, None)
        return ParamPoly(terms, _internal=True)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = ParamPoly.one()
        for _ in range(n):
            out = out * self
        return out

    def divide_rational(self, q) -> "ParamPoly":
        """Exact division by a nonzero rational."""
        q = Fraction(q)
        if not q:
            raise ZeroDivisionError("division of ParamPoly by zero rational")
        return self * (1 / q)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ParamPoly.const(other)
        if not isinstance(other, ParamPoly):
            return NotImplemented
        return self._terms == other._terms

    def __ne__(self, other):
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- evaluation --------------------------------------------------------

    def evaluate(self, t, k, K) -> Fraction:
        t, k, K = Fraction(t), Fraction(k), Fraction(K)
        total = Fraction(0)
        for (dt, dk, dK), c in self._terms.items():
            total += c * t**dt * k**dk * K**dK
        return total

    def subs_K(self, value) -> "ParamPoly":
        """Substitute a rational for K, keeping t, k formal."""
        value = Fraction(value)
        terms = {}
        for (dt, dk, dK), c in self._terms.items():
            key = (dt, dk, 0)
            s = terms.get(key, 0) + c * value**dK
            if s:
                terms[key] = s
            else:
                terms.pop(key, None)
        return ParamPoly(terms, _internal=True)

    def subs_tk(self, t, k) -> "ParamPoly":
        """Substitute rationals for t and k, keeping K formal."""
        t, k = Fraction(t), Fraction(k)
        terms = {}
        for (dt, dk, dK), c in self._terms.items():
            key = (0, 0, dK)
            s = terms.get(key, 0) + c * t**dt * k**dk
            if s:
                terms[key] = s
            else:
                terms.pop(key, None)
        return ParamPoly(terms, _internal=True)

    # -- text form ---------------------------------------------------------

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for exps in sorted(self._terms, key=_term_key, reverse=True):
            coeff = self._terms[exps]
            body = "*".join(
                v if e == 1 else "%s^%d" % (v, e)
                for v, e in zip(_VARS, exps)
                if e
            )
            mag = abs(coeff)
            if body:
                piece = body if mag == 1 else "%s*%s" % (mag, body)
            else:
                piece = str(mag)
            if not parts:
                parts.append(piece if coeff > 0 else "-" + piece)
            else:
                parts.append((" + " if coeff > 0 else " - ") + piece)
        return "".join(parts)

    def __repr__(self):
        return "ParamPoly(%s)" % self

    _TERM_RE = re.compile(r"^(?:(-?\d+(?:/\d+)?)(?:\*)?)?((?:[tkK](?:\^\d+)?(?:\*[tkK](?:\^\d+)?)*))?$")

    @classmethod
    def parse(cls, text: str) -> "ParamPoly":
        s = text.strip()
        if s in ("0", "-0", ""):
            return cls.zero()
        # split into signed terms at top level
        s = s.replace(" ", "")
        chunks = re.split(r"(?=[+-])", s)
        terms = {}
        for chunk in chunks:
            if not chunk:
                continue
            sign = 1
            if chunk[0] == "+":
                chunk = chunk[1:]
            elif chunk[0] == "-":
                sign = -1
                chunk = chunk[1:]
            m = cls._TERM_RE.match(chunk)
            if not m or (m.group(1) is None and m.group(2) is None):
                raise ValueError("cannot parse ParamPoly term: %r" % chunk)
            coeff = Fraction(m.group(1)) if m.group(1) else Fraction(1)
            exps = [0, 0, 0]
            if m.group(2):
                for factor in m.group(2).split("*"):
                    if "^" in factor:
                        v, e = factor.split("^")
                        exps[_VARS.index(v)] += int(e)
                    else:
                        exps[_VARS.index(factor)] += 1
            key = tuple(exps)
            s2 = terms.get(key, 0) + sign * coeff
            if s2:
                terms[key] = s2
            else:
                terms.pop(key, None)
        return cls(terms, _internal=True)


# convenient module-level singletons
T = ParamPoly.var_t()
K_SMALL = ParamPoly.var_k()
K_BIG = ParamPoly.var_K()
ONE = ParamPoly.one()
ZERO = ParamPoly.zero()


def interpolate_in_K(samples, degree_bound: int) -> ParamPoly:
    """Exact Lagrange interpolation in K through (n, value) samples.

    ``samples`` is a list of (n, ParamPoly-in-t,k) pairs with pairwise
    distinct integer n.  The unique polynomial of degree <= degree_bound in K
    through the first degree_bound+1 samples is returned; any further samples
    are checked against it and a mismatch raises InconsistentSamples.
    """
    if degree_bound < 0:
        raise ValueError("degree_bound must be >= 0")
    if len(samples) < degree_bound + 1:
        raise ValueError(
            "need at least %d samples for degree bound %d, got %d"
            % (degree_bound + 1, degree_bound, len(samples))
        )
    points = [int(n) for n, _ in samples]
    if len(set(points)) != len(points):
        raise ValueError("sample points must be pairwise distinct: %s" % points)
    for n, value in samples:
        if value.degree_in("K"):
            raise ValueError("sample value at n=%d already involves K" % n)

    base = samples[: degree_bound + 1]
    result = ParamPoly.zero()
    for i, (ni, value) in enumerate(base):
        if value.is_zero():
            continue
        # Lagrange basis polynomial L_i(K) as a coefficient list in K
        # (low degree first): product over j != i of (K - nj) / (ni - nj).
        num = [Fraction(1)]
        denom = Fraction(1)
        for j, (nj, _) in enumerate(base):
            if j == i:
                continue
            shifted = [Fraction(0)] + num
            scaled = [-nj * c for c in num] + [Fraction(0)]
            num = [a + b for a, b in zip(shifted, scaled)]
            denom *= ni - nj
        terms = {}
        for d, c in enumerate(num):
            if not c:
                continue
            w = c / denom
            for (dt, dk, _), q in value.terms.items():
                key = (dt, dk, d)
                s = terms.get(key, 0) + q * w
                if s:
                    terms[key] = s
                else:
                    terms.pop(key, None)
        result = result + ParamPoly(terms, _internal=True)

    for n, value in samples[degree_bound + 1 :]:
        if result.subs_K(n) != value:
            raise InconsistentSamples(
                "sample at n=%d disagrees with degree-%d fit: %s vs %s"
                % (n, degree_bound, value, result.subs_K(n))
            )
    return result
