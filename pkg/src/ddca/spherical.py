"""Spherical subalgebra e*H*e in compressed coordinates.

An element Z of the spherical subalgebra is invariant on both sides under
the symmetrizer e, which makes it redundant to store all n! permutation
blocks: the identity block already determines Z through

    coeff at (A, S, tau, B)  =  coords[(tau^-1 A, tau^-1 S, B)].

``SphericalElement`` therefore keeps only that identity block (``coords``),
plus - when available - a "slim" representative: an S_n-invariant ambient
element X with X*e = Z.  Slim representatives multiply without the n!
blow-up, because (X1*e)(X2*e) = (X1*X2)*e when X2 is invariant.

The distinguished generators are

    T_{p,q}(g) = (p! q! / (p+q)!) * sum_{words} sum_i (g)_i * word(i) * e

where the word sum runs over all arrangements of p letters x_i and q
letters y_i.  Ordered products of these, averaged over orderings, give the
graded basis elements indexed by a ``TIndex`` (a multiset of (p, q, label)
triples).  ``expand_in_t_basis`` inverts that: it rewrites a spherical
element in the basis by repeatedly peeling the leading (v, h)-stratum,
whose transition coefficient is a parameter-free rational.
"""

from __future__ import annotations

import itertools
import logging
import math
from fractions import Fraction

from .cherednik import (
    CherednikElement,
    ParamMismatch,
    _perm_on_slots,
    matrix_components,
    matrix_label,
)
from .rings import ParamPoly
from .symgroup import all_permutations, permute_positions

log = logging.getLogger(__name__)

_SANDWICH_WARN_RANK = 8


class NotInSpan(Exception):
    """The element is not (provably) in the span of the T-basis."""


class DegreeBoundExceeded(Exception):
    """An expansion coefficient exceeded the expected (t, k)-degree."""


# ---------------------------------------------------------------------------
# Basis indices
# ---------------------------------------------------------------------------

def _label_key(lab):
    return (0, 0, 0) if lab == "id" else (1, lab[0], lab[1])


def _triple_key(triple):
    p, q, lab = triple
    return (p, q) + _label_key(lab)


def _normalize_triple(triple):
    if len(triple) != 3:
        raise ValueError("index entry is not a (p, q, label) triple: %r" % (triple,))
    p, q, lab = triple
    if not (isinstance(p, int) and isinstance(q, int) and p >= 0 and q >= 0):
        raise ValueError("word degrees must be non-negative ints: %r" % (triple,))
    if lab == "id" or lab is None:
        lab = "id"
    else:
        if len(lab) != 2:
            raise ValueError("bad matrix-unit label: %r" % (lab,))
        a, b = int(lab[0]), int(lab[1])
        if a < 1 or b < 1:
            raise ValueError("bad matrix-unit label: %r" % (lab,))
        lab = (a, b)
    if p == 0 and q == 0 and lab == "id":
        raise ValueError("(0, 0, Id) is not a basis index entry")
    return (p, q, lab)


class TIndex:
    """Multiset of (p, q, label) triples indexing a T-basis element.

    label is 'id' or a matrix-unit pair (a, b); (0, 0, 'id') is excluded.
    """

    __slots__ = ("entries",)

    def __init__(self, triples=()):
        counts = {}
        items = triples.items() if isinstance(triples, dict) else ((t, 1) for t in triples)
        for triple, mult in items:
            if not (isinstance(mult, int) and mult >= 1):
                raise ValueError("multiplicity must be a positive int: %r" % (mult,))
            norm = _normalize_triple(tuple(triple))
            counts[norm] = counts.get(norm, 0) + mult
        self.entries = tuple(sorted(counts.items(), key=lambda e: _triple_key(e[0])))

    @classmethod
    def singleton(cls, p, q, lab):
        return cls([(p, q, lab)])

    @property
    def size(self):
        return sum(m for _t, m in self.entries)

    @property
    def weight(self):
        return sum((t[0] + t[1]) * m for t, m in self.entries)

    def is_empty(self):
        return not self.entries

    def with_one_less(self, triple):
        counts = dict(self.entries)
        if counts.get(triple, 0) < 1:
            raise ValueError("entry %r not in index" % (triple,))
        counts[triple] -= 1
        if not counts[triple]:
            del counts[triple]
        return TIndex(counts)

    def sort_key(self):
        return (self.weight, self.size, tuple(_triple_key(t) + (m,) for t, m in self.entries))

    def to_obj(self):
        out = []
        for (p, q, lab), mult in self.entries:
            out.append([p, q, "id" if lab == "id" else [lab[0], lab[1]], mult])
        return out

    @classmethod
    def from_obj(cls, obj):
        counts = {}
        for entry in obj:
            p, q, lab, mult = entry
            lab = "id" if lab == "id" else (int(lab[0]), int(lab[1]))
            counts[(int(p), int(q), lab)] = counts.get((int(p), int(q), lab), 0) + int(mult)
        return cls(counts)

    def __eq__(self, other):
        return isinstance(other, TIndex) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        if not self.entries:
            return "TIndex([])"
        bits = []
        for (p, q, lab), mult in self.entries:
            s = "(%d, %d, %s)" % (p, q, "'id'" if lab == "id" else "(%d, %d)" % lab)
            bits.extend([s] * mult)
        return "TIndex([%s])" % ", ".join(bits)


def enumerate_t_indices(r, max_weight, max_size, include_empty=True):
    """All TIndex over rank-r labels with weight <= max_weight and
    size <= max_size, in a fixed graded order."""
    labels = ["id"] + [
        (a, b) for a in range(1, r + 1) for b in range(1, r + 1) if (a, b) != (r, r)
    ]
    triples = [
        (p, q, lab)
        for p in range(max_weight + 1)
        for q in range(max_weight + 1 - p)
        for lab in labels
        if not (p == 0 and q == 0 and lab == "id")
    ]
    triples.sort(key=_triple_key)

    found = []

    def rec(pos, counts, weight, size):
        if pos == len(triples):
            found.append(TIndex(dict(counts)))
            return
        p, q, lab = triples[pos]
        step = p + q
        mult = 0
        while True:
            if mult:
                counts[(p, q, lab)] = mult
            rec(pos + 1, counts, weight + mult * step, size + mult)
            counts.pop((p, q, lab), None)
            mult += 1
            if size + mult > max_size or weight + mult * step > max_weight:
                break

    rec(0, {}, 0, 0)
    found.sort(key=TIndex.sort_key)
    if not include_empty:
        found = [m for m in found if not m.is_empty()]
    return found


# ---------------------------------------------------------------------------
# Spherical elements
# ---------------------------------------------------------------------------

def _coords_key_stratum(key):
    """(v, h) of one identity-block key (x-exp, slots, y-exp)."""
    a, slots, b = key
    occupied = {site for (site, _x, _y) in slots}
    h = sum(1 for i in range(len(a)) if a[i] or b[i] or (i + 1) in occupied)
    return (sum(a) + sum(b), h)


class SphericalElement:
    """Element of e*H_{t,k}(n, r)*e, stored as its identity-permutation block."""

    __slots__ = ("algebra", "coords", "slim")

    def __init__(self, algebra, coords=None, slim=None, _internal=False):
        self.algebra = algebra
        if _internal:
            self.coords = coords
        else:
            clean = {}
            for key, c in (coords or {}).items():
                if not isinstance(c, ParamPoly):
                    c = ParamPoly.const(c)
                if c:
                    clean[key] = c
            self.coords = clean
        self.slim = slim

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, algebra):
        return cls(algebra, {}, slim=CherednikElement.zero(algebra), _internal=True)

    @classmethod
    def unit(cls, algebra):
        """The symmetrizer e itself."""
        zkey = (algebra.zero_exp, (), algebra.zero_exp)
        c = ParamPoly.const(Fraction(1, math.factorial(algebra.n)))
        return cls(algebra, {zkey: c}, slim=CherednikElement.one(algebra), _internal=True)

    @classmethod
    def from_slim(cls, algebra, x):
        """Wrap an S_n-invariant ambient element X as X*e (not checked)."""
        nfact = math.factorial(algebra.n)
        coords = {}
        for (a, slots, perm, b), c in x.terms.items():
            key = (a, slots, permute_positions(perm, b))
            s = coords.get(key)
            s = c if s is None else s + c
            if s:
                coords[key] = s
            else:
                coords.pop(key, None)
        return cls(
            algebra,
            {k: c.divide_rational(nfact) for k, c in coords.items()},
            slim=x,
            _internal=True,
        )

    @classmethod
    def from_inner(cls, algebra, inner):
        """Wrap an already two-sided-sandwiched ambient element e*a*e."""
        coords = {}
        for (a, slots, perm, b), c in inner.terms.items():
            if perm == algebra.id_perm:
                coords[(a, slots, b)] = c
        return cls(algebra, coords, slim=inner, _internal=True)

    # -- linear structure --------------------------------------------------

    def _compat(self, other):
        if self.algebra is not other.algebra:
            raise ParamMismatch("spherical elements from different algebras")

    def __add__(self, other):
        if not isinstance(other, SphericalElement):
            return NotImplemented
        self._compat(other)
        coords = dict(self.coords)
        for key, c in other.coords.items():
            s = coords.get(key)
            s = c if s is None else s + c
            if s:
                coords[key] = s
            else:
                coords.pop(key, None)
        slim = None
        if self.slim is not None and other.slim is not None:
            slim = self.slim + other.slim
        return SphericalElement(self.algebra, coords, slim=slim, _internal=True)

    def __sub__(self, other):
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        if not isinstance(c, ParamPoly):
            c = ParamPoly.const(c)
        if not c:
            return SphericalElement.zero(self.algebra)
        slim = self.slim.scale(c) if self.slim is not None else None
        return SphericalElement(
            self.algebra,
            {k: q * c for k, q in self.coords.items()},
            slim=slim,
            _internal=True,
        )

    def __eq__(self, other):
        return (
            isinstance(other, SphericalElement)
            and self.algebra is other.algebra
            and self.coords == other.coords
        )

    def is_zero(self):
        return not self.coords

    def coeff(self, key):
        return self.coords.get(key, ParamPoly.zero())

    # -- degrees -----------------------------------------------------------

    def v_degree(self):
        if not self.coords:
            return 0
        return max(sum(a) + sum(b) for (a, _s, b) in self.coords)

    def h_degree(self):
        if not self.coords:
            return 0
        return max(_coords_key_stratum(key)[1] for key in self.coords)

    # -- multiplication ----------------------------------------------------

    def __mul__(self, other):
        if not isinstance(other, SphericalElement):
            return NotImplemented
        self._compat(other)
        alg = self.algebra
        if self.slim is not None and other.slim is not None:
            return SphericalElement.from_slim(alg, self.slim * other.slim)
        if alg.n > 7:
            raise ValueError(
                "product at n=%d needs slim representatives; only compressed "
                "coordinates are available" % alg.n
            )
        return SphericalElement.from_inner(alg, self.to_cherednik() * other.to_cherednik())

    # -- conversions -------------------------------------------------------

    def to_cherednik(self):
        """Materialize all n! permutation blocks as an ambient element."""
        alg = self.algebra
        terms = {}
        for p in all_permutations(alg.n):
            p = tuple(p)
            for (a, slots, b), c in self.coords.items():
                terms[(permute_positions(p, a), _perm_on_slots(p, slots), p, b)] = c
        return CherednikElement(alg, terms, _internal=True)

    def to_obj(self):
        entries = []
        for key in sorted(self.coords):
            a, slots, b = key
            entries.append(
                {
                    "xExp": list(a),
                    "slots": [list(s) for s in slots],
                    "yExp": list(b),
                    "coeff": str(self.coords[key]),
                }
            )
        return {
            "format": "spherical-element/1",
            "n": self.algebra.n,
            "r": self.algebra.r,
            "coords": entries,
        }

    @classmethod
    def from_obj(cls, obj, algebra=None):
        from .cherednik import get_algebra

        if obj.get("format") != "spherical-element/1":
            raise ValueError("unknown element format: %r" % obj.get("format"))
        if algebra is None:
            algebra = get_algebra(int(obj["n"]), int(obj["r"]))
        if (algebra.n, algebra.r) != (int(obj["n"]), int(obj["r"])):
            raise ParamMismatch("element is for (n=%s, r=%s)" % (obj["n"], obj["r"]))
        coords = {}
        for entry in obj["coords"]:
            key = (
                tuple(entry["xExp"]),
                tuple(tuple(s) for s in entry["slots"]),
                tuple(entry["yExp"]),
            )
            coords[key] = ParamPoly.parse(entry["coeff"])
        return cls(algebra, coords)

    def __repr__(self):
        if not self.coords:
            return "SphericalElement(0)"
        bits = []
        for key in sorted(self.coords):
            a, slots, b = key
            factors = []
            for i, e in enumerate(a):
                if e:
                    factors.append("x%d" % (i + 1) + ("^%d" % e if e > 1 else ""))
            for site, al, be in slots:
                factors.append("(E%d%d)_%d" % (al, be, site))
            for i, e in enumerate(b):
                if e:
                    factors.append("y%d" % (i + 1) + ("^%d" % e if e > 1 else ""))
            body = "*".join(factors) if factors else "1"
            bits.append("(%s)*%s" % (self.coords[key], body))
        return "SphericalElement[id-block: %s]" % " + ".join(bits)


def sandwich(a):
    """e*a*e for an ambient element a, as a SphericalElement."""
    alg = a.algebra
    if alg.n > _SANDWICH_WARN_RANK:
        log.warning(
            "sandwich at n=%d materializes %d permutation blocks; prefer "
            "building from T-generators at this rank",
            alg.n,
            math.factorial(alg.n),
        )
    e = alg.symmetrizer_element()
    return SphericalElement.from_inner(alg, e * (a * e))


def spherical_mul(a, b):
    """Product in the spherical subalgebra."""
    return a * b


# ---------------------------------------------------------------------------
# T-generators and the graded basis
# ---------------------------------------------------------------------------

def _t_gen_single(alg, p, q, lab):
    """T_{p,q}(g) for g a single matrix unit or the identity, cached."""
    key = (p, q, lab)
    cached = alg._tgen_cache.get(key)
    if cached is not None:
        return cached
    words = sorted(set(itertools.permutations("x" * p + "y" * q)))
    norm = Fraction(math.factorial(p) * math.factorial(q), math.factorial(p + q))
    total = CherednikElement.zero(alg)
    for i in range(1, alg.n + 1):
        base = CherednikElement.gen_unit(alg, lab, i)
        xi = CherednikElement.gen_x(alg, i)
        yi = CherednikElement.gen_y(alg, i)
        for word in words:
            cur = base
            for ch in word:
                cur = cur * (xi if ch == "x" else yi)
            total = total + cur
    elem = SphericalElement.from_slim(alg, total.scale(norm))
    alg._tgen_cache[key] = elem
    return elem


def t_gen(alg, p, q, g):
    """T_{p,q}(g): the degree-(p, q) spherical generator attached to g.

    g may be a matrix-unit label (a, b), 'id', or an r x r rational matrix
    (expanded linearly).
    """
    if p < 0 or q < 0:
        raise ValueError("word degrees must be non-negative")
    total = SphericalElement.zero(alg)
    for lab, c in matrix_components(g, alg.r).items():
        if lab != "id":
            matrix_label(lab[0], lab[1], alg.r)
        total = total + _t_gen_single(alg, p, q, lab).scale(c)
    return total


def t_basis_elem(alg, m):
    """Basis element for the index m: the average over all orderings of the
    product of the T-generators listed in m (with multiplicity)."""
    if not isinstance(m, TIndex):
        m = TIndex(m)
    cached = alg._tbasis_cache.get(m)
    if cached is not None:
        return cached
    for (p, q, lab), _mult in m.entries:
        if lab != "id":
            matrix_label(lab[0], lab[1], alg.r)
    if m.is_empty():
        elem = SphericalElement.unit(alg)
    else:
        total = SphericalElement.zero(alg)
        for triple, mult in m.entries:
            p, q, lab = triple
            head = _t_gen_single(alg, p, q, lab)
            tail = t_basis_elem(alg, m.with_one_less(triple))
            total = total + (head * tail).scale(Fraction(mult, m.size))
        elem = total
    alg._tbasis_cache[m] = elem
    return elem


# ---------------------------------------------------------------------------
# Expansion in the T-basis
# ---------------------------------------------------------------------------

def _key_index(alg, key):
    """The unique index whose leading stratum contains this id-block key."""
    a, slots, b = key
    lab_at = {site: (al, be) for (site, al, be) in slots}
    triples = []
    for i in range(alg.n):
        p, q = a[i], b[i]
        lab = lab_at.get(i + 1, "id")
        if p or q or lab != "id":
            triples.append((p, q, lab))
    return TIndex(triples)


def expand_in_t_basis(z, strict=True):
    """Write z as a dict {TIndex: ParamPoly coefficient}.

    Works by peeling the leading (v, h)-stratum: for the current maximal
    id-block key, the matching basis element has a parameter-free positive
    rational coefficient there, so one exact division gives the expansion
    coefficient; subtracting clears the whole relabeling orbit and strictly
    descends.

    With strict=True (default), ranks n < 2*v_degree + 2 are rejected with
    NotInSpan, since below that the basis no longer separates elements of
    this degree.  DegreeBoundExceeded flags coefficients whose (t, k)-degree
    exceeds the input's coefficient degree plus ceil(v_degree / 2).
    """
    alg = z.algebra
    if z.is_zero():
        return {}
    v = z.v_degree()
    if strict and alg.n < 2 * v + 2:
        raise NotInSpan(
            "rank n=%d is below the separating threshold 2*%d + 2 = %d for "
            "v-degree %d" % (alg.n, v, 2 * v + 2, v)
        )
    bound = max(c.degree_tk() for c in z.coords.values()) + (v + 1) // 2
    cur = dict(z.coords)
    out = {}
    prev = None
    while cur:
        kappa = max(cur, key=lambda k: (_coords_key_stratum(k), k))
        rank_mark = (_coords_key_stratum(kappa), kappa)
        assert prev is None or rank_mark < prev, "leading stratum failed to descend"
        prev = rank_mark
        m = _key_index(alg, kappa)
        basis = t_basis_elem(alg, m)
        lead = basis.coords.get(kappa)
        assert lead is not None and lead.total_degree() == 0, (
            "leading transition coefficient is not a plain rational at %r" % (kappa,)
        )
        coeff = cur[kappa].divide_rational(lead.evaluate(0, 0, 0))
        if coeff.degree_tk() > bound:
            raise DegreeBoundExceeded(
                "coefficient of %r has (t, k)-degree %d > bound %d"
                % (m, coeff.degree_tk(), bound)
            )
        s = out.get(m)
        s = coeff if s is None else s + coeff
        out[m] = s
        for key2, c2 in basis.coords.items():
            d = cur.get(key2)
            d = -(coeff * c2) if d is None else d - coeff * c2
            if d:
                cur[key2] = d
            else:
                cur.pop(key2, None)
    return {m: c for m, c in out.items() if c}


def expansion_to_obj(expansion):
    """Serializable form of an expand_in_t_basis result."""
    terms = []
    for m in sorted(expansion, key=TIndex.sort_key):
        terms.append({"index": m.to_obj(), "coeff": str(expansion[m])})
    return {"format": "t-expansion/1", "terms": terms}


def expansion_from_obj(obj):
    if obj.get("format") != "t-expansion/1":
        raise ValueError("unknown expansion format: %r" % obj.get("format"))
    out = {}
    for entry in obj["terms"]:
        out[TIndex.from_obj(entry["index"])] = ParamPoly.parse(entry["coeff"])
    return out
