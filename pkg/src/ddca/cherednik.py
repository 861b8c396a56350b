"""PBW normal-form engine for the extended rational Cherednik algebra.

Elements live in the algebra generated by commuting x_1..x_n, commuting
y_1..y_n, the group algebra of S_n, and one copy of End(k^r) per site,
subject to

    [y_i, x_j] = delta_ij (t - k sum_{m != i} s_im sigma_im)
                 + (1 - delta_ij) k s_ij sigma_ij,

where sigma_ij = sum_{a,b} (E_ab)_i (E_ba)_j.  At r = 1 every sigma is 1 and
the relation degenerates to the rational Cherednik algebra of S_n; at n = 1
it reads [y_1, x_1] = t.

Normal form: x-monomial, then matrix slots (one non-identity matrix unit per
site at most), then a permutation, then a y-monomial.  E_rr never appears in
a stored slot: it is eliminated via E_rr = Id - sum_{a<r} E_aa, so the slot
alphabet is {Id} plus the r^2 - 1 units E_ab with (a, b) != (r, r).

A monomial is a plain tuple (xexp, slots, perm, yexp):
  xexp, yexp : tuples of n non-negative ints
  slots      : tuple of (site, a, b), sorted by site, sites 1-based
  perm       : tuple of images (one-line notation)

Rewriting always resolves the leftmost innermost y*x inversion, which makes
the normal form deterministic; confluence is exercised by the associativity
tests rather than assumed.

The two deformation parameters default to the formal t and k but can be any
ParamPoly (the rank-one inner algebra of the V_l modules uses -t, -k).
"""

from __future__ import annotations

from fractions import Fraction

from .rings import ParamPoly
from .symgroup import (
    all_permutations,
    compose,
    identity_perm,
    inverse,
    permute_positions,
    perm_to_str,
    perm_from_str,
    transposition,
)


class IndexOutOfRange(Exception):
    """A site or matrix index is outside 1..n or 1..r."""


class EqualIndices(Exception):
    """Two site indices that must be distinct coincide."""


class ParamMismatch(Exception):
    """Operands belong to different algebras (n, r, or parameters differ)."""


class ZeroElement(Exception):
    """The operation is undefined for the zero element."""


def matrix_components(g, r: int):
    """Expand g over {Id} + {E_ab : (a,b) != (r,r)}.

    g may be a label tuple (a, b), 'id'/None, or an r x r matrix of
    rationals.  Returns a dict mapping 'id' and label tuples to Fractions.
    """
    if g == "id" or g is None:
        return {"id": Fraction(1)}
    if (
        isinstance(g, (tuple, list))
        and len(g) == 2
        and all(isinstance(v, int) for v in g)
    ):
        return {matrix_label(g[0], g[1], r): Fraction(1)}
    rows = [list(map(Fraction, row)) for row in g]
    if len(rows) != r or any(len(row) != r for row in rows):
        raise IndexOutOfRange("matrix is not %d x %d" % (r, r))
    comp = {}
    c_id = rows[r - 1][r - 1]
    if c_id:
        comp["id"] = c_id
    for a in range(1, r + 1):
        for b in range(1, r + 1):
            if a == r and b == r:
                continue
            c = rows[a - 1][b - 1] - (c_id if a == b else 0)
            if c:
                comp[(a, b)] = c
    return comp


def matrix_label(alpha: int, beta: int, r: int):
    """Validated slot label E_alpha,beta; (r, r) is not a basis label."""
    if not (1 <= alpha <= r and 1 <= beta <= r):
        raise IndexOutOfRange("matrix unit E_%d,%d outside rank %d" % (alpha, beta, r))
    if alpha == r and beta == r:
        raise IndexOutOfRange(
            "E_%d,%d is eliminated (Id minus the other diagonal units)" % (r, r)
        )
    return (alpha, beta)


def _perm_on_slots(sigma, slots):
    if not slots:
        return slots
    return tuple(sorted((sigma[site - 1], a, b) for (site, a, b) in slots))


_ALGEBRAS = {}


def get_algebra(n: int, r: int, tpar: ParamPoly | None = None, kpar: ParamPoly | None = None):
    """Shared algebra context (memo caches live here)."""
    if tpar is None:
        tpar = ParamPoly.var_t()
    if kpar is None:
        kpar = ParamPoly.var_k()
    key = (n, r, tpar, kpar)
    alg = _ALGEBRAS.get(key)
    if alg is None:
        alg = CherednikAlgebra(n, r, tpar, kpar)
        _ALGEBRAS[key] = alg
    return alg


class CherednikAlgebra:
    """Context object: parameters plus rewriting caches for one (n, r)."""

    def __init__(self, n: int, r: int, tpar: ParamPoly, kpar: ParamPoly):
        if n < 1:
            raise IndexOutOfRange("need n >= 1, got %d" % n)
        if r < 1:
            raise IndexOutOfRange("need r >= 1, got %d" % r)
        self.n = n
        self.r = r
        self.tpar = tpar
        self.kpar = kpar
        self.id_perm = identity_perm(n)
        self.zero_exp = (0,) * n
        self._sigma_cache = {}
        self._push_cache = {}
        self._yx_cache = {}
        self._sym_elem = None
        self._tgen_cache = {}
        self._tbasis_cache = {}

    # -- sigma_ij as a sum of slot configurations -------------------------

    def sigma_terms(self, i: int, j: int):
        """sigma_ij as a list of (slots, Fraction), E_rr eliminated."""
        if i == j:
            raise EqualIndices("sigma_%d,%d needs distinct sites" % (i, j))
        for site in (i, j):
            if not (1 <= site <= self.n):
                raise IndexOutOfRange("site %d outside 1..%d" % (site, self.n))
        key = (i, j)
        cached = self._sigma_cache.get(key)
        if cached is not None:
            return cached
        r = self.r
        acc = {}

        def put(slots, coeff):
            slots = tuple(sorted(slots))
            acc[slots] = acc.get(slots, 0) + coeff

        one = Fraction(1)
        for a in range(1, r + 1):
            for b in range(1, r + 1):
                if a == r and b == r:
                    # (E_rr)_i (E_rr)_j with both factors eliminated
                    put((), one)
                    for g in range(1, r):
                        put(((i, g, g),), -one)
                        put(((j, g, g),), -one)
                    for g in range(1, r):
                        for d in range(1, r):
                            put(((i, g, g), (j, d, d)), one)
                else:
                    put(((i, a, b), (j, b, a)), one)
        result = tuple((s, c) for s, c in acc.items() if c)
        self._sigma_cache[key] = result
        return result

    # -- slot multiplication ----------------------------------------------

    def slot_mul(self, slots1, slots2):
        """Product of two slot configurations: list of (slots, Fraction).

        Same-site units multiply by E_ab E_cd = delta_bc E_ad; a resulting
        E_rr branches into Id - sum of the other diagonal units.
        """
        if not slots1:
            return ((slots2, Fraction(1)),)
        if not slots2:
            return ((slots1, Fraction(1)),)
        r = self.r
        by_site = {}
        for site, a, b in slots1:
            by_site[site] = [(a, b)]
        for site, a, b in slots2:
            if site in by_site:
                by_site[site].append((a, b))
            else:
                by_site[site] = [(a, b)]
        fixed = []
        branches = []  # per site: list of (label-or-None, Fraction)
        for site in sorted(by_site):
            labels = by_site[site]
            if len(labels) == 1:
                fixed.append((site, labels[0][0], labels[0][1]))
                continue
            (a1, b1), (a2, b2) = labels
            if b1 != a2:
                return ()
            a, b = a1, b2
            if a == r and b == r:
                opts = [(site, None, Fraction(1))]
                opts.extend((site, (g, g), Fraction(-1)) for g in range(1, r))
                branches.append(opts)
            else:
                fixed.append((site, a, b))
        if not branches:
            return ((tuple(sorted(fixed)), Fraction(1)),)
        results = []
        stack = [(0, fixed, Fraction(1))]
        while stack:
            idx, cur, coeff = stack.pop()
            if idx == len(branches):
                results.append((tuple(sorted(cur)), coeff))
                continue
            for site, label, q in branches[idx]:
                nxt = cur if label is None else cur + [(site, label[0], label[1])]
                stack.append((idx + 1, list(nxt), coeff * q))
        return tuple(results)

    # -- the y-past-x rewrite ---------------------------------------------

    def yx_push(self, i: int, a):
        """Normal form of y_i * x^a as a list of (monomial, ParamPoly).

        i is 0-based here; a is an exponent tuple.
        """
        key = (i, a)
        cached = self._push_cache.get(key)
        if cached is not None:
            return cached
        n = self.n
        if not any(a):
            e_i = tuple(1 if m == i else 0 for m in range(n))
            result = (((self.zero_exp, (), self.id_perm, e_i), ParamPoly.one()),)
            self._push_cache[key] = result
            return result
        j = next(m for m in range(n) if a[m])
        a_rest = tuple(v - 1 if m == j else v for m, v in enumerate(a))
        acc = {}

        def put(mono, coeff):
            s = acc.get(mono)
            if s is None:
                acc[mono] = coeff
            else:
                s = s + coeff
                if s:
                    acc[mono] = s
                else:
                    del acc[mono]

        # x_j * (y_i * x^{a - e_j})
        for (ax, sl, pm, ay), c in self.yx_push(i, a_rest):
            ax2 = tuple(v + 1 if m == j else v for m, v in enumerate(ax))
            put((ax2, sl, pm, ay), c)
        # [y_i, x_j] * x^{a - e_j}
        if i == j:
            put((a_rest, (), self.id_perm, self.zero_exp), self.tpar)
            for m in range(n):
                if m == i:
                    continue
                s_im = transposition(n, i + 1, m + 1)
                moved = permute_positions(s_im, a_rest)
                for slots, q in self.sigma_terms(i + 1, m + 1):
                    put((moved, slots, s_im, self.zero_exp), self.kpar * (-q))
        else:
            s_ij = transposition(n, i + 1, j + 1)
            moved = permute_positions(s_ij, a_rest)
            for slots, q in self.sigma_terms(i + 1, j + 1):
                put((moved, slots, s_ij, self.zero_exp), self.kpar * q)
        result = tuple(acc.items())
        self._push_cache[key] = result
        return result

    def yx_normal(self, b, a):
        """Normal form of y^b * x^a as a tuple of (monomial, ParamPoly)."""
        if not any(b) or not any(a):
            return (((a, (), self.id_perm, b), ParamPoly.one()),)
        key = (b, a)
        cached = self._yx_cache.get(key)
        if cached is not None:
            return cached
        n = self.n
        i = next(m for m in range(n) if b[m])
        b_rest = tuple(v - 1 if m == i else v for m, v in enumerate(b))
        inner = self.yx_normal(b_rest, a)
        acc = {}

        def put(mono, coeff):
            s = acc.get(mono)
            if s is None:
                acc[mono] = coeff
            else:
                s = s + coeff
                if s:
                    acc[mono] = s
                else:
                    del acc[mono]

        for (ac, Sc, pc, bc), c in inner:
            for (ap, Sp, pp, bp), cp in self.yx_push(i, ac):
                coeff = c * cp
                slots_branches = self.slot_mul(Sp, _perm_on_slots(pp, Sc))
                perm = compose(pp, pc)
                ytail_base = permute_positions(inverse(pc), bp)
                yexp = tuple(u + v for u, v in zip(ytail_base, bc))
                for slots, q in slots_branches:
                    put((ap, slots, perm, yexp), coeff * q)
        result = tuple(acc.items())
        self._yx_cache[key] = result
        return result

    def symmetrizer_element(self):
        """e = (1/n!) sum of all permutations, as an element."""
        if self._sym_elem is None:
            import math

            c = ParamPoly.const(Fraction(1, math.factorial(self.n)))
            terms = {
                (self.zero_exp, (), tuple(p), self.zero_exp): c
                for p in all_permutations(self.n)
            }
            self._sym_elem = CherednikElement(self, terms, _internal=True)
        return self._sym_elem


class CherednikElement:
    """Sparse linear combination of PBW monomials with ParamPoly coefficients."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra, terms=None, _internal=False):
        self.algebra = algebra
        if _internal:
            self.terms = terms
        else:
            clean = {}
            for mono, c in (terms or {}).items():
                if not isinstance(c, ParamPoly):
                    c = ParamPoly.const(c)
                if c:
                    clean[mono] = c
            self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, algebra):
        return cls(algebra, {}, _internal=True)

    @classmethod
    def scalar(cls, algebra, value):
        if not isinstance(value, ParamPoly):
            value = ParamPoly.const(value)
        if not value:
            return cls.zero(algebra)
        mono = (algebra.zero_exp, (), algebra.id_perm, algebra.zero_exp)
        return cls(algebra, {mono: value}, _internal=True)

    @classmethod
    def one(cls, algebra):
        return cls.scalar(algebra, 1)

    @classmethod
    def gen_x(cls, algebra, i: int):
        cls._site_check(algebra, i)
        e = tuple(1 if m == i - 1 else 0 for m in range(algebra.n))
        mono = (e, (), algebra.id_perm, algebra.zero_exp)
        return cls(algebra, {mono: ParamPoly.one()}, _internal=True)

    @classmethod
    def gen_y(cls, algebra, i: int):
        cls._site_check(algebra, i)
        e = tuple(1 if m == i - 1 else 0 for m in range(algebra.n))
        mono = (algebra.zero_exp, (), algebra.id_perm, e)
        return cls(algebra, {mono: ParamPoly.one()}, _internal=True)

    @classmethod
    def gen_perm(cls, algebra, sigma):
        sigma = tuple(sigma)
        if sorted(sigma) != list(range(1, algebra.n + 1)):
            raise IndexOutOfRange("not a permutation of 1..%d: %s" % (algebra.n, sigma))
        mono = (algebra.zero_exp, (), sigma, algebra.zero_exp)
        return cls(algebra, {mono: ParamPoly.one()}, _internal=True)

    @classmethod
    def gen_transposition(cls, algebra, i: int, j: int):
        if i == j:
            raise EqualIndices("s_%d,%d needs distinct sites" % (i, j))
        cls._site_check(algebra, i)
        cls._site_check(algebra, j)
        return cls.gen_perm(algebra, transposition(algebra.n, i, j))

    @classmethod
    def gen_unit(cls, algebra, g, i: int):
        """(g)_i for g a matrix unit label (a, b), 'id', or an r x r matrix.

        A matrix is expanded over {Id} + {E_ab : (a,b) != (r,r)} using
        E_rr = Id - sum_{a<r} E_aa.
        """
        cls._site_check(algebra, i)
        base = (algebra.zero_exp, (), algebra.id_perm, algebra.zero_exp)
        terms = {}
        for lab, c in matrix_components(g, algebra.r).items():
            if lab == "id":
                terms[base] = ParamPoly.const(c)
            else:
                a, b = matrix_label(lab[0], lab[1], algebra.r)
                mono = (
                    algebra.zero_exp,
                    ((i, a, b),),
                    algebra.id_perm,
                    algebra.zero_exp,
                )
                terms[mono] = ParamPoly.const(c)
        return cls(algebra, terms, _internal=True)

    @classmethod
    def sigma_elem(cls, algebra, i: int, j: int):
        """sigma_ij as an element."""
        terms = {}
        for slots, q in algebra.sigma_terms(i, j):
            mono = (algebra.zero_exp, slots, algebra.id_perm, algebra.zero_exp)
            terms[mono] = ParamPoly.const(q)
        return cls(algebra, terms, _internal=True)

    @staticmethod
    def _site_check(algebra, i):
        if not (1 <= i <= algebra.n):
            raise IndexOutOfRange("site %d outside 1..%d" % (i, algebra.n))

    # -- linear structure --------------------------------------------------

    def _compat(self, other):
        if self.algebra is not other.algebra:
            a, b = self.algebra, other.algebra
            raise ParamMismatch(
                "mixed algebras: (n=%d, r=%d, t=%s, k=%s) vs (n=%d, r=%d, t=%s, k=%s)"
                % (a.n, a.r, a.tpar, a.kpar, b.n, b.r, b.tpar, b.kpar)
            )

    def __add__(self, other):
        if not isinstance(other, CherednikElement):
            return NotImplemented
        self._compat(other)
        terms = dict(self.terms)
        for mono, c in other.terms.items():
            s = terms.get(mono)
            s = c if s is None else s + c
            if s:
                terms[mono] = s
            else:
                terms.pop(mono, None)
        return CherednikElement(self.algebra, terms, _internal=True)

    def __sub__(self, other):
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        if not isinstance(c, ParamPoly):
            c = ParamPoly.const(c)
        if not c:
            return CherednikElement.zero(self.algebra)
        return CherednikElement(
            self.algebra,
            {m: q * c for m, q in self.terms.items()},
            _internal=True,
        )

    def __eq__(self, other):
        return (
            isinstance(other, CherednikElement)
            and self.algebra is other.algebra
            and self.terms == other.terms
        )

    def is_zero(self):
        return not self.terms

    # -- multiplication ----------------------------------------------------

    def __mul__(self, other):
        if not isinstance(other, CherednikElement):
            return NotImplemented
        self._compat(other)
        alg = self.algebra
        acc = {}
        for (a1, S1, p1, b1), c1 in self.terms.items():
            for (a2, S2, p2, b2), c2 in other.terms.items():
                coeff12 = c1 * c2
                core = alg.yx_normal(b1, a2)
                for (ac, Sc, pc, bc), cc in core:
                    coeff = coeff12 * cc
                    ax = tuple(
                        u + v for u, v in zip(a1, permute_positions(p1, ac))
                    )
                    p1c = compose(p1, pc)
                    perm = compose(p1c, p2)
                    ytail = permute_positions(inverse(p2), bc)
                    yexp = tuple(u + v for u, v in zip(ytail, b2))
                    slots_mid = alg.slot_mul(S1, _perm_on_slots(p1, Sc))
                    for slots_a, qa in slots_mid:
                        for slots_b, qb in alg.slot_mul(
                            slots_a, _perm_on_slots(p1c, S2)
                        ):
                            mono = (ax, slots_b, perm, yexp)
                            qab = qa * qb
                            q = coeff if qab == 1 else coeff * qab
                            s = acc.get(mono)
                            s = q if s is None else s + q
                            if s:
                                acc[mono] = s
                            else:
                                acc.pop(mono, None)
        return CherednikElement(alg, acc, _internal=True)

    def commutator(self, other):
        return self * other - other * self

    def __pow__(self, p: int):
        if p < 0:
            raise ValueError("negative power")
        out = CherednikElement.one(self.algebra)
        for _ in range(p):
            out = out * self
        return out

    # -- degrees -----------------------------------------------------------

    def bidegree(self):
        """(horizontal, vertical) degree; the permutation part is ignored
        when counting inactive sites."""
        if not self.terms:
            raise ZeroElement("bidegree of the zero element is undefined")
        h_max = 0
        v_max = 0
        for (a, slots, _p, b) in self.terms:
            occupied = {site for (site, _x, _y) in slots}
            active = sum(
                1
                for i in range(self.algebra.n)
                if a[i] or b[i] or (i + 1) in occupied
            )
            h_max = max(h_max, active)
            v_max = max(v_max, sum(a) + sum(b))
        return (h_max, v_max)

    def v_degree(self):
        if not self.terms:
            return 0
        return max(sum(a) + sum(b) for (a, _s, _p, b) in self.terms)

    # -- serialization -----------------------------------------------------

    def to_obj(self):
        entries = []
        for mono in sorted(self.terms):
            a, slots, perm, b = mono
            entries.append(
                {
                    "xExp": list(a),
                    "slots": [list(s) for s in slots],
                    "perm": list(perm),
                    "yExp": list(b),
                    "coeff": str(self.terms[mono]),
                }
            )
        return {
            "format": "cherednik-element/1",
            "n": self.algebra.n,
            "r": self.algebra.r,
            "terms": entries,
        }

    @classmethod
    def from_obj(cls, obj, algebra=None):
        if obj.get("format") != "cherednik-element/1":
            raise ValueError("unknown element format: %r" % obj.get("format"))
        if algebra is None:
            algebra = get_algebra(int(obj["n"]), int(obj["r"]))
        if (algebra.n, algebra.r) != (int(obj["n"]), int(obj["r"])):
            raise ParamMismatch("element is for (n=%s, r=%s)" % (obj["n"], obj["r"]))
        terms = {}
        for entry in obj["terms"]:
            mono = (
                tuple(entry["xExp"]),
                tuple(tuple(s) for s in entry["slots"]),
                tuple(entry["perm"]),
                tuple(entry["yExp"]),
            )
            terms[mono] = ParamPoly.parse(entry["coeff"])
        return cls(algebra, terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for mono in sorted(self.terms):
            a, slots, perm, b = mono
            factors = []
            for i, e in enumerate(a):
                if e:
                    factors.append("x%d" % (i + 1) + ("^%d" % e if e > 1 else ""))
            for site, al, be in slots:
                factors.append("(E%d%d)_%d" % (al, be, site))
            if perm != self.algebra.id_perm:
                factors.append("s" + perm_to_str(perm))
            for i, e in enumerate(b):
                if e:
                    factors.append("y%d" % (i + 1) + ("^%d" % e if e > 1 else ""))
            body = "*".join(factors) if factors else "1"
            bits.append("(%s)*%s" % (self.terms[mono], body))
        return " + ".join(bits)


# ---------------------------------------------------------------------------
# PBW monomial enumeration (for the flatness dimension count)
# ---------------------------------------------------------------------------

def _compositions_at_most(n_vars: int, d: int):
    """All tuples of n_vars non-negative ints with sum <= d."""
    if n_vars == 0:
        yield ()
        return
    for first in range(d + 1):
        for rest in _compositions_at_most(n_vars - 1, d - first):
            yield (first,) + rest


def enumerate_pbw_monomials(n: int, r: int, d: int):
    """All PBW monomials with total x,y degree <= d."""
    import itertools

    labels = [None] + [
        (a, b) for a in range(1, r + 1) for b in range(1, r + 1) if (a, b) != (r, r)
    ]
    perms = list(all_permutations(n))
    for ab in _compositions_at_most(2 * n, d):
        a, b = ab[:n], ab[n:]
        for slot_choice in itertools.product(labels, repeat=n):
            slots = tuple(
                (site + 1, lab[0], lab[1])
                for site, lab in enumerate(slot_choice)
                if lab is not None
            )
            for p in perms:
                yield (a, slots, p, b)


def classical_dimension(n: int, r: int, d: int) -> int:
    """dim of k[x,y] (x) k[S_n] (x) End(k^r)^(x)n truncated at degree d."""
    import math

    return math.comb(2 * n + d, 2 * n) * math.factorial(n) * (r * r) ** n
