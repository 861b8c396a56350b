"""Finite tensor modules over the rank-1 inner algebra.

V_l is the tensor product of the rank-1 algebra at flipped parameters
(-t, -k) with l copies of C^r, balanced over C[S_l]:

    V_l  =  H_{-t,-k}(l, 1) (x)_{C[S_l]} (C^r)^(x) l.

The full H_{t,k}(l, r) acts on the *plain* tensor product by

    x_i: m (x) v -> m x_i (x) v        y_i: m (x) v -> m y_i (x) v
    (g)_i: m (x) v -> m (x) (g)_i v    s_ij: m (x) v -> m s_ij (x) sigma_ij v

(right multiplication on the inner factor - the source of the parameter
flip), and only its spherical corner descends to the balanced quotient.
A ``VlVector`` stores the canonical representative of a quotient class:
every monomial of the inner factor carries the trivial permutation, any
permutation produced by the engine being pushed through the balancing
relation m sigma (x) v = m (x) sigma v into the tensor indices.

Relation checks therefore run on the plain tensor product with raw
(permutation-carrying) terms and no canonicalization; the public
operations canonicalize exactly once, at the end.  The public ``s_ij``
operation is the simultaneous relabeling of x-exponents, y-exponents and
tensor slots - the action the balancing relation induces on canonical
representatives (on them, the raw formula composed with canonicalization
is the identity map).
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from .cherednik import ParamMismatch, get_algebra, matrix_components
from .guay import VerificationReport, mat_unit
from .interp import project_to_finite_rank
from .rings import ParamPoly
from .spherical import TIndex, SphericalElement
from .symgroup import (
    all_permutations,
    compose,
    identity_perm,
    permute_positions,
    transposition,
)

__all__ = [
    "TruncationOverflow",
    "NotSymmetric",
    "VlVector",
    "act_h_generator",
    "act_guay_generator",
    "act_spherical",
    "symmetrize",
    "symmetric_spanning_vectors",
    "omega_free_generators",
    "skipped_generators",
    "guay_generator_image",
    "verify_module_relations",
    "verify_commuting_square",
]


class TruncationOverflow(Exception):
    """A result leaves the operational degree bound of the vector."""


class NotSymmetric(Exception):
    """act_spherical needs an input fixed by all simultaneous relabelings."""


def _inner_algebra(l):
    """The rank-1 engine at flipped parameters (-t, -k)."""
    return get_algebra(
        l, 1, -ParamPoly.var_t(), -ParamPoly.var_k()
    )


# ---------------------------------------------------------------------------
# Raw operations on the plain tensor product
#
# Raw terms are keyed (xexp, perm, yexp, idx) with idx in {1..r}^l; the
# permutation part is whatever the engine produced.
# ---------------------------------------------------------------------------

def _raw_add(acc, key, c):
    s = acc.get(key)
    s = c if s is None else s + c
    if s:
        acc[key] = s
    else:
        acc.pop(key, None)


def _raw_mul_x(alg, raw, i):
    """Right-multiply the inner factor by x_i (engine rewrite of y^b x_i)."""
    ei = tuple(1 if m == i - 1 else 0 for m in range(alg.n))
    out = {}
    for (a, p, b, idx), c in raw.items():
        for (ac, slots, pc, bc), cc in alg.yx_normal(b, ei):
            assert not slots  # rank 1 has no matrix slots
            na = tuple(u + v for u, v in zip(a, permute_positions(p, ac)))
            _raw_add(out, (na, compose(p, pc), bc, idx), c * cc)
    return out


def _raw_mul_y(raw, i):
    out = {}
    for (a, p, b, idx), c in raw.items():
        nb = tuple(v + 1 if m == i - 1 else v for m, v in enumerate(b))
        _raw_add(out, (a, p, nb, idx), c)
    return out


def _raw_mul_s(l, raw, i, j):
    """Right-multiply the inner factor by s_ij."""
    s = transposition(l, i, j)
    out = {}
    for (a, p, b, idx), c in raw.items():
        _raw_add(out, (a, compose(p, s), permute_positions(s, b), idx), c)
    return out


def _raw_slot(raw, g, i):
    """Apply the r x r matrix g to tensor factor i."""
    out = {}
    for (a, p, b, idx), c in raw.items():
        col = idx[i - 1]
        for al in range(len(g)):
            q = g[al][col - 1]
            if not q:
                continue
            nidx = tuple(al + 1 if m == i - 1 else v for m, v in enumerate(idx))
            _raw_add(out, (a, p, b, nidx), c * q)
    return out


def _raw_sigma(raw, i, j):
    """Swap the vectors in tensor factors i and j."""
    out = {}
    for (a, p, b, idx), c in raw.items():
        nidx = list(idx)
        nidx[i - 1], nidx[j - 1] = nidx[j - 1], nidx[i - 1]
        _raw_add(out, (a, p, b, tuple(nidx)), c)
    return out


def _raw_s_op(l, raw, i, j):
    """The full s_ij action: m s_ij (x) sigma_ij v."""
    return _raw_mul_s(l, _raw_sigma(raw, i, j), i, j)


def _canonicalize(raw):
    """Push permutations through the balancing relation into the indices."""
    out = {}
    for (a, p, b, idx), c in raw.items():
        key = (a, permute_positions(p, b), permute_positions(p, idx))
        _raw_add(out, key, c)
    return out


def _lift(terms, l):
    ident = identity_perm(l)
    return {(a, ident, b, idx): c for (a, b, idx), c in terms.items()}


# ---------------------------------------------------------------------------
# Public vectors
# ---------------------------------------------------------------------------

class VlVector:
    """Canonical representative of a V_l class, truncated at degree D."""

    __slots__ = ("l", "r", "D", "terms")

    def __init__(self, l, r, D, terms=None, _internal=False):
        self.l = l
        self.r = r
        self.D = D
        if _internal:
            self.terms = terms
            return
        clean = {}
        for (a, b, idx), c in (terms or {}).items():
            a, b, idx = tuple(a), tuple(b), tuple(idx)
            if len(a) != l or len(b) != l or len(idx) != l:
                raise ValueError("term shape does not match l=%d" % l)
            if any(not (1 <= v <= r) for v in idx):
                raise ValueError("tensor index outside 1..%d: %s" % (r, idx))
            if sum(a) + sum(b) > D:
                raise TruncationOverflow(
                    "degree %d exceeds bound %d" % (sum(a) + sum(b), D)
                )
            if not isinstance(c, ParamPoly):
                c = ParamPoly.const(c)
            if c:
                clean[(a, b, idx)] = c
        self.terms = clean

    @classmethod
    def zero(cls, l, r, D):
        return cls(l, r, D, {}, _internal=True)

    @classmethod
    def basis(cls, l, r, D, xexp, yexp, idx):
        return cls(l, r, D, {(tuple(xexp), tuple(yexp), tuple(idx)): 1})

    def _compat(self, other):
        if (self.l, self.r) != (other.l, other.r):
            raise ParamMismatch(
                "vectors over different modules: (l=%d, r=%d) vs (l=%d, r=%d)"
                % (self.l, self.r, other.l, other.r)
            )

    def __add__(self, other):
        if not isinstance(other, VlVector):
            return NotImplemented
        self._compat(other)
        terms = dict(self.terms)
        for key, c in other.terms.items():
            _raw_add(terms, key, c)
        return VlVector(
            self.l, self.r, max(self.D, other.D), terms, _internal=True
        )

    def __sub__(self, other):
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        if not isinstance(c, ParamPoly):
            c = ParamPoly.const(c)
        if not c:
            return VlVector.zero(self.l, self.r, self.D)
        return VlVector(
            self.l,
            self.r,
            self.D,
            {k: q * c for k, q in self.terms.items()},
            _internal=True,
        )

    def __eq__(self, other):
        return (
            isinstance(other, VlVector)
            and (self.l, self.r) == (other.l, other.r)
            and self.terms == other.terms
        )

    def is_zero(self):
        return not self.terms

    def degree(self):
        if not self.terms:
            return 0
        return max(sum(a) + sum(b) for (a, b, _idx) in self.terms)

    def to_obj(self):
        terms = []
        for (a, b, idx) in sorted(self.terms):
            terms.append(
                {
                    "x": list(a),
                    "y": list(b),
                    "idx": list(idx),
                    "coeff": str(self.terms[(a, b, idx)]),
                }
            )
        return {
            "format": "vl-vector/1",
            "l": self.l,
            "r": self.r,
            "maxDegree": self.D,
            "terms": terms,
        }

    @classmethod
    def from_obj(cls, obj):
        if obj.get("format") != "vl-vector/1":
            raise ValueError("unknown vector format: %r" % obj.get("format"))
        terms = {}
        for entry in obj["terms"]:
            key = (tuple(entry["x"]), tuple(entry["y"]), tuple(entry["idx"]))
            terms[key] = ParamPoly.parse(entry["coeff"])
        return cls(int(obj["l"]), int(obj["r"]), int(obj["maxDegree"]), terms)

    def __repr__(self):
        return "VlVector(l=%d, r=%d, D=%d, %d terms)" % (
            self.l,
            self.r,
            self.D,
            len(self.terms),
        )


def _finish(l, r, D, raw):
    terms = _canonicalize(raw)
    for (a, b, _idx) in terms:
        if sum(a) + sum(b) > D:
            raise TruncationOverflow(
                "action result has degree %d, bound is %d" % (sum(a) + sum(b), D)
            )
    return VlVector(l, r, D, terms, _internal=True)


def _relabel(v, sigma):
    """Simultaneous relabeling of x-exponents, y-exponents and slots."""
    terms = {}
    for (a, b, idx), c in v.terms.items():
        key = (
            permute_positions(sigma, a),
            permute_positions(sigma, b),
            permute_positions(sigma, idx),
        )
        _raw_add(terms, key, c)
    return VlVector(v.l, v.r, v.D, terms, _internal=True)


def act_h_generator(gen, v: VlVector) -> VlVector:
    """Action of one algebra generator on a canonical representative.

    gen is ("x", i), ("y", i), ("unit", g, i) with g an r x r matrix (or a
    label pair), or ("s", i, j).  The x/y/unit cases apply the module
    formulas and re-canonicalize; the s case is the induced simultaneous
    relabeling of canonical representatives.
    """
    kind = gen[0]
    if kind == "x":
        _site_check(v.l, gen[1])
        return _finish(
            v.l, v.r, v.D, _raw_mul_x(_inner_algebra(v.l), _lift(v.terms, v.l), gen[1])
        )
    if kind == "y":
        _site_check(v.l, gen[1])
        return _finish(v.l, v.r, v.D, _raw_mul_y(_lift(v.terms, v.l), gen[1]))
    if kind == "unit":
        g, i = gen[1], gen[2]
        _site_check(v.l, i)
        comps = matrix_components(g, v.r)
        mat = [[Fraction(0)] * v.r for _ in range(v.r)]
        for lab, c in comps.items():
            if lab == "id":
                for m in range(v.r):
                    mat[m][m] += c
            else:
                mat[lab[0] - 1][lab[1] - 1] += c
        return _finish(v.l, v.r, v.D, _raw_slot(_lift(v.terms, v.l), mat, i))
    if kind == "s":
        i, j = gen[1], gen[2]
        _site_check(v.l, i)
        _site_check(v.l, j)
        return _relabel(v, transposition(v.l, i, j))
    raise ValueError("unknown generator %r" % (gen,))


def _site_check(l, i):
    if not (1 <= i <= l):
        raise ValueError("site %d outside 1..%d" % (i, l))


def symmetrize(v: VlVector) -> VlVector:
    """Average of all simultaneous relabelings."""
    total = VlVector.zero(v.l, v.r, v.D)
    for sigma in all_permutations(v.l):
        total = total + _relabel(v, tuple(sigma))
    return total.scale(Fraction(1, math.factorial(v.l)))


def _is_symmetric(v: VlVector) -> bool:
    return all(
        _relabel(v, transposition(v.l, i, i + 1)) == v for i in range(1, v.l)
    )


def symmetric_spanning_vectors(l, r, D):
    """Orbit averages spanning the symmetric vectors of degree <= D."""
    seen = set()
    out = []
    exps = [
        e
        for e in itertools.product(range(D + 1), repeat=2 * l)
        if sum(e) <= D
    ]
    perms = [tuple(p) for p in all_permutations(l)]
    for e in exps:
        a, b = e[:l], e[l:]
        for idx in itertools.product(range(1, r + 1), repeat=l):
            orbit_key = min(
                (
                    permute_positions(p, a),
                    permute_positions(p, b),
                    permute_positions(p, idx),
                )
                for p in perms
            )
            if orbit_key in seen:
                continue
            seen.add(orbit_key)
            out.append(symmetrize(VlVector(l, r, D, {(a, b, idx): 1})))
    return out


# ---------------------------------------------------------------------------
# The DDCA generator actions and their spherical counterparts
# ---------------------------------------------------------------------------

def omega_free_generators(r):
    """The explicit generator tuples whose module action needs no omega_0:
    ("X+", i, p), ("X-", i, p), ("H", i, p) for i in 1..r-1, p in {0, 1},
    and ("X0+",)."""
    gens = []
    for i in range(1, r):
        for p in (0, 1):
            gens.append(("X+", i, p))
            gens.append(("X-", i, p))
            gens.append(("H", i, p))
    gens.append(("X0+",))
    return gens


def skipped_generators():
    """Generators whose action involves omega_0 and stays out of scope."""
    return [
        ("X01++", "requires omega_0, out of scope"),
        ("X01+-", "requires omega_0, out of scope"),
    ]


def _gen_matrix(gen, r):
    kind = gen[0]
    if kind == "X+":
        i = gen[1]
        return mat_unit(r, i, i + 1)
    if kind == "X-":
        i = gen[1]
        return mat_unit(r, i + 1, i)
    if kind == "H":
        i = gen[1]
        h = [[Fraction(0)] * r for _ in range(r)]
        h[i - 1][i - 1] = Fraction(1)
        h[i][i] = Fraction(-1)
        return tuple(tuple(row) for row in h)
    if kind == "X0+":
        return mat_unit(r, r, 1)
    raise ValueError("unknown generator %r" % (gen,))


def act_guay_generator(gen, v: VlVector) -> VlVector:
    """Explicit module action: sum over sites of m y_j^p (or m x_j for the
    lowering generator) tensored with the slot matrix action."""
    kind = gen[0]
    if kind not in ("X+", "X-", "H", "X0+"):
        raise ValueError("unknown generator %r" % (gen,))
    if kind != "X0+" and not (1 <= gen[1] <= v.r - 1):
        raise ValueError("generator index %d outside 1..%d" % (gen[1], v.r - 1))
    g = _gen_matrix(gen, v.r)
    alg = _inner_algebra(v.l)
    lifted = _lift(v.terms, v.l)
    total = {}
    for j in range(1, v.l + 1):
        cur = _raw_slot(lifted, g, j)
        if kind == "X0+":
            cur = _raw_mul_x(alg, cur, j)
        elif gen[2] == 1:
            cur = _raw_mul_y(cur, j)
        for key, c in cur.items():
            _raw_add(total, key, c)
    return _finish(v.l, v.r, v.D, total)


def act_spherical(b: SphericalElement, v: VlVector) -> VlVector:
    """Restriction of the module structure to the spherical corner.

    b must live over the (l, r) algebra at symbolic (t, k); v must be
    symmetric.  The identity-block coordinates of b act as the raw word
    y-part first, then matrix slots, then x-part; one canonicalization at
    the end and the factor l! (absorbing the averaging normalization of
    the corner idempotent) give the class of the result.
    """
    alg = b.algebra
    if alg.n != v.l or alg.r != v.r:
        raise ParamMismatch(
            "spherical element over (n=%d, r=%d) cannot act on V_%d at r=%d"
            % (alg.n, alg.r, v.l, v.r)
        )
    if not _is_symmetric(v):
        raise NotSymmetric("input vector is not relabeling-invariant")
    inner = _inner_algebra(v.l)
    lifted = _lift(v.terms, v.l)
    total = {}
    for (A, S, B), coeff in b.coords.items():
        cur = lifted
        for i, e in enumerate(B):
            for _ in range(e):
                cur = _raw_mul_y(cur, i + 1)
        for (site, al, be) in S:
            cur = _raw_slot(cur, mat_unit(v.r, al, be), site)
        for i, e in enumerate(A):
            for _ in range(e):
                cur = _raw_mul_x(inner, cur, i + 1)
        for key, c in cur.items():
            _raw_add(total, key, c * coeff)
    scaled = {k: c * math.factorial(v.l) for k, c in total.items()}
    return _finish(v.l, v.r, v.D, scaled)


def guay_generator_image(gen, r):
    """The T-basis expression (index -> coefficient in Q[t,k,K]) of the
    generator's image in the rank-interpolated spherical algebra."""
    kind = gen[0]
    if kind == "X0+":
        p, q = 1, 0
    else:
        p, q = 0, gen[2]
    g = _gen_matrix(gen, r)
    expr = {}
    for lab, c in matrix_components(g, r).items():
        coeff = ParamPoly.const(c)
        if lab == "id":
            if (p, q) == (0, 0):
                m = TIndex([])
                coeff = coeff * ParamPoly.var_K()
            else:
                m = TIndex([(p, q, "id")])
        else:
            m = TIndex([(p, q, lab)])
        expr[m] = expr.get(m, ParamPoly.zero()) + coeff
    return {m: c for m, c in expr.items() if c}


# ---------------------------------------------------------------------------
# Verification suites
# ---------------------------------------------------------------------------

def verify_module_relations(l, r, D=2):
    """All defining relations of H_{t,k}(l, r), checked as raw operator
    identities on the plain tensor product against basis vectors of degree
    <= D (enough: the operators commute with left multiplication on the
    inner factor, so trivial-permutation vectors are a faithful probe)."""
    alg = _inner_algebra(l)
    tvar = ParamPoly.var_t()
    kvar = ParamPoly.var_k()
    ident = identity_perm(l)

    def basis_raw():
        for e in itertools.product(range(D + 1), repeat=2 * l):
            if sum(e) > D:
                continue
            for idx in itertools.product(range(1, r + 1), repeat=l):
                yield {(e[:l], ident, e[l:], idx): ParamPoly.one()}

    def scaled(raw, c):
        return {k: q * c for k, q in raw.items()}

    def add_into(acc, raw, c=1):
        for k, q in raw.items():
            _raw_add(acc, k, q * c if c != 1 else q)

    def raw_eq(r1, r2):
        return r1 == r2

    def op_x(i):
        return lambda raw: _raw_mul_x(alg, raw, i)

    def op_y(i):
        return lambda raw: _raw_mul_y(raw, i)

    def op_unit(a, b, i):
        return lambda raw: _raw_slot(raw, mat_unit(r, a, b), i)

    def op_s(i, j):
        return lambda raw: _raw_s_op(l, raw, i, j)

    def op_sigma(i, j):
        return lambda raw: _raw_sigma(raw, i, j)

    def commute_check(op1, op2, rhs_fn):
        for v in basis_raw():
            lhs = {}
            add_into(lhs, op1(op2(v)))
            add_into(lhs, op2(op1(v)), -1)
            if not raw_eq(lhs, rhs_fn(v)):
                return False, lhs, rhs_fn(v)
        return True, {}, {}

    failures = []
    names = []

    def record(name, ok):
        names.append((name, ok))
        if not ok:
            failures.append(name)

    # family 1: polynomial parts commute among themselves
    ok = True
    for i in range(1, l + 1):
        for j in range(1, l + 1):
            ok = ok and commute_check(op_x(i), op_x(j), lambda v: {})[0]
            ok = ok and commute_check(op_y(i), op_y(j), lambda v: {})[0]
    record("xx-yy-commute", ok)

    # family 2: the deformed [y_i, x_j]
    ok = True
    for i in range(1, l + 1):
        for j in range(1, l + 1):
            if i == j:
                def rhs(v, i=i):
                    out = {}
                    add_into(out, scaled(v, tvar))
                    for m in range(1, l + 1):
                        if m == i:
                            continue
                        add_into(out, op_s(i, m)(op_sigma(i, m)(v)), -kvar)
                    return out
            else:
                def rhs(v, i=i, j=j):
                    return scaled(op_s(i, j)(op_sigma(i, j)(v)), kvar)
            ok = ok and commute_check(op_y(i), op_x(j), rhs)[0]
    record("deformed-yx", ok)

    # family 3: transpositions conjugate sites
    ok = True
    for (i, j) in itertools.permutations(range(1, l + 1), 2):
        for gen, moved in (
            (op_x(i), op_x(j)),
            (op_y(i), op_y(j)),
            (op_unit(1, r, i), op_unit(1, r, j)),
        ):
            for v in basis_raw():
                lhs = op_s(i, j)(gen(v))
                rhs = moved(op_s(i, j)(v))
                if not raw_eq(lhs, rhs):
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            break
    record("s-conjugation", ok)

    # family 4: matrix slots (same-site composition, cross-site and
    # polynomial commutation)
    ok = True
    units = [(a, b) for a in range(1, r + 1) for b in range(1, r + 1)]
    for v in basis_raw():
        for (a, b) in units:
            for (c, d) in units:
                lhs = op_unit(a, b, 1)(op_unit(c, d, 1)(v))
                rhs = scaled(op_unit(a, d, 1)(v), 1) if b == c else {}
                if not raw_eq(lhs, rhs):
                    ok = False
                if l >= 2:
                    lhs2 = op_unit(a, b, 1)(op_unit(c, d, 2)(v))
                    rhs2 = op_unit(c, d, 2)(op_unit(a, b, 1)(v))
                    if not raw_eq(lhs2, rhs2):
                        ok = False
        break  # slot relations do not involve the inner factor
    for v in basis_raw():
        for (a, b) in units[: min(4, len(units))]:
            for i in range(1, l + 1):
                for j in range(1, l + 1):
                    lhs = op_x(i)(op_unit(a, b, j)(v))
                    rhs = op_unit(a, b, j)(op_x(i)(v))
                    if not raw_eq(lhs, rhs):
                        ok = False
                    lhs = op_y(i)(op_unit(a, b, j)(v))
                    rhs = op_unit(a, b, j)(op_y(i)(v))
                    if not raw_eq(lhs, rhs):
                        ok = False
    record("slot-relations", ok)

    # family 5: the symmetric group itself
    ok = True
    for (i, j) in itertools.combinations(range(1, l + 1), 2):
        for v in basis_raw():
            if not raw_eq(op_s(i, j)(op_s(i, j)(v)), v):
                ok = False
                break
        if not ok:
            break
    record("s-involution", ok)

    zero = VlVector.zero(l, r, D)
    rep = VerificationReport.merge(
        "module-relations",
        [
            VerificationReport(name, zero, zero if passed else _nonzero_marker(l, r, D))
            for name, passed in names
        ],
        params={"l": l, "r": r, "maxDegree": D},
    )
    return rep


def _nonzero_marker(l, r, D):
    return VlVector(l, r, D, {((0,) * l, (0,) * l, (1,) * l): 1})


def verify_commuting_square(l, r, D):
    """act_guay_generator vs the spherical action of the projected image,
    on every symmetric orbit average of degree <= D.

    Work vectors carry operational bound D + 1 (the degree-raising
    generators add one letter).  Returns a merged report with one part per
    generator plus the declared omega_0 exclusions in params.
    """
    alg = get_algebra(l, r)
    span = [
        VlVector(l, r, D + 1, v.terms, _internal=True)
        for v in symmetric_spanning_vectors(l, r, D)
    ]
    reports = []
    for gen in omega_free_generators(r):
        image = project_to_finite_rank(alg, guay_generator_image(gen, r))
        ok = True
        diff = VlVector.zero(l, r, D + 1)
        for v in span:
            lhs = act_guay_generator(gen, v)
            rhs = act_spherical(image, v)
            if lhs != rhs:
                ok = False
                diff = lhs - rhs
                break
        name = "-".join(str(part) for part in gen)
        zero = VlVector.zero(l, r, D + 1)
        reports.append(VerificationReport(name, diff if not ok else zero, zero))
    merged = VerificationReport.merge(
        "commuting-square", reports, params={"l": l, "r": r, "maxDegree": D}
    )
    merged.params["skipped"] = [
        {"generator": name, "status": status} for name, status in skipped_generators()
    ]
    return merged
