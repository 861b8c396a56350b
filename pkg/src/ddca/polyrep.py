"""Faithful polynomial representation: the independent oracle for the engine.

The algebra acts on k[x_1..x_n] (x) (k^r)^(x)n by

    x_i      : multiplication
    s_ij     : swap x_i, x_j and the two tensor slots
    (g)_i    : g on tensor slot i
    y_i      : t d/dx_i - k sum_{j != i} (x_i - x_j)^{-1} (1 - s_ij^x)

where the divided difference acts on the polynomial factor only and is
always exactly divisible (it is computed as the closed-form geometric sum,
never by polynomial division).  This module deliberately shares no code with
the rewriting engine: agreement of the two is a real check.

Vectors are dicts keyed by (exponent tuple, tensor index tuple) with
ParamPoly coefficients; tensor indices take values in 1..r.
"""

from __future__ import annotations

from fractions import Fraction
import itertools

from .rings import ParamPoly
from .cherednik import IndexOutOfRange, ParamMismatch


class PolyTensorVector:
    """Element of k[x] (x) (k^r)^(x)n with ParamPoly coefficients."""

    __slots__ = ("n", "r", "terms")

    def __init__(self, n: int, r: int, terms=None):
        self.n = n
        self.r = r
        clean = {}
        for (exp, idx), c in (terms or {}).items():
            if not isinstance(c, ParamPoly):
                c = ParamPoly.const(c)
            if c:
                clean[(tuple(exp), tuple(idx))] = c
        self.terms = clean

    @classmethod
    def basis(cls, n: int, r: int, exp, idx):
        exp, idx = tuple(exp), tuple(idx)
        if len(exp) != n or len(idx) != n:
            raise IndexOutOfRange("vector key length != n")
        if any(not (1 <= v <= r) for v in idx):
            raise IndexOutOfRange("tensor index outside 1..%d: %s" % (r, idx))
        return cls(n, r, {(exp, idx): ParamPoly.one()})

    def _compat(self, other):
        if (self.n, self.r) != (other.n, other.r):
            raise ParamMismatch("mixed vector spaces")

    def __add__(self, other):
        self._compat(other)
        terms = dict(self.terms)
        for key, c in other.terms.items():
            s = terms.get(key)
            s = c if s is None else s + c
            if s:
                terms[key] = s
            else:
                terms.pop(key, None)
        out = PolyTensorVector(self.n, self.r)
        out.terms = terms
        return out

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        if not isinstance(c, ParamPoly):
            c = ParamPoly.const(c)
        out = PolyTensorVector(self.n, self.r)
        if c:
            out.terms = {k: q * c for k, q in self.terms.items()}
        return out

    def __eq__(self, other):
        return (
            isinstance(other, PolyTensorVector)
            and (self.n, self.r) == (other.n, other.r)
            and self.terms == other.terms
        )

    def is_zero(self):
        return not self.terms

    def to_obj(self):
        return {
            "format": "poly-tensor-vector/1",
            "n": self.n,
            "r": self.r,
            "terms": [
                [list(exp), list(idx), str(self.terms[(exp, idx)])]
                for (exp, idx) in sorted(self.terms)
            ],
        }

    @classmethod
    def from_obj(cls, obj):
        if obj.get("format") != "poly-tensor-vector/1":
            raise ValueError("unknown vector format: %r" % obj.get("format"))
        n, r = int(obj["n"]), int(obj["r"])
        out = cls(n, r)
        for exp, idx, coeff in obj["terms"]:
            out.terms[(tuple(exp), tuple(idx))] = ParamPoly.parse(coeff)
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for exp, idx in sorted(self.terms):
            mono = "*".join(
                "x%d" % (i + 1) + ("^%d" % e if e > 1 else "")
                for i, e in enumerate(exp)
                if e
            )
            bits.append(
                "(%s)*%s e[%s]"
                % (self.terms[(exp, idx)], mono + "*" if mono else "", ",".join(map(str, idx)))
            )
        return " + ".join(bits)


# ---------------------------------------------------------------------------
# generator actions
# ---------------------------------------------------------------------------

def _site_check(i, n):
    if not (1 <= i <= n):
        raise IndexOutOfRange("site %d outside 1..%d" % (i, n))


def act_x(i: int, v: PolyTensorVector) -> PolyTensorVector:
    _site_check(i, v.n)
    out = PolyTensorVector(v.n, v.r)
    for (exp, idx), c in v.terms.items():
        exp2 = tuple(e + 1 if m == i - 1 else e for m, e in enumerate(exp))
        out.terms[(exp2, idx)] = c
    return out


def act_perm(sigma, v: PolyTensorVector) -> PolyTensorVector:
    """Simultaneously permute x-variables and tensor slots: position i of
    both the exponent vector and the index tuple moves to sigma(i)."""
    if len(sigma) != v.n:
        raise IndexOutOfRange("permutation is not on %d points" % v.n)
    out = PolyTensorVector(v.n, v.r)
    for (exp, idx), c in v.terms.items():
        exp2 = [0] * v.n
        idx2 = [0] * v.n
        for m in range(v.n):
            exp2[sigma[m] - 1] = exp[m]
            idx2[sigma[m] - 1] = idx[m]
        key = (tuple(exp2), tuple(idx2))
        s = out.terms.get(key)
        s = c if s is None else s + c
        if s:
            out.terms[key] = s
        else:
            out.terms.pop(key, None)
    return out


def act_unit(g, i: int, v: PolyTensorVector) -> PolyTensorVector:
    """(g)_i for g a label (a, b), 'id', or an r x r matrix: e_c -> sum_a g[a][c] e_a."""
    _site_check(i, v.n)
    r = v.r
    out = PolyTensorVector(v.n, v.r)
    if g == "id" or g is None:
        out.terms = dict(v.terms)
        return out
    if (
        isinstance(g, (tuple, list))
        and len(g) == 2
        and all(isinstance(x, int) for x in g)
    ):
        a, b = g
        if not (1 <= a <= r and 1 <= b <= r):
            raise IndexOutOfRange("label E_%d,%d outside rank %d" % (a, b, r))
        for (exp, idx), c in v.terms.items():
            if idx[i - 1] != b:
                continue
            idx2 = tuple(a if m == i - 1 else x for m, x in enumerate(idx))
            key = (exp, idx2)
            s = out.terms.get(key)
            s = c if s is None else s + c
            if s:
                out.terms[key] = s
            else:
                out.terms.pop(key, None)
        return out
    rows = [list(map(Fraction, row)) for row in g]
    for (exp, idx), c in v.terms.items():
        col = idx[i - 1]
        for a in range(1, r + 1):
            q = rows[a - 1][col - 1]
            if not q:
                continue
            idx2 = tuple(a if m == i - 1 else x for m, x in enumerate(idx))
            key = (exp, idx2)
            s = out.terms.get(key)
            add = c * q
            s = add if s is None else s + add
            if s:
                out.terms[key] = s
            else:
                out.terms.pop(key, None)
    return out


def _divided_difference(exp, i, j):
    """(1 - s_ij)/(x_i - x_j) applied to the monomial x^exp: list of exponent
    tuples with +/-1 coefficients folded in (each entry is (exp', sign))."""
    p, q = exp[i], exp[j]
    if p == q:
        return []
    out = []
    if p > q:
        # x_i^p x_j^q - x_i^q x_j^p = (x_i - x_j) * sum_{u+v=p+q-1, u>=q, v>=q... }
        for s in range(p - q):
            e = list(exp)
            e[i] = p - 1 - s
            e[j] = q + s
            out.append((tuple(e), 1))
    else:
        for s in range(q - p):
            e = list(exp)
            e[i] = p + s
            e[j] = q - 1 - s
            out.append((tuple(e), -1))
    return out


def act_y(i: int, v: PolyTensorVector) -> PolyTensorVector:
    """Dunkl operator t d/dx_i - k sum_{j != i} (x_i-x_j)^{-1}(1 - s_ij^x).

    The reflection inside the divided difference acts on the polynomial
    factor only; the result is always a polynomial vector.
    """
    _site_check(i, v.n)
    n = v.n
    tpar, kpar = ParamPoly.var_t(), ParamPoly.var_k()
    out = PolyTensorVector(v.n, v.r)

    def put(key, c):
        s = out.terms.get(key)
        s = c if s is None else s + c
        if s:
            out.terms[key] = s
        else:
            out.terms.pop(key, None)

    for (exp, idx), c in v.terms.items():
        e = exp[i - 1]
        if e:
            exp2 = tuple(x - 1 if m == i - 1 else x for m, x in enumerate(exp))
            put((exp2, idx), c * (tpar * e))
        for j in range(1, n + 1):
            if j == i:
                continue
            for exp2, sign in _divided_difference(exp, i - 1, j - 1):
                put((exp2, idx), c * (kpar * (-sign)))
    return out


def act_element(elem, v: PolyTensorVector) -> PolyTensorVector:
    """Apply a normal-form element right-to-left: y's, then the permutation,
    then the matrix slots, then x's."""
    alg = elem.algebra
    if (alg.n, alg.r) != (v.n, v.r):
        raise ParamMismatch("element is over (n=%d, r=%d)" % (alg.n, alg.r))
    if not (alg.tpar == ParamPoly.var_t() and alg.kpar == ParamPoly.var_k()):
        raise ParamMismatch("polynomial representation needs the formal (t, k) algebra")
    total = PolyTensorVector(v.n, v.r)
    for (a, slots, perm, b), coeff in elem.terms.items():
        w = v
        for site in range(1, v.n + 1):
            for _ in range(b[site - 1]):
                w = act_y(site, w)
        if perm != alg.id_perm:
            w = act_perm(perm, w)
        for (site, al, be) in slots:
            w = act_unit((al, be), site, w)
        for site in range(1, v.n + 1):
            for _ in range(a[site - 1]):
                w = act_x(site, w)
        total = total + w.scale(coeff)
    return total


def basis_vectors(n: int, r: int, maxdeg: int):
    """All monomial basis vectors of x-degree <= maxdeg."""
    from .cherednik import _compositions_at_most

    for exp in _compositions_at_most(n, maxdeg):
        for idx in itertools.product(range(1, r + 1), repeat=n):
            yield PolyTensorVector.basis(n, r, exp, idx)


def oracle_equal(a, b, maxdeg: int) -> bool:
    """Compare two elements through their action on all basis vectors of
    degree <= maxdeg.  Callers must pass maxdeg >= both v-degrees."""
    need = max(a.v_degree(), b.v_degree())
    if maxdeg < need:
        raise ValueError(
            "oracle sweep degree %d below v-degree %d of the operands" % (maxdeg, need)
        )
    alg = a.algebra
    diff = a - b
    if diff.is_zero():
        return True
    for v in basis_vectors(alg.n, alg.r, maxdeg):
        if not act_element(diff, v).is_zero():
            return False
    return True
