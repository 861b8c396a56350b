"""Deformed double current algebra relations inside the spherical algebra.

The DDCA D_{lambda,beta}(r) is generated by four families z, K(z), Q(z),
P(z) with z running over traceless r x r matrices.  The generator map psi
sends them to the spherical generators

    z -> T_{0,0}(z),  K(z) -> T_{1,0}(z),  Q(z) -> T_{0,1}(z),
    P(z) -> T_{1,1}(z)

with parameters lambda = k and beta = -t/2 - k(r-2)/4.  This module checks,
by exact symbolic computation, that the images satisfy the DDCA's defining
commutation relation between K- and Q-type generators (including its
closed form for disjoint index pairs), the current-algebra relations among
the K(z), and the rank-extraction identity: a specific commutator minus a
quadratic correction collapses to -(t+rk) * T_{0,0}(E_11+E_22), whose
trace part carries the rank with coefficient -2(t+rk)/r.

Everything here returns a ``VerificationReport``; nothing is quotiented or
approximated, so a failed report means the relation genuinely does not
hold for the given parameters.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .cherednik import CherednikElement, get_algebra
from .rings import ParamPoly, interpolate_in_K
from .spherical import SphericalElement, t_gen

__all__ = [
    "NonTraceless",
    "IndexConstraintViolated",
    "GuayGenerator",
    "VerificationReport",
    "mat_unit",
    "mat_commutator",
    "mat_trace",
    "psi",
    "admissible_tuples",
    "verify_main_relation",
    "verify_disjoint_case",
    "verify_sl_current",
    "verify_k_extraction",
    "fit_trace_coefficient",
]


class NonTraceless(Exception):
    """A generator matrix is required to lie in sl_r but has nonzero trace."""


class IndexConstraintViolated(Exception):
    """The (a, b, c, d) tuple falls outside the relation's stated domain."""


# ---------------------------------------------------------------------------
# Small exact-matrix helpers (rows of Fractions)
# ---------------------------------------------------------------------------

def _mat(rows):
    out = tuple(tuple(Fraction(v) for v in row) for row in rows)
    r = len(out)
    if any(len(row) != r for row in out):
        raise ValueError("matrix is not square")
    return out


def mat_unit(r, a, b):
    """The r x r matrix unit E_ab (1-based indices)."""
    if not (1 <= a <= r and 1 <= b <= r):
        raise IndexConstraintViolated("unit (%d, %d) outside 1..%d" % (a, b, r))
    return tuple(
        tuple(Fraction(1 if (i, j) == (a - 1, b - 1) else 0) for j in range(r))
        for i in range(r)
    )


def mat_identity(r):
    return tuple(
        tuple(Fraction(1 if i == j else 0) for j in range(r)) for i in range(r)
    )


def _mat_mul(z1, z2):
    r = len(z1)
    return tuple(
        tuple(sum(z1[i][m] * z2[m][j] for m in range(r)) for j in range(r))
        for i in range(r)
    )


def _mat_sub(z1, z2):
    return tuple(
        tuple(a - b for a, b in zip(row1, row2)) for row1, row2 in zip(z1, z2)
    )


def _mat_scale(z, q):
    return tuple(tuple(v * q for v in row) for row in z)


def mat_commutator(z1, z2):
    return _mat_sub(_mat_mul(z1, z2), _mat_mul(z2, z1))


def mat_trace(z):
    return sum(z[i][i] for i in range(len(z)))


def _is_zero_mat(z):
    return all(not v for row in z for v in row)


def _require_traceless(z, what):
    if mat_trace(z):
        raise NonTraceless("%s has trace %s, expected 0" % (what, mat_trace(z)))


# ---------------------------------------------------------------------------
# Generators and reports
# ---------------------------------------------------------------------------

_KIND_DEGREES = {"Z": (0, 0), "K": (1, 0), "Q": (0, 1), "P": (1, 1)}


class GuayGenerator:
    """One abstract DDCA generator: a kind in {Z, K, Q, P} and z in sl_r."""

    __slots__ = ("kind", "z")

    def __init__(self, kind, z):
        if kind not in _KIND_DEGREES:
            raise ValueError("kind must be one of Z, K, Q, P, got %r" % (kind,))
        z = _mat(z)
        _require_traceless(z, "generator matrix")
        self.kind = kind
        self.z = z

    @property
    def r(self):
        return len(self.z)

    def __repr__(self):
        return "GuayGenerator(%s, r=%d)" % (self.kind, len(self.z))


def psi(g: GuayGenerator, n: int) -> SphericalElement:
    """Image of a DDCA generator in the rank-n spherical algebra."""
    p, q = _KIND_DEGREES[g.kind]
    return t_gen(get_algebra(n, g.r), p, q, g.z)


class VerificationReport:
    """Outcome of one exact identity check: lhs, rhs, and their difference.

    ``passed`` is exactly ``difference.is_zero()``.  Multi-identity checks
    carry a ``parts`` list of (name, passed) pairs; their top-level lhs/rhs
    and difference are those of the first failing part (or the first part
    when all pass).
    """

    __slots__ = ("identity_name", "params", "lhs", "rhs", "passed", "difference", "parts")

    def __init__(self, identity_name, lhs, rhs, params=None):
        self.identity_name = identity_name
        self.params = dict(params or {})
        self.lhs = lhs
        self.rhs = rhs
        self.difference = lhs - rhs
        self.passed = self.difference.is_zero()
        self.parts = None

    @classmethod
    def merge(cls, identity_name, reports, params=None):
        if not reports:
            raise ValueError("nothing to merge")
        lead = next((rep for rep in reports if not rep.passed), reports[0])
        merged = cls(identity_name, lead.lhs, lead.rhs, params=params)
        merged.parts = [(rep.identity_name, rep.passed) for rep in reports]
        merged.passed = all(rep.passed for rep in reports)
        return merged

    def to_obj(self):
        obj = {
            "format": "verification-report/1",
            "identity": self.identity_name,
            "params": self.params,
            "pass": self.passed,
        }
        if self.parts is not None:
            obj["parts"] = [[name, ok] for name, ok in self.parts]
        if not self.passed:
            obj["difference"] = self.difference.to_obj()
        return obj

    def __repr__(self):
        return "VerificationReport(%s, %s)" % (
            self.identity_name,
            "pass" if self.passed else "FAIL",
        )


# ---------------------------------------------------------------------------
# The main K/Q commutation relation
# ---------------------------------------------------------------------------

def admissible_tuples(r):
    """All (a, b, c, d) in 1..r with a != b, c != d, (a, b) != (d, c)."""
    out = []
    for a in range(1, r + 1):
        for b in range(1, r + 1):
            if a == b:
                continue
            for c in range(1, r + 1):
                for d in range(1, r + 1):
                    if c == d or (a, b) == (d, c):
                        continue
                    out.append((a, b, c, d))
    return out


def _check_tuple(a, b, c, d, r):
    for v in (a, b, c, d):
        if not (1 <= v <= r):
            raise IndexConstraintViolated("index %d outside 1..%d" % (v, r))
    if a == b:
        raise IndexConstraintViolated("need a != b, got a = b = %d" % a)
    if c == d:
        raise IndexConstraintViolated("need c != d, got c = d = %d" % c)
    if (a, b) == (d, c):
        raise IndexConstraintViolated(
            "(a, b) = (d, c) = (%d, %d) is outside the relation's domain" % (a, b)
        )


def _sym2(u, v):
    """The symmetrized product uv + vu."""
    return u * v + v * u


def _beta_shift(r):
    # beta - lambda/2 at lambda = k, beta = -t/2 - k(r-2)/4
    return ParamPoly.var_t() * Fraction(-1, 2) + ParamPoly.var_k() * Fraction(-r, 4)


def verify_main_relation(a, b, c, d, n, r):
    """Check [T_{1,0}(E_ab), T_{0,1}(E_cd)] against the DDCA right-hand side.

    The right-hand side is, with lambda = k and S(u, v) = uv + vu mapped
    through psi as products of T_{0,0}'s:

        T_{1,1}([E_ab, E_cd])
        + (beta - lambda/2) (delta_bc T_{0,0}(E_ad) + delta_ad T_{0,0}(E_cb))
        + (lambda/4) sum_{1 <= i, j <= r} S(T_{0,0}([E_ab, E_ij]),
                                            T_{0,0}([E_ji, E_cd]))

    The double sum runs over all pairs (i, j) including i = j: its diagonal
    part contributes (delta_bc - delta_bd - delta_ac + delta_ad) times
    S(T_{0,0}(E_ab), T_{0,0}(E_cd)), which is what makes the relation close
    in the overlap cases a = c or b = d (e.g. [K(E_12), Q(E_12)]).
    Restricting to i != j and compensating with a separate
    (delta_ad + delta_cb) S-term breaks exactly those cases.
    """
    _check_tuple(a, b, c, d, r)
    alg = get_algebra(n, r)
    quarter_lam = ParamPoly.var_k() * Fraction(1, 4)

    def T00(z):
        return t_gen(alg, 0, 0, z)

    E_ab = mat_unit(r, a, b)
    E_cd = mat_unit(r, c, d)
    k_gen = t_gen(alg, 1, 0, E_ab)
    q_gen = t_gen(alg, 0, 1, E_cd)
    lhs = k_gen * q_gen - q_gen * k_gen

    rhs = t_gen(alg, 1, 1, mat_commutator(E_ab, E_cd))
    shift = _beta_shift(r)
    if b == c:
        rhs = rhs + T00(mat_unit(r, a, d)).scale(shift)
    if a == d:
        rhs = rhs + T00(mat_unit(r, c, b)).scale(shift)
    cross = SphericalElement.zero(alg)
    for i in range(1, r + 1):
        for j in range(1, r + 1):
            z1 = mat_commutator(E_ab, mat_unit(r, i, j))
            if _is_zero_mat(z1):
                continue
            z2 = mat_commutator(mat_unit(r, j, i), E_cd)
            if _is_zero_mat(z2):
                continue
            cross = cross + _sym2(T00(z1), T00(z2))
    rhs = rhs + cross.scale(quarter_lam)

    return VerificationReport(
        "kq-relation",
        lhs,
        rhs,
        params={"a": a, "b": b, "c": c, "d": d, "n": n, "r": r},
    )


def verify_disjoint_case(a, b, c, d, n, r):
    """For {a,b} disjoint from {c,d} the relation closes up:

        [T_{1,0}(E_ab), T_{0,1}(E_cd)] = -lambda T_{0,0}(E_ad) T_{0,0}(E_cb).
    """
    _check_tuple(a, b, c, d, r)
    if {a, b} & {c, d}:
        raise IndexConstraintViolated(
            "{%d,%d} and {%d,%d} must be disjoint" % (a, b, c, d)
        )
    alg = get_algebra(n, r)
    k_gen = t_gen(alg, 1, 0, mat_unit(r, a, b))
    q_gen = t_gen(alg, 0, 1, mat_unit(r, c, d))
    lhs = k_gen * q_gen - q_gen * k_gen
    rhs = (
        t_gen(alg, 0, 0, mat_unit(r, a, d)) * t_gen(alg, 0, 0, mat_unit(r, c, b))
    ).scale(-ParamPoly.var_k())
    return VerificationReport(
        "kq-disjoint",
        lhs,
        rhs,
        params={"a": a, "b": b, "c": c, "d": d, "n": n, "r": r},
    )


# ---------------------------------------------------------------------------
# Current-algebra relations among the K(z) and the matrix part
# ---------------------------------------------------------------------------

def verify_sl_current(z1, z2, n):
    """[T_{1,0}(z1), T_{1,0}(z2)] = T_{2,0}([z1,z2]) and the same in degree 0."""
    z1 = _mat(z1)
    z2 = _mat(z2)
    if len(z1) != len(z2):
        raise ValueError("matrices of different sizes")
    _require_traceless(z1, "z1")
    _require_traceless(z2, "z2")
    r = len(z1)
    alg = get_algebra(n, r)
    comm = mat_commutator(z1, z2)

    k1 = t_gen(alg, 1, 0, z1)
    k2 = t_gen(alg, 1, 0, z2)
    deg2 = VerificationReport(
        "current-x2", k1 * k2 - k2 * k1, t_gen(alg, 2, 0, comm)
    )
    m1 = t_gen(alg, 0, 0, z1)
    m2 = t_gen(alg, 0, 0, z2)
    deg0 = VerificationReport(
        "current-x0", m1 * m2 - m2 * m1, t_gen(alg, 0, 0, comm)
    )
    return VerificationReport.merge(
        "sl-current", [deg2, deg0], params={"n": n, "r": r}
    )


# ---------------------------------------------------------------------------
# Rank extraction
# ---------------------------------------------------------------------------

def _h_matrix(r):
    return _mat_sub(mat_unit(r, 1, 1), mat_unit(r, 2, 2))


def _h2_sum(r):
    # E_11 + E_22, the square of H = E_11 - E_22
    return tuple(
        tuple(Fraction(1 if (i == j and i < 2) else 0) for j in range(r))
        for i in range(r)
    )


def _kq_commutator_of_h(alg):
    H = _h_matrix(alg.r)
    k_gen = t_gen(alg, 1, 0, H)
    q_gen = t_gen(alg, 0, 1, H)
    return k_gen * q_gen - q_gen * k_gen


def _extraction_combination(alg):
    """k times the sum of T_{0,0}-products subtracted in the extraction:
    sum_{al != 1} T(E_1al)T(E_al1) + sum_{al != 2} T(E_2al)T(E_al2)
    + T(E_12)T(E_21) + T(E_21)T(E_12)."""
    r = alg.r

    def T00(aa, bb):
        return t_gen(alg, 0, 0, mat_unit(r, aa, bb))

    total = SphericalElement.zero(alg)
    for al in range(1, r + 1):
        if al != 1:
            total = total + T00(1, al) * T00(al, 1)
        if al != 2:
            total = total + T00(2, al) * T00(al, 2)
    total = total + T00(1, 2) * T00(2, 1) + T00(2, 1) * T00(1, 2)
    return total.scale(ParamPoly.var_k())


def verify_k_extraction(n, r):
    """Two exact identities behind the rank extraction, with H = E_11 - E_22.

    (i) [T_{1,0}(H), T_{0,1}(H)] equals the three-term sum

            -t sum_i (E_11+E_22)_i
            + k sum_{i != j} (E_11+E_22)_i sigma_ij
            - k sum_{i != j} (H)_i (H)_j sigma_ij

        sandwiched with e on the right (which absorbs the transposition
        factors of the raw commutator).

    (ii) subtracting k times the T_{0,0}-product combination of
         ``_extraction_combination`` leaves exactly

            -(t + rk) sum_i (E_11+E_22)_i e  =  -(t + rk) T_{0,0}(E_11+E_22).
    """
    alg = get_algebra(n, r)
    tvar = ParamPoly.var_t()
    kvar = ParamPoly.var_k()
    lhs0 = _kq_commutator_of_h(alg)

    h2 = _h2_sum(r)
    H = _h_matrix(r)
    raw = CherednikElement.zero(alg)
    for i in range(1, n + 1):
        raw = raw + CherednikElement.gen_unit(alg, h2, i).scale(-tvar)
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j:
                continue
            sig = CherednikElement.sigma_elem(alg, i, j)
            raw = raw + (CherednikElement.gen_unit(alg, h2, i) * sig).scale(kvar)
            raw = raw + (
                CherednikElement.gen_unit(alg, H, i)
                * CherednikElement.gen_unit(alg, H, j)
                * sig
            ).scale(-kvar)
    ident_i = VerificationReport(
        "extraction-expansion", lhs0, SphericalElement.from_slim(alg, raw)
    )

    minus_t_rk = -(tvar + kvar * r)
    ident_ii = VerificationReport(
        "extraction-collapse",
        lhs0 - _extraction_combination(alg),
        t_gen(alg, 0, 0, h2).scale(minus_t_rk),
    )
    return VerificationReport.merge(
        "k-extraction", [ident_i, ident_ii], params={"n": n, "r": r}
    )


def fit_trace_coefficient(r, ranks=(3, 4, 5)):
    """Scalar part of the extraction identity as a polynomial in the rank.

    At each sampled rank the pure-scalar summand of
    [T_{1,0}(H), T_{0,1}(H)] - (combination) is isolated by subtracting the
    traceless piece -(t+rk) T_{0,0}(E_11+E_22 - (2/r)Id); what remains must
    be a multiple of e.  Interpolating those multiples over the sampled
    ranks gives -(2/r)(t+rk)K, so r times the fit recovers the extraction
    coefficient -2(t+rk) on K.
    """
    tvar = ParamPoly.var_t()
    kvar = ParamPoly.var_k()
    minus_t_rk = -(tvar + kvar * r)
    g0 = _mat_sub(_h2_sum(r), _mat_scale(mat_identity(r), Fraction(2, r)))
    samples = []
    for n in ranks:
        alg = get_algebra(n, r)
        collapsed = _kq_commutator_of_h(alg) - _extraction_combination(alg)
        scalar_elem = collapsed - t_gen(alg, 0, 0, g0).scale(minus_t_rk)
        zkey = (alg.zero_exp, (), alg.zero_exp)
        value = scalar_elem.coeff(zkey) * math.factorial(n)
        if scalar_elem != SphericalElement.unit(alg).scale(value):
            raise ArithmeticError(
                "residue at rank %d is not a multiple of e" % n
            )
        samples.append((n, value))
    return interpolate_in_K(samples, 1)
