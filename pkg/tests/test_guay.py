import random
from fractions import Fraction

import pytest

from ddca.cherednik import get_algebra
from ddca.guay import (
    GuayGenerator,
    IndexConstraintViolated,
    NonTraceless,
    VerificationReport,
    admissible_tuples,
    fit_trace_coefficient,
    mat_commutator,
    mat_identity,
    mat_trace,
    mat_unit,
    psi,
    verify_disjoint_case,
    verify_k_extraction,
    verify_main_relation,
    verify_sl_current,
)
from ddca.rings import ParamPoly
from ddca.spherical import SphericalElement, t_gen


def _mat_add(z1, z2):
    return tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(z1, z2))


def _mat_scale(z, q):
    return tuple(tuple(v * q for v in row) for row in z)


def _random_traceless(rng, r):
    rows = [[Fraction(rng.randrange(-3, 4)) for _ in range(r)] for _ in range(r)]
    rows[r - 1][r - 1] = -sum(rows[i][i] for i in range(r - 1))
    return tuple(tuple(row) for row in rows)


def test_psi_images():
    z = GuayGenerator("Z", mat_unit(2, 1, 2))
    alg = get_algebra(3, 2)
    assert psi(z, 3) == t_gen(alg, 0, 0, mat_unit(2, 1, 2))
    p = GuayGenerator("P", mat_unit(2, 1, 2))
    assert psi(p, 3) == t_gen(alg, 1, 1, mat_unit(2, 1, 2))


def test_psi_rejects_nonzero_trace():
    with pytest.raises(NonTraceless):
        GuayGenerator("Z", mat_identity(2))


def test_admissible_tuple_count():
    tuples = admissible_tuples(4)
    assert len(tuples) == 132
    assert (1, 2, 2, 1) not in tuples
    assert (1, 2, 1, 2) in tuples


def test_main_relation_adjacent_case():
    report = verify_main_relation(1, 2, 2, 3, 4, 4)
    assert report.passed


def test_main_relation_disjoint_value():
    report = verify_main_relation(1, 2, 3, 4, 4, 4)
    assert report.passed
    alg = get_algebra(4, 4)
    closed = (
        t_gen(alg, 0, 0, mat_unit(4, 1, 4)) * t_gen(alg, 0, 0, mat_unit(4, 3, 2))
    ).scale(-ParamPoly.var_k())
    assert report.lhs == closed
    assert report.rhs == closed


def test_main_relation_domain():
    with pytest.raises(IndexConstraintViolated):
        verify_main_relation(1, 2, 2, 1, 3, 4)
    with pytest.raises(IndexConstraintViolated):
        verify_main_relation(1, 1, 2, 3, 3, 4)
    with pytest.raises(IndexConstraintViolated):
        verify_main_relation(1, 2, 2, 3, 3, 2)  # index 3 outside 1..2


def test_disjoint_case():
    report = verify_disjoint_case(1, 2, 3, 4, 3, 4)
    assert report.passed
    with pytest.raises(IndexConstraintViolated):
        verify_disjoint_case(1, 2, 2, 3, 3, 4)


def test_sl_current_examples():
    e12 = mat_unit(2, 1, 2)
    e21 = mat_unit(2, 2, 1)
    report = verify_sl_current(e12, e21, 3)
    assert report.passed
    assert report.parts == [("current-x2", True), ("current-x0", True)]

    same = verify_sl_current(e12, e12, 3)
    assert same.passed
    assert same.lhs.is_zero()

    disjoint = verify_sl_current(mat_unit(4, 1, 2), mat_unit(4, 3, 4), 2)
    assert disjoint.passed
    assert disjoint.lhs.is_zero()

    with pytest.raises(NonTraceless):
        verify_sl_current(mat_unit(2, 1, 1), e12, 3)


def test_sl_current_elementary_sweep():
    # all pairs of off-diagonal matrix units at small rank
    for r, n in [(2, 3), (3, 2)]:
        units = [
            mat_unit(r, a, b)
            for a in range(1, r + 1)
            for b in range(1, r + 1)
            if a != b
        ]
        for z1 in units:
            for z2 in units:
                assert verify_sl_current(z1, z2, n).passed, (r, n, z1, z2)


def test_k_extraction():
    report = verify_k_extraction(3, 2)
    assert report.passed
    assert report.parts == [
        ("extraction-expansion", True),
        ("extraction-collapse", True),
    ]


def test_trace_coefficient_fit():
    # the fitted scalar is -(2/r)(t+rk)K; r times it carries -2(t+rk)
    fit = fit_trace_coefficient(2)
    tv, kv, Kv = ParamPoly.var_t(), ParamPoly.var_k(), ParamPoly.parse("K")
    assert fit == (tv + kv * 2) * Kv * Fraction(-1)
    assert fit * ParamPoly.const(2) == (tv + kv * 2) * Kv * Fraction(-2)


def test_p_generator_linearity():
    rng = random.Random(606060)
    alg = get_algebra(3, 2)
    for _ in range(20):
        z1 = _random_traceless(rng, 2)
        z2 = _random_traceless(rng, 2)
        q = Fraction(rng.randrange(-3, 4))
        combo = _mat_add(z1, _mat_scale(z2, q))
        assert t_gen(alg, 1, 1, combo) == t_gen(alg, 1, 1, z1) + t_gen(
            alg, 1, 1, z2
        ).scale(q)


def test_adjoint_equivariance():
    rng = random.Random(717171)
    alg = get_algebra(3, 2)
    for _ in range(20):
        y = _random_traceless(rng, 2)
        z = _random_traceless(rng, 2)
        lhs = t_gen(alg, 0, 0, y) * t_gen(alg, 1, 1, z) - t_gen(
            alg, 1, 1, z
        ) * t_gen(alg, 0, 0, y)
        assert lhs == t_gen(alg, 1, 1, mat_commutator(y, z))


def test_report_serialization():
    alg = get_algebra(2, 2)
    e = SphericalElement.unit(alg)
    good = VerificationReport("demo", e, e, params={"n": 2})
    obj = good.to_obj()
    assert obj["pass"] is True
    assert "difference" not in obj
    bad = VerificationReport("demo", e.scale(2), e)
    obj = bad.to_obj()
    assert obj["pass"] is False
    assert obj["difference"]["format"] == "spherical-element/1"
    merged = VerificationReport.merge("suite", [good, bad])
    assert not merged.passed
    assert merged.parts == [("demo", True), ("demo", False)]


def test_matrix_helpers():
    assert mat_trace(mat_identity(3)) == 3
    h = mat_commutator(mat_unit(2, 1, 2), mat_unit(2, 2, 1))
    assert h == ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(-1)))
