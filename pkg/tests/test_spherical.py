import json
import random
from fractions import Fraction

import pytest

from ddca.cherednik import CherednikElement, ParamMismatch, get_algebra
from ddca.guay import mat_unit
from ddca.rings import ParamPoly
from ddca.spherical import (
    SphericalElement,
    TIndex,
    enumerate_t_indices,
    expand_in_t_basis,
    expansion_from_obj,
    expansion_to_obj,
    sandwich,
    spherical_mul,
    t_basis_elem,
    t_gen,
)

E12 = mat_unit(2, 1, 2)
E21 = mat_unit(2, 2, 1)
E11 = mat_unit(2, 1, 1)


def test_sandwich_of_one_is_unit():
    alg = get_algebra(2, 2)
    assert sandwich(CherednikElement.one(alg)) == SphericalElement.unit(alg)


def test_sandwich_averages_over_group():
    alg = get_algebra(2, 1)
    x1 = CherednikElement.gen_x(alg, 1)
    x2 = CherednikElement.gen_x(alg, 2)
    assert sandwich(x1) == sandwich(x2)
    assert sandwich(x1) == sandwich((x1 + x2).scale(Fraction(1, 2)))


def test_sandwich_absorbs_permutations():
    alg = get_algebra(3, 2)
    s = CherednikElement.gen_transposition(alg, 1, 3)
    for a in (
        CherednikElement.gen_x(alg, 1),
        CherednikElement.gen_y(alg, 2) * CherednikElement.gen_unit(alg, (1, 2), 1),
    ):
        assert sandwich(s * a) == sandwich(a)
        assert sandwich(a * s) == sandwich(a)


def test_t_gen_degree_zero():
    alg = get_algebra(3, 2)
    assert t_gen(alg, 0, 0, "id") == SphericalElement.unit(alg).scale(3)
    expected = CherednikElement.zero(alg)
    for i in (1, 2, 3):
        expected = expected + CherednikElement.gen_unit(alg, (1, 2), i)
    assert t_gen(alg, 0, 0, E12) == sandwich(expected)


def test_t_gen_one_one_is_symmetrized_xy():
    alg = get_algebra(2, 2)
    expected = CherednikElement.zero(alg)
    for i in (1, 2):
        g = CherednikElement.gen_unit(alg, (1, 2), i)
        xi = CherednikElement.gen_x(alg, i)
        yi = CherednikElement.gen_y(alg, i)
        expected = expected + (g * (xi * yi + yi * xi)).scale(Fraction(1, 2))
    assert t_gen(alg, 1, 1, E12) == sandwich(expected)


@pytest.mark.parametrize("L", [1, 2, 3])
def test_t_gen_pure_x(L):
    alg = get_algebra(2, 1)
    expected = CherednikElement.zero(alg)
    for i in (1, 2):
        expected = expected + CherednikElement.gen_x(alg, i) ** L
    assert t_gen(alg, L, 0, "id") == sandwich(expected)


def test_t_basis_singleton():
    alg = get_algebra(3, 2)
    m = TIndex([(1, 0, (1, 2))])
    assert t_basis_elem(alg, m) == t_gen(alg, 1, 0, E12)


def test_t_basis_square():
    alg = get_algebra(3, 2)
    m = TIndex([(1, 0, (1, 2)), (1, 0, (1, 2))])
    g = t_gen(alg, 1, 0, E12)
    assert t_basis_elem(alg, m) == g * g


def test_t_basis_two_factor_symmetrization():
    alg = get_algebra(3, 2)
    m = TIndex([(0, 0, (1, 2)), (0, 0, (2, 1))])
    a = t_gen(alg, 0, 0, E12)
    b = t_gen(alg, 0, 0, E21)
    assert t_basis_elem(alg, m) == (a * b + b * a).scale(Fraction(1, 2))


def test_unit_is_neutral():
    alg = get_algebra(3, 2)
    e = SphericalElement.unit(alg)
    a = t_gen(alg, 1, 1, E12)
    assert spherical_mul(e, a) == a
    assert spherical_mul(a, e) == a


def test_t00_product_brute_force():
    # T(E12) T(E21) = sum_{i != j} (E12)_i (E21)_j e + sum_i (E11)_i e
    alg = get_algebra(3, 2)
    prod = spherical_mul(t_gen(alg, 0, 0, E12), t_gen(alg, 0, 0, E21))
    direct = CherednikElement.zero(alg)
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            if i != j:
                direct = direct + CherednikElement.gen_unit(
                    alg, (1, 2), i
                ) * CherednikElement.gen_unit(alg, (2, 1), j)
    for i in (1, 2, 3):
        direct = direct + CherednikElement.gen_unit(alg, (1, 1), i)
    assert prod == sandwich(direct)


def test_pure_x_generators_commute():
    # pure-x generators commute whenever their matrix parts do
    alg = get_algebra(3, 2)
    a = t_gen(alg, 1, 0, E12)
    for b in (t_gen(alg, 2, 0, E12), t_gen(alg, 2, 0, "id"), t_gen(alg, 3, 0, "id")):
        assert spherical_mul(a, b) == spherical_mul(b, a)


def test_pure_x_commutator_tracks_matrix_bracket():
    # and the deviation is exactly the bracket of the labels
    alg = get_algebra(3, 2)
    a = t_gen(alg, 1, 0, E12)
    b = t_gen(alg, 2, 0, E21)
    diff = spherical_mul(a, b) - spherical_mul(b, a)
    bracket = CherednikElement.zero(alg)
    for i in (1, 2, 3):
        h = CherednikElement.gen_unit(alg, (1, 1), i) - (
            CherednikElement.one(alg) - CherednikElement.gen_unit(alg, (1, 1), i)
        )
        bracket = bracket + h * CherednikElement.gen_x(alg, i) ** 3
    assert diff == SphericalElement.from_slim(alg, bracket)


def test_associativity_of_t_generators():
    rng = random.Random(90210)
    alg = get_algebra(4, 2)
    pool = [
        t_gen(alg, 0, 0, E12),
        t_gen(alg, 0, 0, E21),
        t_gen(alg, 1, 0, "id"),
        t_gen(alg, 0, 1, E11),
        t_gen(alg, 1, 1, E12),
    ]
    for _ in range(50):
        a, b, c = (rng.choice(pool) for _ in range(3))
        assert spherical_mul(spherical_mul(a, b), c) == spherical_mul(
            a, spherical_mul(b, c)
        )


def test_leading_term_law():
    # top v-degree part of T_{p,q}(g) is sum_i (g)_i x_i^p y_i^q e
    alg = get_algebra(3, 2)
    for p, q in [(1, 1), (2, 1), (0, 2)]:
        elem = t_gen(alg, p, q, E12)
        top = {
            key: c
            for key, c in elem.coords.items()
            if sum(key[0]) + sum(key[2]) == p + q
        }
        lead = CherednikElement.zero(alg)
        for i in (1, 2, 3):
            lead = lead + (
                CherednikElement.gen_unit(alg, (1, 2), i)
                * CherednikElement.gen_x(alg, i) ** p
                * CherednikElement.gen_y(alg, i) ** q
            )
        assert top == SphericalElement.from_slim(alg, lead).coords, (p, q)


def test_expand_basis_element_is_itself():
    alg = get_algebra(6, 2)
    m = TIndex([(1, 1, (1, 2))])
    expansion = expand_in_t_basis(t_basis_elem(alg, m))
    assert expansion == {m: ParamPoly.one()}


def test_expand_unit():
    alg = get_algebra(4, 2)
    assert expand_in_t_basis(SphericalElement.unit(alg)) == {
        TIndex(): ParamPoly.one()
    }


@pytest.mark.parametrize("n", [4, 5])
def test_expand_t00_product(n):
    alg = get_algebra(n, 2)
    prod = spherical_mul(t_gen(alg, 0, 0, E12), t_gen(alg, 0, 0, E21))
    expansion = expand_in_t_basis(prod)
    expected = {
        TIndex([(0, 0, (1, 2)), (0, 0, (2, 1))]): ParamPoly.one(),
        TIndex([(0, 0, (1, 1))]): ParamPoly.one(),
        TIndex(): ParamPoly.const(Fraction(-n, 2)),
    }
    assert expansion == expected


def test_independence_small_shadow():
    # every index with w <= 2, |m| <= 2 expands to exactly itself at n = 6
    alg = get_algebra(6, 2)
    for m in enumerate_t_indices(2, 2, 2, include_empty=False):
        expansion = expand_in_t_basis(t_basis_elem(alg, m))
        assert expansion == {m: ParamPoly.one()}, m


def test_t_index_serialization():
    m = TIndex([(1, 0, (1, 2)), (1, 0, (1, 2)), (0, 2, "id")])
    assert m.size == 3
    assert m.weight == 4
    back = TIndex.from_obj(json.loads(json.dumps(m.to_obj())))
    assert back == m


def test_expansion_serialization_roundtrip():
    alg = get_algebra(4, 2)
    prod = spherical_mul(t_gen(alg, 0, 0, E12), t_gen(alg, 0, 0, E21))
    expansion = expand_in_t_basis(prod)
    back = expansion_from_obj(json.loads(json.dumps(expansion_to_obj(expansion))))
    assert back == expansion


def test_param_mismatch():
    a = t_gen(get_algebra(3, 2), 1, 0, "id")
    b = t_gen(get_algebra(4, 2), 1, 0, "id")
    with pytest.raises(ParamMismatch):
        spherical_mul(a, b)
