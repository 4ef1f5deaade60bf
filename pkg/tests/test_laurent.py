import itertools
import random

import pytest
from hypothesis import given, strategies as st

from multiloop.exactnum import ExactMatrix, make_cyclotomic, rank
from multiloop.laurent import (
    DegreeCapExceeded,
    LaurentPoly,
    NotHomogeneous,
    OneForm,
    TorusAction,
    delta_act,
    exterior_d,
    lift_class,
    omegabar_invariants,
    omegabar_weight_dim,
    parse_laurent,
    parse_oneform,
    reduce_mod_exact,
)

QQ = make_cyclotomic(1)


def mono(a, c=1, field=QQ, cap=64):
    return LaurentPoly.monomial(a, c, field, cap)


def test_monomial_product():
    assert mono((1, 0)) * mono((0, 1)) == mono((1, 1))


def test_additive_inverse():
    p = parse_laurent("3*t1^2*t2^-1 + 1/2", 2)
    assert not (p + (-p))


def test_binomial_square():
    p = mono((1,)) + mono((-1,))
    assert p ** 2 == parse_laurent("t^2 + 2 + t^-2", 1)


def test_degree_cap():
    p = mono((3,), cap=4)
    with pytest.raises(DegreeCapExceeded):
        p * p
    with pytest.raises(DegreeCapExceeded):
        mono((5,), cap=4)


def test_print_parse():
    p = parse_laurent("3*t1^2*t2^-1 + 1/2", 2)
    assert str(p) == "3*t1^2*t2^-1 + 1/2"
    q = parse_laurent("t^3 - t^-1", 1)
    assert str(q) == "t^3 - t^-1"
    F = make_cyclotomic(3)
    r = LaurentPoly.monomial((2,), F.zeta() + 1, F)
    assert parse_laurent(str(r), 1, F) == r


def test_oneform_print_parse():
    w = OneForm(2, {((1, 2), 0): 1, ((1, 2), 1): 2}, QQ)
    assert str(w) == "t1*t2^2*L1 + 2*t1*t2^2*L2"
    assert parse_oneform(str(w), 2) == w
    assert str(OneForm(1, {((0,), 0): -1}, QQ)) == "-L"


def test_delta_examples():
    act = TorusAction((2,))
    F2 = make_cyclotomic(2)
    assert delta_act((1,), mono((3,), 1, F2), act) == -mono((3,), 1, F2)
    # the rational field has no primitive square root of unity on record
    with pytest.raises(ValueError):
        delta_act((1,), mono((3,)), act)
    p = parse_laurent("t^3 - 2*t^-1 + 5", 1, F2)
    assert delta_act((0,), p, act) == p
    act2 = TorusAction((2, 3))
    F6 = make_cyclotomic(6)
    z6 = F6.zeta()
    got = delta_act((1, 1), mono((1, 1), 1, F6), act2)
    assert got == mono((1, 1), z6 ** 5, F6)
    assert z6 ** 5 == 1 - z6


def test_d_examples():
    assert not exterior_d(LaurentPoly.constant(2, 1, QQ))
    assert exterior_d(mono((5,))) == OneForm(1, {((5,), 0): 5}, QQ)
    assert exterior_d(mono((1, 2))) == OneForm(2, {((1, 2), 0): 1, ((1, 2), 1): 2}, QQ)


def test_reduce_examples():
    assert reduce_mod_exact(OneForm(1, {((5,), 0): 1}, QQ), (5,)).is_zero()
    c = reduce_mod_exact(OneForm(1, {((0,), 0): 1}, QQ), (0,))
    assert c.coords == (1,)
    c2 = reduce_mod_exact(OneForm(2, {((1, 0), 0): 3, ((1, 0), 1): 2}, QQ), (1, 0))
    assert c2.coords == (2,)
    with pytest.raises(NotHomogeneous):
        reduce_mod_exact(OneForm(1, {((1,), 0): 1, ((2,), 0): 1}, QQ), (1,))


def test_weight_dim_examples():
    assert omegabar_weight_dim(1, (7,)) == 0
    assert omegabar_weight_dim(1, (0,)) == 1
    assert omegabar_weight_dim(3, (1, 1, 0)) == 2


def test_invariant_examples():
    assert omegabar_invariants(TorusAction((2,)), (0,))[0] == 1
    assert omegabar_invariants(TorusAction((2,)), (3,))[0] == 0
    assert omegabar_invariants(TorusAction((2, 1)), (2, 5))[0] == 1
    assert omegabar_invariants(TorusAction((2, 1)), (1, 5))[0] == 0


def _reduction_rank(n, m):
    """Rank of the reduction map on the n monomial forms t^m L_k (independent of omegabar_weight_dim)."""
    rows = []
    for k in range(n):
        c = reduce_mod_exact(OneForm(n, {(m, k): 1}, QQ), m)
        rows.append(tuple(QQ(x) for x in c.coords))
    if not rows[0]:
        return 0
    return rank(ExactMatrix(tuple(rows), len(rows[0])))


def _exact_quotient_dim(n, m):
    """n minus the rank of the exact forms at weight m (d of the single monomial t^m)."""
    d = exterior_d(mono(m)).component(m)
    return n - (1 if any(d) else 0)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_weight_dim_cross_validated(n):
    rng = random.Random(10 + n)
    weights = [tuple(0 for _ in range(n))]
    while len(weights) < 50:
        weights.append(tuple(rng.randint(-6, 6) for _ in range(n)))
    for m in weights:
        assert omegabar_weight_dim(n, m) == _reduction_rank(n, m) == _exact_quotient_dim(n, m)


def _brute_invariant(act, m, F):
    # weight m component is invariant iff every group element fixes t^m (L_k are invariant)
    return all(act.character(d, m, F) == F.one for d in act.elements())


@pytest.mark.parametrize("orders", [(2,), (3,), (2, 3), (2, 2), (4, 1), (3, 2, 2)])
def test_divisibility_criterion_brute_force(orders):
    act = TorusAction(orders)
    F = make_cyclotomic(act.order)
    for m in itertools.product(range(-6, 7), repeat=len(orders)):
        if len(orders) == 3 and sum(abs(x) for x in m) > 6:
            continue
        brute = _brute_invariant(act, m, F)
        assert act.is_invariant_weight(m) == brute
        assert omegabar_invariants(act, m)[0] == (omegabar_weight_dim(len(orders), m) if brute else 0)


@st.composite
def polys(draw, n=2, field=QQ):
    terms = draw(st.dictionaries(st.tuples(*[st.integers(-3, 3)] * n), st.integers(-4, 4), max_size=4))
    return LaurentPoly(n, terms, field)


@given(polys(), polys())
def test_leibniz(p, q):
    assert exterior_d(p * q) == p * exterior_d(q) + q * exterior_d(p)


@given(polys())
def test_exact_forms_die(p):
    dp = exterior_d(p)
    for m in p.weights():
        if any(m):
            comp = OneForm(2, {(a, k): c for (a, k), c in dp.terms.items() if a == m}, QQ)
            assert reduce_mod_exact(comp, m).is_zero()


@given(polys(field=make_cyclotomic(6)), polys(field=make_cyclotomic(6)),
       st.tuples(st.integers(0, 1), st.integers(0, 2)), st.tuples(st.integers(0, 1), st.integers(0, 2)))
def test_delta_is_ring_action(p, q, d1, d2):
    act = TorusAction((2, 3))
    assert delta_act(d1, p * q, act) == delta_act(d1, p, act) * delta_act(d1, q, act)
    d12 = tuple((x + y) % r for x, y, r in zip(d1, d2, act.orders))
    assert delta_act(d12, p, act) == delta_act(d1, delta_act(d2, p, act), act)


@given(st.lists(st.integers(-5, 5), min_size=3, max_size=3), st.tuples(*[st.integers(-4, 4)] * 3))
def test_reduction_idempotent(coeffs, m):
    w = OneForm(3, {(m, k): c for k, c in enumerate(coeffs)}, QQ)
    cls = reduce_mod_exact(w, m)
    again = reduce_mod_exact(lift_class(cls, QQ), m)
    assert again == cls
    # the lift differs from w by an exact form
    diff = w - lift_class(cls, QQ)
    assert reduce_mod_exact(diff, m).is_zero()
