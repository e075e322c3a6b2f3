import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import hat_by_vertices
from submeasure_lab.core import Measure, MinCover, SupMeasures, TableSubmeasure, direct_sum, restrict
from submeasure_lab.errors import (
    CoverageGap,
    GroundMismatch,
    HypothesisFailure,
    InfiniteSingleton,
    InputError,
    NonIntegerValue,
    NotProbability,
    SizeGuard,
)
from submeasure_lab.pathology import (
    CoveringInstance,
    block_delta,
    covering_stats,
    hat,
    hat_mask,
    kelley_witness,
    pathological_criterion,
    pathology_degree,
    pathology_witness_set,
    uniform_bound_check,
)
from submeasure_lab.rng import make_rng, random_submeasure
from submeasure_lab.rational import INF
from submeasure_lab.subsets import GroundSet, iter_bits, to_set
from submeasure_lab.zoo import gen_ed, gen_edfin, gen_mazur, gen_minimal_pathological, gen_solecki

from test_core import any_submeasure, min_covers


def _fn(phi):
    return lambda s: phi(s)


# -- hat ----------------------------------------------------------------------

def test_hat_minimal_example():
    res = hat(gen_minimal_pathological(), [0, 1, 2])
    assert res.value == Fraction(3, 2)
    assert res.witness.weights == (Fraction(1, 2),) * 3


def test_hat_mazur_full_ground_is_two():
    psi, _ = gen_mazur(2)
    assert hat_mask(psi, psi.ground.full).value == 2


def test_hat_of_a_measure_is_its_value():
    phi = SupMeasures([Measure.of([Fraction(2, 3), 1, 0, 5])])
    for m in range(16):
        assert hat_mask(phi, m).value == phi.value(m)


@settings(max_examples=25)
@given(any_submeasure)
def test_hat_matches_vertex_oracle(phi):
    n = min(phi.ground.size, 4)
    for m in range(1, 1 << n):
        pts = to_set(m)
        if any(phi.value(1 << i) is INF for i in pts):
            with pytest.raises(InfiniteSingleton):
                hat_mask(phi, m)
            continue
        want, _ = hat_by_vertices(_fn(phi), pts)
        assert hat_mask(phi, m).value == want


@given(any_submeasure)
def test_hat_at_most_value_and_witness_feasible(phi):
    n = phi.ground.size
    for m in range(1, 1 << n):
        try:
            res = hat_mask(phi, m)
        except InfiniteSingleton:
            continue
        assert res.value <= phi.value(m)
        w = res.witness
        assert w.total == res.value
        assert all(w.weights[i] == 0 for i in range(n) if not m >> i & 1)
        sub = m
        while sub:
            assert w.mass_mask(sub) <= phi.value(sub)
            sub = (sub - 1) & m


@given(any_submeasure)
def test_lazy_and_full_constraint_sets_agree(phi):
    for m in range(1, 1 << phi.ground.size):
        try:
            a = hat_mask(phi, m, "subsets").value
        except InfiniteSingleton:
            continue
        assert a == hat_mask(phi, m, "full").value


@given(min_covers(max_n=7, max_family=8))
def test_family_constraints_equal_subset_constraints(phi):
    for m in range(1, 1 << phi.ground.size):
        try:
            a = hat_mask(phi, m, "family").value
        except InfiniteSingleton:
            continue
        assert a == hat_mask(phi, m, "full").value


def test_family_constraints_equal_subset_constraints_at_twelve_points():
    psi, _ = gen_solecki(3)  # 70 points, 8 hats
    pts = list(range(12))
    m = psi.ground.mask(pts)
    assert hat_mask(psi, m, "family").value == hat_mask(psi, m, "subsets").value


@given(any_submeasure)
def test_hat_is_idempotent(phi):
    n = phi.ground.size
    if n > 5:
        return
    try:
        table = {m: hat_mask(phi, m).value for m in range(1 << n)}
    except InfiniteSingleton:
        return
    h = TableSubmeasure(phi.ground, table)
    for m in range(1 << n):
        assert hat_mask(h, m).value == table[m]


def test_hat_errors():
    phi = MinCover.from_sets(3, [[0, 1]])
    with pytest.raises(InfiniteSingleton):
        hat(phi, [2])
    with pytest.raises(InfiniteSingleton):
        hat(phi, [2], constraints="subsets")
    with pytest.raises(InputError):
        hat(gen_minimal_pathological(), [0], constraints="family")
    with pytest.raises(InputError):
        hat(gen_minimal_pathological(), [0], constraints="bogus")
    big = SupMeasures([Measure.of([1] * 15)])
    with pytest.raises(SizeGuard):
        hat(big, range(15))


# -- degree -------------------------------------------------------------------

def test_degree_examples():
    rep = pathology_degree(gen_minimal_pathological(), keep_ratios=True)
    assert rep.degree == Fraction(4, 3) and rep.argmax == frozenset({0, 1, 2})
    assert rep.ratios[frozenset({0, 1})] == 1
    assert rep.scope == "all" and not rep.lower_bound_only
    psi, _ = gen_edfin(3)
    assert pathology_degree(psi).degree == 1


def test_mazur_argmax_is_first_in_canonical_order():
    psi, _ = gen_mazur(2)
    rep = pathology_degree(psi)
    assert rep.degree == Fraction(3, 2)
    assert rep.argmax == frozenset({0, 5, 10, 15})


def test_family_scope_is_a_lower_bound():
    phi = gen_minimal_pathological()
    rep = pathology_degree(phi, scope=[[0, 1]])
    assert rep.lower_bound_only and rep.degree == 1
    with pytest.raises(InputError):
        pathology_degree(phi, scope="some")


def test_degree_undefined_when_every_hat_is_zero():
    phi = SupMeasures([Measure.of([0, 0])])
    rep = pathology_degree(phi)
    assert rep.degree is None and not rep.defined and rep.skipped_zero_hat == 3


@given(any_submeasure)
def test_degree_at_least_one(phi):
    try:
        rep = pathology_degree(phi)
    except InfiniteSingleton:
        return
    if rep.defined:
        assert rep.degree >= 1


@given(st.integers(1, 5).flatmap(lambda n: st.lists(
    st.lists(st.fractions(0, 2, max_denominator=4), min_size=n, max_size=n), min_size=1, max_size=3)))
def test_sup_of_measures_is_nonpathological(rows):
    phi = SupMeasures([Measure.of(r) for r in rows])
    rep = pathology_degree(phi)
    assert rep.degree in (None, 1)
    sub = restrict(phi, range(0, phi.ground.size, 2))
    assert pathology_degree(sub).degree in (None, 1)


# -- criterion ----------------------------------------------------------------

def test_criterion_examples():
    assert pathological_criterion(gen_minimal_pathological()) == frozenset({0, 1, 2})
    chain, _ = gen_ed([3, 3])
    w = pathological_criterion(chain)
    assert w == frozenset({0, 1, 3})
    # the set named in the construction (one point of B_0, two of B_1) also qualifies
    a = frozenset({0, 3, 4})
    assert chain(a) == 2 and all(chain(a - {y}) == 1 for y in a)
    counting = SupMeasures([Measure.of([1, 1, 1])])
    assert pathological_criterion(counting) is None
    with pytest.raises(NonIntegerValue):
        pathological_criterion(SupMeasures([Measure.of([Fraction(1, 2), 1])]))


def test_direct_sum_keeps_pathology():
    phi = gen_minimal_pathological()
    psi = direct_sum(phi, SupMeasures([Measure.of([1])]))
    assert psi([0, 1, 2, 3]) == 3
    assert psi([0, 1]) == phi([0, 1])
    assert pathological_criterion(psi) == frozenset({0, 1, 2})


def test_ed_restriction_to_delta_is_edfin():
    _, sup = gen_ed([3, 3, 3])
    r = restrict(sup, [0, 3, 4, 6, 7, 8])
    e, _ = gen_edfin(2)
    assert all(r.value(m) == e.value(m) for m in range(64))


# -- covering numbers ---------------------------------------------------------

def test_covering_stats_examples():
    st_m = covering_stats(gen_mazur(2)[1])
    assert (st_m.m, st_m.family_size, st_m.delta) == (2, 4, Fraction(1, 2))
    assert covering_stats(gen_solecki(3)[1]).delta == Fraction(1, 2)
    st_e = covering_stats(gen_edfin(2)[1])
    assert st_e.delta == Fraction(1, 3) and st_e.family_size == 6
    assert len(gen_edfin(3)[1].family) == 24


def test_covering_stats_errors():
    with pytest.raises(CoverageGap):
        covering_stats(CoveringInstance.from_sets(3, [[0, 1]]))
    with pytest.raises(CoverageGap):
        covering_stats(CoveringInstance.from_sets(3, []))
    with pytest.raises(GroundMismatch):
        CoveringInstance(GroundSet(2), (0b100,))
    assert block_delta(0b11, [0b01, 0b11, 0b110]) == Fraction(2, 3)
    with pytest.raises(CoverageGap):
        block_delta(0b1000, [0b1])


def test_kelley_examples():
    _, inst = gen_mazur(2)
    pi = Measure(inst.ground, (Fraction(1, 16),) * 16)
    pick = kelley_witness(inst, pi)
    assert pick.mass == Fraction(9, 16)
    point = Measure(inst.ground, tuple(Fraction(1 if i == 5 else 0) for i in range(16)))
    p2 = kelley_witness(inst, point)
    assert 5 in p2.members and p2.mass == 1
    _, om = gen_solecki(2)
    u = Measure(om.ground, (Fraction(1, 6),) * 6)
    assert kelley_witness(om, u).mass == Fraction(1, 2)
    with pytest.raises(NotProbability):
        kelley_witness(inst, Measure(inst.ground, (Fraction(1),) * 16))
    with pytest.raises(GroundMismatch):
        kelley_witness(inst, Measure.of([1]))


def test_kelley_never_fails_on_random_probabilities():
    for trial in range(1000):
        g = make_rng(3, "kelley", trial)
        n = int(g.integers(1, 9))
        fam = []
        for _ in range(int(g.integers(1, 6))):
            fam.append(int(g.integers(1, 1 << n)))
        u = 0
        for s in fam:
            u |= s
        fam[0] |= ((1 << n) - 1) & ~u
        inst = CoveringInstance(GroundSet(n), tuple(fam))
        raw = [int(g.integers(0, 5)) for _ in range(n)]
        if sum(raw) == 0:
            raw[0] = 1
        pi = Measure(inst.ground, tuple(Fraction(r, sum(raw)) for r in raw))
        pick = kelley_witness(inst, pi)
        assert pick.mass >= covering_stats(inst).delta


def test_uniform_bound_examples():
    psi, inst = gen_mazur(2)
    cert = uniform_bound_check(psi, inst, 1)
    assert cert.max_mass == 2 and cert.bound == 2 and cert.holds
    chi, om = gen_solecki(2)
    assert uniform_bound_check(chi, om, 1).max_mass <= 2
    phi = SupMeasures([Measure.of([1, 2])])
    one = CoveringInstance.from_sets(2, [[0, 1]])
    cert = uniform_bound_check(phi, one, 3)
    assert cert.delta == 1 and cert.max_mass <= 3
    with pytest.raises(HypothesisFailure):
        uniform_bound_check(phi, one, 2)


def test_uniform_bound_property_on_random_instances():
    for trial in range(50):
        g = make_rng(4, "ub", trial)
        n = int(g.integers(1, 7))
        phi = random_submeasure(g, n)
        fam = [(1 << n) - 1] if g.random() < 0.3 else [int(g.integers(1, 1 << n)) for _ in range(3)]
        u = 0
        for s in fam:
            u |= s
        fam[0] |= ((1 << n) - 1) & ~u
        inst = CoveringInstance(GroundSet(n), tuple(fam))
        M = max(phi.value(s) for s in fam)
        if M is INF:
            continue
        assert uniform_bound_check(phi, inst, M).holds


def test_witness_set_examples():
    g = GroundSet(4)
    mu = Measure(g, (Fraction(1, 2),) * 4)
    ws = pathology_witness_set([[0, 1], [2, 3]], [[[0], [1]], [[2], [3]]], mu, Fraction(1, 2))
    assert ws.mass >= 1 and ws.holds
    zero = Measure(g, (Fraction(0),) * 4)
    assert pathology_witness_set([[0, 1], [2, 3]], [[[0, 1]], [[2, 3]]], zero, 1).members == frozenset()
    with pytest.raises(HypothesisFailure):
        pathology_witness_set([[0, 1], [1, 2]], [[[0, 1]], [[1, 2]]], mu, Fraction(1, 2))
    with pytest.raises(HypothesisFailure):
        pathology_witness_set([[0, 1], [2, 3]], [[[0], [1]], [[2], [3]]], mu, 1)


def test_witness_set_on_mazur_blocks():
    _, k2 = gen_mazur(2)
    _, k3 = gen_mazur(3)
    n2, n3 = k2.ground.size, k3.ground.size
    g = GroundSet(n2 + n3)
    w = [Fraction(2, n2)] * n2 + [Fraction(2, n3)] * n3
    mu = Measure(g, tuple(w))
    fam2 = [list(iter_bits(s)) for s in k2.family]
    fam3 = [[i + n2 for i in iter_bits(s)] for s in k3.family]
    ws = pathology_witness_set([range(n2), range(n2, n2 + n3)], [fam2, fam3], mu, Fraction(1, 2))
    assert ws.mass >= 2 and ws.required == 2
