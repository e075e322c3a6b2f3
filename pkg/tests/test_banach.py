from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from test_core import sup_measures
from submeasure_lab.banach import (
    VectorSequence,
    abs_normalize,
    boundedness_report,
    nullity_diagnostics,
    phi_of_sequence,
    scale_by_sup,
    sequence_of_phi,
)
from submeasure_lab.colorings import (
    c0tall_coloring,
    c0tall_color,
    c0tall_threshold,
    level_partition,
    maximal_homogeneous,
    verify_color1_bound,
)
from submeasure_lab.core import Measure, MinCover, SupMeasures
from submeasure_lab.errors import InputError, SignedInput, ZeroScale
from submeasure_lab.pathology import pathology_degree
from submeasure_lab.subsets import GroundSet
from submeasure_lab.zoo import gen_edfin, gen_finxempty

F = Fraction


def _m(rows, signed=False):
    return VectorSequence(tuple(tuple(F(v) for v in r) for r in rows), signed)


def test_phi_of_sequence_examples():
    x = VectorSequence.from_columns([(1, 0), (F(1, 2), F(1, 2))])
    phi = phi_of_sequence(x)
    assert phi.value(0b11) == F(3, 2)
    assert phi.value(0) == 0
    with pytest.raises(SignedInput):
        phi_of_sequence(_m([[1, -1]], signed=True))


def test_phi_on_finxempty_blocks():
    x, blocks = gen_finxempty([2, 3, 4])
    phi = phi_of_sequence(x)
    for m, b in enumerate(blocks, start=1):
        sub = b
        while sub:
            assert phi.value(sub) == m
            sub = (sub - 1) & b


def test_sequence_of_phi_examples():
    one = SupMeasures([Measure.counting(GroundSet(2), [0, 1])])
    assert sequence_of_phi(one).entries == ((1, 1),)
    psi, _ = gen_edfin(2)
    x = sequence_of_phi(psi)
    assert x.rows == 3 and x.cols == 6
    assert all(max(x.column(n)) == 1 for n in range(x.cols))
    with pytest.raises(InputError):
        sequence_of_phi(MinCover(GroundSet(2), [0b11]))


@settings(max_examples=40)
@given(sup_measures(max_n=8))
def test_round_trip_is_exact(phi):
    back = phi_of_sequence(sequence_of_phi(phi))
    for a in range(1 << phi.ground.size):
        assert back.value(a) == phi.value(a)


@given(sup_measures(max_n=8))
def test_column_norm_is_singleton_value(phi):
    x = sequence_of_phi(phi)
    for n in range(x.cols):
        assert max(x.column(n)) == phi.value(1 << n)


@settings(max_examples=15)
@given(sup_measures(max_n=5))
def test_phi_x_is_nonpathological(phi):
    rep = pathology_degree(phi_of_sequence(sequence_of_phi(phi)))
    assert rep.degree is None or rep.degree == 1


def test_abs_normalize_examples():
    x = _m([[1, F(-1, 2)]], signed=True)
    assert abs_normalize(x).entries == ((1, F(1, 2)),)
    y = _m([[1, 2], [3, 4]])
    assert abs_normalize(y) == y
    alt = _m([[1], [-1], [1], [-1]], signed=True)
    assert abs_normalize(alt).entries == ((1,),) * 4
    row = abs_normalize(_m([[1, -1, 1, -1]], signed=True))
    assert [boundedness_report(row, range(n), 0).max_partial_sum for n in range(5)] == [0, 1, 2, 3, 4]


def test_signed_matrix_requires_flag():
    with pytest.raises(SignedInput):
        _m([[1, -1]])
    with pytest.raises(InputError):
        VectorSequence(((1, 2), (3,)))
    with pytest.raises(InputError):
        VectorSequence(())


def test_boundedness_examples():
    ones = _m([[1] * 5])
    rep = boundedness_report(ones, range(5), 5)
    assert rep.bounded and rep.max_partial_sum == 5
    assert not boundedness_report(ones, range(5), 4).bounded
    for n in range(1, 8):
        alt = _m([[(-1) ** i for i in range(n)]], signed=True)
        assert boundedness_report(alt, range(n), n).max_partial_sum == (n + 1) // 2
    x, blocks = gen_finxempty([2, 3, 4])
    for m, b in enumerate(blocks, start=1):
        pts = [i for i in range(x.cols) if b >> i & 1]
        assert boundedness_report(x, pts, m).bounded


signed_entries = st.fractions(-2, 2, max_denominator=4)


@given(st.integers(1, 4).flatmap(lambda r: st.integers(1, 6).flatmap(
    lambda c: st.lists(st.lists(signed_entries, min_size=c, max_size=c), min_size=r, max_size=r))))
def test_sign_selection_identity(rows):
    x = VectorSequence(tuple(tuple(r) for r in rows), signed=True)
    pts = range(x.cols)
    # brute force over every F inside A
    brute = max(abs(sum((row[n] for n in pts if f >> n & 1), F(0)))
                for f in range(1 << x.cols) for row in x.entries)
    assert boundedness_report(x, pts, 0).max_partial_sum == brute
    a = abs_normalize(x)
    assert boundedness_report(a, pts, 0).max_partial_sum == max(sum(r) for r in a.entries)
    assert boundedness_report(a, pts, 0).dual_sums == boundedness_report(x, pts, 0).dual_sums
    again = abs_normalize(a)
    assert boundedness_report(again, pts, 0) == boundedness_report(a, pts, 0)


def test_scale_by_sup():
    x, m = scale_by_sup(_m([[2, 1], [0, 4]]))
    assert m == 4 and x.entries == ((F(1, 2), F(1, 4)), (0, 1))
    with pytest.raises(ZeroScale):
        scale_by_sup(_m([[0, 0]]))


def test_nullity_examples():
    rows_vanish = _m([[F(1, 2 ** k)] * 4 for k in range(6)])
    rep = nullity_diagnostics(rows_vanish, levels=4)
    assert rep.label == "truncation diagnostic"
    # above threshold 2^-i only rows k < i remain
    assert all(rep.row_vanishing[n] == (None, 0, 1, 2) for n in range(4))

    x, blocks = gen_finxempty([2, 3, 4])
    norms = nullity_diagnostics(x).column_norms
    for m, b in enumerate(blocks, start=1):
        assert all(norms[n] == m for n in range(x.cols) if b >> n & 1)
    assert nullity_diagnostics(x).sup_singleton == 3

    diag = _m([[F(1, 2 ** n) if k == n else 0 for n in range(5)] for k in range(5)])
    d = nullity_diagnostics(diag, levels=5)
    assert d.sup_singleton == 1
    assert d.column_vanishing[3] == (None, None, None, None, 3)


def test_c0tall_wiring_on_vanishing_matrix():
    # entries 2^-(n+k): rows vanish in k, columns vanish in n
    raw = _m([[F(3, 2 ** (n + k)) for n in range(9)] for k in range(4)])
    rep = nullity_diagnostics(raw)
    assert all(t is None for t in rep.row_vanishing[8][:7])  # max entry 3/256
    mat, scale = scale_by_sup(raw)
    assert scale == 3
    ps = level_partition(mat)
    c = c0tall_coloring(ps)
    for h in maximal_homogeneous(c, 1, c.ground.full):
        pts = [i for i in range(c.size) if h >> i & 1]
        assert verify_color1_bound(ps, pts).max_mass <= 2
    for n in range(5):
        m = c0tall_threshold(ps, n)
        assert m is not None
        assert all(c0tall_color(ps, n, l) == 1 for l in range(m, 9))
