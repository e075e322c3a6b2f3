"""Vector sequences in l-infinity and the submeasures they induce.

A ``VectorSequence`` is a K x N matrix: column n is the vector x_n and row k
is the measure mu_k with mu_k({n}) = x_n(k).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .core import FiniteSubmeasure, Measure, SupMeasures
from .errors import InputError, SignedInput, ZeroScale
from .rational import INF, as_rational
from .subsets import GroundSet, iter_bits

TRUNCATION_LABEL = "truncation diagnostic"


@dataclass(frozen=True)
class VectorSequence:
    entries: tuple[tuple[Fraction, ...], ...]  # entries[k][n] = x_n(k)
    signed: bool = False

    def __post_init__(self):
        rows = tuple(tuple(_entry(v) for v in row) for row in self.entries)
        if not rows or not rows[0]:
            raise InputError("a vector sequence needs at least one row and one column")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise InputError("matrix rows must all have the same length")
        if not self.signed and any(v < 0 for r in rows for v in r):
            raise SignedInput("negative entry in a matrix not marked signed")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], signed: bool = False) -> "VectorSequence":
        return cls(tuple(zip(*columns)), signed)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    def column(self, n: int) -> tuple[Fraction, ...]:
        return tuple(r[n] for r in self.entries)

    @property
    def has_negative(self) -> bool:
        return any(v < 0 for r in self.entries for v in r)

    def ground(self) -> GroundSet:
        return GroundSet(self.cols)


def _entry(v) -> Fraction:
    q = as_rational(v)
    if q is INF:
        raise InputError("matrix entries must be finite")
    return q


def phi_of_sequence(x: VectorSequence) -> SupMeasures:
    """phi_x(A) = sup over finite nonempty F in A of the sup-norm of the partial sum.

    With nonnegative entries every coordinate sum grows with F, so the sup is
    attained at F = A and phi_x is the sup of the row measures.
    """
    if x.has_negative:
        raise SignedInput("apply abs_normalize before building phi_x")
    ground = x.ground()
    return SupMeasures([Measure(ground, row) for row in x.entries])


def sequence_of_phi(phi: SupMeasures) -> VectorSequence:
    if not isinstance(phi, SupMeasures):
        raise InputError("sequence_of_phi needs a sup-of-measures submeasure")
    return VectorSequence(tuple(mu.weights for mu in phi.measures))


def abs_normalize(x: VectorSequence) -> VectorSequence:
    return VectorSequence(tuple(tuple(abs(v) for v in r) for r in x.entries), signed=False)


def scale_by_sup(x: VectorSequence) -> tuple[VectorSequence, Fraction]:
    """Divide by M = the largest column sup-norm so every entry is at most 1."""
    m = max(abs(v) for r in x.entries for v in r)
    if m == 0:
        raise ZeroScale("all entries are zero; nothing to scale by")
    scaled = tuple(tuple(v / m for v in r) for r in x.entries)
    return VectorSequence(scaled, x.signed), m


@dataclass(frozen=True)
class BoundednessReport:
    max_partial_sum: Fraction  # max over F inside A of the sup-norm of the sum
    threshold: Fraction
    bounded: bool
    dual_sums: tuple[Fraction, ...]  # per coordinate k: sum over A of |x_n(k)|
    label: str = "finite check; the dual sums are a necessary-condition shadow only"


def boundedness_report(x: VectorSequence, points: Iterable[int], k) -> BoundednessReport:
    mask = x.ground().mask(points)
    cols = list(iter_bits(mask))
    k = Fraction(k)
    best = Fraction(0)
    duals = []
    for row in x.entries:
        pos = sum((row[n] for n in cols if row[n] > 0), Fraction(0))
        neg = sum((-row[n] for n in cols if row[n] < 0), Fraction(0))
        best = max(best, pos, neg)
        duals.append(pos + neg)
    return BoundednessReport(best, k, best <= k, tuple(duals))


def _last_above(values: Sequence[Fraction], t: Fraction) -> int | None:
    last = None
    for i, v in enumerate(values):
        if v > t:
            last = i
    return last


@dataclass(frozen=True)
class NullityReport:
    thresholds: tuple[Fraction, ...]
    # per column n, per threshold: last row index k with x_n(k) above it
    row_vanishing: tuple[tuple[int | None, ...], ...]
    # per row k, per threshold: last column index n with x_n(k) above it
    column_vanishing: tuple[tuple[int | None, ...], ...]
    column_norms: tuple[Fraction, ...]
    sup_singleton: Fraction
    label: str = TRUNCATION_LABEL


def nullity_diagnostics(x: VectorSequence, levels: int = 8) -> NullityReport:
    """Last index above each dyadic threshold 1, 1/2, ..., 2^-(levels-1).

    A ``None`` means the trend is below that threshold along the whole
    truncation. Nothing here is a statement about limits.
    """
    ts = tuple(Fraction(1, 2 ** i) for i in range(levels))
    a = [[abs(v) for v in r] for r in x.entries]
    cols = [[a[k][n] for k in range(x.rows)] for n in range(x.cols)]
    row_van = tuple(tuple(_last_above(c, t) for t in ts) for c in cols)
    col_van = tuple(tuple(_last_above(r, t) for t in ts) for r in a)
    norms = tuple(max(c) for c in cols)
    return NullityReport(ts, row_van, col_van, norms, max(norms))
