"""Finite submeasures: representations, evaluation, axiom checks, constructions."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping, Sequence

from . import config
from .errors import (
    DeadlineExceeded,
    EmptyRestriction,
    GroundMismatch,
    InputError,
    LevelCapExceeded,
    MissingEntry,
    NonIntegerValue,
    NotAttained,
    SizeGuard,
)
from .rational import INF, RationalX, as_rational
from .setcover import min_cover
from .subsets import GroundSet, iter_bits, order_key, to_mask, to_set

DEFAULT_LEVEL_CAP = 32


@dataclass(frozen=True)
class Measure:
    ground: GroundSet
    weights: tuple[Fraction, ...]

    def __post_init__(self):
        ws = tuple(as_rational(w) for w in self.weights)
        if len(ws) != self.ground.size:
            raise GroundMismatch("one weight per ground point is required")
        for w in ws:
            if w is INF or w < 0:
                raise InputError("measure weights must be finite and nonnegative")
        object.__setattr__(self, "weights", ws)

    @classmethod
    def of(cls, weights: Sequence, labels: tuple | None = None) -> "Measure":
        return cls(GroundSet(len(weights), labels), tuple(weights))

    @classmethod
    def counting(cls, ground: GroundSet, support: Iterable[int]) -> "Measure":
        sup = set(support)
        return cls(ground, tuple(Fraction(1 if i in sup else 0) for i in range(ground.size)))

    def mass_mask(self, mask: int) -> Fraction:
        w = self.weights
        return sum((w[i] for i in iter_bits(mask)), Fraction(0))

    def mass(self, points: Iterable[int]) -> Fraction:
        return self.mass_mask(self.ground.mask(points))

    @property
    def total(self) -> Fraction:
        return sum(self.weights, Fraction(0))

    def dominated_by(self, phi: "FiniteSubmeasure", masks: Iterable[int]) -> bool:
        return all(self.mass_mask(m) <= phi.value(m) for m in masks)


class FiniteSubmeasure:
    """A set function on ``{0..N-1}``; values are memoized per subset mask.

    Instances are treated as immutable once built. The memo cache is the only
    mutable state and holds pure function values.
    """

    kind = "abstract"

    def __init__(self, ground: GroundSet):
        self.ground = ground
        self._cache: dict[int, RationalX] = {}
        self._aux: dict = {}

    def __call__(self, points: Iterable[int]) -> RationalX:
        return self.value(self.ground.mask(points))

    def value(self, mask: int) -> RationalX:
        if mask & ~self.ground.full or mask < 0:
            raise GroundMismatch(f"subset {sorted(to_set(mask & ~self.ground.full))} lies outside the ground")
        v = self._cache.get(mask)
        if v is None:
            v = self._eval(mask) if mask else self._eval_empty()
            self._cache[mask] = v
        return v

    def _eval_empty(self) -> RationalX:
        return self._eval(0)

    def _eval(self, mask: int) -> RationalX:
        raise NotImplementedError

    @property
    def size(self) -> int:
        return self.ground.size

    def __repr__(self):
        return f"<{type(self).__name__} kind={self.kind} ground={self.ground.size}>"


class TableSubmeasure(FiniteSubmeasure):
    kind = "table"

    def __init__(self, ground: GroundSet, values: Mapping[int, RationalX]):
        super().__init__(ground)
        self.values = {int(m): as_rational(v) for m, v in values.items()}
        for m in self.values:
            if m & ~ground.full:
                raise GroundMismatch("table entry outside the ground")

    @classmethod
    def from_sets(cls, size: int, values: Mapping[Iterable[int], RationalX], labels=None):
        ground = GroundSet(size, labels)
        return cls(ground, {to_mask(k, size): v for k, v in values.items()})

    def _eval(self, mask):
        try:
            return self.values[mask]
        except KeyError:
            raise MissingEntry(f"table has no entry for {sorted(to_set(mask))}") from None


class SupMeasures(FiniteSubmeasure):
    kind = "sup_measures"

    def __init__(self, measures: Sequence[Measure]):
        if not measures:
            raise InputError("sup_of_measures needs at least one measure")
        ground = measures[0].ground
        for mu in measures:
            if mu.ground.size != ground.size:
                raise GroundMismatch("all measures must share one ground")
        super().__init__(ground)
        self.measures = tuple(measures)
        # integer weights over one common denominator keep evaluation cheap
        den = 1
        for mu in self.measures:
            for w in mu.weights:
                den = lcm(den, w.denominator)
        self._den = den
        self._int_weights = [
            [int(w * den) for w in mu.weights] for mu in self.measures
        ]

    def _eval(self, mask):
        bits = list(iter_bits(mask))
        best = 0
        for ws in self._int_weights:
            s = sum([ws[i] for i in bits])
            if s > best:
                best = s
        return Fraction(best, self._den)


class MinCover(FiniteSubmeasure):
    """Value of A = least number of family sets covering A (INF if none)."""

    kind = "min_cover"

    def __init__(self, ground: GroundSet, family: Sequence[int]):
        super().__init__(ground)
        fam = tuple(int(s) for s in family)
        for s in fam:
            if s & ~ground.full:
                raise GroundMismatch("family set outside the ground")
        self.family = fam
        # signature of a point: bitmask of family indices containing it
        sig = [0] * ground.size
        for j, s in enumerate(fam):
            for i in iter_bits(s):
                sig[i] |= 1 << j
        self.signatures = tuple(sig)
        self._sig_cache: dict[frozenset, RationalX] = {}

    @classmethod
    def from_sets(cls, size: int, family: Iterable[Iterable[int]], labels=None):
        ground = GroundSet(size, labels)
        return cls(ground, [to_mask(s, size) for s in family])

    def signature_set(self, mask: int) -> frozenset:
        sig = self.signatures
        return frozenset(sig[i] for i in iter_bits(mask))

    def _eval(self, mask):
        if mask == 0:
            return Fraction(0)
        sigs = self.signature_set(mask)
        cached = self._sig_cache.get(sigs)
        if cached is not None:
            return cached
        if 0 in sigs:
            v = INF
        else:
            # points sharing a signature are interchangeable: cover the
            # distinct signatures instead of the points
            elems = sorted(sigs)
            fam = []
            for j in range(len(self.family)):
                bit = 1 << j
                m = 0
                for e, s in enumerate(elems):
                    if s & bit:
                        m |= 1 << e
                fam.append(m)
            k, _ = min_cover((1 << len(elems)) - 1, fam)
            v = k if k is INF else Fraction(k)
        self._sig_cache[sigs] = v
        return v

    def cover(self, points) -> tuple[int, ...] | None:
        """An optimal cover (family indices) of the given points."""
        _, idx = min_cover(self.ground.mask(points), list(self.family))
        return idx


@dataclass(frozen=True)
class Arity:
    """How many level-(L-1) sets are united to form level L (L >= 2).

    ``constant`` uses ``value`` at every level; ``level`` uses L itself.
    """

    kind: str = "constant"
    value: int = 2

    def __post_init__(self):
        if self.kind not in ("constant", "level"):
            raise InputError(f"unknown arity schedule {self.kind!r}")
        if self.kind == "constant" and self.value < 2:
            raise InputError("arity must be at least 2")

    def __call__(self, level: int) -> int:
        return self.value if self.kind == "constant" else max(2, level)


def _antichain(sets: Iterable[int]) -> list[int]:
    """Maximal elements under inclusion, deduplicated, in a fixed order."""
    uniq = sorted(set(sets), key=lambda m: (-m.bit_count(), m))
    out: list[int] = []
    for s in uniq:
        if not any(s & ~t == 0 for t in out):
            out.append(s)
    return out


class MazurChain(FiniteSubmeasure):
    """phi(A) = least L with A in K_L.

    K_1 is the hereditary closure of the generators plus all singletons and
    K_L consists of unions of ``arity(L)`` members of K_(L-1).
    """

    kind = "mazur_chain"

    def __init__(self, ground: GroundSet, level1: Sequence[int], arity: Arity = Arity(),
                 level_cap: int = DEFAULT_LEVEL_CAP):
        super().__init__(ground)
        gens = tuple(int(g) for g in level1)
        for g in gens:
            if g & ~ground.full:
                raise GroundMismatch("level-1 set outside the ground")
        if level_cap < 1:
            raise InputError("level cap must be positive")
        self.level1 = gens
        self.arity = arity
        self.level_cap = level_cap

    def _eval(self, mask):
        if mask == 0:
            return Fraction(0)
        if mask.bit_count() == 1 or any(mask & ~g == 0 for g in self.level1):
            return Fraction(1)
        current = _antichain([g & mask for g in self.level1] + [1 << i for i in iter_bits(mask)])
        for level in range(2, self.level_cap + 1):
            unions = list(current)
            for _ in range(self.arity(level) - 1):
                grown = [u | c for u in unions for c in current]
                unions = _antichain(grown)
                if mask in unions:
                    return Fraction(level)
            if mask in unions:
                return Fraction(level)
            current = unions
        raise LevelCapExceeded(self.level_cap)


class DirectSum(FiniteSubmeasure):
    """psi(A) = phi1(A restricted to the first block) + phi2(rest), grounds placed side by side."""

    kind = "direct_sum"

    def __init__(self, first: FiniteSubmeasure, second: FiniteSubmeasure):
        n1, n2 = first.ground.size, second.ground.size
        labels = None
        if first.ground.labels is not None or second.ground.labels is not None:
            labels = tuple(("L", first.ground.label(i)) for i in range(n1)) + tuple(
                ("R", second.ground.label(i)) for i in range(n2))
        super().__init__(GroundSet(n1 + n2, labels))
        self.first = first
        self.second = second
        self._split = n1

    def _eval(self, mask):
        low = mask & ((1 << self._split) - 1)
        return self.first.value(low) + self.second.value(mask >> self._split)


class Restriction(FiniteSubmeasure):
    """phi on the points of X, relabeled 0..|X|-1 in increasing order."""

    kind = "restriction"

    def __init__(self, parent: FiniteSubmeasure, points: Sequence[int]):
        pts = tuple(sorted(set(points)))
        if not pts:
            raise EmptyRestriction("cannot restrict to the empty set")
        parent.ground.mask(pts)
        labels = tuple(parent.ground.label(p) for p in pts)
        super().__init__(GroundSet(len(pts), labels))
        self.parent = parent
        self.points = pts

    def lift(self, mask: int) -> int:
        out = 0
        for i in iter_bits(mask):
            out |= 1 << self.points[i]
        return out

    def _eval(self, mask):
        return self.parent.value(self.lift(mask))


# ---------------------------------------------------------------------------
# operations


def evaluate(phi: FiniteSubmeasure, points: Iterable[int]) -> RationalX:
    return phi(points)


def guard_ground(size: int, limit: int | None = None, what: str = "exhaustive sweep") -> None:
    limit = config.max_ground() if limit is None else limit
    if size > limit:
        raise SizeGuard(f"{what} needs a ground of at most {limit} points, got {size}")


def all_values(phi: FiniteSubmeasure, limit: int | None = None) -> list[RationalX]:
    """phi on every subset, indexed by mask."""
    guard_ground(phi.ground.size, limit)
    return [phi.value(m) for m in range(1 << phi.ground.size)]


def materialize(phi: FiniteSubmeasure, limit: int = 16) -> TableSubmeasure:
    if phi.ground.size > limit:
        raise SizeGuard(f"table with 2^{phi.ground.size} entries exceeds 2^{limit}")
    vals = all_values(phi, limit)
    return TableSubmeasure(phi.ground, dict(enumerate(vals)))


def sup_of_measures(measures: Sequence[Measure]) -> SupMeasures:
    return SupMeasures(measures)


def mazur_from_chain(ground, level1: Iterable[Iterable[int]], arity=2,
                     level_cap: int = DEFAULT_LEVEL_CAP) -> MazurChain:
    if isinstance(ground, int):
        ground = GroundSet(ground)
    if not isinstance(arity, Arity):
        arity = Arity("level") if arity == "level" else Arity("constant", int(arity))
    return MazurChain(ground, [ground.mask(s) for s in level1], arity, level_cap)


def direct_sum(first: FiniteSubmeasure, second: FiniteSubmeasure) -> DirectSum:
    return DirectSum(first, second)


def restrict(phi: FiniteSubmeasure, points: Iterable[int]) -> Restriction:
    return Restriction(phi, list(points))


def group_metric(phi: FiniteSubmeasure, a: Iterable[int], b: Iterable[int]) -> RationalX:
    """d(A, B) = phi(A symmetric-difference B)."""
    return phi.value(phi.ground.mask(a) ^ phi.ground.mask(b))


# ---------------------------------------------------------------------------
# axiom checking


@dataclass
class AxiomReport:
    mode: str  # "exhaustive" or "sampled"
    checked: int
    violation_count: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.violation_count == 0

    def add(self, kind: str, *sets, limit: int = 1000):
        self.violation_count += 1
        if len(self.violations) < limit:
            self.violations.append((kind,) + tuple(to_set(s) for s in sets))


def _integerize(values: Sequence[RationalX]) -> list[int]:
    """Scale finite values to integers; INF becomes a value above any finite sum."""
    den = 1
    top = 0
    for v in values:
        if v is not INF:
            den = lcm(den, v.denominator)
    out = []
    for v in values:
        if v is INF:
            out.append(None)
        else:
            iv = int(v * den)
            top = max(top, iv)
            out.append(iv)
    big = 2 * top + 1
    return [big if v is None else v for v in out]


def check_axioms(phi: FiniteSubmeasure, exhaustive: bool | None = None, samples: int = 10_000,
                 seed: int = 0, limit: int | None = None,
                 deadline: float | None = None) -> AxiomReport:
    """Check phi(empty)=0, monotonicity and subadditivity.

    Exhaustive when the ground fits the guard (default 16 points), otherwise
    ``samples`` random pairs (A, B) are checked on the triple (A, B, A u B).
    """
    n = phi.ground.size
    limit = config.max_ground() if limit is None else limit
    if exhaustive is None:
        exhaustive = n <= limit
    if exhaustive:
        guard_ground(n, limit, "exhaustive axiom check")
        return _check_exhaustive(phi, deadline)
    return _check_sampled(phi, samples, seed, deadline)


def _check_exhaustive(phi, deadline) -> AxiomReport:
    n = phi.ground.size
    full = (1 << n) - 1
    raw = all_values(phi, n)
    vals = _integerize(raw)
    rep = AxiomReport("exhaustive", 1 << n)
    if raw[0] != 0:
        rep.add("empty", 0)
    for m in range(full + 1):
        vm = vals[m]
        rest = full & ~m
        while rest:
            low = rest & -rest
            rest ^= low
            if vm > vals[m | low]:
                rep.add("monotone", m, m | low)
    for c in range(1, full + 1):
        if deadline is not None and (c & 0xFFF) == 0 and time.monotonic() > deadline:
            raise DeadlineExceeded("axiom check interrupted", {"subsets_done": c, "violations": rep.violation_count})
        low = c & -c
        rest = c ^ low
        if not rest:
            continue
        vc = vals[c]
        # splits {A, B} of c with the lowest point of c in A; B nonempty
        s = rest
        while True:
            a = s | low
            b = c ^ a
            if b and vc > vals[a] + vals[b]:
                rep.add("subadditive", a, b)
            if s == 0:
                break
            s = (s - 1) & rest
    return rep


def _check_sampled(phi, samples, seed, deadline) -> AxiomReport:
    from .rng import make_rng, random_mask

    gen = make_rng(seed)
    n = phi.ground.size
    rep = AxiomReport("sampled", samples)
    if phi.value(0) != 0:
        rep.add("empty", 0)
    for t in range(samples):
        if deadline is not None and (t & 0xFF) == 0 and time.monotonic() > deadline:
            raise DeadlineExceeded("axiom check interrupted", {"samples_done": t, "violations": rep.violation_count})
        a = random_mask(gen, n)
        b = random_mask(gen, n)
        va, vb, vu = phi.value(a), phi.value(b), phi.value(a | b)
        if va > vu:
            rep.add("monotone", a, a | b)
        if vb > vu:
            rep.add("monotone", b, a | b)
        if vu > va + vb:
            rep.add("subadditive", a, b)
    return rep


# ---------------------------------------------------------------------------
# integer-valued submeasures


def _require_integer(v: RationalX) -> RationalX:
    if v is not INF and v.denominator != 1:
        raise NonIntegerValue(f"value {v} is not an integer")
    return v


def integer_valued_probe(phi: FiniteSubmeasure, k: int, limit: int | None = None) -> frozenset[int]:
    """A subset-minimal B with phi(B) = k: every proper subset has value < k.

    Greedy descent from the whole ground, removing points in increasing order
    while the value stays >= k. When singletons have value 1 and phi is
    subadditive the descent ends exactly at k; otherwise an exhaustive
    size-ordered search is used on small grounds.
    """
    if k < 1:
        raise InputError("k must be a positive integer")
    full = phi.ground.full
    top = _require_integer(phi.value(full))
    if top < k:
        raise NotAttained(
            f"{k} exceeds phi(ground) = {top}; a finite ground cannot certify the unbounded statement")
    cur = full
    for i in range(phi.ground.size):
        bit = 1 << i
        if cur & bit:
            cand = cur ^ bit
            if _require_integer(phi.value(cand)) >= k:
                cur = cand
    if phi.value(cur) == k:
        return to_set(cur)
    guard_ground(phi.ground.size, limit, "exhaustive probe")
    for m in sorted(range(1, full + 1), key=order_key):
        if _require_integer(phi.value(m)) == k and all(
                _require_integer(phi.value(m ^ (1 << i))) < k for i in iter_bits(m)):
            return to_set(m)
    raise NotAttained(f"value {k} is not attained on this finite ground")
