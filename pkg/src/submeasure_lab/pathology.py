"""Maximal dominated measures, degree of pathology, covering numbers."""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from . import config
from .core import FiniteSubmeasure, Measure, MinCover, guard_ground
from .errors import (
    CoverageGap,
    DeadlineExceeded,
    GroundMismatch,
    HypothesisFailure,
    InfiniteSingleton,
    InputError,
    NonIntegerValue,
    NotProbability,
    SizeGuard,
)
from .lp import UnboundedLP, maximize
from .rational import INF, RationalX, rdiv
from .subsets import GroundSet, iter_bits, masks_in_order, order_key, to_mask, to_set

HAT_SUBSET_LIMIT = 14


@dataclass(frozen=True)
class HatResult:
    value: Fraction
    witness: Measure
    basis: tuple  # tight constraints at the optimum: subsets, or family indices
    constraints: str  # "subsets", "subsets-full" or "family"


@dataclass
class PathologyReport:
    degree: RationalX | None
    argmax: frozenset | None
    scope: str
    lower_bound_only: bool
    checked: int
    skipped_zero_hat: int
    ratios: dict | None = None

    @property
    def defined(self) -> bool:
        return self.degree is not None


# ---------------------------------------------------------------------------
# hat: largest mass on A of a measure dominated by phi


def hat(phi: FiniteSubmeasure, points: Iterable[int], constraints: str = "auto",
        limit: int = HAT_SUBSET_LIMIT) -> HatResult:
    """Solve ``max mu(A)`` over measures ``mu <= phi`` supported on A.

    ``constraints``: ``"family"`` (min-cover only; one row per family set),
    ``"subsets"`` (one row per B inside A, added lazily by separation) or
    ``"full"`` (every B inside A as a row up front). ``"auto"`` picks
    ``family`` for min-cover submeasures and ``subsets`` otherwise.
    """
    mask = phi.ground.mask(points)
    return hat_mask(phi, mask, constraints, limit)


def hat_mask(phi: FiniteSubmeasure, mask: int, constraints: str = "auto",
             limit: int = HAT_SUBSET_LIMIT, seeds: Iterable[int] = ()) -> HatResult:
    if constraints == "auto":
        constraints = "family" if isinstance(phi, MinCover) else "subsets"
    if constraints == "family":
        if not isinstance(phi, MinCover):
            raise InputError("family constraints need a min-cover submeasure")
        return _hat_family(phi, mask)
    if constraints not in ("subsets", "full"):
        raise InputError(f"unknown constraint mode {constraints!r}")
    return _hat_subsets(phi, mask, lazy=(constraints == "subsets"), limit=limit, seeds=seeds)


def _zero_result(phi, mode) -> HatResult:
    return HatResult(Fraction(0), Measure(phi.ground, (Fraction(0),) * phi.ground.size), (), mode)


def _hat_family(phi: MinCover, mask: int) -> HatResult:
    if mask == 0:
        return _zero_result(phi, "family")
    sig = phi.signatures
    reps: dict[int, int] = {}
    for i in iter_bits(mask):
        s = sig[i]
        if s == 0:
            raise InfiniteSingleton(f"point {i} lies in no family set, so phi({{{i}}}) = inf")
        reps.setdefault(s, i)
    key = frozenset(reps)
    cache = phi._aux.setdefault("hat_family", {})
    hit = cache.get(key)
    if hit is None:
        sigs = sorted(reps)  # fixed column order, independent of the points
        rows, labels = [], []
        for j in range(len(phi.family)):
            bit = 1 << j
            row = [1 if s & bit else 0 for s in sigs]
            if any(row):
                rows.append(row)
                labels.append(j)
        res = maximize([1] * len(sigs), rows, [1] * len(rows))
        hit = (res.value, dict(zip(sigs, res.x)), tuple(labels[t] for t in res.tight))
        cache[key] = hit
    value, by_sig, tight = hit
    weights = [Fraction(0)] * phi.ground.size
    for s, i in reps.items():
        weights[i] = by_sig[s]
    return HatResult(value, Measure(phi.ground, tuple(weights)), tight, "family")


def _hat_subsets(phi: FiniteSubmeasure, mask: int, lazy: bool, limit: int,
                 seeds: Iterable[int] = ()) -> HatResult:
    mode = "subsets" if lazy else "subsets-full"
    if mask == 0:
        return _zero_result(phi, mode)
    pts = list(iter_bits(mask))
    k = len(pts)
    if k > limit:
        raise SizeGuard(f"subset-constraint hat needs |A| <= {limit}, got {k}")

    def lift(local: int) -> int:
        out = 0
        for t in iter_bits(local):
            out |= 1 << pts[t]
        return out

    nloc = 1 << k
    ground_of = [0] * nloc
    for local in range(1, nloc):
        low = local & -local
        ground_of[local] = ground_of[local ^ low] | (1 << pts[low.bit_length() - 1])
    vals = [phi.value(ground_of[local]) for local in range(nloc)]
    for t in range(k):
        if vals[1 << t] is INF:
            raise InfiniteSingleton(f"phi({{{pts[t]}}}) = inf makes the hat LP unbounded")
    finite = [local for local in range(1, nloc) if vals[local] is not INF]

    if not lazy:
        active = finite
    else:
        seed_local = set()
        inv = {p: t for t, p in enumerate(pts)}
        for g in seeds:
            if g & ~mask == 0 and g:
                loc = 0
                for p in iter_bits(g):
                    loc |= 1 << inv[p]
                if vals[loc] is not INF:
                    seed_local.add(loc)
        active = sorted({1 << t for t in range(k)} | seed_local
                        | ({nloc - 1} if vals[nloc - 1] is not INF else set()), key=order_key)

    den = 1
    for local in finite:
        den = lcm(den, vals[local].denominator)
    scaled = [0] * nloc
    for local in finite:
        scaled[local] = int(vals[local] * den)

    while True:
        rows = [[1 if (local >> t) & 1 else 0 for t in range(k)] for local in active]
        rhs = [vals[local] for local in active]
        try:
            res = maximize([1] * k, rows, rhs)
        except UnboundedLP:  # pragma: no cover - singletons bound every variable
            raise InfiniteSingleton("hat LP unbounded") from None
        if not lazy:
            break
        # separation: most violated subsets B with mu(B) > phi(B)
        xden = 1
        for v in res.x:
            xden = lcm(xden, v.denominator)
        w = [int(v * xden) for v in res.x]
        mass = [0] * nloc
        worst = []
        for local in range(1, nloc):
            low = local & -local
            mass[local] = mass[local ^ low] + w[low.bit_length() - 1]
            if vals[local] is INF:
                continue
            gap = mass[local] * den - scaled[local] * xden
            if gap > 0:
                worst.append((-gap, order_key(local), local))
        if not worst:
            break
        worst.sort()
        active_set = set(active)
        for _, _, local in worst[:4]:
            active_set.add(local)
        active = sorted(active_set, key=order_key)

    weights = [Fraction(0)] * phi.ground.size
    for t, p in enumerate(pts):
        weights[p] = res.x[t]
    tight = tuple(to_set(lift(active[i])) for i in res.tight)
    return HatResult(res.value, Measure(phi.ground, tuple(weights)), tight, mode)


# ---------------------------------------------------------------------------
# degree of pathology


def pathology_degree(phi: FiniteSubmeasure, scope="all", limit: int | None = None,
                     keep_ratios: bool = False, constraints: str = "auto",
                     deadline: float | None = None) -> PathologyReport:
    """Max of phi(A) / hat(A) over the scope, skipping A with hat(A) = 0.

    ``scope="all"`` sweeps every nonempty subset of the ground; any other
    value is taken as an explicit family of subsets, and the report is then
    only a lower bound for the degree.
    """
    if isinstance(scope, str):
        if scope != "all":
            raise InputError(f"unknown scope {scope!r}")
        guard_ground(phi.ground.size, limit, "all-subsets pathology degree")
        masks = masks_in_order(phi.ground.full)[1:]
        scope_name, lower = "all", False
    else:
        masks = sorted({phi.ground.mask(s) for s in scope} - {0}, key=order_key)
        scope_name, lower = "family", True

    best: RationalX | None = None
    arg = None
    skipped = 0
    ratios = {} if keep_ratios else None
    tight_of: dict[int, tuple] = {}
    for count, m in enumerate(masks):
        if deadline is not None and (count & 0x3F) == 0 and time.monotonic() > deadline:
            raise DeadlineExceeded("pathology sweep interrupted", {
                "subsets_done": count, "degree_so_far": best,
                "argmax_so_far": None if arg is None else to_set(arg)})
        seeds = set()
        if scope_name == "all" and not isinstance(phi, MinCover):
            for i in iter_bits(m):
                for t in tight_of.get(m ^ (1 << i), ()):
                    seeds.add(t)
        h = hat_mask(phi, m, constraints, seeds=seeds)
        if h.constraints != "family" and scope_name == "all":
            tight_of[m] = tuple(to_mask(s) for s in h.basis)
        if h.value == 0:
            skipped += 1
            continue
        r = rdiv(phi.value(m), h.value)
        if ratios is not None:
            ratios[to_set(m)] = r
        if best is None or r > best:
            best, arg = r, m
    return PathologyReport(best, None if arg is None else to_set(arg), scope_name, lower,
                           len(masks), skipped, ratios)


def _as_int(v: RationalX) -> RationalX:
    if v is INF:
        return v
    if v.denominator != 1:
        raise NonIntegerValue(f"value {v} is not an integer")
    return v


def pathological_criterion(phi: FiniteSubmeasure, limit: int | None = None) -> frozenset | None:
    """First A (size, then lexicographic) with |A| >= 2, phi(A) < |A| and
    phi(A minus x) < phi(A) for every x in A.

    A hit shows phi is pathological. ``None`` certifies nothing.
    """
    guard_ground(phi.ground.size, limit, "pathological criterion search")
    for m in masks_in_order(phi.ground.full):
        size = m.bit_count()
        if size < 2:
            continue
        v = _as_int(phi.value(m))
        if v is INF or v >= size:
            continue
        if all(_as_int(phi.value(m ^ (1 << i))) < v for i in iter_bits(m)):
            return to_set(m)
    return None


# ---------------------------------------------------------------------------
# covering numbers


@dataclass(frozen=True)
class CoveringInstance:
    ground: GroundSet
    family: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "family", tuple(int(s) for s in self.family))
        for s in self.family:
            if s & ~self.ground.full:
                raise GroundMismatch("covering set outside the ground")

    @classmethod
    def from_sets(cls, size: int, family: Iterable[Iterable[int]], labels=None):
        ground = GroundSet(size, labels)
        return cls(ground, tuple(ground.mask(s) for s in family))

    def sets(self) -> list[frozenset]:
        return [to_set(s) for s in self.family]

    @property
    def union(self) -> int:
        u = 0
        for s in self.family:
            u |= s
        return u


@dataclass(frozen=True)
class CoveringStats:
    multiplicity: tuple[int, ...]  # B(i): number of family sets containing point i
    m: int
    family_size: int
    delta: Fraction


def _multiplicities(points: int, family: Sequence[int]) -> dict[int, int]:
    counts = {i: 0 for i in iter_bits(points)}
    for s in family:
        for i in iter_bits(s & points):
            counts[i] += 1
    return counts


def covering_stats(inst: CoveringInstance) -> CoveringStats:
    if not inst.family:
        raise CoverageGap("empty family covers nothing")
    gap = inst.ground.full & ~inst.union
    if gap:
        raise CoverageGap(f"points {sorted(to_set(gap))} are not covered")
    counts = _multiplicities(inst.ground.full, inst.family)
    b = tuple(counts[i] for i in range(inst.ground.size))
    m = min(b)
    return CoveringStats(b, m, len(inst.family), Fraction(m, len(inst.family)))


def block_delta(block: int, family: Sequence[int]) -> Fraction:
    """delta(I, S) for a block I inside a larger ground."""
    if not family:
        raise CoverageGap("empty family covers nothing")
    u = 0
    for s in family:
        u |= s
    if block & ~u:
        raise CoverageGap(f"points {sorted(to_set(block & ~u))} of the block are not covered")
    counts = _multiplicities(block, family)
    return Fraction(min(counts.values()), len(family))


@dataclass(frozen=True)
class KelleyPick:
    index: int
    members: frozenset
    mass: Fraction


def _pick_heaviest(weights: Sequence[Fraction], family: Sequence[int]) -> tuple[int, Fraction]:
    best, best_mass = -1, Fraction(-1)
    for j, s in enumerate(family):
        mass = sum((weights[i] for i in iter_bits(s)), Fraction(0))
        if mass > best_mass:
            best, best_mass = j, mass
    return best, best_mass


def kelley_witness(inst: CoveringInstance, pi: Measure) -> KelleyPick:
    """A covering set s with pi(s) >= delta(K, S): the heaviest one, lowest index on ties."""
    if pi.ground.size != inst.ground.size:
        raise GroundMismatch("measure and covering instance have different grounds")
    if pi.total != 1:
        raise NotProbability(f"total mass is {pi.total}, expected 1")
    stats = covering_stats(inst)
    j, mass = _pick_heaviest(pi.weights, inst.family)
    if mass < stats.delta:
        raise AssertionError(f"covering lemma failed: max mass {mass} < delta {stats.delta}")
    return KelleyPick(j, to_set(inst.family[j]), mass)


@dataclass(frozen=True)
class BoundCertificate:
    max_mass: Fraction
    bound: Fraction
    delta: Fraction
    M: Fraction
    witness: Measure

    @property
    def holds(self) -> bool:
        return self.max_mass <= self.bound


def uniform_bound_check(phi: FiniteSubmeasure, inst: CoveringInstance, M) -> BoundCertificate:
    """Largest total mass of a measure dominated by phi on K, against M / delta."""
    if phi.ground.size != inst.ground.size:
        raise GroundMismatch("submeasure and covering instance have different grounds")
    M = Fraction(M)
    for j, s in enumerate(inst.family):
        v = phi.value(s)
        if v > M:
            raise HypothesisFailure(f"covering set {j} has phi = {v} > M = {M}")
    stats = covering_stats(inst)
    h = hat_mask(phi, inst.ground.full)
    return BoundCertificate(h.value, M / stats.delta, stats.delta, M, h.witness)


@dataclass(frozen=True)
class WitnessSet:
    members: frozenset
    mass: Fraction
    required: Fraction
    picks: tuple  # per block: chosen family index or None

    @property
    def holds(self) -> bool:
        return self.mass >= self.required


def pathology_witness_set(blocks: Sequence[Iterable[int]], families: Sequence[Sequence[Iterable[int]]],
                          mu: Measure, delta) -> WitnessSet:
    """Per block pick s_j with mu(s_j) >= delta * mu(I_j); return their union B."""
    delta = Fraction(delta)
    ground = mu.ground
    bmasks = [ground.mask(b) for b in blocks]
    if len(families) != len(bmasks):
        raise InputError("one covering family per block is required")
    seen = 0
    for b in bmasks:
        if b & seen:
            raise HypothesisFailure("blocks must be pairwise disjoint")
        seen |= b
    support = 0
    for i, w in enumerate(mu.weights):
        if w:
            support |= 1 << i
    if support & ~seen:
        raise HypothesisFailure("measure has mass outside the blocks")
    union = 0
    picks = []
    for b, fam in zip(bmasks, families):
        fmasks = [ground.mask(s) for s in fam]
        if any(s & ~b for s in fmasks):
            raise HypothesisFailure("covering sets must lie inside their block")
        try:
            bd = block_delta(b, fmasks)
        except CoverageGap as e:
            raise HypothesisFailure(str(e)) from None
        if delta > bd:
            raise HypothesisFailure(f"delta {delta} exceeds the block covering number {bd}")
        block_mass = mu.mass_mask(b)
        if block_mass == 0:
            picks.append(None)
            continue
        j, mass = _pick_heaviest(mu.weights, fmasks)
        if mass < bd * block_mass:
            raise AssertionError("covering lemma failed on a block")
        picks.append(j)
        union |= fmasks[j]
    total = mu.mass_mask(seen)
    return WitnessSet(to_set(union), mu.mass_mask(union), delta * total, tuple(picks))
