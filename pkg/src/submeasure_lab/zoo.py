"""Deterministic finite truncations of the standard example submeasures."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Sequence

from .banach import VectorSequence
from .core import Arity, MazurChain, Measure, MinCover, SupMeasures, TableSubmeasure
from .errors import BlockTooSmall, InputError, SizeGuard
from .pathology import CoveringInstance
from .subsets import GroundSet, iter_bits, to_set

MAX_PROPERTY_A_POINTS = 20_000


@dataclass(frozen=True)
class StagedFamily:
    """Disjoint blocks of one ground with per-block payload."""

    ground: GroundSet
    blocks: tuple[int, ...]
    names: tuple  # one name per block, e.g. (n, k)
    payload: dict = field(default_factory=dict)
    phi: object = None

    def __post_init__(self):
        seen = 0
        for b in self.blocks:
            if b & seen:
                raise InputError("blocks must be pairwise disjoint")
            if b & ~self.ground.full:
                raise InputError("block outside the ground")
            seen |= b

    def block(self, name) -> int:
        return self.blocks[self.names.index(name)]


def _blocks_from_sizes(sizes: Sequence[int]) -> list[int]:
    out, start = [], 0
    for s in sizes:
        if s < 1:
            raise InputError("block sizes must be positive")
        out.append(((1 << s) - 1) << start)
        start += s
    return out


def gen_minimal_pathological() -> TableSubmeasure:
    """0 on the empty set, 1 on sets of size 1 or 2, 2 on {0, 1, 2}."""
    values = {m: Fraction(min(m.bit_count(), 1) if m != 7 else 2) for m in range(8)}
    return TableSubmeasure(GroundSet(3), values)


# ---------------------------------------------------------------------------
# pieces and selectors


def gen_ed(sizes: Sequence[int], check_sup: bool = True) -> tuple[MazurChain, SupMeasures | None]:
    """Chain submeasure generated by pieces and selectors, and the sup of
    counting measures on (n+1)-subsets of block n."""
    if len(sizes) < 2:
        raise InputError("need at least two blocks")
    blocks = _blocks_from_sizes(sizes)
    labels = tuple((n, j) for n, s in enumerate(sizes) for j in range(s))
    ground = GroundSet(sum(sizes), labels)
    selectors = []
    for pick in itertools.product(*[list(iter_bits(b)) for b in blocks]):
        m = 0
        for p in pick:
            m |= 1 << p
        selectors.append(m)
    chain = MazurChain(ground, blocks + selectors, Arity("level"))
    sup = None
    if check_sup:
        measures = []
        for n, b in enumerate(blocks):
            pts = list(iter_bits(b))
            if len(pts) < n + 1:
                raise BlockTooSmall(f"block {n} has {len(pts)} points, needs {n + 1}")
            for f in itertools.combinations(pts, n + 1):
                measures.append(Measure.counting(ground, f))
        sup = SupMeasures(measures)
    return chain, sup


def gen_edfin(n: int) -> tuple[SupMeasures, CoveringInstance]:
    """Ground C_0 + ... + C_n with |C_k| = k+1; sup of counting measures on
    each C_k; chains {C_0} + one point from each later C_k."""
    if n < 1:
        raise InputError("level must be at least 1")
    if n > 6:
        raise SizeGuard(f"{factorial(n + 1)} chains at level {n}; the limit is level 6")
    sizes = [k + 1 for k in range(n + 1)]
    blocks = _blocks_from_sizes(sizes)
    labels = tuple((k, j) for k, s in enumerate(sizes) for j in range(s))
    ground = GroundSet(sum(sizes), labels)
    psi = SupMeasures([Measure.counting(ground, iter_bits(b)) for b in blocks])
    chains = [blocks[0]]
    for b in blocks[1:]:
        chains = [s | (1 << j) for s in chains for j in iter_bits(b)]
    return psi, CoveringInstance(ground, tuple(chains))


def edfin_blocks(n: int) -> list[int]:
    return _blocks_from_sizes([k + 1 for k in range(n + 1)])


# ---------------------------------------------------------------------------
# hats over functions and over clopen codes


def gen_mazur(n: int) -> tuple[MinCover, CoveringInstance]:
    """Functions n -> 2n in lexicographic order; hat i = functions missing i."""
    if n < 1:
        raise InputError("level must be at least 1")
    if n > 4:
        raise SizeGuard(f"|K_{n}| = {(2 * n) ** n} points; the limit is n = 4")
    m = 2 * n
    funcs = list(itertools.product(range(m), repeat=n))
    ground = GroundSet(len(funcs), tuple(funcs))
    family = []
    for i in range(m):
        h = 0
        for idx, f in enumerate(funcs):
            if i not in f:
                h |= 1 << idx
        family.append(h)
    return MinCover(ground, family), CoveringInstance(ground, tuple(family))


def omega_points(n: int) -> list[int]:
    """2^n-bit masks with exactly 2^(n-1) bits set, increasing."""
    width = 1 << n
    out = []
    for bits in itertools.combinations(range(width), width // 2):
        m = 0
        for b in bits:
            m |= 1 << b
        out.append(m)
    out.sort()
    return out


def gen_solecki(n: int) -> tuple[MinCover, CoveringInstance]:
    """Omega_n with the hats {b : bit s of b is set} for s < 2^n."""
    if n < 2:
        raise InputError("level must be at least 2")
    if n > 4:
        raise SizeGuard(f"|Omega_{n}| = {comb(1 << n, 1 << (n - 1))}; the limit is n = 4")
    pts = omega_points(n)
    ground = GroundSet(len(pts), tuple(pts))
    family = []
    for s in range(1 << n):
        h = 0
        for idx, b in enumerate(pts):
            if b >> s & 1:
                h |= 1 << idx
        family.append(h)
    return MinCover(ground, family), CoveringInstance(ground, tuple(family))


# ---------------------------------------------------------------------------
# property A example


def property_a_block_size(variant: str, n: int, k: int) -> int:
    base = (1 << n) * (n + 1)
    if variant == "a":
        return base
    if variant == "b":
        return (n + 1) * ((1 << n) + k)
    raise InputError(f"unknown variant {variant!r}")


def gen_propertyA(variant: str, stages: tuple[int, int]) -> StagedFamily:
    """Blocks B_n^k for n <= n_max, k <= k_max, laid out n-major.

    nu_n^k spreads mass n+1 uniformly over B_n^k. The truncated phi is the
    sup over s in {0..k_max}^(n_max+1) of sum_n nu_n^{s(n)}; since the
    blocks are disjoint this equals sum_n sup_k nu_n^k.
    """
    n_max, k_max = stages
    if n_max < 1 or k_max < 1:
        raise InputError("stages must be at least (1, 1)")
    sizes, names = [], []
    for n in range(n_max + 1):
        for k in range(k_max + 1):
            sizes.append(property_a_block_size(variant, n, k))
            names.append((n, k))
    total = sum(sizes)
    if total > MAX_PROPERTY_A_POINTS:
        raise SizeGuard(f"{total} points exceeds {MAX_PROPERTY_A_POINTS}")
    n_measures = (k_max + 1) ** (n_max + 1)
    if n_measures > 100_000:
        raise SizeGuard(f"{n_measures} measures in the truncated sup")
    blocks = _blocks_from_sizes(sizes)
    labels = tuple((n, k, j) for (n, k), s in zip(names, sizes) for j in range(s))
    ground = GroundSet(total, labels)
    nu = {}
    for name, b, s in zip(names, blocks, sizes):
        nu[name] = (b, Fraction(name[0] + 1, s))
    measures = []
    for choice in itertools.product(range(k_max + 1), repeat=n_max + 1):
        w = [Fraction(0)] * total
        for n, k in enumerate(choice):
            b, v = nu[(n, k)]
            for i in iter_bits(b):
                w[i] = v
        measures.append(Measure(ground, tuple(w)))
    stage_masks = []
    for n in range(n_max + 1):
        m = 0
        for k in range(k_max + 1):
            m |= nu[(n, k)][0]
        stage_masks.append(m)
    payload = {"variant": variant, "stages": (n_max, k_max),
               "nu": {name: v for name, (_, v) in nu.items()}, "B": tuple(stage_masks)}
    return StagedFamily(ground, tuple(blocks), tuple(names), payload, SupMeasures(measures))


def property_a_phi_sum(fam: StagedFamily, mask: int) -> Fraction:
    """sum_n sup_k nu_n^k(A), the defining form, used as a cross-check."""
    total = Fraction(0)
    per_stage: dict[int, Fraction] = {}
    for name, b in zip(fam.names, fam.blocks):
        v = fam.payload["nu"][name] * (mask & b).bit_count()
        per_stage[name[0]] = max(per_stage.get(name[0], Fraction(0)), v)
    for v in per_stage.values():
        total += v
    return total


@dataclass(frozen=True)
class PropertyABound:
    variant: str
    epsilon: Fraction
    N: int
    k_bound: Fraction | None  # variant b: M_eps avoids B_n^k for k >= this
    m_eps: frozenset | None  # points of the truncation with phi({x}) >= eps
    certified: bool | None


def propertyA_bound(variant: str, epsilon, fam: StagedFamily | None = None) -> PropertyABound:
    """Least N with 2^-N < eps; with a truncation, check that every x with
    phi({x}) >= eps lies in B_0..B_(N-1) (and, for variant b, in a block
    B_n^k with k < 1/eps)."""
    eps = Fraction(epsilon)
    if eps <= 0:
        raise InputError("epsilon must be positive")
    if variant not in ("a", "b"):
        raise InputError(f"unknown variant {variant!r}")
    N = 0
    while Fraction(1, 2 ** N) >= eps:
        N += 1
    k_bound = 1 / eps if variant == "b" else None
    if fam is None:
        return PropertyABound(variant, eps, N, k_bound, None, None)
    phi = fam.phi
    m_eps = 0
    for i in range(fam.ground.size):
        if phi.value(1 << i) >= eps:
            m_eps |= 1 << i
    allowed = 0
    for (n, k), b in zip(fam.names, fam.blocks):
        if n < N and (k_bound is None or k < k_bound):
            allowed |= b
    return PropertyABound(variant, eps, N, k_bound, to_set(m_eps), m_eps & ~allowed == 0)


# ---------------------------------------------------------------------------


def gen_finxempty(sizes: Sequence[int]) -> tuple[VectorSequence, list[int]]:
    """x_n = m e_n for n in block B_m, blocks numbered from 1."""
    if not sizes:
        raise InputError("need at least one block")
    blocks = _blocks_from_sizes(sizes)
    total = sum(sizes)
    rows = [[Fraction(0)] * total for _ in range(total)]
    for m, b in enumerate(blocks, start=1):
        for n in iter_bits(b):
            rows[n][n] = Fraction(m)
    return VectorSequence(tuple(tuple(r) for r in rows)), blocks
