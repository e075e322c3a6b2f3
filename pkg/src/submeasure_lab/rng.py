"""Seeded randomness for sampled checks and random instance suites.

Every stream is a numpy ``Generator`` over the counter-based Philox4x64
bit generator keyed by ``SeedSequence([seed, *path])``. Named sub-streams
(``substream(seed, "color1", 17)``) are independent of each other and of the
order in which they are drawn, which keeps suites reproducible when rows run
in a different order.
"""

from __future__ import annotations

import zlib
from fractions import Fraction

import numpy as np

from .core import FiniteSubmeasure, MazurChain, Measure, MinCover, SupMeasures, Arity
from .subsets import GroundSet


def _key(part) -> int:
    if isinstance(part, int):
        return part & 0xFFFFFFFF
    return zlib.crc32(str(part).encode())


def make_rng(seed: int, *path) -> np.random.Generator:
    ss = np.random.SeedSequence([_key(seed)] + [_key(p) for p in path])
    return np.random.Generator(np.random.Philox(ss))


substream = make_rng


def random_mask(gen: np.random.Generator, n: int, max_size: int = 24) -> int:
    """A random subset whose size is uniform on 0..min(n, max_size)."""
    k = int(gen.integers(0, min(n, max_size) + 1))
    pts = gen.choice(n, size=k, replace=False) if k else []
    m = 0
    for p in pts:
        m |= 1 << int(p)
    return m


def random_fraction(gen: np.random.Generator, max_den: int = 8, top: int = 1,
                    zero_prob: float = 0.0) -> Fraction:
    """A rational in [0, top] with denominator at most ``max_den``."""
    if zero_prob and gen.random() < zero_prob:
        return Fraction(0)
    den = int(gen.integers(1, max_den + 1))
    num = int(gen.integers(0, top * den + 1))
    return Fraction(num, den)


def random_measures(gen: np.random.Generator, n: int, count: int, max_den: int = 6,
                    top: int = 2, zero_prob: float = 0.3) -> list[Measure]:
    ground = GroundSet(n)
    out = []
    for _ in range(count):
        ws = [random_fraction(gen, max_den, top, zero_prob) for _ in range(n)]
        out.append(Measure(ground, tuple(ws)))
    return out


def random_family(gen: np.random.Generator, n: int, count: int, covering: bool = True) -> list[int]:
    fam = []
    for _ in range(count):
        m = 0
        while m == 0:
            m = int(gen.integers(1, 1 << n))
        fam.append(m)
    if covering:
        union = 0
        for s in fam:
            union |= s
        missing = ((1 << n) - 1) & ~union
        for i in range(n):
            if missing >> i & 1:
                j = int(gen.integers(0, len(fam)))
                fam[j] |= 1 << i
    return fam


def random_submeasure(gen: np.random.Generator, n: int) -> FiniteSubmeasure:
    """One of: min-cover over a random covering family, sup of random
    measures, or a Mazur chain over random generators."""
    kind = int(gen.integers(0, 3))
    ground = GroundSet(n)
    if kind == 0:
        return MinCover(ground, random_family(gen, n, int(gen.integers(1, n + 2))))
    if kind == 1:
        ms = random_measures(gen, n, int(gen.integers(1, 5)))
        return SupMeasures(ms)
    gens = random_family(gen, n, int(gen.integers(1, n + 1)), covering=False)
    ar = Arity("constant", 2) if gen.random() < 0.5 else Arity("level")
    return MazurChain(ground, gens, ar)
