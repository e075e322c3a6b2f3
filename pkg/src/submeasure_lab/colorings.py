"""Pair and Schreier-barrier colorings, homogeneous sets, level partitions."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, comb
from typing import Callable, Iterable, Mapping, Sequence

from .banach import TRUNCATION_LABEL, VectorSequence
from .errors import (
    EntryAboveOne,
    InputError,
    Insufficient,
    NotBarrierSet,
    NotHomogeneous,
    SizeGuard,
)
from .rational import INF
from .setcover import min_cover
from .subsets import GroundSet, iter_bits, to_set

HOMOGENEOUS_LIMIT = 64
HOM_COVER_LIMIT = 20
FAVORS_COMBINATION_LIMIT = 1_000_000


# ---------------------------------------------------------------------------
# pair colorings


class PairColoring:
    """A total symmetric 0/1 coloring of the pairs of ``0..N-1``.

    Backed either by an explicit set of color-1 pairs or by a rule
    ``rule(x, y) -> 0|1`` called with ``x < y``. Neighbourhood masks are
    built on demand and cached.
    """

    def __init__(self, size: int, pairs1: Iterable[tuple[int, int]] | None = None,
                 rule: Callable[[int, int], int] | None = None, labels=None, name: str = ""):
        self.ground = GroundSet(size, labels)
        self.name = name
        if (pairs1 is None) == (rule is None):
            raise InputError("give exactly one of pairs1 or rule")
        self._rule = rule
        self._adj: dict[int, int] = {}
        if pairs1 is not None:
            adj = [0] * size
            for a, b in pairs1:
                a, b = int(a), int(b)
                if a == b or not (0 <= a < size and 0 <= b < size):
                    raise InputError(f"bad pair ({a}, {b})")
                adj[a] |= 1 << b
                adj[b] |= 1 << a
            self._adj = dict(enumerate(adj))
            self._rule = lambda x, y: (self._adj[x] >> y) & 1

    @property
    def size(self) -> int:
        return self.ground.size

    def color(self, x: int, y: int) -> int:
        if x == y:
            raise InputError("pairs need two distinct points")
        if x > y:
            x, y = y, x
        if not (0 <= x and y < self.size):
            raise InputError(f"pair ({x}, {y}) outside the ground")
        return self._rule(x, y)

    def adj1(self, x: int) -> int:
        """Mask of the points y with c{x, y} = 1."""
        m = self._adj.get(x)
        if m is None:
            m = 0
            for y in range(self.size):
                if y != x and self.color(x, y):
                    m |= 1 << y
            self._adj[x] = m
        return m

    def adj(self, x: int, color: int) -> int:
        m = self.adj1(x)
        if color == 1:
            return m
        return self.ground.full & ~m & ~(1 << x)

    def pairs1(self) -> list[tuple[int, int]]:
        return [(x, y) for x in range(self.size) for y in iter_bits(self.adj1(x)) if y > x]

    def restrict(self, points: Iterable[int]) -> "PairColoring":
        pts = sorted(set(points))
        labels = tuple(self.ground.label(p) for p in pts)
        return PairColoring(len(pts), rule=lambda x, y: self.color(pts[x], pts[y]),
                            labels=labels, name=self.name)

    def is_homogeneous(self, points: Iterable[int], color: int) -> bool:
        mask = self.ground.mask(points)
        return all(mask & ~self.adj(x, color) & ~(1 << x) == 0 for x in iter_bits(mask))


def _lex_least_clique(adj: Callable[[int], int], cand: int, size: int) -> tuple[int, ...] | None:
    """Lexicographically least clique of the given size inside ``cand``."""
    chosen: list[int] = []

    def go(cand: int) -> bool:
        if len(chosen) == size:
            return True
        need = size - len(chosen)
        while cand and cand.bit_count() >= need:
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            chosen.append(v)
            if go(cand & adj(v)):
                return True
            chosen.pop()
        return False

    return tuple(chosen) if go(cand) else None


def find_homogeneous(c: PairColoring, want="any", size: int = 2,
                     within: Iterable[int] | None = None,
                     limit: int = HOMOGENEOUS_LIMIT) -> frozenset | None:
    """Lexicographically least homogeneous set of the given size and color."""
    if c.size > limit:
        raise SizeGuard(f"homogeneous search needs at most {limit} points, got {c.size}")
    cand = c.ground.full if within is None else c.ground.mask(within)
    if size <= 0:
        return frozenset()
    colors = (0, 1) if want == "any" else (int(want),)
    best = None
    for col in colors:
        h = _lex_least_clique(lambda v, col=col: c.adj(v, col), cand, size)
        if h is not None and (best is None or h < best):
            best = h
    return None if best is None else frozenset(best)


def maximal_homogeneous(c: PairColoring, color: int, within: int) -> list[int]:
    """All maximal color-``color`` homogeneous subsets of ``within`` (Bron-Kerbosch with pivoting)."""
    out: list[int] = []

    def bk(r: int, p: int, x: int):
        if p == 0 and x == 0:
            out.append(r)
            return
        pivot_pool = p | x
        u = max(iter_bits(pivot_pool), key=lambda v: (c.adj(v, color) & p).bit_count())
        for v in list(iter_bits(p & ~c.adj(u, color))):
            nv = c.adj(v, color) & within
            bk(r | (1 << v), p & nv, x & nv)
            p &= ~(1 << v)
            x |= 1 << v

    if within:
        bk(0, within, 0)
    out.sort()
    return out


def max_homogeneous_size(c: PairColoring, color: int, within: int, cap: int | None = None) -> int:
    """Size of the largest homogeneous subset of ``within``, stopping early at ``cap``."""
    best = [0]

    def go(size: int, cand: int):
        if size > best[0]:
            best[0] = size
        if cap is not None and best[0] >= cap:
            return
        while cand:
            if size + cand.bit_count() <= best[0]:
                return
            low = cand & -cand
            v = low.bit_length() - 1
            cand ^= low
            go(size + 1, cand & c.adj(v, color))
            if cap is not None and best[0] >= cap:
                return

    go(0, within)
    return best[0] if cap is None else min(best[0], cap)


def hom_cover_number(c: PairColoring, points: Iterable[int], limit: int = HOM_COVER_LIMIT):
    """Least number of homogeneous sets (either color) whose union is A."""
    mask = c.ground.mask(points)
    if mask.bit_count() > limit:
        raise SizeGuard(f"homogeneous cover needs |A| <= {limit}")
    if mask == 0:
        return 0
    family = sorted(set(maximal_homogeneous(c, 0, mask) + maximal_homogeneous(c, 1, mask)))
    k, _ = min_cover(mask, family)
    return k


# ---------------------------------------------------------------------------
# named colorings


def stern_brocot_rationals(n: int) -> list[Fraction]:
    """0, 1, then the Stern-Brocot tree on (0, 1) breadth first, left to right."""
    out = [Fraction(0), Fraction(1)][:n]
    queue = deque([((0, 1), (1, 1))])
    while len(out) < n:
        (a, b), (c, d) = queue.popleft()
        mid = (a + c, b + d)
        out.append(Fraction(*mid))
        queue.append(((a, b), mid))
        queue.append((mid, (c, d)))
    return out


def gen_named_coloring(name: str, n: int | None = None, sizes: Sequence[int] | None = None) -> PairColoring:
    """``sierpinski`` on the first n rationals, or ``partition`` with pieces
    P_1, P_2, ... of the given sizes (pairs inside one piece get color 0)."""
    if name == "sierpinski":
        if n is None or n < 1:
            raise InputError("sierpinski needs n >= 1")
        if n > 10_000:
            raise SizeGuard("sierpinski coloring is limited to 10^4 points")
        rs = stern_brocot_rationals(n)
        return PairColoring(n, rule=lambda x, y: 0 if rs[x] < rs[y] else 1,
                            labels=tuple(rs), name="sierpinski")
    if name == "partition":
        if not sizes or any(s < 1 for s in sizes):
            raise InputError("partition needs positive piece sizes")
        piece = [p for p, s in enumerate(sizes, start=1) for _ in range(s)]
        return PairColoring(len(piece), rule=lambda x, y: 0 if piece[x] == piece[y] else 1,
                            labels=tuple((p, j) for p, s in enumerate(sizes, start=1)
                                         for j in range(s)),
                            name="partition")
    raise InputError(f"unknown coloring {name!r}")


def partition_pieces(sizes: Sequence[int]) -> list[int]:
    out, start = [], 0
    for s in sizes:
        out.append(((1 << s) - 1) << start)
        start += s
    return out


@dataclass(frozen=True)
class FavorsReport:
    color: int
    largest_opposite: int  # largest (1-i)-homogeneous set in the whole ground
    complements_checked: int
    min_in_complement: int  # over all complements, capped at ``sizes``
    worst_removed: tuple  # indices of the maximal i-homogeneous sets removed there
    sizes: int
    label: str = TRUNCATION_LABEL


def favors_color_check(c: PairColoring, i: int, hom_bound: int, sizes: int,
                       limit: int = HOMOGENEOUS_LIMIT) -> FavorsReport:
    """Finite shadow of "c favors color i".

    Removes every union of at most ``hom_bound`` maximal i-homogeneous sets
    and searches the rest for a (1-i)-homogeneous set of size ``sizes``.
    """
    if c.size > limit:
        raise SizeGuard(f"favors check needs at most {limit} points")
    full = c.ground.full
    other = 1 - i
    largest = max_homogeneous_size(c, other, full)
    hom = maximal_homogeneous(c, i, full)
    total = sum(comb(len(hom), r) for r in range(hom_bound + 1))
    if total > FAVORS_COMBINATION_LIMIT:
        raise SizeGuard(f"{total} combinations of homogeneous sets")
    worst, worst_idx, checked = None, (), 0
    seen: dict[int, int] = {}
    for r in range(hom_bound + 1):
        for combo in itertools.combinations(range(len(hom)), r):
            removed = 0
            for j in combo:
                removed |= hom[j]
            rest = full & ~removed
            checked += 1
            got = seen.get(rest)
            if got is None:
                got = max_homogeneous_size(c, other, rest, cap=sizes)
                seen[rest] = got
            if worst is None or got < worst:
                worst, worst_idx = got, combo
    return FavorsReport(i, largest, checked, worst, worst_idx, sizes)


# ---------------------------------------------------------------------------
# level partitions and the coloring built from them


def level_of(v: Fraction):
    """i with 2^-(i+1) < v <= 2^-i, or INF for v = 0."""
    if v < 0:
        raise InputError("levels need nonnegative entries")
    if v > 1:
        raise EntryAboveOne(f"entry {v} exceeds 1")
    if v == 0:
        return INF
    return (v.denominator // v.numerator).bit_length() - 1


@dataclass(frozen=True)
class PartitionSystem:
    matrix: VectorSequence
    levels: tuple[tuple, ...]  # levels[n][k]

    def level(self, n: int, k: int):
        return self.levels[n][k]

    def L(self, n: int) -> frozenset:
        return frozenset(i for i in self.levels[n] if i is not INF)

    def cells(self, n: int) -> dict:
        """A^n_i for every finite i that occurs, plus key INF for the zero cell."""
        out: dict = {}
        for k, i in enumerate(self.levels[n]):
            out.setdefault(i, set()).add(k)
        return {i: frozenset(s) for i, s in out.items()}

    @property
    def columns(self) -> int:
        return len(self.levels)


def level_partition(mat: VectorSequence) -> PartitionSystem:
    if mat.has_negative:
        raise InputError("level partition needs nonnegative entries")
    levels = tuple(tuple(level_of(mat.entries[k][n]) for k in range(mat.rows))
                   for n in range(mat.cols))
    return PartitionSystem(mat, levels)


def c0tall_color(ps: PartitionSystem, n: int, m: int) -> int:
    """For n < m: 1 iff wherever level(n, k) is finite, level(m, k) is INF or larger."""
    if n > m:
        n, m = m, n
    ln, lm = ps.levels[n], ps.levels[m]
    for a, b in zip(ln, lm):
        if a is not INF and b is not INF and b <= a:
            return 0
    return 1


def c0tall_coloring(ps: PartitionSystem) -> PairColoring:
    return PairColoring(ps.columns, rule=lambda x, y: c0tall_color(ps, x, y), name="c0tall")


@dataclass(frozen=True)
class Color1Certificate:
    max_mass: Fraction
    row: int
    bound: Fraction = Fraction(2)

    @property
    def holds(self) -> bool:
        return self.max_mass <= self.bound


def verify_color1_bound(ps: PartitionSystem, points: Iterable[int]) -> Color1Certificate:
    """Check H is 1-homogeneous, then report max_k mu_k(H) against 2."""
    h = sorted(set(points))
    for a, b in itertools.combinations(h, 2):
        if c0tall_color(ps, a, b) != 1:
            raise NotHomogeneous(f"pair ({a}, {b}) has color 0")
    rows = ps.matrix.entries
    best, arg = Fraction(0), 0
    for k, row in enumerate(rows):
        s = sum((row[n] for n in h), Fraction(0))
        if s > best:
            best, arg = s, k
    return Color1Certificate(best, arg)


def c0tall_threshold(ps: PartitionSystem, n: int) -> int | None:
    """Least m > n with c{n, l} = 1 for every checked l >= m, or None."""
    m = ps.columns
    for l in range(ps.columns - 1, n, -1):
        if c0tall_color(ps, n, l) == 1:
            m = l
        else:
            break
    return None if m == ps.columns else m


def dyadic_round(mat: VectorSequence) -> VectorSequence:
    """lambda_k({n}) = i/2^n for i/2^n < mu_k({n}) <= (i+1)/2^n, else 0."""
    rows = []
    for row in mat.entries:
        out = []
        for n, v in enumerate(row):
            if v < 0:
                raise InputError("dyadic rounding needs nonnegative entries")
            if v > 1:
                raise EntryAboveOne(f"entry {v} exceeds 1")
            scale = 1 << n
            out.append(Fraction(ceil(v * scale) - 1, scale) if v > 0 else Fraction(0))
        rows.append(tuple(out))
    return VectorSequence(tuple(rows))


# ---------------------------------------------------------------------------
# Schreier barrier


class BarrierColoring:
    """c({q, n_1..n_q}) = 1 iff some row k has mu_k({n_j}) >= 2^-(p+1) for every j."""

    def __init__(self, mat: VectorSequence, p: int):
        if p < 0:
            raise InputError("p must be nonnegative")
        if any(v > 1 for r in mat.entries for v in r):
            raise EntryAboveOne("matrix entries must be at most 1")
        self.matrix = mat
        self.p = p
        self.threshold = Fraction(1, 2 ** (p + 1))
        self.ground = mat.ground()
        # heavy[n] = mask of rows k with mu_k({n}) >= threshold
        heavy = []
        for n in range(mat.cols):
            m = 0
            for k in range(mat.rows):
                if mat.entries[k][n] >= self.threshold:
                    m |= 1 << k
            heavy.append(m)
        self._heavy = heavy
        self._all_rows = (1 << mat.rows) - 1

    def color(self, s: Iterable[int]) -> int:
        pts = sorted(set(s))
        if not pts or len(pts) != pts[0] + 1:
            raise NotBarrierSet(f"{pts} is not a Schreier barrier set")
        if pts[-1] >= self.ground.size:
            raise NotBarrierSet("set leaves the ground")
        rows = self._all_rows
        for n in pts[1:]:
            rows &= self._heavy[n]
        return 1 if rows else 0

    def barrier_sets(self, points: Iterable[int]):
        pts = sorted(set(points))
        for idx, q in enumerate(pts):
            for rest in itertools.combinations(pts[idx + 1:], q):
                yield (q,) + rest

    def is_homogeneous(self, points: Iterable[int], color: int) -> bool:
        return all(self.color(s) == color for s in self.barrier_sets(points))


def schreier_coloring(mat: VectorSequence, p: int) -> BarrierColoring:
    return BarrierColoring(mat, p)


@dataclass(frozen=True)
class Color0Certificate:
    q: int
    mass: Fraction  # max_k mu_k(H minus {q})
    bound: int

    @property
    def holds(self) -> bool:
        return self.mass <= self.bound


def verify_color0_bound(bc: BarrierColoring, points: Iterable[int]) -> Color0Certificate:
    h = sorted(set(points))
    if not h:
        raise InputError("H must be nonempty")
    if not bc.is_homogeneous(h, 0):
        raise NotHomogeneous("H is not homogeneous of color 0")
    q = h[0]
    best = Fraction(0)
    for row in bc.matrix.entries:
        s = sum((row[n] for n in h[1:]), Fraction(0))
        best = max(best, s)
    return Color0Certificate(q, best, q + 2)


def find_color0_homogeneous(bc: BarrierColoring, within: Sequence[int], size: int) -> tuple | None:
    """Lexicographically least color-0 homogeneous subset of ``within`` of the given size."""
    pts = sorted(set(within))
    chosen: list[int] = []

    def ok_with(v: int) -> bool:
        # every new barrier set contains v as its largest element
        trial = chosen + [v]
        for idx, q in enumerate(trial[:-1]):
            need = q - 1  # elements strictly between q and v
            mids = trial[idx + 1:-1]
            if need < 0 or need > len(mids):
                continue
            for mid in itertools.combinations(mids, need):
                if bc.color((q,) + mid + (v,)) == 1:
                    return False
        if v == 0:
            return bc.color((0,)) == 0
        return True

    def go(start: int) -> bool:
        if len(chosen) == size:
            return True
        for j in range(start, len(pts)):
            if len(pts) - j < size - len(chosen):
                return False
            if ok_with(pts[j]):
                chosen.append(pts[j])
                if go(j + 1):
                    return True
                chosen.pop()
        return False

    return tuple(chosen) if go(0) else None


# ---------------------------------------------------------------------------
# eventually disjoint subsequences


Row = Mapping[int, frozenset]


def _normalize_rows(rows: Sequence[Mapping]) -> list[dict[int, frozenset]]:
    out = []
    for r in rows:
        d = {}
        for i, cell in r.items():
            if i is INF:
                continue
            cell = frozenset(cell)
            if cell:
                d[int(i)] = cell
        out.append(d)
    return out


def _check_disjoint_cells(rows: list[dict]) -> None:
    for n, r in enumerate(rows):
        seen: set = set()
        for cell in r.values():
            if seen & cell:
                raise InputError(f"cells of row {n} overlap")
            seen |= cell


def is_eventually_disjoint(rows: Sequence[Mapping], indices: Iterable[int], p: int) -> bool:
    """B^n_i and B^m_i disjoint for all i > p and distinct n, m among the indices."""
    rs = _normalize_rows(rows)
    idx = sorted(set(indices))
    for a, b in itertools.combinations(idx, 2):
        ra, rb = rs[a], rs[b]
        for i, cell in ra.items():
            if i > p and i in rb and cell & rb[i]:
                return False
    return True


def _separated(rows, cand: list[int]) -> list[int]:
    out, top = [], -1
    for n in cand:
        r = rows[n]
        if not r:
            out.append(n)
            continue
        if min(r) > top:
            out.append(n)
            top = max(r)
    return out


def _extract(rows, cand: list[int], l: int, target: int) -> tuple[list[int], int]:
    nonempty = [n for n in cand if rows[n]]
    if l == 0 or not nonempty:
        if len(cand) < target:
            raise Insufficient(f"found {len(cand)} rows, need {target}")
        return cand, 0
    counts: dict[int, int] = {}
    for n in nonempty:
        v = min(rows[n])
        counts[v] = counts.get(v, 0) + 1
    empties = len(cand) - len(nonempty)
    for v in sorted(counts):
        if counts[v] + empties < target:
            continue
        sub = [n for n in cand if not rows[n] or min(rows[n]) == v]
        stripped = list(rows)
        for n in sub:
            if rows[n] and min(rows[n]) == v:
                stripped[n] = {i: c for i, c in rows[n].items() if i != v}
        try:
            got, p = _extract(stripped, sub, l - 1, target)
        except Insufficient:
            continue
        return got, max(p, v)
    got = _separated(rows, cand)
    if len(got) < target:
        raise Insufficient(f"found {len(got)} rows, need {target}")
    return got, 0


@dataclass(frozen=True)
class EventuallyDisjoint:
    indices: tuple[int, ...]
    p: int
    verified: bool
    label: str = TRUNCATION_LABEL


def eventually_disjoint_subsequence(rows: Sequence[Mapping], l: int, target: int) -> EventuallyDisjoint:
    """Pick at least ``target`` rows that are eventually disjoint past some p.

    Each row maps a level i to its cell B^n_i. A level shared as the least
    level by ``target`` rows is peeled off and the rest handled with l-1;
    otherwise rows with strictly separated level ranges are taken greedily.
    """
    rs = _normalize_rows(rows)
    _check_disjoint_cells(rs)
    for n, r in enumerate(rs):
        if len(r) > l:
            raise InputError(f"row {n} has {len(r)} nonempty cells, more than l = {l}")
    got, p = _extract(rs, list(range(len(rs))), l, target)
    ok = is_eventually_disjoint(rs, got, p)
    if not ok:
        raise AssertionError("extracted rows are not eventually disjoint")
    return EventuallyDisjoint(tuple(got), p, ok)


def level_rows(ps: PartitionSystem) -> list[dict[int, frozenset]]:
    """Rows Q_n = {A^n_i : i finite} of a partition system."""
    return [{i: c for i, c in ps.cells(n).items() if i is not INF} for n in range(ps.columns)]
