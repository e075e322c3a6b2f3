"""Exact minimum set cover by branch and bound over bitmask families."""

from __future__ import annotations

from .rational import INF

_PIVOT_SCAN = 48


def greedy_cover(target: int, family: list[int]) -> list[int] | None:
    """Largest-gain greedy cover; ties go to the lowest family index."""
    uncovered = target
    chosen = []
    while uncovered:
        best, gain = -1, 0
        for idx, s in enumerate(family):
            g = (s & uncovered).bit_count()
            if g > gain:
                best, gain = idx, g
        if best < 0:
            return None
        chosen.append(best)
        uncovered &= ~family[best]
    return chosen


def min_cover(target: int, family: list[int]) -> tuple[int, tuple[int, ...]] | tuple[object, None]:
    """Least number of family sets whose union contains ``target``.

    Returns ``(k, indices)`` or ``(INF, None)`` when no cover exists. The
    search branches on the uncovered point with the fewest available sets
    (lowest point on ties) and tries its sets in index order, excluding
    earlier siblings from later branches so each subfamily is visited once.
    """
    if target == 0:
        return 0, ()
    union = 0
    for s in family:
        union |= s
    if target & ~union:
        return INF, None

    restricted = [s & target for s in family]
    greedy = greedy_cover(target, restricted)
    best = [len(greedy), tuple(sorted(greedy))]
    if best[0] <= 1:
        return best[0], best[1]

    order = [i for i, s in enumerate(restricted) if s]

    def lower_bound(uncovered: int, avail: list[int]) -> int:
        need = uncovered.bit_count()
        top = 0
        for i in avail:
            g = (restricted[i] & uncovered).bit_count()
            if g > top:
                top = g
        if top == 0:
            return 1 << 30
        return -(-need // top)

    def search(uncovered: int, avail: list[int], chosen: list[int]):
        if uncovered == 0:
            if len(chosen) < best[0]:
                best[0] = len(chosen)
                best[1] = tuple(sorted(chosen))
            return
        if len(chosen) + lower_bound(uncovered, avail) >= best[0]:
            return
        # pick the uncovered point with fewest available covering sets,
        # scanning a bounded prefix of the uncovered points
        pivot_sets = None
        u = uncovered
        scanned = 0
        while u and scanned < _PIVOT_SCAN:
            scanned += 1
            low = u & -u
            u ^= low
            cands = [i for i in avail if restricted[i] & low]
            if pivot_sets is None or len(cands) < len(pivot_sets):
                pivot_sets = cands
                if len(cands) <= 1:
                    break
        if not pivot_sets:
            return
        remaining = list(avail)
        for i in pivot_sets:
            remaining.remove(i)
            chosen.append(i)
            search(uncovered & ~restricted[i], remaining, chosen)
            chosen.pop()
            if len(chosen) + 1 >= best[0]:
                return

    search(target, order, [])
    return best[0], best[1]
