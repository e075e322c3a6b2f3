"""Ground sets and bitmask helpers.

Subsets of a ground ``{0, ..., N-1}`` are passed around internally as Python
ints used as bitsets (bit ``i`` set iff point ``i`` is in the set). Public
functions accept any iterable of ints and hand back frozensets.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import EmptyGround, GroundMismatch


@dataclass(frozen=True)
class GroundSet:
    size: int
    labels: tuple | None = None

    def __post_init__(self):
        if self.size < 1:
            raise EmptyGround("ground set must have at least one point")
        if self.labels is not None:
            if len(self.labels) != self.size:
                raise GroundMismatch("labels must match ground size")
            if len(set(self.labels)) != self.size:
                raise GroundMismatch("labels must be distinct")

    @property
    def full(self) -> int:
        return (1 << self.size) - 1

    def mask(self, points) -> int:
        return to_mask(points, self.size)

    def label(self, i: int):
        return self.labels[i] if self.labels is not None else i


def to_mask(points, size: int | None = None) -> int:
    if isinstance(points, int) and not isinstance(points, bool):
        raise TypeError("pass subsets as iterables of points, not bare ints")
    m = 0
    for p in points:
        if not isinstance(p, int) or p < 0 or (size is not None and p >= size):
            raise GroundMismatch(f"point {p!r} is not in the ground of size {size}")
        m |= 1 << p
    return m


def members(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_set(mask: int) -> frozenset[int]:
    return frozenset(iter_bits(mask))


def popcount(mask: int) -> int:
    return mask.bit_count()


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask``, including 0 and ``mask`` itself."""
    s = mask
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & mask


def order_key(mask: int) -> tuple:
    """Size first, then lexicographic on the sorted member tuple."""
    return (mask.bit_count(), tuple(iter_bits(mask)))


def masks_in_order(full: int) -> list[int]:
    """All submasks of ``full`` in size-then-lexicographic order."""
    return sorted(submasks(full), key=order_key)


def sorted_tuple(points: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(points))
