"""Pushforward submeasures and the explicit reduction of Mazur rows to Omega levels."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .core import FiniteSubmeasure, MinCover, guard_ground
from .errors import GroundMismatch, InputError, SizeGuard
from .pathology import PathologyReport, hat_mask, pathology_degree
from .rational import RationalX
from .setcover import min_cover
from .subsets import GroundSet, iter_bits, masks_in_order, to_set
from .zoo import gen_mazur, gen_solecki, omega_points

MONOTONICITY_LIMIT = 12


@dataclass(frozen=True)
class PointMap:
    source: GroundSet
    target: GroundSet
    images: tuple[int, ...]

    def __post_init__(self):
        imgs = tuple(int(y) for y in self.images)
        if len(imgs) != self.source.size:
            raise GroundMismatch("the map needs one image per source point")
        if any(not 0 <= y < self.target.size for y in imgs):
            raise GroundMismatch("image outside the target ground")
        object.__setattr__(self, "images", imgs)
        fibers = [0] * self.target.size
        for x, y in enumerate(imgs):
            fibers[y] |= 1 << x
        object.__setattr__(self, "_fibers", tuple(fibers))

    @classmethod
    def of(cls, images: Sequence[int], target_size: int) -> "PointMap":
        return cls(GroundSet(len(images)), GroundSet(target_size), tuple(images))

    def __call__(self, x: int) -> int:
        return self.images[x]

    def preimage(self, mask: int) -> int:
        out = 0
        for y in iter_bits(mask):
            out |= self._fibers[y]
        return out

    def image(self, mask: int) -> int:
        out = 0
        for x in iter_bits(mask):
            out |= 1 << self.images[x]
        return out


class Pushforward(FiniteSubmeasure):
    """phi_f(A) = phi(f^-1(A)); points with empty fibers get value 0."""

    kind = "pushforward"

    def __init__(self, phi: FiniteSubmeasure, f: PointMap):
        if phi.ground.size != f.source.size:
            raise GroundMismatch("submeasure and map disagree on the source ground")
        super().__init__(f.target)
        self.phi = phi
        self.map = f

    def _eval(self, mask):
        return self.phi.value(self.map.preimage(mask))


def pushforward(phi: FiniteSubmeasure, f: PointMap) -> Pushforward:
    return Pushforward(phi, f)


@dataclass(frozen=True)
class MonotonicityReport:
    degree_image: RationalX | None
    degree_source: RationalX | None
    verdict: str  # "holds", "fails" or "undefined"
    hat_violations: tuple = ()  # target sets A with hat(phi_f)(A) < hat(phi)(f^-1 A)

    @property
    def holds(self) -> bool:
        return self.verdict != "fails" and not self.hat_violations


def pathology_monotonicity_check(phi: FiniteSubmeasure, f: PointMap, check_hats: bool = True,
                                 limit: int = MONOTONICITY_LIMIT) -> MonotonicityReport:
    """Compare P(phi_f) with P(phi); optionally compare hats on every target set."""
    guard_ground(phi.ground.size, limit, "monotonicity check (source)")
    guard_ground(f.target.size, limit, "monotonicity check (target)")
    pf = pushforward(phi, f)
    src: PathologyReport = pathology_degree(phi, limit=limit)
    img: PathologyReport = pathology_degree(pf, limit=limit)
    if src.degree is None or img.degree is None:
        verdict = "undefined"
    else:
        verdict = "holds" if img.degree <= src.degree else "fails"
    bad = []
    if check_hats:
        for a in masks_in_order(f.target.full):
            if hat_mask(pf, a).value < hat_mask(phi, f.preimage(a)).value:
                bad.append(to_set(a))
    return MonotonicityReport(img.degree, src.degree, verdict, tuple(bad))


# ---------------------------------------------------------------------------
# Mazur rows -> Omega levels


def binary_string(j: int, length: int) -> str:
    """s_j: j written in binary with ``length`` digits, most significant first."""
    return format(j, f"0{length}b")


@dataclass(frozen=True)
class SoleckiReduction:
    n: int
    map: PointMap
    rows: tuple[tuple[int, ...], ...]  # X: injective functions 2^n -> 2^(n+1)
    psi_x: MinCover  # Mazur hats restricted to X
    chi: MinCover  # level n+1 of the Solecki submeasure
    removed_measure: Fraction  # measure of the removed cylinders, the same for every row


def solecki_reduction_map(n: int) -> SoleckiReduction:
    """f(r) = complement of the cylinders of s_{r(j)}, j < 2^n, inside Omega_(n+1).

    Bit j of an Omega_(n+1) point stands for the cylinder of s_j, so f(r) is
    the mask of the strings whose index is not a value of r.
    """
    if not 1 <= n <= 2:
        raise SizeGuard("the reduction is limited to levels 1 and 2")
    d = 1 << n  # domain size of the rows
    width = 2 * d  # number of strings of length n+1
    _, mazur_inst = gen_mazur(d)
    funcs = mazur_inst.ground.labels
    rows = [(idx, r) for idx, r in enumerate(funcs) if len(set(r)) == len(r)]
    chi, _ = gen_solecki(n + 1)
    omega = omega_points(n + 1)
    where = {b: i for i, b in enumerate(omega)}
    full = (1 << width) - 1
    images = []
    removed = None
    for _, r in rows:
        cut = 0
        for v in r:
            cut |= 1 << v
        if cut.bit_count() != d:
            raise AssertionError("removed cylinders are not distinct")
        meas = Fraction(d, width)
        if removed is None:
            removed = meas
        elif meas != removed:
            raise AssertionError("removed measure depends on the row")
        images.append(where[full & ~cut])
    source = GroundSet(len(rows), tuple(r for _, r in rows))
    fmap = PointMap(source, chi.ground, tuple(images))
    # hats restricted to X, reindexed onto the source ground
    hats = []
    for h in mazur_inst.family:
        m = 0
        for t, (idx, _) in enumerate(rows):
            if h >> idx & 1:
                m |= 1 << t
        hats.append(m)
    psi_x = MinCover(source, hats)
    return SoleckiReduction(n, fmap, tuple(r for _, r in rows), psi_x, chi, removed)


@dataclass
class ReductionReport:
    n: int
    forward: list = field(default_factory=list)  # (string, j, fiber equals hat, cover value)
    backward: list = field(default_factory=list)  # (N, J, image inside tildes, chi of image)
    exact_subsets: int | None = None  # target sets where chi(A) == psi_X(f^-1 A)
    exact_mismatches: int | None = None
    x_cover_number: RationalX | None = None
    label: str = "finite-level check; the ideal-level statement is not decided here"

    @property
    def ok(self) -> bool:
        d = 1 << self.n
        good = all(eq and v == 1 for _, _, eq, v in self.forward)
        good = good and all(ins and v <= N for N, _, ins, v in self.backward)
        if self.exact_mismatches:
            good = False
        return good and self.x_cover_number is not None and self.x_cover_number > d


def verify_solecki_reduction(n: int, Ns: Iterable[int] | None = None, exact: bool | None = None) -> ReductionReport:
    """Forward: f^-1(s~_j) = hat j inside X. Backward: for each J of size N,
    the rows avoiding some j in J map into the union of the s~_j, so the
    image has chi at most N. Also: X needs more than 2^n hats."""
    red = solecki_reduction_map(n)
    fmap, psi_x, chi = red.map, red.psi_x, red.chi
    width = 2 << n
    rep = ReductionReport(n)
    for j in range(width):
        tilde = chi.family[j]
        fiber = fmap.preimage(tilde)
        rep.forward.append((binary_string(j, n + 1), j, fiber == psi_x.family[j], psi_x.value(fiber)))
    if Ns is None:
        Ns = range(1, width + 1)
    for N in Ns:
        for J in itertools.combinations(range(width), N):
            rows = 0
            tildes = 0
            for j in J:
                rows |= psi_x.family[j]
                tildes |= chi.family[j]
            img = fmap.image(rows)
            rep.backward.append((N, J, img & ~tildes == 0, chi.value(img)))
    if exact is None:
        exact = chi.ground.size <= 12
    if exact:
        guard_ground(chi.ground.size, 16, "exact pushforward comparison")
        mism = 0
        for a in range(1 << chi.ground.size):
            if chi.value(a) != psi_x.value(fmap.preimage(a)):
                mism += 1
        rep.exact_subsets = 1 << chi.ground.size
        rep.exact_mismatches = mism
    k, _ = min_cover(psi_x.ground.full, list(psi_x.family))
    rep.x_cover_number = k
    return rep
