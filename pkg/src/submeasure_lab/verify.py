"""Named verification suites.

Each suite yields rows ``(check, expected, tag, computed, verdict)``. Tags
say where the expected value comes from: ``PAPER`` (a published formula),
``DERIVED`` (an independent computation) or ``TRIVIAL`` (by definition).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable, Iterator

from .banach import phi_of_sequence, sequence_of_phi
from .colorings import (
    c0tall_coloring,
    dyadic_round,
    level_partition,
    maximal_homogeneous,
    verify_color1_bound,
)
from .core import SupMeasures, check_axioms
from .banach import VectorSequence
from .pathology import (
    CoveringInstance,
    covering_stats,
    hat_mask,
    pathological_criterion,
    pathology_degree,
    uniform_bound_check,
)
from .rational import INF, format_rational
from .reductions import PointMap, pathology_monotonicity_check, verify_solecki_reduction
from .rng import make_rng, random_family, random_fraction, random_measures, random_submeasure
from .setcover import min_cover
from .subsets import GroundSet, iter_bits
from .zoo import (
    edfin_blocks,
    gen_ed,
    gen_edfin,
    gen_finxempty,
    gen_mazur,
    gen_minimal_pathological,
    gen_propertyA,
    gen_solecki,
    propertyA_bound,
    property_a_phi_sum,
)

PAPER, DERIVED, TRIVIAL = "PAPER", "DERIVED", "TRIVIAL"


@dataclass(frozen=True)
class Row:
    target: str
    check: str
    expected: object
    tag: str
    computed: object
    ok: bool

    @property
    def verdict(self) -> str:
        return "pass" if self.ok else "fail"


def _text(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, Fraction):
        return format_rational(v)
    if v is None:
        return "undefined"
    if isinstance(v, (frozenset, set, tuple, list)):
        return "{" + ",".join(_text(x) for x in sorted(v)) + "}"
    if v is INF:
        return "inf"
    return str(v)


def _row(target, check, expected, tag, computed, ok=None) -> Row:
    if ok is None:
        ok = expected == computed
    return Row(target, check, _text(expected), tag, _text(computed), bool(ok))


def _count(target, check, tag, passed, total) -> Row:
    return Row(target, check, f"{total}/{total}", tag, f"{passed}/{total}", passed == total)


# ---------------------------------------------------------------------------


def suite_minpath(**_) -> Iterator[Row]:
    t = "minpath"
    phi = gen_minimal_pathological()
    yield _row(t, "phi({0,1,2})", Fraction(2), PAPER, phi.value(7))
    yield _row(t, "phi({0,1})", Fraction(1), PAPER, phi.value(3))
    yield _row(t, "hat({0,1,2})", Fraction(3, 2), DERIVED, hat_mask(phi, 7).value)
    rep = pathology_degree(phi)
    yield _row(t, "P(phi)", Fraction(4, 3), DERIVED, rep.degree)
    yield _row(t, "argmax", frozenset({0, 1, 2}), DERIVED, rep.argmax)
    yield _row(t, "criterion witness", frozenset({0, 1, 2}), PAPER, pathological_criterion(phi))


def suite_mazur_degree(level: int | None = None, quick: bool = False, **_) -> Iterator[Row]:
    t = "mazur-degree"
    levels = [level] if level else [2, 3, 4]
    for n in levels:
        psi, _ = gen_mazur(n)
        full = psi.ground.full
        if n <= 2:
            rep = pathology_degree(psi)
            yield _row(t, f"P(psi_{n}) over all subsets", Fraction(n + 1, 2), PAPER, rep.degree)
        h = hat_mask(psi, full).value
        yield _row(t, f"hat(K_{n})", Fraction(2), DERIVED, h)
        rep = pathology_degree(psi, scope=[range(psi.ground.size)])
        yield _row(t, f"psi_{n}(K_{n}) / hat(K_{n})", Fraction(n + 1, 2), PAPER, rep.degree)


def suite_mazur_cover(level: int | None = None, **_) -> Iterator[Row]:
    t = "mazur-cover"
    for n in ([level] if level else [1, 2, 3]):
        psi, inst = gen_mazur(n)
        st = covering_stats(inst)
        yield _row(t, f"psi_{n}(K_{n})", Fraction(n + 1), PAPER, psi.value(psi.ground.full))
        yield _row(t, f"m(K_{n})", n, PAPER, st.m)
        yield _row(t, f"delta(K_{n})", Fraction(1, 2), PAPER, st.delta)
        if n <= 3:
            full = inst.ground.full
            bad = 0
            for sub in itertools.combinations(inst.family, n):
                u = 0
                for s in sub:
                    u |= s
                bad += u == full
            yield _row(t, f"no {n} hats cover K_{n}", 0, PAPER, bad)


def suite_covering_stats(**_) -> Iterator[Row]:
    t = "covering-stats"
    for n in (2, 3, 4):
        _, inst = gen_mazur(n)
        yield _row(t, f"Mazur delta n={n}", Fraction(1, 2), PAPER, covering_stats(inst).delta)
    for n in (2, 3, 4):
        _, inst = gen_solecki(n)
        yield _row(t, f"Omega delta n={n}", Fraction(1, 2), PAPER, covering_stats(inst).delta)
    for n in (2, 3, 4, 5):
        _, chains = gen_edfin(n)
        yield _row(t, f"EDfin delta n={n}", Fraction(1, n + 1), PAPER, covering_stats(chains).delta)
        yield _row(t, f"EDfin |S_{n}|", factorial(n + 1), PAPER, len(chains.family))


def suite_solecki_chi(level: int | None = None, **_) -> Iterator[Row]:
    t = "solecki-chi"
    for n in ([level] if level else [2, 3, 4]):
        chi, inst = gen_solecki(n)
        yield _row(t, f"chi(Omega_{n})", Fraction(2 ** (n - 1) + 1), PAPER, chi.value(chi.ground.full))
        if n <= 3:
            full = chi.ground.full
            half = 2 ** (n - 1)
            covers = 0
            for sub in itertools.combinations(inst.family, half):
                u = 0
                for s in sub:
                    u |= s
                covers += u == full
            yield _row(t, f"{half}-subfamilies covering Omega_{n}", 0, PAPER, covers)
            fails = 0
            for sub in itertools.combinations(inst.family, half + 1):
                u = 0
                for s in sub:
                    u |= s
                fails += u != full
            yield _row(t, f"{half + 1}-subfamilies failing to cover", 0, PAPER, fails)


def suite_edfin(level: int | None = None, **_) -> Iterator[Row]:
    t = "edfin-delta"
    for n in ([level] if level else [2, 3, 4, 5]):
        _, chains = gen_edfin(n)
        st = covering_stats(chains)
        yield _row(t, f"delta n={n}", Fraction(1, n + 1), PAPER, st.delta)
        yield _row(t, f"|S_{n}|", factorial(n + 1), PAPER, len(chains.family))
        blocks = edfin_blocks(n)
        ok = all(st.multiplicity[i] == factorial(n + 1) // (k + 1)
                 for k, b in enumerate(blocks) for i in iter_bits(b))
        yield _row(t, f"B(i) = (n+1)!/(k+1) on C_k, n={n}", True, DERIVED, ok)
    psi, _ = gen_edfin(2)
    yield _row(t, "P(psi) over all subsets, n=2", Fraction(1), PAPER, pathology_degree(psi).degree)


def suite_uniform_bound(seed: int = 0, count: int = 200, **_) -> Iterator[Row]:
    t = "uniform-bound"
    passed = 0
    for trial in range(count):
        g = make_rng(seed, t, trial)
        n = int(g.integers(2, 9))
        phi = random_submeasure(g, n)
        fam = random_family(g, n, int(g.integers(1, n + 2)), covering=True)
        inst = CoveringInstance(phi.ground, tuple(fam))
        m = max(phi.value(s) for s in fam)
        cert = uniform_bound_check(phi, inst, m)
        passed += cert.holds
    yield _count(t, "max dominated mass <= M/delta", PAPER, passed, count)


def random_level_matrix(g, rows: int, cols: int) -> VectorSequence:
    """Entries in [0, 1]; half the rows follow increasing levels along the columns."""
    out = []
    for _ in range(rows):
        structured = g.random() < 0.5
        level = 0
        row = []
        for n in range(cols):
            if g.random() < 0.25:
                row.append(Fraction(0))
                continue
            if structured:
                level += int(g.integers(0, 3))
            else:
                level = int(g.integers(0, 7))
            den = int(g.integers(1, 9))
            num = int(g.integers(den // 2 + 1, den + 1))
            row.append(Fraction(num, den * 2 ** level))
        out.append(tuple(row))
    return VectorSequence(tuple(out))


def suite_color1(seed: int = 0, count: int = 1000, **_) -> Iterator[Row]:
    t = "color1-bound"
    passed = 0
    checked_sets = 0
    largest = 0
    for trial in range(count):
        g = make_rng(seed, t, trial)
        mat = random_level_matrix(g, int(g.integers(1, 5)), int(g.integers(2, 21)))
        ps = level_partition(mat)
        c = c0tall_coloring(ps)
        ok = True
        for h in maximal_homogeneous(c, 1, c.ground.full):
            cert = verify_color1_bound(ps, iter_bits(h))
            checked_sets += 1
            largest = max(largest, h.bit_count())
            ok = ok and cert.holds
        passed += ok
    yield _count(t, f"1-homogeneous mass <= 2 ({checked_sets} maximal sets, largest {largest})",
                 PAPER, passed, count)


def suite_dyadic(seed: int = 0, count: int = 1000, **_) -> Iterator[Row]:
    t = "dyadic-round"
    passed = 0
    for trial in range(count):
        g = make_rng(seed, t, trial)
        rows, cols = int(g.integers(1, 6)), int(g.integers(1, 13))
        mat = VectorSequence(tuple(tuple(random_fraction(g, 16, 1, 0.2) for _ in range(cols))
                                   for _ in range(rows)))
        lam = dyadic_round(mat)
        ok = True
        for r_mu, r_lam in zip(mat.entries, lam.entries):
            for n, (mu, la) in enumerate(zip(r_mu, r_lam)):
                ok = ok and 0 <= la <= mu and mu - la <= Fraction(1, 2 ** n)
                ok = ok and (la * 2 ** n).denominator == 1
        passed += ok
    yield _count(t, "lambda <= mu and column error <= 2^-n", PAPER, passed, count)


def suite_rk_solecki(level: int | None = None, **_) -> Iterator[Row]:
    t = "rk-solecki"
    n = level or 1
    Ns = [1, 2] if n == 1 else [1, 2, 3]
    rep = verify_solecki_reduction(n, Ns=Ns)
    for s, j, eq, v in rep.forward:
        yield _row(t, f"f^-1(s~_{s}) = hat {j} on X", True, DERIVED, eq)
        yield _row(t, f"psi(f^-1(s~_{s}))", Fraction(1), PAPER, v)
    for N in Ns:
        rows = [r for r in rep.backward if r[0] == N]
        good = sum(1 for _, _, ins, v in rows if ins and v <= N)
        yield _count(t, f"backward N={N}: image inside N tildes, chi <= N", DERIVED, good, len(rows))
    if rep.exact_subsets is not None:
        yield _row(t, "chi(A) = psi(f^-1 A) on every target set", 0, DERIVED, rep.exact_mismatches)
    d = 1 << n
    yield _row(t, f"hat cover number of X_{d}", Fraction(d + 1), DERIVED, rep.x_cover_number)


def suite_rk_monotonicity(seed: int = 0, count: int = 100, **_) -> Iterator[Row]:
    t = "rk-monotonicity"
    deg_ok = hat_ok = 0
    for trial in range(count):
        g = make_rng(seed, t, trial)
        n = int(g.integers(1, 9))
        m = int(g.integers(1, n + 1))
        phi = random_submeasure(g, n)
        f = PointMap(phi.ground, GroundSet(m), tuple(int(g.integers(0, m)) for _ in range(n)))
        rep = pathology_monotonicity_check(phi, f)
        deg_ok += rep.verdict != "fails"
        hat_ok += not rep.hat_violations
    yield _count(t, "P(phi_f) <= P(phi)", PAPER, deg_ok, count)
    yield _count(t, "hat(phi_f)(A) >= hat(phi)(f^-1 A) on all A", PAPER, hat_ok, count)


def random_sup(g, n: int) -> SupMeasures:
    while True:
        ms = random_measures(g, n, int(g.integers(1, 6)))
        if any(mu.total for mu in ms):
            return SupMeasures(ms)


def suite_banach(seed: int = 0, count: int = 100, **_) -> Iterator[Row]:
    t = "banach-roundtrip"
    trips = nonpath = 0
    for trial in range(count):
        g = make_rng(seed, t, trial)
        n = int(g.integers(1, 11))
        phi = random_sup(g, n)
        psi = phi_of_sequence(sequence_of_phi(phi))
        trips += all(phi.value(a) == psi.value(a) for a in range(1 << n))
        nonpath += pathology_degree(psi).degree == 1
    yield _count(t, "phi_(x_phi) = phi on every subset", PAPER, trips, count)
    yield _count(t, "P(phi_x) = 1", DERIVED, nonpath, count)


def suite_propertyA(**_) -> Iterator[Row]:
    t = "propertyA"
    fam = gen_propertyA("a", (3, 3))
    phi = fam.phi
    for n, b in enumerate(fam.payload["B"]):
        vals = {phi.value(1 << i) for i in iter_bits(b)}
        yield _row(t, f"variant a: phi({{x}}) on B_{n}", {Fraction(1, 2 ** n)}, PAPER, vals)
        yield _row(t, f"phi(B_{n})", Fraction(n + 1), PAPER, phi.value(b))
        ks = {phi.value(fam.block((n, k))) for k in range(4)}
        yield _row(t, f"phi(B_{n}^k), k<=3", {Fraction(n + 1)}, PAPER, ks)
    bd = propertyA_bound("a", Fraction(1, 4), fam)
    yield _row(t, "N for eps=1/4", 3, DERIVED, bd.N)
    yield _row(t, "M_1/4 inside B_0, B_1, B_2", True, PAPER, bd.certified)
    g = make_rng(0, t)
    agree = 0
    for _ in range(200):
        mask = 0
        for i in range(fam.ground.size):
            if g.random() < 0.2:
                mask |= 1 << i
        agree += phi.value(mask) == property_a_phi_sum(fam, mask)
    yield _count(t, "sup over s equals the block sum", DERIVED, agree, 200)
    fb = gen_propertyA("b", (3, 3))
    ok = all(fb.phi.value(fb.block((n, k)) & -fb.block((n, k))) == Fraction(1, 2 ** n + k)
             for n in range(4) for k in range(4))
    yield _row(t, "variant b: nu_n^k({x}) = 1/(2^n+k)", True, PAPER, ok)
    yield _row(t, "variant b: M_1/4 finite inside the bound", True, PAPER,
               propertyA_bound("b", Fraction(1, 4), fb).certified)


def zoo_instances(quick: bool = False):
    """(name, submeasure) pairs covering every generator."""
    yield "minimal", gen_minimal_pathological()
    chain, sup = gen_ed([3, 3])
    yield "ed-chain[3,3]", chain
    yield "ed-sup[3,3]", sup
    chain, sup = gen_ed([2, 3, 4])
    yield "ed-chain[2,3,4]", chain
    yield "ed-sup[2,3,4]", sup
    for n in (2, 3, 4):
        yield f"edfin{n}", gen_edfin(n)[0]
    for n in (1, 2, 3, 4):
        yield f"mazur{n}", gen_mazur(n)[0]
    for n in (2, 3, 4):
        yield f"solecki{n}", gen_solecki(n)[0]
    yield "propertyA-a(2,2)", gen_propertyA("a", (2, 2)).phi
    yield "propertyA-b(2,2)", gen_propertyA("b", (2, 2)).phi
    x, _ = gen_finxempty([2, 3, 4])
    yield "finxempty[2,3,4]", phi_of_sequence(x)


def suite_axioms(seed: int = 0, **_) -> Iterator[Row]:
    t = "axioms"
    for name, phi in zoo_instances():
        rep = check_axioms(phi, seed=seed)
        yield _row(t, f"{name} ({rep.mode}, {rep.checked})", 0, TRIVIAL, rep.violation_count)


SUITES: dict[str, Callable[..., Iterator[Row]]] = {
    "minpath": suite_minpath,
    "mazur-degree": suite_mazur_degree,
    "mazur-cover": suite_mazur_cover,
    "covering-stats": suite_covering_stats,
    "solecki-chi": suite_solecki_chi,
    "edfin-delta": suite_edfin,
    "uniform-bound": suite_uniform_bound,
    "color1-bound": suite_color1,
    "dyadic-round": suite_dyadic,
    "rk-solecki": suite_rk_solecki,
    "rk-monotonicity": suite_rk_monotonicity,
    "banach-roundtrip": suite_banach,
    "propertyA": suite_propertyA,
    "axioms": suite_axioms,
}


def run(target: str, level: int | None = None, seed: int = 0, quick: bool = False) -> list[Row]:
    if target == "all":
        rows: list[Row] = []
        for name, suite in SUITES.items():
            rows.extend(suite(level=None, seed=seed, quick=quick))
        return rows
    if target not in SUITES:
        raise KeyError(target)
    return list(SUITES[target](level=level, seed=seed, quick=quick))
