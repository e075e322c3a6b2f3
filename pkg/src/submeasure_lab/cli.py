"""Command-line front end: ``submeasure-lab compute|gen|verify``.

Exit codes: 0 success, 1 verification failure, 2 input error, 3 size guard.
"""

from __future__ import annotations

import argparse
import hashlib
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import config, io
from .banach import phi_of_sequence
from .colorings import gen_named_coloring
from .core import MinCover, guard_ground
from .errors import InputError, SizeGuard, SubmeasureLabError
from .pathology import CoveringInstance, covering_stats, hat_mask, pathology_degree
from .rational import format_rational
from .subsets import GroundSet, iter_bits
from . import verify as verify_mod
from . import zoo

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_GUARD = 0, 1, 2, 3


class CliInputError(InputError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliInputError(message)


def _parse_set(text: str, ground: GroundSet) -> int:
    text = text.strip()
    if text == "all":
        return ground.full
    if text in ("", "empty", "none"):
        return 0
    try:
        pts = [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise CliInputError(f"--set: expected comma-separated integers or 'all', got {text!r}") from None
    try:
        return ground.mask(pts)
    except InputError as e:
        raise CliInputError(f"--set: {e}") from None


def _emit(obj) -> None:
    sys.stdout.write(io.dumps(obj) + "\n")


def _rat(v) -> str:
    return format_rational(v)


# ---------------------------------------------------------------------------
# compute


def _load_phi(path):
    doc = io.load_json(path)
    return io.submeasure_from_dict(doc)


def cmd_compute(args) -> int:
    what = args.what
    if what == "cover-stats":
        doc = io.load_json(args.input)
        if "repr" in doc:
            phi = io.submeasure_from_dict(doc)
            if not isinstance(phi, MinCover):
                raise CliInputError("cover-stats needs a covering file or a min_cover submeasure")
            inst = CoveringInstance(phi.ground, phi.family)
        else:
            inst = io.covering_from_dict(doc)
        st = covering_stats(inst)
        _emit({"B": list(st.multiplicity), "delta": _rat(st.delta),
               "family_size": st.family_size, "m": st.m})
        return EXIT_OK

    phi = _load_phi(args.input)
    if what == "eval":
        mask = _parse_set(args.set or "all", phi.ground)
        _emit({"value": _rat(phi.value(mask))})
    elif what == "metric":
        a = _parse_set(args.set or "", phi.ground)
        b = _parse_set(args.set2 or "", phi.ground)
        _emit({"value": _rat(phi.value(a ^ b))})
    elif what == "hat":
        mask = _parse_set(args.set or "all", phi.ground)
        h = hat_mask(phi, mask)
        _emit({"value": _rat(h.value), "witness": [_rat(w) for w in h.witness.weights]})
    elif what == "pathology":
        if args.scope == "all":
            guard_ground(phi.ground.size, args.max_ground, "all-subsets pathology degree")
            rep = pathology_degree(phi, "all", limit=args.max_ground)
            out = {}
        else:
            if not args.family:
                raise CliInputError("--scope family needs --family 'a,b;c,d' or a covering file")
            fam = _family_arg(args.family, phi.ground)
            rep = pathology_degree(phi, [list(iter_bits(m)) for m in fam])
            out = {"lower_bound": True}
        out["degree"] = None if rep.degree is None else _rat(rep.degree)
        out["argmax"] = None if rep.argmax is None else sorted(rep.argmax)
        _emit(out)
    else:  # pragma: no cover - argparse restricts the choices
        raise CliInputError(f"unknown compute target {what!r}")
    return EXIT_OK


def _family_arg(text: str, ground: GroundSet) -> list[int]:
    if os.path.exists(text):
        inst = io.covering_from_dict(io.load_json(text))
        if inst.ground.size != ground.size:
            raise CliInputError("--family: covering ground differs from the submeasure ground")
        return list(inst.family)
    return [_parse_set(part, ground) for part in text.split(";")]


# ---------------------------------------------------------------------------
# gen


def _ints(text: str, what: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise CliInputError(f"{what}: expected comma-separated integers, got {text!r}") from None


def cmd_gen(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    files: dict[str, dict] = {}
    params: dict = {}
    name = args.name
    if name == "minimal":
        files["minimal.json"] = io.submeasure_to_dict(zoo.gen_minimal_pathological())
    elif name == "mazur":
        params["n"] = args.n
        psi, inst = zoo.gen_mazur(args.n)
        files[f"mazur{args.n}.json"] = io.submeasure_to_dict(psi)
        files[f"mazur{args.n}_covering.json"] = io.covering_to_dict(inst)
    elif name == "solecki":
        params["n"] = args.n
        chi, inst = zoo.gen_solecki(args.n)
        files[f"solecki{args.n}.json"] = io.submeasure_to_dict(chi)
        files[f"solecki{args.n}_covering.json"] = io.covering_to_dict(inst)
    elif name == "edfin":
        params["n"] = args.n
        psi, chains = zoo.gen_edfin(args.n)
        files[f"edfin{args.n}.json"] = io.submeasure_to_dict(psi)
        files[f"edfin{args.n}_chains.json"] = io.covering_to_dict(chains)
    elif name == "ed":
        sizes = _ints(args.blocks or "3,3", "--blocks")
        params["blocks"] = sizes
        chain, sup = zoo.gen_ed(sizes)
        files["ed_chain.json"] = io.submeasure_to_dict(chain)
        files["ed_sup.json"] = io.submeasure_to_dict(sup)
    elif name == "propertyA":
        st = _ints(args.stages or "3,3", "--stages")
        if len(st) != 2:
            raise CliInputError("--stages: expected n_max,k_max")
        params.update(variant=args.variant, stages=st)
        fam = zoo.gen_propertyA(args.variant, (st[0], st[1]))
        stem = f"propertyA_{args.variant}_{st[0]}_{st[1]}"
        files[f"{stem}.json"] = io.submeasure_to_dict(fam.phi)
        files[f"{stem}_blocks.json"] = {
            "ground": fam.ground.size,
            "blocks": [{"name": list(nm), "set": list(iter_bits(b))} for nm, b in zip(fam.names, fam.blocks)],
        }
    elif name == "finxempty":
        sizes = _ints(args.blocks or "2,3,4", "--blocks")
        params["blocks"] = sizes
        x, _ = zoo.gen_finxempty(sizes)
        files["finxempty.json"] = io.matrix_to_dict(x)
        files["finxempty_phi.json"] = io.submeasure_to_dict(phi_of_sequence(x))
    elif name == "coloring":
        params["name"] = args.coloring
        if args.coloring == "sierpinski":
            params["n"] = args.n
            c = gen_named_coloring("sierpinski", n=args.n)
            files[f"coloring_sierpinski_{args.n}.json"] = io.coloring_to_dict(c)
        elif args.coloring == "partition":
            sizes = _ints(args.blocks or "1,2,3", "--blocks")
            params["blocks"] = sizes
            c = gen_named_coloring("partition", sizes=sizes)
            files["coloring_partition.json"] = io.coloring_to_dict(c)
        else:
            raise CliInputError(f"--name: unknown coloring {args.coloring!r}")
    else:  # pragma: no cover
        raise CliInputError(f"unknown generator {name!r}")

    hashes = {}
    for fname, obj in sorted(files.items()):
        text = io.write_json(out / fname, obj)
        hashes[fname] = hashlib.sha256(text.encode("utf-8")).hexdigest()
    manifest = {"generator": name, "params": params, "files": hashes}
    io.write_json(out / "manifest.json", manifest)
    _emit(manifest)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def _decimal(text: str, places: int) -> str:
    if "/" not in text:
        return ""
    try:
        v = Fraction(text)
    except ValueError:
        return ""
    scaled = round(v * 10 ** places)
    sign = "-" if scaled < 0 else ""
    scaled = abs(scaled)
    whole, frac = divmod(scaled, 10 ** places)
    return f"{sign}{whole}.{frac:0{places}d}" if places else f"{sign}{whole}"


def cmd_verify(args) -> int:
    try:
        rows = verify_mod.run(args.target, level=args.level, seed=args.seed, quick=args.quick)
    except KeyError:
        names = ", ".join(["all"] + list(verify_mod.SUITES))
        raise CliInputError(f"unknown verify target {args.target!r}; choose from {names}") from None
    header = ["target", "check", "expected", "tag", "computed", "verdict"]
    if args.decimal is not None:
        header.append("decimal")
    lines = ["\t".join(header)]
    for r in rows:
        cells = [r.target, r.check, r.expected, f"[{r.tag}]", r.computed, r.verdict]
        if args.decimal is not None:
            cells.append(_decimal(r.computed, args.decimal))
        lines.append("\t".join(cells))
    failed = sum(not r.ok for r in rows)
    lines.append(f"# {len(rows) - failed}/{len(rows)} passed")
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK if failed == 0 else EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="submeasure-lab", description="Exact finite submeasure toolkit.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("compute", help="evaluate a submeasure file")
    c.add_argument("what", choices=["eval", "hat", "pathology", "cover-stats", "metric"])
    c.add_argument("--input", required=True)
    c.add_argument("--set", help="comma-separated points, or 'all'")
    c.add_argument("--set2", help="second set for 'metric'")
    c.add_argument("--scope", choices=["all", "family"], default="all")
    c.add_argument("--family", help="sets 'a,b;c,d' or a covering JSON file (scope family)")
    c.add_argument("--max-ground", type=int, default=None)

    g = sub.add_parser("gen", help="write generator output and a manifest")
    g.add_argument("name", choices=["minimal", "mazur", "solecki", "edfin", "ed", "propertyA",
                                    "finxempty", "coloring"])
    g.add_argument("--n", type=int, default=2)
    g.add_argument("--variant", choices=["a", "b"], default="a")
    g.add_argument("--stages")
    g.add_argument("--blocks")
    g.add_argument("--name", dest="coloring", default="sierpinski")
    g.add_argument("--out", default=".")

    v = sub.add_parser("verify", help="run a named verification suite")
    v.add_argument("target")
    v.add_argument("--level", type=int)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--quick", action="store_true")
    v.add_argument("--decimal", type=int, metavar="D")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "max_ground", None) is None and args.command == "compute":
            args.max_ground = config.max_ground()
        if args.command == "compute":
            return cmd_compute(args)
        if args.command == "gen":
            return cmd_gen(args)
        return cmd_verify(args)
    except SizeGuard as e:
        sys.stderr.write(f"size guard: {e}\n")
        return EXIT_GUARD
    except (InputError, ValueError, TypeError) as e:
        sys.stderr.write(f"input error: {e}\n")
        return EXIT_INPUT
    except SubmeasureLabError as e:
        sys.stderr.write(f"error: {type(e).__name__}: {e}\n")
        return EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
