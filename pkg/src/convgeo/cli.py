"""Command-line interface.

Exit codes: 0 success, 1 mathematical failure or violation (with a report),
2 input error (one-line diagnostic naming file and line).
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import constructions, geomops, hopf, lattice, setfam
from .setfam import AxiomViolation, ConvexGeometry, ParseError


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def _is_lattice_text(text: str) -> bool:
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            return line.startswith("elements:")
    return False


def _load_geometry(path: str) -> ConvexGeometry:
    return setfam.parse_geometry(_read(path), path)


def _load_lattice(path: str) -> tuple[lattice.FiniteLattice, ConvexGeometry | None]:
    """Lattice of a geometry file, or an abstract lattice file."""
    text = _read(path)
    if _is_lattice_text(text):
        return lattice.parse_lattice(text, path), None
    g = setfam.parse_geometry(text, path)
    return lattice.lattice_of_closed_sets(g), g


def _parse_set(g: ConvexGeometry, text: str, what: str) -> int:
    try:
        return g.ground.parse(text)
    except KeyError as exc:
        raise InputError(f"{what}: {exc.args[0]}") from None


def _element_names(l: lattice.FiniteLattice, g: ConvexGeometry | None) -> list[str]:
    if g is None:
        return [str(i) for i in range(l.n)]
    return [g.ground.format(m) for m in l.labels]


# -- subcommands ---------------------------------------------------------------


def cmd_validate(args, out) -> int:
    ground, family = setfam.parse_family(_read(args.file), args.file)
    try:
        g = setfam.validate_family(ground, family)
    except AxiomViolation as exc:
        out.write(f"VIOLATION: {exc}\n")
        return 1
    except ValueError as exc:
        raise InputError(f"{args.file}: {exc}") from None
    ce = setfam.check_antiexchange(g)
    if not ce:
        out.write(
            f"VIOLATION: antiexchange fails at A={ground.format(ce.a)} "
            f"x={ground.names[ce.x]} y={ground.names[ce.y]}\n"
        )
        return 1
    out.write(f"OK: convex geometry on {g.size} elements with {len(g.closed)} closed sets; antiexchange holds\n")
    return 0


def cmd_lattice(args, out) -> int:
    l, g = _load_lattice(args.file)
    info = lattice.describe(l)
    names = _element_names(l, g)
    out.write(f"size: {info['size']}\n")
    out.write("ranks: " + " ".join(map(str, info["ranks"])) + "\n")
    out.write(f"meet-distributive: {str(info['meet_distributive']).lower()}\n")
    out.write("covers:\n")
    order = _node_order(l, g, names)
    for i, j in sorted(l.covers, key=lambda c: (order[c[0]], order[c[1]])):
        out.write(f"{names[i]} < {names[j]}\n")
    return 0


def _node_order(l, g, names) -> dict[int, tuple]:
    if g is None:
        return {i: (l.height[i], i) for i in range(l.n)}
    return {i: setfam.lex_order(l.labels[i]) for i in range(l.n)}


def cmd_hasse(args, out) -> int:
    l, g = _load_lattice(args.file)
    if not args.dot:
        out.write(lattice.format_lattice(l))
        return 0
    out.write(hasse_dot(l, g))
    return 0


def hasse_dot(l: lattice.FiniteLattice, g: ConvexGeometry | None = None) -> str:
    """DOT digraph of the cover relation, bottom to top, one rank per cardinality."""
    names = _element_names(l, g)
    order = _node_order(l, g, names)
    nodes = sorted(range(l.n), key=lambda i: order[i])
    ident = {x: f"n{k}" for k, x in enumerate(nodes)}
    rank = (lambda i: setfam.popcount(l.labels[i])) if g is not None else (lambda i: l.height[i])
    lines = ["digraph hasse {", "  rankdir=BT;", "  node [shape=box];"]
    for x in nodes:
        lines.append(f'  {ident[x]} [label="{names[x]}"];')
    for r in sorted({rank(x) for x in nodes}):
        members = " ".join(f"{ident[x]};" for x in nodes if rank(x) == r)
        lines.append(f"  {{ rank=same; {members} }}")
    for i, j in sorted(l.covers, key=lambda c: (order[c[0]], order[c[1]])):
        lines.append(f"  {ident[i]} -> {ident[j]};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_shell_points(args, out) -> int:
    pc = constructions.parse_points(_read(args.file), args.file)
    try:
        g = constructions.convex_shelling(pc)
    except constructions.DuplicatePoints as exc:
        raise InputError(f"{args.file}: {exc}") from None
    out.write(setfam.format_geometry(g))
    return 0


def cmd_shell_poset(args, out) -> int:
    p = constructions.parse_poset(_read(args.file), args.file)
    out.write(setfam.format_geometry(constructions.poset_shelling(p)))
    return 0


def cmd_chain(args, out) -> int:
    out.write(setfam.format_geometry(constructions.chain_geometry(args.n)))
    return 0


def cmd_boolean(args, out) -> int:
    out.write(setfam.format_geometry(constructions.boolean_geometry(args.n)))
    return 0


def cmd_minor(args, out) -> int:
    g = _load_geometry(args.file)
    a = _parse_set(g, args.lower, "--lower")
    b = _parse_set(g, args.upper, "--upper")
    try:
        m = geomops.minor(g, a, b)
    except (geomops.NotClosed, geomops.NotNested) as exc:
        out.write(f"VIOLATION: {exc}\n")
        return 1
    out.write(setfam.format_geometry(m))
    return 0


def cmd_product(args, out) -> int:
    g1 = _load_geometry(args.first)
    g2 = _load_geometry(args.second)
    if g1.size + g2.size > setfam.MAX_GROUND:
        raise InputError(f"product ground set exceeds {setfam.MAX_GROUND} elements")
    out.write(setfam.format_geometry(geomops.product_geometry(g1, g2)))
    return 0


def cmd_coproduct(args, out) -> int:
    out.write(str(hopf.coproduct(_load_geometry(args.file))))
    return 0


def cmd_antipode(args, out) -> int:
    g = _load_geometry(args.file)
    out.write(str(hopf.ANTIPODES[args.method](g)))
    return 0


def cmd_check_hopf(args, out) -> int:
    result = hopf.verify_hopf_axiom(_load_geometry(args.file), args.method)
    if result:
        out.write("OK\n")
        return 0
    out.write("FAIL\n" + str(result))
    return 1


def cmd_forbidden(args, out) -> int:
    g = _load_geometry(args.file)
    f = _load_geometry(args.pattern)
    match = hopf.has_forbidden_minor(g, f)
    out.write(f"FOUND {match}\n" if match else "NOT FOUND\n")
    return 0


def cmd_canon(args, out) -> int:
    l, _ = _load_lattice(args.file)
    out.write(f"{lattice.canonical_key(l)}\n")
    return 0


def cmd_from_lattice(args, out) -> int:
    l, _ = _load_lattice(args.file)
    try:
        g = geomops.geometry_from_lattice(l)
    except geomops.NotMeetDistributive as exc:
        out.write(f"VIOLATION: {exc}\n")
        return 1
    out.write(setfam.format_geometry(g))
    return 0


def _count(text: str) -> int:
    n = int(text)
    if not 0 <= n <= setfam.MAX_GROUND:
        raise argparse.ArgumentTypeError(f"n must be between 0 and {setfam.MAX_GROUND}")
    return n


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="convgeo", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_, description=help_)
        sp.set_defaults(func=func)
        return sp

    add("validate", cmd_validate, "check the set-family axioms and antiexchange").add_argument("file")
    add("lattice", cmd_lattice, "lattice statistics and cover relation").add_argument("file")
    sp = add("hasse", cmd_hasse, "Hasse diagram of the lattice")
    sp.add_argument("file")
    sp.add_argument("--dot", action="store_true", help="emit a DOT digraph instead of the lattice text format")
    add("shell-points", cmd_shell_points, "convex shelling of a points file").add_argument("file")
    add("shell-poset", cmd_shell_poset, "poset shelling (downsets) of a poset file").add_argument("file")
    add("chain", cmd_chain, "chain geometry on [n]").add_argument("n", type=_count)
    add("boolean", cmd_boolean, "Boolean geometry on [n]").add_argument("n", type=_count)
    sp = add("minor", cmd_minor, "minor M(lower, upper)")
    sp.add_argument("file")
    sp.add_argument("--lower", required=True, help="closed set, comma-separated labels or {}")
    sp.add_argument("--upper", required=True, help="closed set, comma-separated labels or {}")
    sp = add("product", cmd_product, "product geometry of two geometries")
    sp.add_argument("first")
    sp.add_argument("second")
    add("coproduct", cmd_coproduct, "coproduct as a formal sum of tensors").add_argument("file")
    sp = add("antipode", cmd_antipode, "antipode as a formal sum")
    sp.add_argument("file")
    sp.add_argument("--method", choices=sorted(hopf.ANTIPODES), default="chain")
    sp = add("check-hopf", cmd_check_hopf, "verify the antipode identities exactly")
    sp.add_argument("file")
    sp.add_argument("--method", choices=sorted(hopf.ANTIPODES), default="chain")
    sp = add("forbidden", cmd_forbidden, "search for a minor isomorphic to a pattern")
    sp.add_argument("file")
    sp.add_argument("--pattern", required=True)
    add("canon", cmd_canon, "canonical key of the lattice").add_argument("file")
    add("from-lattice", cmd_from_lattice, "geometry of a meet-distributive lattice").add_argument("file")
    return p


def main(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (InputError, ParseError) as exc:
        err.write(f"error: {exc}\n")
        return 2
    except AxiomViolation as exc:
        out.write(f"VIOLATION: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
