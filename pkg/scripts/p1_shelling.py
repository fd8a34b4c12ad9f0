"""Closed sets of the five-point configuration, grouped by size, with its lattice summary."""

from convgeo.constructions import convex_shelling
from convgeo.corpus import P1
from convgeo.lattice import describe, lattice_of_closed_sets
from convgeo.setfam import lex_order


def main():
    g = convex_shelling(P1)
    for label, coords in zip(P1.labels, P1.coords):
        print(f"{label} = ({', '.join(map(str, coords))})")
    by_size = {}
    for x in sorted(g.closed, key=lambda m: lex_order(m)):
        by_size.setdefault(bin(x).count("1"), []).append(g.ground.format(x))
    for size in sorted(by_size, reverse=True):
        print(f"{size}: {'  '.join(by_size[size])}")
    info = describe(lattice_of_closed_sets(g))
    print(f"closed sets: {info['size']}, ranks: {info['ranks']}, meet-distributive: {info['meet_distributive']}")


if __name__ == "__main__":
    main()
