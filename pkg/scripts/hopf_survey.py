"""Survey of the test corpus: lattice shape, antipode size and Hopf checks per class."""

import argparse
import time

from convgeo.corpus import build_corpus, distinct
from convgeo.hopf import antipode_chain, antipode_recursive, coproduct, verify_hopf_axiom
from convgeo.lattice import describe, lattice_of_closed_sets


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-size", type=int, default=5, help="skip ground sets larger than this")
    args = ap.parse_args()
    classes = [e for e in distinct(build_corpus()) if e.size <= args.max_size]
    print(f"{'class':<34} {'|Z|':>3} {'|L|':>4} {'terms D':>7} {'terms S':>7}  hopf  agree")
    start = time.perf_counter()
    for e in classes:
        info = describe(lattice_of_closed_sets(e.geometry))
        s = antipode_recursive(e.geometry)
        agree = s == antipode_chain(e.geometry)
        ok = verify_hopf_axiom(e.geometry) is True
        print(f"{e.name[:34]:<34} {e.size:>3} {info['size']:>4} {len(coproduct(e.geometry)):>7} {len(s):>7}  {ok!s:<5} {agree}")
    print(f"{len(classes)} classes in {time.perf_counter() - start:.1f}s")


if __name__ == "__main__":
    main()
