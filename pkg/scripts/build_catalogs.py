"""Rebuild the shipped maximal subgroup catalogs under src/tdgroups/oracle/data/.

Usage: python scripts/build_catalogs.py [group_id ...]
"""

import argparse
import logging
import time

from tdgroups.oracle.catalogs import BUILDERS, build_sp4_T, load_catalog, outer_closure, save_catalog


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("ids", nargs="*", help="group ids (default: all)")
    ap.add_argument("--verify", action="store_true", help="reload with the maximality check")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    ids = args.ids or list(BUILDERS)
    for gid in ids:
        t = time.time()
        cat = BUILDERS[gid]()
        path = save_catalog(cat)
        print(f"{gid}: {len(cat.entries)} entries -> {path.name} ({time.time() - t:.1f}s)")
        if args.verify:
            load_catalog(gid, check_maximal=True)
            print(f"  reload with maximality check ok")
    if "Sp4(4)" in ids:
        for ext in ("Sp4(4).phi", "Sp4(4).rho"):
            print(ext, "closure:", outer_closure(load_catalog("Sp4(4)"), ext))


if __name__ == "__main__":
    main()
