"""Check the coset T*phi classes of Aut(Sp4(4)) without the maximal subgroup catalog.

For each G-class in the coset T*phi of the requested orders, scan <x, g> over
C_G(x)-orbit representatives g of T*rho. Prints one line per class.

    python scripts/verify_tphi_class.py --orders 6 12
"""

import argparse
import time

from tdgroups.oracle.ambient import ambient
from tdgroups.oracle.bruteforce import core_free_overgroup_direct
from tdgroups.permrep import conjugacy_classes


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--orders", type=int, nargs="+", default=[6, 12])
    ap.add_argument("--coset", type=int, default=2)
    args = ap.parse_args()
    amb = ambient("Sp4(4).rho")
    for c in conjugacy_classes(amb.G):
        if c.order not in args.orders or amb.coset_index(c.rep) != args.coset:
            continue
        t = time.time()
        v = core_free_overgroup_direct("Sp4(4).rho", c.rep)
        print(f"order {c.order} size {c.size}: totally deranged={v.value} reps={v.details['reps']} "
              f"overgroup={v.details.get('overgroup_order', '-')} ({time.time() - t:.0f}s)", flush=True)


if __name__ == "__main__":
    main()
