"""Command line front end: ``tdgroups {classify,enumerate,shintani,oracle,selftest}``.

Output is one JSON document on stdout, integers written as decimal strings.
Exit codes: 0 computed, 2 invalid input, 3 undecided or over a cap, 1 a
selftest criterion failed.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field

from . import classify as C
from . import shintani as S
from .linalg import matrix_from_text
from .permrep import ClassTooLarge, Undecided
from .verdict import UNDECIDED, Verdict, _jsonable

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_UNDECIDED = 0, 1, 2, 3

FAMILIES = {"sp4": C.Family.SP4_CHAR2, "omega-plus": C.Family.OMEGA_PLUS, "other": C.Family.OTHER}


class InvalidInput(ValueError):
    pass


@dataclass
class RunConfig:
    subcommand: str
    family: str | None = None
    p: int | None = None
    f: int | None = None
    m: int | None = None
    e: int = 1
    i: int = 1
    graph: bool = False
    triality: bool = False
    orders: tuple[int, int, int] | None = None
    matrix: str | None = None
    extra: dict = field(default_factory=dict)

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> "RunConfig":
        orders = None
        if getattr(ns, "s_order", None) is not None:
            u = ns.u_order if ns.u_order is not None else 1
            x = ns.x_order if ns.x_order is not None else ns.s_order * u
            orders = (ns.s_order, u, x)
        known = {"command", "family", "p", "f", "m", "e", "phi_power", "graph", "triality", "s_order",
                 "u_order", "x_order", "matrix"}
        return cls(ns.command, getattr(ns, "family", None), getattr(ns, "p", None), getattr(ns, "f", None),
                   getattr(ns, "m", None), getattr(ns, "e", 1) or 1, getattr(ns, "phi_power", 1) or 1,
                   bool(getattr(ns, "graph", False)), bool(getattr(ns, "triality", False)), orders,
                   getattr(ns, "matrix", None), {k: v for k, v in vars(ns).items() if k not in known})

    def group_spec(self) -> C.GroupSpec:
        fam = FAMILIES[self.family]
        m = self.m if self.m is not None else 2
        if fam == C.Family.OMEGA_PLUS and self.m is None:
            raise InvalidInput("--m is required for omega-plus")
        if self.p is None or self.f is None:
            raise InvalidInput("--p and --f are required")
        return C.GroupSpec(fam, self.p, self.f, m)

    def outer(self) -> C.OuterSpec:
        return C.OuterSpec(self.graph, self.i, self.triality)


def _read_matrix(path: str, spec: C.GroupSpec | None = None):
    from .gf import field

    with open(path) as fh:
        text = fh.read().strip()
    ctx = field(spec.p, spec.f) if spec else None
    return matrix_from_text(text, ctx)


def _add_group_flags(sp):
    sp.add_argument("--family", choices=sorted(FAMILIES), required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--f", type=int, required=True)
    sp.add_argument("--m", type=int, default=None, help="half dimension (2 for Sp4)")
    sp.add_argument("--e", type=int, default=1, help="odd order of the field coset")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tdgroups", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", help="decide the theorem criteria for given parameters or a matrix")
    _add_group_flags(c)
    c.add_argument("--theorem", choices=["1", "2", "3", "4"], default="2")
    c.add_argument("--graph-field", "--graph", dest="graph", action="store_true",
                   help="G contains a graph or graph-field automorphism")
    c.add_argument("--phi-power", type=int, default=1, help="i with G = <T, rho^i> (theorem 4)")
    c.add_argument("--triality", action="store_true")
    c.add_argument("--s-order", type=int)
    c.add_argument("--u-order", type=int)
    c.add_argument("--x-order", type=int, help="order of x^e")
    c.add_argument("--matrix", help="file holding a matrix in text form (element mode)")
    c.add_argument("--xe-matrix", help="matrix of x^e when e > 1")
    c.add_argument("--strictness", choices=["literal", "singer"], default="literal")

    e = sub.add_parser("enumerate", help="all order triples passing the criterion")
    _add_group_flags(e)
    e.add_argument("--no-graph", dest="graph", action="store_false",
                   help="G has no graph or graph-field automorphism")
    e.set_defaults(graph=True)

    s = sub.add_parser("shintani", help="exhaustive Shintani descent checks for GL_n cosets")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--f", type=int, required=True)
    s.add_argument("--j", type=int, required=True)
    s.add_argument("--check", choices=["bijection", "power", "subfield", "parabolic", "image"],
                   default="bijection")
    s.add_argument("--d", type=int, default=2)
    s.add_argument("--k", type=int, default=None)
    s.add_argument("--matrix", help="matrix file for --check image")
    s.add_argument("--cap", type=int, default=None, help="lower the cap on q^(n^2), the size of the enumerated matrix space")

    o = sub.add_parser("oracle", help="brute-force checks against the shipped catalogs")
    o.add_argument("--group", required=True)
    o.add_argument("--op", choices=["catalog", "td", "invgen", "unique", "survey", "jordan"], required=True)
    sel = o.add_mutually_exclusive_group()
    sel.add_argument("--element", help="ambient element text: matrix text, optionally '|rho^k'")
    sel.add_argument("--order", type=int, help="pick the least class of this order")
    o.add_argument("--coset", type=int, default=0, help="with --order: coset index of the class")
    o.add_argument("--seed", type=int, default=0)

    t = sub.add_parser("selftest", help="run the acceptance criteria")
    t.add_argument("--criteria", type=int, nargs="*", default=None)
    return ap


# ---------------------------------------------------------------------------


def _classify(cfg: RunConfig):
    spec = cfg.group_spec()
    outer = cfg.outer()
    th = cfg.extra["theorem"]
    if th == "1":
        return C.theorem1_exists(spec, outer)
    if cfg.matrix:
        if th != "2":
            raise InvalidInput("--matrix is supported for theorem 2 only")
        x = _read_matrix(cfg.matrix, spec)
        xe = _read_matrix(cfg.extra["xe_matrix"], spec) if cfg.extra.get("xe_matrix") else None
        return C.theorem2_element(spec, outer, x, cfg.e, cfg.extra["strictness"], xe=xe)
    if cfg.orders is None:
        raise InvalidInput("give --s-order (and --u-order, --x-order) or --matrix")
    cp = C.CosetParams(cfg.e, *cfg.orders)
    if th == "2":
        return C.theorem2_params(spec, outer, cp)
    if th == "3":
        return C.theorem3_invgen(spec, outer, cp)
    return C.theorem4_unique(spec, outer, cp)


def _enumerate(cfg: RunConfig):
    return [list(t) for t in C.enumerate_td_orders(cfg.group_spec(), cfg.outer(), cfg.e)]


def _shintani(cfg: RunConfig):
    x = cfg.extra
    n, p, f, j = x["n"], cfg.p, cfg.f, x["j"]
    if x["cap"] is not None and x["cap"] > S.MATRIX_SPACE_CAP:
        raise InvalidInput("caps can only be lowered")
    check = x["check"]
    e = S._check_j(f, j)
    if check != "image":
        S.require_within_cap(n, p, f * (x["d"] if check == "power" else 1), x["cap"])
    out = {"check": check, "n": n, "p": p, "f": f, "j": j, "e": e, "convention": "rcf(N(x)^-1)"}
    if check == "bijection":
        r = S.class_bijection_check(n, p, f, j)
        out.update({"matched": r.matched, "counts": [r.coset_classes, r.subfield_classes],
                    "order_identity_ok": r.order_identity_ok, "well_defined": r.well_defined,
                    "coset_size": r.coset_size})
    elif check == "power":
        out.update({"d": x["d"], "value": S.power_lemma_check(n, p, f, j, x["d"])})
    elif check == "subfield":
        k = x["k"]
        if k is None:
            raise InvalidInput("--k is required for the subfield check")
        out.update({"k": k, "value": S.subfield_correspondence_check(n, p, f, j, k)})
    elif check == "parabolic":
        out["value"] = S.parabolic_check(n, p, f, j)
    else:
        if not cfg.matrix:
            raise InvalidInput("--matrix is required for --check image")
        from .gf import field

        with open(cfg.matrix) as fh:
            A = matrix_from_text(fh.read().strip(), field(p, f))
        g = S.SemilinearElem(A, j)
        img = S.shintani_image(g)
        out.update({"image": img.rcf.to_text(), "image_order": img.rcf.order(), "source_order": g.order()})
        out["order_identity_ok"] = out["source_order"] == e * out["image_order"]
    return out


def _pick(amb, G, order, coset):
    from .permrep import conjugacy_classes

    for c in conjugacy_classes(G):
        if c.order == order and amb.coset_index(c.rep) == coset:
            return c.rep
    raise InvalidInput(f"no class of order {order} in coset {coset}")


def _oracle(cfg: RunConfig):
    from .oracle import bruteforce as B
    from .oracle.ambient import ambient, canonical_id
    from .oracle.catalogs import CatalogError, load_catalog

    x = cfg.extra
    try:
        gid = canonical_id(x["group"])
        cat = load_catalog(gid)
    except (KeyError, CatalogError, FileNotFoundError) as err:
        raise InvalidInput(f"unknown or invalid group id {x['group']!r}: {err}") from None
    amb = cat.ambient
    op = x["op"]
    if op == "catalog":
        return {"group_id": cat.group_id, "catalog_hash": cat.digest, "order": amb.G.order(),
                "entries": [{"label": e.label, "order": e.order, "core_free": e.core_free, "maximal": e.maximal}
                            for e in cat.entries]}
    if op == "survey":
        return [r.__dict__ for r in B.derangement_survey(cat, x["seed"])]
    if op == "jordan":
        return {"value": B.jordan_sanity(amb.G, seed=x["seed"])}
    G = amb.socle if op == "invgen" else amb.G
    if x["element"]:
        el = amb.element(x["element"])
    elif x["order"] is not None:
        el = _pick(amb, G, x["order"], x["coset"])
    else:
        raise InvalidInput("give --element or --order")
    if op == "td":
        v = B.totally_deranged_bruteforce(cat, el)
    elif op == "unique":
        n, labels = B.unique_maximal_count(cat, el)
        return {"count": n, "labels": labels, "element": amb.decode_text(el), "catalog_hash": cat.digest}
    else:
        if gid not in ("Sp4(4).rho", "Sp4(4).phi"):
            raise InvalidInput("invgen is available for Sp4(4).rho and Sp4(4).phi")
        v = B.invariable_generation_bruteforce(load_catalog("Sp4(4)"), gid, el, seed=x["seed"])
    v.details["element"] = amb.decode_text(el)
    return v


def _selftest(cfg: RunConfig):
    from . import acceptance

    res = acceptance.run(cfg.extra["criteria"])
    return [{"criterion": r.number, "status": r.status, "title": r.title, "summary": r.summary,
             "seconds": f"{r.seconds:.1f}"} for r in res]


HANDLERS = {"classify": _classify, "enumerate": _enumerate, "shintani": _shintani, "oracle": _oracle,
            "selftest": _selftest}


def _dump(obj) -> str:
    if isinstance(obj, Verdict):
        obj = obj.to_json()
    return json.dumps(_jsonable(obj), ensure_ascii=False, indent=None)


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    logging.basicConfig(level=os.environ.get("TDGROUPS_LOG", "WARNING").upper(), stream=sys.stderr)
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as err:
        return EXIT_INVALID if err.code else EXIT_OK
    cfg = RunConfig.from_args(ns)
    try:
        result = HANDLERS[cfg.subcommand](cfg)
    except (Undecided, ClassTooLarge, S.SizeCapExceeded) as err:
        out.write(json.dumps({"value": UNDECIDED, "reason": str(err)}) + "\n")
        return EXIT_UNDECIDED
    except (InvalidInput, ValueError, FileNotFoundError) as err:
        print(f"tdgroups: error: {err}", file=sys.stderr)
        ap.print_usage(sys.stderr)
        return EXIT_INVALID
    out.write(_dump(result) + "\n")
    if isinstance(result, Verdict) and result.value == UNDECIDED:
        return EXIT_UNDECIDED
    if cfg.subcommand == "selftest" and any(r["status"] == "FAIL" for r in result):
        return EXIT_FAIL
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
