"""Concrete almost simple groups as permutation groups with matrix labels.

An element is a pair (A, k): a matrix A of the linear part followed by the
k-th power of a fixed outer permutation O. O is chosen so that
O * perm(A) = perm(alpha(A)) * O, where alpha is phi (entrywise Frobenius) or
the graph-field map rho, giving the product rule (A, k)(B, l) = (A alpha^k(B), k + l).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ..gf import FieldCtx, field as gf_field
from ..grpmat import family_form, graph_field_auto, in_family, standard_generators
from ..linalg import MatrixGF, matrix_from_text, matrix_to_text
from ..permrep import (
    ActionMap,
    PermGroup,
    action_on_subspaces,
    derived_subgroup,
    is_identity,
    matrix_from_point_perm,
    perm_dtype,
    power,
)

_SUFFIX = re.compile(r"^(.*)\|(phi|rho)\^(\d+)$", re.S)


@dataclass
class Ambient:
    group_id: str
    ctx: FieldCtx
    n: int
    family: str  # preferred matrix family for labels: "SL", "GL" or "Sp"
    linear: str  # family generating the linear part L used for decoding
    actions: list[ActionMap]
    outer_name: str | None
    outer_perm: np.ndarray | None
    alpha: object  # MatrixGF -> MatrixGF, or None
    gens: list[tuple[MatrixGF, int]]
    lin_gens: list[MatrixGF]
    G: PermGroup = field(repr=False, default=None)
    L: PermGroup = field(repr=False, default=None)
    socle: PermGroup = field(repr=False, default=None)

    @property
    def degree(self) -> int:
        return sum(a.degree for a in self.actions)

    @property
    def outer_order(self) -> int:
        if self.outer_perm is None:
            return 1
        k = 1
        g = self.outer_perm
        while not is_identity(g):
            g = g[self.outer_perm]
            k += 1
        return k

    def lin_perm(self, A: MatrixGF) -> np.ndarray:
        parts = []
        off = 0
        for am in self.actions:
            parts.append(am.apply(A).astype(np.int64) + off)
            off += am.degree
        return np.concatenate(parts).astype(perm_dtype(self.degree))

    def perm(self, A: MatrixGF, k: int = 0) -> np.ndarray:
        g = self.lin_perm(A)
        if k:
            g = power(self.outer_perm, k)[g]
        return g

    def element(self, text: str) -> np.ndarray:
        A, k = self.parse(text)
        return self.perm(A, k)

    def parse(self, text: str) -> tuple[MatrixGF, int]:
        m = _SUFFIX.match(text.strip())
        k = 0
        body = text.strip()
        if m:
            body, name, k = m.group(1), m.group(2), int(m.group(3))
            if name != self.outer_name:
                raise ValueError(f"{self.group_id} has no outer part {name!r}")
        A = matrix_from_text(body, self.ctx)
        if A.n != self.n:
            raise ValueError("matrix has the wrong size")
        return A, k

    def text(self, A: MatrixGF, k: int = 0) -> str:
        t = matrix_to_text(A)
        k %= self.outer_order
        return f"{t}|{self.outer_name}^{k}" if k else t

    def coset_index(self, g: np.ndarray) -> int:
        """k with g in L O^k."""
        for k in range(self.outer_order):
            h = g if k == 0 else power(self.outer_perm, -k)[g]
            if self.L.contains(h):
                return k
        raise ValueError("element outside the ambient group")

    def decode(self, g: np.ndarray) -> tuple[MatrixGF, int]:
        """(A, k) with perm(A, k) = g; A is taken in the preferred family when possible."""
        k = self.coset_index(g)
        h = g if k == 0 else power(self.outer_perm, -k)[g]
        am = self.actions[0]
        try:
            A = matrix_from_point_perm(am, h[: am.degree], accept=self._accept)
        except ValueError:
            A = matrix_from_point_perm(am, h[: am.degree], accept=lambda M: True)
        if not np.array_equal(self.lin_perm(A), h):
            raise ValueError("decoded matrix does not reproduce the permutation")
        return A, k

    def decode_text(self, g: np.ndarray) -> str:
        return self.text(*self.decode(g))

    def _accept(self, A: MatrixGF) -> bool:
        if self.family == "GL":
            return True
        return in_family(A, self.family)

    def mul(self, x: tuple[MatrixGF, int], y: tuple[MatrixGF, int]) -> tuple[MatrixGF, int]:
        A, k = x
        B, l = y
        for _ in range(k % self.outer_order):
            B = self.alpha(B)
        return A * B, (k + l) % self.outer_order


def _frobenius_perm(am: ActionMap, j: int) -> np.ndarray:
    """Permutation of the points of am induced by x -> x^(p^j) on coordinates."""
    F = am.ctx
    out = []
    for W in am.points:
        out.append(am.point_index(F.vfrob(W, j % F.f)))
    return np.array(out, dtype=perm_dtype(am.degree))


def _phi_outer(actions: list[ActionMap]) -> np.ndarray:
    # inverse Frobenius on points, so that O perm(A) = perm(phi(A)) O
    F = actions[0].ctx
    parts = []
    off = 0
    for am in actions:
        parts.append(_frobenius_perm(am, F.f - 1).astype(np.int64) + off)
        off += am.degree
    return np.concatenate(parts)


def _build(group_id, F, n, family, actions, outer_name, outer_perm, alpha, gens, linear=None) -> Ambient:
    linear = linear or family
    degree = sum(a.degree for a in actions)
    O = None if outer_perm is None else outer_perm.astype(perm_dtype(degree))
    lin = standard_generators(linear, n, F)
    amb = Ambient(group_id, F, n, family, linear, actions, outer_name, O, alpha, gens, lin)
    amb.L = PermGroup([amb.lin_perm(A) for A in lin], amb.degree)
    amb.G = PermGroup([amb.perm(A, k) for A, k in gens], amb.degree)
    base = amb.G.base
    amb.L = PermGroup(amb.L.gens, amb.degree, base=base)
    if outer_perm is not None:
        for A in lin[:3]:
            lhs = amb.lin_perm(A)[amb.outer_perm]  # O then perm(A)
            rhs = amb.outer_perm[amb.lin_perm(alpha(A))]  # perm(alpha(A)) then O
            if not np.array_equal(lhs, rhs):
                raise RuntimeError(f"outer permutation of {group_id} does not induce its automorphism")
    D = derived_subgroup(amb.G)
    # for these groups the socle is the last term of the derived series
    while True:
        D2 = derived_subgroup(D)
        if D2.order() == D.order():
            break
        D = D2
    amb.socle = PermGroup(D.gens, amb.degree, base=base)
    return amb


def _lin_gens(family, n, F):
    return [(A, 0) for A in standard_generators(family, n, F)]


def _projective_line(F):
    return action_on_subspaces(standard_generators("GL", 2, F), None, 1, "all")[0]


def _phi(A: MatrixGF) -> MatrixGF:
    return A.frob(1)


def _psl2(q_p, q_f, family, outer=False, twist=None, gid=""):
    F = gf_field(q_p, q_f)
    am = _projective_line(F)
    gens = _lin_gens(family, 2, F)
    O = _phi_outer([am]) if outer else None
    if outer:
        if twist is None:
            gens.append((MatrixGF.identity(F, 2), 1))
        else:
            gens.append((twist, 1))
    return _build(gid, F, 2, family, [am], "phi" if outer else None, O, _phi if outer else None, gens, linear="GL")


def _sp4_actions(F):
    gens = standard_generators("Sp", 4, F)
    form = family_form("Sp", 4, F)
    pts = action_on_subspaces(gens, form, 1, "totally-singular")[0]
    lines = action_on_subspaces(gens, form, 2, "totally-singular")[0]
    return pts, lines


def rho_permutation(F, pts: ActionMap, lines: ActionMap) -> np.ndarray:
    """The permutation R of points + lines with R perm(A) = perm(rho(A)) R.

    For a base object w0 and a matrix transversal M_w (w0 M_w = w), R maps w to
    l0 rho^-1(M_w), where l0 is the unique object fixed by rho^-1 of the
    stabilizer of w0.
    """
    rho = graph_field_auto(F.f)
    gens = standard_generators("Sp", 4, F)
    amb = Ambient("tmp", F, 4, "Sp", "Sp", [pts, lines], None, None, None, [], gens)
    perms = [amb.lin_perm(A) for A in gens]
    N = amb.degree
    R = np.full(N, -1, dtype=np.int64)
    for w0 in (0, pts.degree):
        # orbit with matrix transversal
        trans = {w0: MatrixGF.identity(F, 4)}
        order = [w0]
        stab = []
        i = 0
        while i < len(order):
            w = order[i]
            for g, A in zip(perms, gens):
                w2 = int(g[w])
                M = trans[w] * A
                if w2 not in trans:
                    trans[w2] = M
                    order.append(w2)
                elif len(stab) < 12:
                    stab.append(M * trans[w2].inverse())
            i += 1
        cand = np.ones(N, dtype=bool)
        for S in stab:
            p = amb.lin_perm(rho.inverse(S))
            cand &= p == np.arange(N)
        fixed = np.nonzero(cand)[0]
        if len(fixed) != 1:
            raise RuntimeError(f"expected one object fixed by the twisted stabilizer, found {len(fixed)}")
        l0 = int(fixed[0])
        for w, M in trans.items():
            R[w] = amb.lin_perm(rho.inverse(M))[l0]
    if (R < 0).any() or len(set(R.tolist())) != N:
        raise RuntimeError("rho permutation is not a bijection")
    return R


@lru_cache(maxsize=None)
def sp4_ambient(f: int, outer: str | None) -> Ambient:
    F = gf_field(2, f)
    pts, lines = _sp4_actions(F)
    gens = _lin_gens("Sp", 4, F)
    name = "Sp4(%d)" % F.q
    if outer is None:
        return _build(name, F, 4, "Sp", [pts, lines], None, None, None, gens)
    if outer == "phi":
        O = _phi_outer([pts, lines])
        gens.append((MatrixGF.identity(F, 4), 1))
        return _build(name + ".phi", F, 4, "Sp", [pts, lines], "phi", O, _phi, gens)
    if outer == "rho":
        R = rho_permutation(F, pts, lines)
        rho = graph_field_auto(f)
        gens.append((MatrixGF.identity(F, 4), 1))
        amb = _build(name + ".rho", F, 4, "Sp", [pts, lines], "rho", R, rho, gens)
        if not np.array_equal(amb.outer_perm[amb.outer_perm], _phi_outer([pts, lines]).astype(amb.outer_perm.dtype)):
            raise RuntimeError("rho^2 does not act as phi")
        return amb
    raise ValueError(f"unknown outer part {outer!r}")


@lru_cache(maxsize=None)
def sp4_2_ambient() -> Ambient:
    F = gf_field(2, 1)
    gens = standard_generators("Sp", 4, F)
    pts = action_on_subspaces(gens, family_form("Sp", 4, F), 1, "totally-singular")[0]
    return _build("Sp4(2)", F, 4, "Sp", [pts], None, None, None, [(A, 0) for A in gens])


def _m10_twist():
    F = gf_field(3, 2)
    return MatrixGF.diag(F, [F.gen, 1])


_BUILDERS = {
    "PSL2(5)": lambda: _psl2(5, 1, "SL", gid="PSL2(5)"),
    "PSL2(7)": lambda: _psl2(7, 1, "SL", gid="PSL2(7)"),
    "PSL2(8)": lambda: _psl2(2, 3, "SL", gid="PSL2(8)"),
    "PSL2(9)": lambda: _psl2(3, 2, "SL", gid="PSL2(9)"),
    "PGL2(5)": lambda: _psl2(5, 1, "GL", gid="PGL2(5)"),
    "PGL2(7)": lambda: _psl2(7, 1, "GL", gid="PGL2(7)"),
    "PGL2(9)": lambda: _psl2(3, 2, "GL", gid="PGL2(9)"),
    "PGammaL2(8)": lambda: _psl2(2, 3, "SL", outer=True, gid="PGammaL2(8)"),
    "S6": lambda: _psl2(3, 2, "SL", outer=True, gid="S6"),
    "M10": lambda: _psl2(3, 2, "SL", outer=True, twist=_m10_twist(), gid="M10"),
    "PGammaL2(9)": lambda: _psl2(3, 2, "GL", outer=True, gid="PGammaL2(9)"),
    "Sp4(2)": sp4_2_ambient,
    "Sp4(4)": lambda: sp4_ambient(2, None),
    "Sp4(4).phi": lambda: sp4_ambient(2, "phi"),
    "Sp4(4).rho": lambda: sp4_ambient(2, "rho"),
}

AMBIENT_IDS = tuple(_BUILDERS)

ALIASES = {
    "Sp4(4).4-graph-field": "Sp4(4).rho",
    "Sp4(4).ρ": "Sp4(4).rho",
    "Sp4(4).2-field": "Sp4(4).phi",
    "Sp4(4).φ": "Sp4(4).phi",
    "A6.2_1": "S6",
    "A6.2_2": "PGL2(9)",
    "A6.2_3": "M10",
    "PSL2(4)": "PSL2(5)",
}


def canonical_id(group_id: str) -> str:
    return ALIASES.get(group_id, group_id)


def ambient(group_id: str) -> Ambient:
    return _ambient(canonical_id(group_id))


@lru_cache(maxsize=None)
def _ambient(group_id: str) -> Ambient:
    try:
        return _BUILDERS[group_id]()
    except KeyError:
        raise KeyError(f"unknown group id {group_id!r}; known: {', '.join(AMBIENT_IDS)}") from None
