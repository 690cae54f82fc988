"""Permutation groups: deterministic Schreier-Sims, orbits, classes, actions.

A permutation of {0..n-1} is a 1-d numpy integer array g with g[i] the image
of i. Products read left to right: (g then h)[i] = h[g[i]]. Conjugation is
x^g = g^-1 x g, i.e. ``g[x[ginv]]``.

Group elements are identified by their base images. With a base of length L
on n points, ``keys`` packs the images into one int64, which lets whole
conjugacy classes be held as sorted integer arrays.
"""

from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field
from math import lcm, prod
from typing import Iterable, Sequence

import numpy as np

from .arith import is_prime
from .gf import value_text
from .linalg import MatrixGF, mat_mul, rank, rref, solve_left

log = logging.getLogger(__name__)

CLASS_CAP = 10**7
SUBGROUP_CAP = 10**6
COSET_CAP = 10**6


class ClassTooLarge(RuntimeError):
    """A conjugacy class exceeded the enumeration cap."""


class Undecided(RuntimeError):
    """Both the class and the subgroup exceed their caps."""


def perm_dtype(n: int):
    if n <= 256:
        return np.uint8
    if n <= 65536:
        return np.uint16
    return np.int32


def as_perm(g, n: int | None = None) -> np.ndarray:
    a = np.asarray(g)
    n = len(a) if n is None else n
    out = a.astype(perm_dtype(n))
    if len(out) != n or not np.array_equal(np.sort(out.astype(np.int64)), np.arange(n)):
        raise ValueError("not a permutation")
    return out


def identity_perm(n: int) -> np.ndarray:
    return np.arange(n, dtype=perm_dtype(n))


def mul(g: np.ndarray, h: np.ndarray) -> np.ndarray:
    """g then h."""
    return h[g]


def inv(g: np.ndarray) -> np.ndarray:
    out = np.empty_like(g)
    out[g] = np.arange(len(g), dtype=g.dtype)
    return out


def conj(x: np.ndarray, g: np.ndarray) -> np.ndarray:
    """g^-1 x g."""
    return g[x[inv(g)]]


def power(g: np.ndarray, k: int) -> np.ndarray:
    if k < 0:
        g, k = inv(g), -k
    result = np.arange(len(g), dtype=g.dtype)
    base = g
    while k:
        if k & 1:
            result = base[result]
        k >>= 1
        if k:
            base = base[base]
    return result


def is_identity(g: np.ndarray) -> bool:
    return bool(np.array_equal(g, np.arange(len(g))))


def cycle_type(g: np.ndarray) -> tuple[int, ...]:
    n = len(g)
    seen = np.zeros(n, dtype=bool)
    gl = g.tolist()
    lens = []
    for i in range(n):
        if not seen[i]:
            L = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = gl[j]
                L += 1
            lens.append(L)
    return tuple(sorted(lens, reverse=True))


def perm_order(g: np.ndarray) -> int:
    return lcm(*cycle_type(g)) if len(g) else 1


def fixed_points(g: np.ndarray) -> int:
    return int(np.count_nonzero(g == np.arange(len(g))))


def fixed_point_list(g: np.ndarray) -> list[int]:
    return np.nonzero(g == np.arange(len(g)))[0].tolist()


def perm_to_json(g: np.ndarray) -> list[int]:
    return [int(x) for x in g]


# ---------------------------------------------------------------------------
# stabilizer chains


class _Level:
    __slots__ = ("point", "gens", "orbit", "rep_idx", "reps", "repinvs", "checked", "applied")

    def __init__(self, point: int, n: int):
        self.point = point
        self.gens: list[int] = []
        self.orbit = [point]
        self.rep_idx = np.full(n, -1, dtype=np.int64)
        self.rep_idx[point] = 0
        self.reps = [np.arange(n, dtype=perm_dtype(n))]
        self.repinvs = [self.reps[0]]
        self.checked: set[tuple[int, int]] = set()
        self.applied: set[tuple[int, int]] = set()

    def extend(self, S: list[np.ndarray]):
        """Close the orbit under the level generators, keeping existing reps."""
        i = 0
        while i < len(self.orbit):
            b = self.orbit[i]
            for gi in self.gens:
                if (b, gi) in self.applied:
                    continue
                self.applied.add((b, gi))
                s = S[gi]
                c = int(s[b])
                if self.rep_idx[c] < 0:
                    r = s[self.reps[self.rep_idx[b]]]
                    self.rep_idx[c] = len(self.reps)
                    self.reps.append(r)
                    self.repinvs.append(inv(r))
                    self.orbit.append(c)
            i += 1

    def rep(self, pt: int) -> np.ndarray:
        return self.reps[self.rep_idx[pt]]

    def repinv(self, pt: int) -> np.ndarray:
        return self.repinvs[self.rep_idx[pt]]


class StabChain:
    """Base and strong generating set with explicit transversals."""

    def __init__(self, n: int, base: Sequence[int] = ()):
        self.n = n
        self.S: list[np.ndarray] = []
        self.levels: list[_Level] = [_Level(int(b), n) for b in base]

    @property
    def base(self) -> list[int]:
        return [lv.point for lv in self.levels]

    def order(self) -> int:
        return prod(len(lv.orbit) for lv in self.levels)

    def sift(self, g: np.ndarray, start: int = 0) -> tuple[np.ndarray, int]:
        for l in range(start, len(self.levels)):
            lv = self.levels[l]
            c = int(g[lv.point])
            k = lv.rep_idx[c]
            if k < 0:
                return g, l
            if k:
                g = lv.repinvs[k][g]
        return g, len(self.levels)

    def contains(self, g: np.ndarray) -> bool:
        h, _ = self.sift(g)
        return is_identity(h)

    def add_strong(self, h: np.ndarray, lo: int, hi: int):
        """Add h as a strong generator on levels lo..hi (extending the base if needed)."""
        k = len(self.S)
        self.S.append(h)
        if hi == len(self.levels):
            moved = np.nonzero(h != np.arange(self.n))[0]
            self.levels.append(_Level(int(moved[0]), self.n))
        for l in range(lo, hi + 1):
            self.levels[l].gens.append(k)
            self.levels[l].extend(self.S)

    def schreier_sims(self):
        """Complete the chain deterministically using Schreier generators."""
        i = len(self.levels) - 1
        while i >= 0:
            lv = self.levels[i]
            restart = None
            j = 0
            while j < len(lv.orbit) and restart is None:
                b = lv.orbit[j]
                for gi in list(lv.gens):
                    if (b, gi) in lv.checked:
                        continue
                    lv.checked.add((b, gi))
                    s = self.S[gi]
                    c = int(s[b])
                    h = lv.repinv(c)[s[lv.rep(b)]]
                    res, lvl = self.sift(h, i + 1)
                    if not is_identity(res):
                        self.add_strong(res, i + 1, lvl)
                        restart = lvl
                        break
                j += 1
            if restart is not None:
                i = restart
            else:
                i -= 1

    def random_element(self, rng) -> np.ndarray:
        g = np.arange(self.n, dtype=perm_dtype(self.n))
        for lv in reversed(self.levels):
            r = lv.reps[rng.randrange(len(lv.reps))]
            g = r[g]
        return g


def _product_replacement(gens, rng, n, size=10, burn=60):
    state = [g.copy() for g in gens]
    while len(state) < size:
        state.append(state[len(state) % len(gens)].copy())
    acc = np.arange(n, dtype=perm_dtype(n))

    def step():
        nonlocal acc
        i, j = rng.sample(range(len(state)), 2)
        if rng.random() < 0.5:
            state[i] = state[j][state[i]]
        else:
            state[i] = state[i][state[j]]
        acc = state[i][acc]
        return acc

    for _ in range(burn):
        step()
    return step


class PermGroup:
    """A permutation group given by generators, with a lazily built stabilizer chain."""

    def __init__(self, gens: Iterable, degree: int | None = None, base: Sequence[int] = (), order: int | None = None):
        gens = [np.asarray(g) for g in gens]
        if degree is None:
            if not gens:
                raise ValueError("degree needed for the trivial group")
            degree = len(gens[0])
        self.degree = degree
        dt = perm_dtype(degree)
        self.gens = [g.astype(dt) for g in gens]
        for g in self.gens:
            if len(g) != degree:
                raise ValueError("generator has the wrong degree")
        self._base_hint = list(base)
        self._chain: StabChain | None = None
        self._known_order = order
        self._key_mult = None

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, ngens={len(self.gens)})"

    # -- chain
    @property
    def chain(self) -> StabChain:
        if self._chain is None:
            self._chain = self._build_chain()
        return self._chain

    def _build_chain(self) -> StabChain:
        n = self.degree
        C = StabChain(n, self._base_hint)
        for g in self.gens:
            if is_identity(g):
                continue
            res, lvl = C.sift(g)
            if not is_identity(res):
                C.add_strong(res, 0, lvl)
        if self._known_order is not None and C.order() < self._known_order:
            self._randomized_fill(C, self._known_order)
        C.schreier_sims()
        if self._known_order is not None and C.order() != self._known_order:
            raise RuntimeError(f"group order {C.order()} differs from declared {self._known_order}")
        return C

    def _randomized_fill(self, C: StabChain, target: int, seed: int = 0, max_misses: int = 40):
        rng = random.Random(seed)
        step = _product_replacement(self.gens, rng, self.degree)
        misses = 0
        while C.order() < target and misses < max_misses:
            res, lvl = C.sift(step())
            if is_identity(res):
                misses += 1
            else:
                misses = 0
                C.add_strong(res, 0, lvl)

    @property
    def base(self) -> list[int]:
        return self.chain.base

    def order(self) -> int:
        return self.chain.order()

    def contains(self, g) -> bool:
        g = np.asarray(g)
        if len(g) != self.degree:
            return False
        return self.chain.contains(g.astype(perm_dtype(self.degree)))

    def strong_generators(self) -> list[np.ndarray]:
        return list(self.chain.S)

    def stabilizer_generators(self, depth: int) -> list[np.ndarray]:
        """Generators of the pointwise stabilizer of the first ``depth`` base points."""
        C = self.chain
        return [C.S[k] for k in sorted({k for lv in C.levels[depth:] for k in lv.gens})]

    def random_element(self, rng) -> np.ndarray:
        return self.chain.random_element(rng)

    def identity(self) -> np.ndarray:
        return identity_perm(self.degree)

    # -- keys
    def key_fits(self) -> bool:
        L = len(self.base)
        return self.degree**L < 2**63

    def keys(self, X: np.ndarray) -> np.ndarray:
        """int64 keys of the rows of X (elements of this group) from base images."""
        X = np.atleast_2d(X)
        base = self.base
        if not self.key_fits():
            raise OverflowError("base images do not fit in int64")
        if self._key_mult is None:
            self._key_mult = np.array([self.degree**i for i in range(len(base))], dtype=np.int64)
        if not base:
            return np.zeros(len(X), dtype=np.int64)
        return X[:, base].astype(np.int64) @ self._key_mult

    def key(self, g) -> int:
        return int(self.keys(np.asarray(g)[None, :])[0])

    def element_from_key(self, key: int) -> np.ndarray:
        """The unique element with the base images encoded in key."""
        return _element_by_images(self, _key_images(self, key))

    # -- enumeration
    def elements(self, cap: int = SUBGROUP_CAP) -> np.ndarray:
        """All elements as rows, ordered by the transversal product structure."""
        N = self.order()
        if N > cap:
            raise ClassTooLarge(f"group of order {N} exceeds enumeration cap {cap}")
        C = self.chain
        E = identity_perm(self.degree)[None, :]
        for lv in reversed(C.levels):
            U = np.stack(lv.reps)
            # e then u, for every e in E and u in U
            E = np.concatenate([u[E] for u in U])
        return E

    def element_keys(self, cap: int = SUBGROUP_CAP, base_of: "PermGroup | None" = None) -> np.ndarray:
        owner = base_of if base_of is not None else self
        return np.sort(owner.keys(self.elements(cap)))

    # -- orbits
    def orbit(self, pt: int) -> list[int]:
        seen = {pt}
        out = [pt]
        i = 0
        while i < len(out):
            b = out[i]
            for g in self.gens:
                c = int(g[b])
                if c not in seen:
                    seen.add(c)
                    out.append(c)
            i += 1
        return out

    def orbits(self) -> list[list[int]]:
        seen = np.zeros(self.degree, dtype=bool)
        out = []
        for i in range(self.degree):
            if not seen[i]:
                o = self.orbit(i)
                seen[o] = True
                out.append(sorted(o))
        return out

    def is_transitive(self) -> bool:
        return len(self.orbit(0)) == self.degree

    def is_normal_in(self, G: "PermGroup") -> bool:
        return all(self.contains(conj(h, g)) for h in self.gens for g in G.gens)


def _element_by_images(G: PermGroup, imgs: list[int]) -> np.ndarray:
    """Element mapping base[i] to imgs[i], found by walking the chain."""
    C = G.chain
    g = identity_perm(G.degree)
    # g = u_l then ... then u_0, fixed up one base point at a time
    for lv, img in zip(C.levels, imgs):
        pre = int(inv(g)[img])
        if lv.rep_idx[pre] < 0:
            raise ValueError("key does not describe a group element")
        g = g[lv.rep(pre)]
    return g


# ---------------------------------------------------------------------------
# randomized generation certificates


def order_lower_bound_reaches(gens: Sequence[np.ndarray], target: int, base: Sequence[int], seed: int = 0,
                              max_misses: int = 30) -> bool:
    """True when random elements of <gens> prove |<gens>| >= target.

    Every strong generator added is an element of the group, so the product of
    basic orbit lengths is a lower bound on its order; reaching the target is a
    certificate. False means only that the bound was not reached.
    """
    n = len(gens[0])
    C = StabChain(n, base)
    for g in gens:
        res, lvl = C.sift(g)
        if not is_identity(res):
            C.add_strong(res, 0, lvl)
    if C.order() >= target:
        return True
    rng = random.Random(seed)
    step = _product_replacement(list(gens), rng, n)
    misses = 0
    while misses < max_misses:
        res, lvl = C.sift(step())
        if is_identity(res):
            misses += 1
            continue
        misses = 0
        C.add_strong(res, 0, lvl)
        if C.order() >= target:
            return True
    return False


def generates(G: PermGroup, elems: Sequence[np.ndarray], seed: int = 0) -> bool:
    """Whether elems generate G (all elems assumed to lie in G)."""
    elems = [np.asarray(e).astype(perm_dtype(G.degree)) for e in elems]
    for e in elems:
        if not G.contains(e):
            raise ValueError("element outside the group")
    N = G.order()
    if order_lower_bound_reaches(elems, N, G.base, seed=seed):
        return True
    return PermGroup(elems, G.degree, base=G.base).order() == N


def subgroup_order(elems: Sequence[np.ndarray], degree: int, base: Sequence[int] = ()) -> int:
    return PermGroup(elems, degree, base=base).order()


def bsgs_order(G: PermGroup) -> int:
    return G.order()


# ---------------------------------------------------------------------------
# conjugacy classes


@dataclass
class ConjClass:
    rep: np.ndarray
    size: int
    keys: np.ndarray  # sorted
    order: int
    cycles: tuple[int, ...]
    parents: np.ndarray | None = field(default=None, repr=False)

    def contains_key(self, k) -> np.ndarray:
        k = np.asarray(k)
        idx = np.searchsorted(self.keys, k)
        idx = np.minimum(idx, len(self.keys) - 1)
        return self.keys[idx] == k


def conjugacy_orbit(G: PermGroup, x: np.ndarray, cap: int = CLASS_CAP, keep_elements: bool = False,
                    track: bool = False):
    """The class x^G as sorted keys; optionally the elements and a BFS tree.

    With ``track`` the result carries (parent index, generator index) for every
    element in discovery order, enough to rebuild a conjugating element.
    """
    x = np.asarray(x).astype(perm_dtype(G.degree))
    gens = G.gens
    ginvs = [inv(g) for g in gens]
    frontier = x[None, :]
    fkeys = G.keys(frontier)
    all_keys = [fkeys]
    seen = np.sort(fkeys)
    elems = [frontier] if (keep_elements or track) else None
    parents = [np.array([[-1, -1]], dtype=np.int64)] if track else None
    total = 1
    offset = 0
    while len(frontier):
        news, nkeys, npar = [], [], []
        for gi, (g, gv) in enumerate(zip(gens, ginvs)):
            Y = g[frontier[:, gv]]
            news.append(Y)
            nkeys.append(G.keys(Y))
            if track:
                npar.append(np.stack([np.arange(offset, offset + len(frontier)), np.full(len(frontier), gi)], 1))
        Y = np.concatenate(news)
        K = np.concatenate(nkeys)
        uk, first = np.unique(K, return_index=True)
        fresh = ~np.isin(uk, seen, assume_unique=True)
        sel = first[fresh]
        sel.sort()
        offset += len(frontier)
        frontier = Y[sel]
        fk = K[sel]
        total += len(sel)
        if total > cap:
            raise ClassTooLarge(f"class exceeds cap {cap}")
        if len(sel):
            seen = np.union1d(seen, fk)
            all_keys.append(fk)
            if elems is not None:
                elems.append(frontier)
            if track:
                npar = np.concatenate(npar)[sel]
                parents.append(npar)
    out = {"keys": seen, "size": int(len(seen))}
    if elems is not None:
        out["elements"] = np.concatenate(elems)
        out["order_keys"] = np.concatenate(all_keys)
    if track:
        out["parents"] = np.concatenate(parents)
    return out


def conjugator_from_tree(G: PermGroup, parents: np.ndarray, idx: int) -> np.ndarray:
    """g with x^g equal to the idx-th discovered element."""
    g = identity_perm(G.degree)
    chain = []
    while parents[idx, 0] >= 0:
        chain.append(int(parents[idx, 1]))
        idx = int(parents[idx, 0])
    for gi in reversed(chain):
        g = G.gens[gi][g]
    return g


def conjugacy_class(G: PermGroup, x: np.ndarray, cap: int = CLASS_CAP) -> ConjClass:
    res = conjugacy_orbit(G, x, cap)
    return ConjClass(np.asarray(x).astype(perm_dtype(G.degree)), res["size"], res["keys"], perm_order(x), cycle_type(x))


def conjugacy_classes(G: PermGroup, within: PermGroup | None = None, seed: int = 0, cap: int = CLASS_CAP,
                      max_samples: int = 10**6) -> list[ConjClass]:
    """G-classes of elements of ``within`` (a normal subgroup, default G).

    Representatives are found by seeded uniform sampling plus closure under
    powers, until the class sizes add up to the order of ``within``. Each
    representative is the element of least key in its class.
    """
    W = within if within is not None else G
    total = W.order()
    rng = random.Random(seed)
    classes: list[ConjClass] = []
    covered = 0
    by_inv: dict[tuple, list[ConjClass]] = {}

    def known(y):
        inv_ = (perm_order(y), cycle_type(y))
        k = G.key(y)
        for c in by_inv.get(inv_, []):
            if c.contains_key(k):
                return True
        return False

    def add(y):
        nonlocal covered
        res = conjugacy_orbit(G, y, cap)
        kmin = int(res["keys"][0])
        rep = _element_by_images(G, _key_images(G, kmin))
        c = ConjClass(rep, res["size"], res["keys"], perm_order(rep), cycle_type(rep))
        classes.append(c)
        by_inv.setdefault((c.order, c.cycles), []).append(c)
        covered += c.size

    queue = [identity_perm(G.degree)]
    samples = 0
    while covered < total:
        if queue:
            y = queue.pop()
        else:
            samples += 1
            if samples > max_samples:
                raise RuntimeError("class enumeration did not converge")
            y = W.random_element(rng)
        if known(y):
            continue
        add(y)
        o = perm_order(y)
        for d in range(2, o):
            if o % d == 0:
                queue.append(power(y, d))
    if covered != total:
        raise RuntimeError("class sizes overshoot the group order")
    classes.sort(key=lambda c: (c.order, c.size, int(c.keys[0])))
    return classes


def _key_images(G: PermGroup, key: int) -> list[int]:
    imgs = []
    for _ in G.base:
        key, r = divmod(key, G.degree)
        imgs.append(r)
    return imgs


def centralizer_order(G: PermGroup, x, cap: int = CLASS_CAP) -> int:
    return G.order() // conjugacy_orbit(G, x, cap)["size"]


# ---------------------------------------------------------------------------
# class versus subgroup


@dataclass
class MeetResult:
    meets: bool
    witness: np.ndarray | None
    count: int | None  # |x^G cap H| when known


def class_meets_subgroup(G: PermGroup, x, H: PermGroup, class_cap: int = CLASS_CAP,
                         subgroup_cap: int = SUBGROUP_CAP, class_keys: np.ndarray | None = None,
                         count: bool = False) -> MeetResult:
    """Decide whether x^G meets H, with a witness element of H.

    Exact: enumerates H and looks each element up in the class. A cycle-type
    filter settles the case where no element of H has x's cycle type.
    """
    x = np.asarray(x).astype(perm_dtype(G.degree))
    ct = cycle_type(x)
    if H.order() > subgroup_cap:
        if class_keys is None:
            raise Undecided("subgroup exceeds cap and no class given")
    if H.order() <= subgroup_cap:
        E = H.elements(subgroup_cap)
        if class_keys is None:
            # cheap exclusion by cycle type before enumerating the class
            cands = [i for i in range(len(E)) if cycle_type(E[i]) == ct] if len(E) <= 20000 else None
            if cands is not None and not cands:
                return MeetResult(False, None, 0)
            try:
                class_keys = conjugacy_orbit(G, x, class_cap)["keys"]
            except ClassTooLarge:
                raise Undecided("class and subgroup both exceed caps") from None
        K = G.keys(E)
        idx = np.searchsorted(class_keys, K)
        idx = np.minimum(idx, len(class_keys) - 1)
        hit = class_keys[idx] == K
        n = int(hit.sum())
        if n:
            return MeetResult(True, E[np.argmax(hit)], n)
        return MeetResult(False, None, 0)
    raise Undecided("subgroup exceeds cap")


# ---------------------------------------------------------------------------
# actions


@dataclass
class CosetAction:
    """Right action of G on the right cosets of H."""

    G: PermGroup
    H: PermGroup
    reps: np.ndarray  # coset representatives (rows)
    group: PermGroup
    _hbase: np.ndarray = field(repr=False, default=None)
    _codes: np.ndarray = field(repr=False, default=None)
    _order: np.ndarray = field(repr=False, default=None)

    @property
    def degree(self) -> int:
        return len(self.reps)

    def _coset_codes(self, R: np.ndarray) -> np.ndarray:
        imgs = R[:, self._hbase]  # (k, |H|, L)
        mult = np.array([self.G.degree**i for i in range(imgs.shape[2])], dtype=np.int64)
        return (imgs.astype(np.int64) @ mult).min(axis=1)

    def map(self, x) -> np.ndarray:
        x = np.asarray(x)
        codes = self._coset_codes(x[self.reps])
        pos = np.searchsorted(self._codes, codes)
        return self._order[pos].astype(perm_dtype(self.degree))


def coset_action(G: PermGroup, H: PermGroup, cap: int = COSET_CAP, hcap: int = SUBGROUP_CAP) -> CosetAction:
    index = G.order() // H.order()
    if index * H.order() != G.order():
        raise ValueError("H is not a subgroup of G")
    if index > cap:
        raise ClassTooLarge(f"index {index} exceeds cap {cap}")
    base = G.base
    if G.degree ** len(base) >= 2**63:
        raise OverflowError("coset codes do not fit in int64")
    Hel = H.elements(hcap)
    hbase = Hel[:, base]
    mult = np.array([G.degree**i for i in range(len(base))], dtype=np.int64)

    def code(r):
        return int((r[hbase].astype(np.int64) @ mult).min())

    e = identity_perm(G.degree)
    reps = [e]
    index_of = {code(e): 0}
    i = 0
    while i < len(reps):
        r = reps[i]
        for g in G.gens:
            r2 = g[r]
            c = code(r2)
            if c not in index_of:
                index_of[c] = len(reps)
                reps.append(r2)
        i += 1
    if len(reps) != index:
        raise RuntimeError("coset enumeration size mismatch")
    codes = np.array(list(index_of.keys()), dtype=np.int64)
    idxs = np.array(list(index_of.values()), dtype=np.int64)
    order = np.argsort(codes)
    ca = CosetAction(G, H, np.stack(reps), None, hbase, codes[order], idxs[order])
    ca.group = PermGroup([ca.map(g) for g in G.gens], index)
    return ca


def is_primitive(G: PermGroup) -> bool:
    """Transitive G is primitive when the minimal block through {0, b} is
    everything for every b; uses union-find closure."""
    n = G.degree
    if not G.is_transitive():
        raise ValueError("is_primitive needs a transitive group")
    if n <= 2:
        return True
    gens = [g.tolist() for g in G.gens]
    for b in range(1, n):
        parent = list(range(n))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        stack = [(0, b)]
        parent[b] = 0
        merges = 1
        while stack:
            u, v = stack.pop()
            for g in gens:
                a, c = find(g[u]), find(g[v])
                if a != c:
                    parent[c] = a
                    merges += 1
                    stack.append((a, c))
        if merges < n - 1:
            return False
    return True


def minimal_block(G: PermGroup, b: int) -> list[int]:
    n = G.degree
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    gens = [g.tolist() for g in G.gens]
    stack = [(0, b)]
    parent[b] = 0
    while stack:
        u, v = stack.pop()
        for g in gens:
            a, c = find(g[u]), find(g[v])
            if a != c:
                parent[c] = a
                stack.append((a, c))
    r = find(0)
    return [i for i in range(n) if find(i) == r]


# ---------------------------------------------------------------------------
# orbit-stabilizer on arbitrary G-sets


def orbit_stabilizer(G: PermGroup, start, act, key, seed: int = 0):
    """Orbit of ``start`` under G and generators of its stabilizer.

    ``act(obj, i)`` applies generator i of G (so callers can keep parallel
    matrix generators), ``key(obj)`` gives a hashable canonical key.
    Stabilizer generators are sifted Schreier generators, taken until the
    known order |G| / |orbit| is reached.
    """
    gens = G.gens
    objs = [start]
    reps = [identity_perm(G.degree)]
    index = {key(start): 0}
    schreier = []
    i = 0
    while i < len(objs):
        for gi, g in enumerate(gens):
            o2 = act(objs[i], gi)
            k = key(o2)
            r2 = g[reps[i]]
            if k not in index:
                index[k] = len(objs)
                objs.append(o2)
                reps.append(r2)
            else:
                schreier.append((r2, index[k]))
        i += 1
    target = G.order() // len(objs)
    base = G.base
    C = StabChain(G.degree, base)
    reps_inv = {}
    rng = random.Random(seed)
    order_ok = target == 1
    # sift Schreier generators in a shuffled but seeded order until the order is reached
    idxs = list(range(len(schreier)))
    rng.shuffle(idxs)
    for t in idxs:
        if order_ok:
            break
        r2, j = schreier[t]
        if j not in reps_inv:
            reps_inv[j] = inv(reps[j])
        h = reps_inv[j][r2]
        res, lvl = C.sift(h)
        if not is_identity(res):
            C.add_strong(res, 0, lvl)
            if C.order() >= target:
                order_ok = True
    stab_gens = list(C.S)
    H = PermGroup(stab_gens, G.degree, base=base) if stab_gens else PermGroup([], G.degree)
    if H.order() != target:
        raise RuntimeError("stabilizer order mismatch")
    return objs, reps, H


def subgroup_key(H: PermGroup, G: PermGroup) -> bytes:
    return np.sort(G.keys(H.elements())).tobytes()


def normalizer(G: PermGroup, H: PermGroup, seed: int = 0) -> PermGroup:
    """N_G(H) as the stabilizer of H under conjugation (H enumerated)."""
    E = H.elements()
    ginvs = [inv(g) for g in G.gens]

    def act(X, i):
        return G.gens[i][X[:, ginvs[i]]]

    def key(X):
        return np.sort(G.keys(X)).tobytes()

    _, _, N = orbit_stabilizer(G, E, act, key, seed=seed)
    return N


def centralizer(G: PermGroup, x, seed: int = 0) -> PermGroup:
    x = np.asarray(x).astype(perm_dtype(G.degree))
    ginvs = [inv(g) for g in G.gens]

    def act(y, i):
        return G.gens[i][y[ginvs[i]]]

    def key(y):
        return y.tobytes()

    _, _, C = orbit_stabilizer(G, x, act, key, seed=seed)
    return C


def pointwise_stabilizer(G: PermGroup, pts: Sequence[int]) -> PermGroup:
    H = PermGroup(G.gens, G.degree, base=list(pts))
    depth = len(pts)
    gens = H.stabilizer_generators(depth)
    return PermGroup(gens, G.degree, base=list(pts)[depth:] + G.base) if gens else PermGroup([], G.degree)


def restrict(G: PermGroup, pts: Sequence[int]) -> PermGroup:
    """Action on an invariant set of points, renumbered 0..k-1 in the given order."""
    pts = list(pts)
    pos = np.full(G.degree, -1, dtype=np.int64)
    pos[pts] = np.arange(len(pts))
    gens = []
    for g in G.gens:
        img = pos[g[pts]]
        if (img < 0).any():
            raise ValueError("points are not invariant")
        gens.append(img)
    return PermGroup(gens, len(pts))


def sylow_subgroup(G: PermGroup, p: int, seed: int = 0) -> PermGroup:
    """A Sylow p-subgroup, grown inside successive normalizers."""
    N = G.order()
    target = 1
    while N % (target * p) == 0:
        target *= p
    rng = random.Random(seed)
    P = PermGroup([], G.degree)
    while P.order() < target:
        Nm = normalizer(G, P, seed) if P.order() > 1 else G
        found = None
        for _ in range(20000):
            y = Nm.random_element(rng)
            o = perm_order(y)
            m = o
            while m % p == 0:
                m //= p
            y = power(y, m)
            if is_identity(y) or P.contains(y):
                continue
            found = y
            break
        if found is None:
            raise RuntimeError("failed to extend p-subgroup")
        P = PermGroup(P.gens + [found], G.degree, base=G.base)
        # keep only the p-part when the new group is not a p-group (cannot happen inside N(P))
        if P.order() % p and P.order() != 1:
            raise RuntimeError("not a p-group")
    return P


def vector_action_perms(mats) -> tuple[list[np.ndarray], int]:
    """Permutations of the nonzero vectors of GF(q)^n induced by matrices."""
    F = mats[0].ctx
    n = mats[0].n
    N = F.q**n
    if N > 2 * 10**6:
        raise ValueError("vector action too large")
    codes = np.arange(1, N, dtype=np.int64)
    V = np.zeros((N - 1, n), dtype=np.int64)
    c = codes.copy()
    for i in range(n):
        V[:, i] = c % F.q
        c //= F.q
    mult = np.array([F.q**i for i in range(n)], dtype=np.int64)
    perms = []
    for A in mats:
        W = mat_mul(F, V, A.a)
        perms.append((W @ mult - 1).astype(perm_dtype(N - 1)))
    return perms, N - 1


# ---------------------------------------------------------------------------
# derived subgroups, generating sets, maximality


def normal_closure(G: PermGroup, elems: Sequence[np.ndarray]) -> PermGroup:
    gens = [np.asarray(e).astype(perm_dtype(G.degree)) for e in elems if not is_identity(np.asarray(e))]
    N = PermGroup(gens, G.degree, base=G.base)
    changed = True
    while changed:
        changed = False
        for h in list(N.gens):
            for g in G.gens:
                c = conj(h, g)
                if not N.contains(c):
                    N = PermGroup(N.gens + [c], G.degree, base=G.base)
                    changed = True
    return N


def derived_subgroup(G: PermGroup) -> PermGroup:
    comms = []
    for a, b in itertools.combinations(G.gens, 2):
        comms.append(mul(mul(inv(a), inv(b)), mul(a, b)))
    if not comms:
        return PermGroup([], G.degree)
    return normal_closure(G, comms)


def two_generators(G: PermGroup, seed: int = 0, tries: int = 2000) -> list[np.ndarray]:
    """A pair of elements generating G, found by seeded random search."""
    rng = random.Random(seed)
    N = G.order()
    for _ in range(tries):
        a, b = G.random_element(rng), G.random_element(rng)
        if order_lower_bound_reaches([a, b], N, G.base, seed=seed):
            return [a, b]
    return list(G.gens)


def double_coset_reps(G: PermGroup, H: PermGroup, cap: int = COSET_CAP) -> list[np.ndarray]:
    """Representatives of H\\G/H: one per H-orbit on the right cosets of H."""
    ca = coset_action(G, H, cap)
    Himg = PermGroup([ca.map(h) for h in H.gens], ca.degree) if H.gens else PermGroup([], ca.degree)
    return [ca.reps[o[0]] for o in Himg.orbits()]


def is_maximal(G: PermGroup, H: PermGroup, seed: int = 0) -> bool:
    """Exact test: H < G is maximal iff <H, g> = G for every g outside H, and it
    suffices to let g run over double coset representatives."""
    if H.order() == G.order():
        return False
    if is_prime(G.order() // H.order()):
        return True
    for g in double_coset_reps(G, H):
        if H.contains(g):
            continue
        if not generates(G, list(H.gens) + [g], seed=seed):
            return False
    return True


def conjugate_subgroup(H: PermGroup, g: np.ndarray) -> PermGroup:
    return PermGroup([conj(h, g) for h in H.gens], H.degree, base=H._base_hint)


def subgroups_conjugate(G: PermGroup, H: PermGroup, K: PermGroup, cap: int = COSET_CAP) -> np.ndarray | None:
    """g in G with H^g = K, or None. Exact, by walking the conjugation orbit of H."""
    if H.order() != K.order():
        return None
    target = np.sort(G.keys(K.elements())).tobytes()
    E = H.elements()
    ginvs = [inv(g) for g in G.gens]
    seen = {np.sort(G.keys(E)).tobytes(): identity_perm(G.degree)}
    if target in seen:
        return seen[target]
    frontier = [(E, identity_perm(G.degree))]
    while frontier:
        nxt = []
        for X, c in frontier:
            for g, gv in zip(G.gens, ginvs):
                Y = g[X[:, gv]]
                k = np.sort(G.keys(Y)).tobytes()
                if k in seen:
                    continue
                c2 = g[c]
                seen[k] = c2
                if k == target:
                    return c2
                if len(seen) > cap:
                    raise ClassTooLarge("subgroup class too large")
                nxt.append((Y, c2))
        frontier = nxt
    return None


# ---------------------------------------------------------------------------
# actions of matrix groups on subspaces


def _subspace_text(F, W: np.ndarray) -> str:
    return ";".join(" ".join(value_text(F, int(v)) for v in row) for row in W)


def all_subspaces(F, n: int, k: int, limit: int = 10**6) -> list[np.ndarray]:
    """RREF bases of all k-subspaces of GF(q)^n."""
    out = []
    q = F.q
    for piv in itertools.combinations(range(n), k):
        free = [(r, c) for r in range(k) for c in range(piv[r] + 1, n) if c not in piv]
        if len(out) + q ** len(free) > limit:
            raise ClassTooLarge(f"more than {limit} subspaces")
        for vals in itertools.product(range(q), repeat=len(free)):
            W = np.zeros((k, n), dtype=np.int64)
            for r, c in enumerate(piv):
                W[r, c] = 1
            for (r, c), v in zip(free, vals):
                W[r, c] = v
            out.append(W)
    return out


def gaussian_binomial(n: int, k: int, q: int) -> int:
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def _subspace_kind_ok(form, W: np.ndarray, kind: str) -> bool:
    F = form.ctx
    k = W.shape[0]
    gram = form.gram()
    G = mat_mul(F, mat_mul(F, W, gram), W.T.copy())
    if kind == "totally-singular":
        if np.any(G):
            return False
        if form.is_quadratic:
            return all(form.Q(W[i]) == 0 for i in range(k))
        return True
    if kind == "nondegenerate":
        return rank(F, G) == k
    raise ValueError(f"unknown subspace kind {kind!r}")


@dataclass
class ActionMap:
    """Action of matrices (acting on row vectors) on a list of subspaces."""

    ctx: object
    n: int
    k: int
    kind: str
    points: list[np.ndarray]
    index: dict = field(repr=False)

    @property
    def degree(self) -> int:
        return len(self.points)

    def point_index(self, W: np.ndarray) -> int:
        R, piv = rref(self.ctx, W)
        return self.index[R[: len(piv)].tobytes()]

    def apply(self, A) -> np.ndarray:
        """Permutation of point indices induced by A (right action)."""
        F = self.ctx
        if self.k == 1:
            V = np.stack([W[0] for W in self.points])
            img = normalize_rows(F, mat_mul(F, V, A.a))
            keys = [row.tobytes() for row in img]
            out = np.array([self.index[kk] for kk in keys])
        else:
            out = np.array([self.point_index(mat_mul(F, W, A.a)) for W in self.points])
        return out.astype(perm_dtype(self.degree))

    def text(self, i: int) -> str:
        return _subspace_text(self.ctx, self.points[i])


def normalize_rows(F, V: np.ndarray) -> np.ndarray:
    """Scale each nonzero row so its first nonzero entry is 1."""
    V = np.asarray(V, dtype=np.int64)
    lead_pos = np.argmax(V != 0, axis=1)
    lead = V[np.arange(len(V)), lead_pos]
    if np.any(lead == 0):
        raise ValueError("zero row has no projective point")
    return F.vmul(V, F.vinv(lead)[:, None])


def action_on_subspaces(gens, form, k: int, kind: str = "all", cap: int = 10**6):
    """ActionMap and permutation group of the matrix group <gens> on k-spaces.

    kind is "all", "totally-singular" (isotropic for a symplectic form) or
    "nondegenerate". Points are RREF bases ordered by their text form; the
    homomorphism property is checked on products of generator pairs.
    """
    F = gens[0].ctx
    n = gens[0].n
    if gaussian_binomial(n, k, F.q) > cap:
        raise ClassTooLarge("too many subspaces")
    spaces = all_subspaces(F, n, k, cap)
    if kind != "all":
        if form is None:
            raise ValueError(f"kind {kind!r} needs a form")
        if k == 1 and kind == "totally-singular":
            V = np.stack([W[0] for W in spaces])
            if form.is_quadratic:
                keep = [i for i in range(len(V)) if form.Q(V[i]) == 0]
            else:
                keep = list(range(len(V)))
            spaces = [spaces[i] for i in keep]
        else:
            spaces = [W for W in spaces if _subspace_kind_ok(form, W, kind)]
    texts = [_subspace_text(F, W) for W in spaces]
    order = sorted(range(len(spaces)), key=lambda i: texts[i])
    spaces = [spaces[i] for i in order]
    index = {W.tobytes(): i for i, W in enumerate(spaces)}
    am = ActionMap(F, n, k, kind, spaces, index)
    perms = [am.apply(A) for A in gens]
    for a, A in zip(perms[:4], gens[:4]):
        for b, B in zip(perms[:4], gens[:4]):
            if not np.array_equal(am.apply(A * B), b[a]):
                raise RuntimeError("action is not a homomorphism")
    return am, PermGroup(perms, am.degree)


def matrix_from_point_perm(am: ActionMap, perm: np.ndarray, accept=None):
    """Recover a matrix inducing ``perm`` on the 1-spaces of ``am``.

    The images of <e_i> and <e_1 + ... + e_n> fix the matrix up to a scalar;
    ``accept`` (a predicate) picks the scalar multiple, default the first.
    """
    F = am.ctx
    n = am.n
    if am.k != 1:
        raise ValueError("needs an action on 1-spaces")
    rows = []
    for i in range(n):
        e = np.zeros((1, n), dtype=np.int64)
        e[0, i] = 1
        rows.append(am.points[int(perm[am.point_index(e)])][0])
    Rm = np.stack(rows)
    w = am.points[int(perm[am.point_index(np.ones((1, n), dtype=np.int64))])][0]
    c = solve_left(F, Rm, w[None, :])
    if c is None:
        raise ValueError("permutation is not induced by a matrix")
    c = c[0]
    A = F.vmul(Rm, c[:, None])
    cands = [MatrixGF(F, F.vmul(A, t)) for t in range(1, F.q)] if accept is not None else [MatrixGF(F, A)]
    for M in cands:
        if accept is None or accept(M):
            if not np.array_equal(am.apply(M), perm):
                raise ValueError("permutation is not induced by a matrix")
            return M
    raise ValueError("no scalar multiple is accepted")
