"""Permutation groups backed by a deterministic stabilizer chain.

The chain certificate gives exact order and membership queries; on top of
it sit orbit/stabilizer searches for centralizers, normalizers, subgroup
conjugacy, Sylow subgroups, p-cores, centers and intersections.  All
searches expand points and generators in sorted order, so every result is
deterministic.  Values are immutable after construction and every
operation is a pure function.
"""

from __future__ import annotations

import hashlib
from typing import Iterable, Optional

from .perms import Perm


class DomainError(ValueError):
    """An argument subgroup does not live where the operation needs it."""


class ResourceCapError(RuntimeError):
    """A computation would exceed its configured size cap."""


class _ChainLevel:
    __slots__ = ("base", "gens", "transversal")

    def __init__(self, base: int):
        self.base = base
        # strong generators whose first unfixed base point is this one
        self.gens: list[Perm] = []
        # transversal[x] = u with base^u = x
        self.transversal: dict[int, Perm] = {}


class StabChain:
    """Deterministic Schreier-Sims stabilizer chain.

    Level i holds the strong generators that fix the first i base points
    and move base i; the generating set of the i-th stabilizer subgroup
    is the union of the generators at levels >= i.
    """

    def __init__(self, generators: Iterable[Perm], degree: int):
        self.degree = degree
        self.levels: list[_ChainLevel] = []
        for g in generators:
            if g.degree != degree:
                raise DomainError("generator degree mismatch")
            self._insert(g, 0)

    def _level_gens(self, level: int) -> list[Perm]:
        return [g for lvl in self.levels[level:] for g in lvl.gens]

    def _recompute_orbit(self, level: int) -> None:
        lvl = self.levels[level]
        gens = self._level_gens(level)
        lvl.transversal = {lvl.base: Perm.identity(self.degree)}
        frontier = [lvl.base]
        while frontier:
            new = []
            for x in sorted(frontier):
                ux = lvl.transversal[x]
                for g in gens:
                    y = g(x)
                    if y not in lvl.transversal:
                        lvl.transversal[y] = ux * g
                        new.append(y)
            frontier = new

    def _insert(self, g: Perm, level: int) -> None:
        """Add g (which fixes all bases before ``level``) as a strong
        generator, then restore the Schreier condition at the levels it
        touches."""
        g = self._sift_from(g, level)
        if g.is_identity():
            return
        j = level
        while j < len(self.levels) and g(self.levels[j].base) == self.levels[j].base:
            j += 1
        if j == len(self.levels):
            base = next(i + 1 for i, im in enumerate(g.img) if im != i + 1)
            self.levels.append(_ChainLevel(base))
        self.levels[j].gens.append(g)
        for i in range(j, level - 1, -1):
            self._close(i)

    def _close(self, level: int) -> None:
        """Schreier condition at one level: every Schreier generator must
        sift to the identity through the deeper chain."""
        while True:
            self._recompute_orbit(level)
            lvl = self.levels[level]
            gens = self._level_gens(level)
            dirty = False
            for x in sorted(lvl.transversal):
                ux = lvl.transversal[x]
                for g in gens:
                    schreier = ux * g * lvl.transversal[g(x)].inv()
                    residue = self._sift_from(schreier, level + 1)
                    if not residue.is_identity():
                        self._insert(residue, level + 1)
                        dirty = True
                        break
                if dirty:
                    break
            if not dirty:
                return

    def _sift_from(self, g: Perm, level: int) -> Perm:
        for lvl in self.levels[level:]:
            x = g(lvl.base)
            u = lvl.transversal.get(x)
            if u is None:
                return g
            g = g * u.inv()
        return g

    def sift(self, g: Perm) -> Perm:
        return self._sift_from(g, 0)

    def contains(self, g: Perm) -> bool:
        return g.degree == self.degree and self.sift(g).is_identity()

    def order(self) -> int:
        n = 1
        for lvl in self.levels:
            n *= len(lvl.transversal)
        return n

    def base(self) -> tuple[int, ...]:
        return tuple(lvl.base for lvl in self.levels)

    def strong_generators(self) -> list[Perm]:
        out = []
        for lvl in self.levels:
            out.extend(lvl.gens)
        return out

    def elements(self):
        """Iterate all group elements (deterministic transversal order).

        Every element factors uniquely as r * u with u in the level-0
        transversal and r in the first stabilizer, so the products are
        built deepest level first.
        """
        out = [Perm.identity(self.degree)]
        for lvl in reversed(self.levels):
            out = [r * lvl.transversal[x]
                   for x in sorted(lvl.transversal) for r in out]
        return iter(out)


class PermGroup:
    """A finite permutation group on {1..degree}.

    ``parent`` is set for subgroups produced by the operations below; it
    is advisory (used for domain checks) and does not affect the value.
    """

    def __init__(self, degree: int, generators: Iterable[Perm],
                 parent: Optional["PermGroup"] = None, name: str = ""):
        self.degree = degree
        gens = []
        seen = set()
        for g in generators:
            if g.degree != degree:
                raise DomainError("generator degree mismatch")
            if not g.is_identity() and g.img not in seen:
                seen.add(g.img)
                gens.append(g)
        self.generators = tuple(gens)
        self.parent = parent
        self.name = name
        self._chain: Optional[StabChain] = None
        self._elements: Optional[tuple[Perm, ...]] = None
        self._digest: Optional[bytes] = None

    @property
    def chain(self) -> StabChain:
        if self._chain is None:
            self._chain = StabChain(self.generators, self.degree)
        return self._chain

    def order(self) -> int:
        return self.chain.order()

    def __len__(self) -> int:
        return self.order()

    def __contains__(self, g: Perm) -> bool:
        return self.chain.contains(g)

    def __le__(self, other: "PermGroup") -> bool:
        return self.degree == other.degree and all(
            g in other for g in self.generators)

    def identity(self) -> Perm:
        return Perm.identity(self.degree)

    def elements(self) -> tuple[Perm, ...]:
        """All elements, sorted by image tuple.  Cached."""
        if self._elements is None:
            self._elements = tuple(sorted(self.chain.elements()))
        return self._elements

    def element_set(self) -> frozenset:
        return frozenset(self.elements())

    def digest(self) -> bytes:
        """Canonical identity of the subgroup: sha1 over sorted elements."""
        if self._digest is None:
            h = hashlib.sha1()
            n = self.degree
            for p in self.elements():
                if n <= 255:
                    h.update(bytes(p.img))
                else:
                    h.update(repr(p.img).encode())
            self._digest = h.digest()
        return self._digest

    def subgroup(self, generators: Iterable[Perm], name: str = "") -> "PermGroup":
        return PermGroup(self.degree, generators, parent=self, name=name)

    def trivial_subgroup(self) -> "PermGroup":
        return self.subgroup([])

    def orbit(self, point: int) -> tuple[int, ...]:
        seen = {point}
        frontier = [point]
        while frontier:
            x = frontier.pop()
            for g in self.generators:
                y = g(x)
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return tuple(sorted(seen))

    def orbits(self) -> list[tuple[int, ...]]:
        left = set(range(1, self.degree + 1))
        out = []
        while left:
            o = self.orbit(min(left))
            out.append(o)
            left -= set(o)
        return out

    def conjugate_subgroup(self, H: "PermGroup", g: Perm) -> "PermGroup":
        """H^g = g^-1 H g as a subgroup of self."""
        return self.subgroup([h ** g for h in H.generators])

    def is_abelian(self) -> bool:
        return all(a * b == b * a for a in self.generators
                   for b in self.generators)

    def __repr__(self):
        label = self.name or f"degree {self.degree}, {len(self.generators)} gens"
        return f"<PermGroup {label}>"


def _pow_int(p: Perm, n: int) -> Perm:
    out = Perm.identity(p.degree)
    base = p
    while n:
        if n & 1:
            out = out * base
        base = base * base
        n >>= 1
    return out


def perm_power(p: Perm, n: int) -> Perm:
    return _pow_int(p, n)


def _require_subgroup(G: PermGroup, H: PermGroup) -> None:
    if H.degree != G.degree:
        raise DomainError("degree mismatch")
    if not all(h in G for h in H.generators):
        raise DomainError("H is not contained in G")


# ---------------------------------------------------------------------------
# orbit-stabilizer searches
#
# Both the centralizer and the normalizer are stabilizers of a conjugation
# action: on the tuple of generators for the centralizer, on the canonical
# element set for the normalizer.  The orbit is enumerated breadth-first in
# sorted order; Schreier generators are sifted into the growing stabilizer
# until its order reaches |G| / |orbit|.
# ---------------------------------------------------------------------------

def _orbit_stabilizer(G: PermGroup, seed, act, key):
    """Generic orbit-stabilizer; returns (orbit_size, stabilizer, reps).

    ``act(value, g) -> value`` is a right action of G, ``key(value)`` a
    hashable canonical form.  ``reps`` maps key -> transversal element.
    """
    k0 = key(seed)
    reps = {k0: G.identity()}
    values = {k0: seed}
    queue = [k0]
    gens = sorted(G.generators)
    while queue:
        k = queue.pop(0)
        v, u = values[k], reps[k]
        for g in gens:
            w = act(v, g)
            kw = key(w)
            if kw not in reps:
                reps[kw] = u * g
                values[kw] = w
                queue.append(kw)
    orbit_size = len(reps)
    target, whole = divmod(G.order(), orbit_size)
    assert whole == 0
    stab_gens: list[Perm] = []
    stab: Optional[StabChain] = None
    if target > 1:
        done = False
        for k in sorted(reps):
            if done:
                break
            u = reps[k]
            v = values[k]
            for g in gens:
                s = u * g * reps[key(act(v, g))].inv()
                if s.is_identity():
                    continue
                if stab is not None and stab.contains(s):
                    continue
                stab_gens.append(s)
                stab = StabChain(stab_gens, G.degree)
                if stab.order() == target:
                    done = True
                    break
    sub = G.subgroup(stab_gens)
    sub._chain = stab if stab is not None else StabChain([], G.degree)
    assert sub.order() == target
    return orbit_size, sub, reps, values


def centralizer(G: PermGroup, H: PermGroup) -> PermGroup:
    """C_G(H) = {g in G : gh = hg for all h in H}."""
    _require_subgroup(G, H)
    gens = tuple(sorted(H.generators))
    if not gens:
        return G.subgroup(G.generators)

    def act(tup, g):
        return tuple(h ** g for h in tup)

    def key(tup):
        return tuple(h.img for h in tup)

    _, C, _, _ = _orbit_stabilizer(G, gens, act, key)
    return C


def _subgroup_key(H: PermGroup):
    return frozenset(p.img for p in H.elements())


def normalizer(G: PermGroup, H: PermGroup) -> PermGroup:
    """N_G(H) = {g in G : H^g = H}."""
    _require_subgroup(G, H)
    if not H.generators:
        return G.subgroup(G.generators)

    def act(K, g):
        return G.conjugate_subgroup(K, g)

    _, N, _, _ = _orbit_stabilizer(G, H, act, _subgroup_key)
    return N


def subgroup_class_orbit(G: PermGroup, H: PermGroup):
    """Conjugates of H in G: (size, normalizer, iterator of conjugates).

    The iterator yields the conjugate subgroups in deterministic BFS
    order, H itself first.
    """
    _require_subgroup(G, H)

    def act(K, g):
        return G.conjugate_subgroup(K, g)

    size, N, reps, values = _orbit_stabilizer(G, H, act, _subgroup_key)

    def conjugates():
        for k in sorted(reps, key=lambda fs: tuple(sorted(fs))):
            yield values[k]

    return size, N, conjugates


def center(H: PermGroup) -> PermGroup:
    """Z(H) = C_H(H)."""
    return centralizer(H, H)


def is_conjugate(G: PermGroup, H: PermGroup, K: PermGroup,
                 minimize: bool = True) -> Optional[Perm]:
    """Some g with H^g = K, or None.

    With ``minimize`` the returned conjugator is the minimum of its coset
    N_G(H)g in image-tuple order whenever N_G(H) is small enough to scan;
    otherwise it is the deterministic BFS witness.
    """
    _require_subgroup(G, H)
    _require_subgroup(G, K)
    if H.order() != K.order():
        return None
    target = _subgroup_key(K)
    if _subgroup_key(H) == target:
        g0 = G.identity()
    else:
        hinv = _invariant_profile(H)
        if hinv != _invariant_profile(K):
            return None
        g0 = None
        reps = {_subgroup_key(H): G.identity()}
        queue = [H]
        keys = [_subgroup_key(H)]
        gens = sorted(G.generators)
        while queue and g0 is None:
            cur = queue.pop(0)
            ku = keys.pop(0)
            u = reps[ku]
            for g in gens:
                w = G.conjugate_subgroup(cur, g)
                kw = _subgroup_key(w)
                if kw in reps:
                    continue
                reps[kw] = u * g
                if kw == target:
                    g0 = reps[kw]
                    break
                queue.append(w)
                keys.append(kw)
        if g0 is None:
            return None
    if minimize:
        N = normalizer(G, H)
        if N.order() <= 20000:
            g0 = min(n * g0 for n in N.elements())
    return g0


def _invariant_profile(H: PermGroup):
    if H.order() <= 5000:
        from collections import Counter
        return (H.order(), tuple(sorted(Counter(
            p.cycle_type() for p in H.elements()).items())))
    return (H.order(),)


def intersection(H: PermGroup, K: PermGroup,
                 cap: int = 200_000) -> PermGroup:
    """H ∩ K by element-set intersection of the smaller side."""
    if H.degree != K.degree:
        raise DomainError("degree mismatch")
    if H.order() > K.order():
        H, K = K, H
    if H.order() > cap:
        raise ResourceCapError(
            f"intersection of groups of order {H.order()} exceeds cap {cap}")
    common = [p for p in H.elements() if p in K]
    parent = H.parent if H.parent is K.parent else None
    sub = PermGroup(H.degree, _reduce_generators(common, H.degree),
                    parent=parent)
    return sub


def _reduce_generators(elements, degree: int) -> list[Perm]:
    """Greedy small generating set for the group the elements form."""
    gens: list[Perm] = []
    chain = StabChain([], degree)
    for p in sorted(elements):
        if not chain.contains(p):
            gens.append(p)
            chain = StabChain(gens, degree)
    return gens


def p_part(n: int, p: int) -> int:
    out = 1
    while n % p == 0:
        n //= p
        out *= p
    return out


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def sylow(G: PermGroup, p: int) -> PermGroup:
    """A Sylow p-subgroup, grown up the normalizer ladder."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    pk = p_part(G.order(), p)
    P = G.trivial_subgroup()
    if pk == 1:
        return P
    while P.order() < pk:
        N = normalizer(G, P) if P.generators else G
        y = _find_p_element_outside(N, P, p)
        P = G.subgroup(list(P.generators) + [y])
    return P


def _find_p_element_outside(N: PermGroup, P: PermGroup, p: int) -> Perm:
    """First p-element of N outside P, scanning generators then elements."""
    def p_piece(x: Perm) -> Optional[Perm]:
        n = x.order()
        q = p_part(n, p)
        if q == 1:
            return None
        y = _pow_int(x, n // q)
        return None if y in P else y

    for g in sorted(N.generators):
        y = p_piece(g)
        if y is not None:
            return y
    for x in N.chain.elements():
        y = p_piece(x)
        if y is not None:
            return y
    raise AssertionError("no p-element found; P was already Sylow")


def p_core(G: PermGroup, p: int) -> PermGroup:
    """O_p(G): intersection of all Sylow p-subgroups."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    S = sylow(G, p)
    if S.order() == 1:
        return S
    _, _, conjugates = subgroup_class_orbit(G, S)
    core = None
    for T in conjugates():
        core = T if core is None else intersection(core, T)
        if core.order() == 1:
            break
    return G.subgroup(core.generators)


def omega1_p(H: PermGroup, p: int) -> PermGroup:
    """Subgroup generated by the central elements of order dividing p.

    For abelian H this is the full Omega_1; in general the scan is
    restricted to Z(H).
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    Z = H if H.is_abelian() else center(H)
    gens = [x for x in Z.elements()
            if not x.is_identity() and _pow_int(x, p).is_identity()]
    return PermGroup(H.degree, _reduce_generators(gens, H.degree),
                     parent=H.parent)


def is_p_group(H: PermGroup, p: int) -> bool:
    n = H.order()
    return p_part(n, p) == n


def is_elementary_abelian(H: PermGroup, p: int) -> bool:
    return (H.order() > 1 and is_p_group(H, p) and H.is_abelian()
            and all(_pow_int(g, p).is_identity() for g in H.generators))
