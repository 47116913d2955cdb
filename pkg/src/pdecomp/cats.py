"""The three finite indexing categories built from a collection.

* orbit category: objects are the classes, Hom(G/H, G/K) is the set of
  right cosets gK with H^g <= K, composed by coset multiplication;
* fusion category: objects are the classes, Hom(H, K) is the set of
  homomorphisms H -> K induced by conjugation, i.e. cosets C_G(H)g;
* orbit simplex category: the poset of conjugacy classes of strict chains
  of members, ordered by refinement, each carrying N_G(sigma).

Morphisms are stored by minimal coset representatives, so composition is
representative multiplication followed by recanonicalization.  Category
laws are checked exhaustively on every built instance.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass
from typing import Optional

from .groups import PermGroup, centralizer, intersection, normalizer
from .perms import Perm
from .pclasses import Collection, _set_key, set_digest


class CategoryLawError(AssertionError):
    """Identity or associativity failed on a built composition table."""


@dataclass(frozen=True)
class Morphism:
    idx: int
    src: int
    dst: int
    rep: Perm


class FinCategory:
    """A finite category with explicit hom-sets and composition table."""

    def __init__(self, objects, morphisms, compose, identities, labels=None):
        self.objects = tuple(objects)          # printable object labels
        self.morphisms = tuple(morphisms)      # Morphism, idx = position
        self.compose_table = dict(compose)     # (f.idx, g.idx) -> h.idx
        self.identities = tuple(identities)    # object -> morphism idx
        self.labels = labels or {}
        self._homs: dict[tuple[int, int], tuple[int, ...]] = {}
        for m in self.morphisms:
            self._homs.setdefault((m.src, m.dst), ())
        for m in self.morphisms:
            self._homs[(m.src, m.dst)] += (m.idx,)
        self.check_laws()

    def hom(self, i: int, j: int) -> tuple[int, ...]:
        return self._homs.get((i, j), ())

    def compose(self, f: int, g: int) -> int:
        """Composite 'f then g' (diagrammatic order)."""
        return self.compose_table[(f, g)]

    def is_identity_mor(self, f: int) -> bool:
        return self.identities[self.morphisms[f].src] == f

    def check_laws(self) -> None:
        for m in self.morphisms:
            e_src = self.identities[m.src]
            e_dst = self.identities[m.dst]
            if self.compose(e_src, m.idx) != m.idx or \
               self.compose(m.idx, e_dst) != m.idx:
                raise CategoryLawError(f"identity law fails at {m}")
        for f in self.morphisms:
            for g in self.morphisms:
                if f.dst != g.src:
                    continue
                fg = self.compose(f.idx, g.idx)
                if self.morphisms[fg].src != f.src or \
                   self.morphisms[fg].dst != g.dst:
                    raise CategoryLawError("composition leaves its hom-set")
                for h in self.morphisms:
                    if g.dst != h.src:
                        continue
                    if self.compose(fg, h.idx) != \
                       self.compose(f.idx, self.compose(g.idx, h.idx)):
                        raise CategoryLawError(
                            f"associativity fails at {f}, {g}, {h}")

    def op(self) -> "FinCategory":
        mors = [Morphism(m.idx, m.dst, m.src, m.rep) for m in self.morphisms]
        comp = {(g, f): h for (f, g), h in self.compose_table.items()}
        return FinCategory(self.objects, mors, comp, self.identities,
                          dict(self.labels))

    def full_subcategory(self, keep_objects) -> tuple["FinCategory", dict, dict]:
        """Full subcategory on the given object indices.

        Returns (category, object index map, morphism index map) into self.
        """
        keep = list(keep_objects)
        obj_map = {new: old for new, old in enumerate(keep)}
        rev = {old: new for new, old in obj_map.items()}
        mors = []
        mor_map = {}
        for m in self.morphisms:
            if m.src in rev and m.dst in rev:
                new_idx = len(mors)
                mor_map[new_idx] = m.idx
                mors.append(Morphism(new_idx, rev[m.src], rev[m.dst], m.rep))
        back = {old: new for new, old in mor_map.items()}
        comp = {}
        for f in mors:
            for g in mors:
                if f.dst == g.src:
                    comp[(f.idx, g.idx)] = back[
                        self.compose_table[(mor_map[f.idx], mor_map[g.idx])]]
        idents = tuple(back[self.identities[obj_map[i]]]
                       for i in range(len(keep)))
        sub = FinCategory([self.objects[o] for o in keep], mors, comp, idents)
        return sub, obj_map, mor_map

    def digest(self) -> str:
        h = hashlib.sha1()
        h.update(repr(self.objects).encode())
        for m in self.morphisms:
            h.update(f"{m.idx}:{m.src}->{m.dst}".encode())
        for k in sorted(self.compose_table):
            h.update(f"{k}:{self.compose_table[k]}".encode())
        return h.hexdigest()

    def to_json(self) -> dict:
        return {
            "objects": list(self.objects),
            "hom_counts": {f"{i}->{j}": len(self.hom(i, j))
                           for i in range(len(self.objects))
                           for j in range(len(self.objects))
                           if self.hom(i, j)},
            "morphisms": len(self.morphisms),
            "composition_digest": self.digest(),
        }


def _min_coset_rep(g: Perm, coset_elements) -> Perm:
    return min(g * c for c in coset_elements) if coset_elements else g


def orbit_category(G: PermGroup, coll: Collection) -> FinCategory:
    """Objects G/H for the classes of the collection (the trivial orbit
    G/1 appended when the collection includes it); Hom(G/H, G/K) is
    {g : H^g <= K}/K by minimal coset representatives."""
    reps = [c.rep for c in coll.classes]
    if coll.include_trivial:
        reps = [G.trivial_subgroup()] + reps
    labels = [f"G/{_subgroup_label(H, i)}" for i, H in enumerate(reps)]
    els = sorted(G.elements())
    rep_sets = [H.element_set() for H in reps]

    morphisms: list[Morphism] = []
    mor_index: dict[tuple[int, int, tuple], int] = {}
    for i, H in enumerate(reps):
        hgens = H.generators
        for j, K in enumerate(reps):
            if H.order() > K.order():
                continue
            kset = rep_sets[j]
            seen = set()
            for g in els:
                if g.img in seen:
                    continue
                if all((h ** g) in kset for h in hgens):
                    rep = _min_coset_rep(g, kset)
                    seen.update((rep * k).img for k in kset)
                    idx = len(morphisms)
                    morphisms.append(Morphism(idx, i, j, rep))
                    mor_index[(i, j, rep.img)] = idx

    compose = {}
    for f in morphisms:
        for g in morphisms:
            if f.dst != g.src:
                continue
            prod = _min_coset_rep(f.rep * g.rep, rep_sets[g.dst])
            compose[(f.idx, g.idx)] = mor_index[(f.src, g.dst, prod.img)]
    identities = []
    for i in range(len(reps)):
        e = _min_coset_rep(G.identity(), rep_sets[i])
        identities.append(mor_index[(i, i, e.img)])
    return FinCategory(labels, morphisms, compose, identities,
                      {"kind": "orbit", "reps": reps})


def fusion_category(G: PermGroup, coll: Collection) -> FinCategory:
    """Objects the classes; Hom(H, K) = {g : H^g <= K} up to g ~ cg for
    c in C_G(H): the conjugation-induced homomorphisms H -> K."""
    reps = [c.rep for c in coll.classes]
    labels = [_subgroup_label(H, i) for i, H in enumerate(reps)]
    els = sorted(G.elements())
    rep_sets = [H.element_set() for H in reps]
    cents = [centralizer(G, H).element_set() for H in reps]

    morphisms: list[Morphism] = []
    mor_index: dict[tuple[int, int, tuple], int] = {}
    for i, H in enumerate(reps):
        hgens = H.generators
        for j, K in enumerate(reps):
            if H.order() > K.order():
                continue
            kset = rep_sets[j]
            seen = set()
            for g in els:
                if g.img in seen:
                    continue
                if all((h ** g) in kset for h in hgens):
                    rep = min(c * g for c in cents[i])
                    seen.update((c * rep).img for c in cents[i])
                    idx = len(morphisms)
                    morphisms.append(Morphism(idx, i, j, rep))
                    mor_index[(i, j, rep.img)] = idx

    compose = {}
    for f in morphisms:
        for g in morphisms:
            if f.dst != g.src:
                continue
            prod = min(c * (f.rep * g.rep) for c in cents[f.src])
            compose[(f.idx, g.idx)] = mor_index[(f.src, g.dst, prod.img)]
    identities = []
    for i in range(len(reps)):
        e = min(cents[i])
        identities.append(mor_index[(i, i, e.img)])
    return FinCategory(labels, morphisms, compose, identities,
                      {"kind": "fusion", "reps": reps})


@dataclass(frozen=True)
class ChainClass:
    """A conjugacy class of strict chains H_0 < ... < H_n of members."""
    rep: tuple            # tuple of element-image-set keys, increasing
    normalizer_order: int
    length: int           # number of links


def _subgroup_label(H: PermGroup, i: int) -> str:
    return f"[{i}]|{H.order()}|"


def orbit_simplex_category(G: PermGroup, coll: Collection):
    """The poset of G-classes of strict nonempty chains in the collection,
    ordered by refinement ([sigma] <= [tau] iff a conjugate of sigma is a
    subchain of tau), as a FinCategory together with chain data.

    Each object carries N_G(sigma), the intersection of the links'
    normalizers.
    """
    members = sorted({s for s in coll.member_sets() if len(s) > 1},
                     key=_set_key)
    member_idx = {s: i for i, s in enumerate(members)}
    contains = [[i != j and s < t for j, t in enumerate(members)]
                for i, s in enumerate(members)]

    chains: list[tuple[int, ...]] = [(i,) for i in range(len(members))]
    frontier = list(chains)
    while frontier:
        new = []
        for ch in frontier:
            top = ch[-1]
            for j in range(len(members)):
                if contains[top][j]:
                    new.append(ch + (j,))
        chains.extend(new)
        frontier = new

    els = sorted(G.elements())

    def conj_chain(ch, g):
        return tuple(member_idx[frozenset(p ** g for p in members[i])]
                     for i in ch)

    # fuse chains into classes by minimal conjugate
    canon: dict[tuple, tuple] = {}
    for ch in chains:
        if ch in canon:
            continue
        orbit = {ch}
        frontier = [ch]
        while frontier:
            cur = frontier.pop()
            for g in sorted(G.generators):
                nxt = conj_chain(cur, g)
                if nxt not in orbit:
                    orbit.add(nxt)
                    frontier.append(nxt)
        rep = min(orbit)
        for o in orbit:
            canon[o] = rep
    class_reps = sorted(set(canon.values()),
                        key=lambda ch: (len(ch), ch))

    # refinement order: [s] <= [t] iff some conjugate of s is a subchain of t
    def subchains(ch):
        out = set()
        for r in range(1, len(ch) + 1):
            out.update(itertools.combinations(ch, r))
        return out

    leq = {}
    sub_classes = {t: {canon[s] for s in subchains(t)} for t in class_reps}
    for s in class_reps:
        for t in class_reps:
            leq[(s, t)] = s in sub_classes[t]

    # poset sanity: antisymmetry
    for s in class_reps:
        for t in class_reps:
            if s != t and leq[(s, t)] and leq[(t, s)]:
                raise CategoryLawError("refinement order is not a poset")

    normalizers = {}
    for ch in class_reps:
        N: Optional[PermGroup] = None
        for i in ch:
            Ni = normalizer(G, G.subgroup(
                _reduce_gens_cached(members[i], G)))
            N = Ni if N is None else intersection(N, Ni)
        normalizers[ch] = N

    labels = [f"chain{list(len(members[i]) for i in ch)!r}"
              for ch in class_reps]
    obj_of = {ch: i for i, ch in enumerate(class_reps)}
    morphisms = []
    compose = {}
    ident = [None] * len(class_reps)
    for s in class_reps:
        for t in class_reps:
            if leq[(s, t)]:
                idx = len(morphisms)
                morphisms.append(Morphism(idx, obj_of[s], obj_of[t],
                                          G.identity()))
                if s == t:
                    ident[obj_of[s]] = idx
    mor_at = {(m.src, m.dst): m.idx for m in morphisms}
    for f in morphisms:
        for g in morphisms:
            if f.dst == g.src:
                compose[(f.idx, g.idx)] = mor_at[(f.src, g.dst)]
    cat = FinCategory(labels, morphisms, compose, tuple(ident),
                      {"kind": "orbit-simplex"})
    chain_data = [ChainClass(tuple(_set_key(members[i]) for i in ch),
                             normalizers[ch].order(), len(ch))
                  for ch in class_reps]
    return cat, chain_data


def _reduce_gens_cached(els, G):
    from .groups import _reduce_generators
    return _reduce_generators(els, G.degree)


def equivariant_map_count(G: PermGroup, H: PermGroup, K: PermGroup) -> int:
    """Brute-force count of G-maps G/H -> G/K: try every coset of K as the
    image of eH and keep the well-defined ones."""
    els = sorted(G.elements())
    kset = K.element_set()
    cosets = []
    seen = set()
    for x in els:
        if x.img in seen:
            continue
        coset = frozenset(x * k for k in kset)
        seen.update(p.img for p in coset)
        cosets.append(coset)
    count = 0
    hset = H.element_set()
    for c0 in cosets:
        x0 = min(c0)
        # f(gH) = g x0 K is well defined iff H x0 K = x0 K
        if all(h * x0 in c0 for h in hset):
            count += 1
    return count
