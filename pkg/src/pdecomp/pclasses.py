"""Conjugacy classes of p-subgroups and the five named collections.

A collection is a conjugation-closed set of subgroups, realized here as a
set of conjugacy classes.  Each class stores a canonical representative,
its normalizer, and the sha1 digests of every conjugate, so membership of
an arbitrary subgroup is a digest lookup and closure checking ranges over
one representative against whole classes.

Labels: S (all nontrivial p-subgroups), A (nontrivial elementary
abelians), B (p-radical: P = O_p(N_G(P))), I (nontrivial intersections of
sets of Sylow p-subgroups), Z (elementary abelian V with
V = Omega_1 O_p Z(C_G(V))).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional

from .groups import (
    PermGroup, StabChain, _reduce_generators, centralizer, center,
    is_elementary_abelian, is_prime, normalizer, omega1_p, p_core, perm_power,
    sylow,
)
from .perms import Perm

ElementSet = frozenset


def set_digest(els, degree: int) -> bytes:
    h = hashlib.sha1()
    for img in sorted(p.img for p in els):
        if degree <= 255:
            h.update(bytes(img))
        else:
            h.update(repr(img).encode())
    return h.digest()


def _conjugate_set(els: ElementSet, g: Perm) -> ElementSet:
    ginv = g.inv()
    return frozenset(ginv * p * g for p in els)


def _set_key(els) -> tuple:
    return tuple(sorted(p.img for p in els))


class SubgroupClass:
    """One G-conjugacy class of subgroups.

    ``rep`` is the conjugate whose sorted element list is lexicographically
    least, so reports are reproducible no matter how the class was found.
    The normalizer comes from the Schreier generators of the conjugation
    orbit that fuses the class.
    """

    def __init__(self, group: PermGroup, seed: PermGroup):
        from .groups import _orbit_stabilizer
        self.group = group
        degree = group.degree
        seed_set = seed.element_set()

        def act(s, g):
            return _conjugate_set(s, g)

        def key(s):
            return set_digest(s, degree)

        size, N_seed, reps, values = _orbit_stabilizer(
            group, seed_set, act, key)
        self.size = size
        self.digests = frozenset(reps)
        min_d = min(values, key=lambda d: _set_key(values[d]))
        min_set = values[min_d]
        self.rep = group.subgroup(_reduce_generators(min_set, degree))
        self.rep._elements = tuple(sorted(min_set))
        self.order = len(min_set)
        g = reps[min_d]  # seed^g = rep
        self.normalizer = group.subgroup([n ** g for n in N_seed.generators])
        assert self.size * self.normalizer.order() == group.order()
        self.class_id = -1  # assigned by the enumeration

    def key(self) -> tuple:
        return (self.order, _set_key(self.rep.element_set()))

    def contains_set(self, els, degree: int) -> bool:
        return set_digest(els, degree) in self.digests

    def conjugates(self) -> Iterator[ElementSet]:
        """Regenerate every conjugate's element set, rep first."""
        gens = sorted(self.group.generators)
        start = self.rep.element_set()
        seen = {set_digest(start, self.group.degree)}
        frontier = [start]
        yield start
        while frontier:
            new = []
            for cur in frontier:
                for g in gens:
                    nxt = _conjugate_set(cur, g)
                    d = set_digest(nxt, self.group.degree)
                    if d not in seen:
                        seen.add(d)
                        new.append(nxt)
                        yield nxt
            frontier = new

    def __repr__(self):
        return (f"<SubgroupClass id={self.class_id} order={self.order} "
                f"size={self.size}>")


def subgroups_of_p_group(S: PermGroup, p: int) -> list[ElementSet]:
    """All nontrivial subgroups of the p-group S by recursive extension:
    a group of order p^(k+1) is generated by a maximal subgroup and any
    element outside it."""
    els = sorted(S.elements())
    ident = S.identity()
    level: dict[ElementSet, None] = {}
    for x in els:
        if x.order() == p:
            cyc = frozenset(perm_power(x, k) for k in range(p))
            level[cyc] = None
    found = dict(level)
    while level:
        nxt: dict[ElementSet, None] = {}
        for sub in level:
            norm = [g for g in els
                    if frozenset(h ** g for h in sub) == sub]
            covered = set(sub)
            for g in norm:
                if g in covered:
                    continue
                covered.update(x * g for x in sub)
                ext = _closure(sub | {g})
                if len(ext) == len(sub) * p and ext not in found:
                    found[ext] = None
                    nxt[ext] = None
        level = nxt
    return sorted(found, key=_set_key)


def _closure(els) -> ElementSet:
    out = set(els)
    frontier = list(els)
    gens = list(els)
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = x * g
            if y not in out:
                out.add(y)
                frontier.append(y)
    return frozenset(out)


def enumerate_p_classes(G: PermGroup, p: int) -> list[SubgroupClass]:
    """One class per G-conjugacy class of nontrivial p-subgroups, found by
    enumerating the subgroups of one Sylow p-subgroup and fusing."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    S = sylow(G, p)
    if S.order() == 1:
        return []
    classes: list[SubgroupClass] = []
    seen: set[bytes] = set()
    for sub in subgroups_of_p_group(S, p):
        d = set_digest(sub, G.degree)
        if d in seen:
            continue
        cls = SubgroupClass(G, G.subgroup(_reduce_generators(sub, G.degree)))
        classes.append(cls)
        seen |= cls.digests
    classes.sort(key=lambda c: c.key())
    for i, c in enumerate(classes):
        c.class_id = i
    return classes


# -- predicates -------------------------------------------------------------

def radical_certificate(G: PermGroup, H: PermGroup, p: int,
                        N: Optional[PermGroup] = None) -> dict:
    if N is None:
        N = normalizer(G, H)
    O = p_core(N, p)
    return {
        "normalizer_order": N.order(),
        "p_core_of_normalizer_order": O.order(),
        "member": O.element_set() == H.element_set(),
    }


def z_certificate(G: PermGroup, H: PermGroup, p: int) -> dict:
    cert: dict = {"elementary_abelian": is_elementary_abelian(H, p)}
    if not cert["elementary_abelian"]:
        cert["member"] = False
        return cert
    C = centralizer(G, H)
    Zc = center(C)
    W = omega1_p(Zc, p)
    cert.update({
        "centralizer_order": C.order(),
        "center_of_centralizer_order": Zc.order(),
        "omega1_of_p_part_order": W.order(),
        "member": W.element_set() == H.element_set(),
    })
    return cert


def sylow_intersection_closure(G: PermGroup, p: int) -> dict[bytes, int]:
    """Digests of every subgroup obtainable as an intersection of a set of
    Sylow p-subgroups (the trivial one included), mapped to its order.

    Iterated pairwise intersections reach the same closure because
    intersecting one more Sylow is a pairwise step from a previous stage;
    results are deduplicated by digest at every stage.
    """
    S = sylow(G, p)
    degree = G.degree
    sylows = list(SubgroupClass(G, S).conjugates())
    closure: dict[bytes, ElementSet] = {}
    for T in sylows:
        closure[set_digest(T, degree)] = T
    frontier = list(closure.values())
    while frontier:
        new = []
        for A in frontier:
            for B in sylows:
                C = A & B
                d = set_digest(C, degree)
                if d not in closure:
                    closure[d] = C
                    new.append(C)
        frontier = new
    return {d: len(s) for d, s in closure.items()}


LABELS = ("S", "A", "B", "I", "Z")


@dataclass
class Collection:
    group: PermGroup
    prime: int
    label: str
    classes: tuple[SubgroupClass, ...]
    include_trivial: bool = False
    warnings: tuple[str, ...] = ()
    _sylow_closure: Optional[dict[bytes, int]] = field(
        default=None, repr=False)

    def member_sets(self) -> Iterator[ElementSet]:
        """Every member subgroup's element set (plus the trivial one when
        included), class by class."""
        if self.include_trivial:
            yield frozenset([self.group.identity()])
        for cls in self.classes:
            yield from cls.conjugates()

    def class_of_set(self, els) -> Optional[SubgroupClass]:
        d = set_digest(els, self.group.degree)
        for cls in self.classes:
            if d in cls.digests:
                return cls
        return None


def build_collection(G: PermGroup, p: int, label: str,
                     include_trivial: bool = False,
                     classes: Optional[list[SubgroupClass]] = None) -> Collection:
    """Filter the class census by the predicate for the label."""
    if label not in LABELS:
        raise ValueError(f"label must be one of {LABELS}, got {label!r}")
    warnings = []
    if G.order() % p != 0:
        warnings.append(f"prime {p} does not divide |G| = {G.order()}")
    census = enumerate_p_classes(G, p) if classes is None else classes
    closure = None
    if label == "S":
        kept = census
    elif label == "A":
        kept = [c for c in census if is_elementary_abelian(c.rep, p)]
    elif label == "B":
        kept = [c for c in census
                if radical_certificate(G, c.rep, p, N=c.normalizer)["member"]]
    elif label == "Z":
        kept = [c for c in census if z_certificate(G, c.rep, p)["member"]]
    else:
        closure = sylow_intersection_closure(G, p)
        kept = [c for c in census
                if set_digest(c.rep.element_set(), G.degree) in closure]
    coll = Collection(G, p, label, tuple(kept), include_trivial,
                      tuple(warnings))
    coll._sylow_closure = closure
    return coll


@dataclass(frozen=True)
class MembershipResult:
    member: bool
    reason: dict


def membership(coll: Collection, H: PermGroup) -> MembershipResult:
    """Predicate membership of H in the collection, with the certificate
    the predicate computed along the way."""
    G, p = coll.group, coll.prime
    if H.order() == 1:
        return MembershipResult(coll.include_trivial,
                                {"trivial": True,
                                 "include_trivial": coll.include_trivial})
    n = H.order()
    while n % p == 0:
        n //= p
    if n != 1:
        return MembershipResult(False, {"p_group": False})
    if coll.label == "S":
        return MembershipResult(True, {"p_group": True, "nontrivial": True})
    if coll.label == "A":
        ok = is_elementary_abelian(H, p)
        return MembershipResult(ok, {"elementary_abelian": ok})
    if coll.label == "B":
        cert = radical_certificate(G, H, p)
        return MembershipResult(cert["member"], cert)
    if coll.label == "Z":
        cert = z_certificate(G, H, p)
        return MembershipResult(cert["member"], cert)
    if coll._sylow_closure is None:
        coll._sylow_closure = sylow_intersection_closure(G, p)
    d = set_digest(H.element_set(), G.degree)
    ok = d in coll._sylow_closure
    return MembershipResult(ok, {"in_sylow_intersection_closure": ok})


@dataclass(frozen=True)
class ClosureWitness:
    left: tuple          # sorted element images of H
    right: tuple         # sorted element images of K
    meet: tuple          # sorted element images of H ∩ K
    left_class: int
    right_class: int


@dataclass(frozen=True)
class ClosureResult:
    passed: bool
    witness: Optional[ClosureWitness]
    pairs_checked: int


def closure_check(coll: Collection) -> ClosureResult:
    """Is the collection closed under nontrivial intersections?

    H runs over class representatives, K over every member of every class
    (sufficient because collections are conjugation-closed); the first
    failing triple in the deterministic scan order is the witness.
    """
    degree = coll.group.degree
    ident = coll.group.identity()
    member_digests = set()
    for cls in coll.classes:
        member_digests |= cls.digests
    if coll.include_trivial:
        member_digests.add(set_digest([ident], degree))
    checked = 0
    for ci in coll.classes:
        hset = ci.rep.element_set()
        for cj in coll.classes:
            for kset in cj.conjugates():
                if kset == hset:
                    continue
                meet = hset & kset
                checked += 1
                if len(meet) == 1 and not coll.include_trivial:
                    continue
                if set_digest(meet, degree) not in member_digests:
                    return ClosureResult(False, ClosureWitness(
                        _set_key(hset), _set_key(kset), _set_key(meet),
                        ci.class_id, cj.class_id), checked)
    return ClosureResult(True, None, checked)
