"""Exhaustive element-level oracles used to anchor the group engine.

Everything here scans whole element lists; it is deliberately independent
of the stabilizer-chain search code it checks.
"""

from __future__ import annotations

from pdecomp.groups import PermGroup, StabChain
from pdecomp.perms import Perm


def brute_elements(G: PermGroup) -> set[Perm]:
    """Close the generator set under multiplication."""
    ident = G.identity()
    out = {ident}
    frontier = [ident]
    while frontier:
        x = frontier.pop()
        for g in G.generators:
            y = x * g
            if y not in out:
                out.add(y)
                frontier.append(y)
    return out


def brute_centralizer(G: PermGroup, H: PermGroup) -> set[Perm]:
    hs = brute_elements(H)
    return {g for g in brute_elements(G) if all(h ** g == h for h in hs)}


def brute_normalizer(G: PermGroup, H: PermGroup) -> set[Perm]:
    hs = brute_elements(H)
    return {g for g in brute_elements(G)
            if {h ** g for h in hs} == hs}


def brute_center(H: PermGroup) -> set[Perm]:
    hs = brute_elements(H)
    return {z for z in hs if all(z * h == h * z for h in hs)}


def brute_conjugators(G: PermGroup, H: PermGroup, K: PermGroup) -> list[Perm]:
    hs = brute_elements(H)
    ks = brute_elements(K)
    return sorted(g for g in brute_elements(G)
                  if {h ** g for h in hs} == ks)


def brute_intersection(H: PermGroup, K: PermGroup) -> set[Perm]:
    return brute_elements(H) & brute_elements(K)


def brute_p_core(G: PermGroup, p: int) -> set[Perm]:
    """Largest normal p-subgroup, found by scanning normal p-subgroups
    generated by whole conjugacy classes of p-elements."""
    els = sorted(brute_elements(G))
    best = {G.identity()}
    # candidate normal subgroups: joins of closed p-element classes
    p_els = [x for x in els if _is_p_element(x, p)]
    import itertools
    classes = {}
    for x in p_els:
        cls = frozenset(x ** g for g in els)
        classes[cls] = min(cls)
    class_list = list(classes)
    for r in range(1, len(class_list) + 1):
        for combo in itertools.combinations(class_list, r):
            gens = [p for cls in combo for p in cls]
            sub = set(brute_elements(G.subgroup(gens)))
            n = len(sub)
            if n > len(best) and _order_is_p_power(n, p):
                if all({h ** g for h in sub} == sub for g in G.generators):
                    best = sub
        # joining more classes only grows subgroups; one pass is enough
        if r >= 2:
            break
    return best


def _is_p_element(x: Perm, p: int) -> bool:
    n = x.order()
    while n % p == 0:
        n //= p
    return n == 1 and not x.is_identity()


def _order_is_p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def brute_all_subgroups(G: PermGroup) -> list[frozenset]:
    """Every subgroup of G as a frozenset of elements (|G| small).

    Breadth-first closure: start from cyclic subgroups and extend each
    subgroup by one generator at a time until nothing new appears.
    """
    els = sorted(brute_elements(G))
    trivial = frozenset([G.identity()])
    found = {trivial}
    frontier = [trivial]
    while frontier:
        H = frontier.pop()
        for x in els:
            if x in H:
                continue
            ext = frozenset(brute_elements(G.subgroup(list(H) + [x])))
            if ext not in found:
                found.add(ext)
                frontier.append(ext)
    return sorted(found, key=lambda s: (len(s), sorted(p.img for p in s)))
