from __future__ import annotations

import pytest

from pdecomp.groups import (
    DomainError, center, centralizer, intersection, is_conjugate,
    is_elementary_abelian, normalizer, omega1_p, p_core, subgroup_class_orbit,
    sylow,
)
from pdecomp.named import resolve, psl3_7, parse_group_file, InputError
from pdecomp.perms import Perm

import oracles


def test_known_orders():
    for name, want in [("S3", 6), ("S4", 24), ("S5", 120), ("A4", 12),
                       ("A5", 60), ("D8", 8), ("D14", 14), ("C9", 9)]:
        assert resolve(name).order() == want


def test_psl3_7_order():
    # |PSL3(q)| = q^3 (q^3-1)(q^2-1) / gcd(3, q-1) at q = 7
    q = 7
    want = q ** 3 * (q ** 3 - 1) * (q ** 2 - 1) // 3
    assert want == 1_876_896
    assert psl3_7().order() == want


def test_chain_order_is_product_of_orbit_lengths():
    G = resolve("S5")
    chain = G.chain
    prod = 1
    for lvl in chain.levels:
        prod *= len(lvl.transversal)
    assert prod == G.order() == 120


def test_generators_pass_membership():
    G = resolve("A5")
    for g in G.generators:
        assert g in G
    assert Perm.parse("(1 2)", 5) not in G


def test_centralizer_examples():
    S4 = resolve("S4")
    H = S4.subgroup([Perm.parse("(1 2)", 4)])
    assert centralizer(S4, H).order() == 4
    C6 = resolve("C6")
    assert centralizer(C6, C6).order() == 6  # abelian: C_G(G) = G


def test_normalizer_example():
    S4 = resolve("S4")
    K = S4.subgroup([Perm.parse("(1 2 3)", 4)])
    assert normalizer(S4, K).order() == 6


def test_sylow_examples():
    S4 = resolve("S4")
    assert sylow(S4, 2).order() == 8
    assert sylow(resolve("S3"), 3).order() == 3
    with pytest.raises(ValueError):
        sylow(S4, 4)


def test_sylow_psl37():
    G = psl3_7()
    S = sylow(G, 7)
    assert S.order() == 343


def test_p_core_examples():
    S4 = resolve("S4")
    O2 = p_core(S4, 2)
    assert O2.order() == 4
    assert oracles.brute_p_core(S4, 2) == set(O2.elements())
    assert p_core(resolve("A5"), 2).order() == 1
    P = sylow(S4, 2)
    assert p_core(P, 2).element_set() == P.element_set()  # O_p(P) = P


def test_conjugacy_examples():
    S4 = resolve("S4")
    a = S4.subgroup([Perm.parse("(1 2)", 4)])
    b = S4.subgroup([Perm.parse("(3 4)", 4)])
    c = S4.subgroup([Perm.parse("(1 2)(3 4)", 4)])
    g = is_conjugate(S4, a, b)
    assert g is not None and S4.conjugate_subgroup(a, g).element_set() == b.element_set()
    assert is_conjugate(S4, a, c) is None
    assert is_conjugate(S4, a, a) is not None


def test_conjugator_is_coset_minimal():
    S4 = resolve("S4")
    a = S4.subgroup([Perm.parse("(1 2)", 4)])
    b = S4.subgroup([Perm.parse("(3 4)", 4)])
    g = is_conjugate(S4, a, b)
    assert g == min(oracles.brute_conjugators(S4, a, b))


def test_intersection_center_omega1():
    S4 = resolve("S4")
    P = sylow(S4, 2)
    _, _, conjs = subgroup_class_orbit(S4, P)
    cs = list(conjs())
    I = intersection(cs[0], cs[1])
    assert I.order() == 4
    assert I.element_set() == p_core(S4, 2).element_set()
    Z = center(P)
    assert Z.order() == 2
    V = p_core(S4, 2)
    assert omega1_p(V, 2).element_set() == V.element_set()


def test_domain_error_on_mismatch():
    S4 = resolve("S4")
    S5 = resolve("S5")
    with pytest.raises(DomainError):
        centralizer(S4, S5.subgroup([Perm.parse("(1 5)", 5)]))
    # H not inside G
    with pytest.raises(DomainError):
        normalizer(resolve("A4"), resolve("S4").subgroup([Perm.parse("(1 2)", 4)]))


def test_is_elementary_abelian():
    S4 = resolve("S4")
    assert is_elementary_abelian(p_core(S4, 2), 2)
    assert not is_elementary_abelian(sylow(S4, 2), 2)
    assert not is_elementary_abelian(resolve("C4"), 2)


@pytest.mark.parametrize("name", ["S4", "A4", "D12", "D8", "C12", "A5"])
def test_against_brute_force(name):
    G = resolve(name)
    els = sorted(oracles.brute_elements(G))
    assert len(els) == G.order()
    assert set(els) == set(G.elements())
    probe = els[:: max(1, len(els) // 6)][:6]
    for x in probe:
        H = G.subgroup([x])
        assert set(centralizer(G, H).elements()) == oracles.brute_centralizer(G, H)
        assert set(normalizer(G, H).elements()) == oracles.brute_normalizer(G, H)
    # center / sylow containment invariants
    for p in (2, 3, 5):
        if G.order() % p == 0:
            S = sylow(G, p)
            n = S.order()
            while n % p == 0:
                n //= p
            assert n == 1
            m = G.order() // S.order()
            assert m % p != 0
    assert set(center(G).elements()) == oracles.brute_center(G)
    N = normalizer(G, G.subgroup([els[1]]))
    C = centralizer(G, G.subgroup([els[1]]))
    assert C.element_set() <= N.element_set()


def test_group_file_parsing():
    text = """
    # sample
    degree 4
    gen (1 2 3 4)
    gen (1 2)
    """
    G = parse_group_file(text)
    assert G.order() == 24
    with pytest.raises(InputError):
        parse_group_file("gen (1 2)")
    with pytest.raises(InputError):
        parse_group_file("degree 3\ngen (1 4)")


def test_named_subgroups_of_psl37():
    from pdecomp.named import psl3_7_named_subgroups
    G = psl3_7()
    subs = psl3_7_named_subgroups(G)
    w1, w2, zc = (subs["B-witness-1"], subs["B-witness-2"],
                  subs["center-intersection"])
    assert w1.order() == 49 and w2.order() == 49 and zc.order() == 7
    assert is_elementary_abelian(w1, 7) and is_elementary_abelian(w2, 7)
    got = intersection(w1, w2)
    assert got.element_set() == zc.element_set()
