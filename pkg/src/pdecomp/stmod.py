"""Modules over the group algebra at the prime p, and their stable homs.

A module is a matrix representation over F_p given on the group's
generators; the constructor closes the generator matrices over the whole
group, which both caches every element's matrix and proves the assignment
extends to a homomorphism (any inconsistency surfaces as a clash during
the closure).

Stable homs divide Hom_G(M, N) by the maps factoring through a
projective, computed as the image of composition with a fixed free cover
kG (x) N -> N.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .groups import DomainError, PermGroup, ResourceCapError, is_prime, sylow
from .perms import Perm


class ModuleError(ValueError):
    """Generator matrices do not define a module."""


def _mat(a) -> np.ndarray:
    return np.asarray(a, dtype=np.int64)


def _rref(A: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Row-reduced echelon form over F_p; returns (matrix, pivot columns)."""
    A = A.copy() % p
    pivots = []
    r = 0
    rows, cols = A.shape
    for c in range(cols):
        pivot = None
        for i in range(r, rows):
            if A[i, c] % p:
                pivot = i
                break
        if pivot is None:
            continue
        A[[r, pivot]] = A[[pivot, r]]
        A[r] = (A[r] * pow(int(A[r, c]), p - 2, p)) % p
        for i in range(rows):
            if i != r and A[i, c] % p:
                A[i] = (A[i] - A[i, c] * A[r]) % p
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return A % p, pivots


def matrix_rank(A: np.ndarray, p: int) -> int:
    if A.size == 0:
        return 0
    return len(_rref(A, p)[1])


def null_space(A: np.ndarray, p: int) -> list[np.ndarray]:
    """Basis of the right null space of A over F_p."""
    rows, cols = A.shape
    R, pivots = _rref(A, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(cols, dtype=np.int64)
        v[f] = 1
        for r, c in enumerate(pivots):
            v[c] = (-R[r, f]) % p
        basis.append(v % p)
    return basis


def row_space_basis(A: np.ndarray, p: int) -> np.ndarray:
    R, pivots = _rref(A, p)
    return R[: len(pivots)]


def in_row_space(v: np.ndarray, basis: np.ndarray, p: int) -> bool:
    if basis.size == 0:
        return not np.any(v % p)
    stacked = np.vstack([basis, v % p])
    return matrix_rank(stacked, p) == matrix_rank(basis, p)


class KModule:
    """A finite-dimensional F_p[G]-module given by generator matrices."""

    def __init__(self, group: PermGroup, p: int, dim: int, gen_mats,
                 name: str = ""):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.group = group
        self.p = p
        self.dim = dim
        self.name = name
        gens = list(group.generators)
        mats = [(_mat(m) % p) for m in gen_mats]
        if len(mats) != len(gens):
            raise ModuleError(
                f"need one matrix per generator ({len(gens)}), got {len(mats)}")
        for m in mats:
            if m.shape != (dim, dim):
                raise ModuleError(f"matrix shape {m.shape} != ({dim},{dim})")
            if matrix_rank(m, p) != dim:
                raise ModuleError("generator matrix is singular")
        self._table: dict[tuple, np.ndarray] = {}
        self._close(gens, mats)

    def _close(self, gens, mats) -> None:
        """BFS closure of the matrix assignment over the whole group; a
        clash means the matrices violate a relation of the group."""
        ident = self.group.identity()
        self._table[ident.img] = np.eye(self.dim, dtype=np.int64)
        frontier = [ident]
        while frontier:
            x = frontier.pop()
            mx = self._table[x.img]
            for g, mg in zip(gens, mats):
                y = x * g
                my = (mx @ mg) % self.p
                known = self._table.get(y.img)
                if known is None:
                    self._table[y.img] = my
                    frontier.append(y)
                elif not np.array_equal(known, my):
                    raise ModuleError(
                        "generator matrices are inconsistent along the "
                        f"relation at {y}")

    def matrix(self, g: Perm) -> np.ndarray:
        m = self._table.get(g.img)
        if m is None:
            raise DomainError(f"{g} is not in the group")
        return m

    def __repr__(self):
        return f"<KModule {self.name or ''} dim={self.dim} p={self.p}>"


def trivial_module(G: PermGroup, p: int) -> KModule:
    return KModule(G, p, 1, [np.eye(1, dtype=np.int64)] * len(G.generators),
                   name="k")


def regular_module(G: PermGroup, p: int) -> KModule:
    """kG with the left regular action on the sorted element basis."""
    els = sorted(G.elements())
    idx = {e.img: i for i, e in enumerate(els)}
    mats = []
    for g in G.generators:
        m = np.zeros((len(els), len(els)), dtype=np.int64)
        for j, e in enumerate(els):
            m[idx[(g * e).img], j] = 1
        mats.append(m)
    return KModule(G, p, len(els), mats, name="kG")


def permutation_module(G: PermGroup, p: int, H: PermGroup,
                       name: str = "") -> KModule:
    """k[G/H] on the sorted coset basis (the permutation algebra A^G_H
    has this as its underlying module)."""
    from .complexes import GSetData
    data = GSetData.cosets(G, H)
    n = len(data.points)
    mats = []
    for g in G.generators:
        m = np.zeros((n, n), dtype=np.int64)
        for j in range(n):
            m[data.act(g, j), j] = 1
        mats.append(m)
    mod = KModule(G, p, n, mats, name=name or f"k[G/H:{H.order()}]")
    mod.coset_data = data
    return mod


def permutation_algebra(G: PermGroup, H: PermGroup, p: int) -> KModule:
    """Underlying module of the coinduced algebra: functions on G/H with
    the permutation action."""
    if not all(h in G for h in H.generators):
        raise DomainError("H is not contained in G")
    return permutation_module(G, p, H, name=f"A^G_H(|H|={H.order()})")


def algebra_pullback(G: PermGroup, p: int, H: PermGroup, K: PermGroup,
                     g: Perm) -> np.ndarray:
    """Matrix of the pullback (functions on G/K) -> (functions on G/H)
    along the orbit map xH |-> xgK.

    Composing orbit maps corresponds to composing pullbacks the other way
    round, matching the orbit category's composition table.
    """
    from .complexes import GSetData
    dh = GSetData.cosets(G, H)
    dk = GSetData.cosets(G, K)
    m = np.zeros((len(dh.points), len(dk.points)), dtype=np.int64)
    for i in range(len(dh.points)):
        m[i, dk.point_index[(dh.points[i] * g).img]] = 1
    return m


def hom_space(M: KModule, N: KModule) -> list[np.ndarray]:
    """Basis of Hom_G(M, N): solve F rho_M(g) = rho_N(g) F on generators."""
    if M.group is not N.group and M.group.generators != N.group.generators:
        raise DomainError("modules live over different groups")
    if M.p != N.p:
        raise DomainError("modules live over different primes")
    p = M.p
    if M.dim * N.dim > 20000:
        raise ResourceCapError(
            f"hom space of dimension {M.dim}x{N.dim} exceeds the cap")
    rows = []
    for g in M.group.generators:
        a = M.matrix(g)
        b = N.matrix(g)
        # (F a - b F) = 0, flattened: (a^T (x) I - I (x) b) vec(F)
        block = (np.kron(a.T, np.eye(N.dim, dtype=np.int64))
                 - np.kron(np.eye(M.dim, dtype=np.int64), b)) % p
        rows.append(block)
    if not rows:
        rows = [np.zeros((1, M.dim * N.dim), dtype=np.int64)]
    A = np.vstack(rows) % p
    return [v.reshape(N.dim, M.dim, order="F").copy() % p
            for v in null_space(A, p)]


@dataclass
class StableHomSpace:
    hom_basis: list
    projective_basis: list    # spans the maps factoring through a projective
    dim_hom: int
    dim_projective: int

    @property
    def dim(self) -> int:
        return self.dim_hom - self.dim_projective


def projective_factoring_subspace(M: KModule, N: KModule,
                                  cover: Optional[KModule] = None
                                  ) -> list[np.ndarray]:
    """Maps M -> N that factor through a projective: the image of
    composition with the counit surjection kG (x) N -> N.

    Any map through a projective lifts along a surjection from a free
    module, so this image is the whole subspace.
    """
    p = M.p
    F, pi = free_cover(N, cover)
    basis = hom_space(M, F)
    flat = [(pi @ f) % p for f in basis]
    if not flat:
        return []
    A = np.vstack([m.reshape(-1) for m in flat]) % p
    R = row_space_basis(A, p)
    return [r.reshape(N.dim, M.dim).copy() for r in R]


def free_cover(N: KModule, cover: Optional[KModule] = None):
    """The free module kG (x) (underlying space of N) with the action on
    the kG factor, and the counit surjection g (x) v |-> g . v."""
    G, p = N.group, N.p
    els = sorted(G.elements())
    idx = {e.img: i for i, e in enumerate(els)}
    n, m = N.dim, len(els)
    if cover is None:
        mats = []
        for g in G.generators:
            perm = np.zeros((m, m), dtype=np.int64)
            for j, e in enumerate(els):
                perm[idx[(g * e).img], j] = 1
            mats.append(np.kron(perm, np.eye(n, dtype=np.int64)) % p)
        cover = KModule(G, p, m * n, mats, name=f"kG^{n}")
    pi = np.zeros((n, m * n), dtype=np.int64)
    for j, e in enumerate(els):
        pi[:, j * n:(j + 1) * n] = N.matrix(e)
    return cover, pi % p


def stable_hom(M: KModule, N: KModule) -> StableHomSpace:
    hom = hom_space(M, N)
    proj = projective_factoring_subspace(M, N)
    return StableHomSpace(hom, proj, len(hom), len(proj))


def restriction(M: KModule, H: PermGroup) -> KModule:
    """The H-module with the same underlying space."""
    if not all(h in M.group for h in H.generators):
        raise DomainError("H is not contained in the acting group")
    return KModule(H, M.p, M.dim, [M.matrix(h) for h in H.generators],
                   name=f"Res({M.name})")


def induction(M: KModule, G: PermGroup) -> KModule:
    """k[G] (x)_{kH} M, of dimension [G:H] dim M, with the coset-block
    permutation action."""
    H = M.group
    if not all(h in G for h in H.generators):
        raise DomainError("the module's group is not a subgroup of G")
    els = sorted(G.elements())
    hset = H.element_set()
    reps: list[Perm] = []
    rep_of = {}
    for x in els:
        if x.img in rep_of:
            continue
        coset = sorted(x * h for h in hset)
        for y in coset:
            rep_of[y.img] = len(reps)
        reps.append(coset[0])
    k = len(reps)
    d = M.dim
    mats = []
    for g in G.generators:
        m = np.zeros((k * d, k * d), dtype=np.int64)
        for i, t in enumerate(reps):
            gt = g * t
            j = rep_of[gt.img]
            h = reps[j].inv() * gt
            m[j * d:(j + 1) * d, i * d:(i + 1) * d] = M.matrix(h)
        mats.append(m % M.p)
    mod = KModule(G, M.p, k * d, mats, name=f"Ind({M.name})")
    mod.coset_reps = reps
    return mod


def transfer(G: PermGroup, H: PermGroup, M: KModule, N: KModule,
             f: np.ndarray) -> np.ndarray:
    """Transfer of an H-map between the restrictions: sum over coset
    representatives of rho_N(t) f rho_M(t)^-1."""
    p = M.p
    els = sorted(G.elements())
    hset = H.element_set()
    out = np.zeros((N.dim, M.dim), dtype=np.int64)
    seen = set()
    for x in els:
        if x.img in seen:
            continue
        seen.update((x * h).img for h in hset)
        out = (out + N.matrix(x) @ f @ M.matrix(x.inv())) % p
    return out


def unit_split_check(G: PermGroup, p: int) -> dict:
    """The unit k -> k[G/S] (diagonal) splits: the retraction is the
    coordinate sum scaled by the inverse of [G:S] mod p."""
    S = sylow(G, p)
    A = permutation_module(G, p, S)
    n = A.dim                      # [G:S], prime to p
    u = np.ones((n, 1), dtype=np.int64)
    inv = pow(n % p, p - 2, p)
    r = (inv * np.ones((1, n), dtype=np.int64)) % p
    # both maps are G-equivariant: the action permutes coordinates
    equivariant = all(
        np.array_equal((A.matrix(g) @ u) % p, u % p) and
        np.array_equal((r @ A.matrix(g)) % p, r % p)
        for g in G.generators)
    retract = int((r @ u)[0, 0] % p)
    return {
        "sylow_order": S.order(),
        "index": n,
        "index_inverse_mod_p": inv,
        "unit_equivariant": equivariant,
        "retraction_composite": retract,
        "split": equivariant and retract == 1 % p,
    }


def restriction_map_on_stable_homs(M: KModule, N: KModule,
                                   S: PermGroup) -> dict:
    """Kernel of Res: stable Hom_G(M, N) -> stable Hom_S(M, N).

    The kernel is (Hom_G ∩ P_S) / P_G, where P_H is the span of the maps
    factoring through a projective over H; its dimension comes from
    dim(U ∩ W) = dim U + dim W - dim(U + W).
    """
    p = M.p
    sh_G = stable_hom(M, N)
    MS, NS = restriction(M, S), restriction(N, S)
    proj_S = projective_factoring_subspace(MS, NS)
    hom_rows = [f.reshape(-1) for f in sh_G.hom_basis]
    span_rows = [m.reshape(-1) for m in proj_S]
    if hom_rows and span_rows:
        hom_rank = matrix_rank(np.vstack(hom_rows) % p, p)
        span_rank = matrix_rank(np.vstack(span_rows) % p, p)
        both = matrix_rank(np.vstack(hom_rows + span_rows) % p, p)
        inter_dim = hom_rank + span_rank - both
    else:
        inter_dim = 0
    kernel_dim = inter_dim - sh_G.dim_projective
    return {
        "stable_hom_G_dim": sh_G.dim,
        "kernel_dim": kernel_dim,
        "faithful": kernel_dim == 0,
    }


def sylow_faithfulness(M: KModule, N: KModule) -> dict:
    """Restriction to a Sylow p-subgroup is injective on stable homs."""
    S = sylow(M.group, M.p)
    out = restriction_map_on_stable_homs(M, N, S)
    out["sylow_order"] = S.order()
    return out


def random_module(G: PermGroup, p: int, dim_cap: int,
                  rng: np.random.Generator) -> KModule:
    """A random module: a permutation-style module of dimension <= cap,
    conjugated by a random change of basis."""
    subs = _small_subgroups(G)
    choices = [H for H in subs if len(G.elements()) // H.order() <= dim_cap]
    H = choices[rng.integers(len(choices))]
    base = permutation_module(G, p, H)
    d = base.dim
    while True:
        P = rng.integers(0, p, size=(d, d))
        if matrix_rank(P % p, p) == d:
            break
    P = _mat(P) % p
    Pinv = _inverse(P, p)
    mats = [(P @ base.matrix(g) @ Pinv) % p for g in G.generators]
    return KModule(G, p, d, mats, name=f"rand[{d}]")


def _inverse(A: np.ndarray, p: int) -> np.ndarray:
    d = A.shape[0]
    aug = np.hstack([A % p, np.eye(d, dtype=np.int64)])
    R, pivots = _rref(aug, p)
    if pivots != list(range(d)):
        raise ValueError("matrix not invertible")
    return R[:, d:] % p


def _small_subgroups(G: PermGroup) -> list[PermGroup]:
    """Cyclic subgroups of G plus G itself, deterministically ordered."""
    seen = {}
    for x in sorted(G.elements()):
        H = G.subgroup([x])
        key = H.element_set()
        if key not in seen:
            seen[key] = H
    subs = sorted(seen.values(), key=lambda H: (H.order(),
                                                sorted(p.img for p in
                                                       H.element_set())))
    return subs + [G]
