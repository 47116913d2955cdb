"""Mod-p homology of finite complexes, induced maps, and Borel homology.

Ranks come from streaming sparse Gaussian elimination: over F_2 echelon
rows are arbitrary-precision integers (XOR and bit_length do the work),
over odd primes sparse dicts.  Borel homology tensors a truncated
normalized bar resolution with the chains of the complex and takes
coinvariants degreewise, so the block in bidegree (i, j) has dimension
(|G| - 1)^i * (number of j-cells).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .complexes import CMap, Complex
from .groups import PermGroup, ResourceCapError, is_prime
from .perms import Perm


class TruncationError(ValueError):
    """Homology requested beyond the trusted range of a truncated model."""


# -- rank engines ------------------------------------------------------------

def rank_f2(columns: Iterable, nrows: int) -> int:
    """Rank over F_2 of the matrix whose columns are iterables of row
    indices (an even number of repeats cancels)."""
    table: dict[int, int] = {}
    rank = 0
    for col in columns:
        v = 0
        for r in col:
            v ^= 1 << r
        while v:
            top = v.bit_length() - 1
            row = table.get(top)
            if row is None:
                table[top] = v
                rank += 1
                break
            v ^= row
    return rank


def rank_fp(columns: Iterable, nrows: int, p: int) -> int:
    """Rank over an odd prime; columns are iterables of (row, coeff)."""
    table: dict[int, dict[int, int]] = {}
    rank = 0
    for col in columns:
        v: dict[int, int] = {}
        for r, c in col:
            c %= p
            if not c:
                continue
            v[r] = (v.get(r, 0) + c) % p
            if not v[r]:
                del v[r]
        while v:
            top = max(v)
            row = table.get(top)
            if row is None:
                inv = pow(v[top], p - 2, p)
                table[top] = {r: (c * inv) % p for r, c in v.items()}
                rank += 1
                break
            factor = v[top]
            for r, c in row.items():
                nc = (v.get(r, 0) - factor * c) % p
                if nc:
                    v[r] = nc
                else:
                    v.pop(r, None)
    return rank


def _rank(columns, nrows, p):
    if p == 2:
        return rank_f2(([r for r, c in col if c % 2]
                        for col in columns), nrows)
    return rank_fp(columns, nrows, p)


# -- chain complexes ---------------------------------------------------------

@dataclass
class ChainComplexFp:
    """Bounded chain complex over F_p given by sparse boundary columns.

    boundaries[n] is the list of columns of d_n : C_n -> C_{n-1}, one per
    n-cell, each a list of (row, coeff<).  ``exact_top`` marks complexes
    whose top degree is intrinsic (d_{top+1} = 0) rather than truncated.
    """
    p: int
    dims: list[int]
    boundaries: list[list[list[tuple[int, int]]]]
    exact_top: bool = True

    def check_dd_zero(self) -> None:
        for n in range(2, len(self.dims)):
            for col in self.boundaries[n]:
                acc: dict[int, int] = {}
                for r, c in col:
                    for r2, c2 in self.boundaries[n - 1][r]:
                        acc[r2] = (acc.get(r2, 0) + c * c2) % self.p
                if any(acc.values()):
                    raise AssertionError(f"dd != 0 in degree {n}")

    def valid_range(self):
        # a complex with intrinsic top dimension is exact above it
        if self.exact_top:
            return float("inf")
        return len(self.dims) - 2

    def rank_boundary(self, n: int) -> int:
        if n <= 0 or n >= len(self.dims):
            return 0
        return _rank(self.boundaries[n], self.dims[n - 1], self.p)


def chains(X: Complex, p: int) -> ChainComplexFp:
    """Normalized simplicial chains of a complex, with the alternating
    face signs; collapsed faces contribute nothing."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    dims = X.dims()
    boundaries: list[list[list[tuple[int, int]]]] = [[]]
    for n in range(1, len(dims)):
        cols = []
        for i in range(dims[n]):
            col = []
            for k in range(len(X.faces[n])):
                f = X.faces[n][k][i]
                if f is not None:
                    col.append((f, (-1) ** k % p))
            cols.append(col)
        boundaries.append(cols)
    boundaries[0] = [[] for _ in range(dims[0])] if dims else []
    cc = ChainComplexFp(p, dims, boundaries, exact_top=not X.truncated)
    return cc


@dataclass
class HomologyReport:
    p: int
    betti: dict[int, int]
    valid_range: int
    iso: Optional[dict[int, bool]] = None
    map_ranks: Optional[dict[int, int]] = None
    cost: dict = field(default_factory=dict)

    def betti_tuple(self, maxdeg: int) -> tuple[int, ...]:
        return tuple(self.betti.get(n, 0) for n in range(maxdeg + 1))

    def to_json(self) -> dict:
        out = {
            "p": self.p,
            "valid_range": self.valid_range,
            "rows": [
                {"degree": n, "rank": self.betti[n],
                 **({"iso": self.iso[n]} if self.iso and n in self.iso
                    else {})}
                for n in sorted(self.betti)],
        }
        if self.cost:
            out["cost"] = self.cost
        return out


def homology(C: ChainComplexFp, maxdeg: int) -> HomologyReport:
    """Betti numbers over F_p for degrees <= maxdeg."""
    if maxdeg > C.valid_range():
        raise TruncationError(
            f"homology through degree {maxdeg} needs a model of dimension "
            f">= {maxdeg + 1}; this one is trusted through {C.valid_range()}")
    ranks = {n: C.rank_boundary(n) for n in range(maxdeg + 2)}
    betti = {}
    for n in range(maxdeg + 1):
        dim_n = C.dims[n] if n < len(C.dims) else 0
        betti[n] = dim_n - ranks.get(n, 0) - ranks.get(n + 1, 0)
    return HomologyReport(C.p, betti, maxdeg)


def chain_map_columns(f: CMap, p: int) -> list[list[list[tuple[int, int]]]]:
    """Per-degree sparse columns of the chain map."""
    out = []
    for n in range(len(f.source.cells)):
        cols = []
        for i in range(len(f.source.cells[n])):
            im = f.cell_map[n][i]
            cols.append([] if im is None else [(im[1], im[0] % p)])
        out.append(cols)
    return out


def check_chain_map(f: CMap, p: int) -> None:
    """d o f = f o d over F_p, degreewise."""
    sc = chains(f.source, p)
    tc = chains(f.target, p)
    cols = chain_map_columns(f, p)
    for n in range(1, len(f.source.cells)):
        for i in range(len(f.source.cells[n])):
            acc: dict[int, int] = {}
            for r, c in cols[n][i]:
                for r2, c2 in tc.boundaries[n][r]:
                    acc[r2] = (acc.get(r2, 0) + c * c2) % p
            for r, c in sc.boundaries[n][i]:
                for r2, c2 in cols[n - 1][r]:
                    acc[r2] = (acc.get(r2, 0) - c * c2) % p
            if any(v % p for v in acc.values()):
                raise AssertionError(
                    f"not a chain map in degree {n} ({f.label})")


def induced_map(f: CMap, p: int, maxdeg: int,
                check: bool = True) -> HomologyReport:
    """Per-degree rank of H_n(f) and iso flags.

    rank H_n(f) = rank [[f_n, d^T_{n+1}], [d^S_n, 0]]
                  - rank d^S_n - rank d^T_{n+1},
    which is the dimension of (f(Z_n) + B_n(T)) / B_n(T).
    """
    sc = chains(f.source, p)
    tc = chains(f.target, p)
    valid = min(sc.valid_range(), tc.valid_range())
    if maxdeg > valid:
        raise TruncationError(
            f"induced map through degree {maxdeg} not trusted beyond {valid}")
    if check:
        check_chain_map(f, p)
    fcols = chain_map_columns(f, p)
    betti_s = homology(sc, maxdeg)
    betti_t = homology(tc, maxdeg)
    iso = {}
    map_ranks = {}
    for n in range(maxdeg + 1):
        dims_t = tc.dims[n] if n < len(tc.dims) else 0
        nrows = dims_t + (sc.dims[n - 1] if n >= 1 else 0)
        cols = []
        sn = sc.dims[n] if n < len(sc.dims) else 0
        for i in range(sn):
            col = list(fcols[n][i])
            if n >= 1:
                col += [(dims_t + r, c) for r, c in sc.boundaries[n][i]]
            cols.append(col)
        if n + 1 < len(tc.dims):
            for col in tc.boundaries[n + 1]:
                cols.append(list(col))
        big = _rank(cols, nrows, p)
        r_s = sc.rank_boundary(n)
        r_t = tc.rank_boundary(n + 1)
        rk = big - r_s - r_t
        map_ranks[n] = rk
        iso[n] = (rk == betti_s.betti[n] == betti_t.betti[n])
    rep = HomologyReport(p, betti_t.betti, maxdeg, iso=iso,
                         map_ranks=map_ranks)
    rep.source_betti = betti_s.betti
    return rep


# -- Borel construction ------------------------------------------------------

class _BarData:
    """Indexing for the coinvariant total complex of (bar resolution of
    the trivial module) tensor (chains of X)."""

    def __init__(self, G: PermGroup, X: Complex, p: int, maxdim: int,
                 cap: int):
        self.p = p
        els = sorted(G.elements())
        self.els = els
        self.m = len(els)
        idx = {g.img: i for i, g in enumerate(els)}
        self.ident = idx[G.identity().img]
        self.letters = [i for i in range(self.m) if i != self.ident]
        self.letter_pos = {e: w for w, e in enumerate(self.letters)}
        self.mul = [[idx[(els[a] * els[b]).img] for b in range(self.m)]
                    for a in range(self.m)]
        self.inv = [idx[els[a].inv().img] for a in range(self.m)]
        self.cdims = X.dims()
        # cell action tables: act[e][j][cell] for group element index e
        if X.group is None:
            raise ValueError("Borel construction needs a G-complex")
        self.act = [X.action(g) for g in els]
        self.X = X
        L = len(self.letters)
        self.blocks = []   # per total degree: list of (i, j, offset, size)
        self.tdims = []
        total_cost = 0
        for n in range(maxdim + 1):
            off = 0
            blocks = []
            for i in range(n, -1, -1):
                j = n - i
                if j >= len(self.cdims):
                    continue
                size = (L ** i) * self.cdims[j]
                blocks.append((i, j, off, size))
                off += size
            self.blocks.append(blocks)
            self.tdims.append(off)
            total_cost += off
        if total_cost > cap:
            raise ResourceCapError(
                f"Borel total complex needs {total_cost} basis elements "
                f"(cap {cap}); lower maxdeg or raise the cap")
        self.L = L

    def decode(self, n: int, index: int):
        for (i, j, off, size) in self.blocks[n]:
            if index < off + size:
                rel = index - off
                cell = rel % self.cdims[j]
                rel //= self.cdims[j]
                word = []
                for _ in range(i):
                    word.append(self.letters[rel % self.L])
                    rel //= self.L
                word.reverse()
                return i, j, tuple(word), cell
        raise IndexError(index)

    def encode(self, n: int, i: int, j: int, word, cell: int) -> int:
        for (bi, bj, off, size) in self.blocks[n]:
            if bi == i and bj == j:
                rel = 0
                for w in word:
                    rel = rel * self.L + self.letter_pos[w]
                return off + rel * self.cdims[j] + cell
        raise IndexError((n, i, j))

    def column(self, n: int, index: int) -> list[tuple[int, int]]:
        """Sparse column of the total differential on one basis element."""
        p = self.p
        i, j, word, cell = self.decode(n, index)
        col: dict[int, int] = {}

        def add(r: int, c: int):
            c %= p
            if not c:
                return
            col[r] = (col.get(r, 0) + c) % p
            if not col[r]:
                del col[r]

        if i > 0:
            # face 0: shift the first letter onto the coefficients
            g1 = word[0]
            moved = self.act[self.inv[g1]][j][cell]
            add(self.encode(n - 1, i - 1, j, word[1:], moved), 1)
            # middle faces: merge adjacent letters, dropping identities
            for k in range(1, i):
                prod = self.mul[word[k - 1]][word[k]]
                if prod != self.ident:
                    add(self.encode(n - 1, i - 1, j,
                                    word[:k - 1] + (prod,) + word[k + 1:],
                                    cell), (-1) ** k)
            # last face: forget the last letter (trivial coefficients)
            add(self.encode(n - 1, i - 1, j, word[:-1], cell), (-1) ** i)
        if j > 0:
            sign = (-1) ** i
            for k in range(len(self.X.faces[j])):
                f = self.X.faces[j][k][cell]
                if f is not None:
                    add(self.encode(n - 1, i, j - 1, word, f),
                        sign * (-1) ** k)
        return sorted(col.items())

    def columns(self, n: int):
        for index in range(self.tdims[n]):
            yield self.column(n, index)


def point_complex(G: PermGroup) -> Complex:
    return Complex([[("pt",)]], [[]], [[(0,)]], group=G,
                   act_fn=lambda g: [[0]], label="pt")


def borel_homology(G: PermGroup, X: Complex, p: int, maxdeg: int,
                   cap: int = 8_000_000) -> HomologyReport:
    """H_*(X_hG; F_p) in degrees <= maxdeg, from the coinvariant total
    complex of the truncated normalized bar resolution tensored with the
    chains of X."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if X.truncated and X.max_dim < maxdeg + 1:
        raise TruncationError("X must carry cells through maxdeg + 1")
    bar = _BarData(G, X, p, maxdeg + 1, cap)
    ranks = {}
    for n in range(1, maxdeg + 2):
        ranks[n] = _rank(bar.columns(n), bar.tdims[n - 1], p)
    betti = {}
    for n in range(maxdeg + 1):
        betti[n] = bar.tdims[n] - ranks.get(n, 0) - ranks.get(n + 1, 0)
    return HomologyReport(p, betti, maxdeg,
                          cost={"total_dims": bar.tdims,
                                "group_order": G.order()})


def group_homology(G: PermGroup, p: int, maxdeg: int,
                   cap: int = 8_000_000) -> HomologyReport:
    """H_*(BG; F_p): Borel homology of the point."""
    return borel_homology(G, point_complex(G), p, maxdeg, cap)


def borel_collapse(G: PermGroup, X: Complex, p: int, maxdeg: int,
                   cap: int = 8_000_000):
    """The collapse X -> pt on Borel homology: per-degree map ranks and
    iso flags, plus both homology reports.

    The induced map keeps the word and sends 0-cells to the point; blocks
    with j > 0 die.  Every boundary rank is computed once.
    """
    bar_x = _BarData(G, X, p, maxdeg + 1, cap)
    pt = point_complex(G)
    bar_pt = _BarData(G, pt, p, maxdeg + 1, cap)

    ranks_x = {n: _rank(bar_x.columns(n), bar_x.tdims[n - 1], p)
               for n in range(1, maxdeg + 2)}
    ranks_pt = {n: _rank(bar_pt.columns(n), bar_pt.tdims[n - 1], p)
                for n in range(1, maxdeg + 2)}
    betti_x = {n: bar_x.tdims[n] - ranks_x.get(n, 0) - ranks_x.get(n + 1, 0)
               for n in range(maxdeg + 1)}
    betti_pt = {n: bar_pt.tdims[n] - ranks_pt.get(n, 0)
                - ranks_pt.get(n + 1, 0) for n in range(maxdeg + 1)}
    hx = HomologyReport(p, betti_x, maxdeg,
                        cost={"total_dims": bar_x.tdims,
                              "group_order": G.order()})
    hpt = HomologyReport(p, betti_pt, maxdeg,
                         cost={"total_dims": bar_pt.tdims,
                               "group_order": G.order()})

    def f_col(n: int, index: int):
        i, j, word, cell = bar_x.decode(n, index)
        if j != 0:
            return []
        return [(bar_pt.encode(n, i, 0, word, 0), 1)]

    iso = {}
    map_ranks = {}
    for n in range(maxdeg + 1):
        nrows = bar_pt.tdims[n] + (bar_x.tdims[n - 1] if n >= 1 else 0)

        def cols():
            for index in range(bar_x.tdims[n]):
                col = list(f_col(n, index))
                if n >= 1:
                    col += [(bar_pt.tdims[n] + r, c)
                            for r, c in bar_x.column(n, index)]
                yield col
            for col in bar_pt.columns(n + 1):
                yield list(col)

        big = _rank(cols(), nrows, p)
        rk = big - (ranks_x[n] if n >= 1 else 0) - ranks_pt[n + 1]
        map_ranks[n] = rk
        iso[n] = (rk == betti_x[n] == betti_pt[n])
    return hx, hpt, map_ranks, iso


def euler_characteristic(C: ChainComplexFp) -> int:
    return sum((-1) ** n * d for n, d in enumerate(C.dims))
