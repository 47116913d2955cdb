"""Finite semi-simplicial models of the spaces attached to a collection.

Four builders: the order complex of the members, its subdivision (the
order complex of the poset of chains), and the two transport-nerve models
over the orbit and fusion categories.  Cells are nondegenerate chains; a
face that would land on a degenerate chain is recorded as collapsed
(None), which is exactly the normalized-chains convention used by the
homology layer.

Comparison maps are nerves of functors given on vertices (minimum of a
chain, stabilizer of a point, image of an inclusion) and extended
simplicially; a cell whose image vertices repeat collapses to None, and
orientation signs come from sorting the image vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from .cats import FinCategory, Morphism, fusion_category, orbit_category
from .groups import PermGroup, centralizer
from .perms import Perm
from .pclasses import Collection, _set_key


class Complex:
    """Cells per degree with face maps; optionally a G-action.

    faces[n][k][i] is the index of the k-th face of cell i in degree n,
    or None when that face is degenerate.  vertices[n][i] lists the
    degree-0 cells of cell i in its intrinsic order.
    """

    def __init__(self, cells, faces, vertices, group=None, act_fn=None,
                 truncated=False, label=""):
        self.cells = [list(c) for c in cells]
        self.faces = faces
        self.vertices = vertices
        self.group = group
        self._act_fn = act_fn
        self._act_cache: dict[tuple, list[list[int]]] = {}
        self.truncated = truncated
        self.label = label
        self.index = [{c: i for i, c in enumerate(lvl)} for lvl in self.cells]

    @property
    def max_dim(self) -> int:
        return len(self.cells) - 1

    def dims(self) -> list[int]:
        return [len(c) for c in self.cells]

    def homology_valid_through(self) -> int:
        return self.max_dim - 1 if self.truncated else self.max_dim

    def action(self, g: Perm) -> list[list[int]]:
        """Per-degree permutation of cell indices under g."""
        if self._act_fn is None:
            raise ValueError(f"complex {self.label!r} carries no action")
        key = g.img
        if key not in self._act_cache:
            self._act_cache[key] = self._act_fn(g)
        return self._act_cache[key]

    def check(self) -> None:
        """Face identities, and equivariance on the group's generators."""
        for n in range(2, len(self.cells)):
            for i in range(len(self.cells[n])):
                for k in range(n + 1):
                    for j in range(k):
                        a = self.faces[n][k][i]
                        b = self.faces[n][j][i]
                        left = self.faces[n - 1][j][a] if a is not None else None
                        right = self.faces[n - 1][k - 1][b] if b is not None else None
                        if a is not None and b is not None and left != right:
                            raise AssertionError(
                                f"face identity fails at degree {n}, cell {i}")
        if self.group is not None:
            for g in self.group.generators:
                perms = self.action(g)
                for n in range(1, len(self.cells)):
                    for i in range(len(self.cells[n])):
                        for k in range(n + 1):
                            f = self.faces[n][k][i]
                            lhs = perms[n - 1][f] if f is not None else None
                            f2 = self.faces[n][k][perms[n][i]]
                            if lhs != f2:
                                raise AssertionError(
                                    f"face map not equivariant at degree {n}")

    def fixed_points(self, P: PermGroup):
        """The P-fixed subcomplex (no action), with index maps back into
        this complex."""
        if not P.generators:
            keep = [list(range(len(lvl))) for lvl in self.cells]
        else:
            actions = [self.action(g) for g in P.generators]
            keep = []
            for n in range(len(self.cells)):
                keep.append([i for i in range(len(self.cells[n]))
                             if all(a[n][i] == i for a in actions)])
        old2new = [{old: new for new, old in enumerate(lvl)} for lvl in keep]
        cells = [[self.cells[n][i] for i in lvl] for n, lvl in enumerate(keep)]
        faces = []
        for n in range(len(self.cells)):
            level = []
            for k in range(len(self.faces[n])):
                row = []
                for i in keep[n]:
                    f = self.faces[n][k][i]
                    row.append(None if f is None else old2new[n - 1][f])
                level.append(row)
            faces.append(level)
        vertices = [[tuple(old2new[0][v] for v in self.vertices[n][i])
                     for i in keep[n]] for n in range(len(self.cells))]
        sub = Complex(cells, faces, vertices, group=None,
                      truncated=self.truncated,
                      label=f"{self.label}^P")
        return sub, keep


class CMap:
    """A map of complexes at the normalized-chain level: per cell either
    (sign, target cell) or None (collapsed)."""

    def __init__(self, source: Complex, target: Complex, cell_map,
                 label: str = ""):
        self.source = source
        self.target = target
        self.cell_map = cell_map
        self.label = label

    def check_equivariant(self) -> None:
        G = self.source.group
        if G is None or self.target.group is None:
            return
        for g in G.generators:
            sa = self.source.action(g)
            ta = self.target.action(g)
            for n in range(len(self.source.cells)):
                for i in range(len(self.source.cells[n])):
                    im = self.cell_map[n][i]
                    im_g = self.cell_map[n][sa[n][i]]
                    if im is None:
                        if im_g is not None:
                            raise AssertionError("map not equivariant")
                    else:
                        s, t = im
                        if im_g != (s, ta[n][t]):
                            raise AssertionError("map not equivariant")

    def restrict(self, P: PermGroup):
        """Restriction to the P-fixed subcomplexes."""
        src, keep_s = self.source.fixed_points(P)
        tgt, keep_t = self.target.fixed_points(P)
        t_old2new = [{old: new for new, old in enumerate(lvl)}
                     for lvl in keep_t]
        cmap = []
        for n in range(len(src.cells)):
            row = []
            for i in keep_s[n]:
                im = self.cell_map[n][i] if n < len(self.cell_map) else None
                if im is None:
                    row.append(None)
                else:
                    s, t = im
                    row.append((s, t_old2new[n][t]))
            cmap.append(row)
        return CMap(src, tgt, cmap, label=f"{self.label}^P")


def _parity(perm_positions) -> int:
    seen = [False] * len(perm_positions)
    sign = 1
    for i in range(len(perm_positions)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm_positions[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def simplicial_extension(source: Complex, target: Complex,
                         vertex_map: dict[int, int], label="") -> CMap:
    """Extend a vertex map to a chain map, collapsing repeated vertices
    and orienting by the sort permutation.  The target must have its
    cells determined by vertex sets (order-complex style)."""
    tgt_lookup = [
        {frozenset(target.vertices[n][i]): i
         for i in range(len(target.cells[n]))}
        for n in range(len(target.cells))]
    cell_map = []
    for n in range(len(source.cells)):
        row: list[Optional[tuple[int, int]]] = []
        for i in range(len(source.cells[n])):
            imgs = [vertex_map[v] for v in source.vertices[n][i]]
            if len(set(imgs)) != len(imgs):
                row.append(None)
                continue
            if n >= len(target.cells):
                raise AssertionError("image dimension exceeds target")
            key = frozenset(imgs)
            t = tgt_lookup[n].get(key)
            if t is None:
                raise AssertionError(
                    f"image of cell is not a cell of the target ({label})")
            order = {v: k for k, v in enumerate(target.vertices[n][t])}
            sign = _parity([order[v] for v in imgs])
            row.append((sign, t))
        cell_map.append(row)
    return CMap(source, target, cell_map, label=label)


# -- order complex and subdivision -----------------------------------------

def order_complex(coll: Collection) -> Complex:
    """Nerve of the poset of member subgroups: n-cells are the strict
    chains of length n+1 with the conjugation action."""
    G = coll.group
    members = sorted(coll.member_sets(), key=_set_key)
    m_idx = {s: i for i, s in enumerate(members)}
    less = [[i != j and s < t for j, t in enumerate(members)]
            for i, s in enumerate(members)]
    levels = [[(i,) for i in range(len(members))]]
    while True:
        nxt = []
        for ch in levels[-1]:
            for j in range(len(members)):
                if less[ch[-1]][j]:
                    nxt.append(ch + (j,))
        if not nxt:
            break
        levels.append(sorted(nxt))
    faces = [[]]
    for n in range(1, len(levels)):
        idx = {c: i for i, c in enumerate(levels[n - 1])}
        lvl = []
        for k in range(n + 1):
            lvl.append([idx[c[:k] + c[k + 1:]] for c in levels[n]])
        faces.append(lvl)
    vertices = [[c for c in lvl] for lvl in levels]

    def act_fn(g: Perm):
        # left conjugation action: m |-> g m g^-1
        ginv = g.inv()
        vperm = [m_idx[frozenset(g * p * ginv for p in members[i])]
                 for i in range(len(members))]
        out = []
        for n, lvl in enumerate(levels):
            idx = {c: i for i, c in enumerate(lvl)}
            out.append([idx[tuple(vperm[v] for v in c)] for c in lvl])
        return out

    cx = Complex(levels, faces, vertices, group=G, act_fn=act_fn,
                 label=f"|{coll.label}|")
    cx.member_sets = members
    return cx


def subdivision_space(coll: Collection) -> tuple[Complex, CMap]:
    """The order complex of the poset of chains, with the map sending a
    chain to its minimal subgroup."""
    base = order_complex(coll)
    chains = [c for lvl in base.cells for c in lvl]
    chains.sort(key=lambda c: (len(c), c))
    c_idx = {c: i for i, c in enumerate(chains)}
    csets = [frozenset(c) for c in chains]
    less = [[i != j and csets[i] < csets[j] for j in range(len(chains))]
            for i in range(len(chains))]
    levels = [[(i,) for i in range(len(chains))]]
    while True:
        nxt = []
        for fl in levels[-1]:
            for j in range(len(chains)):
                if less[fl[-1]][j]:
                    nxt.append(fl + (j,))
        if not nxt:
            break
        levels.append(sorted(nxt))
    faces = [[]]
    for n in range(1, len(levels)):
        idx = {c: i for i, c in enumerate(levels[n - 1])}
        lvl = []
        for k in range(n + 1):
            lvl.append([idx[c[:k] + c[k + 1:]] for c in levels[n]])
        faces.append(lvl)
    vertices = [[fl for fl in lvl] for lvl in levels]

    base_act_cache = {}

    def act_fn(g: Perm):
        if g.img not in base_act_cache:
            base_act_cache[g.img] = base.action(g)
        bact = base_act_cache[g.img]
        cperm = []
        for c in chains:
            n = len(c) - 1
            moved = base.cells[n][bact[n][base.index[n][c]]]
            cperm.append(c_idx[moved])
        out = []
        for n, lvl in enumerate(levels):
            idx = {c: i for i, c in enumerate(lvl)}
            out.append([idx[tuple(sorted(cperm[v] for v in fl))]
                        for fl in lvl])
        return out

    sd = Complex(levels, faces, vertices, group=coll.group, act_fn=act_fn,
                 label=f"sd({coll.label})")
    vertex_map = {i: chains[i][0] for i in range(len(chains))}
    sd_to_c = simplicial_extension(sd, base, vertex_map, label="sd->C")
    return sd, sd_to_c, base


# -- transport nerves --------------------------------------------------------

@dataclass
class GSetData:
    """A transitive G-set presented by coset representatives."""
    points: list            # sorted minimal coset representatives (Perm)
    point_index: dict       # element image tuple -> point index
    subgroup: PermGroup     # the stabilizer of the base point

    @staticmethod
    def cosets(G: PermGroup, H: PermGroup) -> "GSetData":
        els = sorted(G.elements())
        hset = sorted(H.element_set())
        index = {}
        points = []
        for x in els:
            if x.img in index:
                continue
            coset = sorted(x * h for h in hset)
            rep = coset[0]
            i = len(points)
            points.append(rep)
            for y in coset:
                index[y.img] = i
        return GSetData(points, index, H)

    def act(self, g: Perm, i: int) -> int:
        """Left translation x |-> g x on coset labels."""
        return self.point_index[(g * self.points[i]).img]

    def map_by_right(self, g: Perm, target: "GSetData", i: int) -> int:
        """x H |-> x g K."""
        return target.point_index[(self.points[i] * g).img]


def transport_nerve(G: PermGroup, cat: FinCategory, gsets: list[GSetData],
                    mor_point_maps: list[list[int]], d: int,
                    label: str = "") -> Complex:
    """Nerve of the transport category of a diagram of G-sets over cat,
    truncated at dimension d.  Cells are (chain of non-identity
    morphisms, point of the first object's G-set); composing two chain
    entries to an identity collapses the face."""
    nonid = [m.idx for m in cat.morphisms if not cat.is_identity_mor(m.idx)]
    chains = [[()]]
    for n in range(1, d + 1):
        lvl = []
        for ch in chains[-1]:
            for f in nonid:
                if not ch:
                    lvl.append((f,))
                elif cat.morphisms[ch[-1]].dst == cat.morphisms[f].src:
                    lvl.append(ch + (f,))
        chains.append(lvl)

    cells = []
    for n in range(d + 1):
        lvl = []
        if n == 0:
            for o in range(len(cat.objects)):
                for x in range(len(gsets[o].points)):
                    lvl.append((o, (), x))
        else:
            for ch in chains[n]:
                src = cat.morphisms[ch[0]].src
                for x in range(len(gsets[src].points)):
                    lvl.append((src, ch, x))
        cells.append(sorted(lvl))
    index = [{c: i for i, c in enumerate(lvl)} for lvl in cells]

    def push(ch_src, f, x):
        return mor_point_maps[f][x]

    faces = [[]]
    for n in range(1, d + 1):
        lvl = []
        for k in range(n + 1):
            row = []
            for (src, ch, x) in cells[n]:
                if k == 0:
                    if n == 1:
                        dst = cat.morphisms[ch[0]].dst
                        cell = (dst, (), push(src, ch[0], x))
                    else:
                        cell = (cat.morphisms[ch[0]].dst, ch[1:],
                                push(src, ch[0], x))
                    row.append(index[n - 1][cell])
                elif k == n:
                    if n == 1:
                        cell = (src, (), x)
                    else:
                        cell = (src, ch[:-1], x)
                    row.append(index[n - 1][cell])
                else:
                    comp = cat.compose(ch[k - 1], ch[k])
                    if cat.is_identity_mor(comp):
                        row.append(None)
                    else:
                        cell = (src, ch[:k - 1] + (comp,) + ch[k + 1:], x)
                        row.append(index[n - 1][cell])
            lvl.append(row)
        faces.append(lvl)

    vertices = [[(i,) for i in range(len(cells[0]))]]
    for n in range(1, d + 1):
        lvl = []
        for (src, ch, x) in cells[n]:
            verts = [index[0][(src, (), x)]]
            o, p = src, x
            for f in ch:
                p = push(o, f, p)
                o = cat.morphisms[f].dst
                verts.append(index[0][(o, (), p)])
            lvl.append(tuple(verts))
        vertices.append(lvl)

    def act_fn(g: Perm):
        out = []
        for n in range(d + 1):
            row = []
            for (src, ch, x) in cells[n]:
                row.append(index[n][(src, ch, gsets[src].act(g, x))])
            out.append(row)
        return out

    return Complex(cells, faces, vertices, group=G, act_fn=act_fn,
                   truncated=True, label=label)


def eo_space(G: PermGroup, coll: Collection, d: int):
    """Transport model of the orbit-category space, the map to the order
    complex sending a point to its stabilizer, and the categories used."""
    if d < 1:
        raise ValueError("truncation dimension must be >= 1")
    cat = orbit_category(G, coll)
    reps = cat.labels["reps"]
    gsets = [GSetData.cosets(G, H) for H in reps]
    mor_maps = []
    for m in cat.morphisms:
        src, dst = gsets[m.src], gsets[m.dst]
        mor_maps.append([src.map_by_right(m.rep, dst, i)
                         for i in range(len(src.points))])
    eo = transport_nerve(G, cat, gsets, mor_maps, d,
                         label=f"EO({coll.label})")
    base = order_complex(coll)
    members = base.member_sets
    m_idx = {s: i for i, s in enumerate(members)}
    vmap = {}
    for i, (o, _, x) in enumerate(eo.cells[0]):
        rep = gsets[o].points[x]
        stab = frozenset(rep * h * rep.inv()
                         for h in reps[o].element_set())
        vmap[i] = m_idx[stab]
    eo_to_c = simplicial_extension(eo, base, vmap, label="EO->C")
    return eo, eo_to_c, base, cat


def ef_space(G: PermGroup, coll: Collection, d: int):
    """Transport model over the opposite fusion category, with vertex
    G-sets G/C_G(H), and the map sending an inclusion to its image."""
    if d < 1:
        raise ValueError("truncation dimension must be >= 1")
    fuse = fusion_category(G, coll)
    reps = fuse.labels["reps"]
    cat = fuse.op()
    cents = [centralizer(G, H) for H in reps]
    gsets = [GSetData.cosets(G, C) for C in cents]
    mor_maps = []
    for m in cat.morphisms:
        # op morphism K -> H for a fusion morphism phi_g: H -> K
        src, dst = gsets[m.src], gsets[m.dst]
        ginv = m.rep.inv()
        mor_maps.append([src.map_by_right(ginv, dst, i)
                         for i in range(len(src.points))])
    ef = transport_nerve(G, cat, gsets, mor_maps, d,
                         label=f"EF({coll.label})")
    base = order_complex(coll)
    members = base.member_sets
    m_idx = {s: i for i, s in enumerate(members)}
    vmap = {}
    for i, (o, _, x) in enumerate(ef.cells[0]):
        rep = gsets[o].points[x]
        image = frozenset(rep * h * rep.inv()
                          for h in reps[o].element_set())
        vmap[i] = m_idx[image]
    ef_to_c = simplicial_extension(ef, base, vmap, label="EF->C")
    return ef, ef_to_c, base, cat


def order_complex_inclusion(small: Complex, big: Complex) -> CMap:
    """Inclusion |C'| -> |C| for a subcollection, matching member sets."""
    m_idx = {s: i for i, s in enumerate(big.member_sets)}
    vmap = {i: m_idx[s] for i, s in enumerate(small.member_sets)}
    return simplicial_extension(small, big, vmap, label="inclusion")


def transport_inclusion(G: PermGroup, small: Complex, small_cat: FinCategory,
                        big: Complex, big_cat: FinCategory,
                        label="") -> CMap:
    """Inclusion of transport nerves induced by a full inclusion of the
    underlying categories (matching object reps by element sets and
    morphisms by canonical coset representatives)."""
    sreps = small_cat.labels["reps"]
    breps = big_cat.labels["reps"]
    obj_map = {}
    for i, H in enumerate(sreps):
        key = H.element_set()
        obj_map[i] = next(j for j, K in enumerate(breps)
                          if K.element_set() == key)
    mor_map = {}
    big_by_key = {(m.src, m.dst, m.rep.img): m.idx for m in big_cat.morphisms}
    for m in small_cat.morphisms:
        mor_map[m.idx] = big_by_key[
            (obj_map[m.src], obj_map[m.dst], m.rep.img)]
    cell_map = []
    for n in range(len(small.cells)):
        row = []
        for (src, ch, x) in small.cells[n]:
            cell = (obj_map[src], tuple(mor_map[f] for f in ch), x)
            row.append((1, big.index[n][cell]))
        cell_map.append(row)
    return CMap(small, big, cell_map, label=label)


def identity_map(X: Complex) -> CMap:
    cmap = [[(1, i) for i in range(len(lvl))] for lvl in X.cells]
    return CMap(X, X, cmap, label="id")


# -- poset contraction certificates -----------------------------------------

@dataclass(frozen=True)
class FinPoset:
    labels: tuple
    leq: tuple  # leq[i][j] iff element i <= element j

    def __len__(self):
        return len(self.labels)

    @staticmethod
    def from_sets(sets) -> "FinPoset":
        sets = list(sets)
        leq = tuple(tuple(s <= t for t in sets) for s in sets)
        return FinPoset(tuple(sets), leq)

    def lub(self, i: int, j: int) -> Optional[int]:
        uppers = [k for k in range(len(self)) if self.leq[i][k]
                  and self.leq[j][k]]
        for k in uppers:
            if all(self.leq[k][u] for u in uppers):
                return k
        return None

    def glb(self, i: int, j: int) -> Optional[int]:
        lowers = [k for k in range(len(self)) if self.leq[k][i]
                  and self.leq[k][j]]
        for k in lowers:
            if all(self.leq[u][k] for u in lowers):
                return k
        return None


@dataclass(frozen=True)
class ContractionCertificate:
    """Order-preserving self-maps from the identity to a constant, each
    adjacent pair pointwise comparable."""
    maps: tuple  # tuple of tuples: maps[m][i] = image of element i


def validate_certificate(cert: ContractionCertificate,
                         poset: FinPoset) -> tuple[bool, str]:
    n = len(poset)
    maps = cert.maps
    if not maps:
        return False, "empty certificate"
    if list(maps[0]) != list(range(n)):
        return False, "first map is not the identity"
    if len(set(maps[-1])) != 1:
        return False, "last map is not constant"
    for m, f in enumerate(maps):
        for i in range(n):
            for j in range(n):
                if poset.leq[i][j] and not poset.leq[f[i]][f[j]]:
                    return False, f"map {m} not order-preserving at ({i},{j})"
    for m in range(len(maps) - 1):
        f, g = maps[m], maps[m + 1]
        for i in range(n):
            if not (poset.leq[f[i]][g[i]] or poset.leq[g[i]][f[i]]):
                return False, f"maps {m},{m + 1} incomparable at {i}"
    return True, "ok"


def find_contraction(poset: FinPoset):
    """Search for a contraction: a global max or min cone, else a join or
    meet with a fixed element.  Returns (certificate or None, status)."""
    n = len(poset)
    if n == 0:
        return None, "empty"
    ident = tuple(range(n))
    for m in range(n):
        if all(poset.leq[i][m] for i in range(n)):
            return ContractionCertificate((ident, (m,) * n)), "max"
        if all(poset.leq[m][i] for i in range(n)):
            return ContractionCertificate((ident, (m,) * n)), "min"
    for o in range(n):
        joins = [poset.lub(i, o) for i in range(n)]
        if all(j is not None for j in joins):
            cert = ContractionCertificate(
                (ident, tuple(joins), (o,) * n))
            ok, _ = validate_certificate(cert, poset)
            if ok:
                return cert, f"join with {o}"
        meets = [poset.glb(i, o) for i in range(n)]
        if all(m is not None for m in meets):
            cert = ContractionCertificate(
                (ident, tuple(meets), (o,) * n))
            ok, _ = validate_certificate(cert, poset)
            if ok:
                return cert, f"meet with {o}"
    return None, "no contraction found"


def fixed_point_poset(coll: Collection, Q: PermGroup) -> FinPoset:
    """The poset of members normalized by Q (the vertex poset of the
    Q-fixed order complex)."""
    qgens = Q.generators
    fixed = []
    for s in sorted(coll.member_sets(), key=_set_key):
        ginvs = [g.inv() for g in qgens]
        if all(frozenset(gi * p * g for p in s) == s
               for g, gi in zip(qgens, ginvs)):
            fixed.append(s)
    return FinPoset.from_sets(fixed)
