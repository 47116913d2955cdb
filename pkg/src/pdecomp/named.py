"""Named-group library and the text file format for groups.

Identifiers: ``S<n>``, ``A<n>``, ``C<n>``, ``D<2n>`` (dihedral, order 2n),
and ``PSL3_7`` acting on the 57 points of the projective plane over F_7.

Group files are plain text::

    degree N
    gen (1 2 3)(4 5)
    gen (1 2)
    # comments and blank lines are ignored
"""

from __future__ import annotations

import re

from .perms import Perm
from .groups import PermGroup


class InputError(ValueError):
    """Malformed group file or unknown group name."""


def symmetric(n: int) -> PermGroup:
    if n < 1:
        raise InputError("S<n> needs n >= 1")
    gens = []
    if n >= 2:
        gens.append(Perm.from_cycles(n, [(1, 2)]))
    if n >= 3:
        gens.append(Perm.from_cycles(n, [tuple(range(1, n + 1))]))
    return PermGroup(n, gens, name=f"S{n}")


def alternating(n: int) -> PermGroup:
    if n < 3:
        return PermGroup(max(n, 1), [], name=f"A{n}")
    gens = [Perm.from_cycles(n, [(1, 2, 3)])]
    if n >= 4:
        cyc = tuple(range(1, n + 1)) if n % 2 else tuple(range(2, n + 1))
        gens.append(Perm.from_cycles(n, [cyc]))
    return PermGroup(n, gens, name=f"A{n}")


def cyclic(n: int) -> PermGroup:
    if n < 1:
        raise InputError("C<n> needs n >= 1")
    if n == 1:
        return PermGroup(1, [], name="C1")
    return PermGroup(n, [Perm.from_cycles(n, [tuple(range(1, n + 1))])],
                     name=f"C{n}")


def dihedral(order: int) -> PermGroup:
    """Dihedral group of the given (even) order, acting on order/2 points."""
    if order % 2 or order < 2:
        raise InputError("D<m> needs even m >= 2")
    n = order // 2
    if n == 1:
        return PermGroup(2, [Perm.from_cycles(2, [(1, 2)])], name="D2")
    rot = Perm.from_cycles(n, [tuple(range(1, n + 1))])
    refl = Perm(tuple(n - i + 1 for i in range(1, n + 1)))
    return PermGroup(n, [rot, refl], name=f"D{order}")


# -- PSL(3, 7) on the projective plane ------------------------------------

_Q = 7


def _pg2_points(q: int = _Q):
    """Points of PG(2, q) as normalized column vectors (first nonzero = 1),
    sorted lexicographically; 1-based index order is the sort order."""
    pts = []
    for a in range(q):
        for b in range(q):
            for c in range(q):
                v = (a, b, c)
                if v == (0, 0, 0):
                    continue
                lead = next(x for x in v if x)
                inv = pow(lead, q - 2, q)
                if tuple((x * inv) % q for x in v) == v:
                    pts.append(v)
    return sorted(pts)


def _matrix_perm(m, pts, index, q: int = _Q) -> Perm:
    img = []
    for v in pts:
        w = (
            (m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2]) % q,
            (m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2]) % q,
            (m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2]) % q,
        )
        lead = next(x for x in w if x)
        inv = pow(lead, q - 2, q)
        img.append(index[tuple((x * inv) % q for x in w)])
    return Perm(img)


def _unitriangular(e12=0, e13=0, e23=0):
    return ((1, e12, e13), (0, 1, e23), (0, 0, 1))


def psl3_7() -> PermGroup:
    """PSL(3,7) on 57 points, generated by a transvection and a 3-cycle
    of coordinates."""
    pts = _pg2_points()
    index = {v: i + 1 for i, v in enumerate(pts)}
    t = _matrix_perm(_unitriangular(e12=1), pts, index)
    c = _matrix_perm(((0, 0, 1), (1, 0, 0), (0, 1, 0)), pts, index)
    return PermGroup(57, [t, c], name="PSL3_7")


def psl3_7_named_subgroups(G: PermGroup | None = None) -> dict[str, PermGroup]:
    """The two displayed rank-two elementary abelian unipotent subgroups
    and their order-7 intersection, as subgroups of psl3_7().

    ``B-witness-1`` fixes row-1 additions (entries (1,2),(1,3) free),
    ``B-witness-2`` column-3 additions ((1,3),(2,3) free), and
    ``center-intersection`` is the (1,3) root subgroup they share.
    """
    if G is None:
        G = psl3_7()
    pts = _pg2_points()
    index = {v: i + 1 for i, v in enumerate(pts)}

    def up(**kw):
        return _matrix_perm(_unitriangular(**kw), pts, index)

    return {
        "B-witness-1": G.subgroup([up(e12=1), up(e13=1)], name="B-witness-1"),
        "B-witness-2": G.subgroup([up(e13=1), up(e23=1)], name="B-witness-2"),
        "center-intersection": G.subgroup([up(e13=1)],
                                          name="center-intersection"),
    }


_NAME_RE = re.compile(r"^(S|A|C|D)(\d+)$")


def resolve(name: str) -> PermGroup:
    """Resolve a named-group identifier."""
    if name == "PSL3_7":
        return psl3_7()
    m = _NAME_RE.match(name)
    if not m:
        raise InputError(f"unknown group name {name!r}")
    kind, n = m.group(1), int(m.group(2))
    if kind == "S":
        return symmetric(n)
    if kind == "A":
        return alternating(n)
    if kind == "C":
        return cyclic(n)
    return dihedral(n)


def parse_group_file(text: str, name: str = "") -> PermGroup:
    degree = None
    gens = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("degree"):
            try:
                degree = int(line.split()[1])
            except (IndexError, ValueError):
                raise InputError(f"line {lineno}: bad degree line {raw!r}")
        elif line.startswith("gen"):
            if degree is None:
                raise InputError(f"line {lineno}: gen before degree")
            body = line[3:].strip()
            try:
                gens.append(Perm.parse(body, degree))
            except ValueError as e:
                raise InputError(f"line {lineno}: {e}")
            if gens[-1].degree != degree:
                raise InputError(
                    f"line {lineno}: cycle mentions point beyond degree")
        else:
            raise InputError(f"line {lineno}: unrecognized line {raw!r}")
    if degree is None:
        raise InputError("missing 'degree N' line")
    return PermGroup(degree, gens, name=name)


def load_group(source: str) -> PermGroup:
    """Resolve a named group, else read a group file at the given path."""
    try:
        return resolve(source)
    except InputError:
        pass
    try:
        with open(source, "r", encoding="utf-8") as fh:
            return parse_group_file(fh.read(), name=source)
    except OSError as e:
        raise InputError(f"cannot load group {source!r}: {e}")
