"""Permutations on the points 1..n, with disjoint-cycle parsing and printing.

Points are 1-based everywhere; a permutation is stored as the tuple of
images (img[i] is the image of the point i+1).  Multiplication is
left-to-right: (p * q)(x) = q(p(x)), so that conjugation h ** g = g^-1 h g
is a right action and (x^p)^q = x^(p*q) on points.
"""

from __future__ import annotations

import re
from functools import reduce


class InvalidPermutation(ValueError):
    """The supplied images are not a bijection on {1..degree}."""


class Perm:
    __slots__ = ("img",)

    def __init__(self, img):
        img = tuple(img)
        n = len(img)
        seen = [False] * (n + 1)
        for i in img:
            if not isinstance(i, int) or i < 1 or i > n or seen[i]:
                raise InvalidPermutation(f"not a bijection on 1..{n}: {img!r}")
            seen[i] = True
        self.img = img

    @property
    def degree(self) -> int:
        return len(self.img)

    def __call__(self, point: int) -> int:
        return self.img[point - 1]

    def __mul__(self, other: "Perm") -> "Perm":
        q = other.img
        p = object.__new__(Perm)
        p.img = tuple(q[i - 1] for i in self.img)
        return p

    def inv(self) -> "Perm":
        out = [0] * len(self.img)
        for i, j in enumerate(self.img):
            out[j - 1] = i + 1
        p = object.__new__(Perm)
        p.img = tuple(out)
        return p

    def __pow__(self, g: "Perm") -> "Perm":
        """Conjugate self by g: returns g^-1 * self * g."""
        return g.inv() * self * g

    def is_identity(self) -> bool:
        return all(i == j + 1 for j, i in enumerate(self.img))

    def order(self) -> int:
        n = 1
        p = self
        while not p.is_identity():
            p = p * self
            n += 1
        return n

    def cycles(self):
        """Nontrivial cycles, each rotated to start at its least point."""
        seen = set()
        out = []
        for i in range(1, len(self.img) + 1):
            if i in seen or self(i) == i:
                continue
            cyc = [i]
            j = self(i)
            while j != i:
                seen.add(j)
                cyc.append(j)
                j = self(j)
            out.append(tuple(cyc))
        return out

    def cycle_type(self):
        """Sorted multiset of cycle lengths, fixed points included."""
        lens = sorted(len(c) for c in self.cycles())
        fixed = len(self.img) - sum(lens)
        return tuple([1] * fixed + lens)

    def __eq__(self, other):
        return isinstance(other, Perm) and self.img == other.img

    def __lt__(self, other):
        return self.img < other.img

    def __le__(self, other):
        return self.img <= other.img

    def __hash__(self):
        return hash(self.img)

    def __repr__(self):
        return f"Perm.parse({str(self)!r}, degree={self.degree})"

    def __str__(self):
        cycs = self.cycles()
        if not cycs:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cycs)

    @staticmethod
    def identity(degree: int) -> "Perm":
        p = object.__new__(Perm)
        p.img = tuple(range(1, degree + 1))
        return p

    @staticmethod
    def from_cycles(degree: int, cycles) -> "Perm":
        img = list(range(1, degree + 1))
        for cyc in cycles:
            for a in cyc:
                if not 1 <= a <= degree:
                    raise InvalidPermutation(f"point {a} outside 1..{degree}")
            if len(set(cyc)) != len(cyc):
                raise InvalidPermutation(f"repeated point in cycle {cyc}")
            for a, b in zip(cyc, cyc[1:]):
                img[a - 1] = b
            if cyc:
                img[cyc[-1] - 1] = cyc[0]
        return Perm(img)

    _CYCLE_RE = re.compile(r"\(\s*([0-9][0-9\s,]*)?\)")

    @staticmethod
    def parse(text: str, degree: int = 0) -> "Perm":
        """Parse disjoint-cycle notation like '(1 2 3)(4 5)'.

        Cycles need not be disjoint; they are applied left to right.
        The degree grows to fit the largest point mentioned.
        """
        stripped = text.strip()
        if stripped in ("()", "e", "id", ""):
            return Perm.identity(degree)
        cycles = []
        pos = 0
        for m in Perm._CYCLE_RE.finditer(stripped):
            if stripped[pos:m.start()].strip():
                raise InvalidPermutation(f"cannot parse {text!r}")
            body = m.group(1)
            if body:
                cycles.append([int(t) for t in re.split(r"[,\s]+", body.strip())])
            pos = m.end()
        if stripped[pos:].strip() or not cycles:
            raise InvalidPermutation(f"cannot parse {text!r}")
        degree = max(degree, max(max(c) for c in cycles))
        return reduce(
            lambda p, q: p * q,
            (Perm.from_cycles(degree, [c]) for c in cycles),
        )


def product(perms, degree: int) -> Perm:
    """Product of a sequence of permutations, identity if empty."""
    out = Perm.identity(degree)
    for p in perms:
        out = out * p
    return out
