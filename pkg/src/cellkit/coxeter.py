"""
Finite Coxeter systems realised with exact arithmetic.

Elements are enumerated once, indexed in ShortLex order of their canonical
reduced words, and from then on every element is just an integer index.
Generators are numbered from 1 in labels (so ``"1213"`` is s1 s2 s1 s3) and
from 0 in every table.

>>> W = build_system("B3")
>>> W.order, W.label(W.w0)
(48, '121232123')
>>> W.label(W.multiply(W.element("12"), W.element("3")))
'123'
"""

from __future__ import annotations

import hashlib
import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NewType, Sequence

import numpy as np

__all__ = [
    "Element", "CoxeterSpec", "CoxeterSystem", "parse_spec", "build_system",
    "coxeter_matrix", "degrees", "BRUHAT_MATRIX_LIMIT",
]

# index of a group element inside its CoxeterSystem; 0 is the identity
Element = NewType("Element", int)

# the Bruhat order is stored as a dense boolean matrix up to this order
BRUHAT_MATRIX_LIMIT = 4000

_SPEC_RE = re.compile(r"^\s*(?:([ABD])(\d+)|(F)4|(H)([34])|I2\((\d+)\))\s*$")


@dataclass(frozen=True)
class CoxeterSpec:
    """A finite Coxeter type, e.g. ``CoxeterSpec("B", 3)``."""
    family: str
    rank: int
    dihedral_order: int | None = None

    def __post_init__(self):
        f, n = self.family, self.rank
        ok = (
            (f == "A" and n >= 1)
            or (f == "B" and n >= 2)
            or (f == "D" and n >= 4)
            or (f == "F4" and n == 4)
            or (f == "H3" and n == 3)
            or (f == "H4" and n == 4)
            or (f == "I2" and n == 2 and self.dihedral_order is not None
                and self.dihedral_order >= 3)
        )
        if not ok:
            raise ValueError(f"unsupported Coxeter type {f!r} of rank {n} "
                             f"(dihedral order {self.dihedral_order})")
        if f != "I2" and self.dihedral_order is not None:
            raise ValueError("dihedral_order only makes sense for I2")

    def __str__(self):
        if self.family == "I2":
            return f"I2({self.dihedral_order})"
        if self.family in ("F4", "H3", "H4"):
            return self.family
        return f"{self.family}{self.rank}"


def parse_spec(spec: str | CoxeterSpec) -> CoxeterSpec:
    """
    Parse ``"A<n>"``, ``"B<n>"``, ``"D<n>"``, ``"F4"``, ``"H3"``, ``"H4"`` or
    ``"I2(<n>)"``.

    >>> parse_spec("I2(5)")
    CoxeterSpec(family='I2', rank=2, dihedral_order=5)
    """
    if isinstance(spec, CoxeterSpec):
        return spec
    m = _SPEC_RE.match(spec)
    if m is None:
        raise ValueError(f"cannot parse Coxeter type {spec!r}; expected one of "
                         "A<n>, B<n>, D<n>, F4, H3, H4, I2(<n>)")
    fam, n, f4, h, hn, i2 = m.groups()
    if fam:
        return CoxeterSpec(fam, int(n))
    if f4:
        return CoxeterSpec("F4", 4)
    if h:
        return CoxeterSpec("H" + hn, int(hn))
    return CoxeterSpec("I2", 2, int(i2))


def coxeter_matrix(spec: CoxeterSpec) -> np.ndarray:
    """Coxeter matrix with the diagram labelled as in Bourbaki (B: 1 =4= 2 - 3 ...)."""
    n = spec.rank
    m = np.full((n, n), 2, dtype=int)
    np.fill_diagonal(m, 1)

    def bond(i, j, k):
        m[i, j] = m[j, i] = k

    f = spec.family
    if f == "I2":
        bond(0, 1, spec.dihedral_order)
    elif f == "A":
        for i in range(n - 1):
            bond(i, i + 1, 3)
    elif f == "B":
        bond(0, 1, 4)
        for i in range(1, n - 1):
            bond(i, i + 1, 3)
    elif f == "D":
        for i in range(n - 2):
            bond(i, i + 1, 3)
        bond(n - 3, n - 1, 3)
    elif f == "F4":
        bond(0, 1, 3)
        bond(1, 2, 4)
        bond(2, 3, 3)
    elif f in ("H3", "H4"):
        bond(0, 1, 5)
        for i in range(1, n - 1):
            bond(i, i + 1, 3)
    return m


def degrees(spec: CoxeterSpec) -> list[int]:
    """Degrees of the basic invariants; |W| is their product."""
    n, f = spec.rank, spec.family
    if f == "A":
        return list(range(2, n + 2))
    if f == "B":
        return list(range(2, 2 * n + 1, 2))
    if f == "D":
        return sorted(list(range(2, 2 * n - 1, 2)) + [n])
    if f == "I2":
        return [2, spec.dihedral_order]
    return {"F4": [2, 6, 8, 12], "H3": [2, 6, 10], "H4": [2, 12, 20, 30]}[f]


# -- exact arithmetic in Z[r] with r^2 = p + q r -------------------------------
#
# 2cos(pi/m) is 0, 1, sqrt2, phi, sqrt3 for m = 2..6; phi^2 = 1 + phi.

_QUADRATIC = {4: (2, 0), 5: (1, 1), 6: (3, 0)}


def _times_r(x, p, q):
    a, b = x
    return (b * p, a + b * q)


def _orbit_tables(mat: np.ndarray):
    """BFS over the orbit of a chamber vector; returns (left table, lengths)."""
    n = len(mat)
    irrational = {int(k) for k in mat.flat if int(k) > 3}
    if len(irrational) > 1:
        raise ValueError("at most one irrational bond label is supported")
    p, q = _QUADRATIC[irrational.pop()] if irrational else (0, 0)

    def apply(vec, j):
        cj = vec[j]
        out = list(vec)
        for i in range(n):
            if i == j:
                out[i] = (-cj[0], -cj[1])
                continue
            k = int(mat[i, j])
            if k == 2:
                continue
            add = cj if k == 3 else _times_r(cj, p, q)
            out[i] = (vec[i][0] + add[0], vec[i][1] + add[1])
        return tuple(out)

    # pairings of w(rho) with the simple roots, rho in the open chamber
    start = tuple((1, 0) for _ in range(n))
    index = {start: 0}
    vecs = [start]
    lengths = [0]
    left = []
    queue = deque([0])
    while queue:
        w = queue.popleft()
        row = []
        for j in range(n):
            u = apply(vecs[w], j)
            k = index.get(u)
            if k is None:
                k = index[u] = len(vecs)
                vecs.append(u)
                lengths.append(lengths[w] + 1)
                queue.append(k)
            row.append(k)
        left.append(row)
    return np.array(left, dtype=np.int64), np.array(lengths, dtype=np.int64)


def _dihedral_tables(m: int):
    """Left table and lengths of I2(m) from alternating words, no linear algebra."""
    # element key: (first generator, length); identity (0, 0); w0 (0, m)
    keys = [(0, 0)]
    for k in range(1, m):
        keys += [(0, k), (1, k)]
    keys.append((0, m))
    idx = {key: i for i, key in enumerate(keys)}

    def key_of(first, k):
        if k == 0 or k == m:
            return (0, k)
        return (first, k)

    left = []
    for first, k in keys:
        row = []
        for s in (0, 1):
            if k == 0:
                row.append(idx[(s, 1)])
            elif k == m:
                # w0 = s... of length m for either s; drop s
                row.append(idx[key_of(1 - s, m - 1)])
            elif first == s:
                row.append(idx[key_of(1 - s, k - 1)])
            else:
                row.append(idx[key_of(s, k + 1)])
        left.append(row)
    lengths = [k for _, k in keys]
    return np.array(left, dtype=np.int64), np.array(lengths, dtype=np.int64)


@dataclass(eq=False)
class CoxeterSystem:
    """
    An enumerated finite Coxeter group.

    ``left[x, s]`` is the index of s*x and ``right[x, s]`` that of x*s.
    Tables are read-only numpy arrays; the object is never mutated after
    :func:`build_system` returns (the cached properties are pure).
    """
    spec: CoxeterSpec
    coxeter_matrix: np.ndarray
    words: list[tuple[int, ...]]
    lengths: np.ndarray
    left: np.ndarray
    right: np.ndarray
    inverse: np.ndarray
    _label_index: dict[str, int] = field(repr=False, default_factory=dict)

    @property
    def rank(self) -> int:
        return self.spec.rank

    @property
    def order(self) -> int:
        return len(self.words)

    def __len__(self):
        return len(self.words)

    @property
    def identity(self) -> Element:
        return Element(0)

    @property
    def w0(self) -> Element:
        return Element(self.order - 1)

    @property
    def generators(self) -> list[Element]:
        return [Element(int(self.left[0, s])) for s in range(self.rank)]

    # -- naming --------------------------------------------------------------

    def label(self, x: int) -> str:
        """Digits of the ShortLex reduced word; ``"e"`` for the identity."""
        w = self.words[x]
        return "".join(str(s + 1) for s in w) if w else "e"

    @cached_property
    def labels(self) -> list[str]:
        return [self.label(x) for x in range(self.order)]

    def element(self, label: str | Sequence[int]) -> Element:
        """
        Element from a label such as ``"1213"`` (any reduced word) or ``"e"``.

        A sequence of 0-based generator indices is also accepted.
        """
        if isinstance(label, str):
            label = label.strip()
            if label in self._label_index:
                return Element(self._label_index[label])
            if label == "e":
                return self.identity
            if not label.isdigit():
                raise ValueError(f"bad element label {label!r}")
            word = [int(c) - 1 for c in label]
        else:
            word = list(label)
        x = 0
        for s in word:
            if not 0 <= s < self.rank:
                raise ValueError(f"generator {s + 1} out of range in {label!r} "
                                 f"for {self.spec}")
            y = int(self.right[x, s])
            if self.lengths[y] < self.lengths[x]:
                raise ValueError(f"word {label!r} is not reduced in {self.spec}")
            x = y
        return Element(x)

    # -- group operations ------------------------------------------------------

    def multiply(self, x: int, y: int) -> Element:
        for s in self.words[y]:
            x = self.right[x, s]
        return Element(int(x))

    def length(self, x: int) -> int:
        return int(self.lengths[x])

    def inv(self, x: int) -> Element:
        return Element(int(self.inverse[x]))

    def descents(self, x: int, side: str = "left") -> frozenset[int]:
        """0-based generators s with l(sx) < l(x) (``side="left"``) or l(xs) < l(x)."""
        table = {"left": self.left, "right": self.right}[side]
        lx = self.lengths[x]
        return frozenset(s for s in range(self.rank) if self.lengths[table[x, s]] < lx)

    def reduced_word(self, x: int) -> tuple[int, ...]:
        """ShortLex-least reduced word, 0-based generators."""
        return self.words[x]

    def longest_element(self, subset: Iterable[int]) -> Element:
        """Longest element of the standard parabolic subgroup on ``subset`` (0-based)."""
        subset = sorted(set(subset))
        for s in subset:
            if not 0 <= s < self.rank:
                raise ValueError(f"generator {s + 1} out of range")
        x = 0
        grew = True
        while grew:
            grew = False
            for s in subset:
                y = self.left[x, s]
                if self.lengths[y] > self.lengths[x]:
                    x, grew = int(y), True
        return Element(x)

    # -- Bruhat order --------------------------------------------------------

    @cached_property
    def bruhat_matrix(self) -> np.ndarray:
        """``B[x, y]`` is True iff x <= y; rows indexed by x."""
        if self.order > BRUHAT_MATRIX_LIMIT:
            raise MemoryError(f"Bruhat matrix for |W| = {self.order} exceeds the "
                              f"{BRUHAT_MATRIX_LIMIT} element limit")
        n = self.order
        below = np.zeros((n, n), dtype=bool)  # below[y] = lower ideal of y
        below[0, 0] = True
        for y in range(1, n):
            s = self.words[y][0]
            v = self.left[y, s]
            ideal = below[v]
            # {x <= y} = {x <= sy} u s{x <= sy}
            below[y] = ideal | ideal[self.left[:, s]]
        below.setflags(write=False)
        return below.T

    def bruhat_leq(self, x: int, y: int) -> bool:
        if self.lengths[x] > self.lengths[y]:
            return False
        if self.order <= BRUHAT_MATRIX_LIMIT:
            return bool(self.bruhat_matrix[x, y])
        return self._bruhat_rec(int(x), int(y))

    def _bruhat_rec(self, x, y):
        while True:
            if x == y:
                return True
            if self.lengths[x] >= self.lengths[y]:
                return False
            s = self.words[y][0]
            sy = int(self.left[y, s])
            sx = int(self.left[x, s])
            if self.lengths[sx] < self.lengths[x]:
                x = sx
            y = sy

    # -- bookkeeping ---------------------------------------------------------

    @cached_property
    def indexing_checksum(self) -> str:
        """sha256 over the ordered label list; identifies the element indexing."""
        h = hashlib.sha256()
        h.update(str(self.spec).encode())
        for lab in self.labels:
            h.update(b"\0" + lab.encode())
        return h.hexdigest()


def build_system(spec: str | CoxeterSpec) -> CoxeterSystem:
    """Enumerate W, fix ShortLex indexing and build all Cayley tables."""
    spec = parse_spec(spec)
    mat = coxeter_matrix(spec)
    if spec.family == "I2" and spec.dihedral_order not in (3, 4, 5, 6):
        left, lengths = _dihedral_tables(spec.dihedral_order)
    else:
        left, lengths = _orbit_tables(mat)
    n = len(lengths)

    # ShortLex-least word: least left descent first, then recurse on s*x
    by_len = np.argsort(lengths, kind="stable")
    words: list[tuple[int, ...] | None] = [None] * n
    words[0] = ()
    for x in by_len[1:]:
        lx = lengths[x]
        s = next(s for s in range(len(mat)) if lengths[left[x, s]] < lx)
        words[x] = (s,) + words[left[x, s]]
    order = sorted(range(n), key=lambda x: (lengths[x], words[x]))
    new_of_old = np.empty(n, dtype=np.int64)
    new_of_old[order] = np.arange(n)

    left = new_of_old[left[order]]
    lengths = lengths[order]
    words = [words[x] for x in order]

    inverse = np.empty(n, dtype=np.int64)
    for x, w in enumerate(words):
        y = 0
        for s in w:
            y = left[y, s]
        inverse[x] = y
    right = inverse[left[inverse]]

    for a in (left, right, lengths, inverse):
        a.setflags(write=False)
    system = CoxeterSystem(spec, mat, words, lengths, left, right, inverse)
    system._label_index.update((system.label(x), x) for x in range(n))
    return system
