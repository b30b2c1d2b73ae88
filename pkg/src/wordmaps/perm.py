"""Permutations of {1, ..., n} acting on the right, plus small enumerated groups.

Points are 1-based at every public boundary (cycle notation, ``sigma(p)``,
supports) and 0-based inside ``Permutation._img``.  Composition follows the
right action: ``(sigma * tau)(p) == tau(sigma(p))``, i.e. apply sigma first.
"""
from __future__ import annotations

import math
import re
from collections import deque
from functools import lru_cache
from itertools import permutations as _iter_permutations
from typing import Iterable, Iterator, NamedTuple, Sequence

import numpy as np

from .exceptions import BudgetExceeded, InvalidInput

DEFAULT_GROUP_CAP = 20_000


class Permutation:
    """An immutable bijection of ``{1, ..., degree}``.

    >>> s = Permutation.from_cycles([(1, 2, 3)], 4)
    >>> s(1), s(3), s(4)
    (2, 1, 4)
    >>> str(s * Permutation.from_cycles([(1, 2)], 4))
    '(2 3)'
    """

    __slots__ = ("_img", "_hash")

    def __init__(self, images: Sequence[int], *, check: bool = True):
        img = tuple(images)
        if check:
            n = len(img)
            if n == 0:
                raise InvalidInput("a permutation needs degree >= 1")
            if sorted(img) != list(range(n)):
                raise InvalidInput(f"not a bijection on 0..{n - 1}: {img!r}")
        self._img = img
        self._hash = hash(img)

    # construction -------------------------------------------------------

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(range(degree))

    @classmethod
    def from_images(cls, images: Sequence[int]) -> "Permutation":
        """Build from 1-based images: ``images[p - 1]`` is the image of ``p``."""
        return cls([q - 1 for q in images])

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> "Permutation":
        img = list(range(degree))
        seen: set[int] = set()
        for cyc in cycles:
            for p in cyc:
                if not 1 <= p <= degree:
                    raise InvalidInput(f"point {p} out of range 1..{degree}")
                if p in seen:
                    raise InvalidInput(f"point {p} repeated across cycles")
                seen.add(p)
            for a, b in zip(cyc, list(cyc[1:]) + list(cyc[:1])):
                img[a - 1] = b - 1
        return cls(img, check=False)

    # basic protocol -----------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self._img)

    @property
    def images(self) -> tuple[int, ...]:
        """0-based image tuple (internal representation)."""
        return self._img

    def __call__(self, point: int) -> int:
        return self._img[point - 1] + 1

    def __eq__(self, other):
        if not isinstance(other, Permutation):
            return NotImplemented
        return self._img == other._img

    def __hash__(self):
        return self._hash

    def __lt__(self, other: "Permutation") -> bool:
        return self._img < other._img

    def __repr__(self):
        return f"Permutation({format_cycle_notation(self)!r}, degree={self.degree})"

    def __str__(self):
        return format_cycle_notation(self)

    # algebra ------------------------------------------------------------

    def __mul__(self, other: "Permutation") -> "Permutation":
        if not isinstance(other, Permutation):
            return NotImplemented
        if len(other._img) != len(self._img):
            raise InvalidInput(f"degree mismatch: {self.degree} vs {other.degree}")
        o = other._img
        return Permutation([o[x] for x in self._img], check=False)

    def inverse(self) -> "Permutation":
        inv = [0] * len(self._img)
        for p, q in enumerate(self._img):
            inv[q] = p
        return Permutation(inv, check=False)

    __invert__ = inverse

    def __pow__(self, k: int) -> "Permutation":
        # reduce the exponent modulo the order, then square-and-multiply
        k %= self.order()
        result = Permutation.identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self, rho: "Permutation") -> "Permutation":
        """Return ``rho^-1 * self * rho`` (the exponent notation ``self^rho``)."""
        return rho.inverse() * self * rho

    def is_identity(self) -> bool:
        return all(p == q for p, q in enumerate(self._img))

    def order(self) -> int:
        return math.lcm(*(len(c) for c in self.cycles(include_fixed=True)))

    def cycles(self, include_fixed: bool = False) -> list[tuple[int, ...]]:
        """Disjoint cycles (1-based), each starting at its smallest point, sorted by that point."""
        seen = [False] * len(self._img)
        out = []
        for start in range(len(self._img)):
            if seen[start]:
                continue
            cyc = []
            p = start
            while not seen[p]:
                seen[p] = True
                cyc.append(p + 1)
                p = self._img[p]
            if len(cyc) > 1 or include_fixed:
                out.append(tuple(cyc))
        return out

    def cycle_type(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycles(include_fixed=True)), reverse=True))

    def support(self) -> frozenset[int]:
        return frozenset(p + 1 for p, q in enumerate(self._img) if p != q)

    def fixed_points(self) -> frozenset[int]:
        return frozenset(p + 1 for p, q in enumerate(self._img) if p == q)

    @property
    def norm(self) -> int:
        """Unnormalised Hamming norm: the number of moved points."""
        return sum(1 for p, q in enumerate(self._img) if p != q)


# ---------------------------------------------------------------------------
# cycle notation

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycle_notation(text: str, degree: int) -> Permutation:
    """Parse ``'e'`` or a product of disjoint cycles such as ``'(1 2 3)(4, 5)'``.

    Raises :class:`InvalidInput` on out-of-range or repeated points and on
    malformed parentheses.
    """
    s = text.strip()
    if s in ("e", ""):
        if s == "":
            raise InvalidInput("empty permutation text; use 'e' for the identity")
        return Permutation.identity(degree)
    pos = 0
    cycles = []
    while pos < len(s):
        if s[pos].isspace():
            pos += 1
            continue
        m = _CYCLE_RE.match(s, pos)
        if m is None:
            raise InvalidInput(f"malformed cycle notation at position {pos}: {text!r}")
        body = m.group(1).replace(",", " ").split()
        if len(body) < 2:
            raise InvalidInput(f"a cycle needs at least two points: {m.group(0)!r}")
        try:
            cycles.append(tuple(int(tok) for tok in body))
        except ValueError:
            raise InvalidInput(f"non-integer point in {m.group(0)!r}") from None
        pos = m.end()
    return Permutation.from_cycles(cycles, degree)


def format_cycle_notation(sigma: Permutation) -> str:
    cycles = sigma.cycles()
    if not cycles:
        return "e"
    return "".join("(" + " ".join(map(str, c)) + ")" for c in cycles)


# ---------------------------------------------------------------------------
# Hamming metric


class HammingNorm(NamedTuple):
    norm: int
    support: frozenset
    fixed: frozenset
    degree: int

    @property
    def normalized(self) -> float:
        return self.norm / self.degree


def hamming_norm(sigma: Permutation) -> HammingNorm:
    supp = sigma.support()
    return HammingNorm(len(supp), supp, sigma.fixed_points(), sigma.degree)


def hamming_distance(sigma: Permutation, tau: Permutation) -> int:
    """d(sigma, tau) = ||sigma^-1 tau||, i.e. the number of points where they disagree."""
    if sigma.degree != tau.degree:
        raise InvalidInput(f"degree mismatch: {sigma.degree} vs {tau.degree}")
    return sum(1 for a, b in zip(sigma.images, tau.images) if a != b)


# ---------------------------------------------------------------------------
# numpy tables


@lru_cache(maxsize=16)
def permutation_table(n: int) -> np.ndarray:
    """All of S_n as an ``(n!, n)`` array of 0-based images, lexicographic order."""
    arr = np.array(list(_iter_permutations(range(n))), dtype=np.int64)
    arr.setflags(write=False)
    return arr


def encode_rows(rows: np.ndarray) -> np.ndarray:
    """Injective int64 code for each row of 0-based images (valid for n <= 15)."""
    n = rows.shape[-1]
    weights = n ** np.arange(n, dtype=np.int64)
    return rows @ weights


# ---------------------------------------------------------------------------
# enumerated groups


class EnumeratedGroup:
    """A permutation group stored as an explicit, ordered list of elements.

    Element order is the breadth-first insertion order produced by
    :func:`group_closure`; index 0 is the identity.
    """

    def __init__(self, degree: int, elements: Sequence[Permutation], generators: Sequence[Permutation]):
        self.degree = degree
        self.elements = tuple(elements)
        self.generators = tuple(generators)
        self._index = {g: i for i, g in enumerate(self.elements)}
        self._table = None

    def __len__(self):
        return len(self.elements)

    def __iter__(self) -> Iterator[Permutation]:
        return iter(self.elements)

    def __contains__(self, g) -> bool:
        return g in self._index

    def __repr__(self):
        gens = ", ".join(map(str, self.generators)) or "e"
        return f"EnumeratedGroup(order={len(self)}, degree={self.degree}, generators=[{gens}])"

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Permutation:
        return self.elements[0]

    def index(self, g: Permutation) -> int:
        try:
            return self._index[g]
        except KeyError:
            raise InvalidInput(f"{g} is not an element of {self!r}") from None

    def as_array(self) -> np.ndarray:
        return np.array([g.images for g in self.elements], dtype=np.int64).reshape(len(self), self.degree)

    @property
    def table(self) -> np.ndarray:
        """Multiplication table of element indices: ``table[a, b] = index(g_a * g_b)``."""
        if self._table is None:
            arr = self.as_array()
            codes = encode_rows(arr)
            order = np.argsort(codes)
            sorted_codes = codes[order]
            tab = np.empty((len(self), len(self)), dtype=np.int64)
            for a in range(len(self)):
                # row h of arr[:, arr[a]] is h applied after g_a
                prod_codes = encode_rows(arr[:, arr[a]])
                tab[a] = order[np.searchsorted(sorted_codes, prod_codes)]
            self._table = tab
        return self._table

    @property
    def inverse_index(self) -> np.ndarray:
        return np.argmin(self.table, axis=1)  # identity has index 0

    def is_abelian(self) -> bool:
        t = self.table
        return bool(np.array_equal(t, t.T))


def group_closure(
    generators: Sequence[Permutation],
    degree: int | None = None,
    cap: int = DEFAULT_GROUP_CAP,
) -> EnumeratedGroup:
    """Breadth-first closure of ``generators`` starting from the identity.

    Elements are listed in BFS insertion order, generators applied in the
    order given.  Raises :class:`BudgetExceeded` once more than ``cap``
    elements are found.
    """
    gens = list(generators)
    if gens:
        n = gens[0].degree
        if any(g.degree != n for g in gens):
            raise InvalidInput("generators must share one degree")
        if degree is not None and degree != n:
            raise InvalidInput(f"degree {degree} does not match generators of degree {n}")
    else:
        n = 1 if degree is None else degree
    ident = Permutation.identity(n)
    elements = [ident]
    seen = {ident}
    queue = deque([ident])
    while queue:
        g = queue.popleft()
        for s in gens:
            h = g * s
            if h not in seen:
                if len(elements) >= cap:
                    raise BudgetExceeded(f"group closure exceeds cap of {cap} elements")
                seen.add(h)
                elements.append(h)
                queue.append(h)
    return EnumeratedGroup(n, elements, gens)


class ConjugacyClass:
    def __init__(self, group: EnumeratedGroup, indices: Sequence[int]):
        self.group = group
        self.indices = tuple(indices)
        self.representative = group.elements[self.indices[0]]
        self.members = frozenset(group.elements[i] for i in self.indices)

    def __len__(self):
        return len(self.indices)

    def __contains__(self, g):
        return g in self.members

    def __repr__(self):
        return f"ConjugacyClass(rep={self.representative}, size={len(self)})"

    def is_trivial(self) -> bool:
        return self.representative.is_identity()


def conjugacy_classes(group: EnumeratedGroup) -> list[ConjugacyClass]:
    """Orbits of the conjugation action, ordered by their first element index."""
    tab = group.table
    inv = group.inverse_index
    everyone = np.arange(len(group))
    label = np.full(len(group), -1, dtype=np.int64)
    classes = []
    for g in range(len(group)):
        if label[g] >= 0:
            continue
        # g^h = h^-1 g h for every h at once
        orbit = np.unique(tab[tab[inv, g], everyone])
        label[orbit] = len(classes)
        classes.append(ConjugacyClass(group, orbit.tolist()))
    return classes


# ---------------------------------------------------------------------------
# named groups


def symmetric_group(n: int) -> EnumeratedGroup:
    if n < 2:
        return group_closure([], degree=max(n, 1))
    gens = [Permutation.from_cycles([(1, 2)], n)]
    if n > 2:
        gens.append(Permutation.from_cycles([tuple(range(1, n + 1))], n))
    return group_closure(gens)


def alternating_group(n: int) -> EnumeratedGroup:
    """A_n generated by the 3-cycles (1 2 k), k = 3..n."""
    if n < 3:
        return group_closure([], degree=max(n, 1))
    return group_closure([Permutation.from_cycles([(1, 2, k)], n) for k in range(3, n + 1)])


_NAMED = re.compile(r"^([AS])_?(\d+)$", re.IGNORECASE)


def parse_group(text: str) -> EnumeratedGroup:
    """``'A5'``, ``'S_3'`` or a list of generators in cycle notation separated by ';' or top-level ','.

    >>> parse_group('A5').order
    60
    >>> parse_group('(1 2 3); (3 4 5)').order
    60
    """
    s = text.strip()
    m = _NAMED.match(s)
    if m:
        n = int(m.group(2))
        return alternating_group(n) if m.group(1).upper() == "A" else symmetric_group(n)
    parts, depth, cur = [], 0, []
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch in ";," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    parts = [p.strip() for p in parts if p.strip()]
    if not parts:
        raise InvalidInput(f"no generators in {text!r}")
    points = [int(t) for t in re.findall(r"\d+", s)]
    degree = max(points, default=1)
    return group_closure([parse_cycle_notation(p, degree) for p in parts])
