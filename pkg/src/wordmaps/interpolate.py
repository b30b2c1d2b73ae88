"""Compile an arbitrary map f: G -> G on a finite non-abelian simple group into a one-variable word with constants.

Pipeline:

1. ``covering_number``: for every non-trivial class C, the layers C, C*C, ...
   until the whole group is reached, with predecessor links so that each
   element can be written as a shortest product of class members.
2. ``build_separator``: a commutator word vanishing on a set S but not at g,
   by recursive halving of S.
3. ``build_delta``: a product of conjugates of the separator for S = G - {g},
   equal to h at g and to the identity elsewhere.
4. ``interpolate``: the product of the bump words over all g.

Values of intermediate words are tracked as index tables over G (one entry
per element), computed homomorphically from the multiplication table; the
final words are additionally checked by direct batched evaluation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Union

import numpy as np

from .evaluate import evaluate_batch
from .exceptions import CoveringError, InternalContradiction, InvalidInput
from .perm import ConjugacyClass, EnumeratedGroup, Permutation, conjugacy_classes, encode_rows
from .words import WordWithConstants


# ---------------------------------------------------------------------------
# covering numbers


@dataclass
class ClassCovering:
    conjugacy_class: ConjugacyClass
    cn: int
    cd: Optional[int]
    # layers[m - 1][x] = (predecessor index in layer m - 1, class member index), or (-1, -1) if x not in C^m
    layers: list = field(repr=False)
    first_layer: np.ndarray = field(repr=False)  # smallest m with x in C^m
    conjugator: dict = field(repr=False)  # member index -> a with rep^a == member

    def decompose(self, x: int) -> list[int]:
        """Member indices ``c_1..c_m`` with product ``x`` and ``m`` minimal."""
        m = int(self.first_layer[x])
        out = []
        while m > 0:
            pred, c = self.layers[m - 1][x]
            out.append(int(c))
            x = int(pred)
            m -= 1
        out.reverse()
        return out


@dataclass
class CoveringData:
    group: EnumeratedGroup
    cn: int
    cd: int
    classes: list  # ClassCovering for each non-trivial class
    class_of: np.ndarray = field(repr=False)  # element index -> position in ``classes`` (-1 for identity)

    def covering_for(self, x: int) -> ClassCovering:
        k = int(self.class_of[x])
        if k < 0:
            raise InvalidInput("the identity lies in no non-trivial class")
        return self.classes[k]

    def to_dict(self) -> dict:
        return {
            "order": self.group.order,
            "cn": self.cn,
            "cd": self.cd,
            "classes": [
                {"representative": str(c.conjugacy_class.representative), "size": len(c.conjugacy_class),
                 "cn": c.cn, "cd": c.cd}
                for c in self.classes
            ],
        }


def _class_layers(tab: np.ndarray, members: np.ndarray, N: int):
    """Layers of powers C^m with predecessor links until C^m is everything.

    Raises CoveringError if the sequence of layers starts repeating first.
    """
    links = np.full((N, 2), -1, dtype=np.int64)
    links[members, 0] = 0  # identity
    links[members, 1] = members
    layers = [links]
    current = members
    seen = {current.tobytes()}
    while len(current) < N:
        prods = tab[np.ix_(current, members)].ravel()
        uniq, first = np.unique(prods, return_index=True)
        links = np.full((N, 2), -1, dtype=np.int64)
        links[uniq, 0] = current[first // len(members)]
        links[uniq, 1] = members[first % len(members)]
        key = uniq.tobytes()
        if key in seen:
            raise CoveringError(f"powers of the class of size {len(members)} cycle without covering the group")
        seen.add(key)
        layers.append(links)
        current = uniq
    return layers


def _class_cd(tab: np.ndarray, members: np.ndarray, inv: np.ndarray, N: int) -> Optional[int]:
    step = np.unique(np.concatenate(([0], members, inv[members])))
    reach = step
    m = 1
    while len(reach) < N:
        nxt = np.unique(tab[np.ix_(reach, step)])
        if len(nxt) == len(reach):
            return None
        reach, m = nxt, m + 1
    return m


def covering_number(group: EnumeratedGroup) -> CoveringData:
    """cn(G) and cd(G) with decomposition tables for every non-trivial class."""
    N = len(group)
    if N < 2:
        raise InvalidInput("covering numbers need a non-trivial group")
    tab = group.table
    inv = group.inverse_index
    classes = [c for c in conjugacy_classes(group) if not c.is_trivial()]
    class_of = np.full(N, -1, dtype=np.int64)
    out = []
    for k, cls in enumerate(classes):
        members = np.array(cls.indices, dtype=np.int64)
        class_of[members] = k
        layers = _class_layers(tab, members, N)
        first = np.zeros(N, dtype=np.int64)
        for m in range(len(layers), 0, -1):
            present = layers[m - 1][:, 1] >= 0
            first[present] = m
        rep = cls.indices[0]
        conj = {}
        for a in range(N):
            x = int(tab[tab[inv[a], rep], a])
            conj.setdefault(x, a)
        out.append(ClassCovering(cls, len(layers), _class_cd(tab, members, inv, N), layers, first, conj))
    cn = max(c.cn for c in out)
    cds = [c.cd for c in out]
    if any(c is None for c in cds):
        raise CoveringError("some class does not generate the group, so cd is undefined")
    return CoveringData(group, cn, max(cds), out, class_of)


# ---------------------------------------------------------------------------
# group evaluation helpers


def _word_values(group: EnumeratedGroup, w: WordWithConstants) -> np.ndarray:
    """Direct evaluation of a one-variable word at every element; returns element indices."""
    arr = group.as_array()
    out = evaluate_batch(w, arr[:, None, :])
    codes = encode_rows(out)
    all_codes = encode_rows(arr)
    order = np.argsort(all_codes)
    pos = np.searchsorted(all_codes[order], codes)
    idx = order[np.minimum(pos, len(order) - 1)]
    if not np.array_equal(all_codes[idx], codes):
        raise InternalContradiction("a word value left the group")
    return idx


def _conj_values(tab, inv, vals, a):
    return tab[tab[inv[a], vals], a]


def _comm_values(tab, inv, p, q):
    return tab[tab[tab[inv[p], inv[q]], p], q]


# ---------------------------------------------------------------------------
# separators


@dataclass
class SeparatorNode:
    size: int
    e: int
    length: int
    bound: int  # 4^e
    child_lengths: tuple = ()

    @property
    def within_bound(self) -> bool:
        return self.length <= self.bound

    @property
    def within_stage_bound(self) -> bool:
        return not self.child_lengths or self.length <= 2 * sum(self.child_lengths)


@dataclass
class SeparatorWord:
    word: WordWithConstants
    target: int  # element index g
    killed: frozenset  # element indices S
    values: np.ndarray = field(repr=False)  # element index of word(x) for every x
    ledger: list = field(default_factory=list, repr=False)  # SeparatorNode per recursion node

    @property
    def value_at_target(self) -> int:
        return int(self.values[self.target])


def _ceil_log2(m: int) -> int:
    return max(0, (m - 1).bit_length())


def build_separator(group: EnumeratedGroup, g: Union[int, Permutation], S, *, verify: bool = True) -> SeparatorWord:
    """A word ``w`` with ``w(s) = 1`` for s in S and ``w(g) != 1``, of length <= 4^ceil(log2 |S|)."""
    gi = g if isinstance(g, (int, np.integer)) else group.index(g)
    Si = sorted(s if isinstance(s, (int, np.integer)) else group.index(s) for s in S)
    if not Si:
        raise InvalidInput("S must be non-empty")
    if gi in Si:
        raise InvalidInput("g must not lie in S")
    tab = group.table
    inv = group.inverse_index
    elems = group.elements
    n = group.degree
    x = WordWithConstants.variable(1, 1, n)
    everyone = np.arange(len(group))
    ledger: list[SeparatorNode] = []

    def rec(S_part: list[int]):
        e = _ceil_log2(len(S_part))
        if len(S_part) == 1:
            s = S_part[0]
            word = x * elems[s].inverse()
            vals = tab[everyone, inv[s]]
            node = SeparatorNode(1, 0, word.length, 1)
        else:
            half = (len(S_part) + 1) // 2
            w1, v1 = rec(S_part[:half])
            w2, v2 = rec(S_part[half:])
            p, q = int(v1[gi]), int(v2[gi])
            a, b = _find_conjugators(tab, inv, p, q)
            if a is None:
                raise InvalidInput("no conjugators separate the commutator: the group is not simple non-abelian")
            left, right = w1.conjugate(elems[a]), w2.conjugate(elems[b])
            word = left.inverse() * right.inverse() * left * right
            vals = _comm_values(tab, inv, _conj_values(tab, inv, v1, a), _conj_values(tab, inv, v2, b))
            node = SeparatorNode(len(S_part), e, word.length, 4**e, (w1.length, w2.length))
        if np.any(vals[S_part] != 0) or vals[gi] == 0:
            raise InternalContradiction(f"separator node for |S|={len(S_part)} fails its value table")
        if not (node.within_bound and node.within_stage_bound):
            raise InternalContradiction(f"separator node for |S|={len(S_part)} exceeds its length ledger")
        ledger.append(node)
        return word, vals

    word, vals = rec(Si)
    if verify:
        direct = _word_values(group, word)
        if not np.array_equal(direct, vals):
            raise InternalContradiction("separator evaluation disagrees with its value table")
    return SeparatorWord(word, gi, frozenset(Si), vals, ledger)


def _find_conjugators(tab, inv, p: int, q: int):
    """(a, b) with [p^a, q^b] != 1: a = identity first, then all pairs in order."""
    N = len(tab)
    qb = tab[tab[inv, q], np.arange(N)]  # q^b for every b
    comm = _comm_values(tab, inv, np.full(N, p), qb)
    hit = np.flatnonzero(comm != 0)
    if len(hit):
        return 0, int(hit[0])
    for a in range(1, N):
        pa = int(tab[tab[inv[a], p], a])
        comm = _comm_values(tab, inv, np.full(N, pa), qb)
        hit = np.flatnonzero(comm != 0)
        if len(hit):
            return a, int(hit[0])
    return None, None


# ---------------------------------------------------------------------------
# bump words


def build_delta(
    group: EnumeratedGroup,
    cov: CoveringData,
    g: Union[int, Permutation],
    h: Union[int, Permutation],
    separator: Optional[SeparatorWord] = None,
    *,
    verify: bool = True,
) -> WordWithConstants:
    """A word equal to ``h`` at ``g`` and to the identity everywhere else."""
    gi = g if isinstance(g, (int, np.integer)) else group.index(g)
    hi = h if isinstance(h, (int, np.integer)) else group.index(h)
    n = group.degree
    if hi == 0:
        return WordWithConstants.constant(Permutation.identity(n))
    if separator is None:
        separator = build_separator(group, gi, [s for s in range(len(group)) if s != gi], verify=verify)
    elif separator.target != gi or len(separator.killed) != len(group) - 1:
        raise InvalidInput("separator must kill every element except g")
    v = separator.value_at_target
    cc = cov.covering_for(v)
    factors = cc.decompose(hi)
    if not factors or len(factors) > cov.cn:
        raise InternalContradiction(f"decomposition of length {len(factors)} exceeds cn = {cov.cn}")
    elems = group.elements
    b_inv = elems[cc.conjugator[v]].inverse()
    word = WordWithConstants.constant(Permutation.identity(n))
    for c in factors:
        a = b_inv * elems[cc.conjugator[c]]  # v^a == c
        word = word * separator.word.conjugate(a)
    if verify:
        vals = _word_values(group, word)
        expected = np.zeros(len(group), dtype=np.int64)
        expected[gi] = hi
        if not np.array_equal(vals, expected):
            raise InternalContradiction("bump word does not evaluate to h at g and 1 elsewhere")
    return word


# ---------------------------------------------------------------------------
# interpolation


def length_bound(order: int, cn: int) -> int:
    """The crude ledger bound ``4 |G|^3 cn(G)``."""
    return 4 * order**3 * cn


def sharp_length_bound(order: int, cn: int) -> int:
    """``|G| 4^ceil(log2(|G| - 1)) cn(G)``."""
    return order * 4 ** _ceil_log2(order - 1) * cn


@dataclass
class InterpolationCertificate:
    word: WordWithConstants
    group: EnumeratedGroup = field(repr=False)
    table: dict = field(repr=False)  # element -> word(element)
    target: dict = field(repr=False)  # element -> f(element)
    length: int
    bound: int
    sharp_bound: int
    cn: int
    delta_lengths: list = field(default_factory=list, repr=False)
    separator_lengths: list = field(default_factory=list, repr=False)
    separator_ledger_ok: bool = True

    def verify(self) -> bool:
        if self.table != self.target:
            raise InternalContradiction("interpolating word disagrees with the target map")
        if not self.length <= self.sharp_bound <= self.bound:
            raise InternalContradiction("interpolating word exceeds its length ledger")
        if not self.separator_ledger_ok:
            raise InternalContradiction("a separator exceeded its per-stage ledger")
        return True

    def to_dict(self, include_word: bool = False) -> dict:
        out = {
            "order": self.group.order,
            "cn": self.cn,
            "length": self.length,
            "sharp_bound": self.sharp_bound,
            "bound": self.bound,
            "pointwise_equal": self.table == self.target,
            "delta_lengths": [{"g": str(g), "h": str(h), "length": L} for g, h, L in self.delta_lengths],
            "separator_lengths": list(self.separator_lengths),
        }
        if include_word:
            out["word"] = str(self.word)
        return out


MapLike = Union[Mapping[Permutation, Permutation], Callable[[Permutation], Permutation]]


def interpolate(group: EnumeratedGroup, f: MapLike, cov: Optional[CoveringData] = None) -> InterpolationCertificate:
    """The word ``prod_g delta_{g, f(g)}`` (in element order), verified pointwise."""
    if cov is None:
        cov = covering_number(group)
    elems = group.elements
    fmap = f if callable(f) and not isinstance(f, Mapping) else f.__getitem__
    targets = []
    for g in elems:
        try:
            h = fmap(g)
        except KeyError:
            raise InvalidInput(f"map is not defined at {g}") from None
        targets.append(group.index(h))
    n = group.degree
    word = WordWithConstants.constant(Permutation.identity(n))
    delta_lengths, sep_lengths = [], []
    ledger_ok = True
    for gi, hi in enumerate(targets):
        if hi == 0:
            delta_lengths.append((elems[gi], elems[hi], 0))
            continue
        sep = build_separator(group, gi, [s for s in range(len(group)) if s != gi], verify=False)
        ledger_ok &= all(node.within_bound and node.within_stage_bound for node in sep.ledger)
        sep_lengths.append(sep.word.length)
        delta = build_delta(group, cov, gi, hi, sep, verify=False)
        delta_lengths.append((elems[gi], elems[hi], delta.length))
        word = word * delta
    vals = _word_values(group, word)
    cert = InterpolationCertificate(
        word=word,
        group=group,
        table={elems[x]: elems[int(v)] for x, v in enumerate(vals)},
        target={elems[x]: elems[h] for x, h in enumerate(targets)},
        length=word.length,
        bound=length_bound(len(group), cov.cn),
        sharp_bound=sharp_length_bound(len(group), cov.cn),
        cn=cov.cn,
        delta_lengths=delta_lengths,
        separator_lengths=sep_lengths,
        separator_ledger_ok=ledger_ok,
    )
    cert.verify()
    return cert


def counting_lower_bound(group: Union[EnumeratedGroup, int], l: int) -> bool:
    """Whether ``3^l |G|^(l+1) >= |G|^|G|``, i.e. whether length l could reach every map."""
    order = group if isinstance(group, int) else len(group)
    return 3**l * order ** (l + 1) >= order**order


def minimal_counting_length(group: Union[EnumeratedGroup, int]) -> int:
    """Smallest l for which :func:`counting_lower_bound` holds."""
    order = group if isinstance(group, int) else len(group)
    # 3^l |G|^(l+1) grows by at least 3|G| per step; start from a float estimate and fix up exactly
    l = max(0, int(order * math.log(order) / math.log(3 * order)) - 2)
    while l > 0 and counting_lower_bound(order, l - 1):
        l -= 1
    while not counting_lower_bound(order, l):
        l += 1
    return l
