"""Words with constants: reduced normal forms in F_r * S_n.

A word is stored as

    c_0  x_{i(1)}^{e(1)} c_1  x_{i(2)}^{e(2)} c_2  ...  x_{i(l)}^{e(l)} c_l

with ``lead = c_0`` and ``body = ((letter_1, c_1), ..., (letter_l, c_l))``.
Letter indices ``j`` are 1-based everywhere in this module, as are
variable indices ``i``.
"""
from __future__ import annotations

from typing import Iterable, NamedTuple, Sequence, Union

from .exceptions import InvalidInput
from .perm import Permutation


class Letter(NamedTuple):
    variable: int
    sign: int

    def inverse(self) -> "Letter":
        return Letter(self.variable, -self.sign)

    def __str__(self):
        return f"x{self.variable}" if self.sign > 0 else f"x{self.variable}^-1"


RawItem = Union[Letter, Permutation, tuple]


def _as_letter(item, rank: int) -> Letter:
    var, sign = item
    if sign not in (1, -1):
        raise InvalidInput(f"letter sign must be +1 or -1, got {sign}")
    if not 1 <= var <= rank:
        raise InvalidInput(f"variable x{var} exceeds rank {rank}")
    return item if isinstance(item, Letter) else Letter(var, sign)


class WordWithConstants:
    """An element of F_r * S_n in reduced normal form.

    Instances are immutable.  Build them with :func:`reduce`, the
    ``variable``/``constant`` constructors and the group operations
    (``*``, ``inverse``, ``**``), all of which return reduced words.
    """

    __slots__ = ("rank", "degree", "lead", "body", "_hash")

    def __init__(self, rank: int, degree: int, lead: Permutation, body: Sequence[tuple[Letter, Permutation]] = ()):
        body = tuple((_as_letter(L, rank), c) for L, c in body)
        if lead.degree != degree or any(c.degree != degree for _, c in body):
            raise InvalidInput("all constants must have the word's degree")
        for (a, c), (b, _) in zip(body, body[1:]):
            if a.variable == b.variable and a.sign == -b.sign and c.is_identity():
                raise InvalidInput("body is not reduced; use reduce() to normalise")
        self._set(rank, degree, lead, body)

    def _set(self, rank, degree, lead, body):
        self.rank = rank
        self.degree = degree
        self.lead = lead
        self.body = body
        self._hash = None

    @classmethod
    def _unchecked(cls, rank: int, degree: int, lead: Permutation, body: tuple) -> "WordWithConstants":
        w = cls.__new__(cls)
        w._set(rank, degree, lead, body)
        return w

    # constructors -------------------------------------------------------

    @classmethod
    def constant(cls, c: Permutation, rank: int = 1) -> "WordWithConstants":
        return cls._unchecked(rank, c.degree, c, ())

    @classmethod
    def variable(cls, i: int, rank: int, degree: int, sign: int = 1) -> "WordWithConstants":
        ident = Permutation.identity(degree)
        return cls._unchecked(rank, degree, ident, ((_as_letter((i, sign), rank), ident),))

    # accessors ----------------------------------------------------------

    @property
    def length(self) -> int:
        return len(self.body)

    def __len__(self):
        return len(self.body)

    @property
    def letters(self) -> tuple[Letter, ...]:
        return tuple(L for L, _ in self.body)

    @property
    def constants(self) -> tuple[Permutation, ...]:
        """``(c_0, c_1, ..., c_l)``."""
        return (self.lead,) + tuple(c for _, c in self.body)

    def constant_at(self, j: int) -> Permutation:
        return self.lead if j == 0 else self.body[j - 1][1]

    def letter_at(self, j: int) -> Letter:
        return self.body[j - 1][0]

    def is_constant(self) -> bool:
        return not self.body

    def raw(self) -> list:
        out: list = [self.lead]
        for L, c in self.body:
            out.extend((L, c))
        return out

    def variables(self) -> list[int]:
        """Sorted indices of the variables that actually occur."""
        return sorted({L.variable for L, _ in self.body})

    def prefix(self, j: int) -> "WordWithConstants":
        """``c_0 x_{i(1)}^{e(1)} c_1 ... x_{i(j)}^{e(j)} c_j``."""
        return WordWithConstants._unchecked(self.rank, self.degree, self.lead, self.body[:j])

    def strip_lead(self) -> "WordWithConstants":
        """``c_0^-1 w``: the same body with leading constant the identity."""
        return WordWithConstants._unchecked(self.rank, self.degree, Permutation.identity(self.degree), self.body)

    def with_rank(self, rank: int) -> "WordWithConstants":
        if any(L.variable > rank for L, _ in self.body):
            raise InvalidInput(f"word uses variables beyond rank {rank}")
        return WordWithConstants._unchecked(rank, self.degree, self.lead, self.body)

    # equality -----------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, WordWithConstants):
            return NotImplemented
        return (self.rank, self.degree, self.lead, self.body) == (other.rank, other.degree, other.lead, other.body)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rank, self.degree, self.lead, self.body))
        return self._hash

    def __repr__(self):
        return f"WordWithConstants({str(self)!r}, rank={self.rank}, degree={self.degree})"

    def __str__(self):
        return format_word(self)

    # group operations ---------------------------------------------------

    def _check_compatible(self, other: "WordWithConstants"):
        if self.degree != other.degree:
            raise InvalidInput(f"degree mismatch: {self.degree} vs {other.degree}")

    def __mul__(self, other):
        if isinstance(other, Permutation):
            other = WordWithConstants.constant(other, self.rank)
        if not isinstance(other, WordWithConstants):
            return NotImplemented
        self._check_compatible(other)
        rank = max(self.rank, other.rank)
        a, b = self.body, other.body
        i, j = len(a), 0
        # only the junction can cancel; both operands are already reduced
        mid = (a[i - 1][1] if i else self.lead) * other.lead
        while i and j < len(b) and mid.is_identity():
            La, Lb = a[i - 1][0], b[j][0]
            if La.variable != Lb.variable or La.sign != -Lb.sign:
                break
            left = a[i - 2][1] if i >= 2 else self.lead
            mid = left * b[j][1]
            i -= 1
            j += 1
        if i:
            body = a[: i - 1] + ((a[i - 1][0], mid),) + b[j:]
            return WordWithConstants._unchecked(rank, self.degree, self.lead, body)
        return WordWithConstants._unchecked(rank, self.degree, mid, b[j:])

    def __rmul__(self, other):
        if isinstance(other, Permutation):
            return WordWithConstants.constant(other, self.rank) * self
        return NotImplemented

    def inverse(self) -> "WordWithConstants":
        consts = self.constants
        body = []
        for t in range(self.length, 0, -1):
            L = self.body[t - 1][0]
            body.append((L.inverse(), consts[t - 1].inverse()))
        return WordWithConstants._unchecked(self.rank, self.degree, consts[-1].inverse(), tuple(body))

    __invert__ = inverse

    def __pow__(self, k: int) -> "WordWithConstants":
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = WordWithConstants.constant(Permutation.identity(self.degree), self.rank)
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self, by) -> "WordWithConstants":
        """``by^-1 * self * by``; ``by`` may be a permutation or a word."""
        if isinstance(by, Permutation):
            by = WordWithConstants.constant(by, self.rank)
        return by.inverse() * self * by

    def __call__(self, *perms: Permutation) -> Permutation:
        from .evaluate import evaluate

        return evaluate(self, perms)


def commutator(u: WordWithConstants, v: WordWithConstants) -> WordWithConstants:
    """``[u, v] = u^-1 v^-1 u v``."""
    return u.inverse() * v.inverse() * u * v


def format_word(w: WordWithConstants) -> str:
    """Space-separated factors; runs of one letter joined by identity constants print as powers."""
    parts = []
    if not w.lead.is_identity():
        parts.append(str(w.lead))
    body = w.body
    t = 0
    while t < len(body):
        L, c = body[t]
        run = 1
        while c.is_identity() and t + run < len(body) and body[t + run][0] == L:
            c = body[t + run][1]
            run += 1
        exp = run * L.sign
        parts.append(f"x{L.variable}" if exp == 1 else f"x{L.variable}^{exp}")
        if not c.is_identity():
            parts.append(str(c))
        t += run
    return " ".join(parts) if parts else "e"


# ---------------------------------------------------------------------------
# reduction


def reduce(rank: int, degree: int, raw: Iterable[RawItem]) -> WordWithConstants:
    """Normal form of a sequence of constants and letters.

    ``raw`` is normally ``[c_0, L_1, c_1, ..., L_l, c_l]`` but any mix is
    accepted: adjacent constants are multiplied and missing constants are
    identities.  Letters are :class:`Letter` or ``(variable, sign)`` pairs.
    Cancellation ``x^e 1 x^-e`` is applied until none remains (a stack pass
    handles cascades).
    """
    ident = Permutation.identity(degree)
    consts: list[Permutation] = [ident]
    letters: list[Letter] = []
    for item in raw:
        if isinstance(item, Permutation):
            if item.degree != degree:
                raise InvalidInput(f"constant {item} has degree {item.degree}, expected {degree}")
            consts[-1] = consts[-1] * item
            continue
        L = _as_letter(item, rank)
        if letters and consts[-1].is_identity():
            top = letters[-1]
            if top.variable == L.variable and top.sign == -L.sign:
                letters.pop()
                consts.pop()
                continue
        letters.append(L)
        consts.append(ident)
    return WordWithConstants._unchecked(rank, degree, consts[0], tuple(zip(letters, consts[1:])))


def evaluate_raw_sequence(raw: Iterable[RawItem], perms: Sequence[Permutation]) -> Permutation:
    """Left-to-right product of a raw sequence with variables substituted (no reduction)."""
    acc = None
    for item in raw:
        if isinstance(item, Permutation):
            g = item
        else:
            var, sign = item
            g = perms[var - 1] if sign > 0 else perms[var - 1].inverse()
        acc = g if acc is None else acc * g
    if acc is None:
        raise InvalidInput("empty raw sequence")
    return acc


# ---------------------------------------------------------------------------
# content and classification


class ContentWord(NamedTuple):
    letters: tuple

    def __len__(self):
        return len(self.letters)

    def is_trivial(self) -> bool:
        return not self.letters

    def __str__(self):
        return " ".join(map(str, self.letters)) or "1"


def free_reduce(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    stack: list[Letter] = []
    for L in letters:
        if stack and stack[-1].variable == L.variable and stack[-1].sign == -L.sign:
            stack.pop()
        else:
            stack.append(L)
    return tuple(stack)


def content(w: WordWithConstants) -> ContentWord:
    """The free-group word obtained by deleting all constants."""
    return ContentWord(free_reduce(w.letters))


class IndexClassification(NamedTuple):
    j0: frozenset
    jplus: frozenset
    jminus: frozenset
    prefix_ilengths: tuple  # prefix_ilengths[j][i - 1] == ||w_j||_i

    def ilength(self, j: int, i: int) -> int:
        return self.prefix_ilengths[j][i - 1]

    def total(self, i: int) -> int:
        return self.prefix_ilengths[-1][i - 1]


def classify(w: WordWithConstants) -> IndexClassification:
    j0, jp, jm = set(), set(), set()
    letters = w.letters
    for j in range(1, len(letters)):
        a, b = letters[j - 1], letters[j]
        if a.variable != b.variable:
            j0.add(j)
        elif a.sign == b.sign:
            jp.add(j)
        else:
            jm.add(j)
    counts = [0] * w.rank
    table = [tuple(counts)]
    for L in letters:
        counts[L.variable - 1] += 1
        table.append(tuple(counts))
    return IndexClassification(frozenset(j0), frozenset(jp), frozenset(jm), tuple(table))


def critical_indices(w: WordWithConstants) -> list[int]:
    return sorted(classify(w).jminus)


class WordNorms(NamedTuple):
    length: int
    ilengths: tuple
    infinity: int
    crit: int


def norms(w: WordWithConstants) -> WordNorms:
    """Length, per-variable lengths, ||w||_inf and ||w||_crit = min(n, min critical constant norm)."""
    cls = classify(w)
    il = cls.prefix_ilengths[-1]
    crit = min([w.degree] + [w.constant_at(j).norm for j in cls.jminus])
    return WordNorms(w.length, il, max(il, default=0), crit)


def is_strong(w: WordWithConstants) -> bool:
    letters = w.letters
    return not any(
        a.variable == b.variable and a.sign == -b.sign for a, b in zip(letters, letters[1:])
    )


def elementary_reduction(w: WordWithConstants, j: int) -> WordWithConstants:
    """Delete the critical constant ``c_j`` and reduce."""
    if j not in classify(w).jminus:
        raise InvalidInput(f"index {j} is not critical in {w}")
    raw = w.raw()
    raw[2 * j] = Permutation.identity(w.degree)
    return reduce(w.rank, w.degree, raw)


def smallest_critical_index(w: WordWithConstants) -> int | None:
    """Critical index of minimal constant norm, ties to the smallest index."""
    crit = critical_indices(w)
    if not crit:
        return None
    return min(crit, key=lambda j: (w.constant_at(j).norm, j))


def reduction_chain(w: WordWithConstants) -> list[WordWithConstants]:
    chain = [w]
    while True:
        j = smallest_critical_index(chain[-1])
        if j is None:
            return chain
        chain.append(elementary_reduction(chain[-1], j))
