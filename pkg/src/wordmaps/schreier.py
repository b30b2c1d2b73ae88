"""Certified lower bounds diam(w(S_n^r)) >= d via partial Schreier graphs.

Given a word ``w`` and ``d`` satisfying the four length/support conditions
checked by :func:`check_conditions`, :func:`construct_witness` builds an
assignment ``pi`` such that ``sigma = w(pi)`` moves ``d`` chosen basepoints
differently from a given ``tau``.  The assignment is grown one arrow at a
time: each basepoint ``omega_k`` is pushed along the word, and every step
adds a fresh ``x_i``-arrow whose far end is picked among the admissible
points (rules (a)-(d) below, plus (c*)).

Rules for the far end ``t`` of the arrow added at letter ``j`` of row ``k``
(``u`` is the current point, ``x_i^e`` the letter):

(a)  ``t`` is not already the e-target of an ``x_i``-arrow;
(b)  if ``x_i^e == x_{i(1)}^{-e(1)}``: ``t`` avoids the later basepoints;
(c)  if ``j < l``: the next point ``t.c_j`` is not already an e(j+1)-source
     of an ``x_{i(j+1)}``-arrow (including the one just added);
(c*) if ``j < l`` and ``x_{i(j+1)}^{e(j+1)} == x_{i(1)}^{e(1)}``: ``t.c_j``
     avoids the later basepoints, which are reserved as e(1)-sources;
(d)  if ``j == l``: ``t.c_l != omega_k.tau``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .evaluate import evaluate
from .exceptions import InternalContradiction, InvalidInput
from .perm import Permutation, hamming_distance
from .words import WordWithConstants, classify


# ---------------------------------------------------------------------------
# partial Schreier graphs


class PartialSchreierGraph:
    """Per-variable partial injective maps on ``{0, ..., n-1}`` (0-based).

    An ``x_i``-arrow ``p -> q`` means ``p.pi_i = q``.  Traversed with sign
    ``e``, its e-source is ``p`` for ``e = +1`` and ``q`` for ``e = -1``.
    """

    def __init__(self, degree: int, rank: int):
        self.degree = degree
        self.rank = rank
        self.fwd: list[dict[int, int]] = [{} for _ in range(rank)]
        self.bwd: list[dict[int, int]] = [{} for _ in range(rank)]

    def arrow_count(self, i: int) -> int:
        return len(self.fwd[i])

    def esources(self, i: int, sign: int) -> dict:
        return self.fwd[i] if sign > 0 else self.bwd[i]

    def etargets(self, i: int, sign: int) -> dict:
        return self.bwd[i] if sign > 0 else self.fwd[i]

    def add(self, i: int, sign: int, source: int, target: int):
        """Add an ``x_i``-arrow with e-source ``source`` and e-target ``target``."""
        p, q = (source, target) if sign > 0 else (target, source)
        if p in self.fwd[i] or q in self.bwd[i]:
            raise InternalContradiction(f"arrow {p}->{q} breaks injectivity of x{i + 1}")
        self.fwd[i][p] = q
        self.bwd[i][q] = p

    def validate(self):
        for i in range(self.rank):
            f, b = self.fwd[i], self.bwd[i]
            if len(f) != len(b) or any(b.get(q) != p for p, q in f.items()) or len(f) > self.degree:
                raise InternalContradiction(f"x{i + 1}-arrows are not a partial injection")

    def maps(self) -> list[dict[int, int]]:
        return [dict(f) for f in self.fwd]


def _complete(partial: dict[int, int], n: int) -> list[int]:
    img = [-1] * n
    used = set()
    for p, q in partial.items():
        if not (0 <= p < n and 0 <= q < n):
            raise InvalidInput(f"point out of range in partial map {p + 1}->{q + 1}")
        if q in used:
            raise InvalidInput("partial map is not injective")
        img[p] = q
        used.add(q)
    free_targets = iter(q for q in range(n) if q not in used)
    for p in range(n):
        if img[p] < 0:
            img[p] = next(free_targets)
    return img


def complete_partial(partial_maps: Sequence[dict[int, int]], degree: int) -> list[Permutation]:
    """Extend each 1-based partial injection to a permutation.

    Unmatched sources are paired with unmatched targets in increasing order.

    >>> [str(p) for p in complete_partial([{1: 2}], 3)]
    ['(1 2)']
    """
    out = []
    for m in partial_maps:
        zero = {p - 1: q - 1 for p, q in m.items()}
        out.append(Permutation(_complete(zero, degree), check=False))
    return out


# ---------------------------------------------------------------------------
# conditions


@dataclass(frozen=True)
class ConditionCheck:
    """One inequality ``lhs >= rhs`` at letter index ``j`` (``j = l`` for condition (iv))."""

    condition: str
    j: int
    lhs: int
    rhs: int

    @property
    def slack(self) -> int:
        return self.lhs - self.rhs

    @property
    def holds(self) -> bool:
        return self.lhs >= self.rhs


@dataclass(frozen=True)
class LemmaConditions:
    d: int
    degree: int
    checks: tuple

    def _all(self, name):
        return all(c.holds for c in self.checks if c.condition == name)

    @property
    def cond_i(self) -> bool:
        return self._all("i")

    @property
    def cond_ii(self) -> bool:
        return self._all("ii")

    @property
    def cond_iii(self) -> bool:
        return self._all("iii")

    @property
    def cond_iv(self) -> bool:
        return self._all("iv")

    @property
    def all_satisfied(self) -> bool:
        return all(c.holds for c in self.checks)

    def failures(self) -> list[ConditionCheck]:
        return [c for c in self.checks if not c.holds]

    def min_slack(self) -> dict:
        out = {}
        for c in self.checks:
            out[c.condition] = min(out.get(c.condition, c.slack), c.slack)
        return out


def check_conditions(w: WordWithConstants, d: int) -> LemmaConditions:
    """Evaluate the four inequalities guaranteeing diam(w(S_n^r)) >= d.

    The leading constant ``c_0`` plays no role (it is stripped before any
    witness is built).
    """
    l = w.length
    if l == 0:
        raise InvalidInput("conditions need a word of length >= 1")
    if d < 1:
        raise InvalidInput("d must be >= 1")
    n = w.degree
    cls = classify(w)
    letters = w.letters

    def tot(i):
        return cls.total(i)

    def pre(j, i):
        return cls.ilength(j, i)

    checks = []
    for j in range(1, l):
        a, b = letters[j - 1].variable, letters[j].variable
        if j in cls.j0:
            rhs = (d - 1) * (tot(a) + tot(b)) + pre(j, a) + pre(j + 1, b) - 1
            checks.append(ConditionCheck("i", j, n, rhs))
        elif j in cls.jplus:
            rhs = 2 * ((d - 1) * tot(a) + pre(j + 1, a) - 1)
            checks.append(ConditionCheck("ii", j, n, rhs))
        else:
            rhs = 2 * ((d - 1) * tot(a) + pre(j + 1, a)) - 3
            checks.append(ConditionCheck("iii", j, w.constant_at(j).norm, rhs))
    checks.append(ConditionCheck("iv", l, n, d * tot(letters[-1].variable) + 1))
    return LemmaConditions(d, n, tuple(checks))


def largest_feasible_d(w: WordWithConstants) -> int:
    """Largest ``d`` passing :func:`check_conditions` (0 if none); the conditions are monotone in ``d``."""
    if w.length == 0:
        return 0
    d = 0
    while d < w.degree and check_conditions(w, d + 1).all_satisfied:
        d += 1
    return d


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class TraceRecord:
    k: int
    j: int
    variable: int
    sign: int
    source: int
    target: int
    admissible: int
    guaranteed: int

    def to_json(self) -> str:
        return json.dumps(self.__dict__)


@dataclass
class WitnessCertificate:
    """Proof that ``sigma`` and ``tau`` are image points at distance >= d.

    ``basepoints`` are 1-based points with ``b.sigma != b.tau``;
    ``trajectories[k][j]`` is ``basepoints[k]`` moved by the prefix
    ``c_0 x.. c_j`` of the word at ``assignment``.  When the word has a
    non-trivial leading constant the construction ran on ``c_0^-1 w``
    (``lead_stripped``), which the Hamming metric does not see.
    """

    word: WordWithConstants
    d: int
    tau: Permutation
    sigma: Permutation
    assignment: tuple
    basepoints: tuple
    trajectories: tuple
    lead_stripped: bool
    trace: tuple = field(default=(), repr=False)

    @property
    def distance(self) -> int:
        return hamming_distance(self.sigma, self.tau)

    def verify(self) -> bool:
        """Re-check every invariant by direct evaluation; raise on failure."""
        w = self.word
        if evaluate(w, self.assignment) != self.sigma:
            raise InternalContradiction("sigma differs from the word evaluated at the assignment")
        if len(set(self.basepoints)) != self.d:
            raise InternalContradiction("basepoints are not d distinct points")
        for b in self.basepoints:
            if self.sigma(b) == self.tau(b):
                raise InternalContradiction(f"basepoint {b} has b.sigma == b.tau")
        if self.distance < self.d:
            raise InternalContradiction(f"d(sigma, tau) = {self.distance} < {self.d}")
        inverses = [p.inverse() for p in self.assignment]
        for b, traj in zip(self.basepoints, self.trajectories):
            if len(traj) != w.length + 1:
                raise InternalContradiction(f"trajectory of {b} has the wrong length")
            p = w.lead(b)
            for j, point in enumerate(traj):
                if j:
                    L, c = w.body[j - 1]
                    pi = self.assignment[L.variable - 1] if L.sign > 0 else inverses[L.variable - 1]
                    p = c(pi(p))
                if p != point:
                    raise InternalContradiction(f"trajectory of {b} is wrong at prefix {j}")
        return True

    def to_dict(self) -> dict:
        return {
            "word": str(self.word),
            "degree": self.word.degree,
            "rank": self.word.rank,
            "d": self.d,
            "tau": str(self.tau),
            "sigma": str(self.sigma),
            "distance": self.distance,
            "assignment": [str(p) for p in self.assignment],
            "basepoints": list(self.basepoints),
            "trajectories": [list(t) for t in self.trajectories],
            "lead_stripped": self.lead_stripped,
        }


def construct_witness(
    w: WordWithConstants,
    d: int,
    tau: Optional[Permutation] = None,
    *,
    basepoints: Optional[Sequence[int]] = None,
    seed: Optional[int] = None,
    debug: bool = False,
    on_step: Optional[Callable[[TraceRecord], None]] = None,
) -> WitnessCertificate:
    """Build an assignment whose value is at distance >= d from ``tau``.

    ``tau`` defaults to the value at the all-identity assignment.  Basepoints
    default to ``1..d`` (for the word with ``c_0`` stripped).  Targets are the
    smallest admissible point unless ``seed`` is given, in which case they are
    drawn at random among the admissible ones.  ``debug`` re-validates graph
    injectivity after every arrow.
    """
    conds = check_conditions(w, d)
    if not conds.all_satisfied:
        bad = ", ".join(f"({c.condition}) at j={c.j}: {c.lhs} < {c.rhs}" for c in conds.failures())
        raise InvalidInput(f"conditions fail for d={d}: {bad}")
    n, r, l = w.degree, w.rank, w.length
    if tau is None:
        tau = evaluate(w, [Permutation.identity(n)] * r)
    if tau.degree != n:
        raise InvalidInput("tau has the wrong degree")
    c0 = w.lead
    work = w.strip_lead()
    tau_n = c0.inverse() * tau

    omegas = list(range(d)) if basepoints is None else [p - 1 for p in basepoints]
    if len(omegas) != d or len(set(omegas)) != d or not all(0 <= p < n for p in omegas):
        raise InvalidInput("basepoints must be d distinct points of 1..n")
    rng = np.random.default_rng(seed) if seed is not None else None

    cls = classify(work)
    letters = work.letters
    consts = [c.images for c in work.constants]
    norms_c = [c.norm for c in work.constants]
    first = letters[0]
    graph = PartialSchreierGraph(n, r)
    trace = []
    trajectories = []

    for k in range(d):
        reserved = set(omegas[k + 1:])
        u = omegas[k]
        traj = [u]
        for j in range(1, l + 1):
            L = letters[j - 1]
            i, e = L.variable - 1, L.sign
            expected = k * cls.total(i + 1) + cls.ilength(j - 1, i + 1)
            if graph.arrow_count(i) != expected:
                raise InternalContradiction(f"x{i + 1} has {graph.arrow_count(i)} arrows, expected {expected}")
            if u in graph.esources(i, e):
                raise InternalContradiction(f"start point {u + 1} at (k={k + 1}, j={j}) is not free")
            cj = consts[j]
            taken = graph.etargets(i, e)
            rule_b = L.variable == first.variable and e == -first.sign
            excluded = graph.arrow_count(i)
            if j < l:
                nxt = letters[j]
                i2, e2 = nxt.variable - 1, nxt.sign
                next_sources = graph.esources(i2, e2)
                rule_cstar = nxt.variable == first.variable and e2 == first.sign
                if i2 != i:
                    excluded += graph.arrow_count(i2)
                elif e2 == e:
                    excluded += graph.arrow_count(i) + 1
                else:
                    excluded += graph.arrow_count(i) + (n - norms_c[j])
                excluded += len(reserved) * (rule_b + rule_cstar)
            else:
                rule_cstar = False
                final_forbidden = tau_n.images[omegas[k]]
                excluded += len(reserved) * rule_b + 1

            admissible = []
            for t in range(n):
                if t in taken or (rule_b and t in reserved):
                    continue
                v = cj[t]
                if j < l:
                    if v in next_sources or (rule_cstar and v in reserved):
                        continue
                    if i2 == i and v == (u if e2 == e else t):
                        continue
                elif v == final_forbidden:
                    continue
                admissible.append(t)

            guaranteed = n - excluded
            if not admissible:
                raise InternalContradiction(f"no admissible target at (k={k + 1}, j={j})")
            if len(admissible) < guaranteed or guaranteed < 1:
                raise InternalContradiction(
                    f"admissible count {len(admissible)} vs guaranteed {guaranteed} at (k={k + 1}, j={j})"
                )
            t = admissible[0] if rng is None else admissible[int(rng.integers(len(admissible)))]
            graph.add(i, e, u, t)
            if debug:
                graph.validate()
            rec = TraceRecord(k + 1, j, i + 1, e, u + 1, t + 1, len(admissible), guaranteed)
            trace.append(rec)
            if on_step is not None:
                on_step(rec)
            u = cj[t]
            traj.append(u)
        trajectories.append(tuple(p + 1 for p in traj))

    graph.validate()
    assignment = tuple(Permutation(_complete(m, n), check=False) for m in graph.maps())
    sigma = evaluate(w, assignment)
    c0_inv = c0.inverse()
    cert = WitnessCertificate(
        word=w,
        d=d,
        tau=tau,
        sigma=sigma,
        assignment=assignment,
        basepoints=tuple(c0_inv.images[p] + 1 for p in omegas),
        trajectories=tuple(trajectories),
        lead_stripped=not c0.is_identity(),
        trace=tuple(trace),
    )
    cert.verify()
    return cert
