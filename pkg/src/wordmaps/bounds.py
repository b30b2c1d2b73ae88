"""Quantitative diameter bounds for word maps with constants.

All checks take an *exact* diameter: the inequalities have the diameter on
the small side, so a sampled lower bound cannot certify them.  Reports built
from sampled diameters are labelled ``consistent`` rather than ``verified``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .exceptions import InternalContradiction, InvalidInput
from .perm import Permutation
from .words import WordWithConstants, content, critical_indices, is_strong, norms, reduction_chain

RHS_RTOL = 1e-12


@dataclass(frozen=True)
class InequalityCheck:
    name: str
    lhs: object
    rhs: object
    holds: bool

    def to_dict(self) -> dict:
        return {"name": self.name, "lhs": _num(self.lhs), "rhs": _num(self.rhs), "holds": self.holds}


def _num(x):
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    return x


@dataclass
class BoundReport:
    length: int
    infinity: int
    crit: int
    strong: bool
    content_trivial: bool
    degree: int
    diameter: int
    method: str = "exhaustive"
    checks: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def verdict(self) -> str:
        if not self.checks:
            return "not-applicable"
        ok = all(c.holds for c in self.checks)
        if self.method != "exhaustive":
            return "consistent" if ok else "inconsistent"
        return "verified" if ok else "violated"

    def check(self, name: str) -> Optional[InequalityCheck]:
        return next((c for c in self.checks if c.name == name), None)

    def to_dict(self) -> dict:
        return {
            "length": self.length,
            "infinity_norm": self.infinity,
            "crit_norm": self.crit,
            "strong": self.strong,
            "content_trivial": self.content_trivial,
            "degree": self.degree,
            "diameter": self.diameter,
            "diameter_method": self.method,
            "checks": [c.to_dict() for c in self.checks],
            "verdict": self.verdict,
            "notes": list(self.notes),
        }


def _summary(w: WordWithConstants, diam: int, method: str) -> BoundReport:
    nm = norms(w)
    return BoundReport(
        length=nm.length,
        infinity=nm.infinity,
        crit=nm.crit,
        strong=is_strong(w),
        content_trivial=content(w).is_trivial(),
        degree=w.degree,
        diameter=diam,
        method=method,
    )


def theorem_i_rhs(length: int) -> float:
    """``exp(-log(5 l) l / 2) / 2``."""
    return 0.5 * math.exp(-math.log(5 * length) * length / 2)


def master_inequality(w: WordWithConstants, diam: int, method: str = "exhaustive") -> BoundReport:
    """``||w||_crit <= 2 (diam + 1) l(w)`` and ``diam >= floor(||w||_crit / (2 ||w||_inf))``."""
    if w.length == 0:
        raise InvalidInput("the master inequality needs l(w) >= 1")
    rep = _summary(w, diam, method)
    rhs = 2 * (diam + 1) * rep.length
    rep.checks.append(InequalityCheck("master", rep.crit, rhs, rep.crit <= rhs))
    floor_d = rep.crit // (2 * rep.infinity)
    rep.checks.append(InequalityCheck("master-floor", diam, floor_d, diam >= floor_d))
    return rep


def theorem_bounds(w: WordWithConstants, diam: int, method: str = "exhaustive") -> BoundReport:
    """Evaluate the content bound (i) and the strong-word bound (ii), whichever applies.

    Left sides are exact rationals ``(diam + 1) / n``.  The right side of
    (i) is transcendental and compared with a relative tolerance of 1e-12.
    """
    rep = _summary(w, diam, method)
    lhs = Fraction(diam + 1, w.degree)
    if not rep.content_trivial:
        rhs = theorem_i_rhs(rep.length)
        rep.checks.append(InequalityCheck("theorem-i", lhs, rhs, float(lhs) >= rhs * (1 - RHS_RTOL)))
    else:
        rep.notes.append("content is trivial: bound (i) does not apply")
    if rep.strong and not w.is_constant():
        rhs = Fraction(1, 2 * rep.length)
        rep.checks.append(InequalityCheck("theorem-ii", lhs, rhs, lhs >= rhs))
    else:
        rep.notes.append("word is not strong or is constant: bound (ii) does not apply")
    return rep


def find_small_critical_constant(w: WordWithConstants, diam: int) -> tuple[int, Permutation]:
    """A critical constant of norm <= 2 (diam + 1) l(w), given that bound (ii) fails.

    Picks the critical constant of least norm (ties to the smallest index).
    """
    if w.is_constant():
        raise InvalidInput("w is a constant word")
    l = w.length
    if 2 * l * (diam + 1) >= w.degree:
        raise InvalidInput("bound (ii) holds, so no small critical constant is promised")
    crit = critical_indices(w)
    bound = 2 * (diam + 1) * l
    if not crit:
        raise InternalContradiction("bound (ii) fails for a strong word: the diameter must be wrong")
    j = min(crit, key=lambda j: (w.constant_at(j).norm, j))
    c = w.constant_at(j)
    if c.norm > bound:
        raise InternalContradiction(f"smallest critical constant has norm {c.norm} > {bound}")
    return j, c


@dataclass(frozen=True)
class ChainStep:
    word: WordWithConstants
    diameter: int
    lhs: int  # diam(w_i) + 1
    rhs: int  # (1 + 4 l(w))^i (diam(w) + 1)

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs


def chain_growth(w: WordWithConstants, diameter) -> list[ChainStep]:
    """Check ``diam(w_i) + 1 <= (1 + 4 l(w))^i (diam(w) + 1)`` along the reduction chain.

    ``diameter`` is a callable returning exact diameters.
    """
    chain = reduction_chain(w)
    base = diameter(chain[0]) + 1
    factor = 1 + 4 * w.length
    steps = []
    for i, wi in enumerate(chain):
        di = base - 1 if i == 0 else diameter(wi)
        steps.append(ChainStep(wi, di, di + 1, factor**i * base))
    return steps
