"""Input coercion shared by the estimator and the command line."""
from __future__ import annotations

from typing import Iterable, Sequence

from .exceptions import InvalidInput
from .perm import EnumeratedGroup, Permutation, parse_cycle_notation


def check_permutation(obj, degree: int) -> Permutation:
    """Accept a :class:`Permutation`, cycle-notation text, or a sequence of 1-based images."""
    if isinstance(obj, Permutation):
        p = obj
    elif isinstance(obj, str):
        p = parse_cycle_notation(obj, degree)
    else:
        try:
            p = Permutation.from_images([int(v) for v in obj])
        except TypeError:
            raise InvalidInput(f"cannot interpret {obj!r} as a permutation") from None
    if p.degree != degree:
        raise InvalidInput(f"{p} has degree {p.degree}, expected {degree}")
    return p


def check_permutations(objs: Iterable, degree: int) -> list[Permutation]:
    return [check_permutation(o, degree) for o in objs]


def check_group_elements(objs: Iterable, group: EnumeratedGroup) -> list[Permutation]:
    out = check_permutations(objs, group.degree)
    for p in out:
        if p not in group:
            raise InvalidInput(f"{p} is not an element of the group")
    return out


def check_total_map(X: Sequence[Permutation], y: Sequence[Permutation], group: EnumeratedGroup) -> dict:
    """Turn paired samples into a map defined on every element of ``group``."""
    if len(X) != len(y):
        raise InvalidInput(f"X and y have different lengths ({len(X)} vs {len(y)})")
    f: dict = {}
    for a, b in zip(X, y):
        if f.setdefault(a, b) != b:
            raise InvalidInput(f"conflicting values at {a}")
    missing = [g for g in group if g not in f]
    if missing:
        raise InvalidInput(f"map is not total: {len(missing)} elements missing, e.g. {missing[0]}")
    return f


def parse_map_table(text: str, group: EnumeratedGroup) -> dict:
    """Lines ``g -> h`` (or ``g → h``) in cycle notation; blank lines and ``#`` comments ignored."""
    pairs = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        sep = "→" if "→" in line else "->"
        if sep not in line:
            raise InvalidInput(f"line {lineno}: expected 'g -> h'")
        a, b = line.split(sep, 1)
        pairs.append((check_permutation(a.strip(), group.degree), check_permutation(b.strip(), group.degree)))
    X, y = zip(*pairs) if pairs else ((), ())
    check_group_elements(X, group)
    check_group_elements(y, group)
    return check_total_map(X, y, group)


def format_map_table(f: dict, group: EnumeratedGroup) -> str:
    return "".join(f"{g} -> {f[g]}\n" for g in group)
