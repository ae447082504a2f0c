"""Over-state reduction of forbidding (and enabling) conditions.

The pipeline for one controllable transition is::

    C1 = closure(critical)        S1 = closure(sound)
    C2 = C1 - S1                  # no survivor lies below a sound state
    C3 = minimal elements of C2   # most general candidates
    C4 = cover of the critical states picked from a C3 x critical chart

The enabling variant swaps the roles of the two state sets.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Collection, Iterable, Sequence

from .errors import ClosureTooLarge, CoverSearchTooLarge, InfeasibleCover
from .net import Marking, covers, format_set, submarking_key

DEFAULT_MAX_CLOSURE = 2**20
EXACT_COVER_MAX_ROWS = 20


def closure_size(m: Marking) -> int:
    return math.prod(k + 1 for k in m) - 1


def closure(states: Iterable[Marking], max_size: int = DEFAULT_MAX_CLOSURE) -> frozenset[Marking]:
    """Every nonzero sub-marking below some state of ``states`` (states included)."""
    states = list(states)
    bound = sum(closure_size(m) for m in states)
    if bound > max_size:
        raise ClosureTooLarge(
            f"over-state closure would hold up to {bound} elements (limit {max_size}); "
            "raise --max-closure or fall back to full-state conditions"
        )
    out: set[Marking] = set()
    for m in states:
        for v in itertools.product(*(range(k + 1) for k in m)):
            if any(v):
                out.add(v)
    return frozenset(out)


def subtract_sound(candidates: Collection[Marking], avoid: Collection[Marking]) -> frozenset[Marking]:
    return frozenset(candidates) - frozenset(avoid)


def minimize(candidates: Iterable[Marking]) -> frozenset[Marking]:
    """Keep the candidates with no other candidate strictly below them."""
    kept: list[Marking] = []
    for v in sorted(set(candidates), key=sum):
        # anything strictly below v has a smaller token sum and is already settled
        if not any(covers(u, v) for u in kept):
            kept.append(v)
    return frozenset(kept)


@dataclass(frozen=True)
class CoverChart:
    rows: tuple[Marking, ...]
    columns: tuple[Marking, ...]
    hits: tuple[tuple[bool, ...], ...]

    @classmethod
    def build(cls, rows: Iterable[Marking], columns: Iterable[Marking]) -> CoverChart:
        rows = tuple(sorted(rows, key=submarking_key))
        columns = tuple(sorted(columns, key=submarking_key))
        hits = tuple(tuple(covers(r, c) for c in columns) for r in rows)
        return cls(rows, columns, hits)

    def uncoverable(self) -> list[int]:
        return [j for j in range(len(self.columns)) if not any(h[j] for h in self.hits)]

    def row_mask(self, i: int) -> int:
        return sum(1 << j for j, h in enumerate(self.hits[i]) if h)


def _literals(rows: Iterable[Marking]) -> int:
    return sum(sum(1 for k in r if k) for r in rows)


def select_cover(chart: CoverChart) -> tuple[Marking, ...]:
    """Essential rows first, then greedily the row hitting most uncovered columns.

    Ties go to the row with fewer marked places, then fewer tokens, then the
    earlier place order (``submarking_key``).
    """
    missing = chart.uncoverable()
    if missing:
        raise InfeasibleCover(f"{len(missing)} column(s) are covered by no row")
    n = len(chart.columns)
    selected: list[int] = []
    for j in range(n):
        hitting = [i for i in range(len(chart.rows)) if chart.hits[i][j]]
        if len(hitting) == 1 and hitting[0] not in selected:
            selected.append(hitting[0])
    uncovered = (1 << n) - 1
    for i in selected:
        uncovered &= ~chart.row_mask(i)
    masks = [chart.row_mask(i) for i in range(len(chart.rows))]
    while uncovered:
        # rows are pre-sorted by submarking_key, so max() keeps the first on ties
        best = max(
            (i for i in range(len(chart.rows)) if i not in selected),
            key=lambda i: (bin(masks[i] & uncovered).count("1"), -i),
        )
        selected.append(best)
        uncovered &= ~masks[best]
    return tuple(sorted((chart.rows[i] for i in selected), key=submarking_key))


def exact_cover(chart: CoverChart, max_rows: int = EXACT_COVER_MAX_ROWS) -> tuple[Marking, ...]:
    """Minimum-cardinality cover by exhaustive search.

    Among minimum covers the one with the fewest literals wins, then the
    lexicographically smallest by ``submarking_key``.
    """
    if len(chart.rows) > max_rows:
        raise CoverSearchTooLarge(f"{len(chart.rows)} rows exceed the exhaustive limit {max_rows}")
    if chart.uncoverable():
        raise InfeasibleCover("some column is covered by no row")
    full = (1 << len(chart.columns)) - 1
    masks = [chart.row_mask(i) for i in range(len(chart.rows))]
    for size in range(0 if not full else 1, len(chart.rows) + 1):
        found = []
        for combo in itertools.combinations(range(len(chart.rows)), size):
            acc = 0
            for i in combo:
                acc |= masks[i]
            if acc == full:
                rows = [chart.rows[i] for i in combo]
                found.append((_literals(rows), [submarking_key(r) for r in rows], rows))
        if found:
            return tuple(min(found, key=lambda f: f[:2])[2])
    raise InfeasibleCover("no cover found")  # unreachable once every column is hit


@dataclass(frozen=True)
class Reduction:
    """Stage outputs of one reduction run.

    For the forbidding direction ``target`` holds the critical states,
    ``first``/``avoid``/``diff``/``minimal``/``cover`` are C1/S1/C2/C3/C4. For
    the enabling direction they are S1/C1/S2/S3/S4 over the sound states.
    ``cover`` is None when the reduction is empty.
    """

    polarity: str
    target: frozenset[Marking]
    first: frozenset[Marking]
    avoid: frozenset[Marking]
    diff: frozenset[Marking]
    minimal: frozenset[Marking]
    cover: tuple[Marking, ...] | None

    @property
    def empty(self) -> bool:
        return self.cover is None


def _reduce(
    polarity: str,
    target: Collection[Marking],
    other: Collection[Marking],
    exact: bool,
    max_closure: int,
) -> Reduction:
    target = frozenset(target)
    first = closure(target, max_closure)
    avoid = closure(other, max_closure)
    diff = subtract_sound(first, avoid)
    minimal = minimize(diff)
    chart = CoverChart.build(minimal, target)
    cover = None
    if minimal and not chart.uncoverable():
        if exact and len(chart.rows) <= EXACT_COVER_MAX_ROWS:
            cover = exact_cover(chart)
        else:
            cover = select_cover(chart)
    return Reduction(polarity, target, first, avoid, diff, minimal, cover)


def reduce_forbidding(
    critical: Collection[Marking],
    sound: Collection[Marking],
    exact: bool = False,
    max_closure: int = DEFAULT_MAX_CLOSURE,
) -> Reduction:
    if not critical:
        raise ValueError("reduce_forbidding needs at least one critical state")
    return _reduce("forbid", critical, sound, exact, max_closure)


def reduce_enabling(
    critical: Collection[Marking],
    sound: Collection[Marking],
    exact: bool = False,
    max_closure: int = DEFAULT_MAX_CLOSURE,
) -> Reduction:
    if not sound:
        raise ValueError("reduce_enabling needs at least one sound state")
    return _reduce("enable", sound, critical, exact, max_closure)


def format_stages(r: Reduction, places: Sequence[str]) -> list[str]:
    names = ("C1", "S1", "C2", "C3", "C4") if r.polarity == "forbid" else ("S1", "C1", "S2", "S3", "S4")
    values = (r.first, r.avoid, r.diff, r.minimal)
    lines = [f"{n} = {format_set(v, places)}" for n, v in zip(names, values)]
    lines.append(f"{names[4]} = " + ("EMPTY" if r.cover is None else format_set(r.cover, places)))
    return lines
