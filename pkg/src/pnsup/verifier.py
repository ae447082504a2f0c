"""Brute-force closed-loop replay of a net under a set of guards."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Mapping

from .classification import StateClassification
from .errors import CoverSearchTooLarge
from .guards import Guard, evaluate, free_guard
from .net import PetriNet, covers
from .overstate import EXACT_COVER_MAX_ROWS, CoverChart, reduce_forbidding
from .reachability import ReachabilityGraph


@dataclass(frozen=True)
class VerificationReport:
    safe: bool
    maximally_permissive: bool
    reachable: frozenset[int]
    target: frozenset[int]
    blocked_sound_firings: tuple[tuple[int, int], ...]
    allowed_critical_firings: tuple[tuple[int, int], ...]
    induced_deadlocks: frozenset[int]

    @property
    def ok(self) -> bool:
        return self.safe and self.maximally_permissive


def _reach(graph: ReachabilityGraph, allowed) -> frozenset[int]:
    seen = {graph.initial}
    queue = deque([graph.initial])
    while queue:
        s = queue.popleft()
        for e in graph.out[s]:
            if allowed(e) and e[2] not in seen:
                seen.add(e[2])
                queue.append(e[2])
    return frozenset(seen)


def verify(
    net: PetriNet,
    graph: ReachabilityGraph,
    cls: StateClassification,
    guards: Mapping[int, Guard],
) -> VerificationReport:
    """Replay the plant with controllable firings filtered by ``guards``.

    The closed loop is compared with the best any supervisor can do: the
    admissible states reachable through admissible states only. Uncontrollable
    transitions always fire when enabled.
    """
    guards = {t: guards.get(t, free_guard(t)) for t in net.controllable}

    def permitted(e) -> bool:
        src, t, _ = e
        return not net.transitions[t].controllable or evaluate(guards[t], graph.states[src])

    reachable = _reach(graph, permitted)
    target = _reach(graph, lambda e: e[2] in cls.admissible)

    blocked, allowed = [], []
    for src in sorted(cls.admissible):
        for e in graph.out[src]:
            _, t, dst = e
            if not net.transitions[t].controllable:
                continue
            ok = permitted(e)
            if dst in cls.admissible and not ok:
                blocked.append((src, t))
            elif dst in cls.forbidden and ok:
                allowed.append((src, t))

    induced = frozenset(
        s
        for s in reachable
        if s in cls.admissible and graph.out[s] and not any(permitted(e) for e in graph.out[s])
    )
    safe = not allowed and not (reachable & cls.forbidden)
    maxperm = reachable == target and not any(s in target for s, _ in blocked)
    return VerificationReport(
        safe=safe,
        maximally_permissive=maxperm,
        reachable=reachable,
        target=target,
        blocked_sound_firings=tuple(blocked),
        allowed_critical_firings=tuple(allowed),
        induced_deadlocks=induced,
    )


def format_report(graph: ReachabilityGraph, report: VerificationReport) -> str:
    net = graph.net

    def firing(pair):
        s, t = pair
        return f"({graph.word(s)}, {net.transitions[t].name})"

    lines = [
        f"closed-loop reachable states: {len(report.reachable)}",
        f"admissible states reachable by an ideal supervisor: {len(report.target)}",
        f"safe: {str(report.safe).lower()}",
        f"maximally permissive: {str(report.maximally_permissive).lower()}",
    ]
    if report.allowed_critical_firings:
        lines.append("allowed critical firings: " + ", ".join(map(firing, report.allowed_critical_firings)))
    if report.blocked_sound_firings:
        lines.append("blocked sound firings: " + ", ".join(map(firing, report.blocked_sound_firings)))
    if report.induced_deadlocks:
        words = ", ".join(graph.word(s) for s in sorted(report.induced_deadlocks))
        lines.append(f"warning: control-induced deadlocks at {{{words}}}")
    lines.append(
        f"RESULT safe={str(report.safe).lower()} maxperm={str(report.maximally_permissive).lower()}"
    )
    return "\n".join(lines) + "\n"


def blocked_states(graph: ReachabilityGraph, cls: StateClassification, t: int, terms) -> frozenset[int]:
    """Admissible states enabling ``t`` where some term of ``terms`` is satisfied."""
    return frozenset(
        s
        for s in cls.admissible
        if graph.successor(s, t) is not None
        and any(covers(term, graph.states[s]) for term in terms)
    )


def cross_check_exact(
    net: PetriNet,
    graph: ReachabilityGraph,
    cls: StateClassification,
    t: int,
    max_rows: int = EXACT_COVER_MAX_ROWS,
) -> bool:
    """Compare the greedy cover with a minimum cover found by exhaustive search.

    Both must block exactly the critical states of ``t``. Raises
    :class:`CoverSearchTooLarge` when the minimized candidate set has more
    than ``max_rows`` elements.
    """
    if not net.transitions[t].controllable or not cls.critical[t]:
        raise ValueError("cross_check_exact needs a controllable transition with critical states")
    critical = frozenset(graph.states[s] for s in cls.critical[t])
    sound = frozenset(graph.states[s] for s in cls.sound[t])
    red = reduce_forbidding(critical, sound)
    if red.empty:
        # both sides fall back to the same full-state guard
        return True
    chart = CoverChart.build(red.minimal, critical)
    if len(chart.rows) > max_rows:
        raise CoverSearchTooLarge(f"{len(chart.rows)} candidates exceed the search cap {max_rows}")

    masks = [chart.row_mask(i) for i in range(len(chart.rows))]
    full = (1 << len(chart.columns)) - 1
    best = None
    for size in range(1, len(chart.rows) + 1):
        for combo in itertools.combinations(range(len(chart.rows)), size):
            acc = 0
            for i in combo:
                acc |= masks[i]
            if acc == full:
                best = [chart.rows[i] for i in combo]
                break
        if best is not None:
            break
    if best is None:
        return False
    greedy = blocked_states(graph, cls, t, red.cover)
    optimum = blocked_states(graph, cls, t, best)
    return greedy == optimum == cls.critical[t]
