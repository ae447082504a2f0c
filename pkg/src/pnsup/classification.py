"""Admissible/forbidden partition, border states and critical/sound sets."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NoSupervisorExists
from .net import ForbiddenSpec, PetriNet
from .reachability import ReachabilityGraph


@dataclass(frozen=True)
class StateClassification:
    admissible: frozenset[int]
    forbidden: frozenset[int]
    border: frozenset[int]
    critical: dict[int, frozenset[int]]
    sound: dict[int, frozenset[int]]

    @property
    def critical_transitions(self) -> frozenset[int]:
        return frozenset(t for t, c in self.critical.items() if c)


def forbidden_closure(net: PetriNet, graph: ReachabilityGraph, seed) -> frozenset[int]:
    """Smallest superset of ``seed`` closed under uncontrollable predecessors."""
    forbidden = set(seed)
    work = list(forbidden)
    while work:
        s = work.pop()
        for src, t, _ in graph.into[s]:
            if not net.transitions[t].controllable and src not in forbidden:
                forbidden.add(src)
                work.append(src)
    return frozenset(forbidden)


def _split(graph: ReachabilityGraph, admissible, t: int) -> tuple[frozenset[int], frozenset[int]]:
    critical, sound = set(), set()
    for s in admissible:
        d = graph.successor(s, t)
        if d is None:
            continue
        (sound if d in admissible else critical).add(s)
    return frozenset(critical), frozenset(sound)


def critical_sound_sets(
    graph: ReachabilityGraph, classification: StateClassification, t: int
) -> tuple[frozenset[int], frozenset[int]]:
    """States from which firing ``t`` leaves / stays in the admissible region."""
    if not graph.net.transitions[t].controllable:
        raise ValueError(f"transition {graph.net.transitions[t].name} is uncontrollable")
    return _split(graph, classification.admissible, t)


def classify(net: PetriNet, graph: ReachabilityGraph, spec: ForbiddenSpec) -> StateClassification:
    seed = {s for s, m in enumerate(graph.states) if spec.violated_by(m)}
    if spec.deadlock:
        seed |= graph.deadlocks
    forbidden = forbidden_closure(net, graph, seed)
    if graph.initial in forbidden:
        raise NoSupervisorExists(
            f"initial state {graph.word(graph.initial)} is forbidden; no supervisor exists"
        )
    admissible = frozenset(range(len(graph))) - forbidden
    border = frozenset(
        s for s in forbidden if any(src in admissible for src, _, _ in graph.into[s])
    )
    critical, sound = {}, {}
    for t in net.controllable:
        critical[t], sound[t] = _split(graph, admissible, t)
    return StateClassification(admissible, forbidden, border, critical, sound)


def format_classification(graph: ReachabilityGraph, cls: StateClassification) -> str:
    net = graph.net

    def words(ids):
        return "{" + ", ".join(graph.word(s) for s in sorted(ids)) + "}"

    lines = [
        f"|M_A| = {len(cls.admissible)}",
        f"|M_F| = {len(cls.forbidden)}",
        f"|M_B| = {len(cls.border)}",
        f"M_B = {words(cls.border)}",
    ]
    for t in net.controllable:
        name = net.transitions[t].name
        lines.append(f"critical({name}) = {words(cls.critical[t])}")
        lines.append(f"sound({name}) = {words(cls.sound[t])}")
    return "\n".join(lines) + "\n"
