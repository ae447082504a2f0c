"""Breadth-first reachability graph with deterministic state numbering."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from .errors import BoundExceeded, StateLimitExceeded
from .net import Marking, PetriNet

if TYPE_CHECKING:
    from .classification import StateClassification

DEFAULT_MAX_STATES = 1_000_000
DEFAULT_MAX_TOKENS = 64

Edge = tuple[int, int, int]


@dataclass(frozen=True)
class ReachabilityGraph:
    """Reachable markings indexed by state id; state 0 is the initial marking.

    ``edges`` holds ``(source, transition, target)`` triples in the order
    they were discovered.
    """

    net: PetriNet
    states: tuple[Marking, ...]
    edges: tuple[Edge, ...]
    deadlocks: frozenset[int]
    initial: int = 0
    index: dict[Marking, int] = field(default_factory=dict, compare=False, repr=False)
    out: tuple[tuple[Edge, ...], ...] = field(default=(), compare=False, repr=False)
    into: tuple[tuple[Edge, ...], ...] = field(default=(), compare=False, repr=False)

    def __len__(self):
        return len(self.states)

    def word(self, s: int) -> str:
        return self.net.word(self.states[s])

    def successor(self, s: int, t: int) -> int | None:
        for _, tt, d in self.out[s]:
            if tt == t:
                return d
        return None


def build_graph(
    net: PetriNet,
    max_states: int = DEFAULT_MAX_STATES,
    max_tokens: int = DEFAULT_MAX_TOKENS,
) -> ReachabilityGraph:
    """Explore every marking reachable from ``net.m0``.

    Raises :class:`StateLimitExceeded` past ``max_states`` distinct markings
    and :class:`BoundExceeded` as soon as a place holds more than
    ``max_tokens`` tokens.
    """
    if max_states < 1 or max_tokens < 1:
        raise ValueError("limits must be positive")

    def check(m: Marking) -> None:
        for p, k in zip(net.places, m):
            if k > max_tokens:
                raise BoundExceeded(
                    f"place {p} reached {k} tokens (limit {max_tokens}); the net is likely unbounded"
                )

    check(net.m0)
    index = {net.m0: 0}
    states = [net.m0]
    edges: list[Edge] = []
    queue = deque([0])
    while queue:
        s = queue.popleft()
        m = states[s]
        for t in net.enabled(m):
            m2 = net.fire(m, t)
            d = index.get(m2)
            if d is None:
                check(m2)
                if len(states) >= max_states:
                    raise StateLimitExceeded(f"more than {max_states} reachable states")
                d = index[m2] = len(states)
                states.append(m2)
                queue.append(d)
            edges.append((s, t, d))

    out: list[list[Edge]] = [[] for _ in states]
    into: list[list[Edge]] = [[] for _ in states]
    for e in edges:
        out[e[0]].append(e)
        into[e[2]].append(e)
    return ReachabilityGraph(
        net=net,
        states=tuple(states),
        edges=tuple(edges),
        deadlocks=frozenset(s for s in range(len(states)) if not out[s]),
        index=index,
        out=tuple(map(tuple, out)),
        into=tuple(map(tuple, into)),
    )


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(graph: ReachabilityGraph, classification: StateClassification | None = None) -> str:
    """Render the graph as DOT, nodes in state-id order.

    Forbidden states are filled; border forbidden states also get a double
    outline.
    """
    net = graph.net
    lines = [f"digraph {_quote(net.name)} {{", "  node [shape=ellipse];"]
    for s, m in enumerate(graph.states):
        attrs = [f"label={_quote(net.word(m) or '{}')}"]
        if classification is not None and s in classification.forbidden:
            attrs.append("style=filled")
            if s in classification.border:
                attrs.append("peripheries=2")
        if s == graph.initial:
            attrs.append("xlabel=\"m0\"")
        lines.append(f"  s{s} [{', '.join(attrs)}];")
    for src, t, dst in graph.edges:
        lines.append(f"  s{src} -> s{dst} [label={_quote(net.transitions[t].name)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
