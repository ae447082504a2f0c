"""End-to-end controller synthesis over a classified reachability graph."""

from __future__ import annotations

from dataclasses import dataclass

from .classification import StateClassification
from .guards import (
    Guard,
    Polarity,
    choose_simpler,
    format_guard,
    free_guard,
    guard_fallback,
    guard_from_cover,
)
from .net import Marking, PetriNet, format_set
from .overstate import DEFAULT_MAX_CLOSURE, Reduction, format_stages, reduce_enabling, reduce_forbidding
from .reachability import ReachabilityGraph

METHODS = ("forbid", "enable", "best")


@dataclass(frozen=True)
class TransitionSynthesis:
    """How the guard of one controllable transition was obtained."""

    transition: int
    critical: frozenset[Marking]
    sound: frozenset[Marking]
    forbid: Reduction | None
    enable: Reduction | None
    guard: Guard

    @property
    def fallback(self) -> bool:
        return self.guard.fallback


@dataclass(frozen=True)
class Controller:
    guards: dict[int, Guard]
    provenance: dict[int, TransitionSynthesis]


def synthesize_transition(
    graph: ReachabilityGraph,
    cls: StateClassification,
    t: int,
    method: str = "best",
    exact: bool = False,
    max_closure: int = DEFAULT_MAX_CLOSURE,
) -> TransitionSynthesis:
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}")
    critical = frozenset(graph.states[s] for s in cls.critical[t])
    sound = frozenset(graph.states[s] for s in cls.sound[t])
    if not critical:
        return TransitionSynthesis(t, critical, sound, None, None, free_guard(t))

    forbid = enable = None
    forbid_guard = enable_guard = None
    if method in ("forbid", "best"):
        forbid = reduce_forbidding(critical, sound, exact, max_closure)
        if not forbid.empty:
            forbid_guard = guard_from_cover(t, forbid.cover, Polarity.FORBID)
    if method in ("enable", "best") and sound:
        enable = reduce_enabling(critical, sound, exact, max_closure)
        if not enable.empty:
            enable_guard = guard_from_cover(t, enable.cover, Polarity.ENABLE)
    guard = choose_simpler(forbid_guard, enable_guard, guard_fallback(t, critical))
    return TransitionSynthesis(t, critical, sound, forbid, enable, guard)


def synthesize(
    net: PetriNet,
    graph: ReachabilityGraph,
    cls: StateClassification,
    method: str = "best",
    exact: bool = False,
    max_closure: int = DEFAULT_MAX_CLOSURE,
) -> Controller:
    """One guard per controllable transition; FREE where nothing is critical."""
    provenance = {
        t: synthesize_transition(graph, cls, t, method, exact, max_closure)
        for t in net.controllable
    }
    return Controller({t: p.guard for t, p in provenance.items()}, provenance)


def format_trace(net: PetriNet, controller: Controller) -> str:
    out = []
    for t in sorted(controller.provenance):
        p = controller.provenance[t]
        out.append(f"== {net.transitions[t].name} ==")
        out.append(f"critical = {format_set(p.critical, net.places)}")
        out.append(f"sound = {format_set(p.sound, net.places)}")
        for r in (p.forbid, p.enable):
            if r is not None:
                out.append(f"-- {r.polarity} --")
                out.extend(format_stages(r, net.places))
        if p.fallback:
            out.append("fallback = full-state conditions (reduction empty)")
        out.append(f"guard = {format_guard(p.guard, net)}")
        out.append("")
    return "\n".join(out)
