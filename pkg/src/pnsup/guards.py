"""Guard predicates on controllable transitions and the guard file format.

A guard term is a threshold sub-marking: it is satisfied at ``m`` when every
marked place of the term holds at least that many tokens in ``m``.

    FORBID  t may fire iff no term is satisfied
    ENABLE  t may fire iff some term is satisfied
    FREE    t may always fire

Guard file lines look like ``t1 FORBID (P1>=1&P4>=2)|(P6>=1)``.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import NetSyntaxError
from .net import Marking, PetriNet, covers, submarking_key


class Polarity(enum.Enum):
    FORBID = "FORBID"
    ENABLE = "ENABLE"
    FREE = "FREE"


@dataclass(frozen=True)
class Guard:
    transition: int
    polarity: Polarity
    terms: tuple[Marking, ...] = ()
    fallback: bool = False

    def __post_init__(self):
        if (self.polarity is Polarity.FREE) != (not self.terms):
            raise ValueError("FREE guards have no terms; FORBID/ENABLE guards need at least one")
        if any(not any(t) for t in self.terms):
            raise ValueError("guard terms must be nonzero")

    @property
    def complexity(self) -> int:
        """Number of (place, threshold) literals over all terms."""
        return sum(sum(1 for k in term if k) for term in self.terms)

    def satisfied_terms(self, m: Marking) -> list[Marking]:
        return [term for term in self.terms if covers(term, m)]

    def permits(self, m: Marking) -> bool:
        return evaluate(self, m)


def evaluate(guard: Guard, m: Marking) -> bool:
    """Whether the guard lets its transition fire at marking ``m``."""
    if guard.polarity is Polarity.FREE:
        return True
    hit = any(covers(term, m) for term in guard.terms)
    return hit if guard.polarity is Polarity.ENABLE else not hit


def free_guard(t: int) -> Guard:
    return Guard(t, Polarity.FREE)


def guard_from_cover(t: int, cover: Iterable[Marking], polarity: Polarity) -> Guard:
    terms = tuple(sorted(set(cover), key=submarking_key))
    if not terms:
        raise ValueError("cannot build a guard from an empty cover")
    return Guard(t, polarity, terms)


def guard_fallback(t: int, critical: Iterable[Marking]) -> Guard:
    """Unsimplified FORBID guard: one full-state threshold term per critical state."""
    terms = tuple(sorted(set(critical), key=submarking_key))
    if not terms:
        raise ValueError("fallback guard needs at least one critical state")
    return Guard(t, Polarity.FORBID, terms, fallback=True)


def choose_simpler(forbid: Guard | None, enable: Guard | None, fallback: Guard) -> Guard:
    """Fewest literals wins, then fewest terms; FORBID is kept on a full tie.

    ``None`` stands for an empty reduction. With neither reduction available
    the fallback guard is returned.
    """
    options = [g for g in (forbid, enable) if g is not None]
    if not options:
        return fallback
    return min(options, key=lambda g: (g.complexity, len(g.terms), g.polarity is not Polarity.FORBID))


# -- guard file --------------------------------------------------------------

def format_term(term: Marking, places: Sequence[str]) -> str:
    return "(" + "&".join(f"{p}>={k}" for p, k in zip(places, term) if k) + ")"


def format_guard(guard: Guard, net: PetriNet) -> str:
    line = f"{net.transitions[guard.transition].name} {guard.polarity.value}"
    if guard.terms:
        line += " " + "|".join(format_term(t, net.places) for t in guard.terms)
    return line


def format_guards(guards: Mapping[int, Guard], net: PetriNet) -> str:
    return "".join(format_guard(guards[t], net) + "\n" for t in sorted(guards))


_LITERAL_RE = re.compile(r"^([^&()|<>=\s]+)>=(\d+)$")


def _parse_terms(text: str, net: PetriNet, lineno: int) -> tuple[Marking, ...]:
    terms = []
    for chunk in text.split("|"):
        chunk = chunk.strip()
        if not (chunk.startswith("(") and chunk.endswith(")")):
            raise NetSyntaxError(f"term {chunk!r} must be parenthesised", lineno)
        counts = [0] * len(net.places)
        for lit in chunk[1:-1].split("&"):
            mt = _LITERAL_RE.match(lit.strip())
            if not mt:
                raise NetSyntaxError(f"bad literal {lit!r}; expected <place>>=<n>", lineno)
            place, k = mt.group(1), int(mt.group(2))
            if place not in net.places:
                raise NetSyntaxError(f"unknown place {place!r}", lineno)
            if k < 1:
                raise NetSyntaxError("thresholds must be at least 1", lineno)
            i = net.place_index(place)
            if counts[i]:
                raise NetSyntaxError(f"place {place!r} repeated in one term", lineno)
            counts[i] = k
        terms.append(tuple(counts))
    return tuple(terms)


def parse_guards(text: str, net: PetriNet) -> dict[int, Guard]:
    """Read a guard file. Controllable transitions without a line get FREE."""
    guards: dict[int, Guard] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split(None, 2)
        if len(parts) < 2:
            raise NetSyntaxError("expected '<transition> FORBID|ENABLE|FREE [terms]'", lineno)
        name, pol = parts[0], parts[1]
        try:
            t = net.transition_index(name)
        except ValueError:
            raise NetSyntaxError(f"unknown transition {name!r}", lineno) from None
        if not net.transitions[t].controllable:
            raise NetSyntaxError(f"transition {name!r} is uncontrollable", lineno)
        if t in guards:
            raise NetSyntaxError(f"duplicate guard for {name!r}", lineno)
        try:
            polarity = Polarity(pol)
        except ValueError:
            raise NetSyntaxError(f"unknown polarity {pol!r}", lineno) from None
        if polarity is Polarity.FREE:
            if len(parts) > 2:
                raise NetSyntaxError("FREE guards take no terms", lineno)
            guards[t] = free_guard(t)
        else:
            if len(parts) < 3:
                raise NetSyntaxError(f"{pol} guard needs at least one term", lineno)
            guards[t] = Guard(t, polarity, _parse_terms(parts[2], net, lineno))
    for t in net.controllable:
        guards.setdefault(t, free_guard(t))
    return guards
