"""Petri net model, marking algebra and the textual net format.

Markings and sub-markings are plain tuples of non-negative ints, one entry per
place in declaration order. A sub-marking used as a guard threshold or as an
over-state has exactly the same shape; only its interpretation differs.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import NetSyntaxError

Marking = tuple[int, ...]

_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_.\-]*$")
_SUPERSCRIPTS = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")
_FROM_SUPERSCRIPTS = str.maketrans("⁰¹²³⁴⁵⁶⁷⁸⁹", "0123456789")


@dataclass(frozen=True)
class Transition:
    name: str
    controllable: bool
    event: str | None = None


@dataclass(frozen=True)
class PetriNet:
    """A place/transition net with weighted arcs.

    ``pre[t][p]`` is the weight of the arc from place ``p`` into transition
    ``t`` and ``post[t][p]`` the weight of the arc from ``t`` to ``p``; both
    are 0 where no arc exists.
    """

    name: str
    places: tuple[str, ...]
    transitions: tuple[Transition, ...]
    pre: tuple[tuple[int, ...], ...]
    post: tuple[tuple[int, ...], ...]
    m0: Marking

    def __post_init__(self):
        if not self.places or not self.transitions:
            raise ValueError("a net needs at least one place and one transition")
        np_, nt = len(self.places), len(self.transitions)
        if len(self.pre) != nt or len(self.post) != nt:
            raise ValueError("incidence matrices must have one row per transition")
        for row in itertools.chain(self.pre, self.post):
            if len(row) != np_ or any(w < 0 for w in row):
                raise ValueError("incidence rows must be non-negative, one entry per place")
        if len(self.m0) != np_ or any(k < 0 for k in self.m0):
            raise ValueError("initial marking must be non-negative, one entry per place")

    @property
    def controllable(self) -> tuple[int, ...]:
        return tuple(i for i, t in enumerate(self.transitions) if t.controllable)

    def place_index(self, name: str) -> int:
        return self.places.index(name)

    def transition_index(self, name: str) -> int:
        for i, t in enumerate(self.transitions):
            if t.name == name:
                return i
        raise ValueError(f"unknown transition {name!r}")

    def is_enabled(self, m: Marking, t: int) -> bool:
        return all(k >= w for k, w in zip(m, self.pre[t]))

    def enabled(self, m: Marking) -> list[int]:
        """Indices of the transitions enabled at ``m``, in declaration order."""
        return [t for t in range(len(self.transitions)) if self.is_enabled(m, t)]

    def fire(self, m: Marking, t: int) -> Marking:
        if not self.is_enabled(m, t):
            raise ValueError(
                f"transition {self.transitions[t].name} is not enabled at "
                f"{support_word(m, self.places)}"
            )
        return tuple(k - a + b for k, a, b in zip(m, self.pre[t], self.post[t]))

    def unfire(self, m: Marking, t: int) -> Marking:
        """Reverse firing; raises if the predecessor would be negative."""
        prev = tuple(k + a - b for k, a, b in zip(m, self.pre[t], self.post[t]))
        if any(k < 0 for k in prev):
            raise ValueError(f"transition {self.transitions[t].name} cannot be reversed here")
        return prev

    def word(self, m: Marking) -> str:
        return support_word(m, self.places)


@dataclass(frozen=True)
class LinearConstraint:
    """Admissible states satisfy ``sum(coeffs[i] * m[i]) <= bound``."""

    coeffs: tuple[int, ...]
    bound: int

    def holds(self, m: Marking) -> bool:
        return sum(a * k for a, k in zip(self.coeffs, m)) <= self.bound


@dataclass(frozen=True)
class ForbiddenSpec:
    linear: tuple[LinearConstraint, ...] = ()
    markings: tuple[Marking, ...] = ()
    deadlock: bool = False

    @property
    def empty(self) -> bool:
        return not (self.linear or self.markings or self.deadlock)

    def violated_by(self, m: Marking) -> bool:
        """True if ``m`` breaks a linear constraint or is listed explicitly.

        Deadlocks are a property of the graph, not of a marking, and are
        handled during classification.
        """
        return m in self.markings or any(not c.holds(m) for c in self.linear)


# -- marking algebra ---------------------------------------------------------

def _check_dims(a: Sequence[int], b: Sequence[int]) -> None:
    if len(a) != len(b):
        raise ValueError(f"dimension mismatch: {len(a)} vs {len(b)}")


def covers(candidate: Marking, state: Marking) -> bool:
    """Non-strict containment: every threshold of ``candidate`` is met by ``state``."""
    _check_dims(candidate, state)
    return all(c <= s for c, s in zip(candidate, state))


def is_overstate(candidate: Marking, state: Marking) -> bool:
    """``candidate`` lies strictly below ``state`` in the componentwise order."""
    return covers(candidate, state) and tuple(candidate) != tuple(state)


def default_places(n: int) -> tuple[str, ...]:
    return tuple(f"P{i + 1}" for i in range(n))


def support(m: Marking, places: Sequence[str] | None = None) -> dict[str, int]:
    """Marked places with their token counts, in place order."""
    places = places or default_places(len(m))
    _check_dims(m, places)
    return {p: k for p, k in zip(places, m) if k}


def from_support(mapping: Mapping[str, int], places: Sequence[str]) -> Marking:
    unknown = set(mapping) - set(places)
    if unknown:
        raise ValueError(f"unknown places: {sorted(unknown)}")
    return tuple(int(mapping.get(p, 0)) for p in places)


def support_word(m: Marking, places: Sequence[str] | None = None) -> str:
    """Render a marking as a place-power word, e.g. ``P1P3²P6``.

    The all-zero marking renders as the empty string.
    """
    return "".join(
        p if k == 1 else p + str(k).translate(_SUPERSCRIPTS)
        for p, k in support(m, places).items()
    )


def parse_word(word: str, places: Sequence[str]) -> Marking:
    """Inverse of :func:`support_word`; also accepts ``P4^2`` for powers."""
    names = sorted(places, key=len, reverse=True)
    token = re.compile(
        "(" + "|".join(re.escape(p) for p in names) + r")(\^\d+|[⁰¹²³⁴⁵⁶⁷⁸⁹]+)?"
    )
    counts: dict[str, int] = {}
    pos = 0
    word = word.strip()
    while pos < len(word):
        mt = token.match(word, pos)
        if not mt:
            raise ValueError(f"cannot parse support word {word!r} at offset {pos}")
        power = mt.group(2)
        if power is None:
            k = 1
        elif power.startswith("^"):
            k = int(power[1:])
        else:
            k = int(power.translate(_FROM_SUPERSCRIPTS))
        counts[mt.group(1)] = counts.get(mt.group(1), 0) + k
        pos = mt.end()
    return from_support(counts, places)


def format_set(states: Iterable[Marking], places: Sequence[str] | None = None) -> str:
    """``{w1, w2, ...}`` with words in :func:`submarking_key` order."""
    return "{" + ", ".join(support_word(m, places) for m in sorted(states, key=submarking_key)) + "}"


def submarking_key(m: Marking) -> tuple:
    """Canonical order: fewer marked places, fewer tokens, then place order."""
    marked = tuple((i, k) for i, k in enumerate(m) if k)
    return (len(marked), sum(m), marked)


# -- text format -------------------------------------------------------------

@dataclass
class _Builder:
    name: str | None = None
    places: list[str] = field(default_factory=list)
    init: dict[str, int] = field(default_factory=dict)
    transitions: list[Transition] = field(default_factory=list)
    arcs: dict[tuple[str, str], int] = field(default_factory=dict)
    linear: list[tuple[dict[str, int], int, int]] = field(default_factory=list)
    markings: list[tuple[dict[str, int], int]] = field(default_factory=list)
    deadlock: bool = False
    names: set[str] = field(default_factory=set)

    def declare(self, name: str, lineno: int) -> None:
        if not _NAME_RE.match(name):
            raise NetSyntaxError(f"invalid identifier {name!r}", lineno)
        if name in self.names:
            raise NetSyntaxError(f"duplicate name {name!r}", lineno)
        self.names.add(name)


def _int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise NetSyntaxError(f"expected integer {what}, got {tok!r}", lineno) from None


def _parse_linear(toks: list[str], lineno: int) -> tuple[dict[str, int], int]:
    if len(toks) < 3 or toks[-2] != "<=":
        raise NetSyntaxError("linear constraint must end with '<= <bound>'", lineno)
    bound = _int(toks[-1], lineno, "bound")
    coeffs: dict[str, int] = {}
    sign = 1
    expect_term = True
    for tok in toks[:-2]:
        if expect_term:
            if "*" in tok:
                a, _, p = tok.partition("*")
                a = _int(a, lineno, "coefficient")
            else:
                a, p = 1, tok
                if p.startswith("-"):
                    a, p = -1, p[1:]
            coeffs[p] = coeffs.get(p, 0) + sign * a
            expect_term = False
        elif tok in ("+", "-"):
            sign = 1 if tok == "+" else -1
            expect_term = True
        else:
            raise NetSyntaxError(f"expected '+' or '-' in linear constraint, got {tok!r}", lineno)
    if expect_term:
        raise NetSyntaxError("incomplete linear constraint", lineno)
    return coeffs, bound


def parse_net(text: str) -> tuple[PetriNet, ForbiddenSpec]:
    """Parse a net description into a net and its forbidden-state specification."""
    b = _Builder()
    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = raw.split("#", 1)[0].split()
        if not toks:
            continue
        kw, args = toks[0], toks[1:]
        if kw == "net":
            if len(args) != 1:
                raise NetSyntaxError("usage: net <name>", lineno)
            if b.name is not None:
                raise NetSyntaxError("duplicate 'net' line", lineno)
            b.name = args[0]
        elif b.name is None:
            raise NetSyntaxError("document must start with 'net <name>'", lineno)
        elif kw == "place":
            if len(args) not in (1, 3) or (len(args) == 3 and args[1] != "init"):
                raise NetSyntaxError("usage: place <id> [init <n>]", lineno)
            b.declare(args[0], lineno)
            b.places.append(args[0])
            n = _int(args[2], lineno, "initial count") if len(args) == 3 else 0
            if n < 0:
                raise NetSyntaxError("initial count must be non-negative", lineno)
            b.init[args[0]] = n
        elif kw == "trans":
            if len(args) not in (2, 4) or args[1] not in ("ctrl", "unctrl") or (
                len(args) == 4 and args[2] != "event"
            ):
                raise NetSyntaxError("usage: trans <id> ctrl|unctrl [event <label>]", lineno)
            b.declare(args[0], lineno)
            b.transitions.append(
                Transition(args[0], args[1] == "ctrl", args[3] if len(args) == 4 else None)
            )
        elif kw == "arc":
            if len(args) not in (2, 3):
                raise NetSyntaxError("usage: arc <from> <to> [<weight>]", lineno)
            for n in args[:2]:
                if n not in b.names:
                    raise NetSyntaxError(f"arc references unknown node {n!r}", lineno)
            src, dst = args[0], args[1]
            if (src in b.places) == (dst in b.places):
                raise NetSyntaxError("an arc must connect a place and a transition", lineno)
            w = _int(args[2], lineno, "weight") if len(args) == 3 else 1
            if w < 1:
                raise NetSyntaxError("arc weight must be at least 1", lineno)
            if (src, dst) in b.arcs:
                raise NetSyntaxError(f"duplicate arc {src} -> {dst}", lineno)
            b.arcs[(src, dst)] = w
        elif kw == "forbid":
            if not args:
                raise NetSyntaxError("usage: forbid linear|marking|deadlock ...", lineno)
            kind = args[0]
            if kind == "linear":
                coeffs, bound = _parse_linear(args[1:], lineno)
                b.linear.append((coeffs, bound, lineno))
            elif kind == "marking":
                counts: dict[str, int] = {}
                for tok in args[1:]:
                    p, sep, n = tok.partition(":")
                    if not sep:
                        raise NetSyntaxError(f"expected <place>:<count>, got {tok!r}", lineno)
                    if p in counts:
                        raise NetSyntaxError(f"place {p!r} listed twice", lineno)
                    counts[p] = _int(n, lineno, "token count")
                    if counts[p] < 0:
                        raise NetSyntaxError("token count must be non-negative", lineno)
                b.markings.append((counts, lineno))
            elif kind == "deadlock" and len(args) == 1:
                b.deadlock = True
            else:
                raise NetSyntaxError(f"unknown forbid form {' '.join(args)!r}", lineno)
        else:
            raise NetSyntaxError(f"unknown keyword {kw!r}", lineno)

    if b.name is None:
        raise NetSyntaxError("empty document: missing 'net <name>'")
    if not b.places:
        raise NetSyntaxError("net declares no places")
    if not b.transitions:
        raise NetSyntaxError("net declares no transitions")
    if not any(b.init.values()):
        raise NetSyntaxError("initial marking has no tokens")

    pidx = {p: i for i, p in enumerate(b.places)}
    tidx = {t.name: i for i, t in enumerate(b.transitions)}
    pre = [[0] * len(b.places) for _ in b.transitions]
    post = [[0] * len(b.places) for _ in b.transitions]
    for (src, dst), w in b.arcs.items():
        if src in pidx:
            pre[tidx[dst]][pidx[src]] = w
        else:
            post[tidx[src]][pidx[dst]] = w

    def vector(counts, lineno):
        for p in counts:
            if p not in pidx:
                raise NetSyntaxError(f"unknown place {p!r}", lineno)
        return tuple(counts.get(p, 0) for p in b.places)

    spec = ForbiddenSpec(
        linear=tuple(LinearConstraint(vector(c, ln), bound) for c, bound, ln in b.linear),
        markings=tuple(vector(c, ln) for c, ln in b.markings),
        deadlock=b.deadlock,
    )
    net = PetriNet(
        name=b.name,
        places=tuple(b.places),
        transitions=tuple(b.transitions),
        pre=tuple(map(tuple, pre)),
        post=tuple(map(tuple, post)),
        m0=tuple(b.init[p] for p in b.places),
    )
    return net, spec


def render_net(net: PetriNet, spec: ForbiddenSpec | None = None) -> str:
    """Canonical text form; ``parse_net`` reads it back to an equal net."""
    lines = [f"net {net.name}"]
    for p, k in zip(net.places, net.m0):
        lines.append(f"place {p} init {k}" if k else f"place {p}")
    for t in net.transitions:
        line = f"trans {t.name} {'ctrl' if t.controllable else 'unctrl'}"
        if t.event is not None:
            line += f" event {t.event}"
        lines.append(line)
    for t, tr in enumerate(net.transitions):
        for p, w in zip(net.places, net.pre[t]):
            if w:
                lines.append(f"arc {p} {tr.name}" + (f" {w}" if w != 1 else ""))
        for p, w in zip(net.places, net.post[t]):
            if w:
                lines.append(f"arc {tr.name} {p}" + (f" {w}" if w != 1 else ""))
    if spec is not None:
        for c in spec.linear:
            terms = [(a, p) for a, p in zip(c.coeffs, net.places) if a] or [(0, net.places[0])]
            expr = f"{terms[0][0]}*{terms[0][1]}"
            for a, p in terms[1:]:
                expr += f" + {a}*{p}" if a > 0 else f" - {-a}*{p}"
            lines.append(f"forbid linear {expr} <= {c.bound}")
        for m in spec.markings:
            pairs = " ".join(f"{p}:{k}" for p, k in zip(net.places, m) if k)
            lines.append(f"forbid marking {pairs}".rstrip())
        if spec.deadlock:
            lines.append("forbid deadlock")
    return "\n".join(lines) + "\n"
