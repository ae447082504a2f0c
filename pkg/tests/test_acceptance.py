"""Exit criteria, one test per criterion.

Each test records a ``[criterion N] PASS|FAIL`` line (printed in the pytest
terminal summary) listing any failing sub-check, then asserts.
"""

import itertools
import random
import time

import pytest

from conftest import ACCEPTANCE_LINES, NETS
from netgen import random_case
from pnsup import (
    build_graph,
    classify,
    cross_check_exact,
    evaluate,
    format_guards,
    is_overstate,
    parse_guards,
    parse_net,
    parse_word,
    render_net,
    synthesize,
    verify,
)
from pnsup.guards import Polarity
from pnsup.overstate import closure

RUNTIME_LIMIT_FIXTURE = 1.0
RUNTIME_LIMIT_CAMPAIGN = 30.0
CAMPAIGN_SIZE = 100


class Checks:
    def __init__(self, number, title):
        self.number, self.title = number, title
        self.failed = []

    def check(self, name, ok, detail=""):
        if not ok:
            self.failed.append(f"{name}{': ' + detail if detail else ''}")

    def equal(self, name, got, want):
        self.check(name, got == want, f"got {got!r}, expected {want!r}")

    def finish(self):
        status = "PASS" if not self.failed else "FAIL"
        line = f"[criterion {self.number}] {status} {self.title}"
        if self.failed:
            line += " -- " + "; ".join(self.failed)
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert not self.failed, line


def run_pipeline(name, method="best"):
    start = time.perf_counter()
    net, spec = parse_net((NETS / f"{name}.net").read_text())
    graph = build_graph(net)
    cls = classify(net, graph, spec)
    ctl = synthesize(net, graph, cls, method)
    report = verify(net, graph, cls, ctl.guards)
    elapsed = time.perf_counter() - start
    return net, graph, cls, ctl, report, elapsed


def words(net, markings):
    return {net.word(m) for m in markings}


def state_words(graph, ids):
    return {graph.word(s) for s in ids}


def test_criterion_1_safe_example():
    c = Checks(1, "mb-safe end-to-end")
    net, graph, cls, ctl, report, elapsed = run_pipeline("mb-safe")
    t1 = net.transition_index("t1")
    p = ctl.provenance[t1]
    c.equal("M_B", state_words(graph, cls.border), {"P2P4P5", "P2P4P6"})
    c.equal("M_t1^C", words(net, p.critical), {"P1P4P5", "P1P4P6"})
    c.equal("M_t1^S", words(net, p.sound), {"P1P3P5"})
    c.equal("C3", words(net, p.forbid.minimal), {"P4", "P6"})
    c.equal("C4", words(net, p.forbid.cover), {"P4"})
    c.equal("guards", format_guards(ctl.guards, net), "t1 FORBID (P4>=1)\nt3 FREE\n")
    c.check("runtime", elapsed < RUNTIME_LIMIT_FIXTURE, f"{elapsed:.3f}s")
    c.finish()


def test_criterion_2_non_safe_example():
    c = Checks(2, "mb-2 end-to-end")
    net, graph, cls, ctl, report, elapsed = run_pipeline("mb-2")
    t1 = net.transition_index("t1")
    p = ctl.provenance[t1]
    c.equal("M_t1^C", words(net, p.critical), {"P1P4²P5", "P1P4²P6"})
    c.equal("M_t1^S", words(net, p.sound), {"P1P3²P5", "P1P3P4P5", "P1P3²P6", "P1P3P4P6"})
    c.equal("C2", words(net, p.forbid.diff),
            {"P4²", "P1P4²", "P4²P5", "P1P4²P5", "P4²P6", "P1P4²P6"})
    c.equal("C3", words(net, p.forbid.minimal), {"P4²"})
    c.equal("C4", words(net, p.forbid.cover), {"P4²"})
    c.check("guard line", "t1 FORBID (P4>=2)\n" in format_guards(ctl.guards, net))
    c.check("runtime", elapsed < RUNTIME_LIMIT_FIXTURE, f"{elapsed:.3f}s")
    c.finish()


def test_criterion_3_dual_method():
    c = Checks(3, "dual (enabling) method on mb-safe")
    net, graph, cls, ctl, report, _ = run_pipeline("mb-safe", "enable")
    t1 = net.transition_index("t1")
    p = ctl.provenance[t1]
    c.equal("S2", words(net, p.enable.diff), {"P3", "P3P5", "P1P3P5"})
    c.equal("guard", format_guards(ctl.guards, net).splitlines()[0], "t1 ENABLE (P3>=1)")
    forbid_guard = synthesize(net, graph, cls, "forbid").guards[t1]
    c.equal("polarities", (forbid_guard.polarity, ctl.guards[t1].polarity),
            (Polarity.FORBID, Polarity.ENABLE))
    disagree = [graph.word(s) for s in sorted(cls.admissible)
                if evaluate(forbid_guard, graph.states[s]) != evaluate(ctl.guards[t1], graph.states[s])]
    c.equal("agreement on admissible states", disagree, [])
    c.finish()


def test_criterion_4_maximal_permissiveness():
    c = Checks(4, "verifier: safe and maximally permissive")
    for name, count in (("mb-safe", 6), ("mb-2", 10)):
        *_, report, _ = run_pipeline(name)
        c.check(f"{name} safe", report.safe)
        c.check(f"{name} maxperm", report.maximally_permissive)
        c.equal(f"{name} closed-loop states", len(report.reachable), count)
    c.finish()


def test_criterion_5_random_campaign():
    c = Checks(5, f"property campaign over {CAMPAIGN_SIZE} random bounded nets")
    start = time.perf_counter()
    exact_checked = 0
    for seed in range(CAMPAIGN_SIZE):
        net, spec, g, cls = random_case(seed)
        c.check(f"seed {seed} size", len(net.places) <= 6 and len(net.transitions) <= 6
                and max(max(m) for m in g.states) <= 3)
        # (a) no uncontrollable escape from the admissible region
        escapes = [(s, t) for s, t, d in g.edges
                   if s in cls.admissible and d in cls.forbidden and not net.transitions[t].controllable]
        c.check(f"seed {seed} (a)", not escapes, str(escapes))
        ctl = synthesize(net, g, cls)
        # (b) every non-fallback guard blocks exactly its critical states
        for t, guard in ctl.guards.items():
            if guard.fallback:
                continue
            blocked = {s for s in cls.admissible
                       if net.is_enabled(g.states[s], t) and not evaluate(guard, g.states[s])}
            c.check(f"seed {seed} (b) {net.transitions[t].name}", blocked == set(cls.critical[t]))
        # (c) verifier confirms safety
        report = verify(net, g, cls, ctl.guards)
        c.check(f"seed {seed} (c)", report.safe)
        # (d) greedy cover agrees with the exhaustive oracle
        for t in net.controllable:
            if cls.critical[t]:
                exact_checked += 1
                c.check(f"seed {seed} (d) {net.transitions[t].name}", cross_check_exact(net, g, cls, t))
    elapsed = time.perf_counter() - start
    c.check("exhaustive oracle exercised", exact_checked >= CAMPAIGN_SIZE // 2, str(exact_checked))
    c.check("runtime", elapsed < RUNTIME_LIMIT_CAMPAIGN, f"{elapsed:.2f}s")
    c.finish()


def test_criterion_6_algebraic_invariants():
    c = Checks(6, "closure cardinality, strict partial order, round trips")
    rng = random.Random(2024)
    bad = 0
    for _ in range(1000):
        m = tuple(rng.randint(0, 3) for _ in range(rng.randint(1, 6)))
        expected = 1
        for k in m:
            expected *= k + 1
        if len(closure({m})) != expected - 1:
            bad += 1
    c.equal("closure cardinality mismatches", bad, 0)

    top = (2, 1, 2, 1)
    subs = list(itertools.product(*(range(k + 1) for k in top)))
    irreflexive = all(not is_overstate(a, a) for a in subs)
    antisymmetric = all(not (is_overstate(a, b) and is_overstate(b, a)) for a in subs for b in subs)
    transitive = all(
        is_overstate(a, b2)
        for a in subs for b in subs if is_overstate(a, b)
        for b2 in subs if is_overstate(b, b2)
    )
    c.check("irreflexive", irreflexive)
    c.check("antisymmetric", antisymmetric)
    c.check("transitive", transitive)

    for name in ("mb-safe", "mb-2"):
        net, spec = parse_net((NETS / f"{name}.net").read_text())
        text = render_net(net, spec)
        c.check(f"{name} net round trip", render_net(*parse_net(text)) == text
                and parse_net(text) == (net, spec))
        g = build_graph(net)
        guards = format_guards(synthesize(net, g, classify(net, g, spec)).guards, net)
        c.equal(f"{name} guard round trip", format_guards(parse_guards(guards, net), net), guards)
    net, _ = parse_net((NETS / "mb-safe.net").read_text())
    sample = "t1 ENABLE (P1>=1&P3>=2)|(P5>=1)\nt3 FORBID (P4>=1)\n"
    c.equal("multi-term guard round trip", format_guards(parse_guards(sample, net), net), sample)
    c.equal("support word inverse", parse_word("P1P3²P6", net.places), (1, 0, 2, 0, 0, 1))
    c.finish()
