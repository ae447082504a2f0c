"""Seeded generator of small bounded nets with a random linear forbidden constraint."""

import random

from pnsup import (
    ForbiddenSpec,
    LimitExceeded,
    LinearConstraint,
    NoSupervisorExists,
    PetriNet,
    Transition,
    build_graph,
    classify,
)

MAX_TOKENS = 3


def random_net(rng, n_places, n_trans):
    pre, post = [], []
    for _ in range(n_trans):
        row_pre = [0] * n_places
        row_post = [0] * n_places
        for p in rng.sample(range(n_places), rng.randint(1, min(2, n_places))):
            row_pre[p] = rng.choice((1, 1, 1, 2))
        for p in rng.sample(range(n_places), rng.randint(1, min(2, n_places))):
            row_post[p] = rng.choice((1, 1, 1, 2))
        pre.append(tuple(row_pre))
        post.append(tuple(row_post))
    ctrl = [rng.random() < 0.6 for _ in range(n_trans)]
    if not any(ctrl):
        ctrl[rng.randrange(n_trans)] = True
    m0 = [rng.randint(0, 2) for _ in range(n_places)]
    if not any(m0):
        m0[rng.randrange(n_places)] = 1
    return PetriNet(
        name="rand",
        places=tuple(f"P{i + 1}" for i in range(n_places)),
        transitions=tuple(
            Transition(f"t{i + 1}", c) for i, c in enumerate(ctrl)
        ),
        pre=tuple(pre),
        post=tuple(post),
        m0=tuple(m0),
    )


def random_case(seed, max_states=400):
    """Return (net, spec, graph, cls) for ``seed``; resamples internally until
    the net is bounded by MAX_TOKENS, something is forbidden, and the initial
    state stays admissible."""
    rng = random.Random(seed)
    while True:
        net = random_net(rng, rng.randint(2, 6), rng.randint(2, 6))
        try:
            graph = build_graph(net, max_states=max_states, max_tokens=MAX_TOKENS)
        except LimitExceeded:
            continue
        if len(graph) < 6:
            continue
        coeffs = [0] * len(net.places)
        for p in rng.sample(range(len(net.places)), rng.randint(1, min(3, len(net.places)))):
            coeffs[p] = rng.choice((1, 1, 2, -1))
        values = sorted({sum(a * k for a, k in zip(coeffs, m)) for m in graph.states})
        v0 = sum(a * k for a, k in zip(coeffs, net.m0))
        bounds = [v for v in values if v0 <= v < values[-1]]
        if not bounds:
            continue
        spec = ForbiddenSpec(linear=(LinearConstraint(tuple(coeffs), rng.choice(bounds)),))
        try:
            cls = classify(net, graph, spec)
        except NoSupervisorExists:
            continue
        return net, spec, graph, cls
