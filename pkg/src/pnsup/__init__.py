"""Simple, maximally permissive guards for forbidden-state avoidance in bounded Petri nets."""

from .classification import StateClassification, classify, critical_sound_sets
from .errors import (
    BoundExceeded,
    ClosureTooLarge,
    CoverSearchTooLarge,
    InfeasibleCover,
    LimitExceeded,
    NetSyntaxError,
    NoSupervisorExists,
    PnsupError,
    StateLimitExceeded,
)
from .guards import (
    Guard,
    Polarity,
    choose_simpler,
    evaluate,
    format_guards,
    guard_fallback,
    guard_from_cover,
    parse_guards,
)
from .net import (
    ForbiddenSpec,
    LinearConstraint,
    PetriNet,
    Transition,
    covers,
    is_overstate,
    parse_net,
    parse_word,
    render_net,
    support,
    support_word,
)
from .overstate import (
    CoverChart,
    Reduction,
    closure,
    exact_cover,
    minimize,
    reduce_enabling,
    reduce_forbidding,
    select_cover,
    subtract_sound,
)
from .reachability import ReachabilityGraph, build_graph, to_dot
from .synthesis import Controller, synthesize
from .verifier import VerificationReport, cross_check_exact, verify

__version__ = "0.1.0"
