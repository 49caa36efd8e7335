"""Two-receiver decision process for batch selection.

A state (x0, x1) holds each receiver's decoded-packet count.  The base
station only has a real choice when the receivers expect different
batches and neither has finished; in every other state the slot's
outcome is forced by connectivity alone.  Transition probabilities
follow from the per-slot Bernoulli(p) ON flags: a receiver advances
exactly when it is ON and the transmitted batch is the one it expects,
and when both receivers are ON at a decision state the chosen action
names which one is preferred.
"""

from enum import Enum, IntEnum, unique

from .model import SystemConfig, batch_id

State = tuple[int, int]


class Action(IntEnum):
    """Batch-selection choices; only nonzero values are real decisions."""

    SERVE_MOST = -1
    NO_DECISION = 0
    SERVE_LEAST = 1


@unique
class StateKind(Enum):
    SAME_BATCH = "same-batch"        # both unfinished, equal batch ids
    RECEIVER_0_BEHIND = "r0-behind"  # decision: receiver 0 expects the earlier batch
    RECEIVER_1_BEHIND = "r1-behind"  # decision: receiver 1 expects the earlier batch
    ONLY_0_UNFINISHED = "only-r0"    # receiver 1 holds the whole file
    ONLY_1_UNFINISHED = "only-r1"    # receiver 0 holds the whole file
    COMPLETE = "complete"            # absorbing: both hold the whole file

    @property
    def is_decision(self) -> bool:
        return self in (StateKind.RECEIVER_0_BEHIND, StateKind.RECEIVER_1_BEHIND)


def _check_state(s: State, config: SystemConfig) -> None:
    x0, x1 = s
    if not (0 <= x0 <= config.F and 0 <= x1 <= config.F):
        raise ValueError(f"state {s} outside [0, {config.F}]^2")


def classify(s: State, config: SystemConfig) -> StateKind:
    """Total classification of a state; exactly one kind applies."""
    _check_state(s, config)
    x0, x1 = s
    F = config.F
    if x0 == F and x1 == F:
        return StateKind.COMPLETE
    if x0 == F:
        return StateKind.ONLY_1_UNFINISHED
    if x1 == F:
        return StateKind.ONLY_0_UNFINISHED
    h0 = batch_id(x0, config)
    h1 = batch_id(x1, config)
    if h0 == h1:
        return StateKind.SAME_BATCH
    return StateKind.RECEIVER_0_BEHIND if h0 < h1 else StateKind.RECEIVER_1_BEHIND


def legal_actions(s: State, config: SystemConfig) -> set[Action]:
    if classify(s, config).is_decision:
        return {Action.SERVE_LEAST, Action.SERVE_MOST}
    return {Action.NO_DECISION}


def reward(s: State, config: SystemConfig) -> float:
    """Per-slot delay contribution: 1 everywhere except the absorbing state."""
    _check_state(s, config)
    return 0.0 if s == (config.F, config.F) else 1.0


def transitions(s: State, u: Action, config: SystemConfig) -> list[tuple[State, float]]:
    """Sparse next-state distribution for action u at state s.

    Entries with probability zero are omitted so degenerate channels
    (p = 1) stay valid; the absorbing state has no outgoing distribution.
    """
    kind = classify(s, config)
    if kind is StateKind.COMPLETE:
        raise ValueError("absorbing state has no outgoing transitions")
    if u not in legal_actions(s, config):
        raise ValueError(f"action {u!r} is illegal at state {s} ({kind.value})")

    x0, x1 = s
    p, q = config.p, config.q
    entries: list[tuple[State, float]] = []

    def add(state: State, prob: float) -> None:
        if prob > 0.0:
            entries.append((state, prob))

    if kind is StateKind.SAME_BATCH:
        add((x0 + 1, x1 + 1), p * p)
        add((x0 + 1, x1), p * q)
        add((x0, x1 + 1), q * p)
        add((x0, x1), q * q)
    elif kind is StateKind.ONLY_0_UNFINISHED:
        add((x0 + 1, x1), p)
        add((x0, x1), q)
    elif kind is StateKind.ONLY_1_UNFINISHED:
        add((x0, x1 + 1), p)
        add((x0, x1), q)
    else:
        # Decision state: the preferred receiver advances whenever it is ON;
        # the other one only advances when it is ON alone.
        serving_lagging = u is Action.SERVE_LEAST
        p_lag = p if serving_lagging else p * q
        p_lead = p * q if serving_lagging else p
        if kind is StateKind.RECEIVER_0_BEHIND:
            add((x0 + 1, x1), p_lag)
            add((x0, x1 + 1), p_lead)
        else:
            add((x0, x1 + 1), p_lag)
            add((x0 + 1, x1), p_lead)
        add((x0, x1), q * q)
    return entries
