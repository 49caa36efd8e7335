"""Exact completion-time analysis of the two-receiver broadcast process.

The absorbing structure makes the balance equations solvable in a single
backward pass: grouping states by x0 + x1 and walking the groups in
decreasing order, every successor of a state other than its own
self-loop (eliminated algebraically by the 1 / (1 - p_stay) factor)
already holds its final value.  No fixed-point iteration and no stopping
tolerance enter the computation; the only float error is accumulation in
64-bit arithmetic.

Value tables are dense (F+1) x (F+1) float arrays indexed [x0, x1];
policy tables are int8 arrays holding ``mdp.Action`` values.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from .mdp import Action, State, StateKind, classify
from .model import SystemConfig


class OracleCapacityError(ValueError):
    """Raised when a brute-force enumeration would exceed its policy cap."""


def _require_two_receivers(config: SystemConfig) -> None:
    if config.N != 2:
        raise ValueError(f"exact solving covers N=2 only, got N={config.N}")


def decision_states(config: SystemConfig) -> list[State]:
    """All states offering a serve-least/serve-most choice, in lexicographic order."""
    F = config.F
    return [
        (x0, x1)
        for x0 in range(F + 1)
        for x1 in range(F + 1)
        if classify((x0, x1), config).is_decision
    ]


def decision_action_values(s: State, values: np.ndarray, config: SystemConfig) -> tuple[float, float]:
    """Values of serving the lagging vs. the leading receiver at a decision state.

    Both are one-step lookaheads into `values`, which must already hold
    final entries for the successors of s.  Returns (serve_least, serve_most).
    """
    kind = classify(s, config)
    if not kind.is_decision:
        raise ValueError(f"state {s} offers no decision")
    x0, x1 = s
    p, q = config.p, config.q
    advance_0 = values[x0 + 1, x1]
    advance_1 = values[x0, x1 + 1]
    if kind is StateKind.RECEIVER_0_BEHIND:
        lag, lead = advance_0, advance_1
    else:
        lag, lead = advance_1, advance_0
    denom = 1.0 - q * q
    v_least = (1.0 + p * lag + p * q * lead) / denom
    v_most = (1.0 + p * q * lag + p * lead) / denom
    return v_least, v_most


def _backward_sweep(config, pick):
    """Shared sweep; `pick(s, v_least, v_most) -> (value, action)` resolves decisions."""
    F, p, q = config.F, config.p, config.q
    values = np.zeros((F + 1, F + 1))
    actions = np.zeros((F + 1, F + 1), dtype=np.int8)
    for total in range(2 * F - 1, -1, -1):
        for x0 in range(max(0, total - F), min(F, total) + 1):
            x1 = total - x0
            kind = classify((x0, x1), config)
            if kind is StateKind.ONLY_0_UNFINISHED:
                values[x0, x1] = (1.0 + p * values[x0 + 1, x1]) / p
            elif kind is StateKind.ONLY_1_UNFINISHED:
                values[x0, x1] = (1.0 + p * values[x0, x1 + 1]) / p
            elif kind is StateKind.SAME_BATCH:
                values[x0, x1] = (
                    1.0
                    + p * q * (values[x0 + 1, x1] + values[x0, x1 + 1])
                    + p * p * values[x0 + 1, x1 + 1]
                ) / (1.0 - q * q)
            else:
                v_least, v_most = decision_action_values((x0, x1), values, config)
                values[x0, x1], actions[x0, x1] = pick((x0, x1), v_least, v_most)
    return values, actions


def solve_optimal(config: SystemConfig, tie_tolerance: float = 1e-9) -> tuple[np.ndarray, np.ndarray]:
    """Optimal expected-slots-to-completion table and a minimizing policy.

    At decision states the stored value is min(v_least, v_most); ties
    within `tie_tolerance` are resolved toward SERVE_LEAST so the policy
    table is canonical.
    """
    _require_two_receivers(config)

    def pick(s, v_least, v_most):
        value = v_least if v_least <= v_most else v_most
        if v_least <= v_most + tie_tolerance:
            return value, Action.SERVE_LEAST
        return value, Action.SERVE_MOST

    return _backward_sweep(config, pick)


def evaluate_policy(config: SystemConfig, policy: np.ndarray) -> np.ndarray:
    """Expected-slots table of a fixed policy (same sweep, no minimization)."""
    _require_two_receivers(config)
    policy = np.asarray(policy)
    if policy.shape != (config.F + 1, config.F + 1):
        raise ValueError(f"policy table must be {(config.F + 1,) * 2}, got {policy.shape}")
    for x0 in range(config.F + 1):
        for x1 in range(config.F + 1):
            if Action(int(policy[x0, x1])) not in _legal_for(classify((x0, x1), config)):
                raise ValueError(f"illegal policy entry {policy[x0, x1]} at state {(x0, x1)}")

    def pick(s, v_least, v_most):
        a = Action(int(policy[s]))
        return (v_least if a is Action.SERVE_LEAST else v_most), a

    values, _ = _backward_sweep(config, pick)
    return values


def _legal_for(kind: StateKind) -> set[Action]:
    if kind.is_decision:
        return {Action.SERVE_LEAST, Action.SERVE_MOST}
    return {Action.NO_DECISION}


def lr_policy_table(config: SystemConfig) -> np.ndarray:
    """The least-received rule as a policy table: SERVE_LEAST wherever there is a choice."""
    _require_two_receivers(config)
    table = np.zeros((config.F + 1, config.F + 1), dtype=np.int8)
    for s in decision_states(config):
        table[s] = Action.SERVE_LEAST
    return table


def check_lr_optimality(config: SystemConfig, tolerance: float = 1e-9) -> tuple[bool, list[State]]:
    """Certify serve-least beats serve-most at every decision state.

    Passes iff v_least < v_most + tolerance throughout the optimal table;
    returns the violating states otherwise.
    """
    _require_two_receivers(config)
    values, _ = solve_optimal(config)
    violations = []
    for s in decision_states(config):
        v_least, v_most = decision_action_values(s, values, config)
        if not v_least < v_most + tolerance:
            violations.append(s)
    return (not violations, violations)


@dataclass(frozen=True)
class AuditCheck:
    """One inequality family: how many instances were examined and the
    smallest slack seen (negative slack beyond tolerance is a violation)."""

    name: str
    examined: int
    violations: int
    worst_margin: float


@dataclass(frozen=True)
class AuditReport:
    checks: tuple[AuditCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.violations == 0 for c in self.checks)

    def by_name(self, name: str) -> AuditCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)


class _Tally:
    def __init__(self, name: str, tolerance: float):
        self.name = name
        self.tolerance = tolerance
        self.examined = 0
        self.violations = 0
        self.worst = float("inf")

    def expect(self, margin: float) -> None:
        self.examined += 1
        self.worst = min(self.worst, margin)
        if margin < -self.tolerance:
            self.violations += 1

    def finish(self) -> AuditCheck:
        worst = float(self.worst) if self.examined else float("nan")
        return AuditCheck(self.name, self.examined, self.violations, worst)


def audit_inequalities(config: SystemConfig, tolerance: float = 1e-9) -> AuditReport:
    """Numerically verify the structural properties of the optimal table.

    Checks, each over index ranges materialized from the config:
      edge_closed_form         V(x0, F) equals (F - x0) / p           (margin: -|error|)
      corner_sandwich          V(F-1, F) < V(F-1, F-1) < V(F-2, F)
      monotone_in_x0           V(x0, x1) > V(x0+1, x1) on the last-batch band
      monotone_in_x1           V(x0, x1) < V(x0, x1-1) on the last-batch band
      balance_preference       V(x0, x1) < V(x0-1, x1+1): imbalance costs time
      decision_sign_equivalence  at decision states the serve-most minus
        serve-least gap and the lead-advance minus lag-advance value gap
        carry the same sign (margin: the smaller of the two gaps)
      neighbor_implication     whenever both advanced neighbors of a decision
        state prefer serve-least, so does the state itself

    Inequality margins are slack (right side minus left side); a margin
    below -tolerance counts as a violation.
    """
    _require_two_receivers(config)
    values, _ = solve_optimal(config)
    F, K, b, p = config.F, config.K, config.b, config.p
    last_band_start = b * K  # first packet index of the final batch

    edge = _Tally("edge_closed_form", tolerance)
    for x0 in range(F + 1):
        edge.expect(-abs(values[x0, F] - (F - x0) / p))

    sandwich = _Tally("corner_sandwich", tolerance)
    if F >= 2:
        sandwich.expect(values[F - 1, F - 1] - values[F - 1, F])
        sandwich.expect(values[F - 2, F] - values[F - 1, F - 1])

    mono_x0 = _Tally("monotone_in_x0", tolerance)
    mono_x1 = _Tally("monotone_in_x1", tolerance)
    for x1 in range(last_band_start + 1, F + 1):
        for x0 in range(0, F):
            if x0 + 1 <= x1:
                mono_x0.expect(values[x0, x1] - values[x0 + 1, x1])
                mono_x1.expect(values[x0, x1 - 1] - values[x0, x1])

    balance = _Tally("balance_preference", tolerance)
    for x1 in range(last_band_start, F):
        for x0 in range(1, F):
            if x0 <= x1 - 1:
                balance.expect(values[x0 - 1, x1 + 1] - values[x0, x1])

    signs = _Tally("decision_sign_equivalence", tolerance)
    prefer = {}  # decision state -> serve-most minus serve-least gap
    for s in decision_states(config):
        x0, x1 = s
        v_least, v_most = decision_action_values(s, values, config)
        gap = v_most - v_least
        prefer[s] = gap
        if classify(s, config) is StateKind.RECEIVER_0_BEHIND:
            neighbor_gap = values[x0, x1 + 1] - values[x0 + 1, x1]
        else:
            neighbor_gap = values[x0 + 1, x1] - values[x0, x1 + 1]
        confident_mismatch = (gap > tolerance and neighbor_gap < -tolerance) or (
            gap < -tolerance and neighbor_gap > tolerance
        )
        signs.examined += 1
        signs.worst = min(signs.worst, gap, neighbor_gap)
        if confident_mismatch:
            signs.violations += 1

    implication = _Tally("neighbor_implication", tolerance)
    for (x0, x1), _gap in prefer.items():
        right = prefer.get((x0 + 1, x1))
        up = prefer.get((x0, x1 + 1))
        if right is None or up is None:
            continue
        if right > tolerance and up > tolerance:
            implication.expect(prefer[(x0, x1)])

    return AuditReport(
        tuple(
            t.finish()
            for t in (edge, sandwich, mono_x0, mono_x1, balance, signs, implication)
        )
    )


@dataclass(frozen=True)
class OracleResult:
    """Outcome of exhaustive policy enumeration on one instance."""

    decision_states: tuple[State, ...]
    n_policies: int
    best_value: float                       # smallest V(0,0) over all policies
    best_assignment: tuple[int, ...]        # actions over decision_states attaining it
    lr_value: float                         # V(0,0) of serve-least-everywhere
    lr_matches_best: bool
    ranked: tuple[tuple[float, tuple[int, ...]], ...]  # ascending by V(0,0)


def enumerate_policies_oracle(
    config: SystemConfig, policy_cap: int = 2**20, tolerance: float = 1e-9
) -> OracleResult:
    """Evaluate every deterministic stationary policy and rank them by V(0,0).

    Independent, brute-force certification path: it never consults
    solve_optimal.  Raises OracleCapacityError when 2**D exceeds the cap,
    where D is the number of decision states.
    """
    _require_two_receivers(config)
    ds = decision_states(config)
    if len(ds) >= policy_cap.bit_length():  # i.e. 2**D > policy_cap, without the huge power
        raise OracleCapacityError(
            f"{len(ds)} decision states give 2**{len(ds)} policies, over the cap {policy_cap}"
        )
    n_policies = 2 ** len(ds)
    base = lr_policy_table(config)
    results = []
    for bits in itertools.product((Action.SERVE_LEAST, Action.SERVE_MOST), repeat=len(ds)):
        table = base.copy()
        for s, a in zip(ds, bits):
            table[s] = a
        value = float(evaluate_policy(config, table)[0, 0])
        results.append((value, tuple(int(a) for a in bits)))
    lr_value = results[0][0]  # first assignment is all-SERVE_LEAST
    ranked = tuple(sorted(results))
    best_value, best_assignment = ranked[0]
    return OracleResult(
        decision_states=tuple(ds),
        n_policies=n_policies,
        best_value=best_value,
        best_assignment=best_assignment,
        lr_value=lr_value,
        lr_matches_best=abs(lr_value - best_value) <= tolerance,
        ranked=ranked,
    )


def write_table_csv(path, values: np.ndarray, actions: np.ndarray) -> None:
    """Dump a value/policy table pair as CSV (x0,x1,value,action; lexicographic rows)."""
    side = values.shape[0]
    with open(path, "w", newline="") as fh:
        fh.write("x0,x1,value,action\n")
        for x0 in range(side):
            for x1 in range(side):
                fh.write(f"{x0},{x1},{float(values[x0, x1])!r},{int(actions[x0, x1])}\n")
