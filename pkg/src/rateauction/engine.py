"""Closed-loop auction engine.

One run: bootstrap the price at 1, then each iteration resample any
stochastic sigmoid users, let every UE solve its subproblem against the
broadcast price and bid, aggregate the bids into the next shadow price,
and test convergence.  The loop stops when all bid changes fall within
delta (if early stopping applies) or at the iteration cap; the final
allocation divides each bid by the closing price, which fills the
capacity exactly.

Runs are deterministic: the same scenario (including seed) always yields
an identical result, trace included.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Union

from .sampling import Fixed, Normal, ParamSpec, Triangular, clamp_sigmoid_params, is_stochastic, resample_user, stream_rng
from .station import BidLedger
from .ue import DEFAULT_RATE_TOL, PriceUpdate, UserState, ue_step
from .utility import LogarithmicUtility, SigmoidalUtility

BOOTSTRAP_PRICE = 1.0

STOP_CONVERGED = "converged"
STOP_ITERATION_CAP = "iteration_cap"


class SimulationError(RuntimeError):
    """A UE step failed; carries which user and iteration broke."""


def _nominal(spec: ParamSpec) -> float:
    if isinstance(spec, Fixed):
        return spec.value
    if isinstance(spec, Normal):
        return spec.mu
    if isinstance(spec, Triangular):
        return spec.mode
    raise TypeError(f"not a ParamSpec: {spec!r}")


@dataclass(frozen=True)
class SigmoidalUserSpec:
    """A real-time user; a and b may be distribution-driven."""

    a: ParamSpec
    b: ParamSpec

    @property
    def is_stochastic(self) -> bool:
        return is_stochastic(self.a) or is_stochastic(self.b)

    def initial_utility(self, capacity: float) -> SigmoidalUtility:
        a, b = _nominal(self.a), _nominal(self.b)
        if self.is_stochastic:
            # nominal center of a stochastic spec may be invalid; the
            # iteration-1 resample replaces it before any solve anyway
            a, b = clamp_sigmoid_params(a, b, capacity)
        return SigmoidalUtility(a=a, b=b)


@dataclass(frozen=True)
class LogarithmicUserSpec:
    """A delay-tolerant user; parameters are always fixed."""

    k: float
    r_max: float

    @property
    def is_stochastic(self) -> bool:
        return False

    def initial_utility(self, capacity: float) -> LogarithmicUtility:
        return LogarithmicUtility(k=self.k, r_max=self.r_max)


UserSpec = Union[SigmoidalUserSpec, LogarithmicUserSpec]


@dataclass(frozen=True)
class Scenario:
    """Full experiment description.

    allow_early_stop=None means: stop at convergence only when no user is
    stochastic.  Stochastic runs otherwise execute the full iteration cap,
    so a lucky pair of draws cannot end the experiment early.
    """

    capacity: float
    delta: float
    max_iterations: int
    seed: int
    users: tuple[UserSpec, ...]
    allow_early_stop: Optional[bool] = None

    def __post_init__(self) -> None:
        if not self.capacity > 0:
            raise ValueError(f"capacity must be > 0, got {self.capacity}")
        if not self.delta > 0:
            raise ValueError(f"delta must be > 0, got {self.delta}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.seed < 0:
            raise ValueError(f"seed must be >= 0, got {self.seed}")
        if not self.users:
            raise ValueError("a scenario needs at least one user")
        object.__setattr__(self, "users", tuple(self.users))

    @property
    def is_stochastic(self) -> bool:
        return any(u.is_stochastic for u in self.users)

    @property
    def early_stop_enabled(self) -> bool:
        if self.allow_early_stop is None:
            return not self.is_stochastic
        return self.allow_early_stop


@dataclass(frozen=True)
class TraceRecord:
    """One (iteration, user) row of the convergence log."""

    iteration: int
    user_id: int
    price: float
    rate: float
    bid: float
    a: Optional[float] = None
    b: Optional[float] = None


@dataclass(frozen=True)
class RunResult:
    stop_reason: str
    converged_at: Optional[int]
    iterations: int
    final_price: float
    final_rates: dict[int, float]
    trace: tuple[TraceRecord, ...] = field(repr=False)


def run(scenario: Scenario, solver_tol: float = DEFAULT_RATE_TOL) -> RunResult:
    """Execute one auction to convergence or the iteration cap."""
    states = [
        UserState(user_id=i + 1, utility=spec.initial_utility(scenario.capacity))
        for i, spec in enumerate(scenario.users)
    ]
    ledger = BidLedger(scenario.capacity, scenario.delta)
    price = BOOTSTRAP_PRICE
    trace: list[TraceRecord] = []
    converged_at: Optional[int] = None

    iterations = 0
    for n in range(1, scenario.max_iterations + 1):
        iterations = n
        msg = PriceUpdate(iteration=n, price=price)
        bids = []
        for idx, state in enumerate(states):
            spec = scenario.users[idx]
            if spec.is_stochastic:
                rng = stream_rng(scenario.seed, n, state.user_id)
                state = resample_user(state, spec.a, spec.b, scenario.capacity, rng)
            try:
                state, bid = ue_step(state, msg, scenario.capacity, solver_tol)
            except Exception as exc:
                raise SimulationError(
                    f"user {state.user_id} failed at iteration {n}: {exc}"
                ) from exc
            states[idx] = state
            bids.append(bid)
            sig = isinstance(state.utility, SigmoidalUtility)
            trace.append(
                TraceRecord(
                    iteration=n,
                    user_id=state.user_id,
                    price=price,
                    rate=float(state.last_rate),
                    bid=float(state.last_bid),
                    a=float(state.utility.a) if sig else None,
                    b=float(state.utility.b) if sig else None,
                )
            )
        ledger.ingest(bids)
        if scenario.early_stop_enabled and ledger.check_convergence():
            converged_at = n
            break
        price = ledger.compute_price().price

    final_price = ledger.compute_price().price
    final_rates = ledger.allocate_rates(final_price)
    return RunResult(
        stop_reason=STOP_CONVERGED if converged_at is not None else STOP_ITERATION_CAP,
        converged_at=converged_at,
        iterations=iterations,
        final_price=final_price,
        final_rates=final_rates,
        trace=tuple(trace),
    )


def run_replication(
    scenario: Scenario,
    seeds: list[int],
    solver_tol: float = DEFAULT_RATE_TOL,
) -> list[RunResult]:
    """Independent runs of the same scenario, one per seed, in seed order."""
    if not seeds:
        raise ValueError("seed list must not be empty")
    return [run(replace(scenario, seed=s), solver_tol=solver_tol) for s in seeds]
