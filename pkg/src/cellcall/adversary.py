"""Adaptive request-sequence generators: the two lower-bound star scenarios
and seeded random traffic. Adversaries see only per-cell accepted counts."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Optional

from .hexnet import Cell, Network, flower_network
from .online import RunTrace, feed_requests
from .spectrum import AssignmentState

# Star topology shared by both lower-bound constructions: a center cell and
# the three pairwise non-adjacent neighbors of one color class.
STAR_CENTER: Cell = (0, 0)
STAR_OUTER: tuple[Cell, ...] = ((-1, 1), (0, -1), (1, 0))


def star_network() -> Network:
    return Network((STAR_CENTER,) + STAR_OUTER)


@dataclass(frozen=True)
class AdversaryScenario:
    """A scripted/adaptive request source.

    `next_batch(phase, counts)` returns the requests of the given phase or
    None when the adversary stops; `counts` maps cells to accepted counts
    observed so far (public outcomes only).
    """

    name: str
    network: Network
    omega: int
    next_batch: Callable[[int, dict], Optional[list]]


def fig2_adversary(omega: int) -> AdversaryScenario:
    """Unconditional two-phase star flood: omega requests at the center, then
    omega at each outer cell."""

    def next_batch(phase: int, counts: dict) -> Optional[list]:
        if phase == 0:
            return [STAR_CENTER] * omega
        if phase == 1:
            return [c for c in STAR_OUTER for _ in range(omega)]
        return None

    return AdversaryScenario("fig2", star_network(), omega, next_batch)


def fig3_adversary(omega: int) -> AdversaryScenario:
    """Adaptive star flood: after the center phase, continue only if the
    observed center acceptance x exceeds 3*omega/5 (stop on equality)."""

    def next_batch(phase: int, counts: dict) -> Optional[list]:
        if phase == 0:
            return [STAR_CENTER] * omega
        if phase == 1 and 5 * counts.get(STAR_CENTER, 0) > 3 * omega:
            return [c for c in STAR_OUTER for _ in range(omega)]
        return None

    return AdversaryScenario("fig3", star_network(), omega, next_batch)


def random_sequence(network: Network, omega: int, length: int, seed: int, weights=None):
    """Deterministic pseudo-random request list over the network's cells."""
    if length < 0:
        raise ValueError("length must be nonnegative")
    cells = network.sorted_cells()
    if weights is not None and len(weights) != len(cells):
        raise ValueError("weights must match the sorted cell list")
    rng = random.Random(seed)
    return rng.choices(cells, weights=weights, k=length)


def random_adversary(omega: int, seed: int, length: int, network: Optional[Network] = None) -> AdversaryScenario:
    """Single-batch random traffic; defaults to the 7-cell flower network."""
    net = network if network is not None else flower_network()
    batch = random_sequence(net, omega, length, seed)

    def next_batch(phase: int, counts: dict) -> Optional[list]:
        return list(batch) if phase == 0 else None

    return AdversaryScenario(f"random:{seed}:{length}", net, omega, next_batch)


class UnknownAdversaryError(ValueError):
    pass


def make_adversary(selector: str, omega: int, network: Optional[Network] = None) -> AdversaryScenario:
    """Selectors: "fig2", "fig3", "random:<seed>:<length>"."""
    if selector == "fig2":
        return fig2_adversary(omega)
    if selector == "fig3":
        return fig3_adversary(omega)
    if selector.startswith("random:"):
        parts = selector.split(":")
        if len(parts) != 3:
            raise UnknownAdversaryError(f"bad random selector {selector!r}")
        try:
            seed, length = int(parts[1]), int(parts[2])
        except ValueError:
            raise UnknownAdversaryError(f"bad random selector {selector!r}") from None
        return random_adversary(omega, seed, length, network)
    raise UnknownAdversaryError(f"unknown adversary selector {selector!r}")


def phase_ratios(scenario: AdversaryScenario, algorithm_factory) -> list:
    """Exact OPT/ALG after each adversary phase (the adversary may stop at any
    phase boundary, so the scenario's strength is the max of these)."""
    from fractions import Fraction

    from .offline import exact_optimum

    alg = algorithm_factory(scenario.network, scenario.omega)
    trace = RunTrace(algorithm=alg.name, network=scenario.network, omega=scenario.omega)
    trace.state = AssignmentState(scenario.network, scenario.omega)
    trace.partition = alg.partition
    ratios = []
    phase = 0
    while True:
        counts = {c: trace.state.count(c) for c in scenario.network.cells}
        batch = scenario.next_batch(phase, counts)
        if batch is None:
            break
        feed_requests(alg, trace, batch)
        opt = exact_optimum(scenario.network, scenario.omega, dict(trace.demands))
        accepted = trace.total_accepted()
        if accepted:
            ratios.append(Fraction(opt.total, accepted))
        elif opt.total == 0:
            ratios.append(Fraction(1))
        else:
            ratios.append(None)  # unbounded
        phase += 1
    return ratios


def run_duel(scenario: AdversaryScenario, algorithm_factory) -> RunTrace:
    """Play the adversary against an algorithm; pure function of its inputs.

    `algorithm_factory(network, omega)` builds the algorithm instance.
    """
    alg = algorithm_factory(scenario.network, scenario.omega)
    trace = RunTrace(algorithm=alg.name, network=scenario.network, omega=scenario.omega)
    trace.state = AssignmentState(scenario.network, scenario.omega)
    trace.partition = alg.partition
    trace.flagged_cells = getattr(alg, "flagged_cells", ())
    phase = 0
    while True:
        counts = {c: trace.state.count(c) for c in scenario.network.cells}
        batch = scenario.next_batch(phase, counts)
        if batch is None:
            break
        feed_requests(alg, trace, batch)
        phase += 1
    return trace
