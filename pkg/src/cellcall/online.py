"""Deterministic online admission algorithms: greedy, the partition family
(CACO is the 2:1 member), and the triangle-free directional variant CACO2.

Every algorithm implements `decide(state, cell) -> Outcome`; `run_sequence`
feeds a request list through one and accumulates the trace.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from .hexnet import (
    Cell,
    Color,
    Isolated,
    Network,
    StructureA,
    StructureB,
    classify_neighbor_config,
    color_of,
    is_triangle_free,
)
from .spectrum import (
    AssignmentState,
    Direction,
    FrequencyPartition,
    make_partition_caco,
    make_partition_caco2,
    make_partition_family,
)


@dataclass(frozen=True)
class Outcome:
    accepted: bool
    frequency: Optional[int] = None

    def __str__(self) -> str:
        return f"accept({self.frequency})" if self.accepted else "reject"


REJECT = Outcome(accepted=False)


@dataclass
class RunTrace:
    """Complete record of one run: events, demands, and the final state."""

    algorithm: str
    network: Network
    omega: int
    events: list = field(default_factory=list)  # (index, cell, Outcome)
    demands: Counter = field(default_factory=Counter)  # R_i
    state: AssignmentState = None
    partition: Optional[FrequencyPartition] = None
    flagged_cells: tuple = ()  # degenerate neighbor configs, see caco2

    def accepted_at(self, cell: Cell) -> int:
        """A_i."""
        return self.state.count(cell)

    def accepted_in(self, cell: Cell, freq_range: range) -> int:
        """A_x(C_i) for one partition range."""
        return self.state.count_in(cell, freq_range)

    def shared_accepted_at(self, cell: Cell) -> int:
        """A_S(C_i); zero when the partition has no shared set."""
        if self.partition is None or self.partition.shared is None:
            return 0
        return self.state.count_in(cell, self.partition.shared)

    def total_accepted(self) -> int:
        return sum(self.state.count(c) for c in self.network.cells)

    def rejecting_cells(self) -> set[Cell]:
        return {cell for _, cell, out in self.events if not out.accepted}


class GreedyAlgorithm:
    """Accept with the minimal available frequency from the whole spectrum."""

    name = "greedy"

    def __init__(self, network: Network, omega: int):
        self.network = network
        self.omega = omega
        self.partition = None

    def decide(self, state: AssignmentState, cell: Cell) -> Outcome:
        f = state.first_available(cell, range(1, self.omega + 1))
        return Outcome(True, f) if f is not None else REJECT


class PartitionReserveAlgorithm:
    """The x:x:x:y partition family: own color range first, shared range second.

    CACO is the 2:1 member. The own-range test reduces to a per-cell counter
    because same-colored cells are never adjacent; this equivalence is asserted
    on every decision.
    """

    def __init__(self, network: Network, omega: int, x_share: int, y_share: int):
        self.network = network
        self.omega = omega
        self.partition = make_partition_family(omega, x_share, y_share)
        self.name = "caco" if (x_share, y_share) == (2, 1) else f"partition:{x_share}:{y_share}"

    def decide(self, state: AssignmentState, cell: Cell) -> Outcome:
        own = self.partition.range_for(color_of(cell))
        f = state.first_available(cell, own)
        assert (f is not None) == (state.count_in(cell, own) < len(own)), (
            "own-color range blocked by a neighbor; coloring is not proper"
        )
        if f is not None:
            return Outcome(True, f)
        if self.partition.shared is not None:
            f = state.first_available(cell, self.partition.shared)
            if f is not None:
                return Outcome(True, f)
        return REJECT


def caco_algorithm(network: Network, omega: int) -> PartitionReserveAlgorithm:
    return PartitionReserveAlgorithm(network, omega, 2, 1)


class NotTriangleFreeError(ValueError):
    """CACO2 requires a triangle-free network."""


@dataclass(frozen=True)
class _Caco2Plan:
    """Per-cell decision plan: primary range, then one overflow range with a direction."""

    primary: range
    overflow: Optional[range]
    overflow_dir: Direction
    flagged: bool  # degenerate structure (1 or 2 same-colored neighbors)


class Caco2Algorithm:
    """Thirds partition with directional overflow on triangle-free networks.

    Neighbor configurations are computed once from the static topology:
      - isolated cells scan the whole spectrum bottom-to-top;
      - structure A (all neighbors one color Y): overflow into the third
        color's range, ascending when Y is the cell color's cyclic successor,
        descending otherwise;
      - structure B (two neighbors, distinct colors): overflow into the
        successor color's range, descending.
    Single-neighbor cells follow the structure-B rule: the overflow target is
    always the successor color's range, descending.
    """

    def __init__(self, network: Network, omega: int):
        if not is_triangle_free(network):
            raise NotTriangleFreeError("caco2 requires a triangle-free network")
        self.network = network
        self.omega = omega
        self.partition = make_partition_caco2(omega)
        self.name = "caco2"
        self._plans = {c: self._plan_for(c) for c in network.cells}
        self.flagged_cells = tuple(
            sorted(c for c, p in self._plans.items() if p.flagged)
        )

    def _plan_for(self, cell: Cell) -> _Caco2Plan:
        x = color_of(cell)
        primary = self.partition.range_for(x)
        config = classify_neighbor_config(self.network, cell)
        if isinstance(config, Isolated):
            return _Caco2Plan(range(1, self.omega + 1), None, Direction.BOTTOM_TO_TOP, False)
        if isinstance(config, StructureA) and config.k >= 2:
            y = config.neighbor_color
            z = next(c for c in Color if c not in (x, y))
            direction = (
                Direction.BOTTOM_TO_TOP if x.successor is y else Direction.TOP_TO_BOTTOM
            )
            return _Caco2Plan(primary, self.partition.range_for(z), direction, config.k == 2)
        # Structure B, and single-neighbor cells treated the same way:
        # overflow into the successor color's range, top-to-bottom.
        flagged = isinstance(config, StructureA)  # k == 1
        overflow = self.partition.range_for(x.successor)
        return _Caco2Plan(primary, overflow, Direction.TOP_TO_BOTTOM, flagged)

    def decide(self, state: AssignmentState, cell: Cell) -> Outcome:
        plan = self._plans[cell]
        f = state.first_available(cell, plan.primary)
        if f is None and plan.overflow is not None:
            f = state.first_available(cell, plan.overflow, plan.overflow_dir)
        return Outcome(True, f) if f is not None else REJECT


class UnknownAlgorithmError(ValueError):
    pass


def make_algorithm(selector: str, network: Network, omega: int):
    """Build an algorithm from its selector string.

    Selectors: "greedy", "caco", "caco2", "partition:<x>:<y>".
    """
    if selector == "greedy":
        return GreedyAlgorithm(network, omega)
    if selector == "caco":
        return caco_algorithm(network, omega)
    if selector == "caco2":
        return Caco2Algorithm(network, omega)
    if selector.startswith("partition:"):
        parts = selector.split(":")
        if len(parts) != 3:
            raise UnknownAlgorithmError(f"bad partition selector {selector!r}")
        try:
            x, y = int(parts[1]), int(parts[2])
        except ValueError:
            raise UnknownAlgorithmError(f"bad partition selector {selector!r}") from None
        return PartitionReserveAlgorithm(network, omega, x, y)
    raise UnknownAlgorithmError(f"unknown algorithm selector {selector!r}")


def overflow_order_violations(trace: RunTrace) -> list:
    """Adjacent cells that both overflowed into the same foreign color range
    must have consumed it from opposite ends; returns (u, v, color) triples
    where their used frequencies in that range interleave or overlap."""
    part = trace.partition
    if part is None:
        return []
    violations = []
    for u, v in trace.network.edges():
        for color, rng in part.ranges.items():
            if color in (color_of(u), color_of(v)):
                continue
            fu = sorted(f for f in trace.state.used(u) if f in rng)
            fv = sorted(f for f in trace.state.used(v) if f in rng)
            if fu and fv and not (fu[-1] < fv[0] or fv[-1] < fu[0]):
                violations.append((u, v, color))
    return violations


class UnknownRequestCellError(ValueError):
    def __init__(self, index: int, cell: Cell):
        super().__init__(f"request {index} arrives at cell {cell}, not in the network")
        self.index = index
        self.cell = cell


def run_sequence(algorithm, network: Network, omega: int, requests) -> RunTrace:
    """Feed requests one at a time; deterministic for identical inputs."""
    trace = RunTrace(algorithm=algorithm.name, network=network, omega=omega)
    trace.state = AssignmentState(network, omega)
    trace.partition = algorithm.partition
    trace.flagged_cells = getattr(algorithm, "flagged_cells", ())
    feed_requests(algorithm, trace, requests)
    return trace


def feed_requests(algorithm, trace: RunTrace, requests) -> None:
    """Append a batch of requests to an in-progress trace (adversary phases)."""
    base = len(trace.events)
    for i, cell in enumerate(requests, start=base):
        cell = (int(cell[0]), int(cell[1]))
        if cell not in trace.network:
            raise UnknownRequestCellError(i, cell)
        trace.demands[cell] += 1
        outcome = algorithm.decide(trace.state, cell)
        if outcome.accepted:
            trace.state.assign(cell, outcome.frequency)
        trace.events.append((i, cell, outcome))
