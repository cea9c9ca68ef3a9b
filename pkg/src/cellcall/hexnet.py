"""Finite hexagonal-grid topology: axial coordinates, 3-coloring, neighbor structures."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Tuple

Cell = Tuple[int, int]  # axial (q, r)

# The six axial offsets of a hex grid.
AXIAL_DIRECTIONS = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))


class Color(Enum):
    R = "R"
    G = "G"
    B = "B"

    @property
    def successor(self) -> "Color":
        """Cyclic order R -> G -> B -> R."""
        return _SUCC[self]

    @property
    def predecessor(self) -> "Color":
        return _PRED[self]

    def __str__(self) -> str:
        return self.value


_SUCC = {Color.R: Color.G, Color.G: Color.B, Color.B: Color.R}
_PRED = {v: k for k, v in _SUCC.items()}
_BY_INDEX = (Color.R, Color.G, Color.B)


def color_of(cell: Cell) -> Color:
    """Canonical proper 3-coloring of the hex grid: (q - r) mod 3 -> R, G, B.

    Every axial step changes (q - r) by +-1 or +2, all nonzero mod 3, so
    adjacent cells always get distinct colors.
    """
    q, r = cell
    return _BY_INDEX[(q - r) % 3]


def are_adjacent(a: Cell, b: Cell) -> bool:
    return (b[0] - a[0], b[1] - a[1]) in AXIAL_DIRECTIONS


class UnknownCellError(KeyError):
    """A cell outside the network was referenced."""


class Network:
    """Explicit finite cell set with derived hex adjacency.

    Immutable after construction; adjacency is always derived from the cell
    set, never supplied, so there is no inconsistent-input case.
    """

    def __init__(self, cells: Iterable[Cell]):
        self.cells = frozenset((int(q), int(r)) for q, r in cells)
        self._adj = {
            c: tuple(
                sorted(
                    n
                    for d in AXIAL_DIRECTIONS
                    if (n := (c[0] + d[0], c[1] + d[1])) in self.cells
                )
            )
            for c in self.cells
        }

    def __contains__(self, cell: Cell) -> bool:
        return cell in self.cells

    def __len__(self) -> int:
        return len(self.cells)

    def __eq__(self, other) -> bool:
        return isinstance(other, Network) and self.cells == other.cells

    def __hash__(self) -> int:
        return hash(self.cells)

    def __repr__(self) -> str:
        return f"Network({sorted(self.cells)!r})"

    def sorted_cells(self) -> list[Cell]:
        return sorted(self.cells)

    def neighbors(self, cell: Cell) -> tuple[Cell, ...]:
        """Neighbors of `cell` within the network, sorted by (q, r)."""
        try:
            return self._adj[cell]
        except KeyError:
            raise UnknownCellError(f"cell {cell} is not in the network") from None

    def degree(self, cell: Cell) -> int:
        return len(self.neighbors(cell))

    def edges(self) -> list[tuple[Cell, Cell]]:
        return [(u, v) for u in self.sorted_cells() for v in self._adj[u] if u < v]


def is_triangle_free(network: Network) -> bool:
    """True iff no adjacent pair shares a common neighbor in the cell set."""
    for u, v in network.edges():
        if set(network.neighbors(u)) & set(network.neighbors(v)):
            return False
    return True


@dataclass(frozen=True)
class Isolated:
    pass


@dataclass(frozen=True)
class StructureA:
    """All neighbors share one base color (differing from the cell's own)."""

    neighbor_color: Color
    k: int  # neighbor count, 1..3 in triangle-free networks


@dataclass(frozen=True)
class StructureB:
    """Exactly two neighbors, of two distinct base colors."""

    color1: Color
    color2: Color


@dataclass(frozen=True)
class General:
    """Anything else; only occurs in non-triangle-free networks."""

    degree: int


NeighborConfig = Isolated | StructureA | StructureB | General


def classify_neighbor_config(network: Network, cell: Cell) -> NeighborConfig:
    nbrs = network.neighbors(cell)
    if not nbrs:
        return Isolated()
    colors = sorted({color_of(n) for n in nbrs}, key=lambda c: c.value)
    if len(colors) == 1:
        return StructureA(neighbor_color=colors[0], k=len(nbrs))
    if len(nbrs) == 2:
        return StructureB(color1=colors[0], color2=colors[1])
    return General(degree=len(nbrs))


def hex_patch(radius: int, center: Cell = (0, 0)) -> Network:
    """Full hexagonal patch of the given radius (radius 1 = 7-cell flower)."""
    cq, cr = center
    cells = [
        (cq + q, cr + r)
        for q in range(-radius, radius + 1)
        for r in range(-radius, radius + 1)
        if abs(q + r) <= radius
    ]
    return Network(cells)


def flower_network() -> Network:
    """A center cell with all six neighbors; the default random-traffic topology."""
    return hex_patch(1)
