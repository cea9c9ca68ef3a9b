"""Exact offline optimum for small instances.

The offline problem assigns each of the omega frequencies to an independent
set of cells; cell i serves min(R_i, m_i) requests where m_i counts the sets
containing it. `exact_optimum` runs branch-and-bound over maximal independent
set multiplicities; `exhaustive_oracle` is the brute-force cross-check and
`clique_upper_bound` the cheap relaxation used for pruning and sanity checks.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .hexnet import Cell, Network


class InstanceTooLargeError(ValueError):
    pass


class ExplicitGraph:
    """Adjacency given by an explicit edge list; duck-types the Network surface
    the solvers use. Exists for interference graphs that the hex grid cannot
    realize (e.g. a chordless 5-cycle), which the bound checks need."""

    def __init__(self, cells, edges):
        self.cells = frozenset(cells)
        self._adj = {c: set() for c in self.cells}
        for u, v in edges:
            if u == v or u not in self.cells or v not in self.cells:
                raise ValueError(f"bad edge ({u}, {v})")
            self._adj[u].add(v)
            self._adj[v].add(u)

    def __contains__(self, cell):
        return cell in self.cells

    def sorted_cells(self):
        return sorted(self.cells)

    def neighbors(self, cell):
        return tuple(sorted(self._adj[cell]))

    def edges(self):
        return [(u, v) for u in self.sorted_cells() for v in self.neighbors(u) if u < v]


def cycle_graph(n: int) -> ExplicitGraph:
    return ExplicitGraph(range(n), [(i, (i + 1) % n) for i in range(n)])


@dataclass
class OptimumWitness:
    total: int
    per_cell: dict  # Cell -> O_i
    assignment: dict  # Cell -> frozenset of frequencies, |set| == O_i

    def o(self, cell: Cell) -> int:
        return self.per_cell.get(cell, 0)


def validate_witness(network: Network, omega: int, demands: dict, witness: OptimumWitness) -> None:
    """Independent re-check of a witness: interference-free, in range, within demand."""
    for cell, freqs in witness.assignment.items():
        assert cell in network, f"witness cell {cell} not in network"
        assert len(freqs) == witness.per_cell[cell]
        assert len(freqs) <= demands.get(cell, 0), f"cell {cell} exceeds its demand"
        assert all(1 <= f <= omega for f in freqs)
        for n in network.neighbors(cell):
            assert not freqs & witness.assignment.get(n, frozenset()), (
                f"cells {cell} and {n} share a frequency"
            )
    assert witness.total == sum(witness.per_cell.values())


def _demand_list(network: Network, demands: dict) -> tuple[list, list]:
    cells = network.sorted_cells()
    unknown = set(demands) - set(cells)
    if unknown:
        raise ValueError(f"demand given for cells outside the network: {sorted(unknown)}")
    return cells, [int(demands.get(c, 0)) for c in cells]


def _independent_sets(cells: list, network: Network, maximal_only: bool) -> list[int]:
    """Independent sets as bitmasks over the sorted cell list, lexicographic order."""
    n = len(cells)
    index = {c: i for i, c in enumerate(cells)}
    adj = [0] * n
    for i, c in enumerate(cells):
        for nb in network.neighbors(c):
            adj[i] |= 1 << index[nb]
    sets = []
    for mask in range(1, 1 << n):
        ok = True
        for i in range(n):
            if mask >> i & 1 and adj[i] & mask:
                ok = False
                break
        if not ok:
            continue
        if maximal_only:
            # maximal iff every outside vertex has a neighbor inside
            addable = any(
                not (mask >> i & 1) and not (adj[i] & mask) for i in range(n)
            )
            if addable:
                continue
        sets.append(mask)
    # lexicographic by member cell indices
    sets.sort(key=lambda m: tuple(i for i in range(n) if m >> i & 1))
    return sets


def _maximal_cliques(cells: list, network: Network) -> list[tuple[int, ...]]:
    """Maximal cliques of the hex adjacency: triangles, triangle-free edges, isolated cells."""
    index = {c: i for i, c in enumerate(cells)}
    nbr = {c: set(network.neighbors(c)) & set(cells) for c in cells}
    cliques = []
    for i, u in enumerate(cells):
        if not nbr[u]:
            cliques.append((i,))
    for u in cells:
        for v in sorted(nbr[u]):
            if not u < v:
                continue
            common = nbr[u] & nbr[v]
            if common:
                for w in sorted(common):
                    if v < w:
                        cliques.append(tuple(sorted((index[u], index[v], index[w]))))
            else:
                cliques.append((index[u], index[v]))
    return cliques


def _clique_partition(cells: list, network: Network) -> list[tuple[int, ...]]:
    """Greedy partition of the cells into disjoint cliques (for the B&B bound)."""
    taken = set()
    parts = []
    for clique in sorted(_maximal_cliques(cells, network), key=lambda k: (-len(k), k)):
        members = tuple(i for i in clique if i not in taken)
        if members:
            parts.append(members)
            taken.update(members)
    for i in range(len(cells)):
        if i not in taken:
            parts.append((i,))
            taken.add(i)
    return parts


def clique_upper_bound(network: Network, omega: int, demands: dict) -> int:
    """Exact optimum of: max sum x_i, 0 <= x_i <= R_i, sum over each maximal
    clique <= omega. Always >= the true optimum; loose on odd cycles."""
    cells, r = _demand_list(network, demands)
    n = len(cells)
    if n == 0:
        return 0
    cliques = _maximal_cliques(cells, network)
    touching = [[k for k, K in enumerate(cliques) if i in K] for i in range(n)]
    best = 0

    def upper(i: int, caps: list[int]) -> int:
        total = 0
        for j in range(i, n):
            cap = min((caps[k] for k in touching[j]), default=omega)
            total += min(r[j], cap)
        return total

    memo = {}

    def dfs(i: int, caps: tuple, value: int) -> None:
        nonlocal best
        if i == n:
            best = max(best, value)
            return
        key = (i, caps)
        seen = memo.get(key)
        if seen is not None and seen >= value:
            return
        memo[key] = value
        caps_l = list(caps)
        if value + upper(i, caps_l) <= best:
            return
        hi = min([r[i]] + [caps_l[k] for k in touching[i]])
        for x in range(hi, -1, -1):
            new_caps = list(caps)
            for k in touching[i]:
                new_caps[k] -= x
            dfs(i + 1, tuple(new_caps), value + x)
            if best == value + upper(i, caps_l):
                return

    dfs(0, tuple(omega for _ in cliques), 0)
    return best


def _components(cells: list, network) -> list[frozenset]:
    remaining = set(cells)
    comps = []
    while remaining:
        seed = min(remaining)
        seen = {seed}
        stack = [seed]
        while stack:
            u = stack.pop()
            for v in network.neighbors(u):
                if v in remaining and v not in seen:
                    seen.add(v)
                    stack.append(v)
        comps.append(frozenset(seen))
        remaining -= seen
    return comps


class _Subgraph:
    """Restriction of a network to a cell subset, for per-component solving."""

    def __init__(self, base, cells):
        self.cells = frozenset(cells)
        self._base = base

    def __contains__(self, cell):
        return cell in self.cells

    def sorted_cells(self):
        return sorted(self.cells)

    def neighbors(self, cell):
        return tuple(n for n in self._base.neighbors(cell) if n in self.cells)

    def edges(self):
        return [(u, v) for u in self.sorted_cells() for v in self.neighbors(u) if u < v]


def _value(r: list[int], cov: list[int]) -> int:
    return sum(min(a, b) for a, b in zip(r, cov))


def _build_witness(
    cells: list, r: list[int], sets: list[int], mults: list[int], omega: int
) -> OptimumWitness:
    freq = 1
    per_cell_freqs = {c: [] for c in cells}
    for mask, count in zip(sets, mults):
        for _ in range(count):
            for i, c in enumerate(cells):
                if mask >> i & 1:
                    per_cell_freqs[c].append(freq)
            freq += 1
    assignment = {}
    per_cell = {}
    for i, c in enumerate(cells):
        keep = per_cell_freqs[c][: r[i]]  # trim surplus coverage to the demand
        assignment[c] = frozenset(keep)
        per_cell[c] = len(keep)
    return OptimumWitness(total=sum(per_cell.values()), per_cell=per_cell, assignment=assignment)


def exact_optimum(
    network: Network,
    omega: int,
    demands: dict,
    *,
    max_cells: int = 12,
    max_omega: int = 64,
) -> OptimumWitness:
    """Exact offline optimum with a realizing assignment.

    Branches on multiplicities of maximal independent sets in lexicographic
    order, pruning with a disjoint-clique bound; returns the first optimum
    found under that deterministic order.
    """
    cells, r = _demand_list(network, demands)
    n = len(cells)
    if n > max_cells or omega > max_omega:
        raise InstanceTooLargeError(
            f"instance with {n} cells, omega={omega} exceeds limits "
            f"({max_cells} cells, omega {max_omega})"
        )
    if n == 0 or omega == 0 or not any(r):
        return OptimumWitness(0, {c: 0 for c in cells}, {c: frozenset() for c in cells})

    components = _components(cells, network)
    if len(components) > 1:
        # no interference across components, so each gets the full spectrum
        per_cell: dict = {}
        assignment: dict = {}
        for comp in components:
            sub = exact_optimum(
                _Subgraph(network, comp),
                omega,
                {c: demands.get(c, 0) for c in comp},
                max_cells=max_cells,
                max_omega=max_omega,
            )
            per_cell.update(sub.per_cell)
            assignment.update(sub.assignment)
        return OptimumWitness(sum(per_cell.values()), per_cell, assignment)

    sets = _independent_sets(cells, network, maximal_only=True)
    members = [tuple(i for i in range(n) if m >> i & 1) for m in sets]
    parts = _clique_partition(cells, network)
    ceiling = clique_upper_bound(network, omega, demands)

    best_value = -1
    best_mults: list[int] = []

    # max set size among sets[j:], for the trivial per-frequency bound
    maxsize_from = [0] * (len(sets) + 1)
    for j in range(len(sets) - 1, -1, -1):
        maxsize_from[j] = max(maxsize_from[j + 1], len(members[j]))

    def bound(j: int, cov: list[int], rem: int) -> int:
        # each remaining frequency adds at most one unit per disjoint clique,
        # and at most max-set-size units overall
        total = 0
        for part in parts:
            deficit = sum(max(0, r[i] - cov[i]) for i in part)
            total += min(deficit, rem)
        return min(total, rem * maxsize_from[j])

    def dfs(j: int, rem: int, cov: list[int]) -> None:
        nonlocal best_value, best_mults
        value = _value(r, cov)
        if value > best_value:
            best_value = value
            best_mults = mults[:j] + [0] * (len(sets) - j)
        if best_value >= ceiling:
            return
        if j == len(sets) or rem == 0:
            return
        if value + bound(j, cov, rem) <= best_value:
            return
        cap = min(rem, max((r[i] - cov[i] for i in members[j]), default=0))
        cap = max(cap, 0)
        for count in range(cap, -1, -1):
            mults[j] = count
            if count:
                for i in members[j]:
                    cov[i] += count
            dfs(j + 1, rem - count, cov)
            if count:
                for i in members[j]:
                    cov[i] -= count
            mults[j] = 0
            if best_value >= ceiling:
                return

    mults = [0] * len(sets)
    dfs(0, omega, [0] * n)
    return _build_witness(cells, r, sets, best_mults, omega)


def exhaustive_oracle(
    network: Network, omega: int, demands: dict, *, max_cells: int = 4, max_omega: int = 6
) -> OptimumWitness:
    """Brute-force optimum by enumerating every multiset of independent sets
    (including non-maximal and empty); test-time cross-check for exact_optimum."""
    cells, r = _demand_list(network, demands)
    n = len(cells)
    if n > max_cells or omega > max_omega:
        raise InstanceTooLargeError(
            f"oracle limited to {max_cells} cells and omega {max_omega}; "
            f"got {n} cells, omega={omega}"
        )
    if n == 0 or omega == 0:
        return OptimumWitness(0, {c: 0 for c in cells}, {c: frozenset() for c in cells})

    sets = [0] + _independent_sets(cells, network, maximal_only=False)
    best_value = -1
    best_combo = None
    for combo in itertools.combinations_with_replacement(sets, omega):
        cov = [0] * n
        for mask in combo:
            for i in range(n):
                if mask >> i & 1:
                    cov[i] += 1
        value = _value(r, cov)
        if value > best_value:
            best_value = value
            best_combo = combo
    mult = {m: best_combo.count(m) for m in set(best_combo)}
    ordered = sorted(mult)
    return _build_witness(cells, r, ordered, [mult[m] for m in ordered], omega)
