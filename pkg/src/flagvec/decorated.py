"""Oriented i-graphs and i-graphs with boundary."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import NamedTuple

from . import shelling
from .errors import InputError
from .graphs import IGraph, _reindex, check_remaining
from .linkspace import register_builder
from .shelling import SupportGraphMixin


def permutation_parity(seq) -> int:
    """+1 for an even arrangement of distinct sortable items, -1 for odd."""
    seq = list(seq)
    inversions = sum(1 for a, b in combinations(range(len(seq)), 2) if seq[a] > seq[b])
    return -1 if inversions % 2 else 1


def removal_sign(position: int) -> int:
    """Sign picked up when the vertex at 1-based ``position`` of the sorted support is removed."""
    return -1 if (position - 1) % 2 else 1


class OrientedCell(NamedTuple):
    support: tuple
    sign: int  # sign of the increasing ordering of ``support``


def oriented_cell(vertices, sign: int) -> OrientedCell:
    """Cell whose listed vertex order carries ``sign``."""
    if sign not in (1, -1):
        raise InputError(f"orientation sign must be +1 or -1, got {sign}")
    vertices = tuple(vertices)
    return OrientedCell(tuple(sorted(vertices)), sign * permutation_parity(vertices))


@dataclass(frozen=True)
class OrientedGraph(SupportGraphMixin):
    arity: int
    vertex_count: int
    cells: frozenset = frozenset()

    KIND = "oriented"

    def __post_init__(self):
        seen = set()
        for cell in self.cells:
            if not isinstance(cell, OrientedCell):
                raise InputError(f"expected OrientedCell, got {cell!r}")
            s = cell.support
            if len(s) != self.arity or len(set(s)) != self.arity or list(s) != sorted(s):
                raise InputError(f"cell support {s} is not a sorted {self.arity}-set")
            if s and not (0 <= s[0] and s[-1] < self.vertex_count):
                raise InputError(f"cell {s} has a vertex outside 0..{self.vertex_count - 1}")
            if cell.sign not in (1, -1):
                raise InputError(f"cell {s} has sign {cell.sign}")
            if s in seen:
                raise InputError(f"two cells share the support {s}")
            seen.add(s)

    @classmethod
    def from_cells(cls, arity, m, cells, depth=0):
        return cls(arity, m, frozenset(cells))

    def _replace_cells(self, cells):
        return OrientedGraph(self.arity, self.vertex_count, cells)

    @staticmethod
    def cell_support(cell):
        return cell.support

    @staticmethod
    def cell_state(cell):
        return cell.sign

    @staticmethod
    def make_cell(support, state):
        return OrientedCell(tuple(support), state)

    @staticmethod
    def cell_key(cell):
        return (cell.support, cell.sign)

    @staticmethod
    def possible_states(arity, depth=0):
        return (1, -1)

    @staticmethod
    def base_atoms(depth=0):
        return ("a", "b+", "b-")

    def terminal_atom(self) -> str:
        if not self.cells:
            return "a"
        (cell,) = self.cells
        return "b+" if cell.sign > 0 else "b-"

    def sole_cell_atom(self) -> str:
        (cell,) = self.cells
        return "b+" if cell.sign * removal_sign(1) > 0 else "b-"

    def link(self, v: int, remaining) -> "OrientedGraph":
        if self.arity == 0:
            raise InputError("a 0-graph has no links")
        check_remaining(self, v, remaining)
        rest, index = _reindex(remaining, v)
        cells = []
        for cell in self.cells:
            if v not in cell.support:
                continue
            others = [u for u in cell.support if u != v]
            if all(u in index for u in others):
                k = cell.support.index(v) + 1
                cells.append(
                    OrientedCell(tuple(index[u] for u in others), cell.sign * removal_sign(k))
                )
        return OrientedGraph(self.arity - 1, len(rest), frozenset(cells))

    def relabel(self, perm) -> "OrientedGraph":
        return OrientedGraph(
            self.arity,
            self.vertex_count,
            frozenset(oriented_cell([perm[u] for u in c.support], c.sign) for c in self.cells),
        )

    def flipped(self) -> "OrientedGraph":
        return OrientedGraph(
            self.arity, self.vertex_count, frozenset(OrientedCell(c.support, -c.sign) for c in self.cells)
        )

    def underlying(self) -> IGraph:
        return IGraph(self.arity, self.vertex_count, frozenset(c.support for c in self.cells))


FLIP_ATOMS = {"b+": "b-", "b-": "b+"}


class BoundaryCell(NamedTuple):
    support: tuple
    boundary: tuple
    label: str = ""


def boundary_cell(support, boundary=(), label: str = "") -> BoundaryCell:
    support = tuple(sorted(support))
    boundary = tuple(sorted(boundary))
    if not set(boundary) <= set(support):
        raise InputError(f"boundary {boundary} is not inside the cell {support}")
    if set(label) - {"0", "1"}:
        raise InputError(f"label {label!r} is not a word in 0 and 1")
    return BoundaryCell(support, boundary, label)


@dataclass(frozen=True)
class BoundaryGraph(SupportGraphMixin):
    """i-graph with boundary; ``label_length`` counts the vertex removals so far."""

    arity: int
    vertex_count: int
    cells: frozenset = frozenset()
    label_length: int = 0

    KIND = "boundary"

    def __post_init__(self):
        seen = set()
        for cell in self.cells:
            if not isinstance(cell, BoundaryCell):
                raise InputError(f"expected BoundaryCell, got {cell!r}")
            s = cell.support
            if len(s) != self.arity or len(set(s)) != self.arity or list(s) != sorted(s):
                raise InputError(f"cell support {s} is not a sorted {self.arity}-set")
            if s and not (0 <= s[0] and s[-1] < self.vertex_count):
                raise InputError(f"cell {s} has a vertex outside 0..{self.vertex_count - 1}")
            if not set(cell.boundary) <= set(s) or list(cell.boundary) != sorted(set(cell.boundary)):
                raise InputError(f"cell {s} has invalid boundary {cell.boundary}")
            if len(cell.label) != self.label_length:
                raise InputError(
                    f"cell {s} label {cell.label!r} does not have length {self.label_length}"
                )
            if s in seen:
                raise InputError(f"two cells share the support {s}")
            seen.add(s)

    @property
    def depth(self) -> int:
        return self.label_length

    @classmethod
    def from_cells(cls, arity, m, cells, depth=0):
        return cls(arity, m, frozenset(cells), depth)

    @classmethod
    def from_igraph(cls, graph: IGraph) -> "BoundaryGraph":
        return cls(graph.arity, graph.vertex_count, frozenset(BoundaryCell(c, (), "") for c in graph.cells))

    def _replace_cells(self, cells):
        return BoundaryGraph(self.arity, self.vertex_count, cells, self.label_length)

    @staticmethod
    def cell_support(cell):
        return cell.support

    @staticmethod
    def cell_state(cell):
        positions = tuple(cell.support.index(u) for u in cell.boundary)
        return (positions, cell.label)

    @staticmethod
    def make_cell(support, state):
        positions, label = state
        return BoundaryCell(tuple(support), tuple(support[k] for k in positions), label)

    @staticmethod
    def cell_key(cell):
        return (cell.support, cell.boundary, cell.label)

    @staticmethod
    def possible_states(arity, depth=0):
        subsets = [s for k in range(arity + 1) for s in combinations(range(arity), k)]
        labels = ["".join(w) for w in product("01", repeat=depth)]
        return tuple((s, w) for s in subsets for w in labels)

    @staticmethod
    def base_atoms(depth=0):
        return ("a",) + tuple("bw:" + "".join(w) for w in product("01", repeat=depth))

    def terminal_atom(self) -> str:
        if not self.cells:
            return "a"
        (cell,) = self.cells
        return "bw:" + cell.label

    def sole_cell_atom(self) -> str:
        (cell,) = self.cells
        return "bw:" + cell.label + ("1" if cell.boundary else "0")

    def link(self, v: int, remaining) -> "BoundaryGraph":
        if self.arity == 0:
            raise InputError("a 0-graph has no links")
        check_remaining(self, v, remaining)
        rest, index = _reindex(remaining, v)
        cells = []
        for cell in self.cells:
            if v not in cell.support:
                continue
            others = [u for u in cell.support if u != v]
            if all(u in index for u in others):
                cells.append(
                    BoundaryCell(
                        tuple(index[u] for u in others),
                        tuple(index[u] for u in cell.boundary if u != v),
                        cell.label + ("1" if v in cell.boundary else "0"),
                    )
                )
        return BoundaryGraph(self.arity - 1, len(rest), frozenset(cells), self.label_length + 1)

    def relabel(self, perm) -> "BoundaryGraph":
        return BoundaryGraph(
            self.arity,
            self.vertex_count,
            frozenset(
                boundary_cell([perm[u] for u in c.support], [perm[u] for u in c.boundary], c.label)
                for c in self.cells
            ),
            self.label_length,
        )


def oriented_flag_vector(graph: OrientedGraph, method: str = "dp"):
    return shelling.flag_vector(graph, method)


def oriented_shelling_vector(graph: OrientedGraph, method: str = "dp"):
    return shelling.shelling_vector(graph, method)


def boundary_flag_vector(graph: BoundaryGraph, method: str = "dp"):
    return shelling.flag_vector(graph, method)


def boundary_shelling_vector(graph: BoundaryGraph, method: str = "dp"):
    return shelling.shelling_vector(graph, method)


oriented_link = OrientedGraph.link
boundary_link = BoundaryGraph.link


@register_builder("oriented")
def _build_oriented(key, store):
    return shelling.build_support_link_space(OrientedGraph, key)


@register_builder("boundary")
def _build_boundary(key, store):
    return shelling.build_support_link_space(BoundaryGraph, key)
