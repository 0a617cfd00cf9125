"""i-graphs: shellings, links, shelling vectors and flag vectors."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import factorial

from . import shelling
from .errors import InputError
from .linkspace import LinkSpaceKey, link_space, register_builder
from .shelling import SupportGraphMixin


def _reindex(remaining, v):
    rest = [u for u in remaining if u != v]
    return rest, {u: k for k, u in enumerate(rest)}


def check_remaining(obj, v, remaining):
    if v not in remaining:
        raise InputError(f"vertex {v} is not among the remaining vertices {tuple(remaining)}")
    for u in remaining:
        if not 0 <= u < obj.vertex_count:
            raise InputError(f"vertex {u} out of range 0..{obj.vertex_count - 1}")


@dataclass(frozen=True)
class IGraph(SupportGraphMixin):
    """Vertices ``0..vertex_count-1`` and a set of ``arity``-element cells.

    Cells are stored as sorted tuples.
    """

    arity: int
    vertex_count: int
    cells: frozenset = frozenset()

    KIND = "igraph"

    def __post_init__(self):
        if self.arity < 0 or self.vertex_count < 0:
            raise InputError("arity and vertex count must be non-negative")
        normalized = set()
        for cell in self.cells:
            c = tuple(sorted(cell))
            if len(set(c)) != self.arity or len(c) != self.arity:
                raise InputError(f"cell {tuple(cell)} does not have {self.arity} distinct vertices")
            if c and not (0 <= c[0] and c[-1] < self.vertex_count):
                raise InputError(f"cell {c} has a vertex outside 0..{self.vertex_count - 1}")
            normalized.add(c)
        object.__setattr__(self, "cells", frozenset(normalized))

    @classmethod
    def from_cells(cls, arity, m, cells, depth=0):
        return cls(arity, m, frozenset(cells))

    def _replace_cells(self, cells):
        return IGraph(self.arity, self.vertex_count, cells)

    # support-graph protocol
    @staticmethod
    def cell_support(cell):
        return cell

    @staticmethod
    def cell_state(cell):
        return True

    @staticmethod
    def make_cell(support, state):
        return tuple(support)

    @staticmethod
    def cell_key(cell):
        return cell

    @staticmethod
    def possible_states(arity, depth=0):
        return (True,)

    @staticmethod
    def base_atoms(depth=0):
        return ("a", "b")

    def terminal_atom(self) -> str:
        return "b" if self.cells else "a"

    def sole_cell_atom(self) -> str:
        return "b"

    def link(self, v: int, remaining) -> "IGraph":
        """Cells ``c`` of the later vertices with ``c + {v}`` a cell of the graph."""
        if self.arity == 0:
            raise InputError("a 0-graph has no links")
        check_remaining(self, v, remaining)
        rest, index = _reindex(remaining, v)
        cells = []
        for cell in self.cells:
            if v in cell:
                others = [u for u in cell if u != v]
                if all(u in index for u in others):
                    cells.append(tuple(index[u] for u in others))
        return IGraph(self.arity - 1, len(rest), frozenset(cells))

    def relabel(self, perm) -> "IGraph":
        return IGraph(
            self.arity,
            self.vertex_count,
            frozenset(tuple(sorted(perm[u] for u in c)) for c in self.cells),
        )

    def without(self, cell) -> "IGraph":
        return IGraph(self.arity, self.vertex_count, self.cells - {tuple(sorted(cell))})


def complete_graph(arity: int, r: int) -> IGraph:
    return IGraph(arity, r, frozenset(combinations(range(r), arity)))


def shelling_links(graph: IGraph, order) -> list:
    """The links L_1..L_r of the shelling ``order``."""
    order = list(order)
    if sorted(order) != list(range(graph.vertex_count)):
        raise InputError(f"{order} is not an ordering of the vertices")
    remaining = list(range(graph.vertex_count))
    links = []
    for v in order:
        links.append(graph.link(v, tuple(remaining)))
        remaining.remove(v)
    return links


def shelling_vector(graph: IGraph, method: str = "dp"):
    return shelling.shelling_vector(graph, method)


def flag_vector(graph: IGraph, method: str = "dp"):
    return shelling.flag_vector(graph, method)


def igraph_link_space(i: int, m: int):
    return link_space(LinkSpaceKey("igraph", i, m))


@register_builder("igraph")
def _build(key, store):
    return shelling.build_support_link_space(IGraph, key)


def shelling_count(i: int, r: int) -> int:
    """Coefficient sum of any shelling vector: S(0, m) = 1, S(i, r) = r! * prod S(i-1, r-j)."""
    if i == 0:
        return 1
    out = factorial(r)
    for j in range(1, r + 1):
        out *= shelling_count(i - 1, r - j)
    return out


def all_graphs(i: int, r: int) -> list:
    return IGraph.enumerate_all(i, r)


def graph_classes(i: int, r: int) -> list:
    """One canonical representative per relabeling class of i-graphs on r vertices."""
    return shelling.class_representatives(all_graphs(i, r))


canonicalize = shelling.canonical_form
are_equivalent = shelling.are_equivalent
