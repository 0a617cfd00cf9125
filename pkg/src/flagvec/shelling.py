"""Shelling sums shared by every vertex-and-cell object.

An object taking part in a shelling sum provides ``vertex_count``,
``link(v, remaining)``, ``is_terminal()``, ``terminal_atom()`` and
``link_key()``.  ``link`` returns the link at ``v`` of the object restricted
to ``remaining`` (a sorted tuple of vertices), re-indexed on
``remaining - {v}`` by increasing label.
"""

from __future__ import annotations

from itertools import combinations, permutations, product
from math import comb

from .algebra import FormalVector, atom_word, build_quotient, flatten, tensor
from .errors import InputError, ResourceError
from .linkspace import GRAPH_ENUMERATION_LIMIT, LinkSpaceKey, get_store, link_space

METHODS = ("naive", "dp")
CANONICAL_LIMIT = 10


def _check_method(method: str) -> str:
    if method == "subset-dp":
        return "dp"
    if method not in METHODS:
        raise InputError(f"unknown method {method!r}; expected naive or dp")
    return method


def shelling_sum(obj, contribution, method: str = "dp") -> FormalVector:
    """Sum over all vertex orderings of the tensor product of ``contribution(link)``."""
    method = _check_method(method)
    r = obj.vertex_count
    if method == "naive":
        total = {}
        for order in permutations(range(r)):
            remaining = list(range(r))
            acc = FormalVector.scalar(1)
            for v in order:
                acc = tensor(acc, contribution(obj.link(v, tuple(remaining))))
                remaining.remove(v)
            for w, c in acc.items():
                total[w] = total.get(w, 0) + c
        return FormalVector(total)
    # f(S) = sum over v in S of contribution(link(v, S)) (x) f(S - v)
    table = {(): FormalVector.scalar(1)}
    for size in range(1, r + 1):
        for subset in combinations(range(r), size):
            parts = {}
            for pos, v in enumerate(subset):
                rest = subset[:pos] + subset[pos + 1:]
                term = tensor(contribution(obj.link(v, subset)), table[rest])
                for w, c in term.items():
                    parts[w] = parts.get(w, 0) + c
            table[subset] = FormalVector(parts)
        if size >= 2:
            for subset in combinations(range(r), size - 2):
                table.pop(subset, None)
    return table[tuple(range(r))]


def flag_vector(obj, method: str = "dp") -> FormalVector:
    """Flag vector: shelling sum of link contributions (residues in link spaces)."""
    method = _check_method(method)
    if obj.is_terminal():
        return FormalVector.atom(obj.terminal_atom())
    memo = get_store().memo.setdefault(("flag", method), {})
    vec = memo.get(obj)
    if vec is None:
        vec = shelling_sum(obj, lambda link: link_contribution(link, method), method)
        memo[obj] = vec
    return vec


def link_contribution(link, method: str = "dp") -> FormalVector:
    """Residue of the flag vector of ``link`` in its link space."""
    if link.is_terminal():
        return FormalVector.atom(link.terminal_atom())
    memo = get_store().memo.setdefault(("contribution", method), {})
    vec = memo.get(link)
    if vec is None:
        vec = link_space(link.link_key()).project(flag_vector(link, method))
        memo[link] = vec
    return vec


def shelling_vector(obj, method: str = "dp") -> FormalVector:
    """Shelling vector: shelling sum of the links' own shelling vectors.

    Each link contributes one slot holding its (flattened) words.
    """
    method = _check_method(method)
    if obj.is_terminal():
        return FormalVector.atom(obj.terminal_atom())
    memo = get_store().memo.setdefault(("shelling", method), {})
    vec = memo.get(obj)
    if vec is None:
        vec = shelling_sum(obj, lambda link: flatten(shelling_vector(link, method)), method)
        memo[obj] = vec
    return vec


# ---------------------------------------------------------------------------
# equivalence under vertex relabeling


def _check_canonical_guard(r: int):
    if r > CANONICAL_LIMIT:
        raise ResourceError(
            f"brute-force canonical form needs r <= {CANONICAL_LIMIT} (got r={r})"
        )


def canonical_form(obj):
    """Relabeling of ``obj`` with the lexicographically least cell set."""
    _check_canonical_guard(obj.vertex_count)
    best, best_key = None, None
    for perm in permutations(range(obj.vertex_count)):
        cand = obj.relabel(perm)
        key = cand.sort_key()
        if best_key is None or key < best_key:
            best, best_key = cand, key
    return best


def are_equivalent(a, b) -> bool:
    if type(a) is not type(b) or a.signature() != b.signature():
        return False
    return canonical_form(a) == canonical_form(b)


def orbit(obj) -> set:
    _check_canonical_guard(obj.vertex_count)
    return {obj.relabel(p) for p in permutations(range(obj.vertex_count))}


def class_representatives(objects) -> list:
    """Canonical representatives of the relabeling classes met in ``objects``."""
    seen: set = set()
    reps = []
    for obj in objects:
        if obj in seen:
            continue
        members = orbit(obj)
        seen |= members
        reps.append(min(members, key=lambda o: o.sort_key()))
    reps.sort(key=lambda o: (o.size(), o.sort_key()))
    return reps


# ---------------------------------------------------------------------------
# graph-like objects indexed by cell support


class SupportGraphMixin:
    """Shared behavior of i-graphs whose cells are keyed by their support.

    Subclasses define ``KIND``, ``cell_support``, ``cell_state``,
    ``make_cell``, ``possible_states``, ``link``, ``relabel`` and
    ``terminal_atom``.
    """

    KIND = ""

    @property
    def depth(self) -> int:
        return 0

    def signature(self):
        return (self.arity, self.vertex_count, self.depth)

    def size(self) -> int:
        return len(self.cells)

    def is_terminal(self) -> bool:
        return self.arity == 0

    def link_key(self) -> LinkSpaceKey:
        return LinkSpaceKey(self.KIND, self.arity, self.vertex_count, self.depth)

    def states(self) -> dict:
        return {self.cell_support(c): self.cell_state(c) for c in self.cells}

    def with_state(self, support, state):
        """Copy with the cell at ``support`` replaced (``state=None`` removes it)."""
        cells = {c for c in self.cells if self.cell_support(c) != tuple(support)}
        if state is not None:
            cells.add(self.make_cell(tuple(support), state))
        return self._replace_cells(frozenset(cells))

    def sort_key(self):
        return tuple(sorted(self.cell_key(c) for c in self.cells))

    @classmethod
    def child_key(cls, key: LinkSpaceKey, m: int) -> LinkSpaceKey:
        return LinkSpaceKey(key.kind, key.i - 1, m, key.depth + (cls.KIND == "boundary"))

    @classmethod
    def count_all(cls, arity: int, m: int, depth: int = 0) -> int:
        return (1 + len(cls.possible_states(arity, depth))) ** comb(m, arity)

    @classmethod
    def enumerate_all(cls, arity: int, m: int, depth: int = 0) -> list:
        """Every object on ``m`` vertices, by cell count then cell set."""
        total = cls.count_all(arity, m, depth)
        if total > GRAPH_ENUMERATION_LIMIT:
            raise ResourceError(
                f"{cls.KIND} arity {arity} on {m} vertices has {total} objects "
                f"(limit {GRAPH_ENUMERATION_LIMIT})"
            )
        supports = list(combinations(range(m), arity))
        choices = [None] + list(cls.possible_states(arity, depth))
        objs = []
        for assignment in product(choices, repeat=len(supports)):
            cells = frozenset(
                cls.make_cell(s, st) for s, st in zip(supports, assignment) if st is not None
            )
            objs.append(cls.from_cells(arity, m, cells, depth))
        objs.sort(key=lambda o: (o.size(), o.sort_key()))
        return objs


def disjoint_pair_generators(objects, vector, changes: bool = False):
    """Alternating sums f(++) - f(+-) - f(-+) + f(--) over disjoint cell pairs.

    With ``changes`` every way of altering the state at two disjoint supports
    is used (additions, removals and same-support changes), not only the
    removal of two present cells.
    """
    for obj in objects:
        states = obj.states()
        if changes:
            supports = list(combinations(range(obj.vertex_count), obj.arity))
        else:
            supports = sorted(states)
        for s1, s2 in combinations(supports, 2):
            if set(s1) & set(s2):
                continue
            if changes:
                alt1 = [x for x in [None, *obj.possible_states(obj.arity, obj.depth)] if x != states.get(s1)]
                alt2 = [x for x in [None, *obj.possible_states(obj.arity, obj.depth)] if x != states.get(s2)]
            else:
                alt1 = alt2 = [None]
            for x1 in alt1:
                for x2 in alt2:
                    g_pm = obj.with_state(s2, x2)
                    g_mp = obj.with_state(s1, x1)
                    g_mm = g_pm.with_state(s1, x1)
                    yield vector(obj) - vector(g_pm) - vector(g_mp) + vector(g_mm)


def build_support_link_space(cls, key: LinkSpaceKey, changes: bool = False):
    """Exhaustive link space for a support-indexed graph class."""
    if key.i == 0:
        atoms = cls.base_atoms(key.depth)
        return build_quotient([atom_word(a) for a in atoms], [], metadata=(("key", key.slug),))
    objects = cls.enumerate_all(key.i, key.m, key.depth)
    slot_names = [link_space(cls.child_key(key, key.m - j)).basis_names for j in range(1, key.m + 1)]
    ambient = [tuple((a,) for a in combo) for combo in product(*slot_names)]
    vectors = {obj: flag_vector(obj) for obj in objects}
    empty = vectors[objects[0]]
    spanning = [empty] + [vectors[o] - empty for o in objects[1:]]

    def name(k, idx):
        if key.i == 1:
            if k == 0:
                return "a"
            if objects[idx].size() == 1:
                return objects[idx].sole_cell_atom()
        return key.coordinate_name(k)

    return build_quotient(
        ambient,
        disjoint_pair_generators(objects, vectors.__getitem__, changes),
        spanning=spanning,
        names=name,
        metadata=(("key", key.slug), ("objects", len(objects)), ("changes", changes)),
    )
