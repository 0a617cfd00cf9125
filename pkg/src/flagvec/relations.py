"""n-ary relations with placeholder links, and finite groups as ternary relations.

Tuple entries are integers: ``v >= 0`` is a real vertex and ``-k`` is the
placeholder for the vertex removed at step ``k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations, product

from . import shelling
from .algebra import Echelon, build_quotient
from .errors import InputError, InvariantError, ResourceError
from .linkspace import LinkSpaceKey, get_store, register_builder

MAX_ARITY = 4
FAMILY_TUPLE_LIMIT = 4096


def placeholder(k: int) -> int:
    if k < 1:
        raise InputError(f"placeholder index must be >= 1, got {k}")
    return -k


def is_placeholder(entry: int) -> bool:
    return entry < 0


def entry_key(entry: int):
    # vertices first, then placeholders by index
    return (1, -entry) if entry < 0 else (0, entry)


def tuple_key(t):
    return tuple(entry_key(e) for e in t)


def format_entry(entry: int) -> str:
    return f"*{-entry}" if entry < 0 else str(entry)


def format_tuple(t) -> str:
    return "(" + ",".join(format_entry(e) for e in t) + ")"


def placeholder_count(t) -> int:
    return sum(1 for e in t if e < 0)


def support(t) -> frozenset:
    """Real vertices of a tuple; placeholders are excluded."""
    return frozenset(e for e in t if e >= 0)


def is_admissible(t, depth: int) -> bool:
    """True if every prefix ``*1..*k`` (k <= depth) occurs at least ``k`` times."""
    for k in range(1, depth + 1):
        if sum(1 for e in t if -k <= e < 0) < k:
            return False
    return True


def admissible_tuples(n: int, depth: int, m: int) -> list:
    """All tuples at ``depth`` on ``m`` vertices that a chain of links can produce."""
    if n < 1:
        raise InputError("arity must be at least 1")
    if depth > n:
        raise InputError(f"depth {depth} exceeds arity {n}")
    entries = list(range(m)) + [-k for k in range(1, depth + 1)]
    out = [t for t in product(entries, repeat=n) if is_admissible(t, depth)]
    out.sort(key=tuple_key)
    return out


def admissible_base_relations(n: int) -> list:
    """All-placeholder tuples on ``*1..*n`` that are not forbidden."""
    return admissible_tuples(n, n, 0)


@dataclass(frozen=True)
class NaryRelation:
    arity: int
    depth: int
    vertex_count: int
    tuples: frozenset = frozenset()

    def __post_init__(self):
        if not 1 <= self.arity:
            raise InputError("arity must be at least 1")
        if not 0 <= self.depth <= self.arity:
            raise InputError(f"depth {self.depth} outside 0..{self.arity}")
        clean = set()
        for t in self.tuples:
            t = tuple(t)
            if len(t) != self.arity:
                raise InputError(f"tuple {t} does not have arity {self.arity}")
            for e in t:
                if e >= self.vertex_count or e < -self.depth:
                    raise InputError(
                        f"entry {format_entry(e)} of {format_tuple(t)} is out of range at depth {self.depth}"
                    )
            if placeholder_count(t) < self.depth:
                raise InvariantError(
                    f"tuple {format_tuple(t)} has fewer than {self.depth} placeholder occurrences"
                )
            clean.add(t)
        object.__setattr__(self, "tuples", frozenset(clean))

    def signature(self):
        return (self.arity, self.vertex_count, self.depth)

    def size(self) -> int:
        return len(self.tuples)

    def sort_key(self):
        return tuple(sorted(tuple_key(t) for t in self.tuples))

    def sorted_tuples(self) -> list:
        return sorted(self.tuples, key=tuple_key)

    def digest(self) -> str:
        return "{" + ",".join(format_tuple(t) for t in self.sorted_tuples()) + "}"

    def is_terminal(self) -> bool:
        return self.depth == self.arity or self.vertex_count == 0

    def terminal_atom(self) -> str:
        return f"rel:d{self.depth}{self.digest()}"

    def link_key(self) -> LinkSpaceKey:
        return LinkSpaceKey("relation", self.arity, self.vertex_count, self.depth)

    def restrict(self, remaining) -> "NaryRelation":
        """Keep the tuples whose real vertices all lie in ``remaining`` (labels unchanged)."""
        keep = set(remaining)
        return NaryRelation(
            self.arity,
            self.depth,
            self.vertex_count,
            frozenset(t for t in self.tuples if all(e < 0 or e in keep for e in t)),
        )

    def link(self, v: int, remaining=None) -> "NaryRelation":
        """Restrict to ``remaining``, put the next placeholder for ``v``, keep deep-enough tuples."""
        if self.depth >= self.arity:
            raise InputError(f"relation at depth {self.depth} = arity has no links")
        if remaining is None:
            remaining = tuple(range(self.vertex_count))
        if not 0 <= v < self.vertex_count:
            raise InputError(f"vertex {v} out of range 0..{self.vertex_count - 1}")
        if v not in remaining:
            raise InputError(f"vertex {v} is not among the remaining vertices")
        rest = [u for u in sorted(remaining) if u != v]
        index = {u: k for k, u in enumerate(rest)}
        mark = -(self.depth + 1)
        out = set()
        for t in self.tuples:
            if not all(e < 0 or e == v or e in index for e in t):
                continue
            s = tuple(mark if e == v else e for e in t)
            if placeholder_count(s) >= self.depth + 1:
                out.add(tuple(e if e < 0 else index[e] for e in s))
        return NaryRelation(self.arity, self.depth + 1, len(rest), frozenset(out))

    def relabel(self, perm) -> "NaryRelation":
        return NaryRelation(
            self.arity,
            self.depth,
            self.vertex_count,
            frozenset(tuple(e if e < 0 else perm[e] for e in t) for t in self.tuples),
        )

    def toggled(self, t) -> "NaryRelation":
        """Apply the simple change that adds ``t`` if absent and removes it if present."""
        t = tuple(t)
        tuples = self.tuples - {t} if t in self.tuples else self.tuples | {t}
        return NaryRelation(self.arity, self.depth, self.vertex_count, tuples)


@dataclass(frozen=True)
class SimpleChange:
    direction: str  # "add" or "remove"
    tuple: tuple

    def apply(self, relation: NaryRelation) -> NaryRelation:
        present = self.tuple in relation.tuples
        if self.direction == "add" and present:
            raise InputError(f"{format_tuple(self.tuple)} is already present")
        if self.direction == "remove" and not present:
            raise InputError(f"{format_tuple(self.tuple)} is not present")
        if self.direction not in ("add", "remove"):
            raise InputError(f"unknown change direction {self.direction!r}")
        return relation.toggled(self.tuple)

    @property
    def support(self) -> frozenset:
        return support(self.tuple)


def is_legal_pair(c1: SimpleChange, c2: SimpleChange) -> bool:
    """Supports must be distinct and disjoint; two empty supports are not distinct."""
    s1, s2 = c1.support, c2.support
    return s1 != s2 and not (s1 & s2)


def change_for(relation: NaryRelation, t) -> SimpleChange:
    return SimpleChange("remove" if tuple(t) in relation.tuples else "add", tuple(t))


def relation_flag_vector(relation: NaryRelation, method: str = "dp"):
    return shelling.flag_vector(relation, method)


def relation_shelling_vector(relation: NaryRelation, method: str = "dp"):
    return shelling.shelling_vector(relation, method)


relation_link = NaryRelation.link


def relation_family(n: int, depth: int, m: int):
    """Relations at (n, depth, m) by tuple count, then canonical digest."""
    tuples = admissible_tuples(n, depth, m)
    if len(tuples) > FAMILY_TUPLE_LIMIT:
        raise ResourceError(f"{len(tuples)} admissible tuples at (n={n}, d={depth}, m={m})")
    for size in range(len(tuples) + 1):
        for combo in combinations(tuples, size):
            yield NaryRelation(n, depth, m, frozenset(combo))


def legal_tuple_pairs(tuples) -> list:
    pairs = []
    for t1, t2 in combinations(tuples, 2):
        s1, s2 = support(t1), support(t2)
        if s1 != s2 and not (s1 & s2):
            pairs.append((t1, t2))
    return pairs


@register_builder("relation")
def _build_relation(key: LinkSpaceKey, store):
    n, d, m = key.i, key.depth, key.m
    if n > MAX_ARITY:
        raise ResourceError(f"relations of arity {n} exceed the guard {MAX_ARITY}")
    if d > n:
        raise InputError(f"depth {d} exceeds arity {n}")
    meta = [("key", key.slug), ("budget", store.budget.tag)]
    if d == n or m == 0:
        return build_quotient(None, [], metadata=meta + [("coverage", "terminal")])
    budget = store.budget
    pairs = legal_tuple_pairs(admissible_tuples(n, d, m))
    kernel = Echelon()
    family = []
    stale = 0
    stop = "exhausted"
    vec = relation_flag_vector
    for rel in relation_family(n, d, m):
        if len(family) >= budget.max_relations:
            stop = "budget"
            break
        before = kernel.rank
        base = vec(rel)
        for t1, t2 in pairs:
            r1, r2 = rel.toggled(t1), rel.toggled(t2)
            g = base - vec(r2) - vec(r1) + vec(r1.toggled(t2))
            kernel.insert(g.as_dict())
        family.append(rel)
        stale = stale + 1 if kernel.rank == before else 0
        if stale >= budget.window:
            stop = "window"
            break
    vectors = [vec(r) for r in family]
    spanning = [vectors[0]] + [v - vectors[0] for v in vectors[1:]]
    meta += [
        ("coverage", stop),
        ("family_size", len(family)),
        ("legal_pairs", len(pairs)),
        ("relation_rank", kernel.rank),
    ]
    return build_quotient(
        None,
        kernel.basis(),
        spanning=spanning,
        names=lambda k, idx: key.coordinate_name(k),
        metadata=meta,
    )


# ---------------------------------------------------------------------------
# groups


@dataclass(frozen=True)
class GroupTable:
    """Cayley table of a finite group on elements ``0..order-1``."""

    table: tuple

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(tuple(row) for row in self.table))
        self.validate()

    @property
    def order(self) -> int:
        return len(self.table)

    def validate(self):
        m = self.order
        if m == 0:
            raise InputError("a group needs at least one element")
        full = set(range(m))
        for a, row in enumerate(self.table):
            if len(row) != m:
                raise InputError(f"row {a} has {len(row)} entries, expected {m}")
            if set(row) != full:
                raise InputError(f"row {a} is not a permutation of 0..{m - 1}")
        for b in range(m):
            if {self.table[a][b] for a in range(m)} != full:
                raise InputError(f"column {b} is not a permutation of 0..{m - 1}")
        identity = next(
            (e for e in range(m) if all(self.table[e][x] == x == self.table[x][e] for x in range(m))),
            None,
        )
        if identity is None:
            raise InputError("no identity element")
        t = self.table
        for a, b, c in product(range(m), repeat=3):
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise InputError(f"associativity fails for ({a},{b},{c})")

    def relabel(self, perm) -> "GroupTable":
        m = self.order
        inv = [0] * m
        for u, p in enumerate(perm):
            inv[p] = u
        return GroupTable(tuple(tuple(perm[self.table[inv[x]][inv[y]]] for y in range(m)) for x in range(m)))


def group_relation(group: GroupTable) -> NaryRelation:
    """The ternary relation of triples (a, b, ab)."""
    m = group.order
    return NaryRelation(
        3, 0, m, frozenset((a, b, group.table[a][b]) for a in range(m) for b in range(m))
    )


def group_flag_vector(group: GroupTable, method: str = "dp"):
    return relation_flag_vector(group_relation(group), method)


def cyclic_group(m: int) -> GroupTable:
    return GroupTable(tuple(tuple((a + b) % m for b in range(m)) for a in range(m)))


def klein_four_group() -> GroupTable:
    return GroupTable(tuple(tuple(a ^ b for b in range(4)) for a in range(4)))


def latin_squares_with_identity(m: int):
    """Cayley-style Latin squares whose first row and column are the identity."""
    grid = [[None] * m for _ in range(m)]
    for k in range(m):
        grid[0][k] = k
        grid[k][0] = k
    cells = [(r, c) for r in range(1, m) for c in range(1, m)]

    def fill(pos):
        if pos == len(cells):
            yield tuple(tuple(row) for row in grid)
            return
        r, c = cells[pos]
        used = set(grid[r][:c]) | {grid[k][c] for k in range(r)}
        for x in range(m):
            if x not in used:
                grid[r][c] = x
                yield from fill(pos + 1)
        grid[r][c] = None

    yield from fill(0)


def group_classes(m: int) -> list:
    """One Cayley table per isomorphism class of groups of order ``m``."""
    if m > 6:
        raise ResourceError(f"brute-force group enumeration is limited to order 6 (got {m})")
    groups = []
    for square in latin_squares_with_identity(m):
        try:
            groups.append(GroupTable(square))
        except InputError:
            continue
    reps, seen = [], set()
    for g in groups:
        rel = group_relation(g)
        if rel in seen:
            continue
        members = {g.relabel(p) for p in permutations(range(m))}
        seen |= {group_relation(x) for x in members}
        reps.append(min(members, key=lambda x: x.table))
    reps.sort(key=lambda x: x.table)
    return reps


def current_budget():
    return get_store().budget
