"""Batch experiments on families of objects, written as deterministic text reports."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product

from . import shelling
from .algebra import (
    Echelon,
    FormalVector,
    convex_membership,
    dump_vector,
    format_word,
    format_rational,
    psd_probe,
    solve_linear_system,
)
from .decorated import BoundaryGraph, OrientedGraph, oriented_cell
from .errors import InputError, InvariantError, ResourceError
from .estimators import object_vector, vectors_to_points
from .graphs import IGraph, shelling_count
from .io import describe, serialize
from .linkspace import FORMAT_VERSION, get_store, link_space
from .relations import GroupTable, NaryRelation, group_classes, group_relation

REPORT_HEADER = "flagvec-report v1"
MAX_EXHAUSTIVE_ARITY = 3
MAX_EXHAUSTIVE_R = 6
MAX_GROUP_ORDER = 4
RELATION_CLASS_LIMIT = 16  # m**n tuple slots


@dataclass
class ObjectClass:
    """A family of objects: ``kind`` with ``arity`` (i, or n for relations).

    ``r`` is a vertex count (or group order); ``mode`` is
    ``all-up-to-equivalence`` or ``from-files`` (then ``objects`` is used
    verbatim, duplicates included).
    """

    kind: str
    arity: int = 0
    r: int = 0
    mode: str = "all-up-to-equivalence"
    objects: list = field(default_factory=list)
    labels: list = field(default_factory=list)

    def describe(self) -> str:
        if self.mode == "from-files":
            return f"{self.kind} from-files count={len(self.objects)}"
        if self.kind == "group":
            return f"group order={self.r} mode={self.mode}"
        name = "n" if self.kind == "relation" else "i"
        return f"{self.kind} {name}={self.arity} r={self.r} mode={self.mode}"

    def members(self) -> list:
        """Labeled objects, deterministic order."""
        if self.mode == "from-files":
            labels = self.labels or [f"obj{k}" for k in range(len(self.objects))]
            return list(zip(labels, self.objects))
        if self.mode != "all-up-to-equivalence":
            raise InputError(f"unknown enumeration mode {self.mode!r}")
        reps = enumerate_class(self.kind, self.arity, self.r)
        return [(f"obj{k}", o) for k, o in enumerate(reps)]


def enumerate_class(kind: str, arity: int, r: int) -> list:
    if kind == "group":
        if r > MAX_GROUP_ORDER:
            raise ResourceError(f"group classes are limited to order {MAX_GROUP_ORDER}")
        return group_classes(r)
    if kind == "relation":
        if r ** arity > RELATION_CLASS_LIMIT:
            raise ResourceError(f"relation class n={arity} r={r} has 2^{r ** arity} members")
        slots = list(product(range(r), repeat=arity))
        objs = []
        for mask in range(1 << len(slots)):
            objs.append(NaryRelation(arity, 0, r, frozenset(s for k, s in enumerate(slots) if mask >> k & 1)))
        return shelling.class_representatives(objs)
    cls = {"igraph": IGraph, "oriented": OrientedGraph, "boundary": BoundaryGraph}.get(kind)
    if cls is None:
        raise InputError(f"unknown object kind {kind!r}")
    if arity > MAX_EXHAUSTIVE_ARITY or r > MAX_EXHAUSTIVE_R:
        raise ResourceError(
            f"exhaustive enumeration needs i <= {MAX_EXHAUSTIVE_ARITY}, r <= {MAX_EXHAUSTIVE_R}"
        )
    return shelling.class_representatives(cls.enumerate_all(arity, r))


def equivalent(a, b) -> bool:
    if isinstance(a, GroupTable) and isinstance(b, GroupTable):
        return shelling.are_equivalent(group_relation(a), group_relation(b))
    return shelling.are_equivalent(a, b)


class Report:
    """Ordered ``key: value`` lines plus certificate blocks."""

    def __init__(self, experiment: str):
        self.experiment = experiment
        self.fields: list = []
        self.certificates: list = []

    def add(self, key: str, value):
        self.fields.append((key, value))

    def certify(self, name: str, vector: FormalVector):
        self.certificates.append((name, vector))

    def get(self, key, default=None):
        for k, v in self.fields:
            if k == key:
                return v
        return default

    def get_all(self, key) -> list:
        return [v for k, v in self.fields if k == key]

    def render(self) -> str:
        lines = [REPORT_HEADER, f"experiment: {self.experiment}"]
        for k, v in self.fields:
            lines.append(f"{k}: {_fmt(v)}")
        for name, vec in self.certificates:
            lines.append(f"begin certificate {name}")
            lines.append(dump_vector(vec).rstrip("\n"))
            lines.append(f"end certificate {name}")
        return "\n".join(lines) + "\n"

    def write(self, path):
        with open(path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(self.render())


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, (list, tuple)):
        return " ".join(_fmt(v) for v in value) if value else "-"
    return str(value)


def _common_fields(report: Report, objclass: ObjectClass | None, vector: str | None):
    if objclass is not None:
        report.add("class", objclass.describe())
        report.add("scale", "answers hold only for the enumerated objects")
    if vector is not None:
        report.add("vector", vector)
    report.add("format_version", FORMAT_VERSION)
    report.add("relation_budget", get_store().budget.tag)


def _labeled_vectors(members, vector, report):
    out = []
    truncated = None
    for label, obj in members:
        try:
            out.append((label, obj, object_vector(obj, vector)))
        except ResourceError as exc:
            truncated = str(exc)
            break
    if truncated:
        report.add("truncated", f"yes after {len(out)} objects: {truncated}")
    else:
        report.add("truncated", "no")
    return out


def _members_or_truncate(objclass, report):
    try:
        return objclass.members()
    except ResourceError as exc:
        report.add("truncated", f"yes before enumeration: {exc}")
        return None


def independence_report(objclass: ObjectClass, vector: str = "flag") -> Report:
    """Rank of the vectors of a class, with kernel certificates when dependent."""
    report = Report("independence")
    _common_fields(report, objclass, vector)
    members = _members_or_truncate(objclass, report)
    if members is None:
        return report
    labeled = _labeled_vectors(members, vector, report)
    words = sorted({w for _, _, v in labeled for w in v})
    ech = Echelon(track=True)
    independent, kernels = [], []
    for k, (label, _, v) in enumerate(labeled):
        pivot, kernel = ech.insert(v.as_dict(), tag=k)
        if pivot is not None:
            independent.append(label)
        else:
            kernels.append((label, kernel))
    report.add("count", len(labeled))
    report.add("ambient_dimension", len(words))
    report.add("rank", ech.rank)
    report.add("independent", ech.rank == len(labeled))
    report.add("basis_objects", independent)
    for label, obj, _ in labeled:
        report.add(f"object {label}", describe(obj))
    for label, kernel in kernels:
        total = FormalVector.zero()
        for k, c in kernel.items():
            total = total + labeled[k][2] * c
        if total:
            raise InvariantError(f"kernel certificate for {label} does not vanish")
        cert = FormalVector({((labeled[k][0],),): c for k, c in kernel.items()})
        report.certify(f"kernel-{label}", cert)
    report.add("kernel_certificates", len(kernels))
    if ech.rank:
        # columns on which the basis objects form a nonsingular square block
        report.certify("independence-columns", FormalVector({w: 1 for w in ech.pivots()}))
    return report


def collision_scan(objclass: ObjectClass, vector: str = "flag") -> Report:
    """Group objects by exact vector and report inequivalent objects sharing one."""
    report = Report("collisions")
    _common_fields(report, objclass, vector)
    members = _members_or_truncate(objclass, report)
    if members is None:
        return report
    labeled = _labeled_vectors(members, vector, report)
    buckets: dict = {}
    for label, obj, v in labeled:
        buckets.setdefault(dump_vector(v), []).append((label, obj, v))
    collisions, suppressed, equivalent_pairs = [], 0, []
    for key in sorted(buckets):
        group = buckets[key]
        for (la, oa, va), (lb, ob, _) in combinations(group, 2):
            if equivalent(oa, ob):
                suppressed += 1
                canon = shelling.canonical_form(group_relation(oa) if isinstance(oa, GroupTable) else oa)
                equivalent_pairs.append(f"{la} {lb} canonical {describe(canon)}")
            else:
                collisions.append((la, lb, va))
    report.add("count", len(labeled))
    report.add("distinct_vectors", len(buckets))
    report.add("equivalent_pairs_suppressed", suppressed)
    report.add("collisions", len(collisions))
    report.add("injective_at_scale", not collisions)
    for label, obj, _ in labeled:
        report.add(f"object {label}", describe(obj))
    for pair in equivalent_pairs:
        report.add("equivalent", pair)
    for la, lb, v in collisions:
        report.add("collision", f"{la} {lb}")
        report.certify(f"shared-vector-{la}-{lb}", v)
    for key in sorted(buckets):
        group = buckets[key]
        report.certify("vector-" + "-".join(label for label, _, _ in group), group[0][2])
    return report


def _as_points(points):
    labels = [label for label, _ in points]
    if len(set(labels)) != len(labels):
        raise InputError("point labels must be unique")
    raw = [p for _, p in points]
    if raw and all(isinstance(p, FormalVector) for p in raw):
        vocab, coords = vectors_to_points(raw)
        return labels, coords, [format_word(w) for w in vocab]
    coords = [[Fraction(x) for x in p] for p in raw]
    dims = {len(c) for c in coords}
    if len(dims) > 1:
        raise InputError("points have different dimensions")
    return labels, coords, [f"axis {d}" for d in range(dims.pop() if dims else 0)]


def _axis_vector(values, prefix="x"):
    return FormalVector({((f"{prefix}{d}",),): c for d, c in enumerate(values)})


def _add_axes(report, axes):
    report.add("dimension", len(axes))
    for d, name in enumerate(axes):
        report.add(f"coordinate x{d}", name)
    return len(axes)


def hull_vertex_report(points, source: str = "points") -> Report:
    """Decide for each labeled point whether it is a vertex of the hull of all of them."""
    report = Report("hull")
    report.add("class", source)
    _common_fields(report, None, None)
    if len(points) < 2:
        raise InputError("hull test needs at least two points")
    labels, coords, axes = _as_points(points)
    report.add("count", len(labels))
    _add_axes(report, axes)
    first_seen: dict = {}
    duplicates = set()
    for k, c in enumerate(coords):
        key = tuple(c)
        if key in first_seen:
            duplicates.add(k)
            duplicates.add(first_seen[key])
        else:
            first_seen[key] = k
    for label, c in zip(labels, coords):
        report.certify(f"input-{label}", _axis_vector(c))
    distinct = sorted(first_seen.values())
    vertices = 0
    for k, label in enumerate(labels):
        if k in duplicates:
            report.add(f"point {label}", "duplicate")
            continue
        others = [j for j in distinct if j != k]
        result = convex_membership(coords[k], [coords[j] for j in others])
        if result.feasible:
            report.add(f"point {label}", "non-vertex")
            report.certify(
                f"weights-{label}",
                FormalVector({((labels[j],),): w for j, w in zip(others, result.weights)}),
            )
        else:
            vertices += 1
            report.add(f"point {label}", "vertex")
            y, t = result.separator
            report.certify(f"separator-{label}", _axis_vector(y) + FormalVector({(("offset",),): t}))
    report.add("separator_convention", "y.q + offset <= 0 for the other points q, y.p + offset > 0")
    report.add("vertices", vertices)
    report.add("duplicates", len(duplicates))
    return report


def _sym_index(dim):
    return [(i, j) for i in range(dim) for j in range(i, dim)]


def cosphere_probe(points, source: str = "points") -> Report:
    """Look for a sphere through all points, then (heuristically) a quadric of inner-product type."""
    report = Report("cosphere")
    report.add("class", source)
    _common_fields(report, None, None)
    if len(points) < 2:
        raise InputError("co-sphericity probe needs at least two points")
    labels, coords, axes = _as_points(points)
    report.add("count", len(labels))
    dim = _add_axes(report, axes)
    # stage 1: |x|^2 - 2 c.x + k = 0
    matrix = [[-2 * x for x in c] + [Fraction(1)] for c in coords]
    rhs = [-sum(x * x for x in c) for c in coords]
    sol = solve_linear_system(matrix, rhs)
    report.add("stage1_method", "standard inner product, exact linear solve")
    if sol is None:
        report.add("stage1_cospherical", False)
    else:
        center, k = sol[:dim], sol[dim]
        report.add("stage1_cospherical", True)
        report.add("stage1_center", center)
        report.add("stage1_radius_squared", sum(c * c for c in center) - k)
        report.certify("stage1-center", _axis_vector(center))
    # stage 2: x^T M x - 2 c.x + k = 0 with trace(M) = dim
    report.add("stage2_method", "heuristic: particular solution of the affine quadric system, PSD test")
    pairs = _sym_index(dim)
    rows, rhs2 = [], []
    for c in coords:
        quad = [(1 if i == j else 2) * c[i] * c[j] for i, j in pairs]
        rows.append(quad + [-2 * x for x in c] + [Fraction(1)])
        rhs2.append(Fraction(0))
    rows.append([Fraction(int(i == j)) for i, j in pairs] + [Fraction(0)] * (dim + 1))
    rhs2.append(Fraction(dim))
    sol2 = solve_linear_system(rows, rhs2) if dim else None
    if sol2 is None:
        report.add("stage2_result", "probe inconclusive (no normalized quadric)")
    else:
        M = [[Fraction(0)] * dim for _ in range(dim)]
        for (i, j), val in zip(pairs, sol2):
            M[i][j] = M[j][i] = val
        if psd_probe(M):
            report.add("stage2_result", "psd quadric found")
        else:
            report.add("stage2_result", "probe inconclusive (particular quadric not psd)")
        report.certify(
            "stage2-matrix",
            FormalVector({((f"m{i}_{j}",),): val for (i, j), val in zip(pairs, sol2)}),
        )
    return report


# ---------------------------------------------------------------------------
# invariance suite


def random_object(kind: str, arity: int, r: int, rng: random.Random):
    if kind == "igraph":
        supports = [s for s in combinations(range(r), arity)]
        return IGraph(arity, r, frozenset(s for s in supports if rng.random() < 0.5))
    if kind == "oriented":
        cells = [
            oriented_cell(s, rng.choice((1, -1)))
            for s in combinations(range(r), arity)
            if rng.random() < 0.5
        ]
        return OrientedGraph(arity, r, frozenset(cells))
    if kind == "boundary":
        states = BoundaryGraph.possible_states(arity, 0)
        cells = [
            BoundaryGraph.make_cell(s, rng.choice(states))
            for s in combinations(range(r), arity)
            if rng.random() < 0.5
        ]
        return BoundaryGraph(arity, r, frozenset(cells))
    if kind == "relation":
        slots = list(product(range(r), repeat=arity))
        return NaryRelation(arity, 0, r, frozenset(s for s in slots if rng.random() < 0.3))
    if kind == "group":
        groups = group_classes(r)
        return rng.choice(groups)
    raise InputError(f"unknown object kind {kind!r}")


def _fail(check, obj, detail=""):
    witness = serialize(obj) if not isinstance(obj, NaryRelation) or obj.depth == 0 else describe(obj)
    raise InvariantError(f"invariance check {check} failed {detail}".strip(), witness=witness)


def _sign_coherence(graph: OrientedGraph) -> bool:
    for cell in graph.cells:
        if len(cell.support) < 2:
            continue
        single = OrientedGraph(graph.arity, graph.vertex_count, frozenset({cell}))
        u, v = cell.support[0], cell.support[1]
        everything = tuple(range(graph.vertex_count))

        def twice(first, second):
            once = single.link(first, everything)
            rest = tuple(range(once.vertex_count))
            idx = [x for x in everything if x != first].index(second)
            (c,) = once.link(idx, rest).cells
            return c.sign

        if twice(u, v) != -twice(v, u):
            return False
    return True


def invariance_suite(objclass: ObjectClass, trials: int = 100, seed: int = 1, r_values=None) -> Report:
    """Seeded randomized checks of the implementation-level invariants.

    ``r_values`` lists the vertex counts (or group orders) to sample from;
    it defaults to ``1..objclass.r``.
    """
    report = Report("invariance")
    _common_fields(report, objclass, "flag and shelling")
    kind, arity = objclass.kind, objclass.arity
    rs = list(r_values) if r_values else list(range(1, objclass.r + 1))
    rng = random.Random(seed)
    counts = {"relabeling": 0, "method": 0, "coefficient_sum": 0, "quotient": 0, "sign_coherence": 0}
    report.add("seed", seed)
    report.add("trials", trials)
    report.add("r_values", rs)
    for trial in range(trials):
        r = rng.choice(rs)
        obj = random_object(kind, arity, r, rng)
        perm = list(range(r))
        rng.shuffle(perm)
        moved = obj.relabel(perm)
        if object_vector(obj, "flag") != object_vector(moved, "flag"):
            _fail("relabeling", obj, f"(trial {trial}, perm {perm})")
        if kind != "group" and object_vector(obj, "shelling") != object_vector(moved, "shelling"):
            _fail("relabeling-shelling", obj, f"(trial {trial}, perm {perm})")
        counts["relabeling"] += 1
        if r <= 6:
            if object_vector(obj, "flag", "naive") != object_vector(obj, "flag", "dp"):
                _fail("method", obj, f"(trial {trial})")
            counts["method"] += 1
        if kind in ("igraph", "oriented", "boundary"):
            if shelling.shelling_vector(obj).coefficient_sum() != shelling_count(arity, r):
                _fail("coefficient_sum", obj, f"(trial {trial})")
            counts["coefficient_sum"] += 1
        if kind == "igraph":
            pairs = [
                (a, b) for a, b in combinations(sorted(obj.cells), 2) if not set(a) & set(b)
            ]
            if pairs and IGraph.count_all(arity, r) <= 1024:
                c1, c2 = rng.choice(pairs)
                f = shelling.flag_vector
                gen = f(obj) - f(obj.without(c2)) - f(obj.without(c1)) + f(obj.without(c1).without(c2))
                if link_space(obj.link_key()).project(gen):
                    _fail("quotient", obj, f"(trial {trial}, cells {c1} {c2})")
                counts["quotient"] += 1
        if kind == "oriented":
            if not _sign_coherence(obj):
                _fail("sign_coherence", obj, f"(trial {trial})")
            counts["sign_coherence"] += 1
    for name, n in counts.items():
        report.add(f"checks_{name}", n)
    report.add("result", "pass")
    return report
