"""Exact linear algebra over formal sums of tensor words.

Words are tuples of slots and slots are tuples of atom names, so the word
``[a][b]`` is ``(("a",), ("b",))`` and the empty tensor (the scalar 1) is
``()``.  All coefficients are :class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import chain
from typing import Iterable, Mapping, Sequence

from .errors import InputError, InvariantError

Word = tuple  # tuple[tuple[str, ...], ...]

EMPTY_WORD: Word = ()
VECTOR_HEADER = "flagvec-vector v1"
EMPTY_SLOT_TOKEN = "_"
EMPTY_WORD_TOKEN = "1"


def atom_word(name: str) -> Word:
    return ((name,),)


def flatten_word(word: Word) -> Word:
    """Collapse all slots of ``word`` into a single slot."""
    return (tuple(chain.from_iterable(word)),)


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise InputError("floating point coefficients are not accepted")
    return Fraction(value)


class FormalVector:
    """A finite rational combination of words.

    Instances are treated as immutable; zero coefficients are never stored.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[Word, object] | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean = {}
        for word, coef in items:
            c = as_fraction(coef)
            if c:
                clean[word] = clean.get(word, 0) + c
        self._terms = {w: c for w, c in clean.items() if c}

    @classmethod
    def _raw(cls, terms: dict) -> "FormalVector":
        v = cls.__new__(cls)
        v._terms = terms
        return v

    @classmethod
    def atom(cls, name: str, coef=1) -> "FormalVector":
        return cls({atom_word(name): coef})

    @classmethod
    def scalar(cls, coef=1) -> "FormalVector":
        return cls({EMPTY_WORD: coef})

    @classmethod
    def zero(cls) -> "FormalVector":
        return cls._raw({})

    # mapping-like access
    def __getitem__(self, word: Word) -> Fraction:
        return self._terms.get(word, Fraction(0))

    def __iter__(self):
        return iter(self._terms)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def items(self):
        return self._terms.items()

    def words(self) -> list:
        return sorted(self._terms)

    def as_dict(self) -> dict:
        return dict(self._terms)

    def __eq__(self, other):
        if not isinstance(other, FormalVector):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __repr__(self):
        if not self._terms:
            return "FormalVector(0)"
        parts = [f"{c}*{format_word(w)}" for w, c in sorted(self._terms.items())]
        return "FormalVector(" + " + ".join(parts) + ")"

    # arithmetic
    def __add__(self, other: "FormalVector") -> "FormalVector":
        out = dict(self._terms)
        for w, c in other._terms.items():
            s = out.get(w, 0) + c
            if s:
                out[w] = s
            else:
                out.pop(w, None)
        return FormalVector._raw(out)

    def __neg__(self) -> "FormalVector":
        return FormalVector._raw({w: -c for w, c in self._terms.items()})

    def __sub__(self, other: "FormalVector") -> "FormalVector":
        return self + (-other)

    def __mul__(self, scalar) -> "FormalVector":
        s = as_fraction(scalar)
        if not s:
            return FormalVector.zero()
        return FormalVector._raw({w: c * s for w, c in self._terms.items()})

    __rmul__ = __mul__

    def coefficient_sum(self) -> Fraction:
        return sum(self._terms.values(), Fraction(0))

    def map_atoms(self, mapping) -> "FormalVector":
        """Apply ``mapping`` (callable or dict) to every atom of every word."""
        f = mapping if callable(mapping) else (lambda a: mapping.get(a, a))
        return FormalVector(
            (tuple(tuple(f(a) for a in slot) for slot in w), c)
            for w, c in self._terms.items()
        )

    def evaluate(self, values: Mapping[str, object]) -> Fraction:
        """Substitute rational values for atoms; the product runs over all atoms."""
        total = Fraction(0)
        for w, c in self._terms.items():
            term = c
            for atom in chain.from_iterable(w):
                term *= as_fraction(values[atom])
            total += term
        return total


def tensor(u: FormalVector, v: FormalVector) -> FormalVector:
    """Bilinear tensor product; the slots of ``v`` are appended after those of ``u``."""
    out: dict = {}
    for wu, cu in u.items():
        for wv, cv in v.items():
            w = wu + wv
            out[w] = out.get(w, 0) + cu * cv
    return FormalVector._raw({w: c for w, c in out.items() if c})


def tensor_all(vectors: Iterable[FormalVector]) -> FormalVector:
    acc = FormalVector.scalar(1)
    for v in vectors:
        acc = tensor(acc, v)
    return acc


def flatten(v: FormalVector) -> FormalVector:
    """Re-express ``v`` with every word collapsed into one slot."""
    out: dict = {}
    for w, c in v.items():
        fw = flatten_word(w)
        out[fw] = out.get(fw, 0) + c
    return FormalVector._raw({w: c for w, c in out.items() if c})


def vector_sum(vectors: Iterable[FormalVector]) -> FormalVector:
    out: dict = {}
    for v in vectors:
        for w, c in v.items():
            out[w] = out.get(w, 0) + c
    return FormalVector._raw({w: c for w, c in out.items() if c})


# ---------------------------------------------------------------------------
# text serialization


def format_rational(q) -> str:
    q = as_fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    try:
        num, sep, den = text.partition("/")
        return Fraction(int(num), int(den)) if sep else Fraction(int(num))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad rational {text!r}") from exc


def format_word(word: Word) -> str:
    if not word:
        return EMPTY_WORD_TOKEN
    return "|".join(".".join(slot) if slot else EMPTY_SLOT_TOKEN for slot in word)


def parse_word(text: str) -> Word:
    if text == EMPTY_WORD_TOKEN:
        return EMPTY_WORD
    slots = []
    for part in text.split("|"):
        slots.append(() if part == EMPTY_SLOT_TOKEN else tuple(part.split(".")))
    return tuple(slots)


def dump_vector(v: FormalVector) -> str:
    lines = [VECTOR_HEADER]
    for text, coef in sorted((format_word(w), c) for w, c in v.items()):
        lines.append(f"term {format_rational(coef)} {text}")
    return "\n".join(lines) + "\n"


def load_vector(text: str) -> FormalVector:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0].strip() != VECTOR_HEADER:
        raise InputError(f"line 1: expected header {VECTOR_HEADER!r}")
    terms = {}
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if len(parts) != 3 or parts[0] != "term":
            raise InputError(f"line {lineno}: expected 'term <num>/<den> <word>'")
        word = parse_word(parts[2])
        if word in terms:
            raise InputError(f"line {lineno}: duplicate word {parts[2]}")
        terms[word] = parse_rational(parts[1])
    return FormalVector(terms)


def format_combination(v: FormalVector) -> str:
    """Human-readable single-line form such as ``a + 2*b``."""
    if not v:
        return "0"
    pieces = []
    for w, c in sorted(v.items()):
        name = format_word(w)
        if c == 1:
            pieces.append(name)
        elif c == -1:
            pieces.append("-" + name)
        else:
            pieces.append(f"{c}*{name}")
    return " + ".join(pieces).replace("+ -", "- ")


# ---------------------------------------------------------------------------
# row reduction


class Echelon:
    """Incrementally maintained reduced row echelon form of a sparse span.

    Columns are ordered by the natural ordering of words, so the pivot of a
    row is its smallest word.  The reduced form of a subspace is unique for a
    fixed column order, hence independent of insertion order.  With
    ``track=True`` each row remembers which inserted vectors it combines.
    """

    def __init__(self, track: bool = False):
        self.track = track
        self.rows: dict = {}
        self.combos: dict = {}

    @property
    def rank(self) -> int:
        return len(self.rows)

    def pivots(self) -> list:
        return sorted(self.rows)

    def reduce(self, vec: Mapping, combo: dict | None = None):
        res = dict(vec)
        combo = dict(combo) if combo is not None else {}
        for p in [p for p in res if p in self.rows]:
            c = res.get(p)
            if not c:
                continue
            for w, rc in self.rows[p].items():
                s = res.get(w, 0) - c * rc
                if s:
                    res[w] = s
                else:
                    res.pop(w, None)
            if self.track:
                for t, tc in self.combos[p].items():
                    s = combo.get(t, 0) - c * tc
                    if s:
                        combo[t] = s
                    else:
                        combo.pop(t, None)
        return res, combo

    def insert(self, vec: Mapping, tag=None):
        """Add ``vec`` to the span.

        Returns ``(pivot, None)`` if the rank grew, else ``(None, kernel)``
        where ``kernel`` expresses zero as a combination of inserted tags
        (``{}`` unless tracking).
        """
        start = {tag: Fraction(1)} if self.track else None
        res, combo = self.reduce(vec, start)
        if not res:
            return None, combo
        pivot = min(res)
        inv = 1 / res[pivot]
        row = {w: c * inv for w, c in res.items()}
        combo = {t: c * inv for t, c in combo.items()}
        for p, other in self.rows.items():
            c = other.get(pivot)
            if not c:
                continue
            for w, rc in row.items():
                s = other.get(w, 0) - c * rc
                if s:
                    other[w] = s
                else:
                    other.pop(w, None)
            if self.track:
                oc = self.combos[p]
                for t, tc in combo.items():
                    s = oc.get(t, 0) - c * tc
                    if s:
                        oc[t] = s
                    else:
                        oc.pop(t, None)
        self.rows[pivot] = row
        if self.track:
            self.combos[pivot] = combo
        return pivot, None

    def contains(self, vec: Mapping) -> bool:
        return not self.reduce(vec)[0]

    def basis(self) -> list:
        return [FormalVector(self.rows[p]) for p in self.pivots()]


@dataclass(frozen=True)
class RowReduction:
    rank: int
    pivots: tuple  # ambient indices, increasing
    rows: tuple  # reduced rows as FormalVector, ordered by pivot


def row_reduce(vectors: Sequence[FormalVector], ambient: Sequence[Word]) -> RowReduction:
    """Reduced row echelon form of ``vectors`` with columns in ``ambient`` order."""
    index = {w: k for k, w in enumerate(ambient)}
    ech = Echelon()
    for v in vectors:
        indexed = {}
        for w, c in v.items():
            if w not in index:
                raise InputError(f"word {format_word(w)} is not in the ambient basis")
            indexed[index[w]] = c
        ech.insert(indexed)
    pivots = tuple(ech.pivots())
    rows = tuple(
        FormalVector({ambient[k]: c for k, c in ech.rows[p].items()}) for p in pivots
    )
    return RowReduction(rank=len(pivots), pivots=pivots, rows=rows)


def rank(vectors: Iterable[FormalVector]) -> int:
    ech = Echelon()
    for v in vectors:
        ech.insert(v.as_dict())
    return ech.rank


# ---------------------------------------------------------------------------
# quotient spaces


@dataclass(frozen=True)
class QuotientSpace:
    """The quotient of a word space by the span of ``generators``.

    ``generators`` holds the reduced echelon basis of the relation span.
    The named coordinates are the residues of ``basis_vectors``; any part of
    a projected vector outside their span is reported under its own
    (flattened) residue words, so :meth:`project` is exact on the whole word
    space.  ``ambient`` is ``None`` when the word space is not enumerated.
    """

    ambient: tuple | None
    generators: tuple
    basis_names: tuple
    basis_vectors: tuple
    metadata: tuple = ()
    _kernel: Echelon = field(init=False, repr=False, compare=False)
    _coords: Echelon = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        kernel = Echelon()
        for g in self.generators:
            kernel.insert(g.as_dict())
        coords = Echelon(track=True)
        for k, b in enumerate(self.basis_vectors):
            res, _ = kernel.reduce(b.as_dict())
            pivot, _ = coords.insert(res, tag=k)
            if pivot is None:
                raise InvariantError("quotient basis vectors are dependent modulo the relations")
        object.__setattr__(self, "_kernel", kernel)
        object.__setattr__(self, "_coords", coords)

    @property
    def dim(self) -> int:
        return len(self.basis_names)

    @property
    def relation_rank(self) -> int:
        return self._kernel.rank

    @property
    def pivots(self) -> tuple:
        words = self._kernel.pivots()
        if self.ambient is None:
            return tuple(words)
        index = {w: k for k, w in enumerate(self.ambient)}
        return tuple(sorted(index[w] for w in words))

    def meta(self, name, default=None):
        return dict(self.metadata).get(name, default)

    def residue(self, v: FormalVector):
        """Return ``(named coordinates, overflow words)`` of ``v`` modulo the relations."""
        res, _ = self._kernel.reduce(v.as_dict())
        coords: dict = {}
        if res:
            for q in self._coords.pivots():
                c = res.get(q)
                if not c:
                    continue
                for w, rc in self._coords.rows[q].items():
                    s = res.get(w, 0) - c * rc
                    if s:
                        res[w] = s
                    else:
                        res.pop(w, None)
                for k, tc in self._coords.combos[q].items():
                    coords[k] = coords.get(k, 0) + c * tc
        return {k: c for k, c in coords.items() if c}, res

    def project(self, v: FormalVector) -> FormalVector:
        coords, overflow = self.residue(v)
        out = {atom_word(self.basis_names[k]): c for k, c in coords.items()}
        for w, c in overflow.items():
            fw = flatten_word(w)
            out[fw] = out.get(fw, 0) + c
        return FormalVector(out)

    def in_kernel(self, v: FormalVector) -> bool:
        return self._kernel.contains(v.as_dict())

    def projection_matrix(self) -> list:
        """Rows are named coordinates, columns follow ``ambient``."""
        if self.ambient is None:
            raise InputError("projection matrix needs an enumerated ambient")
        matrix = [[Fraction(0)] * len(self.ambient) for _ in range(self.dim)]
        for j, w in enumerate(self.ambient):
            coords, _ = self.residue(FormalVector({w: 1}))
            for k, c in coords.items():
                matrix[k][j] = c
        return matrix


def build_quotient(
    ambient: Sequence[Word] | None,
    generators: Iterable[FormalVector],
    spanning: Sequence[FormalVector] | None = None,
    names=None,
    metadata: Iterable = (),
) -> QuotientSpace:
    """Quotient of the span of ``ambient`` words by ``generators``.

    Without ``spanning`` the coordinates are the non-pivot ambient words.
    With ``spanning``, candidates are scanned in order and each one that is
    independent of the earlier ones modulo the relations becomes a named
    coordinate.  ``names`` is either parallel to ``spanning`` or a callable
    ``names(k, index)`` giving the name of the ``k``-th chosen coordinate,
    found at position ``index`` of ``spanning``.
    """
    ambient_t = tuple(ambient) if ambient is not None else None
    allowed = set(ambient_t) if ambient_t is not None else None
    kernel = Echelon()
    count = 0
    for g in generators:
        if allowed is not None:
            for w in g:
                if w not in allowed:
                    raise InputError(f"word {format_word(w)} is not in the ambient basis")
        kernel.insert(g.as_dict())
        count += 1
    reduced = tuple(kernel.basis())
    if spanning is None:
        if ambient_t is None:
            basis_vectors, basis_names = (), ()
        else:
            free = [w for w in ambient_t if w not in kernel.rows]
            basis_vectors = tuple(FormalVector({w: 1}) for w in free)
            basis_names = tuple(".".join(flatten_word(w)[0]) for w in free)
    else:
        if names is None:
            raise InputError("spanning vectors need coordinate names")
        if not callable(names):
            if len(names) != len(spanning):
                raise InputError("names must run parallel to spanning vectors")
            listed = list(names)
            names = lambda k, idx: listed[idx]  # noqa: E731
        coords = Echelon()
        chosen, chosen_names = [], []
        for idx, v in enumerate(spanning):
            res, _ = kernel.reduce(v.as_dict())
            if coords.insert(res)[0] is not None:
                chosen_names.append(names(len(chosen), idx))
                chosen.append(v)
        basis_vectors, basis_names = tuple(chosen), tuple(chosen_names)
    if len(set(basis_names)) != len(basis_names):
        raise InvariantError(f"duplicate quotient coordinate names {basis_names}")
    meta = tuple(metadata) + (("generator_count", count),)
    return QuotientSpace(ambient_t, reduced, basis_names, basis_vectors, meta)


def quotient_to_json(q: QuotientSpace) -> dict:
    def vec(v):
        return [[format_word(w), format_rational(c)] for w, c in sorted(v.items())]

    return {
        "ambient": None if q.ambient is None else [format_word(w) for w in q.ambient],
        "generators": [vec(g) for g in q.generators],
        "basis_names": list(q.basis_names),
        "basis_vectors": [vec(b) for b in q.basis_vectors],
        "metadata": [[k, v] for k, v in q.metadata],
    }


def quotient_from_json(data: dict) -> QuotientSpace:
    def vec(rows):
        return FormalVector({parse_word(w): parse_rational(c) for w, c in rows})

    ambient = data["ambient"]
    return QuotientSpace(
        None if ambient is None else tuple(parse_word(w) for w in ambient),
        tuple(vec(g) for g in data["generators"]),
        tuple(data["basis_names"]),
        tuple(vec(b) for b in data["basis_vectors"]),
        tuple((k, v) for k, v in data["metadata"]),
    )


# ---------------------------------------------------------------------------
# dense exact solvers


def solve_linear_system(matrix: Sequence[Sequence], rhs: Sequence):
    """Particular solution of ``matrix @ x = rhs`` with free variables at zero.

    Returns ``None`` when the system is inconsistent.
    """
    rows = [[as_fraction(x) for x in row] + [as_fraction(b)] for row, b in zip(matrix, rhs)]
    ncols = len(matrix[0]) if matrix else 0
    pivot_cols = []
    r = 0
    for c in range(ncols):
        pr = next((k for k in range(r, len(rows)) if rows[k][c]), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for k in range(len(rows)):
            if k != r and rows[k][c]:
                f = rows[k][c]
                rows[k] = [x - f * y for x, y in zip(rows[k], rows[r])]
        pivot_cols.append(c)
        r += 1
    if any(row[-1] for row in rows[r:]):
        return None
    x = [Fraction(0)] * ncols
    for k, c in enumerate(pivot_cols):
        x[c] = rows[k][-1]
    return x


@dataclass(frozen=True)
class MembershipResult:
    feasible: bool
    weights: tuple | None = None  # convex weights when feasible
    separator: tuple | None = None  # (y, t): y.s + t <= 0 on S, y.p + t > 0


def _check_points(p, points):
    dim = len(p)
    for k, s in enumerate(points):
        if len(s) != dim:
            raise InputError(f"point {k} has dimension {len(s)}, expected {dim}")


def convex_membership(p: Sequence, points: Sequence[Sequence]) -> MembershipResult:
    """Decide whether ``p`` is a convex combination of ``points``.

    Phase-one simplex over the rationals with Bland's smallest-index rule.
    Feasible answers carry weights, infeasible ones a separating hyperplane;
    both are verified by substitution before returning.
    """
    p = [as_fraction(x) for x in p]
    points = [[as_fraction(x) for x in s] for s in points]
    _check_points(p, points)
    dim, n = len(p), len(points)
    A = [[s[i] for s in points] for i in range(dim)] + [[Fraction(1)] * n]
    b = p + [Fraction(1)]
    m = dim + 1
    signs = []
    for i in range(m):
        sgn = -1 if b[i] < 0 else 1
        signs.append(sgn)
        if sgn < 0:
            A[i] = [-x for x in A[i]]
            b[i] = -b[i]
    width = n + m
    tab = [A[i] + [Fraction(int(i == k)) for k in range(m)] + [b[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    cost = [Fraction(0)] * n + [Fraction(1)] * m
    while True:
        reduced = []
        for j in range(width):
            rc = cost[j] - sum(cost[basis[i]] * tab[i][j] for i in range(m))
            reduced.append(rc)
        entering = next((j for j in range(width) if reduced[j] < 0), None)
        if entering is None:
            break
        best = None
        for i in range(m):
            a = tab[i][entering]
            if a > 0:
                ratio = tab[i][-1] / a
                cand = (ratio, basis[i], i)
                if best is None or cand[:2] < best[:2]:
                    best = cand
        if best is None:
            raise InvariantError("phase-one problem unbounded")
        _, _, r = best
        inv = 1 / tab[r][entering]
        tab[r] = [x * inv for x in tab[r]]
        for i in range(m):
            if i != r and tab[i][entering]:
                f = tab[i][entering]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[r])]
        basis[r] = entering
    objective = sum(tab[i][-1] for i in range(m) if basis[i] >= n)
    if objective == 0:
        weights = [Fraction(0)] * n
        for i in range(m):
            if basis[i] < n:
                weights[basis[i]] = tab[i][-1]
        if sum(weights) != 1 or any(
            sum(weights[j] * points[j][d] for j in range(n)) != p[d] for d in range(dim)
        ):
            raise InvariantError("convex weights failed verification")
        return MembershipResult(True, weights=tuple(weights))
    y = [1 - reduced[n + i] for i in range(m)]
    y = [y[i] * signs[i] for i in range(m)]
    coords, t = y[:dim], y[dim]

    def value(s):
        return sum(c * x for c, x in zip(coords, s)) + t

    if any(value(s) > 0 for s in points) or not value(p) > 0:
        raise InvariantError("separating hyperplane failed verification")
    return MembershipResult(False, separator=(tuple(coords), t))


def psd_probe(matrix: Sequence[Sequence]) -> bool:
    """Exact positive-semidefiniteness test by symmetric pivoted elimination."""
    M = [[as_fraction(x) for x in row] for row in matrix]
    n = len(M)
    for row in M:
        if len(row) != n:
            raise InputError("matrix must be square")
    for i in range(n):
        for j in range(i):
            if M[i][j] != M[j][i]:
                raise InputError(f"matrix is not symmetric at ({i},{j})")
    active = list(range(n))
    while active:
        diag = [M[k][k] for k in active]
        if any(d < 0 for d in diag):
            return False
        k = next((k for k in active if M[k][k] > 0), None)
        if k is None:
            # zero diagonal forces zero rows in a PSD matrix
            return all(M[i][j] == 0 for i in active for j in active)
        piv = M[k][k]
        rest = [i for i in active if i != k]
        for i in rest:
            for j in rest:
                M[i][j] -= M[i][k] * M[k][j] / piv
        active = rest
    return True
