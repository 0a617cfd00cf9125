from itertools import permutations, product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flagvec import shelling
from flagvec.errors import InputError, InvariantError, ResourceError
from flagvec.linkspace import LinkSpaceKey, link_space
from flagvec.relations import (
    GroupTable,
    NaryRelation,
    SimpleChange,
    admissible_base_relations,
    admissible_tuples,
    cyclic_group,
    group_classes,
    group_flag_vector,
    group_relation,
    is_admissible,
    is_legal_pair,
    klein_four_group,
    latin_squares_with_identity,
    legal_tuple_pairs,
    placeholder,
    relation_link,
)

P1, P2, P3 = placeholder(1), placeholder(2), placeholder(3)


def chain_oracle(n):
    """All-placeholder tuples reachable from real tuples by full link chains."""
    found = set()
    for t in product(range(n), repeat=n):
        for order in permutations(range(n)):
            rel = NaryRelation(n, 0, n, frozenset({t}))
            remaining = list(range(n))
            for v in order:
                rel = relation_link(rel, remaining.index(v), tuple(range(len(remaining))))
                remaining.remove(v)
            found |= rel.tuples
    return found


def test_sixteen_admissible_base_triples():
    base = admissible_base_relations(3)
    assert len(base) == 16
    assert set(base) == chain_oracle(3)
    assert len(list(product([P1, P2, P3], repeat=3))) == 27


def test_forbidden_example():
    assert not is_admissible((P1, P3, P3), 3)
    assert (P1, P3, P3) not in admissible_base_relations(3)


@pytest.mark.parametrize("n", [1, 2])
def test_chain_oracle_small_arity(n):
    assert set(admissible_base_relations(n)) == chain_oracle(n)


def test_removing_b_from_abb():
    rel = NaryRelation(3, 0, 2, frozenset({(0, 1, 1)}))
    link = rel.link(1)
    assert link.depth == 1 and link.vertex_count == 1
    assert link.tuples == frozenset({(0, P1, P1)})


def test_depth_two_retention_counts_occurrences():
    rel = NaryRelation(3, 0, 2, frozenset({(0, 0, 0)}))
    once = rel.link(0)
    assert once.tuples == frozenset({(P1, P1, P1)})
    twice = once.link(0)
    assert twice.depth == 2
    assert twice.tuples == frozenset({(P1, P1, P1)})


def test_link_drops_shallow_tuples():
    rel = NaryRelation(3, 0, 3, frozenset({(0, 1, 2)}))
    assert rel.link(0).tuples == frozenset({(P1, 0, 1)})
    assert rel.link(0).link(0).tuples == frozenset({(P1, P2, 0)})
    assert rel.link(0).link(1).tuples == frozenset({(P1, 0, P2)})
    # a tuple avoiding the removed vertex has too few placeholders
    other = NaryRelation(3, 0, 3, frozenset({(0, 1, 1)}))
    assert other.link(0).tuples == frozenset({(P1, 0, 0)})
    assert other.link(0).link(1).tuples == frozenset()


def test_too_few_placeholders_is_invariant_error():
    with pytest.raises(InvariantError):
        NaryRelation(3, 1, 2, frozenset({(0, 1, 1)}))


def test_admissible_tuples_respect_prefix_rule():
    for t in admissible_tuples(3, 2, 1):
        assert is_admissible(t, 2)


def test_simple_change_legality():
    a = SimpleChange("add", (0, P1, P1))
    b = SimpleChange("add", (1, P1, P1))
    c = SimpleChange("add", (P1, P1, P1))
    d = SimpleChange("remove", (P1, P1, P1))
    assert is_legal_pair(a, b)
    assert is_legal_pair(a, c)
    assert not is_legal_pair(c, d)  # both supports empty
    assert not is_legal_pair(a, SimpleChange("add", (0, 0, P1)))
    with pytest.raises(InputError):
        SimpleChange("remove", (0, P1, P1)).apply(NaryRelation(3, 1, 2))


def test_legal_pairs_enumeration():
    pairs = legal_tuple_pairs(admissible_tuples(3, 2, 2))
    assert pairs
    for t1, t2 in pairs:
        assert is_legal_pair(SimpleChange("add", t1), SimpleChange("add", t2))


def test_terminal_link_space_is_identity():
    q = link_space(LinkSpaceKey("relation", 3, 0, 3))
    assert q.meta("coverage") == "terminal"


def test_relation_link_space_metadata():
    q = link_space(LinkSpaceKey("relation", 3, 1, 2))
    assert q.meta("budget") == "b12w6"
    assert q.meta("coverage") in ("budget", "window", "exhausted")
    assert q.dim >= 1


@st.composite
def relations(draw, max_m=2):
    m = draw(st.integers(1, max_m))
    slots = list(product(range(m), repeat=3))
    chosen = draw(st.lists(st.sampled_from(slots), unique=True, max_size=4))
    return NaryRelation(3, 0, m, frozenset(chosen))


@settings(max_examples=25, deadline=None)
@given(relations(), st.randoms())
def test_relation_relabel_invariance(rel, rnd):
    perm = list(range(rel.vertex_count))
    rnd.shuffle(perm)
    assert shelling.flag_vector(rel.relabel(perm)) == shelling.flag_vector(rel)
    assert shelling.flag_vector(rel, "naive") == shelling.flag_vector(rel, "dp")


def test_group_table_validation():
    assert GroupTable(((0, 1), (1, 0))).order == 2
    with pytest.raises(InputError, match="row 0"):
        GroupTable(((0, 0), (1, 0)))
    with pytest.raises(InputError, match="column"):
        GroupTable(((0, 1), (0, 1)))
    with pytest.raises(InputError, match="identity"):
        GroupTable(((0, 2, 1), (2, 1, 0), (1, 0, 2)))


def test_non_associative_loop_rejected():
    # the order-5 Latin squares with identity include loops that are not groups
    bad = None
    for square in latin_squares_with_identity(5):
        try:
            GroupTable(square)
        except InputError as exc:
            bad = exc
            break
    assert bad is not None and "associativity" in str(bad)


@pytest.mark.parametrize("m,count", [(1, 1), (2, 1), (3, 1), (4, 2), (5, 1), (6, 2)])
def test_group_class_counts(m, count):
    assert len(group_classes(m)) == count


def test_group_class_guard():
    with pytest.raises(ResourceError):
        group_classes(7)


def test_group_relation_has_order_squared_triples():
    assert len(group_relation(cyclic_group(3)).tuples) == 9


def test_group_flag_vector_relabel_invariance():
    z3 = cyclic_group(3)
    assert group_flag_vector(z3.relabel((0, 2, 1))) == group_flag_vector(z3)


def test_order_four_groups_are_distinguished():
    assert group_flag_vector(cyclic_group(4)) != group_flag_vector(klein_four_group())
