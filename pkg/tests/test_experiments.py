from fractions import Fraction

import pytest
import sympy

from flagvec import decorated, experiments, linkspace, shelling
from flagvec.algebra import convex_membership, load_vector
from flagvec.errors import InputError, InvariantError
from flagvec.experiments import (
    ObjectClass,
    collision_scan,
    cosphere_probe,
    hull_vertex_report,
    independence_report,
    invariance_suite,
)
from flagvec.graphs import IGraph, graph_classes


def certificates(report):
    return dict(report.certificates)


def test_one_graph_independence():
    rep = independence_report(ObjectClass("igraph", 1, 4), "flag")
    assert rep.get("count") == 5 and rep.get("rank") == 5
    assert rep.get("independent") is True
    cols = certificates(rep)["independence-columns"].words()
    assert len(cols) == 5
    vecs = [shelling.flag_vector(g) for g in graph_classes(1, 4)]
    minor = sympy.Matrix([[int(v[w]) for w in cols] for v in vecs])
    assert minor.det() != 0


def test_duplicate_gives_kernel_certificate():
    g = graph_classes(2, 3)
    objs = g + [g[1]]
    rep = independence_report(ObjectClass("IGraph", mode="from-files", objects=objs), "shelling")
    assert rep.get("rank") == len(g)
    cert = certificates(rep)[f"kernel-obj{len(g)}"]
    coeffs = {w[0][0]: c for w, c in cert.items()}
    assert coeffs == {"obj1": -1, f"obj{len(g)}": 1}


def test_truncation_notice():
    rep = independence_report(ObjectClass("igraph", 3, 7))
    assert rep.get("truncated").startswith("yes")


def test_collision_scan_suppresses_relabelings():
    g = IGraph(2, 4, frozenset({(0, 1), (1, 2)}))
    h = g.relabel((3, 2, 1, 0))
    rep = collision_scan(ObjectClass("IGraph", mode="from-files", objects=[g, h]))
    assert rep.get("collisions") == 0
    assert rep.get("equivalent_pairs_suppressed") == 1
    assert rep.get("equivalent").startswith("obj0 obj1 canonical igraph")


@pytest.mark.parametrize("r", range(1, 6))
def test_one_graphs_have_no_collisions(r):
    rep = collision_scan(ObjectClass("igraph", 1, r))
    assert rep.get("collisions") == 0 and rep.get("distinct_vectors") == r + 1


def test_collision_reported_for_inequivalent_pair(monkeypatch):
    # force a shared vector to check the reporting path
    monkeypatch.setattr(experiments, "object_vector", lambda obj, vector: shelling.flag_vector(IGraph(1, 2)))
    a, b = IGraph(1, 2), IGraph(1, 2, frozenset({(0,)}))
    rep = collision_scan(ObjectClass("IGraph", mode="from-files", objects=[a, b]))
    assert rep.get_all("collision") == ["obj0 obj1"]
    assert "shared-vector-obj0-obj1" in certificates(rep)


def test_hull_of_one_graph_classes():
    pts = [(f"g{k}", shelling.flag_vector(g)) for k, g in enumerate(graph_classes(1, 4))]
    rep = hull_vertex_report(pts)
    assert rep.get("vertices") == 5


def test_hull_centroid_and_duplicates():
    pts = [("p", [0, 0]), ("q", [1, 0]), ("s", [0, 1]), ("c", [Fraction(1, 3), Fraction(1, 3)])]
    rep = hull_vertex_report(pts)
    assert rep.get("point c") == "non-vertex"
    w = certificates(rep)["weights-c"]
    assert sorted(w.as_dict().values()) == [Fraction(1, 3)] * 3
    rep = hull_vertex_report(pts + [("q2", [1, 0])])
    assert rep.get("point q") == rep.get("point q2") == "duplicate"
    assert rep.get("duplicates") == 2


def test_hull_certificates_replay():
    pts = [("p", [0, 0]), ("q", [2, 0]), ("s", [0, 2]), ("t", [1, 1])]
    rep = hull_vertex_report(pts)
    certs = certificates(rep)
    coords = {label: [certs[f"input-{label}"][((f"x{d}",),)] for d in range(2)] for label, _ in pts}
    for label, _ in pts:
        others = [coords[o] for o, _ in pts if o != label]
        res = convex_membership(coords[label], others)
        assert (rep.get(f"point {label}") == "vertex") == (not res.feasible)


def test_hull_input_errors():
    with pytest.raises(InputError):
        hull_vertex_report([("p", [0])])
    with pytest.raises(InputError):
        hull_vertex_report([("p", [0]), ("q", [0, 1])])


def test_cosphere_square():
    rep = cosphere_probe([("a", [0, 0]), ("b", [1, 0]), ("c", [0, 1]), ("d", [1, 1])])
    assert rep.get("stage1_cospherical") is True
    assert rep.get("stage1_center") == [Fraction(1, 2), Fraction(1, 2)]


def test_cosphere_collinear():
    rep = cosphere_probe([("a", [0, 0]), ("b", [1, 1]), ("c", [2, 2])])
    assert rep.get("stage1_cospherical") is False
    assert "refut" not in rep.render()
    assert rep.get("stage2_result").startswith(("probe inconclusive", "psd"))


def test_cosphere_on_flag_vectors_runs():
    pts = [(f"g{k}", shelling.flag_vector(g)) for k, g in enumerate(graph_classes(1, 3))]
    rep = cosphere_probe(pts)
    assert rep.get("stage2_method").startswith("heuristic")


def test_invariance_suite_passes():
    rep = invariance_suite(ObjectClass("igraph", 2, 4), trials=20, seed=3)
    assert rep.get("result") == "pass"
    assert rep.get("checks_method") == 20


def test_invariance_zero_trials():
    rep = invariance_suite(ObjectClass("igraph", 2, 5), trials=0, seed=1)
    assert rep.get("result") == "pass" and rep.get("checks_relabeling") == 0


def test_invariance_catches_sign_bug(monkeypatch):
    linkspace.configure()
    monkeypatch.setattr(decorated, "removal_sign", lambda position: 1)
    with pytest.raises(InvariantError) as info:
        invariance_suite(ObjectClass("oriented", 2, 4), trials=30, seed=1)
    assert info.value.witness.startswith("origraph")


def test_report_rendering_is_deterministic():
    a = independence_report(ObjectClass("igraph", 2, 3), "shelling").render()
    linkspace.configure()
    b = independence_report(ObjectClass("igraph", 2, 3), "shelling").render()
    assert a == b
    assert a.startswith("flagvec-report v1\n")


def test_certificate_blocks_parse():
    rep = hull_vertex_report([("p", [0, 0]), ("q", [1, 0]), ("c", [Fraction(1, 2), 0])])
    text = rep.render()
    block = text.split("begin certificate weights-c\n")[1].split("end certificate")[0]
    assert load_vector(block) == certificates(rep)["weights-c"]


def test_relation_and_group_classes():
    assert len(experiments.enumerate_class("group", 0, 4)) == 2
    assert len(experiments.enumerate_class("relation", 1, 2)) == 3
