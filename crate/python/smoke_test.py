"""Smoke test for the `iasi` extension module.

Build and install first, e.g.

    pip install --no-build-isolation -e crates/python

then run `python python/smoke_test.py`.
"""

import iasi


def check_sets():
    a = iasi.IntSet([1, 2, 4])
    b = iasi.IntSet.parse("{0,3}")
    s = a + b
    assert s.elements() == [1, 2, 4, 5, 7]
    assert len(s) == 5 and 7 in s
    assert str(b) == "{0,3}"
    assert iasi.sumset([1, 2], [10, 20]) == [11, 12, 21, 22]

    table = iasi.compatibility([0, 1, 2], [0, 1])
    assert table["index"] == 4
    assert table["neglecting_number"] == 2
    assert table["max_class_size"] == 2
    assert table["classes"][1] == [(0, 1), (1, 0)]

    try:
        iasi.IntSet([])
    except ValueError:
        pass
    else:
        raise AssertionError("empty sets must be rejected")


def check_verify():
    g = iasi.Graph.parse("a b\nb c\nc a\n")
    assert g.vertices() == ["a", "b", "c"]
    f = iasi.canonical_iasi(g)
    assert f == {"a": [1], "b": [2], "c": [4]}
    report = iasi.verify(g, f)
    assert report["is_iasi"] and report["graph_class"] == "both"

    bad = iasi.verify(g, {"a": [1], "b": [2], "c": iasi.IntSet([1])})
    assert not bad["is_iasi"]
    assert bad["vertex_injective"]["witness"] == ["a", "c"]


def check_transforms():
    p3 = iasi.Graph([("a", "b"), ("b", "c")])
    f = iasi.canonical_iasi(p3)
    line = iasi.line_graph(p3, f)
    assert line["graph"].vertices() == ["e:a-b", "e:b-c"]
    assert line["labels"] == {"e:a-b": [3], "e:b-c": [6]}
    assert line["provenance"]["e:a-b"] == {"kind": "edge", "edge": ["a", "b"]}

    total = iasi.total_graph(p3)
    assert total["graph"].vertex_count() == 5 and total["report"] is None

    merged = iasi.contract_edge(p3, "a", "b", f)
    assert merged["labels"]["m:a+b"] == [3]

    reduced = iasi.topological_reduction(p3, "b", f)
    assert reduced["graph"].edges() == [("a", "c")]

    dot = iasi.emit_dot(p3, f)
    assert dot.startswith("graph G {")


def check_search():
    k3 = iasi.Graph.parse("a b\nb c\na c")
    assert iasi.ground_set_lower_bound(3) == 2
    assert iasi.ground_set_lower_bound(5, uniform=2) == 4
    found = iasi.find_labeling(k3, ground_max=1)
    assert found["status"] == "found"
    assert iasi.verify(k3, found["labeling"])["is_iasi"]
    assert iasi.find_labeling(k3, ground_max=0)["status"] == "exhausted"


def check_suite():
    report = iasi.run_suite(max_n=4, seed=3, theorems=["T1", "T12"])
    ids = [t["id"] for t in report["theorems"]]
    assert ids == ["T1", "T12"]
    assert all(t["verdict"] == "holds-on-corpus" for t in report["theorems"])
    assert report == iasi.run_suite(max_n=4, seed=3, theorems=["T1", "T12"])


if __name__ == "__main__":
    for check in (check_sets, check_verify, check_transforms, check_search, check_suite):
        check()
        print(f"ok {check.__name__}")
