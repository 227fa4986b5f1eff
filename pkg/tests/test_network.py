from __future__ import annotations

import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netmon.network import (
    DynamicNetwork,
    EdgeKind,
    EdgeListError,
    read_edge_list,
    validate,
    write_edge_list,
)
from .conftest import random_network


def _well_formed(n=3, T=3, directed=False) -> DynamicNetwork:
    w = np.zeros((T, n, n), dtype=np.int64)
    w[0, 0, 1] = 1
    w[0, 1, 0] = 1
    return DynamicNetwork(weights=w, directed=directed, edge_kind=EdgeKind.BINARY, t1=1)


def test_validate_well_formed_is_empty():
    assert validate(_well_formed()) == []


def test_validate_flags_self_loop():
    net = _well_formed(directed=True)
    net.weights[1, 2, 2] = 1
    findings = validate(net)
    assert len(findings) == 1
    assert "self-loop" in findings[0] and "t=2" in findings[0] and "node 2" in findings[0]


def test_validate_flags_asymmetry():
    net = _well_formed(directed=False)
    net.weights[0, 0, 1] = 1
    net.weights[0, 1, 0] = 0
    findings = validate(net)
    assert len(findings) == 1
    assert "asymmetric" in findings[0]


def test_validate_flags_non_binary_and_negative():
    net = _well_formed(directed=True)
    net.weights[2, 0, 1] = 3
    assert any("non-binary" in f for f in validate(net))
    net.weights[2, 0, 1] = -1
    assert any("negative" in f for f in validate(net))


def test_validate_flags_bad_t1():
    net = _well_formed()
    bad = DynamicNetwork(net.weights, net.directed, net.edge_kind, t1=net.n_times)
    assert any("t1" in f for f in validate(bad))


def test_round_trip_single_edge():
    net = _well_formed(directed=False)
    buf = io.StringIO()
    write_edge_list(net, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "#n=3,T=3,t1=1,directed=0,kind=binary"
    assert lines[1:] == ["1,1,2,1"]
    assert read_edge_list(io.StringIO(buf.getvalue())) == net


def test_round_trip_empty_network():
    w = np.zeros((2, 4, 4), dtype=np.int64)
    net = DynamicNetwork(w, directed=True, edge_kind=EdgeKind.COUNT, t1=1)
    buf = io.StringIO()
    write_edge_list(net, buf)
    assert read_edge_list(io.StringIO(buf.getvalue())) == net


@pytest.mark.parametrize(
    "line,msg",
    [
        ("1,5,1,1", "outside 1..4"),
        ("9,1,2,1", "t=9 outside"),
        ("1,1,2,-2", "negative"),
        ("1,1,2", "4 fields"),
        ("1,1,2,x", "non-integer"),
        ("1,2,2,1", "self-loop"),
    ],
)
def test_read_rejects_bad_records(line, msg):
    text = f"#n=4,T=3,t1=1,directed=1,kind=count\n{line}\n"
    with pytest.raises(EdgeListError, match=msg):
        read_edge_list(io.StringIO(text))


def test_read_rejects_bad_header():
    with pytest.raises(EdgeListError, match="header"):
        read_edge_list(io.StringIO("n=4,T=3\n"))


def test_read_rejects_unsorted_times():
    text = "#n=4,T=3,t1=1,directed=1,kind=binary\n2,1,2,1\n1,1,3,1\n"
    with pytest.raises(EdgeListError, match="sorted"):
        read_edge_list(io.StringIO(text))


def test_read_rejects_undirected_lower_triangle():
    text = "#n=4,T=3,t1=1,directed=0,kind=binary\n1,2,1,1\n"
    with pytest.raises(EdgeListError, match="i<j"):
        read_edge_list(io.StringIO(text))


@settings(max_examples=200, deadline=None)
@given(
    seed=st.integers(0, 2**32 - 1),
    n=st.integers(2, 7),
    T=st.integers(2, 6),
    directed=st.booleans(),
    kind=st.sampled_from(list(EdgeKind)),
)
def test_round_trip_is_identity(seed, n, T, directed, kind):
    net = random_network(np.random.default_rng(seed), n, T, directed, kind)
    buf = io.StringIO()
    write_edge_list(net, buf)
    assert read_edge_list(io.StringIO(buf.getvalue())) == net


def test_file_round_trip(tmp_path, rng):
    net = random_network(rng, 5, 4, True, EdgeKind.COUNT)
    path = tmp_path / "net.csv"
    write_edge_list(net, path)
    assert read_edge_list(path) == net
