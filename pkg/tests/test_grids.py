import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mlski import grids
from mlski.errors import CapacityError, DomainError, UnsupportedDimensionError

SGNODE = {
    2: [9, 21, 49, 113, 257, 577, 1281, 2817, 6145, 13313, 28673, 61441],
    3: [27, 81, 225, 593, 1505, 3713, 8961, 21249, 49665, 114689],
    4: [81, 297, 945, 2769, 7681, 20481, 52993, 133889, 331777],
}


def exhaustive_indices(total, d):
    return sorted((l for l in itertools.product(range(1, total + 1), repeat=d) if sum(l) == total),
                  reverse=True)


def radical_inverse(i, base):
    out, f = 0.0, 1.0 / base
    while i:
        out += (i % base) * f
        i //= base
        f /= base
    return out


def test_tensor_grid_small():
    g = grids.tensor_grid((1, 1))
    assert g.count == 9
    assert g.points.tolist() == [[a, b] for a in (0, 0.5, 1) for b in (0, 0.5, 1)]


def test_tensor_grid_counts():
    assert grids.tensor_grid((4, 1)).count == 51
    assert grids.tensor_grid((1, 1, 1)).count == 27


@pytest.mark.parametrize("l", [(4, 1), (2, 3), (1, 2, 3), (3,)])
def test_tensor_grid_enumeration(l):
    g = grids.tensor_grid(l)
    expected = [tuple(i * 2.0 ** -lj for i, lj in zip(idx, l))
                for idx in itertools.product(*[range(2 ** lj + 1) for lj in l])]
    assert [tuple(p) for p in g.points] == expected
    assert g.count == grids.grid_size(l) == np.prod([2 ** lj + 1 for lj in l])


def test_tensor_grid_rejects():
    with pytest.raises(DomainError):
        grids.tensor_grid((0, 2))
    with pytest.raises(CapacityError):
        grids.tensor_grid((70, 1))
    with pytest.raises(CapacityError):
        grids.tensor_grid((20, 20))


def test_combination_sets_fig3():
    layers = grids.combination_index_sets(4, 2)
    assert [(L.q, L.coefficient) for L in layers] == [(0, 1), (1, -1)]
    assert set(layers[0].indices) == {(4, 1), (3, 2), (2, 3), (1, 4)}
    assert set(layers[1].indices) == {(3, 1), (2, 2), (1, 3)}


def test_combination_sets_edge_cases():
    (layer,) = grids.combination_index_sets(3, 1)
    assert (layer.coefficient, layer.indices) == (1, ((3,),))
    layers = grids.combination_index_sets(1, 3)
    assert [(L.coefficient, L.indices) for L in layers] == [(1, ((1, 1, 1),)), (-2, ()), (1, ())]


@pytest.mark.parametrize("n", range(1, 6))
@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_combination_sets_match_enumeration(n, d):
    for layer in grids.combination_index_sets(n, d):
        assert sorted(layer.indices, reverse=True) == exhaustive_indices(n + d - 1 - layer.q, d)
    if d == 2:
        assert [L.coefficient for L in grids.combination_index_sets(n, d)] == [1, -1]


@pytest.mark.parametrize("n,d,count", [(1, 2, 9), (4, 2, 113), (4, 3, 593), (2, 4, 297)])
def test_sparse_grid_examples(n, d, count):
    assert grids.sparse_grid(n, d).count == count


@pytest.mark.parametrize("d", [2, 3, 4])
def test_sparse_grid_size_formula(d):
    assert [grids.sparse_grid_size(n, d) for n in range(1, len(SGNODE[d]) + 1)] == SGNODE[d]


@pytest.mark.parametrize("n,d", [(n, d) for d in (2, 3) for n in range(1, 6)] + [(1, 4), (2, 4), (3, 4)])
def test_sparse_grid_union_exact(n, d):
    sg = grids.sparse_grid(n, d)
    brute = set()
    for l in exhaustive_indices(n + d - 1, d):
        brute |= {tuple(p) for p in grids.tensor_grid(l).points}
    pts = [tuple(p) for p in sg.points]
    assert len(pts) == len(set(pts)) == len(brute)
    assert set(pts) == brute
    assert pts == sorted(pts)
    assert sg.count == grids.sparse_grid_size(n, d)


@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("n", range(1, 6))
def test_sparse_grid_nested(n, d):
    coarse = {tuple(p) for p in grids.sparse_grid(n, d).points}
    fine = {tuple(p) for p in grids.sparse_grid(n + 1, d).points}
    assert coarse < fine


def test_sparse_grid_rejects_level_zero():
    with pytest.raises(DomainError):
        grids.sparse_grid(0, 2)


@pytest.mark.parametrize("n,d,count", [(1, 2, 9), (3, 2, 81), (2, 3, 125), (0, 2, 4)])
def test_full_grid(n, d, count):
    assert grids.full_grid(n, d).count == count


def test_halton_examples():
    np.testing.assert_array_equal(grids.halton_points(3, 1)[:, 0], [0.5, 0.25, 0.75])
    np.testing.assert_allclose(grids.halton_points(2, 2), [[0.5, 1 / 3], [0.25, 2 / 3]], rtol=1e-15)


def test_halton_against_radical_inverse():
    pts = grids.halton_points(500, 4)
    expected = [[radical_inverse(i, b) for b in (2, 3, 5, 7)] for i in range(1, 501)]
    np.testing.assert_allclose(pts, expected, rtol=1e-14, atol=1e-15)


def test_halton_large_2d_distinct():
    pts = grids.halton_points(25_600, 2)
    assert pts.shape == (25_600, 2)
    assert np.all((pts >= 0) & (pts < 1))
    assert np.unique(pts, axis=0).shape[0] == 25_600


@given(m=st.integers(1, 300), extra=st.integers(0, 300), d=st.integers(1, 4))
def test_halton_prefix_stable(m, extra, d):
    a = grids.halton_points(m, d)
    b = grids.halton_points(m + extra, d)
    np.testing.assert_array_equal(a, b[:m])


def test_halton_dimension_limits():
    with pytest.raises(UnsupportedDimensionError):
        grids.halton_points(10, 5)
    with pytest.raises(DomainError):
        grids.halton_points(0, 2)


def test_parse_eval_spec():
    assert grids.parse_eval_spec("halton:25600") == 25600
    for bad in ("sobol:10", "halton:", "halton:0"):
        with pytest.raises(ValueError):
            grids.parse_eval_spec(bad)


def test_points_csv(tmp_path):
    path = tmp_path / "sg.csv"
    grids.write_points_csv(path, grids.sparse_grid(2, 2).points)
    lines = path.read_text().splitlines()
    assert lines[0] == "x1,x2"
    assert len(lines) == 22
    back = np.loadtxt(path, delimiter=",", skiprows=1)
    np.testing.assert_array_equal(back, grids.sparse_grid(2, 2).points)
