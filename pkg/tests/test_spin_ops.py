import numpy as np
import pytest
from hypothesis import given, strategies as st

from dissipative_spins.spin_ops import (
    AXES, DenseOperator, basis_bits, basis_index, collective, dump_operator, identity,
    load_operator, pauli_site,
)

sites = st.integers(1, 4).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n)))


def test_single_site_examples():
    assert np.array_equal(pauli_site("z", 1, 1).entries, np.diag([1, -1]))
    plus = pauli_site("plus", 1, 1).entries
    assert plus[1, 0] == 1 and np.count_nonzero(plus) == 1
    # explicit 4x4 Kronecker product: site 2 is the least significant bit
    assert np.array_equal(pauli_site("z", 2, 2).entries, np.diag([1, -1, 1, -1]))


def test_collective_examples():
    assert np.array_equal(collective("z", 1).entries, np.diag([1, -1]))
    assert np.array_equal(collective("z", 2).entries, np.diag([2, 0, 0, -2]))
    ket = np.zeros(4)
    ket[basis_index((0, 0))] = 1
    out = collective("plus", 2).entries @ ket
    expected = np.zeros(4)
    expected[basis_index((1, 0))] = expected[basis_index((0, 1))] = 1
    assert np.array_equal(out, expected)


def test_sigma_y_convention():
    x, y, z = (pauli_site(a, 1, 1).entries for a in "xyz")
    assert np.allclose(x @ y, 1j * z, atol=0)
    # -i|0><1| + i|1><0|
    assert y[0, 1] == -1j and y[1, 0] == 1j


@pytest.mark.parametrize("bad", [(1, 0), (0, 0), (2, 3)])
def test_errors(bad):
    n, k = bad
    with pytest.raises(ValueError):
        pauli_site("x", k, n)


def test_unknown_axis_and_zero_sites():
    with pytest.raises(ValueError):
        pauli_site("w", 1, 1)
    with pytest.raises(ValueError):
        collective("z", 0)


@given(sites, st.sampled_from(AXES))
def test_entries_are_units(ns, axis):
    n, k = ns
    vals = set(np.unique(pauli_site(axis, k, n).entries).tolist())
    assert vals <= {0, 1, -1, 1j, -1j}


@given(sites)
def test_site_algebra(ns):
    n, k = ns
    p, m = pauli_site("plus", k, n).entries, pauli_site("minus", k, n).entries
    assert np.array_equal(p @ m + m @ p, np.eye(2 ** n))
    x, y, z = (pauli_site(a, k, n).entries for a in "xyz")
    assert np.max(np.abs(x @ y - y @ x - 2j * z)) < 1e-14


@given(st.integers(2, 4), st.data())
def test_different_sites_commute(n, data):
    k, j = data.draw(st.lists(st.integers(1, n), min_size=2, max_size=2, unique=True))
    a = pauli_site(data.draw(st.sampled_from(AXES)), k, n).entries
    b = pauli_site(data.draw(st.sampled_from(AXES)), j, n).entries
    assert np.array_equal(a @ b, b @ a)


@given(st.integers(1, 4), st.sampled_from(AXES))
def test_collective_is_sum(n, axis):
    total = sum(pauli_site(axis, k, n).entries for k in range(1, n + 1))
    assert np.array_equal(collective(axis, n).entries, total)


@given(st.integers(1, 5), st.data())
def test_basis_bits_roundtrip(n, data):
    idx = data.draw(st.integers(0, 2 ** n - 1))
    assert basis_index(basis_bits(idx, n)) == idx


def test_dense_operator_rules():
    a = DenseOperator(np.eye(2))
    with pytest.raises(ValueError):
        DenseOperator(np.ones((2, 3)))
    with pytest.raises(ValueError):
        a + DenseOperator(np.eye(2), basis_tag="T=1")
    with pytest.raises(ValueError):
        a + identity(4)
    with pytest.raises(ValueError):
        a.entries[0, 0] = 5  # immutable


def test_dump_roundtrip(rng):
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    op = DenseOperator(m)
    text = dump_operator(op)
    assert len(text.splitlines()) == 4
    assert np.array_equal(load_operator(text).entries, m)
