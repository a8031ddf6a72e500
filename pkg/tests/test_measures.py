from math import log2

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from srae.errors import DimensionError, MissingConcurrenceError, WindowError
from srae.measures import (
    ALPHA_C,
    ALPHA_C2,
    AlphaOrder,
    Cut,
    RenyiEntanglement,
    SquaredConcurrence,
    concurrence_pure,
    concurrence_wootters,
    concurrence_wootters_batch,
    e_alpha_2xd,
    e_alpha_lower_bound,
    e_alpha_pure,
    e_alpha_two_qubit,
    f_alpha,
    pair_squared_concurrences,
    qubit_qudit_squared_concurrence,
    renyi_entropy,
)
from srae.monogamy import random_density_matrix, random_pure_state
from srae.roof import RoofConfig
from srae.states import DensityMatrix, PureState, density_of, ghz, ghz_w_mixture, ou_antisymmetric, w_state

PHI_PLUS = PureState((2, 2), np.array([1, 0, 0, 1]) / np.sqrt(2))
GRID = np.linspace(0.0, 1.0, 1000)
ANY_ALPHA = [0.3, 0.83, 1.0, 2.0, 7.5]


def binary_entropy(p):
    p = np.asarray(p, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        h = -p * np.log2(p) - (1 - p) * np.log2(1 - p)
    return np.nan_to_num(h)


def werner(p):
    phi = density_of(PHI_PLUS).matrix
    return DensityMatrix((2, 2), p * phi + (1 - p) * np.eye(4) / 4)


# -- orders and cuts ----------------------------------------------------------


def test_alpha_flags():
    assert AlphaOrder(1 + 5e-7).is_eof_limit
    assert not AlphaOrder(1 + 2e-6).is_eof_limit
    assert AlphaOrder(ALPHA_C).in_two_qubit_window
    assert not AlphaOrder(0.82).in_two_qubit_window
    assert AlphaOrder(ALPHA_C2).in_concave_window
    assert not AlphaOrder(1.31).in_concave_window
    with pytest.raises(WindowError):
        AlphaOrder(0.0)


def test_cut_validation():
    with pytest.raises(DimensionError):
        Cut(frozenset({0}), frozenset())
    with pytest.raises(DimensionError):
        Cut(frozenset({0, 1}), frozenset({1}))
    with pytest.raises(DimensionError):
        Cut.split(0, 3).check((2, 2))
    assert str(Cut.split([0, 2], 4)) == "[0, 2]|[1, 3]"


# -- entropies ----------------------------------------------------------------


@pytest.mark.parametrize("alpha", ANY_ALPHA)
def test_renyi_examples(alpha):
    assert renyi_entropy(np.eye(2) / 2, alpha) == pytest.approx(1.0, abs=1e-12)
    assert renyi_entropy(density_of(PHI_PLUS), alpha) == pytest.approx(0.0, abs=1e-12)
    assert renyi_entropy(np.eye(3) / 3, alpha) == pytest.approx(log2(3), abs=1e-12)


def test_renyi_von_neumann_branch():
    w = np.diag([0.7, 0.2, 0.1])
    vn = -sum(p * log2(p) for p in (0.7, 0.2, 0.1))
    assert renyi_entropy(w, 1.0) == pytest.approx(vn, abs=1e-12)
    assert renyi_entropy(w, 1.0 + 1e-4) == pytest.approx(vn, abs=1e-4)


@pytest.mark.parametrize("alpha", [0.83, 1.0, 1.2, 2.0, 5.0])
def test_f_alpha_endpoints(alpha):
    assert f_alpha(0.0, alpha) == 0.0
    assert f_alpha(1.0, alpha) == 1.0
    assert f_alpha(1 + 5e-13, alpha) == 1.0
    assert f_alpha(-5e-13, alpha) == 0.0


def test_f_one_matches_binary_entropy():
    assert f_alpha(24 / 49, 1.0) == pytest.approx(0.5917, abs=5e-5)
    np.testing.assert_allclose(f_alpha(GRID, 1.0), binary_entropy((1 + np.sqrt(1 - GRID)) / 2), atol=1e-12)


def test_f_alpha_matches_two_level_renyi_spectrum():
    for a in (0.9, 1.5, 3.0):
        for x in (0.1, 0.5, 0.9):
            r = np.sqrt(1 - x)
            assert f_alpha(x, a) == pytest.approx(renyi_entropy(np.diag([(1 + r) / 2, (1 - r) / 2]), a), abs=1e-12)


def test_f_alpha_errors():
    with pytest.raises(WindowError, match="order outside analytic-formula window"):
        f_alpha(0.5, 0.8)
    with pytest.raises(ValueError):
        f_alpha(1.1, 1.0)


# -- shape properties on a 1000-point grid -------------------------


@pytest.mark.parametrize("alpha", [0.83, 1.0, 1.5, 2.0, 3.0])
def test_squared_f_strictly_increasing(alpha):
    assert np.all(np.diff(f_alpha(GRID, alpha) ** 2) > 0)


@pytest.mark.parametrize("alpha", [0.83, 1.0, 1.5, 2.0, 3.0])
def test_squared_f_convex(alpha):
    assert np.diff(f_alpha(GRID, alpha) ** 2, 2).min() >= -1e-9


@pytest.mark.parametrize("alpha", [0.83, 1.0, 1.3])
def test_f_concave(alpha):
    assert np.diff(f_alpha(GRID, alpha), 2).max() <= 1e-9


def test_f_not_concave_for_large_order():
    # outside the concave window the second differences turn positive near x = 1
    assert np.diff(f_alpha(GRID, 3.0), 2).max() > 1e-9


@pytest.mark.parametrize("delta", [1e-4, -1e-4])
def test_f_continuous_across_eof_switch(delta):
    assert np.max(np.abs(f_alpha(GRID, 1 + delta) - f_alpha(GRID, 1.0))) <= 1e-3


# -- concurrences -------------------------------------------------------------


def test_concurrence_pure_examples():
    assert concurrence_pure(PHI_PLUS, Cut.split(0, 2)) == pytest.approx(1.0)
    product = PureState((2, 2), [0, 1, 0, 0])
    assert concurrence_pure(product, 0) == 0.0
    assert concurrence_pure(w_state(7), Cut.split(0, 7)) ** 2 == pytest.approx(24 / 49, abs=1e-12)


def test_wootters_examples():
    assert concurrence_wootters(density_of(PHI_PLUS)) == pytest.approx(1.0, abs=1e-9)
    assert concurrence_wootters(np.eye(4) / 4) == 0.0
    assert concurrence_wootters(werner(0.5)) == pytest.approx(0.25, abs=1e-12)


@pytest.mark.parametrize("p", np.linspace(0, 1, 21))
def test_wootters_werner_closed_form(p):
    assert concurrence_wootters(werner(p)) == pytest.approx(max(0.0, (3 * p - 1) / 2), abs=1e-9)


def test_wootters_requires_two_qubits():
    with pytest.raises(DimensionError, match="two-qubit input required"):
        concurrence_wootters(np.eye(6) / 6)


def test_wootters_pure_consistency_1000_states():
    rng = np.random.default_rng(20240601)
    states = [random_pure_state((2, 2), rng) for _ in range(1000)]
    batch = np.stack([np.outer(s.amplitudes, s.amplitudes.conj()) for s in states])
    woot = concurrence_wootters_batch(batch)
    pure = np.array([concurrence_pure(s, 0) for s in states])
    assert np.max(np.abs(woot - pure)) <= 1e-9


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=50, deadline=None)
def test_wootters_batch_matches_scalar(seed):
    rng = np.random.default_rng(seed)
    rhos = [random_density_matrix((2, 2), rng, rank=int(rng.integers(1, 5))) for _ in range(4)]
    batch = concurrence_wootters_batch(np.stack([r.matrix for r in rhos]))
    np.testing.assert_allclose(batch, [concurrence_wootters(r) for r in rhos], atol=1e-12)
    assert np.all((batch >= 0) & (batch <= 1))


def test_pair_squared_concurrences_w():
    c2 = pair_squared_concurrences(w_state(7), 0)
    assert sorted(c2) == [1, 2, 3, 4, 5, 6]
    np.testing.assert_allclose(list(c2.values()), 4 / 49, atol=1e-12)


# -- Renyi-alpha entanglement -------------------------------------------------


@pytest.mark.parametrize("alpha", ANY_ALPHA)
def test_e_alpha_pure_examples(alpha):
    assert e_alpha_pure(PHI_PLUS, 0, alpha) == pytest.approx(1.0, abs=1e-12)
    assert e_alpha_pure(ghz(3), Cut.split(0, 3), alpha) == pytest.approx(1.0, abs=1e-12)
    assert e_alpha_pure(ou_antisymmetric(), Cut.split(0, 3), alpha) == pytest.approx(log2(3), abs=1e-12)


@pytest.mark.parametrize("d", [2, 3, 5])
@pytest.mark.parametrize("alpha", [0.83, 1.0, 1.2, 2.5])
def test_pure_entropy_matches_closed_form(d, alpha):
    rng = np.random.default_rng(d * 100 + int(alpha * 10))
    for _ in range(50):
        psi = random_pure_state((2, d), rng)
        direct = e_alpha_pure(psi, 0, alpha)
        closed = f_alpha(concurrence_pure(psi, 0) ** 2, alpha)
        assert direct == pytest.approx(closed, abs=1e-9)


def test_e_alpha_two_qubit_examples():
    zero = np.diag([1.0, 0.0])
    product = DensityMatrix((2, 2), np.kron(zero, np.eye(2) / 2))
    assert e_alpha_two_qubit(product, 1.0) == 0.0
    assert e_alpha_two_qubit(density_of(PHI_PLUS), 2.0) == pytest.approx(1.0, abs=1e-9)
    pair = DensityMatrix._trusted((2, 2), w_state(7).marginal([0, 1]))
    assert e_alpha_two_qubit(pair, 1.0) == pytest.approx(0.1462, abs=1e-4)
    assert e_alpha_two_qubit(pair, 1.0) == pytest.approx(float(f_alpha(4 / 49, 1.0)), abs=1e-12)
    with pytest.raises(WindowError):
        e_alpha_two_qubit(pair, 0.7)


def test_e_alpha_2xd_examples():
    assert e_alpha_2xd(density_of(ghz(3)), Cut.split(0, 3), 1.0) == pytest.approx(1.0, abs=1e-12)
    mixed = ghz_w_mixture(0.4)
    assert e_alpha_2xd(mixed, Cut.split(0, 3), 1.2, c_squared=0.7) == pytest.approx(float(f_alpha(0.7, 1.2)))
    assert e_alpha_2xd(mixed, Cut.split(0, 3), 1.0, c_squared=0.0) == 0.0


def test_e_alpha_2xd_errors():
    with pytest.raises(WindowError, match="window violated"):
        e_alpha_2xd(density_of(ghz(3)), 0, 1.5)
    # support of the BC marginal has dimension 4: no exact source
    rho = random_density_matrix((2, 2, 2), np.random.default_rng(0))
    with pytest.raises(MissingConcurrenceError, match="squared concurrence unavailable"):
        e_alpha_2xd(rho, 0, 1.0)


def test_qubit_qudit_sources():
    rho = ghz_w_mixture(0.4)
    assert qubit_qudit_squared_concurrence(rho, 0, c_squared=0.3) == (0.3, "supplied")
    assert qubit_qudit_squared_concurrence(density_of(w_state(3)), 0)[1] == "pure"
    mixed = random_density_matrix((2, 2, 2), np.random.default_rng(0))
    c2, src = qubit_qudit_squared_concurrence(mixed, 0, roof=RoofConfig(restarts=2, max_iterations=200))
    assert src == "roof-upper-bound" and 0 <= c2 <= 1


def test_logical_qubit_source_matches_wootters():
    # a two-qubit state padded into a qutrit stays exactly Wootters-computable
    rho2 = random_density_matrix((2, 2), np.random.default_rng(5), rank=2)
    iso = np.kron(np.eye(2), np.eye(3)[:, :2])
    rho = DensityMatrix((2, 3), iso @ rho2.matrix @ iso.T)
    c2, src = qubit_qudit_squared_concurrence(rho, 0)
    assert src == "logical-qubit"
    assert c2 == pytest.approx(concurrence_wootters(rho2) ** 2, abs=1e-10)


def test_lower_bound_window():
    assert e_alpha_lower_bound(0.0, 2.0) == 0.0
    assert e_alpha_lower_bound(1.0, 2.0) == 1.0
    r = np.sqrt(0.5)
    expected = -log2(((1 - r) / 2) ** 2 + ((1 + r) / 2) ** 2)
    assert e_alpha_lower_bound(0.5, 2.0) == pytest.approx(expected, abs=1e-12)
    with pytest.raises(WindowError, match="use exact closed form instead"):
        e_alpha_lower_bound(0.5, 1.2)


# -- batched pure-state measures ----------------------------------------------


@pytest.mark.parametrize("dims,side", [((2, 2), 0), ((2, 3, 2), [1]), ((3, 2, 2), [0, 2])])
def test_batched_measures_match_scalar(dims, side):
    rng = np.random.default_rng(11)
    n = len(dims)
    cut = Cut.split(side, n)
    psis = [random_pure_state(dims, rng) for _ in range(6)]
    amps = np.stack([p.amplitudes for p in psis])
    np.testing.assert_allclose(SquaredConcurrence().batch(amps, dims, cut), [concurrence_pure(p, cut) ** 2 for p in psis], atol=1e-12)
    for a in (1.0, 2.0):
        np.testing.assert_allclose(
            RenyiEntanglement(a).batch(amps, dims, cut), [e_alpha_pure(p, cut, a) for p in psis], atol=1e-10
        )
