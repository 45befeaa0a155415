import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from weylkit.modspace import (
    INF,
    ExponentError,
    SplitSpec,
    beta_profile,
    conjugate_exponent,
    embedding_bound,
    in_diagonal_class,
    in_dominating_class,
    kernel_sup,
    lp_norm,
    mixed_norm,
    monotonicity_constant,
    nesting_constant,
    parse_exponent,
    recip,
    reproducing_kernel,
    reproducing_residual,
    sjostrand_norm,
    sym_mod_norm,
    symbol_table,
    vec_mod_norm,
)
from weylkit.phase_space import FinitePhaseSpace, SymbolGrid
from weylkit.weyl_core import Window, WeylSystem, random_state

EXPS = [1, 2, INF]


@pytest.fixture(scope="module")
def setup7():
    ws = WeylSystem(7)
    return ws, Window.gaussian(ws.space)


def test_exponent_parsing():
    assert parse_exponent("inf") == INF
    assert parse_exponent("3/2") == 1.5
    assert recip(INF) == 0
    assert conjugate_exponent(1) == INF and conjugate_exponent(2) == 2
    for bad in (0.5, "abc", float("nan"), 0):
        with pytest.raises(ExponentError):
            parse_exponent(bad)


def test_mixed_norm_example():
    assert mixed_norm(np.array([[3.0, 4.0], [0.0, 0.0]]), None, 2, 1) == pytest.approx(5.0)
    assert mixed_norm(np.array([[3.0, 4.0], [0.0, 0.0]]), None, INF, INF) == pytest.approx(4.0)


def test_lp_norm_weights():
    v = np.array([1.0, -2.0, 2.0])
    assert lp_norm(v, 2, 0.25) == pytest.approx(1.5)
    assert lp_norm(v, INF, 0.25) == 2.0
    assert lp_norm(v, 1, 1.0) == 5.0


def test_split_validation():
    sp = FinitePhaseSpace(5, 2)
    s = SplitSpec(sp)
    assert s.axes1 == (0, 1) and s.axes2 == (2, 3)
    assert math.isclose(s.w1 * s.w2, sp.w)
    with pytest.raises(ValueError):
        SplitSpec(sp, axes1=(0, 1), axes2=(1, 2))
    with pytest.raises(ValueError):
        SplitSpec(sp, w1=0.5, w2=0.5)


def test_vector_norm_p2_is_l2(setup7, rng):
    ws, phi = setup7
    f = random_state(ws.space, rng)
    assert vec_mod_norm(f, phi, 2, 2, system=ws) == pytest.approx(np.linalg.norm(f), rel=1e-12)


def test_symbol_norm_22_is_weighted_l2(setup7, rng):
    ws, phi = setup7
    a = SymbolGrid.random(ws.space, rng)
    expect = np.sqrt(ws.w) * np.linalg.norm(a.values)
    assert sym_mod_norm(a, phi, 2, 2, ws) == pytest.approx(expect, rel=1e-12)


def test_wigner_window_table(setup7):
    ws, phi = setup7
    W = ws.wigner(phi.phi, phi.phi)
    G = symbol_table(W, phi, ws)
    assert abs(G.values[0, 0] - 1) < 1e-12
    R = reproducing_kernel(phi, ws)
    assert np.allclose(np.diag(R), 1.0)


def test_profiles_give_norms(setup7, rng):
    ws, phi = setup7
    a = SymbolGrid.random(ws.space, rng)
    G = symbol_table(a, phi, ws)
    for p in EXPS:
        b = beta_profile(G, phi, p)
        for q in EXPS:
            assert sym_mod_norm(G, phi, p, q) == pytest.approx(float(lp_norm(b, q, ws.w)), rel=1e-12)
    assert sjostrand_norm(a, phi, ws) == pytest.approx(sym_mod_norm(a, phi, INF, 1, ws))


def test_dominating_and_diagonal_classes(setup7, rng):
    ws, phi = setup7
    a = SymbolGrid.random(ws.space, rng)
    G = symbol_table(a, phi, ws)
    beta = beta_profile(G, phi, INF)
    assert in_dominating_class(G, beta, INF, atol=1e-12)
    assert not in_dominating_class(G, beta * (1 - 1e-3), INF)
    C = ws.matrix_coeff_table(a, phi)
    t = ws.t
    assert in_diagonal_class(C, beta[t.phase_neg], t, atol=1e-12)
    assert not in_diagonal_class(C, beta[t.phase_neg] * (1 - 1e-3), t)


def test_unit_symbol_profile_is_kernel(setup7):
    ws, phi = setup7
    beta = beta_profile(ws.unit(), phi, INF, ws)
    R = reproducing_kernel(phi, ws)
    assert np.allclose(beta, np.abs(R[0]), atol=1e-12)


def test_plane_wave_profile_is_shifted_ambiguity(setup7):
    ws, phi = setup7
    sp = ws.space
    X0 = sp.point(2, 5)
    beta = beta_profile(ws.plane_wave(X0), phi, INF, ws)
    A = np.abs(ws.ambiguity(phi.phi, phi.phi))
    assert np.allclose(beta, A[ws.t.phase_sub[:, X0.index]], atol=1e-12)


@pytest.mark.parametrize("N,d", [(5, 1), (7, 1), (3, 2)])
def test_reproducing_identity(N, d, rng):
    ws = WeylSystem(N, d)
    phi = Window.gaussian(ws.space)
    f = random_state(ws.space, rng)
    assert reproducing_residual(f, phi, ws) < 1e-12


@given(st.sampled_from(EXPS), st.sampled_from(EXPS), st.integers(0, 2**31))
def test_embedding_bound_property(p, q, seed):
    ws = WeylSystem(5)
    phi = Window.gaussian(ws.space)
    rng = np.random.default_rng(seed)
    f = random_state(ws.space, rng)
    assert embedding_bound(f, phi, p, q, system=ws).ok(1e-10)


def test_nesting_and_monotonicity_constants(setup7, rng):
    ws, phi = setup7
    split = SplitSpec(ws.space)
    R = reproducing_kernel(phi, ws)
    for p1, q1 in [(1, 1), (1, 2), (2, 2)]:
        for p2, q2 in [(2, 2), (INF, INF)]:
            if p1 > p2 or q1 > q2:
                continue
            C = monotonicity_constant(p1, q1, p2, q2, split, R)
            assert C <= nesting_constant(p1, q1, p2, q2, split) + 1e-15
            for _ in range(5):
                f = random_state(ws.space, rng)
                A = ws.ambiguity(f, phi)
                assert mixed_norm(A, split, p2, q2) <= C * mixed_norm(A, split, p1, q1) * (1 + 1e-10)
    with pytest.raises(ExponentError):
        nesting_constant(2, 2, 1, 1, split)
    assert kernel_sup(R, split, INF, INF) == pytest.approx(1.0)
