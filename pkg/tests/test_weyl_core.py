import io

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from weylkit.phase_space import DimensionError, FinitePhaseSpace, Side, SymbolGrid
from weylkit.weyl_core import (
    Window,
    WeylSystem,
    discrete_gaussian,
    random_state,
    read_operator_csv,
    write_operator_csv,
)

from conftest import crandn

SYSTEMS = [(3, 1), (5, 1), (7, 1), (3, 2)]


@pytest.fixture(scope="module")
def ws5():
    return WeylSystem(5)


def test_translation_example():
    ws = WeylSystem(3)
    sp = ws.space
    out = ws.apply(sp.point(1, 0), np.array([1.0, 0, 0]))
    assert np.allclose(out, [0, 1, 0])


def test_modulation_example():
    ws = WeylSystem(5)
    sp = ws.space
    out = ws.apply(sp.point(0, 1), np.ones(5))
    expect = np.exp(2j * np.pi * np.arange(5) / 5)
    assert np.allclose(out, expect)


@pytest.mark.parametrize("N,d", SYSTEMS)
def test_pi_unitary(N, d):
    ws = WeylSystem(N, d)
    mats = ws.pi_matrices()
    eye = np.eye(ws.D)
    for M in mats:
        assert np.max(np.abs(M.conj().T @ M - eye)) < 1e-12
    assert np.allclose(mats[0], eye)


def test_cocycle_exhaustive_N5(ws5):
    sp = ws5.space
    pts = list(sp.points())
    for X in pts:
        assert abs(ws5.cocycle(X, X) - 1) < 1e-12
        for Y in pts:
            c = ws5.cocycle(X, Y)
            assert abs(c - ws5.cocycle_closed(X, Y)) < 1e-12


@given(st.sampled_from(SYSTEMS), st.integers(0, 10**6), st.integers(0, 10**6))
def test_inverse_is_negative_point(Nd, i, j):
    ws = WeylSystem(*Nd)
    X = ws.space.point_at(i % ws.P)
    assert np.allclose(ws.pi_matrix(X).conj().T, ws.pi_matrix(-X), atol=1e-12)


@pytest.mark.parametrize("N,d", SYSTEMS)
def test_quantize_matches_literal_sum(N, d, rng):
    ws = WeylSystem(N, d)
    a = SymbolGrid.random(ws.space, rng)
    assert np.max(np.abs(ws.quantize(a) - ws.quantize_sum(a))) < 1e-11


@pytest.mark.parametrize("N,d", SYSTEMS)
def test_dequantize_roundtrips(N, d, rng):
    ws = WeylSystem(N, d)
    a = SymbolGrid.random(ws.space, rng)
    assert ws.dequantize(ws.quantize(a)).allclose(a, 1e-11)
    T = crandn(rng, ws.D, ws.D)
    assert np.max(np.abs(ws.quantize(ws.dequantize(T)) - T)) < 1e-11
    assert ws.dequantize_trace(T).allclose(ws.dequantize(T), 1e-11)


@pytest.mark.parametrize("N,d", SYSTEMS)
def test_weyl_unitary_up_to_scale(N, d, rng):
    # Hilbert-Schmidt norm of Op(a) equals the weighted l2 norm of a
    ws = WeylSystem(N, d)
    a = SymbolGrid.random(ws.space, rng)
    hs = np.linalg.norm(ws.quantize(a))
    l2 = np.sqrt(ws.w) * np.linalg.norm(a.values)
    assert abs(hs - l2) < 1e-10 * l2


def test_unit_and_plane_wave(ws5):
    sp = ws5.space
    assert np.allclose(ws5.quantize(ws5.unit()), np.eye(5), atol=1e-13)
    for X0 in (sp.point(1, 2), sp.point(4, 0), sp.point(0, 3)):
        T = ws5.quantize(ws5.plane_wave(X0))
        assert np.max(np.abs(T - ws5.pi_matrix(X0))) < 1e-12
        assert ws5.dequantize(ws5.pi_matrix(X0)).allclose(ws5.plane_wave(X0), 1e-12)


def test_literal_plane_wave_quantizes_to_negative_point(ws5):
    # exp(2 pi i sigma(P, X0) / N) is the plane wave attached to -X0
    sp = ws5.space
    X0 = sp.point(2, 3)
    t = ws5.t
    literal = SymbolGrid(sp, t.roots[t.sigma[:, X0.index]], Side.ON_XI_STAR)
    T = ws5.quantize(literal)
    assert np.max(np.abs(T - ws5.pi_matrix(-X0))) < 1e-12
    assert np.max(np.abs(T - ws5.pi_matrix(X0))) > 0.5


def test_real_symbol_gives_hermitian(rng):
    ws = WeylSystem(7)
    a = SymbolGrid(ws.space, rng.standard_normal(ws.P), Side.ON_XI_STAR)
    T = ws.quantize(a)
    assert np.max(np.abs(T - T.conj().T)) < 1e-12


def test_adjoint_is_conjugate_symbol(rng):
    ws = WeylSystem(5)
    a = SymbolGrid.random(ws.space, rng)
    assert np.max(np.abs(ws.quantize(a).conj().T - ws.quantize(a.conj()))) < 1e-12


@pytest.mark.parametrize("N,d", [(5, 1), (7, 1), (3, 2)])
def test_moyal_agrees_and_associative(N, d, rng):
    ws = WeylSystem(N, d)
    a, b, c = (SymbolGrid.random(ws.space, rng) for _ in range(3))
    ab = ws.moyal(a, b)
    assert ab.allclose(ws.moyal_twisted(a, b), 1e-10)
    assert ws.moyal(ab, c).allclose(ws.moyal(a, ws.moyal(b, c)), 1e-10)
    assert ws.moyal(ws.unit(), a).allclose(a, 1e-11)
    assert ws.moyal(a, ws.unit()).allclose(a, 1e-11)


def test_pi_sharp_two_routes(ws5, rng):
    sp = ws5.space
    F = SymbolGrid.random(sp, rng)
    X1, X2 = sp.point(1, 3), sp.point(4, 2)
    assert ws5.pi_sharp_apply(X1, X2, F).allclose(ws5.pi_sharp_moyal(X1, X2, F), 1e-11)


def test_wigner_of_window_is_real_rank_one():
    ws = WeylSystem(7)
    phi = Window.gaussian(ws.space).phi
    W = ws.wigner(phi, phi)
    assert np.max(np.abs(W.values.imag)) < 1e-12
    T = ws.quantize(W)
    assert np.max(np.abs(T - np.outer(phi, phi.conj()))) < 1e-12


@pytest.mark.parametrize("N,d", [(5, 1), (3, 2)])
def test_cross_wigner_is_rank_one(N, d, rng):
    ws = WeylSystem(N, d)
    f, g = random_state(ws.space, rng), random_state(ws.space, rng)
    T = ws.quantize(ws.wigner(f, g))
    assert np.max(np.abs(T - np.outer(f, g.conj()))) < 1e-11


def test_gaussian_window():
    phi = discrete_gaussian(7)
    assert np.isclose(np.linalg.norm(phi), 1.0)
    assert np.allclose(phi, np.roll(phi[::-1], 1))
    win = Window.gaussian(FinitePhaseSpace(3, 2))
    assert win.phi.shape == (9,)
    with pytest.raises(DimensionError):
        Window.custom(FinitePhaseSpace(5), np.ones(4))
    with pytest.raises(ValueError):
        Window.custom(FinitePhaseSpace(5), np.zeros(5))


@pytest.mark.parametrize("N,d", [(5, 1), (7, 1), (3, 2)])
def test_analysis_isometry_and_projection(N, d, rng):
    ws = WeylSystem(N, d)
    phi = Window.gaussian(ws.space)
    V = ws.analysis_matrix(phi)
    Vs = ws.synthesis_matrix(phi)
    assert np.max(np.abs(Vs @ V - np.eye(ws.D))) < 1e-12
    T1 = V @ Vs
    assert np.max(np.abs(T1 @ T1 - T1)) < 1e-12
    f = random_state(ws.space, rng)
    assert np.allclose(V @ f, ws.analysis(f, phi))
    assert np.allclose(ws.synthesis(ws.analysis(f, phi), phi), f)
    # l2 isometry with the weighted measure
    assert np.isclose(np.sqrt(ws.w) * np.linalg.norm(V @ f), np.linalg.norm(f))


def test_identity_channel_is_projection():
    ws = WeylSystem(5)
    phi = Window.gaussian(ws.space)
    T1 = ws.channel_matrix(ws.unit(), phi)
    V = ws.analysis_matrix(phi)
    assert np.max(np.abs(T1 - V @ ws.synthesis_matrix(phi))) < 1e-12


def test_channel_intertwines(rng):
    ws = WeylSystem(5)
    phi = Window.gaussian(ws.space)
    a = SymbolGrid.random(ws.space, rng)
    f = random_state(ws.space, rng)
    lhs = ws.channel_apply(a, ws.analysis(f, phi), phi)
    rhs = ws.analysis(ws.quantize(a) @ f, phi)
    assert np.max(np.abs(lhs - rhs)) < 1e-11


def test_coefficient_table_composition_order(rng):
    ws = WeylSystem(5)
    phi = Window.gaussian(ws.space)
    a1, a2 = SymbolGrid.random(ws.space, rng), SymbolGrid.random(ws.space, rng)
    C1 = ws.matrix_coeff_table(a1, phi)
    C2 = ws.matrix_coeff_table(a2, phi)
    C12 = ws.matrix_coeff_table(ws.moyal(a1, a2), phi)
    assert np.max(np.abs(C12 - ws.w * C2 @ C1)) < 1e-10
    # the reversed product is a different table
    assert np.max(np.abs(C12 - ws.w * C1 @ C2)) > 1e-3


def test_pi_sharp_ambiguity_equals_symbol_table(rng):
    ws = WeylSystem(3)
    phi = Window.gaussian(ws.space)
    a = SymbolGrid.random(ws.space, rng)
    G = ws.pi_sharp_ambiguity(a, phi)
    C = ws.matrix_coeff_table(a, phi)
    # G(X1, X2) = C(X1, X1 + X2)
    t = ws.t
    assert np.max(np.abs(G - C[np.arange(ws.P)[:, None], t.phase_add])) < 1e-11


def test_operator_csv_roundtrip(rng):
    T = crandn(rng, 4, 4)
    text = write_operator_csv(T)
    assert np.array_equal(read_operator_csv(io.StringIO(text), 4), T)
    with pytest.raises(ValueError):
        read_operator_csv(io.StringIO("\n".join(text.splitlines()[:-1])), 4)
