import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from weylkit.algebra import (
    Check,
    Contour,
    ContourError,
    ExponentPair,
    NotInvertibleError,
    UnitalSymbol,
    all_passed,
    default_contour,
    involution_check,
    neumann_inverse,
    op_norm_bound_check,
    subalgebra_check_p1,
    submultiplicativity_check,
    unital_submultiplicative_check,
    wiener_check,
    wiener_invert_contour,
    wiener_invert_direct,
    window_equivalence,
    young_bound_check,
    young_exponents,
)
from weylkit.modspace import INF, ExponentError
from weylkit.phase_space import SymbolGrid
from weylkit.weyl_core import Window, WeylSystem

EXPS = [1, 2, INF]
YOUNG = [(p1, q1, p2, q2) for p1 in EXPS for q1 in EXPS for p2 in EXPS for q2 in EXPS]


def _valid(t):
    try:
        young_exponents(*t)
        return True
    except ExponentError:
        return False


@pytest.fixture(scope="module")
def setup5():
    ws = WeylSystem(5)
    return ws, Window.gaussian(ws.space)


def test_young_examples():
    assert young_exponents(INF, 1, INF, 1) == (INF, 1)
    assert young_exponents(2, 1, 2, 1) == (1, 1)
    assert young_exponents(4, 2, 4, 2) == (2, INF)
    assert young_exponents("3", "3/2", "3/2", "3") == (1, INF)


@pytest.mark.parametrize("t", [(1, 1, 1, 1), (2, 2, 1, 1), (INF, INF, INF, 2)])
def test_young_errors(t):
    with pytest.raises(ExponentError, match="1/"):
        young_exponents(*t)


def test_check_record():
    c = Check("x", 1.0, 2.0, "le", 0.0, {"N": 5})
    assert c.passed and c.slack == pytest.approx(1.0)
    rec = json.loads(c.to_json())
    assert rec["check"] == "x" and rec["pass"] is True
    assert not Check("y", 1.0, 0.0, "eq", 0.5).passed
    assert not all_passed([c, Check("y", 1.0, 0.0, "eq", 0.5)])


def test_op_norm_bound_window_projection(setup5):
    ws, phi = setup5
    W = ws.wigner(phi.phi, phi.phi)
    c = op_norm_bound_check(W, phi, ws)
    assert c.lhs == pytest.approx(1.0)
    assert c.passed


@given(st.integers(0, 2**31))
def test_op_norm_bound_random(seed):
    ws = WeylSystem(5)
    phi = Window.gaussian(ws.space)
    a = SymbolGrid.random(ws.space, np.random.default_rng(seed))
    assert op_norm_bound_check(a, phi, ws).passed


@given(st.sampled_from([t for t in YOUNG if _valid(t)]), st.integers(0, 2**31))
def test_young_bound_property(t, seed):
    ws = WeylSystem(5)
    phi = Window.gaussian(ws.space)
    rng = np.random.default_rng(seed)
    a1, a2 = SymbolGrid.random(ws.space, rng), SymbolGrid.random(ws.space, rng)
    assert all_passed(young_bound_check(a1, a2, phi, ExponentPair(*t), ws))


def test_banach_properties(setup5, rng):
    ws, phi = setup5
    a, b = SymbolGrid.random(ws.space, rng), SymbolGrid.random(ws.space, rng)
    assert submultiplicativity_check(a, b, phi, ws).passed
    assert all_passed(involution_check(a, phi, b, ws))
    u = UnitalSymbol(0.7 - 0.2j, a.values)
    v = UnitalSymbol.from_symbol(b)
    assert abs(v.alpha - b.values.mean()) < 1e-14
    assert all_passed(unital_submultiplicative_check(u, v, phi, ws))


def test_wiener_scalar(setup5):
    ws, phi = setup5
    a0 = UnitalSymbol(2.0, np.zeros(ws.P))
    r = wiener_invert_direct(a0, phi, ws)
    assert abs(r.b0.alpha - 0.5) < 1e-14
    assert np.max(np.abs(r.b0.total() - 0.5)) < 1e-12
    c = wiener_invert_contour(a0, phi, ws)
    assert np.max(np.abs(c.b0.total() - 0.5)) < 1e-8


def test_wiener_rank_one(setup5):
    ws, phi = setup5
    W = ws.wigner(phi.phi, phi.phi).values
    a0 = UnitalSymbol(1.0, 0.5 * W)
    expect = 1.0 - W / 3.0
    r = wiener_invert_direct(a0, phi, ws)
    assert np.max(np.abs(r.b0.total() - expect)) < 1e-12
    c = wiener_invert_contour(a0, phi, ws, nodes=256)
    assert np.max(np.abs(c.b0.total() - expect)) < 1e-6
    assert c.observed_order >= 2
    assert all_passed(wiener_check(a0, phi, ws))


def test_neumann_series(setup5, rng):
    ws, phi = setup5
    a = SymbolGrid.random(ws.space, rng).values
    T = ws.quantize_array(a)
    a00 = 0.3 * a / np.linalg.norm(T, 2)
    b0 = wiener_invert_direct(UnitalSymbol(1.0, a00), phi, ws).b0.total()
    assert np.max(np.abs(neumann_inverse(a00, ws, terms=30) - b0)) < 1e-6


def test_not_invertible(setup5):
    ws, phi = setup5
    W = ws.wigner(phi.phi, phi.phi).values
    with pytest.raises(NotInvertibleError):
        wiener_invert_direct(UnitalSymbol(1.0, -W), phi, ws)


def test_contour_geometry():
    c = Contour.rectangle(-1 - 1j, 1 + 1j)
    assert c.winding(0) == 1 and c.winding(3) == 0
    assert c.distance([0.5]) == pytest.approx(0.5)
    z, w = c.nodes(16)
    assert abs(np.sum(w / z) - 2j * np.pi) < 1e-6
    with pytest.raises(ContourError):
        c.validate([1.0 + 0.5j], excluded=5.0)
    d = default_contour(np.array([1.0, 2.0, -1.0]))
    assert d.winding(0.0) == 0
    for ev in (1.0, 2.0, -1.0):
        assert d.winding(ev) == 1


def test_contour_through_spectrum_rejected(setup5):
    ws, phi = setup5
    a0 = UnitalSymbol(2.0, np.zeros(ws.P))
    with pytest.raises(ContourError):
        wiener_invert_contour(a0, phi, ws, contour=Contour.rectangle(1 - 1j, 2 + 1j))


@pytest.mark.parametrize("p", [2, 4, INF])
def test_subalgebra(setup5, rng, p):
    ws, phi = setup5
    a1, a2 = SymbolGrid.random(ws.space, rng), SymbolGrid.random(ws.space, rng)
    assert all_passed(subalgebra_check_p1(a1, a2, phi, p, ws))


def test_subalgebra_rejects_small_p(setup5, rng):
    ws, phi = setup5
    a = SymbolGrid.random(ws.space, rng)
    with pytest.raises(ExponentError):
        subalgebra_check_p1(a, a, phi, 1.5, ws)


def test_window_equivalence_reports(setup5, rng):
    ws, phi = setup5
    other = Window.custom(ws.space, np.arange(1, 6))
    rep = window_equivalence([SymbolGrid.random(ws.space, rng) for _ in range(3)], phi, other, ws)
    assert rep["C"] >= 1.0


def test_contour_grading_order(rng):
    ws = WeylSystem(7)
    phi = Window.gaussian(ws.space)
    a = SymbolGrid.random(ws.space, rng).values
    a00 = 0.3 * a / np.linalg.norm(ws.quantize_array(a), 2)
    a0 = UnitalSymbol(1.0, a00)
    plain = wiener_invert_contour(a0, phi, ws, nodes=64, grading="none")
    graded = wiener_invert_contour(a0, phi, ws, nodes=64)
    assert 1.5 < plain.observed_order < 2.5
    assert graded.observed_order > 4
    assert graded.residual < plain.residual
