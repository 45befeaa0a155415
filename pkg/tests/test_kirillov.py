import json
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from weylkit.kirillov import (
    BUNDLED,
    AlgebraFormatError,
    Functional,
    LieAlgebraData,
    UnsupportedClassError,
    bch_inverse,
    bch_multiply,
    cocycle_exhaustive,
    heisenberg_bridge,
    isotropy,
    jump_indices,
    predual,
    projective_cocycle_check,
    random_nilpotent,
    rank,
    validate,
)
from weylkit.weyl_core import WeylSystem

H3 = LieAlgebraData.bundled("heisenberg_3")
H5 = LieAlgebraData.bundled("heisenberg_5")


def _span_equal(A, B):
    A, B = np.atleast_2d(A), np.atleast_2d(B)
    return rank(A) == rank(B) == rank(np.vstack([A, B]))


def test_bundled_algebras_valid():
    for name in BUNDLED:
        alg = LieAlgebraData.bundled(name)
        assert validate(alg).ok, name
    assert H3.nilpotency_class() == 2
    assert LieAlgebraData.bundled("engel_4").nilpotency_class() == 3
    assert LieAlgebraData.bundled("abelian_3").nilpotency_class() == 1
    assert np.allclose(H3.c, LieAlgebraData.heisenberg(1).c)
    assert np.allclose(H5.c, LieAlgebraData.heisenberg(2).c)


def test_h3_bracket():
    # [X3, X2] = X1
    assert np.allclose(H3.bracket(H3.basis(3), H3.basis(2)), H3.basis(1))


def test_flag_violation_reported():
    alg = LieAlgebraData.from_brackets(3, [{"i": 1, "j": 2, "k": 3, "value": 1.0}])
    rep = validate(alg)
    assert not rep.ok
    assert ("flag", (1, 2, 3)) in {(v.kind, v.indices) for v in rep.violations}


def test_antisymmetry_and_jacobi_violations():
    c = np.zeros((3, 3, 3))
    c[1, 2, 0] = 1.0
    assert "antisymmetry" in validate(LieAlgebraData(c)).kinds()
    # [X1,X2] = X2, [X1,X3] = X3, [X2,X3] = X1 has Jacobiator -2 X1
    c = np.zeros((3, 3, 3))
    for (i, j, k, v) in [(0, 1, 1, 1.0), (0, 2, 2, 1.0), (1, 2, 0, 1.0)]:
        c[i, j, k], c[j, i, k] = v, -v
    assert "jacobi" in validate(LieAlgebraData(c)).kinds()


def test_h3_orbit():
    xi = Functional.dual_basis(3, 1)
    assert _span_equal(isotropy(H3, xi), [[1, 0, 0]])
    assert jump_indices(H3, xi) == [2, 3]
    od = predual(H3, xi)
    assert _span_equal(od.predual_basis, [[0, 1, 0], [0, 0, 1]])
    assert all(od.invariants().values())
    assert od.record()["predual"] == ["X2", "X3"]


def test_h5_and_trivial_orbits():
    assert jump_indices(H5, Functional.dual_basis(5, 1)) == [2, 3, 4, 5]
    assert jump_indices(H3, (0, 0, 0)) == []
    assert isotropy(H3, (0, 0, 0)).shape[0] == 3
    ab = LieAlgebraData.bundled("abelian_3")
    od = predual(ab, (1.0, -2.0, 0.5))
    assert od.jump_set == [] and od.isotropy_dim == 3 and od.predual_basis.shape[0] == 0


def test_center_inside_isotropy(rng):
    for _ in range(10):
        alg = random_nilpotent(rng)
        z = alg.center()
        iso = isotropy(alg, rng.standard_normal(alg.n))
        assert rank(np.vstack([iso, z])) == rank(iso)


def _exact_jump(alg, xi):
    """Jump set from exact rational ranks."""
    n = alg.n
    q = lambda v: sympy.Rational(Fraction(float(v)).limit_denominator(10**6))
    B = sympy.Matrix(n, n, lambda i, j: sum(q(alg.c[i, j, k]) * q(xi[k]) for k in range(n)))
    iso = B.T.nullspace()
    iso_rows = [list(v) for v in iso]
    e = []
    for j in range(1, n + 1):
        below = [[1 if c == r else 0 for c in range(n)] for r in range(j - 1)] + iso_rows
        with_j = below + [[1 if c == j - 1 else 0 for c in range(n)]]
        rb = sympy.Matrix(below).rank() if below else 0
        if sympy.Matrix(with_j).rank() > rb:
            e.append(j)
    return e, len(iso)


def test_random_algebras_against_exact_ranks(rng):
    for _ in range(20):
        alg = random_nilpotent(rng, max_dim=6, max_class=3)
        assert validate(alg, tol=1e-9).ok
        xi = rng.integers(-3, 4, alg.n).astype(float)
        od = predual(alg, xi)
        e, iso_dim = _exact_jump(alg, xi)
        assert od.jump_set == e
        assert od.isotropy_dim == iso_dim
        assert all(od.invariants().values())


@given(st.integers(0, 2**31), st.sampled_from([2.0, -1.0, 10.0]))
def test_jump_set_scale_invariant(seed, t):
    rng = np.random.default_rng(seed)
    alg = random_nilpotent(rng)
    xi = rng.standard_normal(alg.n)
    assert jump_indices(alg, xi) == jump_indices(alg, t * xi)


def test_bch_examples():
    X2, X3 = H3.basis(2), H3.basis(3)
    assert np.allclose(bch_multiply(H3, X2, X3), X2 + X3 - 0.5 * H3.basis(1))
    Y = np.array([0.3, -1.0, 2.0])
    assert np.allclose(bch_multiply(H3, np.zeros(3), Y), Y)
    assert np.allclose(bch_multiply(H3, Y, bch_inverse(Y)), 0)


def _mat_exp(M):
    out, term = np.eye(len(M)), np.eye(len(M))
    for k in range(1, len(M) + 1):
        term = term @ M / k
        out = out + term
    return out


def _mat_log(G):
    A = G - np.eye(len(G))
    out, term = np.zeros_like(G), np.eye(len(G))
    for k in range(1, len(G) + 1):
        term = term @ A
        out = out + (-1) ** (k + 1) * term / k
    return out


@pytest.mark.parametrize("m", [3, 4, 5])
def test_bch_matches_matrix_group(m, rng):
    alg = LieAlgebraData.strictly_upper(m)
    pairs = sorted(((a, b) for a in range(m) for b in range(a + 1, m)), key=lambda p: (-(p[1] - p[0]), p[0]))

    def mat(v):
        M = np.zeros((m, m))
        for (a, b), x in zip(pairs, v):
            M[a, b] = x
        return M

    def vec(M):
        return np.array([M[a, b] for a, b in pairs])

    for _ in range(10):
        X, Y = rng.standard_normal(alg.n), rng.standard_normal(alg.n)
        assert np.allclose(vec(mat(X) @ mat(Y) - mat(Y) @ mat(X)), alg.bracket(X, Y))
        oracle = vec(_mat_log(_mat_exp(mat(X)) @ _mat_exp(mat(Y))))
        assert np.max(np.abs(bch_multiply(alg, X, Y) - oracle)) < 1e-10


def test_bch_associative_class3(rng):
    for alg in (LieAlgebraData.bundled("engel_4"), LieAlgebraData.strictly_upper(4)):
        for _ in range(100):
            X, Y, Z = (rng.standard_normal(alg.n) for _ in range(3))
            lhs = bch_multiply(alg, bch_multiply(alg, X, Y), Z)
            rhs = bch_multiply(alg, X, bch_multiply(alg, Y, Z))
            assert np.max(np.abs(lhs - rhs)) < 1e-10


def test_bch_rejects_high_class():
    alg = LieAlgebraData.strictly_upper(6)
    assert alg.nilpotency_class() == 5
    with pytest.raises(UnsupportedClassError):
        bch_multiply(alg, np.zeros(alg.n), np.zeros(alg.n))


def test_cocycle_checks():
    ws = WeylSystem(5)
    sp = ws.space
    r = projective_cocycle_check(sp.origin(), sp.point(2, 3), ws)
    assert abs(r["c"] - 1) < 1e-12
    rep = cocycle_exhaustive(5)
    assert rep.cases == 625 and rep.passed and rep.sigma_classes == 5
    bridge = heisenberg_bridge(5)
    assert bridge["predual_dim"] == 2 and bridge["passed"]


def test_json_roundtrip_and_errors(tmp_path):
    text = H5.to_json()
    assert np.allclose(LieAlgebraData.from_json(text).c, H5.c)
    path = tmp_path / "alg.json"
    path.write_text(text)
    assert np.allclose(LieAlgebraData.from_json(path).c, H5.c)
    stored = json.loads(text)["brackets"]
    assert all(b["i"] < b["j"] for b in stored)
    bad = [
        {"brackets": []},
        {"dim": 0},
        {"dim": 3, "brackets": [{"i": 2, "j": 1, "k": 1, "value": 1}]},
        {"dim": 3, "brackets": [{"i": 1, "j": 4, "k": 1, "value": 1}]},
        {"dim": 3, "brackets": [{"i": 1, "j": 2}]},
    ]
    for data in bad:
        with pytest.raises(AlgebraFormatError):
            LieAlgebraData.from_dict(data)
    with pytest.raises(AlgebraFormatError):
        predual(H3, (1.0, 0.0))
    with pytest.raises(KeyError):
        LieAlgebraData.bundled("nope")
