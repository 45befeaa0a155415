"""Named verification suites, one per acceptance criterion.

Each suite takes a :class:`numpy.random.Generator` plus keyword parameters
(defaults are the reference settings) and returns a :class:`SuiteReport`.
Checks never raise on failure; the report aggregates them.
"""

from __future__ import annotations

import json
import time
import zlib
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .algebra import (
    Check,
    UnitalSymbol,
    _delta,
    involution_check,
    op_norm_bound_check,
    subalgebra_check_p1,
    submultiplicativity_check,
    unital_submultiplicative_check,
    wiener_check,
    wiener_invert_direct,
    young_bound_check,
    _json_default,
)
from .kirillov import (
    Functional,
    LieAlgebraData,
    bch_multiply,
    cocycle_exhaustive,
    isotropy,
    jump_indices,
    predual,
    random_nilpotent,
    rank,
)
from .magnetic import (
    MagneticSystem,
    Polynomial,
    SampledLineGrid,
    VectorPotential,
    gauge_covariance_check,
    landau_demo,
    magnetic_algebra_suite,
)
from .modspace import (
    INF,
    SplitSpec,
    beta_profile,
    embedding_bound,
    fmt_exponent,
    in_diagonal_class,
    in_dominating_class,
    lp_norm,
    monotonicity_constant,
    reproducing_kernel,
    reproducing_residual,
    sym_mod_norm,
    symbol_table,
    vec_mod_norm,
)
from .phase_space import FinitePhaseSpace, SymbolGrid
from .weyl_core import Window, WeylSystem, random_state

EXPONENTS = (1, 2, INF)


@dataclass
class SuiteReport:
    suite: str
    checks: list
    wall_time: float = 0.0
    config: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    def jsonl(self) -> str:
        lines = []
        for c in self.checks:
            rec = {"suite": self.suite, **c.record()}
            lines.append(json.dumps(rec, default=_json_default))
        return "\n".join(lines) + ("\n" if lines else "")

    def summary_row(self) -> dict:
        slacks = [c.slack for c in self.checks]
        return {
            "suite": self.suite,
            "checks": len(self.checks),
            "failed": len(self.failures),
            "min_slack": min(slacks) if slacks else float("nan"),
            "pass": self.passed,
        }

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        worst = min((c.slack for c in self.checks), default=float("nan"))
        return f"{status} {self.suite}: {len(self.checks)} checks, {len(self.failures)} failed, min slack {worst:.3e}, {self.wall_time:.1f}s"


def _eq(name, residual, tol, **params) -> Check:
    return Check(name, float(residual), 0.0, "eq", tol, params)


def suite_rng(seed: int, name: str) -> np.random.Generator:
    """Independent stream per suite, stable across runs and platforms."""
    return np.random.default_rng([int(seed) & (2**64 - 1), zlib.crc32(name.encode())])


# ---------------------------------------------------------------------------
# finite model


def isometry(rng, Ns=(5, 7, 9, 31), d=1, trials=100, tol=1e-12):
    """``||A_phi f||_{l2(mu)} = ||f|| ||phi||`` for random pairs."""
    out = []
    for N in Ns:
        sp = FinitePhaseSpace(N, d)
        ws = WeylSystem(sp)
        worst = 0.0
        for _ in range(trials):
            f, phi = random_state(sp, rng), random_state(sp, rng)
            A = ws.ambiguity(f, phi)
            scale = np.linalg.norm(f) * np.linalg.norm(phi)
            worst = max(worst, abs(np.sqrt(sp.w * np.sum(np.abs(A) ** 2)) - scale) / scale)
        out.append(_eq("ambiguity_isometry", worst, tol, N=N, d=d, trials=trials))
    return out


def unitarity(rng, Ns=(5, 7, 9, 31), d=1, trials=100, tol=1e-12):
    """``||Op(a)||_HS = ||a||``."""
    out = []
    for N in Ns:
        sp = FinitePhaseSpace(N, d)
        ws = WeylSystem(sp)
        a = rng.standard_normal((trials, sp.size)) + 1j * rng.standard_normal((trials, sp.size))
        T = ws.quantize_array(a)
        hs = np.sqrt(np.sum(np.abs(T) ** 2, axis=(1, 2)))
        na = np.sqrt(sp.w * np.sum(np.abs(a) ** 2, axis=1))
        out.append(_eq("quantizer_unitarity", float(np.max(np.abs(hs - na) / na)), tol, N=N, d=d, trials=trials))
    return out


def covariance(rng, N=7, d=1, trials=50, tol=1e-10):
    """Wigner covariance under ``pi^#`` and the plane-wave form of ``pi^#``."""
    sp = FinitePhaseSpace(N, d)
    ws = WeylSystem(sp)
    cov = pw = 0.0
    for _ in range(trials):
        f1, f2 = random_state(sp, rng, True), random_state(sp, rng, True)
        X1, X2 = sp.random_point(rng), sp.random_point(rng)
        W = ws.wigner(f1, f2)
        lhs = ws.wigner(ws.apply(X1, f1), ws.apply(X2, f2))
        act = ws.pi_sharp_apply(X2, X1 - X2, W)
        cov = max(cov, _delta(lhs.values, act.values))
        pw = max(pw, _delta(act.values, ws.pi_sharp_moyal(X2, X1 - X2, W).values))
    return [
        _eq("wigner_covariance", cov, tol, N=N, trials=trials),
        _eq("pi_sharp_plane_wave_form", pw, tol, N=N, trials=trials),
    ]


def coefficient_table(rng, N=7, d=1, trials=20, tol=1e-10):
    """Symbol table equals the ``pi^#``-ambiguity of the symbol."""
    sp = FinitePhaseSpace(N, d)
    ws = WeylSystem(sp)
    phi = Window.gaussian(sp)
    syms = [SymbolGrid.random(sp, rng) for _ in range(trials)]
    amb = ws.pi_sharp_ambiguity_many(syms, phi)
    worst = max(_delta(symbol_table(a, phi, ws).values, amb[i]) for i, a in enumerate(syms))
    return [_eq("symbol_table_vs_pi_sharp_ambiguity", worst, tol, N=N, trials=trials)]


def profiles(rng, N=7, d=1, trials=5, dominators=20, tol=1e-10):
    """Symbol norms through profiles, and minimality of the sup profile."""
    sp = FinitePhaseSpace(N, d)
    ws = WeylSystem(sp)
    phi = Window.gaussian(sp)
    out = []
    worst = {}
    minimal = True
    member_count = 0
    diag = True
    for _ in range(trials):
        a = SymbolGrid.random(sp, rng)
        G = symbol_table(a, phi, ws)
        for p in EXPONENTS:
            b = beta_profile(G, phi, p)
            for q in EXPONENTS:
                r = abs(sym_mod_norm(G, phi, p, q) - float(lp_norm(b, q, sp.w)))
                key = (fmt_exponent(p), fmt_exponent(q))
                worst[key] = max(worst.get(key, 0.0), r)
        beta = beta_profile(G, phi, INF)
        minimal &= in_dominating_class(G, beta, INF, atol=tol)
        C = ws.matrix_coeff_table(a, phi)
        diag &= in_diagonal_class(C, beta[sp.tables.phase_neg], sp.tables, atol=tol)
        scale = float(np.max(beta))
        for _ in range(dominators):
            cand = beta + 0.05 * scale * rng.standard_normal(beta.shape)
            member = in_dominating_class(G, cand, INF, atol=tol)
            member_count += int(member)
            # membership must coincide with pointwise domination of beta
            minimal &= member == bool(np.all(cand >= beta - tol))
        cand = beta + 0.05 * scale * np.abs(rng.standard_normal(beta.shape))
        minimal &= in_dominating_class(G, cand, INF, atol=tol)
        member_count += 1
    for (p, q), r in worst.items():
        out.append(_eq("norm_via_profile", r, tol, N=N, p=p, q=q, trials=trials))
    out.append(_eq("profile_minimal", 0.0 if minimal else 1.0, 0.0, N=N, dominators=dominators * trials, members=member_count))
    out.append(_eq("diagonal_class_membership", 0.0 if diag else 1.0, 0.0, N=N))
    return out


def composition(rng, N=5, d=1, trials=20, tol=1e-10):
    """``C_{a1 # a2} = w C_{a2} C_{a1}`` as kernels on ``Xi x Xi``."""
    sp = FinitePhaseSpace(N, d)
    ws = WeylSystem(sp)
    phi = Window.gaussian(sp)
    worst = 0.0
    for _ in range(trials):
        a1, a2 = SymbolGrid.random(sp, rng), SymbolGrid.random(sp, rng)
        C1, C2 = ws.matrix_coeff_table(a1, phi), ws.matrix_coeff_table(a2, phi)
        C12 = ws.matrix_coeff_table(ws.moyal(a1, a2), phi)
        worst = max(worst, _delta(C12, sp.w * C2 @ C1) / max(1.0, float(np.max(np.abs(C12)))))
    return [_eq("kernel_composition", worst, tol, N=N, trials=trials)]


def channel(rng, Ns=(5, 7), d=1, trials=20, tol=1e-10):
    """``Op(a) = V* T_a V`` in Hilbert-Schmidt norm."""
    out = []
    for N in Ns:
        sp = FinitePhaseSpace(N, d)
        ws = WeylSystem(sp)
        phi = Window.gaussian(sp)
        V, Vs = ws.analysis_matrix(phi), ws.synthesis_matrix(phi)
        worst = 0.0
        for _ in range(trials):
            a = SymbolGrid.random(sp, rng)
            worst = max(worst, float(np.linalg.norm(ws.quantize(a) - Vs @ ws.channel_matrix(a, phi) @ V)))
        out.append(_eq("channel_factorization", worst, tol, N=N, trials=trials))
    return out


def op_bound(rng, Ns=(5, 7, 9), d=1, trials=100, tol=1e-10, bins=10):
    """``||Op(a)||_2 <= ||a||_{M^{inf,1}}`` with the slack histogram."""
    out = []
    hist = {}
    for N in Ns:
        sp = FinitePhaseSpace(N, d)
        ws = WeylSystem(sp)
        phi = Window.gaussian(sp)
        slacks = []
        worst = None
        for _ in range(trials):
            c = op_norm_bound_check(SymbolGrid.random(sp, rng), phi, ws, tol)
            slacks.append(c.slack)
            if worst is None or c.slack < worst.slack:
                worst = c
        worst.params.update(N=N, trials=trials)
        out.append(worst)
        counts, edges = np.histogram(slacks, bins=bins)
        hist[N] = {"counts": counts.tolist(), "edges": edges.tolist()}
    return out, {"slack_histogram": hist}


YOUNG_TUPLES = ((INF, 1, INF, 1), (2, 1, 2, 1), (INF, 2, INF, 2))


def young(rng, N=7, d=1, trials=50, tol=1e-10, tuples=YOUNG_TUPLES):
    sp = FinitePhaseSpace(N, d)
    ws = WeylSystem(sp)
    phi = Window.gaussian(sp)
    out = []
    for ex in tuples:
        worst = {}
        for _ in range(trials):
            a1, a2 = SymbolGrid.random(sp, rng), SymbolGrid.random(sp, rng)
            for c in young_bound_check(a1, a2, phi, ex, ws, tol):
                if c.check not in worst or c.slack < worst[c.check].slack:
                    worst[c.check] = c
        for c in worst.values():
            c.params.update(N=N, trials=trials)
            out.append(c)
    return out


def banach(rng, N=7, d=1, trials=20, tol=1e-10):
    """Submultiplicativity, involution, unital norm."""
    sp = FinitePhaseSpace(N, d)
    ws = WeylSystem(sp)
    phi = Window.gaussian(sp)
    worst: dict = {}

    def keep(c):
        if c.check not in worst or c.slack < worst[c.check].slack:
            worst[c.check] = c

    for _ in range(trials):
        a, b = SymbolGrid.random(sp, rng), SymbolGrid.random(sp, rng)
        keep(submultiplicativity_check(a, b, phi, ws, tol))
        for c in involution_check(a, phi, b, ws, tol):
            keep(c)
        u = UnitalSymbol(complex(rng.standard_normal(), rng.standard_normal()), a.values)
        v = UnitalSymbol(complex(rng.standard_normal(), rng.standard_normal()), b.values)
        for c in unital_submultiplicative_check(u, v, phi, ws, tol):
            keep(c)
    for c in worst.values():
        c.params.update(N=N, trials=trials)
    return list(worst.values())


def wiener(rng, N=7, d=1, trials=10, nodes=256, tol=1e-10, tol_agree=1e-6, tol_res=1e-9, size=0.3):
    """Rank-one inverse, direct versus contour inverse, Moyal residual."""
    sp = FinitePhaseSpace(N, d)
    ws = WeylSystem(sp)
    phi = Window.gaussian(sp)
    W = ws.wigner(phi, phi).values
    r1 = wiener_invert_direct(UnitalSymbol(1.0, 0.5 * W), phi, ws)
    out = [_eq("wiener_rank_one", _delta(r1.b0.total(), 1.0 - W / 3.0), tol, N=N)]
    worst: dict = {}
    for _ in range(trials):
        a = SymbolGrid.random(sp, rng)
        a00 = size * a.values / sym_mod_norm(a, phi, INF, 1, ws)
        alpha = np.exp(2j * np.pi * rng.random())
        for c in wiener_check(UnitalSymbol(alpha, a00), phi, ws, nodes, tol_agree, tol_res):
            if c.check not in worst or c.slack < worst[c.check].slack:
                worst[c.check] = c
    for c in worst.values():
        c.params.update(N=N, trials=trials, a00_norm=size)
    return out + list(worst.values())


def reproducing(rng, N=7, d=1, trials=10, tol=1e-12, chain_tol=1e-10, sub_ps=(2, 4, INF)):
    """Reproducing identity, the mixed-norm Hölder chain, monotonicity, subalgebras."""
    sp = FinitePhaseSpace(N, d)
    ws = WeylSystem(sp)
    phi = Window.gaussian(sp)
    R = reproducing_kernel(phi, ws)
    split = SplitSpec(sp)
    res = 0.0
    chain: dict = {}
    mono: dict = {}
    for _ in range(trials):
        f = random_state(sp, rng)
        res = max(res, reproducing_residual(f, phi, ws, R))
        norms = {}
        for p in EXPONENTS:
            for q in EXPONENTS:
                e = embedding_bound(f, phi, p, q, split, ws, R)
                key = (fmt_exponent(p), fmt_exponent(q))
                rel = e.slack / max(1.0, e.rhs)
                chain[key] = min(chain.get(key, np.inf), rel)
                norms[(p, q)] = vec_mod_norm(f, phi, p, q, split, ws)
        for (p1, q1), n1 in norms.items():
            for (p2, q2), n2 in norms.items():
                if p1 <= p2 and q1 <= q2 and (p1, q1) != (p2, q2):
                    C = monotonicity_constant(p1, q1, p2, q2, split, R)
                    key = tuple(fmt_exponent(v) for v in (p1, q1, p2, q2))
                    mono[key] = min(mono.get(key, np.inf), (C * n1 - n2) / max(1.0, C * n1))
    out = [_eq("reproducing_identity", res, tol, N=N, trials=trials)]
    for (p, q), s in chain.items():
        out.append(Check("holder_chain", -s, 0.0, "le", chain_tol, {"N": N, "p": p, "q": q, "relative_slack": s}))
    for key, s in mono.items():
        out.append(Check("monotonicity", -s, 0.0, "le", chain_tol, dict(zip(("p1", "q1", "p2", "q2"), key), relative_slack=s)))
    for p in sub_ps:
        worst: dict = {}
        for _ in range(max(1, trials // 2)):
            a1, a2 = SymbolGrid.random(sp, rng), SymbolGrid.random(sp, rng)
            for c in subalgebra_check_p1(a1, a2, phi, p, ws, chain_tol):
                if c.check not in worst or c.slack < worst[c.check].slack:
                    worst[c.check] = c
        out.extend(worst.values())
    return out


# ---------------------------------------------------------------------------
# Kirillov


def orbit(rng, algebra="heisenberg_3", xi0=(1.0, 0.0, 0.0), expect_jump=None, tol=1e-10):
    """Isotropy, jump set and predual for one algebra and functional."""
    alg = algebra if isinstance(algebra, LieAlgebraData) else _load_algebra(algebra)
    data = predual(alg, list(xi0))
    inv = data.invariants()
    out = [
        _eq(f"orbit_{k}", 0.0 if v else 1.0, 0.0, algebra=alg.name, xi0=list(xi0), jump_set=data.jump_set)
        for k, v in inv.items()
    ]
    if expect_jump is not None:
        out.append(_eq("orbit_expected_jump_set", 0.0 if data.jump_set == list(expect_jump) else 1.0, 0.0, expected=list(expect_jump), jump_set=data.jump_set))
    return out, {"orbit": data.record()}


def _load_algebra(name):
    from .kirillov import BUNDLED

    s = str(name)
    if s.endswith(".json") and s[:-5] in BUNDLED:
        s = s[:-5]
    if s in BUNDLED:
        return LieAlgebraData.bundled(s)
    return LieAlgebraData.from_json(s)


def kirillov(rng, random_algebras=20, bch_triples=100, tol=1e-10, N=5):
    out = []
    h3 = LieAlgebraData.bundled("heisenberg_3")
    h5 = LieAlgebraData.bundled("heisenberg_5")
    x1 = Functional.dual_basis(3, 1)
    iso = isotropy(h3, x1)
    iso_ok = iso.shape[0] == 1 and rank(np.vstack([iso, h3.basis(1)])) == 1
    out.append(_eq("h3_isotropy_span_X1", 0.0 if iso_ok else 1.0, 0.0))
    d3 = predual(h3, x1)
    out.append(_eq("h3_jump_set", 0.0 if d3.jump_set == [2, 3] else 1.0, 0.0, jump_set=d3.jump_set))
    ge_ok = np.allclose(d3.predual_basis, np.eye(3)[1:3])
    out.append(_eq("h3_predual_X2_X3", 0.0 if ge_ok else 1.0, 0.0))
    e5 = jump_indices(h5, Functional.dual_basis(5, 1))
    out.append(_eq("h5_jump_set", 0.0 if e5 == [2, 3, 4, 5] else 1.0, 0.0, jump_set=e5))
    # random algebras: direct sum rank, counts, scale invariance
    bad = 0
    for _ in range(random_algebras):
        alg = random_nilpotent(rng, 6, 3)
        xi = rng.standard_normal(alg.n)
        inv = predual(alg, xi).invariants()
        e = jump_indices(alg, xi)
        bad += int(not all(inv.values()))
        bad += sum(int(jump_indices(alg, t * xi) != e) for t in (2.0, -1.0, 10.0))
    out.append(_eq("random_algebra_orbits", float(bad), 0.0, count=random_algebras))
    # BCH laws on class-2 and class-3 algebras
    algs = [h3, h5, LieAlgebraData.bundled("engel_4"), LieAlgebraData.strictly_upper(4)]
    ident = inv_err = assoc = 0.0
    for k in range(bch_triples):
        alg = algs[k % len(algs)]
        X, Y, Z = (rng.standard_normal(alg.n) for _ in range(3))
        zero = np.zeros(alg.n)
        ident = max(ident, _delta(bch_multiply(alg, zero, Y), Y), _delta(bch_multiply(alg, X, zero), X))
        inv_err = max(inv_err, _delta(bch_multiply(alg, X, -X), zero))
        lhs = bch_multiply(alg, bch_multiply(alg, X, Y), Z)
        rhs = bch_multiply(alg, X, bch_multiply(alg, Y, Z))
        assoc = max(assoc, _delta(lhs, rhs))
    h3_ex = _delta(bch_multiply(h3, h3.basis(2), h3.basis(3)), h3.basis(2) + h3.basis(3) - 0.5 * h3.basis(1))
    out += [
        _eq("bch_identity", ident, tol, triples=bch_triples),
        _eq("bch_inverse", inv_err, tol, triples=bch_triples),
        _eq("bch_associative", assoc, tol, triples=bch_triples),
        _eq("bch_h3_example", h3_ex, tol),
    ]
    rep = cocycle_exhaustive(N, 1)
    out.append(Check("cocycle_exhaustive", 0.0 if rep.passed else 1.0, 0.0, "eq", 0.0, rep.record()))
    return out


# ---------------------------------------------------------------------------
# magnetic


def magnetic(rng, B=1.0, L=8.0, n=64, tol=1e-10, bound_tol=1e-8, rtol=0.02, landau=True):
    """Zero-field reduction, gauge covariance and spectra, norm bound, Landau levels."""
    out = []
    for d, m, Lr in ((1, 9, 3.0), (2, 5, 2.0)):
        sysm = MagneticSystem(SampledLineGrid(d, Lr, m))
        a = sysm.random_symbol(rng)
        W = WeylSystem(m, d)
        r = _delta(sysm.quantize_array(a), W.quantize_array(sysm.weyl_equivalent(a)))
        out.append(_eq("magnetic_zero_field_reduction", r, tol, d=d, n=m))
    g = SampledLineGrid(2, 2.0, 8)
    A = VectorPotential.symmetric_gauge(B)
    rep = gauge_covariance_check(MagneticSystem(g, A).random_symbol(rng), A, Polynomial.random(2, rng, 0.5), g, spectra=False, tol=tol)
    out.append(_eq("magnetic_gauge_covariance", rep.matrix_error, tol, n=g.n, L=g.L))
    g2 = SampledLineGrid(2, 3.0, 16)
    s_sym = MagneticSystem(g2, A)
    rep = gauge_covariance_check(s_sym.kinetic_symbol(), A, Polynomial.from_mapping(2, {"x*y": B / 2}), g2, spectra=True, tol=tol)
    out.append(_eq("magnetic_gauge_spectra", rep.spectral_error, tol, n=g2.n, L=g2.L, gauges="symmetric,landau"))
    for d, m, Lr, pot in ((1, 16, 3.0, VectorPotential.from_mappings(1, [{"x": 0.5}])), (2, 6, 2.0, A)):
        sysm = MagneticSystem(SampledLineGrid(d, Lr, m), pot)
        worst = None
        for _ in range(3):
            c = op_norm_bound_check(sysm.random_symbol(rng), sysm.window(), sysm, bound_tol)
            if worst is None or c.slack < worst.slack:
                worst = c
        worst.check = "magnetic_op_norm_bound"
        worst.params.update(d=d, n=m, A=pot.tag)
        out.append(worst)
    extra = {}
    if landau:
        lr = landau_demo(B, SampledLineGrid(2, L, n))
        out.append(Check("landau_levels", _worst(lr.relative_errors), rtol, "le", 0.0, lr.record()))
        extra["spectrum"] = lr
    return out, extra


def _worst(errors) -> float:
    errors = np.asarray(errors)
    return float(np.max(errors)) if errors.size else float("inf")


def landau(rng, B=1.0, L=8.0, n=64, rtol=0.02, gauge="symmetric"):
    lr = landau_demo(B, SampledLineGrid(2, L, n), gauge=gauge)
    err = _worst(lr.relative_errors) if len(lr.levels) else float("inf")
    return [Check("landau_levels", err, rtol, "le", 0.0, lr.record())], {"spectrum": lr}


def magnetic_algebra(rng, B=1.0, d=2, L=2.0, n=6, nodes=256, potential=None):
    """Algebra suites on ``Op^A``; the default potential is a constant field ``B``."""
    pot = potential
    if pot is None:
        pot = VectorPotential.symmetric_gauge(B) if d == 2 else VectorPotential.from_mappings(1, [{"x": 0.5 * B}], f"linear(B={B})")
    sysm = MagneticSystem(SampledLineGrid(d, L, n), pot)
    return magnetic_algebra_suite(sysm, rng, nodes=nodes)


# ---------------------------------------------------------------------------
# registry


@dataclass(frozen=True)
class Suite:
    name: str
    model: str
    func: Callable
    criterion: int | None
    limit: float  # seconds
    doc: str


SUITES = {
    s.name: s
    for s in (
        Suite("isometry", "finite", isometry, 1, 10, "ambiguity function isometry"),
        Suite("unitarity", "finite", unitarity, 2, 10, "quantizer is unitary onto Hilbert-Schmidt"),
        Suite("covariance", "finite", covariance, 3, 30, "Wigner covariance and pi^# via plane waves"),
        Suite("coefficient_table", "finite", coefficient_table, 4, 60, "symbol table equals pi^# ambiguity"),
        Suite("profiles", "finite", profiles, 5, 60, "profile norms, minimal dominating profile"),
        Suite("composition", "finite", composition, 6, 30, "kernel composition order"),
        Suite("channel", "finite", channel, 7, 30, "Op(a) = V* T_a V"),
        Suite("op_bound", "finite", op_bound, 8, 60, "operator norm bounded by the Sjostrand norm"),
        Suite("young", "finite", young, 9, 120, "Young bounds for the Moyal product"),
        Suite("banach", "finite", banach, 10, 60, "Banach *-algebra checks and unitalization"),
        Suite("wiener", "finite", wiener, 11, 120, "Wiener inversion, direct and contour"),
        Suite("reproducing", "finite", reproducing, 12, 60, "reproducing kernel, Hölder chain, subalgebras"),
        Suite("kirillov", "kirillov", kirillov, 13, 30, "orbits, BCH and the Heisenberg cocycle"),
        Suite("magnetic", "magnetic", magnetic, 14, 300, "magnetic calculus and Landau levels"),
        Suite("orbit", "kirillov", orbit, None, 10, "orbit data for a given algebra and functional"),
        Suite("landau", "magnetic", landau, None, 300, "Landau spectrum"),
        Suite("magnetic_algebra", "magnetic", magnetic_algebra, None, 120, "algebra suites on the magnetic calculus"),
    )
}

ACCEPTANCE = tuple(s.name for s in sorted(SUITES.values(), key=lambda s: s.criterion or 99) if s.criterion)


def run_suite(name: str, seed: int, **params) -> SuiteReport:
    """Run one suite with a seed-derived generator."""
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    suite = SUITES[name]
    rng = suite_rng(seed, name)
    t0 = time.perf_counter()
    result = suite.func(rng, **params)
    wall = time.perf_counter() - t0
    checks, extra = result if isinstance(result, tuple) else (result, {})
    return SuiteReport(name, list(checks), wall, {"seed": seed, **params}, extra)
