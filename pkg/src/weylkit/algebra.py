"""Banach-algebra layer of the symbol class ``M^{inf,1}``.

Every check returns :class:`Check` records that serialize to one JSON line
each. The functions take a symbol as a :class:`SymbolGrid` (finite Weyl
calculus) or as a flat array together with an explicit ``system``. Any object
with the calculus interface described in :func:`weylkit.modspace.resolve`
works, which is how the magnetic calculus reuses these suites.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .modspace import (
    INF,
    ExponentError,
    fmt_exponent,
    from_recip,
    operator_table,
    parse_exponent,
    recip,
    resolve,
    sym_mod_norm,
    symbol_table,
    weighted_convolution,
)
from .phase_space import Side, SymbolGrid

TOL = 1e-10


# ---------------------------------------------------------------------------
# records


@dataclass
class Check:
    """One verified relation.

    ``kind="le"`` asserts ``lhs <= rhs`` (slack ``rhs - lhs`` must be at least
    ``-tol``); ``kind="eq"`` asserts ``|lhs - rhs| <= tol``.
    """

    check: str
    lhs: float
    rhs: float
    kind: str = "le"
    tol: float = TOL
    params: dict = field(default_factory=dict)

    @property
    def slack(self) -> float:
        if self.kind == "le":
            return float(self.rhs - self.lhs)
        return -abs(float(self.lhs - self.rhs))

    @property
    def passed(self) -> bool:
        if not (math.isfinite(self.lhs) and math.isfinite(self.rhs)):
            return False
        if self.kind == "le":
            return self.slack >= -self.tol
        return abs(self.lhs - self.rhs) <= self.tol

    def record(self) -> dict:
        return {
            "check": self.check,
            "params": self.params,
            "lhs": float(self.lhs),
            "rhs": float(self.rhs),
            "slack": self.slack,
            "pass": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.record(), sort_keys=False, default=_json_default)


def _json_default(o):
    if isinstance(o, (np.integer,)):
        return int(o)
    if isinstance(o, (np.floating,)):
        return float(o)
    if isinstance(o, Fraction):
        return str(o)
    if isinstance(o, complex):
        return [o.real, o.imag]
    raise TypeError(type(o))


def all_passed(checks) -> bool:
    return all(c.passed for c in checks)


def _delta(x, y) -> float:
    return float(np.max(np.abs(np.asarray(x) - np.asarray(y)), initial=0.0))


def moyal_values(calc, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return calc.dequantize_array(calc.quantize_array(a) @ calc.quantize_array(b))


# ---------------------------------------------------------------------------
# operator-norm bound, Young exponents and bounds


def op_norm_bound_check(a, window, system=None, tol: float = TOL) -> Check:
    """``||Op(a)||_2 <= ||a||_{M^{inf,1}}``."""
    calc, v = resolve(a, system)
    T = calc.quantize_array(v)
    opnorm = float(np.linalg.norm(T, 2))
    mod = sym_mod_norm(v, window, INF, 1, calc)
    return Check("op_norm_bound", opnorm, mod, "le", tol)


def young_exponents(p1, q1, p2, q2) -> tuple:
    """Solve ``1/p = 1/p1 + 1/p2`` and ``1/q = 1/q1 + 1/q2 - 1`` exactly.

    Raises
    ------
    ExponentError
        If either solution falls outside ``[1, inf]``; the message names the
        violated relation.
    """
    rp = recip(p1) + recip(p2)
    rq = recip(q1) + recip(q2) - 1
    if rp > 1:
        raise ExponentError(f"1/p = 1/p1 + 1/p2 = {rp} > 1, so p < 1")
    if rq < 0:
        raise ExponentError(f"1/q = 1/q1 + 1/q2 - 1 = {rq} < 0, so q would exceed inf")
    if rq > 1:
        raise ExponentError(f"1/q = 1/q1 + 1/q2 - 1 = {rq} > 1, so q < 1")
    return from_recip(rp), from_recip(rq)


@dataclass(frozen=True)
class ExponentPair:
    """Young exponent tuple ``(p1, q1), (p2, q2) -> (p, q)``."""

    p1: float
    q1: float
    p2: float
    q2: float

    def __post_init__(self):
        for name in ("p1", "q1", "p2", "q2"):
            object.__setattr__(self, name, parse_exponent(getattr(self, name)))

    @property
    def target(self) -> tuple:
        return young_exponents(self.p1, self.q1, self.p2, self.q2)

    def params(self) -> dict:
        p, q = self.target
        return {k: fmt_exponent(v) for k, v in zip(("p1", "q1", "p2", "q2", "p", "q"), (self.p1, self.q1, self.p2, self.q2, p, q))}


def young_bound_check(a1, a2, window, exponents: ExponentPair | tuple, system=None, tol: float = TOL) -> list[Check]:
    """Young-type bound for the Moyal product and its pointwise convolution step."""
    if not isinstance(exponents, ExponentPair):
        exponents = ExponentPair(*exponents)
    p, q = exponents.target
    calc, v1 = resolve(a1, system)
    _, v2 = resolve(a2, calc)
    T12 = calc.quantize_array(v1) @ calc.quantize_array(v2)
    G1 = symbol_table(v1, window, calc)
    G2 = symbol_table(v2, window, calc)
    G12 = operator_table(T12, window, calc)
    n1 = G1.norm(exponents.p1, exponents.q1)
    n2 = G2.norm(exponents.p2, exponents.q2)
    n12 = G12.norm(p, q)
    b12 = G12.profile(p)
    conv = weighted_convolution(G1.profile(exponents.p1), G2.profile(exponents.p2), calc.t, calc.w)
    params = exponents.params()
    return [
        Check("young_bound", n12, n1 * n2, "le", tol, params),
        Check("young_convolution_domination", float(np.max(b12 - conv)), 0.0, "le", tol, params),
    ]


def submultiplicativity_check(a, b, window, system=None, tol: float = TOL) -> Check:
    """``||a # b||_{M^{inf,1}} <= ||a||_{M^{inf,1}} ||b||_{M^{inf,1}}``."""
    c = young_bound_check(a, b, window, (INF, 1, INF, 1), system, tol)[0]
    c.check = "sjostrand_submultiplicative"
    return c


def involution_check(a, window, b=None, system=None, tol: float = TOL) -> list[Check]:
    """Involution ``a -> conj(a)``: adjoint compatibility, isometry and anti-multiplicativity."""
    calc, v = resolve(a, system)
    T = calc.quantize_array(v)
    out = [
        Check("involution_adjoint", _delta(calc.quantize_array(np.conj(v)), T.conj().T), 0.0, "eq", tol),
        Check(
            "involution_isometry",
            sym_mod_norm(np.conj(v), window, INF, 1, calc),
            sym_mod_norm(v, window, INF, 1, calc),
            "eq",
            tol,
        ),
    ]
    if b is not None:
        _, u = resolve(b, calc)
        lhs = np.conj(moyal_values(calc, v, u))
        rhs = moyal_values(calc, np.conj(u), np.conj(v))
        out.append(Check("involution_antimultiplicative", _delta(lhs, rhs), 0.0, "eq", tol))
    return out


# ---------------------------------------------------------------------------
# unitalization


@dataclass(frozen=True, eq=False)
class UnitalSymbol:
    """``alpha * 1 + a00`` with norm ``|alpha| + ||a00||_{M^{inf,1}}``."""

    alpha: complex
    a00: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        v = self.a00.values if isinstance(self.a00, SymbolGrid) else self.a00
        v = np.array(np.asarray(v, dtype=np.complex128).reshape(-1), copy=True)
        v.setflags(write=False)
        object.__setattr__(self, "a00", v)

    @classmethod
    def from_symbol(cls, a) -> "UnitalSymbol":
        """Split by the mean convention: ``alpha`` is the mean over Xi*."""
        v = a.values if isinstance(a, SymbolGrid) else np.asarray(a, dtype=np.complex128).reshape(-1)
        m = complex(v.mean())
        return cls(m, v - m)

    def total(self) -> np.ndarray:
        return self.alpha + self.a00

    def norm(self, window, system) -> float:
        return abs(self.alpha) + sym_mod_norm(self.a00, window, INF, 1, system)

    def mul(self, other: "UnitalSymbol", system) -> "UnitalSymbol":
        """``(alpha beta) 1 + (alpha b00 + beta a00 + a00 # b00)``."""
        prod = moyal_values(system, self.a00, other.a00)
        return UnitalSymbol(self.alpha * other.alpha, self.alpha * other.a00 + other.alpha * self.a00 + prod)

    def to_grid(self, space) -> SymbolGrid:
        return SymbolGrid(space, self.total(), Side.ON_XI_STAR)


def unital_submultiplicative_check(u: UnitalSymbol, v: UnitalSymbol, window, system, tol: float = TOL) -> list[Check]:
    uv = u.mul(v, system)
    T = system.quantize_array(uv.total())
    Tu = system.quantize_array(u.total()) @ system.quantize_array(v.total())
    return [
        Check("unital_product_consistent", _delta(T, Tu), 0.0, "eq", tol),
        Check("unital_submultiplicative", uv.norm(window, system), u.norm(window, system) * v.norm(window, system), "le", tol),
    ]


# ---------------------------------------------------------------------------
# Wiener property: direct inversion


class NotInvertibleError(ValueError):
    """``Op(a0)`` has smallest singular value at or below the threshold."""

    def __init__(self, smin: float):
        super().__init__(f"operator not invertible: smallest singular value {smin:.3e}")
        self.smin = smin


INVERTIBLE_THRESHOLD = 1e-8


@dataclass
class InverseResult:
    b0: UnitalSymbol
    residual: float
    b00_norm: float
    smin: float
    info: dict = field(default_factory=dict)


def _check_invertible(T: np.ndarray) -> float:
    smin = float(np.linalg.svd(T, compute_uv=False).min())
    if smin <= INVERTIBLE_THRESHOLD:
        raise NotInvertibleError(smin)
    return smin


def _split_inverse(total: np.ndarray, alpha: complex) -> UnitalSymbol:
    beta = 1.0 / alpha if alpha != 0 else complex(total.mean())
    return UnitalSymbol(beta, total - beta)


def wiener_invert_direct(a0: UnitalSymbol, window, system) -> InverseResult:
    """``b0`` with ``Op(b0) = Op(a0)**-1`` from the dense inverse."""
    T = system.quantize_array(a0.total())
    smin = _check_invertible(T)
    Tinv = np.linalg.inv(T)
    total = system.dequantize_array(Tinv)
    b0 = _split_inverse(total, a0.alpha)
    res = _delta(system.quantize_array(b0.total()) @ T, np.eye(T.shape[0]))
    return InverseResult(b0, res, sym_mod_norm(b0.a00, window, INF, 1, system), smin)


def neumann_inverse(a00: np.ndarray, system, terms: int = 30) -> np.ndarray:
    """``sum_{k=0}^{terms} (-a00)^{#k}``, the inverse of ``1 + a00`` when the series converges."""
    T = system.quantize_array(-np.asarray(a00))
    D = T.shape[0]
    acc = np.eye(D, dtype=np.complex128)
    term = np.eye(D, dtype=np.complex128)
    for _ in range(terms):
        term = term @ T
        acc = acc + term
    return system.dequantize_array(acc)


# ---------------------------------------------------------------------------
# contours


def _segment_distance(p: np.ndarray, a: complex, b: complex) -> np.ndarray:
    e = b - a
    if e == 0:
        return np.abs(p - a)
    t = np.clip(((p - a) * np.conj(e)).real / abs(e) ** 2, 0.0, 1.0)
    return np.abs(p - (a + t * e))


def _winding(loop: np.ndarray, p: complex) -> int:
    z = np.asarray(loop) - p
    ang = np.angle(np.roll(z, -1) / z)
    return int(round(ang.sum() / (2 * np.pi)))


def _grade(s: np.ndarray, grading: str):
    if grading == "none":
        return s, np.ones_like(s)
    if grading == "sidi2":
        return s - np.sin(2 * np.pi * s) / (2 * np.pi), 1 - np.cos(2 * np.pi * s)
    raise ValueError(f"unknown grading {grading!r}")


@dataclass(frozen=True, eq=False)
class Contour:
    """Closed piecewise-linear path made of one or more polygon loops.

    The vertex order of each loop fixes its orientation; winding numbers are
    the sums over loops.
    """

    loops: tuple

    def __post_init__(self):
        loops = tuple(np.asarray(l, dtype=np.complex128).reshape(-1) for l in self.loops)
        for l in loops:
            if l.size < 3:
                raise ValueError("a loop needs at least three vertices")
        object.__setattr__(self, "loops", loops)

    @classmethod
    def rectangle(cls, lo: complex, hi: complex) -> "Contour":
        return cls((_rect(lo, hi),))

    @property
    def orientation(self) -> tuple:
        """``+1`` for counter-clockwise loops, ``-1`` for clockwise."""
        out = []
        for l in self.loops:
            area = 0.5 * np.sum((np.conj(l) * np.roll(l, -1)).imag)
            out.append(1 if area > 0 else -1)
        return tuple(out)

    def winding(self, p: complex) -> int:
        return sum(_winding(l, p) for l in self.loops)

    def distance(self, points) -> float:
        pts = np.atleast_1d(np.asarray(points, dtype=np.complex128))
        best = np.inf
        for l in self.loops:
            for a, b in zip(l, np.roll(l, -1)):
                best = min(best, float(_segment_distance(pts, a, b).min()))
        return best

    def nodes(self, n: int, grading: str = "sidi2") -> tuple[np.ndarray, np.ndarray]:
        """Composite trapezoid nodes and weights (for ``dz``) with ``n`` panels per edge."""
        s = np.arange(n + 1) / n
        t, dt = _grade(s, grading)
        tw = np.full(n + 1, 1.0 / n)
        tw[0] = tw[-1] = 0.5 / n
        zs, ws = [], []
        for l in self.loops:
            E = np.roll(l, -1) - l
            z = l[:, None] + E[:, None] * t[None, :]
            w = E[:, None] * (tw * dt)[None, :]
            # merge each edge's end point with the next edge's start point
            zs.append(z[:, :-1].ravel())
            wl = w[:, :-1].copy()
            wl[:, 0] += np.roll(w[:, -1], 1)
            ws.append(wl.ravel())
        return np.concatenate(zs), np.concatenate(ws)

    def validate(self, eigenvalues, excluded=0.0, margin: float = 1e-6) -> None:
        """Raise :class:`ContourError` unless every eigenvalue has winding 1 and ``excluded`` winding 0."""
        ev = np.atleast_1d(np.asarray(eigenvalues, dtype=np.complex128))
        dist = self.distance(ev)
        if dist < margin:
            raise ContourError(f"contour passes within {dist:.3e} of the spectrum")
        if self.distance([excluded]) < margin:
            raise ContourError(f"contour passes through the excluded point {excluded}")
        bad = [complex(e) for e in ev if self.winding(e) != 1]
        if bad:
            raise ContourError(f"eigenvalues not surrounded once: {bad[:4]}")
        if self.winding(excluded) != 0:
            raise ContourError(f"excluded point {excluded} lies inside the contour")


class ContourError(ValueError):
    """Contour too close to the spectrum or with wrong winding numbers."""


def _rect(lo: complex, hi: complex) -> np.ndarray:
    return np.array([complex(lo.real, lo.imag), complex(hi.real, lo.imag), complex(hi.real, hi.imag), complex(lo.real, hi.imag)])


def default_contour(eigenvalues, margin_fraction: float = 0.1) -> Contour:
    """Rectangle around the spectrum's bounding box, notched around 0 if needed.

    The margin is ``margin_fraction`` times the spectral radius. When 0 falls
    inside the rectangle a clockwise square around 0 is added, sized to stay
    clear of every eigenvalue.
    """
    ev = np.atleast_1d(np.asarray(eigenvalues, dtype=np.complex128))
    rho = float(np.abs(ev).max())
    if rho == 0:
        raise ContourError("spectrum is {0}")
    m = margin_fraction * rho
    lo = complex(ev.real.min() - m, ev.imag.min() - m)
    hi = complex(ev.real.max() + m, ev.imag.max() + m)
    outer = _rect(lo, hi)
    loops = [outer]
    d_outer = Contour((outer,)).distance([0.0])
    if _winding(outer, 0.0) != 0:
        r = 0.5 * min(float(np.abs(ev).min()), d_outer) / math.sqrt(2)
        if r <= 0:
            raise ContourError("0 is an eigenvalue")
        loops.append(_rect(complex(-r, -r), complex(r, r))[::-1])
    elif d_outer < 1e-6:
        raise ContourError("0 lies on the default rectangle; pass an explicit contour")
    return Contour(tuple(loops))


@dataclass
class ContourInverse:
    b0: UnitalSymbol
    residual: float
    levels: list
    differences: list
    observed_order: float
    info: dict = field(default_factory=dict)

    @property
    def converged(self) -> bool:
        return bool(self.differences) and self.differences[-1] <= self.info.get("conv_tol", 1e-6)


def wiener_invert_contour(
    a0: UnitalSymbol,
    window,
    system,
    contour: Contour | None = None,
    nodes: int = 256,
    grading: str = "sidi2",
    conv_tol: float = 1e-6,
) -> ContourInverse:
    """``b0 = (1/2 pi i) int_gamma z**-1 (z - Op(a0))**-1 dz``, dequantized once.

    The operator integral is assembled first and dequantized afterwards
    (dequantization is linear). The scalar part uses the same quadrature on
    ``z**-1 (z - alpha)**-1``. The same integral at ``nodes/4`` and
    ``nodes/2`` panels per edge gives the convergence report and the observed
    order.
    """
    if nodes < 4 or nodes % 4:
        raise ValueError("nodes must be a positive multiple of 4")
    T = system.quantize_array(a0.total())
    _check_invertible(T)
    ev = np.linalg.eigvals(T)
    contour = contour or default_contour(ev)
    contour.validate(ev, excluded=0.0)
    alpha = a0.alpha
    if contour.distance([alpha]) < 1e-6:
        raise ContourError("contour passes through alpha")
    D = T.shape[0]
    z, _ = contour.nodes(nodes, grading)
    R = np.linalg.inv(z[:, None, None] * np.eye(D) - T[None, :, :])
    levels = []
    totals = []
    for n in (nodes // 4, nodes // 2, nodes):
        zn, wn = contour.nodes(n, grading)
        idx = _subset_index(contour, nodes, n)
        c = wn / zn / (2j * np.pi)
        S = np.tensordot(c, R[idx], axes=(0, 0))
        scalar = complex(np.sum(c / (zn - alpha)))
        totals.append((S, scalar))
        levels.append(n)
    diffs = [float(np.linalg.norm(totals[i + 1][0] - totals[i][0])) for i in range(2)]
    order = math.log2(diffs[0] / diffs[1]) if diffs[1] > 0 and diffs[0] > 0 else INF
    S, beta = totals[-1]
    total = system.dequantize_array(S)
    b0 = UnitalSymbol(beta, total - beta)
    res = _delta(system.quantize_array(b0.total()) @ T, np.eye(D))
    return ContourInverse(
        b0, res, levels, diffs, order, {"conv_tol": conv_tol, "grading": grading, "nodes": nodes, "loops": len(contour.loops)}
    )


def _subset_index(contour: Contour, n_fine: int, n: int) -> np.ndarray:
    """Positions of the ``n``-panel nodes inside the ``n_fine``-panel node list."""
    step = n_fine // n
    out = []
    offset = 0
    for l in contour.loops:
        k = l.size
        base = offset + np.arange(k)[:, None] * n_fine + np.arange(0, n_fine, step)[None, :]
        out.append(base.ravel())
        offset += k * n_fine
    return np.concatenate(out)


def wiener_check(a0: UnitalSymbol, window, system, nodes: int = 256, tol_agree: float = 1e-6, tol_res: float = 1e-9) -> list[Check]:
    """Direct and contour inverses, their agreement and the Moyal residual."""
    direct = wiener_invert_direct(a0, window, system)
    cont = wiener_invert_contour(a0, window, system, nodes=nodes)
    w = system.w
    agree = float(np.sqrt(w * np.sum(np.abs(direct.b0.total() - cont.b0.total()) ** 2)))
    prod = moyal_values(system, direct.b0.total(), a0.total())
    moyal_res = float(np.sqrt(w * np.sum(np.abs(prod - 1.0) ** 2)))
    params = {
        "nodes": nodes,
        "observed_order": cont.observed_order,
        "alpha": [a0.alpha.real, a0.alpha.imag],
        "b00_norm": direct.b00_norm,
        "smin": direct.smin,
    }
    return [
        Check("wiener_direct_inverse", direct.residual, 0.0, "eq", tol_res, params),
        Check("wiener_contour_vs_direct", agree, tol_agree, "le", 0.0, params),
        Check("wiener_moyal_residual", moyal_res, tol_res, "le", 0.0, params),
    ]


# ---------------------------------------------------------------------------
# subalgebras M^{p,1}


def subalgebra_check_p1(a1, a2, window, p, system=None, tol: float = TOL) -> list[Check]:
    """``M^{p,1} # M^{p,1} -> M^{p/2,1}``, then ``M^{p/2,1} -> M^{p,1} -> M^{inf,1}``.

    The embedding constants are the weighted nesting constants
    ``w**(1/p - 2/p)`` and ``w**(-1/p)`` with ``w`` the point mass.
    """
    p = parse_exponent(p)
    if p < 2:
        raise ExponentError(f"need p >= 2 so that p/2 >= 1, got p = {p}")
    half = p / 2
    calc, v1 = resolve(a1, system)
    _, v2 = resolve(a2, calc)
    G1 = symbol_table(v1, window, calc)
    G2 = symbol_table(v2, window, calc)
    G12 = operator_table(calc.quantize_array(v1) @ calc.quantize_array(v2), window, calc)
    n1, n2 = G1.norm(p, 1), G2.norm(p, 1)
    n_half = G12.norm(half, 1)
    n_p = G12.norm(p, 1)
    n_inf = G12.norm(INF, 1)
    w = calc.w
    c_embed = w ** float(recip(p) - recip(half))
    c_inf = w ** float(-recip(p))
    params = {"p": fmt_exponent(p), "norm_p1_a1": n1, "norm_p1_a2": n2, "norm_half_prod": n_half, "norm_p_prod": n_p, "norm_inf_prod": n_inf}
    return [
        Check("subalgebra_young", n_half, n1 * n2, "le", tol, params),
        Check("subalgebra_embedding", n_p, c_embed * n_half, "le", tol, {**params, "C": c_embed}),
        Check("subalgebra_inclusion", n_inf, c_inf * n_p, "le", tol, {**params, "C": c_inf}),
    ]


def window_equivalence(symbols, window1, window2, system=None) -> dict:
    """Sjöstrand norms under two windows; reports ``C`` with ratios in ``[1/C, C]``."""
    ratios = []
    for a in symbols:
        calc, v = resolve(a, system)
        r1 = sym_mod_norm(v, window1, INF, 1, calc)
        r2 = sym_mod_norm(v, window2, INF, 1, calc)
        if r1 > 0 and r2 > 0:
            ratios.append(r2 / r1)
    ratios = np.array(ratios)
    C = float(max(ratios.max(), 1 / ratios.min())) if ratios.size else 1.0
    return {"C": C, "min_ratio": float(ratios.min(initial=np.inf)), "max_ratio": float(ratios.max(initial=0.0)), "count": int(ratios.size)}
