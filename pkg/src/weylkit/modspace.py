"""Mixed norms, modulation norms and the Gabor-matrix profiles behind them.

Vector side: ``||f||_{M^{p,q}} = ||A_phi f||_{L^{p,q}(Xi1 x Xi2)}`` with the
inner integral over ``Xi2`` (exponent p) and the outer over ``Xi1`` (exponent
q).

Symbol side: the table ``G(X1, X2) = <Op(a) phi_X1, phi_{X1+X2}>`` is normed
with the inner integral over ``X1`` (exponent r) and the outer over ``X2``
(exponent s), both with point mass ``N**-d``. The profile
``beta_{a,r}(X2) = ||G(., X2)||_{L^r}`` is the smallest dominating function,
so ``||a||_{M^{r,s}} = ||beta_{a,r}||_{L^s}``.

Exponents are ``int``, ``float``, :class:`fractions.Fraction` or ``math.inf``
(also the strings ``"inf"`` / ``"∞"``); reciprocals are exact with
``1/inf = 0``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .phase_space import DimensionError, FinitePhaseSpace, SymbolGrid
from .weyl_core import WeylSystem, Window

INF = math.inf


class ExponentError(ValueError):
    """Exponent outside ``[1, inf]`` or an infeasible exponent relation."""


def parse_exponent(p) -> float:
    """Validate an exponent and return it as a float (``inf`` allowed)."""
    if isinstance(p, str):
        s = p.strip().lower()
        if s in ("inf", "infinity", "∞", "oo"):
            return INF
        try:
            p = Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise ExponentError(f"not an exponent: {p!r}") from exc
    try:
        v = float(p)
    except (TypeError, ValueError) as exc:
        raise ExponentError(f"not an exponent: {p!r}") from exc
    if math.isnan(v) or v < 1:
        raise ExponentError(f"exponent must lie in [1, inf], got {p!r}")
    return v


def recip(p) -> Fraction:
    """Exact ``1/p`` with ``1/inf = 0``."""
    v = parse_exponent(p)
    if v == INF:
        return Fraction(0)
    if isinstance(p, str):
        return 1 / Fraction(p.strip())
    if isinstance(p, (Fraction, int, np.integer)):
        return 1 / Fraction(p)
    return 1 / Fraction(v).limit_denominator(10**9)


def from_recip(r: Fraction) -> float:
    return INF if r == 0 else float(1 / r)


def conjugate_exponent(p) -> float:
    """Hölder conjugate ``p'`` with ``1/p + 1/p' = 1``."""
    return from_recip(1 - recip(p))


def fmt_exponent(p) -> str | float:
    p = parse_exponent(p)
    if p == INF:
        return "inf"
    return int(p) if p.is_integer() else p


# ---------------------------------------------------------------------------
# weighted L^p norms


def lp_norm(values: np.ndarray, p, weight: float = 1.0, axis=None) -> np.ndarray:
    """``(sum weight |v|**p) ** (1/p)``; ``p = inf`` gives the weight-free max."""
    p = parse_exponent(p)
    v = np.abs(values)
    if p == INF:
        return np.max(v, axis=axis, initial=0.0)
    if p == 1:
        return weight * np.sum(v, axis=axis)
    if p == 2:
        return np.sqrt(weight * np.sum(v * v, axis=axis))
    return (weight * np.sum(v**p, axis=axis)) ** (1.0 / p)


@dataclass(frozen=True)
class SplitSpec:
    """Decomposition ``Xi = Xi1 + Xi2`` by coordinate axes with per-factor weights.

    Axes ``0..d-1`` are the positions and ``d..2d-1`` the frequencies. The
    default puts positions in ``Xi1`` and frequencies in ``Xi2`` and splits
    the point mass evenly, ``w1 = w2 = N**(-d/2)``.
    """

    space: FinitePhaseSpace
    axes1: tuple = None
    axes2: tuple = None
    w1: float = None
    w2: float = None

    def __post_init__(self):
        d = self.space.d
        a1 = tuple(range(d)) if self.axes1 is None else tuple(int(a) for a in self.axes1)
        a2 = tuple(a for a in range(2 * d) if a not in a1) if self.axes2 is None else tuple(int(a) for a in self.axes2)
        if sorted(a1 + a2) != list(range(2 * d)):
            raise ValueError(f"axes {a1} and {a2} do not partition range({2 * d})")
        object.__setattr__(self, "axes1", a1)
        object.__setattr__(self, "axes2", a2)
        w = self.space.w
        w1 = self.w1
        w2 = self.w2
        if w1 is None and w2 is None:
            w1 = w2 = math.sqrt(w)
        elif w1 is None:
            w1 = w / w2
        elif w2 is None:
            w2 = w / w1
        if not math.isclose(w1 * w2, w, rel_tol=1e-12):
            raise ValueError(f"w1 * w2 must equal N**-d = {w}")
        object.__setattr__(self, "w1", float(w1))
        object.__setattr__(self, "w2", float(w2))

    def arrange(self, table: np.ndarray) -> np.ndarray:
        """Reshape a flat table on Xi into ``[Xi1, Xi2]``."""
        t = np.asarray(table).reshape(self.space.shape)
        N = self.space.N
        return np.transpose(t, self.axes1 + self.axes2).reshape(N ** len(self.axes1), N ** len(self.axes2))


def mixed_norm(F: np.ndarray, split: SplitSpec | None, p, q) -> float:
    """``(sum_{Xi1} w1 (sum_{Xi2} w2 |F|**p) ** (q/p)) ** (1/q)``.

    Parameters
    ----------
    F : ndarray
        A flat table on Xi (with ``split``) or an explicit 2-D array
        ``[Xi1, Xi2]`` with unit weights (``split=None``).
    split : SplitSpec or None
    p, q : exponent
        Inner (over ``Xi2``) and outer (over ``Xi1``) exponents.
    """
    p = parse_exponent(p)
    q = parse_exponent(q)
    if split is None:
        M = np.asarray(F)
        if M.ndim != 2:
            raise DimensionError("without a split the table must be 2-D")
        w1 = w2 = 1.0
    else:
        M = split.arrange(F)
        w1, w2 = split.w1, split.w2
    inner = lp_norm(M, p, w2, axis=1)
    return float(lp_norm(inner, q, w1))


def vec_mod_norm(f, window: Window, p, q, split: SplitSpec | None = None, system: WeylSystem | None = None) -> float:
    """``||f||_{M^{p,q}_phi} = ||A_phi f||_{L^{p,q}}``."""
    ws = system or WeylSystem(window.space)
    split = split or SplitSpec(window.space)
    return mixed_norm(ws.ambiguity(f, window), split, p, q)


# ---------------------------------------------------------------------------
# symbol side


def resolve(a, system=None):
    """Return ``(calculus, flat symbol values)``.

    ``a`` is a :class:`SymbolGrid` (the calculus defaults to the finite Weyl
    system of its space) or a flat array, in which case ``system`` must be
    given. Any object offering ``w``, ``P``, ``D``, ``t``, ``quantize_array``,
    ``dequantize_array`` and ``bank`` serves as a calculus.
    """
    if isinstance(a, SymbolGrid):
        ws = system or WeylSystem(a.space)
        return ws, ws.symbol_values(a)
    if system is None:
        raise TypeError("a raw symbol array needs an explicit calculus")
    v = np.asarray(a, dtype=np.complex128).reshape(-1)
    if v.size != system.P:
        raise DimensionError(f"expected {system.P} symbol values, got {v.size}")
    return system, v


@dataclass(frozen=True, eq=False)
class SymbolCoeffTable:
    """``G(X1, X2) = <Op(a) phi_X1, phi_{X1 + X2}>``, shape ``(P, P)``.

    ``w`` is the phase-space point mass used by the symbol-side norms.
    """

    values: np.ndarray
    w: float
    window: object = field(default=None, repr=False)

    def profile(self, p) -> np.ndarray:
        return lp_norm(self.values, p, self.w, axis=0)

    def norm(self, r, s) -> float:
        return float(lp_norm(self.profile(r), s, self.w))


def coeff_table(calc, T: np.ndarray, window) -> np.ndarray:
    """``C(X, Y) = <T phi_X, phi_Y>`` for an operator matrix ``T``."""
    B = calc.bank(window)
    return (B @ T.T) @ np.conj(B).T


def coeff_to_symbol_table(C: np.ndarray, tables) -> np.ndarray:
    """Reindex ``C(X, Y)`` into ``G(X1, X2) = C(X1, X1 + X2)``."""
    return kernels.row_gather(np.ascontiguousarray(C), tables.phase_add)


def symbol_table(a, window, system=None) -> SymbolCoeffTable:
    calc, v = resolve(a, system)
    C = coeff_table(calc, calc.quantize_array(v), window)
    return SymbolCoeffTable(coeff_to_symbol_table(C, calc.t), calc.w, window)


def operator_table(T: np.ndarray, window, calc) -> SymbolCoeffTable:
    """Symbol table of ``dequantize(T)`` computed straight from the operator."""
    C = coeff_table(calc, T, window)
    return SymbolCoeffTable(coeff_to_symbol_table(C, calc.t), calc.w, window)


def beta_profile(a, window, p, system=None) -> np.ndarray:
    """``beta_{a,p}(X2) = ||G(., X2)||_{L^p}``; the sup over ``X1`` when ``p = inf``."""
    G = a if isinstance(a, SymbolCoeffTable) else symbol_table(a, window, system)
    return G.profile(p)


def sym_mod_norm(a, window, r, s, system=None) -> float:
    """``||a||_{M^{r,s}}``: inner exponent r over ``X1``, outer s over ``X2``."""
    G = a if isinstance(a, SymbolCoeffTable) else symbol_table(a, window, system)
    return G.norm(r, s)


def sjostrand_norm(a, window, system=None) -> float:
    """``||a||_{M^{inf,1}}``."""
    return sym_mod_norm(a, window, INF, 1, system)


def weighted_convolution(b1: np.ndarray, b2: np.ndarray, tables, w: float) -> np.ndarray:
    """``(b1 * b2)(X) = sum_Y w b1(Y) b2(X - Y)`` over the phase-space group."""
    return w * np.sum(b1[None, :] * b2[tables.phase_sub], axis=1)


def in_dominating_class(G: SymbolCoeffTable, beta: np.ndarray, p, atol: float = 0.0) -> bool:
    """Whether ``||G(., X)||_{L^p} <= beta(X)`` for all X."""
    return bool(np.all(G.profile(p) <= np.asarray(beta) + atol))


def in_diagonal_class(C: np.ndarray, beta: np.ndarray, tables, atol: float = 0.0) -> bool:
    """Whether ``|C(X1, X2)| <= beta(X1 - X2)`` for all pairs.

    The smallest such ``beta`` is the reflection ``X -> beta_{a,inf}(-X)`` of
    the profile returned by :func:`beta_profile`; the two have equal norms.
    """
    diff = tables.phase_sub
    return bool(np.all(np.abs(C) <= np.asarray(beta)[diff] + atol))


# ---------------------------------------------------------------------------
# reproducing kernel and embedding chain


def reproducing_kernel(window: Window, system: WeylSystem | None = None) -> np.ndarray:
    """``R(X, Y) = <phi_X, phi_Y>``, shape ``(P, P)``."""
    ws = system or WeylSystem(window.space)
    B = ws.bank(window)
    return B @ np.conj(B).T


def reproduce(A: np.ndarray, R: np.ndarray, space: FinitePhaseSpace) -> np.ndarray:
    """``X -> sum_Y N**-d conj(R(X, Y)) A(Y)``, the pairing ``(A | R(X, .))``."""
    return space.w * (np.conj(R) @ A)


def reproducing_residual(f, window: Window, system: WeylSystem | None = None, R=None) -> float:
    """Max ``|A f - (A f | R(X, .))|`` relative to ``max |A f|``."""
    ws = system or WeylSystem(window.space)
    R = reproducing_kernel(window, ws) if R is None else R
    A = ws.ambiguity(f, window)
    scale = max(float(np.max(np.abs(A))), 1e-300)
    return float(np.max(np.abs(A - reproduce(A, R, window.space)))) / scale


def kernel_sup(R: np.ndarray, split: SplitSpec, p, q) -> float:
    """``sup_X ||R(X, .)||_{L^{p,q}}``."""
    return max(mixed_norm(R[i], split, p, q) for i in range(R.shape[0]))


@dataclass
class EmbeddingReport:
    p: float
    q: float
    lhs: float
    norm_pq: float
    kernel_constant: float

    @property
    def rhs(self) -> float:
        return self.norm_pq * self.kernel_constant

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    def ok(self, tol: float = 1e-10) -> bool:
        return self.slack >= -tol * max(1.0, self.rhs)


def embedding_bound(f, window: Window, p, q, split: SplitSpec | None = None, system=None, R=None) -> EmbeddingReport:
    """Hölder step ``sup |A f| <= ||A f||_{L^{p,q}} sup_X ||R(X, .)||_{L^{p',q'}}``."""
    ws = system or WeylSystem(window.space)
    split = split or SplitSpec(window.space)
    R = reproducing_kernel(window, ws) if R is None else R
    A = ws.ambiguity(f, window)
    K = kernel_sup(R, split, conjugate_exponent(p), conjugate_exponent(q))
    return EmbeddingReport(parse_exponent(p), parse_exponent(q), float(np.max(np.abs(A))), mixed_norm(A, split, p, q), K)


def nesting_constant(p1, q1, p2, q2, split: SplitSpec) -> float:
    """``C`` with ``||F||_{p2,q2} <= C ||F||_{p1,q1}`` when ``p1 <= p2`` and ``q1 <= q2``.

    Uses ``||g||_{L^{p2}(w)} <= w**(1/p2 - 1/p1) ||g||_{L^{p1}(w)}`` for a
    counting measure of point mass ``w``, once per factor.
    """
    if parse_exponent(p1) > parse_exponent(p2) or parse_exponent(q1) > parse_exponent(q2):
        raise ExponentError("need p1 <= p2 and q1 <= q2")
    e2 = float(recip(p2) - recip(p1))
    e1 = float(recip(q2) - recip(q1))
    return split.w2**e2 * split.w1**e1


def monotonicity_constant(p1, q1, p2, q2, split: SplitSpec, R=None) -> float:
    """Computed constant for ``M^{p1,q1} -> M^{p2,q2}``.

    For the target ``(inf, inf)`` with a kernel available the reproducing
    bound is used when it is sharper than plain nesting.
    """
    C = nesting_constant(p1, q1, p2, q2, split)
    if R is not None and parse_exponent(p2) == INF and parse_exponent(q2) == INF:
        C = min(C, kernel_sup(R, split, conjugate_exponent(p1), conjugate_exponent(q1)))
    return C


def norm_report(kind: str, p, q, value: float, window: Window) -> str:
    """One JSON object describing a computed norm."""
    return json.dumps(
        {
            "norm": f"M^{fmt_exponent(p)},{fmt_exponent(q)}",
            "side": kind,
            "p": fmt_exponent(p),
            "q": fmt_exponent(q),
            "value": value,
            "window": window.label,
            "N": window.space.N,
            "d": window.space.d,
        }
    )
