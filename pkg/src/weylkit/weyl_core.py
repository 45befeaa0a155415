"""Finite Weyl system on ``H = C^{N^d}`` and the Weyl calculus built on it.

The family

    (pi(x, xi) f)(t) = exp(-2 pi i h xi.x / N) exp(2 pi i xi.t / N) f(t - x),

with ``h = (N + 1) / 2``, is a projective representation of ``Z_N^{2d}``:
``pi(X)* = pi(-X)``, ``tr pi(X) = N**d [X = 0]`` and
``pi(X) pi(Y) = exp(2 pi i h sigma(X, Y) / N) pi(X + Y)``. Every identity used
here involves only the operators ``pi(X)`` themselves, so the central phases
of a genuine group representation never enter.

Quantization is ``Op(a) = sum_X N**-d a_check(X) pi(X)``. Inner products are
linear in the first slot: ``<f, g> = sum_t f(t) conj(g(t))``.
"""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import kernels
from .phase_space import (
    DimensionError,
    FinitePhaseSpace,
    PhasePoint,
    Side,
    SideError,
    SymbolGrid,
    fourier_array,
    sym_fourier,
)


class ConsistencyError(RuntimeError):
    """An internal identity that must hold by construction failed."""


@dataclass(frozen=True, eq=False)
class StateVector:
    """Element of ``H = C^{N^d}``, indexed row-major over ``Z_N^d``."""

    space: FinitePhaseSpace
    values: np.ndarray

    def __post_init__(self):
        v = np.array(np.asarray(self.values, dtype=np.complex128).reshape(-1), copy=True)
        if v.size != self.space.dim:
            raise DimensionError(f"expected {self.space.dim} entries, got {v.size}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def norm(self) -> float:
        return float(np.linalg.norm(self.values))

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)


def _vec(f, space: FinitePhaseSpace) -> np.ndarray:
    if isinstance(f, (StateVector, Window)):
        space.check_same(f.space)
        return np.asarray(f.values if isinstance(f, StateVector) else f.phi)
    v = np.asarray(f, dtype=np.complex128).reshape(-1)
    if v.size != space.dim:
        raise DimensionError(f"expected a vector of length {space.dim}, got {v.size}")
    return v


def _symbol(a: SymbolGrid, space: FinitePhaseSpace) -> np.ndarray:
    if not isinstance(a, SymbolGrid):
        raise TypeError("expected a SymbolGrid")
    space.check_same(a.space)
    if a.side is not Side.ON_XI_STAR:
        raise SideError("symbols live on Xi*")
    return a.values


def random_state(space: FinitePhaseSpace, rng: np.random.Generator, normalize: bool = False) -> np.ndarray:
    v = rng.standard_normal(space.dim) + 1j * rng.standard_normal(space.dim)
    return v / np.linalg.norm(v) if normalize else v


# ---------------------------------------------------------------------------
# windows


class WindowKind(enum.Enum):
    DISCRETE_GAUSSIAN = "DiscreteGaussian"
    CUSTOM = "Custom"


def discrete_gaussian(N: int, d: int = 1, wraps: int = 3) -> np.ndarray:
    """Periodized Gaussian ``sum_{|k| <= wraps} exp(-pi (t + kN)**2 / N)``.

    For ``d > 1`` the tensor product of the one-dimensional profile is used.
    The result is normalized to unit 2-norm.
    """
    t = np.arange(N)[:, None] + N * np.arange(-wraps, wraps + 1)[None, :]
    g = np.exp(-np.pi * t.astype(float) ** 2 / N).sum(axis=1)
    v = g
    for _ in range(d - 1):
        v = np.kron(v, g)
    return (v / np.linalg.norm(v)).astype(np.complex128)


@dataclass(frozen=True, eq=False)
class Window:
    """Unit-norm window vector ``phi``."""

    space: FinitePhaseSpace
    phi: np.ndarray
    kind: WindowKind = WindowKind.CUSTOM

    def __post_init__(self):
        v = np.array(np.asarray(self.phi, dtype=np.complex128).reshape(-1), copy=True)
        if v.size != self.space.dim:
            raise DimensionError(f"window must have {self.space.dim} entries")
        if abs(np.linalg.norm(v) - 1.0) > 1e-12:
            raise ValueError("window must have unit norm (use Window.custom to normalize)")
        v.setflags(write=False)
        object.__setattr__(self, "phi", v)

    @classmethod
    def gaussian(cls, space: FinitePhaseSpace) -> "Window":
        return cls(space, discrete_gaussian(space.N, space.d), WindowKind.DISCRETE_GAUSSIAN)

    @classmethod
    def custom(cls, space: FinitePhaseSpace, vector) -> "Window":
        v = np.asarray(vector, dtype=np.complex128).reshape(-1)
        n = np.linalg.norm(v)
        if n == 0:
            raise ValueError("window must be nonzero")
        return cls(space, v / n, WindowKind.CUSTOM)

    @property
    def values(self) -> np.ndarray:
        return self.phi

    @property
    def label(self) -> str:
        return self.kind.value


# ---------------------------------------------------------------------------
# the Weyl system


class WeylSystem:
    """Weyl system and Weyl calculus on a :class:`FinitePhaseSpace`.

    Parameters
    ----------
    space : FinitePhaseSpace or int
        The phase space, or ``N`` (then ``d`` is taken from the keyword).
    """

    def __init__(self, space: FinitePhaseSpace | int, d: int = 1):
        if not isinstance(space, FinitePhaseSpace):
            space = FinitePhaseSpace(int(space), d)
        self.space = space
        self.N = space.N
        self.d = space.d
        self.D = space.dim
        self.P = space.size
        self.w = space.w
        self.half_inverse = space.half
        if (2 * self.half_inverse) % self.N != 1:
            raise ConsistencyError("2h != 1 mod N")
        self.t = space.tables

    def __repr__(self) -> str:
        return f"WeylSystem(N={self.N}, d={self.d})"

    # index helpers

    def _xy(self, X: PhasePoint) -> tuple[int, int]:
        self.space.check_same(X.space)
        i = X.index
        return i // self.D, i % self.D

    @cached_property
    def _phase_table(self) -> np.ndarray:
        """``phase[x, xi, t]`` exponent of ``pi(x, xi)[t, t - x]`` mod N."""
        dot = self.t.dot.astype(np.int64)
        h = self.half_inverse
        return np.mod(-h * dot[:, :, None] + dot[None, :, :], self.N)

    @cached_property
    def _h_dot(self) -> np.ndarray:
        # exp(2 pi i h xi.x / N) as [x, xi]
        return self.t.roots[np.mod(self.half_inverse * self.t.dot.astype(np.int64), self.N)]

    # operators

    def pi_matrix(self, X: PhasePoint) -> np.ndarray:
        """Dense matrix of ``pi(X)``."""
        x, k = self._xy(X)
        D = self.D
        M = np.zeros((D, D), dtype=np.complex128)
        rows = np.arange(D)
        M[rows, self.t.sub[rows, x]] = self.t.roots[self._phase_table[x, k]]
        return M

    def pi_matrices(self) -> np.ndarray:
        """All ``pi(X)`` stacked as ``(N**(2d), D, D)``; memory ``N**(4d)``."""
        D = self.D
        out = np.zeros((self.P, D, D), dtype=np.complex128)
        rows = np.arange(D)
        for x in range(D):
            cols = self.t.sub[rows, x]
            out[x * D : (x + 1) * D, rows, cols] = self.t.roots[self._phase_table[x]]
        return out

    def apply(self, X: PhasePoint, f) -> np.ndarray:
        """``pi(X) f``."""
        f = _vec(f, self.space)
        x, k = self._xy(X)
        rows = np.arange(self.D)
        return self.t.roots[self._phase_table[x, k]] * f[self.t.sub[rows, x]]

    heisenberg_apply = apply

    def cocycle(self, X: PhasePoint, Y: PhasePoint, atol: float = 1e-10) -> complex:
        """Scalar ``c`` with ``pi(X) pi(Y) = c pi(X + Y)``, read off the matrices.

        Raises
        ------
        ConsistencyError
            If the two sides are not proportional.
        """
        lhs = self.pi_matrix(X) @ self.pi_matrix(Y)
        rhs = self.pi_matrix(X + Y)
        c = np.vdot(rhs, lhs) / self.D
        if np.max(np.abs(lhs - c * rhs)) > atol or abs(abs(c) - 1) > atol:
            raise ConsistencyError(f"pi({X}) pi({Y}) is not a multiple of pi(X + Y)")
        return complex(c)

    def cocycle_closed(self, X: PhasePoint, Y: PhasePoint) -> complex:
        """Closed form ``exp(2 pi i h sigma(X, Y) / N)``."""
        s = self.t.sigma[X.index, Y.index]
        return complex(self.t.roots[(self.half_inverse * int(s)) % self.N])

    # coherent states and transforms

    def bank(self, window) -> np.ndarray:
        """All translated windows ``phi_X = pi(X) phi`` as rows, shape ``(P, D)``."""
        phi = _vec(window, self.space)
        D = self.D
        rows = np.arange(D)
        shifted = phi[self.t.sub[rows[None, :], rows[:, None]]]  # [x, t] = phi(t - x)
        return (self.t.roots[self._phase_table] * shifted[:, None, :]).reshape(self.P, D)

    def ambiguity(self, f, phi) -> np.ndarray:
        """``A(X) = <f, pi(X) phi>`` as a flat table on Xi."""
        f = _vec(f, self.space)
        phi = _vec(phi, self.space)
        D = self.D
        rows = np.arange(D)
        g = f[None, :] * np.conj(phi[self.t.sub[rows[None, :], rows[:, None]]])  # [x, t]
        shape = (D,) + (self.N,) * self.d
        G = np.fft.fftn(g.reshape(shape), axes=tuple(range(1, self.d + 1))).reshape(D, D)
        return (self._h_dot * G).reshape(-1)

    def ambiguity_table(self, f, phi) -> "AmbiguityTable":
        return AmbiguityTable(self.space, self.ambiguity(f, phi))

    def wigner(self, f, phi) -> SymbolGrid:
        """Cross-Wigner distribution ``W(f, phi) = sym_fourier(A_phi f)``."""
        return sym_fourier(SymbolGrid(self.space, self.ambiguity(f, phi), Side.ON_XI))

    # quantization

    @cached_property
    def _mid(self) -> np.ndarray:
        return self.t.scale(self.half_inverse)[self.t.add]

    @cached_property
    def _deq_rows(self) -> tuple[np.ndarray, np.ndarray]:
        # row = y + h x, col = y + (h - 1) x, indexed [y, x]
        t = self.t
        r = t.add[:, t.scale(self.half_inverse)]
        c = t.add[:, t.scale(self.half_inverse - 1)]
        return r, c

    def _freq_axes(self, lead: int) -> tuple:
        return tuple(range(lead, lead + self.d))

    def quantize_array(self, a: np.ndarray) -> np.ndarray:
        """Weyl kernel ``Op[t, s] = N**-d sum_eta a(h(t+s), eta) w**(eta.(t-s))``.

        ``a`` may carry leading batch axes; the last axis is the flat symbol.
        """
        a = np.asarray(a, dtype=np.complex128)
        lead = a.shape[:-1]
        D, N = self.D, self.N
        A = a.reshape(lead + (D,) + (N,) * self.d)
        B = np.fft.ifftn(A, axes=self._freq_axes(len(lead) + 1)) * D
        B = B.reshape(lead + (D, D))
        return self.w * B[..., self._mid, self.t.sub]

    def quantize(self, a: SymbolGrid) -> np.ndarray:
        """``Op(a) = sum_X N**-d a_check(X) pi(X)`` as a dense matrix."""
        return self.quantize_array(_symbol(a, self.space))

    def quantize_sum(self, a: SymbolGrid) -> np.ndarray:
        """Literal sum over ``pi(X)`` matrices; an O(N**(4d)) oracle for :meth:`quantize`."""
        ac = fourier_array(_symbol(a, self.space), self.space, "direct")
        return self.w * np.tensordot(ac, self.pi_matrices(), axes=(0, 0))

    def dequantize_array(self, T: np.ndarray) -> np.ndarray:
        """Inverse Weyl kernel ``a(y, eta) = sum_x w**(-eta.x) T[y + h x, y + (h-1) x]``."""
        T = np.asarray(T, dtype=np.complex128)
        lead = T.shape[:-2]
        if T.shape[-2:] != (self.D, self.D):
            raise DimensionError(f"expected {self.D} x {self.D} operator(s)")
        r, c = self._deq_rows
        vals = T[..., r, c]  # [..., y, x]
        vals = vals.reshape(lead + (self.D,) + (self.N,) * self.d)
        out = np.fft.fftn(vals, axes=self._freq_axes(len(lead) + 1))
        return out.reshape(lead + (self.P,))

    def dequantize(self, T: np.ndarray) -> SymbolGrid:
        """Symbol ``a`` with ``Op(a) = T``."""
        return SymbolGrid(self.space, self.dequantize_array(T), Side.ON_XI_STAR)

    def trace_coefficients(self, T: np.ndarray) -> np.ndarray:
        """``a_check(X) = tr(pi(X)* T)`` for every X, as a flat table on Xi."""
        T = np.asarray(T, dtype=np.complex128)
        D = self.D
        rows = np.arange(D)
        g = T[rows[None, :], self.t.sub[rows[None, :], rows[:, None]]]  # [x, t] = T[t, t - x]
        shape = (D,) + (self.N,) * self.d
        G = np.fft.fftn(g.reshape(shape), axes=tuple(range(1, self.d + 1))).reshape(D, D)
        return (self._h_dot * G).reshape(-1)

    def dequantize_trace(self, T: np.ndarray) -> SymbolGrid:
        """Dequantize through ``tr(pi(X)* T)`` followed by the Fourier transform."""
        ac = SymbolGrid(self.space, self.trace_coefficients(T), Side.ON_XI)
        return sym_fourier(ac)

    # symbols

    def symbol_values(self, a: SymbolGrid) -> np.ndarray:
        return _symbol(a, self.space)

    def unit(self) -> SymbolGrid:
        return SymbolGrid.constant(self.space, 1.0)

    def plane_wave(self, X0: PhasePoint) -> SymbolGrid:
        """Symbol ``P -> exp(2 pi i sigma(X0, P) / N)``, whose quantization is ``pi(X0)``."""
        self.space.check_same(X0.space)
        return SymbolGrid(self.space, self.t.roots[self.t.sigma[X0.index]], Side.ON_XI_STAR)

    # Moyal product

    def moyal(self, a: SymbolGrid, b: SymbolGrid) -> SymbolGrid:
        """``a # b``, the symbol of ``Op(a) Op(b)``."""
        return self.dequantize(self.quantize(a) @ self.quantize(b))

    @cached_property
    def _roots_h(self) -> np.ndarray:
        return self.t.roots[(self.half_inverse * np.arange(self.N)) % self.N]

    def moyal_twisted(self, a: SymbolGrid, b: SymbolGrid) -> SymbolGrid:
        """``a # b`` through the twisted convolution of ``a_check`` and ``b_check``."""
        ac = fourier_array(_symbol(a, self.space), self.space)
        bc = fourier_array(_symbol(b, self.space), self.space)
        t = self.t
        cc = kernels.twisted_convolution(ac, bc, t.phase_sub, t.sigma, self._roots_h, self.w)
        return SymbolGrid(self.space, fourier_array(cc, self.space), Side.ON_XI_STAR)

    # pi-sharp action

    def pi_sharp_apply(self, X1: PhasePoint, X2: PhasePoint, F: SymbolGrid) -> SymbolGrid:
        """Symbol of ``pi(X1 + X2) Op(F) pi(X1)**-1``."""
        T = self.pi_matrix(X1 + X2) @ self.quantize(F) @ self.pi_matrix(-X1)
        return self.dequantize(T)

    def pi_sharp_moyal(self, X1: PhasePoint, X2: PhasePoint, F: SymbolGrid) -> SymbolGrid:
        """Same action written as ``e_{X1+X2} # F # e_{-X1}`` with plane waves."""
        return self.moyal(self.moyal(self.plane_wave(X1 + X2), F), self.plane_wave(-X1))

    def pi_sharp_ambiguity(self, a: SymbolGrid, window) -> np.ndarray:
        """``(X1, X2) -> <a, pi_sharp(X1, X2) W(phi, phi)>`` with the weighted inner product.

        Every ``pi_sharp(X1, X2) W(phi, phi)`` is formed as a symbol and paired
        with ``a``; the result has shape ``(P, P)`` indexed ``[X1, X2]``.
        """
        return self.pi_sharp_ambiguity_many([a], window)[0]

    def pi_sharp_ambiguity_many(self, symbols, window) -> np.ndarray:
        phi = _vec(window, self.space)
        W = self.quantize(self.wigner(phi, phi))
        mats = self.pi_matrices()
        A = np.stack([_symbol(a, self.space) for a in symbols])
        inv = self.t.phase_neg
        add = self.t.phase_add
        out = np.empty((len(A), self.P, self.P), dtype=np.complex128)
        for i1 in range(self.P):
            left = mats[add[i1]]  # pi(X1 + X2) for every X2
            conj = W @ mats[inv[i1]]
            sym = self.dequantize_array(left @ conj)  # [X2, P]
            out[:, i1, :] = self.w * (A @ np.conj(sym).T)
        return out

    # C_a / T_a / V machinery

    def matrix_coeff_table(self, a: SymbolGrid, window) -> np.ndarray:
        """``C_a(X, Y) = <Op(a) phi_X, phi_Y>`` with shape ``(P, P)``."""
        B = self.bank(window)
        return self.coeff_table_from_operator(self.quantize(a), B)

    @staticmethod
    def coeff_table_from_operator(T: np.ndarray, bank: np.ndarray) -> np.ndarray:
        return (bank @ T.T) @ np.conj(bank).T

    def analysis(self, f, window) -> np.ndarray:
        """``V f = A_phi f``."""
        return self.ambiguity(f, window)

    analysis_apply = analysis

    def synthesis(self, G: np.ndarray, window) -> np.ndarray:
        """``V* G = sum_X N**-d G(X) phi_X``."""
        G = np.asarray(G, dtype=np.complex128).reshape(-1)
        if G.size != self.P:
            raise DimensionError(f"expected a table of {self.P} values")
        return self.w * (G @ self.bank(window))

    synthesis_apply = synthesis

    def analysis_matrix(self, window) -> np.ndarray:
        """Matrix of ``V`` (``P x D``): row X is ``conj(phi_X)``."""
        return np.conj(self.bank(window))

    def synthesis_matrix(self, window) -> np.ndarray:
        """Matrix of ``V*`` (``D x P``), adjoint of :meth:`analysis_matrix` for the weighted measure."""
        return self.w * self.bank(window).T

    def channel_matrix(self, a: SymbolGrid, window) -> np.ndarray:
        """Matrix of ``T_a G (Y) = sum_X N**-d C_a(X, Y) G(X)``."""
        return self.w * self.matrix_coeff_table(a, window).T

    def channel_apply(self, a: SymbolGrid, G: np.ndarray, window) -> np.ndarray:
        G = np.asarray(G, dtype=np.complex128).reshape(-1)
        return self.channel_matrix(a, window) @ G


@dataclass(frozen=True, eq=False)
class AmbiguityTable:
    """Flat table on Xi produced by :meth:`WeylSystem.ambiguity`."""

    space: FinitePhaseSpace
    values: np.ndarray

    def norm(self) -> float:
        return float(np.sqrt(self.space.w * np.vdot(self.values, self.values).real))

    def as_grid(self) -> SymbolGrid:
        return SymbolGrid(self.space, self.values, Side.ON_XI)


# ---------------------------------------------------------------------------
# operator CSV


def write_operator_csv(T: np.ndarray, path_or_buf=None):
    """Rows ``row, col, re, im`` in row-major order."""
    T = np.asarray(T, dtype=np.complex128)
    own = path_or_buf is None
    buf = io.StringIO() if own else path_or_buf
    close = False
    if isinstance(buf, str) or hasattr(buf, "__fspath__"):
        buf = open(buf, "w", newline="")
        close = True
    try:
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["row", "col", "re", "im"])
        for (i, j), v in np.ndenumerate(T):
            w.writerow([i, j, repr(float(v.real)), repr(float(v.imag))])
    finally:
        if close:
            buf.close()
    return buf.getvalue() if own else None


def read_operator_csv(path_or_buf, dim: int) -> np.ndarray:
    if isinstance(path_or_buf, str) or hasattr(path_or_buf, "__fspath__"):
        with open(path_or_buf, newline="") as fh:
            rows = list(csv.reader(fh))
    else:
        rows = list(csv.reader(path_or_buf))
    if not rows or rows[0] != ["row", "col", "re", "im"]:
        raise ValueError("bad operator header")
    body = [r for r in rows[1:] if r]
    if len(body) != dim * dim:
        raise ValueError(f"expected {dim * dim} rows, got {len(body)}")
    T = np.empty((dim, dim), dtype=np.complex128)
    seen = np.zeros((dim, dim), dtype=bool)
    for r in body:
        i, j = int(r[0]), int(r[1])
        if seen[i, j]:
            raise ValueError(f"duplicate entry ({i}, {j})")
        seen[i, j] = True
        T[i, j] = float(r[2]) + 1j * float(r[3])
    return T
