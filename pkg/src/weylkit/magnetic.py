"""Magnetic Weyl calculus on a sampled periodic box.

The configuration space ``[-L, L)^d`` is sampled at ``n`` points per axis with
step ``h = 2L/n``; momenta live on the dual lattice ``xi = (pi / L) k``. Grid
labels ``j`` in ``Z_n`` are read through centred representatives
``rep(j) in [-n/2, n/2)``, so the point with label ``j`` sits at ``rep(j) h``.

A phase-space point ``(X, xi)`` acts through the magnetic translation

    (U^A(X, xi) f)(x) = exp(i xi.(x - X/2) + i Gamma_A(x - X -> x)) f(x - X),

where ``Gamma_A`` is the line integral of the vector potential ``A`` along
the straight segment inside the box between the two grid points. With the
phase-space point mass ``w = n**-d`` the quantizer is ``Op^A(a) = sum w
a_check(X, xi) U^A(X, xi)``.

Potentials are polynomials of total degree at most 2, so every segment
integral is evaluated exactly (Simpson's rule is exact for the resulting
quadratic integrands).
"""

from __future__ import annotations

import math
import re
import warnings
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from . import kernels
from .algebra import (
    Check,
    UnitalSymbol,
    op_norm_bound_check,
    submultiplicativity_check,
    wiener_check,
)
from .phase_space import DimensionError, label_fourier, tables

VARIABLES = ("x", "y")
MAX_DEGREE = 2


class UnsupportedPotentialError(ValueError):
    """Polynomial of degree above 2, or otherwise not admissible."""


class LatticeError(ValueError):
    """A translation or momentum is not on the sampled lattice."""


class ResolutionWarning(UserWarning):
    """The grid does not resolve the magnetic length."""


# ---------------------------------------------------------------------------
# polynomials and potentials


_TERM = re.compile(r"^([a-z])(?:\^(\d+))?$")


def _parse_monomial(text: str, d: int) -> tuple:
    powers = [0] * d
    text = text.replace(" ", "")
    if text in ("", "1"):
        return tuple(powers)
    for factor in text.split("*"):
        m = _TERM.match(factor)
        if m is None:
            raise UnsupportedPotentialError(f"cannot parse monomial factor {factor!r}")
        var, exp = m.group(1), int(m.group(2) or 1)
        if var not in VARIABLES[:d]:
            raise UnsupportedPotentialError(f"variable {var!r} not available in d={d}")
        powers[VARIABLES.index(var)] += exp
    return tuple(powers)


def _fmt_monomial(powers: tuple) -> str:
    parts = []
    for var, k in zip(VARIABLES, powers):
        if k == 1:
            parts.append(var)
        elif k > 1:
            parts.append(f"{var}^{k}")
    return "*".join(parts) or "1"


@dataclass(frozen=True)
class Polynomial:
    """Real polynomial in ``d`` variables with total degree at most 2.

    ``terms`` maps exponent tuples to coefficients. Build from text with
    :meth:`from_mapping`, e.g. ``{"x*y": 0.5, "1": 2.0}``.
    """

    d: int
    terms: Mapping[tuple, float] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for powers, c in dict(self.terms).items():
            powers = tuple(int(k) for k in powers)
            if len(powers) != self.d or min(powers, default=0) < 0:
                raise UnsupportedPotentialError(f"bad exponent tuple {powers} for d={self.d}")
            if sum(powers) > MAX_DEGREE:
                raise UnsupportedPotentialError(
                    f"degree {sum(powers)} exceeds {MAX_DEGREE}; only closed-form potentials are supported"
                )
            if c != 0:
                clean[powers] = clean.get(powers, 0.0) + float(c)
        object.__setattr__(self, "terms", clean)

    @classmethod
    def from_mapping(cls, d: int, mapping: Mapping[str, float] | None) -> "Polynomial":
        terms: dict = {}
        for mono, c in (mapping or {}).items():
            key = _parse_monomial(mono, d)
            terms[key] = terms.get(key, 0.0) + float(c)
        return cls(d, terms)

    def to_mapping(self) -> dict:
        return {_fmt_monomial(k): c for k, c in self.terms.items()}

    @property
    def degree(self) -> int:
        return max((sum(k) for k in self.terms), default=0)

    def __call__(self, pts) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        out = np.zeros(pts.shape[:-1])
        for powers, c in self.terms.items():
            term = np.full(pts.shape[:-1], c)
            for i, k in enumerate(powers):
                if k:
                    term = term * pts[..., i] ** k
            out = out + term
        return out

    def __add__(self, other: "Polynomial") -> "Polynomial":
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, 0.0) + c
        return Polynomial(self.d, terms)

    def scaled(self, s: float) -> "Polynomial":
        return Polynomial(self.d, {k: s * c for k, c in self.terms.items()})

    def derivative(self, i: int) -> "Polynomial":
        terms = {}
        for powers, c in self.terms.items():
            if powers[i]:
                p = list(powers)
                p[i] -= 1
                terms[tuple(p)] = terms.get(tuple(p), 0.0) + c * powers[i]
        return Polynomial(self.d, terms)

    @staticmethod
    def random(d: int, rng: np.random.Generator, scale: float = 1.0) -> "Polynomial":
        monos = [p for p in np.ndindex(*([MAX_DEGREE + 1] * d)) if sum(p) <= MAX_DEGREE]
        return Polynomial(d, {p: scale * rng.standard_normal() for p in monos})


@dataclass(frozen=True)
class VectorPotential:
    """One degree-at-most-2 polynomial per spatial component."""

    components: tuple
    tag: str = ""

    def __post_init__(self):
        comps = tuple(self.components)
        if not comps:
            raise UnsupportedPotentialError("at least one component is required")
        d = comps[0].d
        if any(c.d != d for c in comps) or len(comps) != d:
            raise UnsupportedPotentialError("need exactly d components in d variables")
        object.__setattr__(self, "components", comps)

    @property
    def d(self) -> int:
        return len(self.components)

    @property
    def degree(self) -> int:
        return max(c.degree for c in self.components)

    @classmethod
    def zero(cls, d: int) -> "VectorPotential":
        return cls(tuple(Polynomial(d) for _ in range(d)), "zero")

    @classmethod
    def from_mappings(cls, d: int, mappings: Sequence[Mapping[str, float]], tag: str = "") -> "VectorPotential":
        if len(mappings) != d:
            raise UnsupportedPotentialError(f"expected {d} component maps, got {len(mappings)}")
        return cls(tuple(Polynomial.from_mapping(d, m) for m in mappings), tag)

    @classmethod
    def symmetric_gauge(cls, B: float) -> "VectorPotential":
        """``A = (-B y / 2, B x / 2)``, constant field ``B``."""
        return cls.from_mappings(2, [{"y": -0.5 * B}, {"x": 0.5 * B}], f"symmetric(B={B})")

    @classmethod
    def landau_gauge(cls, B: float) -> "VectorPotential":
        """``A = (0, B x)``, the symmetric gauge plus ``grad(B x y / 2)``."""
        return cls.from_mappings(2, [{}, {"x": B}], f"landau(B={B})")

    @classmethod
    def gradient(cls, chi: Polynomial) -> "VectorPotential":
        if chi.degree > MAX_DEGREE:
            raise UnsupportedPotentialError("gauge function must have degree <= 2")
        return cls(tuple(chi.derivative(i) for i in range(chi.d)), "grad")

    def __add__(self, other: "VectorPotential") -> "VectorPotential":
        if other.d != self.d:
            raise DimensionError("potentials of different dimension")
        return VectorPotential(
            tuple(a + b for a, b in zip(self.components, other.components)),
            "+".join(t for t in (self.tag, other.tag) if t),
        )

    def __call__(self, pts) -> np.ndarray:
        """Field values, shape ``pts.shape[:-1] + (d,)``."""
        return np.stack([c(pts) for c in self.components], axis=-1)


def _segment_integral(A: VectorPotential, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``int_0^1 A(a + s (b - a)) . (b - a) ds``, exact for degree <= 2 (Simpson)."""
    delta = b - a
    vals = A(a) + 4.0 * A(0.5 * (a + b)) + A(b)
    return np.sum(vals * delta, axis=-1) / 6.0


def circulation(A: VectorPotential, start, end) -> float:
    """Exact line integral of ``A`` along the straight segment ``start -> end``."""
    if A.degree > MAX_DEGREE:
        raise UnsupportedPotentialError("degree > 2")
    a = np.atleast_1d(np.asarray(start, dtype=float))
    b = np.atleast_1d(np.asarray(end, dtype=float))
    if a.shape != (A.d,) or b.shape != (A.d,):
        raise DimensionError(f"points must have {A.d} coordinates")
    return float(_segment_integral(A, a, b))


# ---------------------------------------------------------------------------
# grid and phase lattice


def centered(labels, n: int) -> np.ndarray:
    """Centred representative in ``[-n/2, n/2)`` of integer labels mod n."""
    return np.mod(np.asarray(labels) + n // 2, n) - n // 2


@dataclass(frozen=True)
class SampledLineGrid:
    """``n**d`` points of the periodic box ``[-L, L)^d`` with step ``2L/n``."""

    d: int
    L: float
    n: int
    periodic: bool = True

    def __post_init__(self):
        if self.d not in (1, 2):
            raise ValueError("d must be 1 or 2")
        if not self.L > 0:
            raise ValueError("L must be positive")
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 2:
            raise ValueError("n must be an integer >= 2")
        if not self.periodic:
            raise ValueError("only periodic grids are supported")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "L", float(self.L))

    @property
    def h(self) -> float:
        return 2.0 * self.L / self.n

    @property
    def dk(self) -> float:
        """Momentum lattice spacing ``2 pi / (2L)``."""
        return math.pi / self.L

    @property
    def D(self) -> int:
        return self.n**self.d

    @property
    def tables(self):
        return tables(self.n, self.d)

    @cached_property
    def reps(self) -> np.ndarray:
        """``(D, d)`` centred integer representatives of each flat label."""
        return centered(self.tables.coords, self.n)

    @cached_property
    def points(self) -> np.ndarray:
        return self.h * self.reps

    @cached_property
    def momenta(self) -> np.ndarray:
        return self.dk * self.reps

    def index_of_translation(self, X) -> int:
        """Flat label of a lattice translation vector ``X`` (length units)."""
        X = np.atleast_1d(np.asarray(X, dtype=float))
        if X.shape != (self.d,):
            raise DimensionError(f"translation needs {self.d} coordinates")
        m = X / self.h
        if np.any(np.abs(m - np.round(m)) > 1e-9):
            raise LatticeError(f"{X.tolist()} is not a multiple of the step {self.h}")
        return int(self.tables.flat(np.round(m).astype(np.int64)))

    def index_of_momentum(self, xi) -> int:
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        if xi.shape != (self.d,):
            raise DimensionError(f"momentum needs {self.d} coordinates")
        k = xi / self.dk
        if np.any(np.abs(k - np.round(k)) > 1e-9):
            raise LatticeError(f"{xi.tolist()} is not on the momentum lattice")
        return int(self.tables.flat(np.round(k).astype(np.int64)))

    def index_of_point(self, x) -> int:
        return self.index_of_translation(x)

    def resolution_issues(self, B: float) -> list[str]:
        issues = []
        if B > 0:
            if self.h > 0.25 / math.sqrt(B) + 1e-12:
                issues.append(f"step h={self.h:.4g} exceeds 0.25/sqrt(B)={0.25 / math.sqrt(B):.4g}")
            if self.L < 6.0 / math.sqrt(B) - 1e-12:
                issues.append(f"half-width L={self.L:.4g} below 6/sqrt(B)={6.0 / math.sqrt(B):.4g}")
        return issues


def exp_phase(X, xi, A: VectorPotential, x) -> float:
    """Phase of ``U^A(X, xi)`` at ``x``: ``xi.(x - X/2) + Gamma_A(x - X -> x)``.

    This is the unwrapped (continuum) formula; the assembled matrices use the
    in-box segment, see :class:`MagneticSystem`.
    """
    X = np.atleast_1d(np.asarray(X, dtype=float))
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    x = np.atleast_1d(np.asarray(x, dtype=float))
    return float(xi @ (x - 0.5 * X)) + circulation(A, x - X, x)


def grid_gaussian(grid: SampledLineGrid) -> np.ndarray:
    """Unit-norm periodized Gaussian balanced between position and momentum.

    On labels this is ``exp(-pi j^2 / n)`` summed over a few periods, the
    same profile as the discrete Gaussian of the finite model.
    """
    n = grid.n
    base = np.zeros(n)
    j = np.arange(n)
    for r in range(-3, 4):
        base += np.exp(-np.pi * (centered(j, n) + r * n) ** 2 / n)
    vec = base
    for _ in range(grid.d - 1):
        vec = np.kron(vec, base)
    vec = vec.astype(np.complex128)
    return vec / np.linalg.norm(vec)


class MagneticSystem:
    """Magnetic quantizer ``Op^A`` on a sampled grid.

    Symbols are flat arrays over labels ``(j, l)`` (position label major), the
    point ``j`` at ``rep(j) h`` and the momentum ``l`` at ``rep(l) pi / L``.
    The object exposes the same calculus interface as
    :class:`weylkit.weyl_core.WeylSystem` (``w``, ``P``, ``D``, ``t``,
    ``quantize_array``, ``dequantize_array``, ``bank``) so the norm and algebra
    routines accept it unchanged.
    """

    def __init__(self, grid: SampledLineGrid, potential: VectorPotential | None = None):
        if potential is None:
            potential = VectorPotential.zero(grid.d)
        if potential.d != grid.d:
            raise DimensionError("potential and grid dimensions differ")
        self.grid = grid
        self.potential = potential
        self.n = grid.n
        self.d = grid.d
        self.D = grid.D
        self.P = self.D**2
        self.w = float(self.n) ** (-self.d)
        self.t = grid.tables

    # circulation table Gamma[x, m] along the in-box segment from x - m to x

    @cached_property
    def gamma(self) -> np.ndarray:
        pts = self.grid.points
        src = self.t.sub
        out = np.empty((self.D, self.D))
        step = max(1, 2**22 // max(self.D, 1))
        for lo in range(0, self.D, step):
            hi = min(self.D, lo + step)
            b = np.broadcast_to(pts[lo:hi, None, :], (hi - lo, self.D, self.d))
            out[lo:hi] = _segment_integral(self.potential, pts[src[lo:hi]], b)
        return out

    @cached_property
    def _half_phase(self) -> np.ndarray:
        """``exp(-i xi_k . X_m / 2)`` as an ``(m, k)`` matrix."""
        r = self.grid.reps
        return np.exp(-1j * np.pi * (r @ r.T) / self.n)

    def _ifft_k(self, A: np.ndarray) -> np.ndarray:
        shape = A.shape[:-1] + (self.n,) * self.d
        axes = tuple(range(A.ndim - 1, A.ndim - 1 + self.d))
        out = np.fft.ifftn(A.reshape(shape), axes=axes) * self.D
        return out.reshape(A.shape)

    def _fft_x(self, A: np.ndarray) -> np.ndarray:
        shape = A.shape[:-1] + (self.n,) * self.d
        axes = tuple(range(A.ndim - 1, A.ndim - 1 + self.d))
        return np.fft.fftn(A.reshape(shape), axes=axes).reshape(A.shape)

    def check_symbol(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.complex128).reshape(-1)
        if a.size != self.P:
            raise DimensionError(f"expected {self.P} symbol values, got {a.size}")
        return a

    def fourier(self, a: np.ndarray) -> np.ndarray:
        """Symplectic Fourier transform on the label lattice (an involution)."""
        return label_fourier(a, self.n, self.d)

    # single translations

    def translation(self, m: int, k: int) -> np.ndarray:
        """Matrix of ``U^A`` for translation label ``m`` and momentum label ``k``."""
        x = np.arange(self.D)
        src = self.t.sub[:, m]
        phase = 2 * np.pi * (self.grid.reps @ self.grid.reps[k]) / self.n
        U = np.zeros((self.D, self.D), dtype=np.complex128)
        U[x, src] = np.exp(1j * (phase + self.gamma[:, m])) * self._half_phase[m, k]
        return U

    def translation_at(self, X, xi) -> np.ndarray:
        return self.translation(self.grid.index_of_translation(X), self.grid.index_of_momentum(xi))

    # quantization

    def quantize_array(self, a) -> np.ndarray:
        a = self.check_symbol(a)
        ac = self.fourier(a).reshape(self.D, self.D) * self._half_phase
        vals = self.w * self._ifft_k(ac)
        return kernels.translation_scatter(
            np.ascontiguousarray(vals), self.gamma, np.ascontiguousarray(self.t.sub), 1.0
        )

    def quantize_sum(self, a) -> np.ndarray:
        """``sum w a_check U^A`` term by term (slow oracle)."""
        a = self.check_symbol(a)
        ac = self.fourier(a)
        T = np.zeros((self.D, self.D), dtype=np.complex128)
        for i in range(self.P):
            if ac[i] != 0:
                T += self.w * ac[i] * self.translation(i // self.D, i % self.D)
        return T

    def dequantize_array(self, T) -> np.ndarray:
        T = np.asarray(T, dtype=np.complex128)
        if T.shape != (self.D, self.D):
            raise DimensionError(f"expected a {self.D}x{self.D} matrix")
        vals = kernels.translation_gather(np.ascontiguousarray(T), self.gamma, np.ascontiguousarray(self.t.sub))
        ac = self._fft_x(vals) / (self.w * self.D) / self._half_phase
        return self.fourier(ac.reshape(-1))

    quantize = quantize_array
    dequantize = dequantize_array

    def moyal(self, a, b) -> np.ndarray:
        """``a #^A b = dequantize^A(Op^A(a) Op^A(b))``."""
        return self.dequantize_array(self.quantize_array(a) @ self.quantize_array(b))

    # symbols and windows

    def symbol(self, f) -> np.ndarray:
        """Sample ``f(x, xi)`` (arrays of shape ``(P, d)``) on the phase lattice."""
        x = np.repeat(self.grid.points, self.D, axis=0)
        xi = np.tile(self.grid.momenta, (self.D, 1))
        return np.asarray(f(x, xi), dtype=np.complex128).reshape(self.P)

    def kinetic_symbol(self) -> np.ndarray:
        return self.symbol(lambda x, xi: np.sum(xi**2, axis=1))

    def gaussian_bump(self, width: float | None = None) -> np.ndarray:
        """Gaussian bump in ``x`` and ``xi``.

        With ``width`` given both variances are ``width**2``; otherwise the
        variances match the grid window, ``n h^2 / (2 pi)`` in position and
        ``n dk^2 / (2 pi)`` in momentum.
        """
        s2 = (width**2) if width else self.n * self.grid.h**2 / (2 * np.pi)
        sk2 = (width**2) if width else self.n * self.grid.dk**2 / (2 * np.pi)
        return self.symbol(lambda x, xi: np.exp(-np.sum(x**2, axis=1) / (2 * s2) - np.sum(xi**2, axis=1) / (2 * sk2)))

    def random_symbol(self, rng: np.random.Generator, hermitian: bool = False) -> np.ndarray:
        a = rng.standard_normal(self.P) + 1j * rng.standard_normal(self.P)
        return a.real.astype(np.complex128) if hermitian else a

    def window(self) -> np.ndarray:
        return grid_gaussian(self.grid)

    def bank(self, window=None) -> np.ndarray:
        """Rows ``U^A(X) phi``, shape ``(P, D)``, for a unit vector ``phi``."""
        phi = self.window() if window is None else np.asarray(getattr(window, "values", window), dtype=np.complex128)
        if phi.shape != (self.D,):
            raise DimensionError(f"window must have {self.D} entries")
        r = self.grid.reps
        kx = np.exp(2j * np.pi * (r @ r.T) / self.n)  # [k, x]
        out = np.empty((self.D, self.D, self.D), dtype=np.complex128)
        for m in range(self.D):
            src = self.t.sub[:, m]
            row = phi[src] * np.exp(1j * self.gamma[:, m])
            out[m] = (self._half_phase[m][:, None] * kx) * row[None, :]
        return out.reshape(self.P, self.D)

    # reduction to the finite model

    def zero_field_twist(self) -> np.ndarray:
        """``(-1)^{rep(k).rep(m)}`` on the label lattice, ``(m, k)`` flat."""
        r = self.grid.reps
        return ((-1.0) ** np.mod(r @ r.T, 2)).reshape(-1)

    def weyl_equivalent(self, a) -> np.ndarray:
        """Symbol whose finite Weyl quantization equals ``Op^0(a)`` (odd n).

        At ``A = 0`` and odd ``n`` the magnetic translations and the finite
        Heisenberg operators differ by the sign ``(-1)^{rep(k).rep(m)}`` that
        comes from halving ``xi.X`` with centred representatives.
        """
        if self.n % 2 == 0:
            raise ValueError("the finite Weyl model needs an odd number of points")
        return self.fourier(self.zero_field_twist() * self.fourier(self.check_symbol(a)))


# ---------------------------------------------------------------------------
# reports


@dataclass
class GaugeReport:
    matrix_error: float
    spectral_error: float | None
    tol: float = 1e-10

    @property
    def passed(self) -> bool:
        ok = self.matrix_error <= self.tol
        if self.spectral_error is not None:
            ok = ok and self.spectral_error <= self.tol
        return ok

    def checks(self) -> list[Check]:
        out = [Check("gauge_covariance", self.matrix_error, 0.0, "eq", self.tol)]
        if self.spectral_error is not None:
            out.append(Check("gauge_spectra", self.spectral_error, 0.0, "eq", self.tol))
        return out


def gauge_matrix(chi: Polynomial, grid: SampledLineGrid) -> np.ndarray:
    """Diagonal of ``D_chi = diag(exp(i chi(x)))``."""
    return np.exp(1j * chi(grid.points))


def gauge_covariance_check(a, A: VectorPotential, chi: Polynomial, grid: SampledLineGrid, spectra: bool = True, tol: float = 1e-10) -> GaugeReport:
    """Compare ``Op^{A + grad chi}(a)`` with ``D_chi Op^A(a) D_chi^{-1}``.

    With ``spectra`` set and a hermitian ``Op^A(a)``, the sorted eigenvalues
    in both gauges are compared as well.
    """
    if not isinstance(chi, Polynomial) or chi.d != grid.d:
        raise UnsupportedPotentialError("gauge function must be a polynomial in d variables")
    s1 = MagneticSystem(grid, A)
    s2 = MagneticSystem(grid, A + VectorPotential.gradient(chi))
    T1 = s1.quantize_array(a)
    T2 = s2.quantize_array(a)
    g = gauge_matrix(chi, grid)
    err = float(np.max(np.abs(T2 - g[:, None] * T1 * np.conj(g)[None, :])))
    spectral = None
    if spectra:
        e1 = np.linalg.eigvalsh(0.5 * (T1 + T1.conj().T))
        e2 = np.linalg.eigvalsh(0.5 * (T2 + T2.conj().T))
        spectral = float(np.max(np.abs(e1 - e2)))
    return GaugeReport(err, spectral, tol)


@dataclass
class LandauReport:
    B: float
    grid: SampledLineGrid
    levels: np.ndarray
    degeneracies: list
    lowest: np.ndarray
    expected: np.ndarray
    hermitian_error: float
    warnings: list = field(default_factory=list)

    @property
    def relative_errors(self) -> np.ndarray:
        k = min(len(self.levels), len(self.expected))
        return np.abs(self.levels[:k] - self.expected[:k]) / self.expected[:k]

    def passed(self, rtol: float = 0.02) -> bool:
        return len(self.levels) >= len(self.expected) and bool(np.all(self.relative_errors <= rtol))

    def record(self) -> dict:
        return {
            "B": self.B,
            "L": self.grid.L,
            "n": self.grid.n,
            "levels": self.levels.tolist(),
            "degeneracies": self.degeneracies,
            "lowest": self.lowest.tolist(),
            "expected": self.expected.tolist(),
            "relative_errors": self.relative_errors.tolist(),
            "hermitian_error": self.hermitian_error,
            "warnings": self.warnings,
        }


def plateau_levels(ev: np.ndarray, gap: float, min_size: int = 4) -> tuple[list, list]:
    """Group sorted eigenvalues into clusters separated by more than ``gap``.

    Returns the medians and sizes of clusters with at least ``min_size``
    members. These are the degenerate Landau plateaus; the median keeps the
    few edge states that join a cluster from biasing its level.
    """
    ev = np.sort(ev)
    breaks = np.nonzero(np.diff(ev) > gap)[0] + 1
    groups = np.split(ev, breaks)
    means, sizes = [], []
    for g in groups:
        if len(g) >= min_size:
            means.append(float(np.median(g)))
            sizes.append(int(len(g)))
    return means, sizes


def landau_demo(B: float = 1.0, grid: SampledLineGrid | None = None, levels: int = 4, gauge: str = "symmetric", gap: float = 2e-3) -> LandauReport:
    """Lowest Landau levels of ``Op^A(|xi|^2)`` for a constant field ``B``.

    Eigenvalues of a periodic box form degenerate plateaus at ``B (2k + 1)``
    (bulk states) with scattered edge states from the seam where the
    potential jumps. Plateaus are found by clustering, with ``gap`` measured
    in units of ``B``.
    """
    if not B > 0:
        raise ValueError("B must be positive")
    grid = grid or SampledLineGrid(2, 8.0, 64)
    if grid.d != 2:
        raise ValueError("the Landau demo needs d = 2")
    notes = grid.resolution_issues(B)
    for msg in notes:
        warnings.warn(msg, ResolutionWarning, stacklevel=2)
    A = VectorPotential.symmetric_gauge(B) if gauge == "symmetric" else VectorPotential.landau_gauge(B)
    sysm = MagneticSystem(grid, A)
    T = sysm.quantize_array(sysm.kinetic_symbol())
    herm = float(np.max(np.abs(T - T.conj().T)))
    ev = np.linalg.eigvalsh(0.5 * (T + T.conj().T))
    means, sizes = plateau_levels(ev, gap * B)
    expected = B * (2 * np.arange(levels) + 1.0)
    return LandauReport(
        B, grid, np.array(means[:levels]), sizes[:levels], ev[:levels], expected, herm, notes
    )


def free_spectrum(grid: SampledLineGrid) -> np.ndarray:
    """Sorted ``|xi|^2`` over the momentum lattice (the A = 0 kinetic spectrum)."""
    return np.sort(np.sum(grid.momenta**2, axis=1))


def magnetic_algebra_suite(
    sysm: MagneticSystem,
    rng: np.random.Generator,
    window=None,
    n_random: int = 2,
    bound_tol: float = 1e-8,
    wiener_tol: float = 1e-5,
    nodes: int = 256,
) -> list[Check]:
    """Operator bound, submultiplicativity and Wiener inversion for ``Op^A``.

    Random symbols are normalized so their operators have moderate norm; the
    Wiener test inverts ``1 + 0.3 * (Gaussian bump)``.
    """
    phi = sysm.window() if window is None else window
    checks: list[Check] = []
    syms = [sysm.random_symbol(rng) for _ in range(max(2, n_random))]
    for a in syms:
        c = op_norm_bound_check(a, phi, sysm, bound_tol)
        checks.append(c)
    c = submultiplicativity_check(syms[0], syms[1], phi, sysm, bound_tol)
    checks.append(c)
    bump = sysm.gaussian_bump()
    a0 = UnitalSymbol(1.0, 0.3 * bump / np.max(np.abs(bump)))
    checks.extend(wiener_check(a0, phi, sysm, nodes=nodes, tol_agree=wiener_tol, tol_res=1e-8))
    for c in checks:
        c.params.setdefault("backend", "magnetic")
        c.params.setdefault("A", sysm.potential.tag)
        c.params.setdefault("n", sysm.n)
        c.params.setdefault("d", sysm.d)
    return checks
