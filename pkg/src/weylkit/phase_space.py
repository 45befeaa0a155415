"""Finite phase space ``Z_N^{2d}`` and the symplectic Fourier transform.

A point ``X = (x, xi)`` carries mass ``N**-d``, so the whole space has total
measure ``N**d``. All tables are laid out row-major over ``(x_0, ..., x_{d-1},
xi_0, ..., xi_{d-1})``; the flat index of ``X`` is ``flat(x) * N**d +
flat(xi)``.

With the pairing ``sigma(P, X) = xi_P . x_X - xi_X . x_P (mod N)`` the pair

    b_hat(P)   = N**-d  sum_X  exp(-2 pi i sigma(P, X) / N) b(X)
    a_check(X) = N**-d  sum_P  exp(+2 pi i sigma(P, X) / N) a(P)

is unitary for the weighted 2-norm and, because ``sigma`` is antisymmetric,
the two maps coincide as array operations (each is an involution).
"""

from __future__ import annotations

import csv
import enum
import io
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

from . import kernels


class DimensionError(ValueError):
    """Objects from different phase spaces (or of the wrong size) were mixed."""


class SideError(ValueError):
    """A symbol was passed on the wrong side of the Fourier pair."""


class Side(enum.Enum):
    """Which side of the Fourier pair a table lives on."""

    ON_XI = "OnXi"
    ON_XI_STAR = "OnXiStar"

    def flipped(self) -> "Side":
        return Side.ON_XI_STAR if self is Side.ON_XI else Side.ON_XI


# ---------------------------------------------------------------------------
# index tables


class LatticeTables:
    """Integer lookup tables for ``Z_N^d`` and ``Z_N^{2d}``.

    Tables are built on first access and then shared; use :func:`tables`
    rather than instantiating directly.
    """

    def __init__(self, N: int, d: int):
        self.N = N
        self.d = d
        self.D = N**d
        self.P = self.D**2

    @cached_property
    def coords(self) -> np.ndarray:
        """``(D, d)`` coordinates of each flat index of ``Z_N^d``."""
        grids = np.meshgrid(*([np.arange(self.N)] * self.d), indexing="ij")
        return np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)

    def flat(self, c: np.ndarray) -> np.ndarray:
        """Flat index of coordinate rows ``c`` (last axis of length d)."""
        c = np.mod(c, self.N)
        out = np.zeros(c.shape[:-1], dtype=np.int64)
        for k in range(self.d):
            out = out * self.N + c[..., k]
        return out

    @cached_property
    def add(self) -> np.ndarray:
        """``add[i, j]`` = flat index of ``t_i + t_j`` in ``Z_N^d``."""
        c = self.coords
        return self.flat(c[:, None, :] + c[None, :, :]).astype(np.int32)

    @cached_property
    def sub(self) -> np.ndarray:
        """``sub[i, j]`` = flat index of ``t_i - t_j``."""
        c = self.coords
        return self.flat(c[:, None, :] - c[None, :, :]).astype(np.int32)

    @cached_property
    def neg(self) -> np.ndarray:
        return self.flat(-self.coords).astype(np.int32)

    @cached_property
    def dot(self) -> np.ndarray:
        """``dot[i, j]`` = ``t_i . t_j mod N``."""
        c = self.coords
        return np.mod(c @ c.T, self.N).astype(np.int32)

    def scale(self, k: int) -> np.ndarray:
        """Flat index of ``k * t`` for every ``t``."""
        return self.flat(k * self.coords).astype(np.int32)

    # phase-space (Z_N^{2d}) tables, P x P

    @cached_property
    def phase_x(self) -> np.ndarray:
        return (np.arange(self.P) // self.D).astype(np.int32)

    @cached_property
    def phase_xi(self) -> np.ndarray:
        return (np.arange(self.P) % self.D).astype(np.int32)

    def _phase_combine(self, table: np.ndarray) -> np.ndarray:
        px, pxi = self.phase_x, self.phase_xi
        return (table[px[:, None], px[None, :]] * self.D + table[pxi[:, None], pxi[None, :]]).astype(np.int32)

    @cached_property
    def phase_add(self) -> np.ndarray:
        return self._phase_combine(self.add)

    @cached_property
    def phase_sub(self) -> np.ndarray:
        return self._phase_combine(self.sub)

    @cached_property
    def phase_neg(self) -> np.ndarray:
        return (self.neg[self.phase_x] * self.D + self.neg[self.phase_xi]).astype(np.int32)

    @cached_property
    def sigma(self) -> np.ndarray:
        """``sigma[I, J]`` = symplectic form of the I-th and J-th points."""
        px, pxi = self.phase_x, self.phase_xi
        s = self.dot[pxi[:, None], px[None, :]].astype(np.int64) - self.dot[pxi[None, :], px[:, None]]
        return np.mod(s, self.N).astype(np.int32)

    @cached_property
    def roots(self) -> np.ndarray:
        """``exp(2 pi i k / N)`` for ``k = 0..N-1``."""
        return np.exp(2j * np.pi * np.arange(self.N) / self.N)


@lru_cache(maxsize=None)
def tables(N: int, d: int) -> LatticeTables:
    return LatticeTables(N, d)


# ---------------------------------------------------------------------------
# the space and its points


@dataclass(frozen=True)
class FinitePhaseSpace:
    """``Xi = Xi* = Z_N^{2d}`` with point mass ``N**-d``.

    Parameters
    ----------
    N : int
        Odd modulus, at least 3.
    d : int
        Degrees of freedom, at least 1.
    """

    N: int
    d: int = 1

    def __post_init__(self):
        if isinstance(self.N, bool) or not isinstance(self.N, (int, np.integer)):
            raise TypeError("N must be an integer")
        if isinstance(self.d, bool) or not isinstance(self.d, (int, np.integer)):
            raise TypeError("d must be an integer")
        if self.N < 3 or self.N % 2 == 0:
            raise ValueError(f"N must be odd and >= 3, got {self.N}")
        if self.d < 1:
            raise ValueError(f"d must be >= 1, got {self.d}")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "d", int(self.d))

    @property
    def weight(self) -> Fraction:
        """Mass of a single phase-space point, ``N**-d``."""
        return Fraction(1, self.N**self.d)

    @property
    def w(self) -> float:
        return 1.0 / self.N**self.d

    @property
    def dim(self) -> int:
        """Hilbert space dimension ``N**d``."""
        return self.N**self.d

    @property
    def size(self) -> int:
        """Number of phase-space points ``N**(2d)``."""
        return self.N ** (2 * self.d)

    @property
    def total_measure(self) -> Fraction:
        return self.size * self.weight

    @property
    def shape(self) -> tuple:
        return (self.N,) * (2 * self.d)

    @property
    def half(self) -> int:
        """``h = (N + 1) / 2``, the inverse of 2 modulo N."""
        return (self.N + 1) // 2

    @property
    def tables(self) -> LatticeTables:
        return tables(self.N, self.d)

    def point(self, x: Sequence[int] | int, xi: Sequence[int] | int) -> "PhasePoint":
        return PhasePoint(self, _as_tuple(x, self.d), _as_tuple(xi, self.d))

    def point_at(self, index: int) -> "PhasePoint":
        """Point with the given flat index."""
        if not 0 <= index < self.size:
            raise IndexError(index)
        c = self.tables.coords
        return PhasePoint(self, tuple(c[index // self.dim]), tuple(c[index % self.dim]))

    def points(self) -> Iterable["PhasePoint"]:
        for i in range(self.size):
            yield self.point_at(i)

    def origin(self) -> "PhasePoint":
        return self.point((0,) * self.d, (0,) * self.d)

    def random_point(self, rng: np.random.Generator) -> "PhasePoint":
        return self.point_at(int(rng.integers(self.size)))

    def check_same(self, other: "FinitePhaseSpace") -> None:
        if self != other:
            raise DimensionError(f"phase spaces differ: {self} vs {other}")


def _as_tuple(v, d) -> tuple:
    if np.isscalar(v):
        v = (v,)
    v = tuple(int(c) for c in v)
    if len(v) != d:
        raise DimensionError(f"expected {d} components, got {len(v)}")
    return v


@dataclass(frozen=True)
class PhasePoint:
    """A point ``(x, xi)`` of ``Z_N^{2d}``, components reduced to ``0..N-1``."""

    space: FinitePhaseSpace = field(repr=False)
    x: tuple
    xi: tuple

    def __post_init__(self):
        d, N = self.space.d, self.space.N
        x = _as_tuple(self.x, d)
        xi = _as_tuple(self.xi, d)
        object.__setattr__(self, "x", tuple(c % N for c in x))
        object.__setattr__(self, "xi", tuple(c % N for c in xi))

    @property
    def index(self) -> int:
        N = self.space.N
        fx = fxi = 0
        for c in self.x:
            fx = fx * N + c
        for c in self.xi:
            fxi = fxi * N + c
        return fx * self.space.dim + fxi

    def _same(self, other: "PhasePoint") -> None:
        if not isinstance(other, PhasePoint):
            raise TypeError("expected a PhasePoint")
        self.space.check_same(other.space)

    def __add__(self, other: "PhasePoint") -> "PhasePoint":
        self._same(other)
        return PhasePoint(
            self.space,
            tuple(a + b for a, b in zip(self.x, other.x)),
            tuple(a + b for a, b in zip(self.xi, other.xi)),
        )

    def __neg__(self) -> "PhasePoint":
        return PhasePoint(self.space, tuple(-a for a in self.x), tuple(-a for a in self.xi))

    def __sub__(self, other: "PhasePoint") -> "PhasePoint":
        return self + (-other)

    def is_zero(self) -> bool:
        return not any(self.x) and not any(self.xi)

    def __repr__(self) -> str:
        return f"PhasePoint(x={self.x}, xi={self.xi}, N={self.space.N})"


def symplectic_form(P: PhasePoint, X: PhasePoint) -> int:
    """``sigma(P, X) = xi_P . x_X - xi_X . x_P  (mod N)``.

    Raises
    ------
    DimensionError
        If the points belong to different spaces.
    """
    P._same(X)
    N = P.space.N
    s = sum(a * b for a, b in zip(P.xi, X.x)) - sum(a * b for a, b in zip(X.xi, P.x))
    return s % N


# ---------------------------------------------------------------------------
# symbols


@dataclass(frozen=True, eq=False)
class SymbolGrid:
    """Complex function on the phase space, stored flat in row-major order.

    Parameters
    ----------
    space : FinitePhaseSpace
    values : array_like
        ``N**(2d)`` complex values, either flat or of shape ``space.shape``.
    side : Side
        ``Side.ON_XI_STAR`` for symbols, ``Side.ON_XI`` for their Fourier duals.
    """

    space: FinitePhaseSpace
    values: np.ndarray
    side: Side = Side.ON_XI_STAR

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128)
        if v.size != self.space.size:
            raise DimensionError(f"expected {self.space.size} values, got {v.size}")
        v = np.array(v.reshape(-1), copy=True)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        if not isinstance(self.side, Side):
            object.__setattr__(self, "side", Side(self.side))

    # constructors

    @classmethod
    def zeros(cls, space, side=Side.ON_XI_STAR) -> "SymbolGrid":
        return cls(space, np.zeros(space.size), side)

    @classmethod
    def constant(cls, space, value=1.0, side=Side.ON_XI_STAR) -> "SymbolGrid":
        return cls(space, np.full(space.size, value, dtype=np.complex128), side)

    @classmethod
    def delta(cls, space, point=None, side=Side.ON_XI) -> "SymbolGrid":
        v = np.zeros(space.size, dtype=np.complex128)
        v[0 if point is None else point.index] = 1.0
        return cls(space, v, side)

    @classmethod
    def random(cls, space, rng: np.random.Generator, side=Side.ON_XI_STAR, scale=1.0) -> "SymbolGrid":
        v = rng.standard_normal(space.size) + 1j * rng.standard_normal(space.size)
        return cls(space, scale * v, side)

    def like(self, values, side=None) -> "SymbolGrid":
        return SymbolGrid(self.space, values, self.side if side is None else side)

    # views

    @property
    def tensor(self) -> np.ndarray:
        return self.values.reshape(self.space.shape)

    @property
    def matrix(self) -> np.ndarray:
        """Values as a ``(N**d, N**d)`` array indexed ``[x, xi]``."""
        D = self.space.dim
        return self.values.reshape(D, D)

    def __getitem__(self, point: PhasePoint) -> complex:
        self.space.check_same(point.space)
        return complex(self.values[point.index])

    # arithmetic

    def _other(self, other):
        if isinstance(other, SymbolGrid):
            self.space.check_same(other.space)
            if other.side is not self.side:
                raise SideError("cannot combine tables on different sides")
            return other.values
        return other

    def __add__(self, other):
        return self.like(self.values + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self.like(self.values - self._other(other))

    def __rsub__(self, other):
        return self.like(self._other(other) - self.values)

    def __mul__(self, c):
        if isinstance(c, SymbolGrid):
            return self.like(self.values * self._other(c))
        return self.like(c * self.values)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self.like(self.values / c)

    def __neg__(self):
        return self.like(-self.values)

    def conj(self) -> "SymbolGrid":
        return self.like(np.conj(self.values))

    def norm(self) -> float:
        """Weighted 2-norm ``(sum_X N**-d |b(X)|**2) ** 0.5``."""
        return float(np.sqrt(self.space.w * np.vdot(self.values, self.values).real))

    def inner(self, other: "SymbolGrid") -> complex:
        """Weighted inner product, linear in ``self``."""
        return complex(self.space.w * np.vdot(self._other(other), self.values))

    def mean(self) -> complex:
        return complex(self.values.mean())

    def allclose(self, other: "SymbolGrid", atol=1e-10) -> bool:
        return bool(np.max(np.abs(self.values - self._other(other)), initial=0.0) <= atol)

    # serialization

    def to_csv(self, path_or_buf=None) -> str | None:
        """Write ``x_0..x_{d-1}, xi_0..xi_{d-1}, re, im`` rows in row-major order."""
        return write_table_csv(self.space, self.values, path_or_buf)

    @classmethod
    def from_csv(cls, path_or_buf, space: FinitePhaseSpace, side=Side.ON_XI_STAR) -> "SymbolGrid":
        return cls(space, read_table_csv(path_or_buf, space), side)


def _csv_header(d: int) -> list[str]:
    return [f"x_{k}" for k in range(d)] + [f"xi_{k}" for k in range(d)] + ["re", "im"]


def write_table_csv(space: FinitePhaseSpace, values: np.ndarray, path_or_buf=None):
    t = space.tables
    px, pxi = t.phase_x, t.phase_xi
    coords = np.concatenate([t.coords[px], t.coords[pxi]], axis=1)
    own = path_or_buf is None
    buf = io.StringIO() if own else path_or_buf
    close = False
    if isinstance(buf, (str, bytes)) or hasattr(buf, "__fspath__"):
        buf = open(buf, "w", newline="")
        close = True
    try:
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(_csv_header(space.d))
        for c, v in zip(coords, values):
            w.writerow([*map(int, c), repr(float(v.real)), repr(float(v.imag))])
    finally:
        if close:
            buf.close()
    return buf.getvalue() if own else None


def read_table_csv(path_or_buf, space: FinitePhaseSpace) -> np.ndarray:
    """Read a table written by :func:`write_table_csv`, checking completeness."""
    if isinstance(path_or_buf, (str, bytes)) or hasattr(path_or_buf, "__fspath__"):
        with open(path_or_buf, newline="") as fh:
            rows = list(csv.reader(fh))
    else:
        rows = list(csv.reader(path_or_buf))
    if not rows or rows[0] != _csv_header(space.d):
        raise ValueError(f"bad header, expected {_csv_header(space.d)}")
    body = [r for r in rows[1:] if r]
    if len(body) != space.size:
        raise ValueError(f"expected {space.size} rows, got {len(body)}")
    out = np.empty(space.size, dtype=np.complex128)
    seen = np.zeros(space.size, dtype=bool)
    d = space.d
    for r in body:
        if len(r) != 2 * d + 2:
            raise ValueError(f"malformed row {r}")
        c = [int(v) for v in r[: 2 * d]]
        if any(not 0 <= v < space.N for v in c):
            raise ValueError(f"coordinate out of range in row {r}")
        i = space.point(c[:d], c[d:]).index
        if seen[i]:
            raise ValueError(f"duplicate row for point {c}")
        seen[i] = True
        out[i] = float(r[-2]) + 1j * float(r[-1])
    return out


# ---------------------------------------------------------------------------
# Fourier pair


def label_fourier(values: np.ndarray, N: int, d: int) -> np.ndarray:
    """FFT evaluation of ``N**-d sum_X exp(-2 pi i sigma(P, X) / N) b(X)`` on ``Z_N^{2d}``.

    Valid for any modulus ``N`` (the sampled magnetic lattice uses even ones).
    Leading axes of ``values`` are treated as a batch.
    """
    values = np.asarray(values, dtype=np.complex128)
    lead = values.shape[:-1]
    nb = len(lead)
    t = values.reshape(lead + (N,) * (2 * d))
    xa = tuple(range(nb, nb + d))
    ka = tuple(range(nb + d, nb + 2 * d))
    # sum over x of exp(-i xi_P x) -> frequency index, sum over xi of exp(+i x_P xi) -> position index
    t = np.fft.fftn(t, axes=xa)
    t = np.fft.ifftn(t, axes=ka)
    t = np.transpose(t, tuple(range(nb)) + ka + xa)
    return t.reshape(lead + (N ** (2 * d),))


def _fourier_fft(values: np.ndarray, space: FinitePhaseSpace) -> np.ndarray:
    return label_fourier(values, space.N, space.d)


def _fourier_direct(values: np.ndarray, space: FinitePhaseSpace) -> np.ndarray:
    t = space.tables
    return kernels.character_sum(np.ascontiguousarray(values, dtype=np.complex128), t.sigma, np.conj(t.roots), space.w)


def fourier_array(values: np.ndarray, space: FinitePhaseSpace, method: str = "fft") -> np.ndarray:
    """Array-level transform ``b -> b_hat`` (equal to ``a -> a_check``)."""
    if method == "fft":
        return _fourier_fft(values, space)
    if method == "direct":
        return _fourier_direct(values, space)
    raise ValueError(f"unknown method {method!r}")


def sym_fourier(b: SymbolGrid, method: str = "fft") -> SymbolGrid:
    """Symplectic Fourier transform ``b -> b_hat`` from Xi to Xi*.

    Parameters
    ----------
    b : SymbolGrid
        Table on ``Side.ON_XI``.
    method : {"fft", "direct"}
        ``"direct"`` evaluates the double character sum and serves as oracle.
    """
    if b.side is not Side.ON_XI:
        raise SideError("sym_fourier expects a table on Xi")
    return SymbolGrid(b.space, fourier_array(b.values, b.space, method), Side.ON_XI_STAR)


def inv_sym_fourier(a: SymbolGrid, method: str = "fft") -> SymbolGrid:
    """Inverse transform ``a -> a_check`` from Xi* back to Xi."""
    if a.side is not Side.ON_XI_STAR:
        raise SideError("inv_sym_fourier expects a table on Xi*")
    # sigma is antisymmetric, so the inverse sum has the same kernel
    return SymbolGrid(a.space, fourier_array(a.values, a.space, method), Side.ON_XI)
