"""Coadjoint-orbit linear algebra for nilpotent Lie algebras.

An algebra is given by structure constants in a fixed basis ``X_1..X_n``
that is also a Jordan-Hoelder basis: with ``g_j = span(X_1..X_j)`` every
bracket ``[g, g_j]`` lands in ``g_{j-1}``. Indices in user-facing data and
reports are 1-based; arrays are 0-based internally.

For a functional ``xi0`` this module computes the isotropy algebra, the jump
indices ``e`` and the predual ``g_e``, multiplies by the Baker-Campbell-
Hausdorff series up to nilpotency class 4, and checks the projective
cocycle of the finite Heisenberg system.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Sequence

import numpy as np

from .phase_space import FinitePhaseSpace, PhasePoint, symplectic_form
from .weyl_core import WeylSystem

RANK_TOL = 1e-10
MAX_CLASS = 4
BUNDLED = ("abelian_3", "heisenberg_3", "heisenberg_5", "engel_4")


class AlgebraFormatError(ValueError):
    """Malformed algebra description."""


class UnsupportedClassError(ValueError):
    """Nilpotency class above what the truncated BCH series handles."""


class DecompositionError(RuntimeError):
    """``g_xi0 + g_e`` failed to span the algebra."""


# ---------------------------------------------------------------------------
# algebra data


@dataclass(frozen=True, eq=False)
class LieAlgebraData:
    """Structure constants ``c[i, j, k]`` with ``[X_i, X_j] = sum_k c[i, j, k] X_k``."""

    c: np.ndarray
    name: str = ""

    def __post_init__(self):
        c = np.array(self.c, dtype=float)
        if c.ndim != 3 or not (c.shape[0] == c.shape[1] == c.shape[2]):
            raise AlgebraFormatError(f"structure constants must be n x n x n, got {c.shape}")
        c.setflags(write=False)
        object.__setattr__(self, "c", c)

    @property
    def n(self) -> int:
        return self.c.shape[0]

    @classmethod
    def from_brackets(cls, dim: int, brackets: Sequence, name: str = "") -> "LieAlgebraData":
        """Build from ``{i, j, k, value}`` records (1-based, ``i < j``)."""
        if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
            raise AlgebraFormatError(f"dim must be a positive integer, got {dim!r}")
        c = np.zeros((dim, dim, dim))
        for rec in brackets:
            try:
                i, j, k, v = int(rec["i"]), int(rec["j"]), int(rec["k"]), float(rec["value"])
            except (KeyError, TypeError, ValueError) as exc:
                raise AlgebraFormatError(f"bad bracket record {rec!r}") from exc
            if not (1 <= i <= dim and 1 <= j <= dim and 1 <= k <= dim):
                raise AlgebraFormatError(f"index out of range in {rec!r}")
            if i >= j:
                raise AlgebraFormatError(f"only i < j may be stored, got {rec!r}")
            c[i - 1, j - 1, k - 1] += v
            c[j - 1, i - 1, k - 1] -= v
        return cls(c, name)

    @classmethod
    def from_dict(cls, data: dict) -> "LieAlgebraData":
        if "dim" not in data:
            raise AlgebraFormatError("missing 'dim'")
        return cls.from_brackets(data["dim"], data.get("brackets", []), data.get("name", ""))

    @classmethod
    def from_json(cls, source) -> "LieAlgebraData":
        """Load from a path or a JSON string."""
        if isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
            text = Path(source).read_text()
        else:
            text = source
        return cls.from_dict(json.loads(text))

    @classmethod
    def bundled(cls, name: str) -> "LieAlgebraData":
        if name not in BUNDLED:
            raise KeyError(f"unknown bundled algebra {name!r}; choose from {BUNDLED}")
        text = resources.files("weylkit").joinpath("data", f"{name}.json").read_text()
        return cls.from_json(text)

    @classmethod
    def abelian(cls, n: int) -> "LieAlgebraData":
        return cls(np.zeros((n, n, n)), f"abelian_{n}")

    @classmethod
    def heisenberg(cls, d: int) -> "LieAlgebraData":
        """``X_1 = Z``, ``X_{1+i} = P_i``, ``X_{1+d+i} = Q_i`` with ``[Q_i, P_i] = Z``."""
        n = 2 * d + 1
        c = np.zeros((n, n, n))
        for i in range(d):
            p, q = 1 + i, 1 + d + i
            c[q, p, 0] = 1.0
            c[p, q, 0] = -1.0
        return cls(c, f"heisenberg_{n}")

    @classmethod
    def strictly_upper(cls, m: int) -> "LieAlgebraData":
        """Strictly upper-triangular ``m x m`` matrices, ordered centre first.

        ``E_ab`` with larger ``b - a`` comes earlier, which makes the basis a
        Jordan-Hoelder basis.
        """
        pairs = sorted(((a, b) for a in range(m) for b in range(a + 1, m)), key=lambda p: (-(p[1] - p[0]), p[0]))
        index = {p: i for i, p in enumerate(pairs)}
        n = len(pairs)
        c = np.zeros((n, n, n))
        for (a, b), i in index.items():
            for (p, q), j in index.items():
                # [E_ab, E_pq] = delta_bp E_aq - delta_qa E_pb
                if b == p:
                    c[i, j, index[(a, q)]] += 1.0
                if q == a:
                    c[i, j, index[(p, b)]] -= 1.0
        return cls(c, f"n_{m}")

    def to_dict(self) -> dict:
        recs = []
        for i, j in itertools.combinations(range(self.n), 2):
            for k in range(self.n):
                v = self.c[i, j, k]
                if v != 0:
                    recs.append({"i": i + 1, "j": j + 1, "k": k + 1, "value": float(v)})
        return {"name": self.name, "dim": self.n, "brackets": recs}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    # algebra operations

    def bracket(self, X, Y) -> np.ndarray:
        return np.einsum("i,j,ijk->k", np.asarray(X, dtype=float), np.asarray(Y, dtype=float), self.c)

    def basis(self, j: int) -> np.ndarray:
        """Coefficient vector of ``X_j`` (1-based)."""
        e = np.zeros(self.n)
        e[j - 1] = 1.0
        return e

    def change_basis(self, M: np.ndarray, name: str = "") -> "LieAlgebraData":
        """Structure constants in the basis ``X'_j = sum_k M[k, j] X_k``."""
        M = np.asarray(M, dtype=float)
        Minv = np.linalg.inv(M)
        c = np.einsum("ai,bj,abk,lk->ijl", M, M, self.c, Minv)
        return LieAlgebraData(c, name or self.name)

    def direct_sum(self, other: "LieAlgebraData") -> "LieAlgebraData":
        n, m = self.n, other.n
        c = np.zeros((n + m,) * 3)
        c[:n, :n, :n] = self.c
        c[n:, n:, n:] = other.c
        return LieAlgebraData(c, f"{self.name}+{other.name}")

    def lower_central_series(self) -> list[int]:
        """Dimensions of ``g^1 = g``, ``g^{k+1} = [g, g^k]`` down to 0 (or a fixed point)."""
        n = self.n
        cur = np.eye(n)
        dims = [n]
        while cur.shape[0]:
            gen = np.einsum("ai,bj,ijk->abk", np.eye(n), cur, self.c).reshape(-1, n)
            cur = _row_basis(gen)
            if cur.shape[0] == dims[-1]:
                break
            dims.append(cur.shape[0])
        return dims

    def nilpotency_class(self) -> int | None:
        """Smallest ``k`` with ``g^{k+1} = 0``; ``None`` if not nilpotent."""
        dims = self.lower_central_series()
        if dims[-1] != 0:
            return None
        return len(dims) - 1

    def center(self) -> np.ndarray:
        """Rows spanning ``z = {X : [X, Y] = 0 for all Y}``."""
        ad = self.c.reshape(self.n, -1)  # row i: all [X_i, X_j]_k
        return _null_rows(ad.T)


def _row_basis(M: np.ndarray, tol: float = RANK_TOL) -> np.ndarray:
    if M.size == 0:
        return np.zeros((0, M.shape[-1]))
    u, s, vt = np.linalg.svd(M, full_matrices=False)
    r = int(np.sum(s > tol))
    return vt[:r]


def _null_rows(M: np.ndarray, tol: float = RANK_TOL) -> np.ndarray:
    """Rows spanning the null space ``{v : M v = 0}``."""
    n = M.shape[1]
    if M.size == 0:
        return np.eye(n)
    u, s, vt = np.linalg.svd(M)
    r = int(np.sum(s > tol))
    return vt[r:]


def rank(vectors, tol: float = RANK_TOL) -> int:
    V = np.atleast_2d(np.asarray(vectors, dtype=float))
    if V.size == 0:
        return 0
    return int(np.linalg.matrix_rank(V, tol=tol))


# ---------------------------------------------------------------------------
# validation


@dataclass
class Violation:
    kind: str  # "antisymmetry", "jacobi" or "flag"
    indices: tuple  # 1-based
    value: float

    def __str__(self):
        return f"{self.kind} at {self.indices}: {self.value:.3g}"


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set:
        return {v.kind for v in self.violations}

    def __bool__(self):
        return self.ok


def validate(alg: LieAlgebraData, tol: float = 1e-12) -> ValidationReport:
    """Check antisymmetry, Jacobi and the flag property exhaustively."""
    c = alg.c
    n = alg.n
    out = []
    for i, j, k in itertools.product(range(n), repeat=3):
        v = c[i, j, k] + c[j, i, k]
        if i <= j and abs(v) > tol:
            out.append(Violation("antisymmetry", (i + 1, j + 1, k + 1), float(v)))
    # Jacobi: [X_a,[X_b,X_c]] + cyclic = 0
    inner = np.einsum("bcm,aml->abcl", c, c)
    jac = inner + inner.transpose(1, 2, 0, 3) + inner.transpose(2, 0, 1, 3)
    for a, b, cc in itertools.combinations(range(n), 3):
        v = float(np.max(np.abs(jac[a, b, cc])))
        if v > tol:
            out.append(Violation("jacobi", (a + 1, b + 1, cc + 1), v))
    for i, j in itertools.combinations(range(n), 2):
        for k in range(i, n):
            if abs(c[i, j, k]) > tol:
                out.append(Violation("flag", (i + 1, j + 1, k + 1), float(c[i, j, k])))
    return ValidationReport(out)


# ---------------------------------------------------------------------------
# orbits


@dataclass(frozen=True)
class Functional:
    xi0: tuple

    def __post_init__(self):
        object.__setattr__(self, "xi0", tuple(float(v) for v in self.xi0))

    @classmethod
    def dual_basis(cls, n: int, j: int) -> "Functional":
        """``X_j^*`` (1-based)."""
        v = [0.0] * n
        v[j - 1] = 1.0
        return cls(tuple(v))

    def array(self) -> np.ndarray:
        return np.array(self.xi0)


def _xi(alg: LieAlgebraData, xi0) -> np.ndarray:
    v = np.asarray(xi0.xi0 if isinstance(xi0, Functional) else xi0, dtype=float)
    if v.shape != (alg.n,):
        raise AlgebraFormatError(f"functional needs {alg.n} coefficients, got shape {v.shape}")
    return v


def orbit_form(alg: LieAlgebraData, xi0) -> np.ndarray:
    """``B[i, j] = xi0([X_i, X_j])``."""
    return alg.c @ _xi(alg, xi0)


def isotropy(alg: LieAlgebraData, xi0) -> np.ndarray:
    """Rows spanning ``g_xi0 = {X : xi0 o ad X = 0}``."""
    return _null_rows(orbit_form(alg, xi0).T)


def jump_indices(alg: LieAlgebraData, xi0) -> list[int]:
    """``e = {j : g_j not inside g_{j-1} + g_xi0}``, 1-based and sorted."""
    iso = isotropy(alg, xi0)
    e = []
    for j in range(1, alg.n + 1):
        below = np.vstack([np.eye(alg.n)[: j - 1], iso]) if j > 1 else iso
        with_j = np.vstack([below, alg.basis(j)])
        if rank(with_j) > rank(below):
            e.append(j)
    return e


@dataclass
class OrbitData:
    isotropy_basis: np.ndarray
    jump_set: list
    predual_basis: np.ndarray
    n: int

    @property
    def isotropy_dim(self) -> int:
        return int(self.isotropy_basis.shape[0])

    def invariants(self) -> dict:
        both = np.vstack([self.isotropy_basis, self.predual_basis]) if self.n else np.zeros((0, 0))
        return {
            "dimension_count": self.isotropy_dim + len(self.jump_set) == self.n,
            "even_jump_set": len(self.jump_set) % 2 == 0,
            "direct_sum_rank": rank(both) == self.n,
        }

    def record(self) -> dict:
        return {
            "n": self.n,
            "isotropy_dim": self.isotropy_dim,
            "isotropy_basis": np.round(self.isotropy_basis, 12).tolist(),
            "jump_set": self.jump_set,
            "predual": [f"X{j}" for j in self.jump_set],
            **self.invariants(),
        }


def predual(alg: LieAlgebraData, xi0) -> OrbitData:
    """Isotropy, jump set and ``g_e = span{X_j : j in e}`` with the direct-sum check."""
    iso = isotropy(alg, xi0)
    e = jump_indices(alg, xi0)
    ge = np.array([alg.basis(j) for j in e]).reshape(len(e), alg.n)
    data = OrbitData(iso, e, ge, alg.n)
    if rank(np.vstack([iso, ge])) != alg.n:
        raise DecompositionError(f"g_xi0 + g_e does not span g (e = {e})")
    return data


def random_nilpotent(rng: np.random.Generator, max_dim: int = 6, max_class: int = 3) -> LieAlgebraData:
    """Random nilpotent algebra in a Jordan-Hoelder basis.

    A base algebra (Heisenberg, Engel, strictly upper-triangular 4 x 4,
    abelian or direct sums of these) is transported by a random upper
    triangular change of basis, which keeps every ``g_j`` fixed.
    """
    bases = [
        LieAlgebraData.heisenberg(1),
        LieAlgebraData.heisenberg(2),
        LieAlgebraData.bundled("engel_4"),
        LieAlgebraData.strictly_upper(4),
        LieAlgebraData.strictly_upper(3),
    ]
    while True:
        alg = bases[rng.integers(len(bases))]
        extra = int(rng.integers(0, 3))
        if extra and alg.n + extra <= max_dim:
            ab = LieAlgebraData.abelian(extra)
            alg = ab.direct_sum(alg) if rng.random() < 0.5 else alg.direct_sum(ab)
        if alg.n <= max_dim and (alg.nilpotency_class() or 0) <= max_class:
            break
    M = np.triu(rng.integers(-2, 3, size=(alg.n, alg.n)).astype(float), 1) + np.diag(rng.choice([-2.0, -1.0, 1.0, 2.0], alg.n))
    return alg.change_basis(M, alg.name + "'")


# ---------------------------------------------------------------------------
# BCH


def bch_multiply(alg: LieAlgebraData, X, Y) -> np.ndarray:
    """``X * Y = log(exp X exp Y)`` via the BCH series through degree 4.

    Exact for nilpotency class at most 4; higher class raises
    :class:`UnsupportedClassError` instead of truncating.
    """
    k = alg.nilpotency_class()
    if k is None or k > MAX_CLASS:
        raise UnsupportedClassError(f"nilpotency class {k} is not supported (max {MAX_CLASS})")
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    br = alg.bracket
    XY = br(X, Y)
    XXY = br(X, XY)
    YYX = br(Y, br(Y, X))
    YXXY = br(Y, XXY)
    return X + Y + 0.5 * XY + (XXY + YYX) / 12.0 - YXXY / 24.0


def bch_inverse(X) -> np.ndarray:
    return -np.asarray(X, dtype=float)


@dataclass
class CocycleReport:
    N: int
    d: int
    cases: int
    max_unimodular_error: float
    max_closed_form_error: float
    sigma_classes: int
    max_class_spread: float
    max_inverse_error: float
    tol: float = 1e-12

    @property
    def passed(self) -> bool:
        return (
            self.max_unimodular_error <= self.tol
            and self.max_closed_form_error <= self.tol
            and self.max_class_spread <= self.tol
            and self.max_inverse_error <= self.tol
        )

    def record(self) -> dict:
        return {**self.__dict__, "passed": self.passed}


def projective_cocycle_check(X: PhasePoint, Y: PhasePoint, sys: WeylSystem) -> dict:
    """Cocycle of one pair: ``pi(X) pi(Y) = c pi(X + Y)`` and ``pi(X)^{-1} pi(Y) = c' pi(Y - X)``."""
    sys.space.check_same(X.space)
    c = sys.cocycle(X, Y)
    Pi = sys.pi_matrix
    lhs = np.conj(Pi(X)).T @ Pi(Y)
    rhs = Pi(Y - X)
    c_inv = complex(np.vdot(rhs, lhs) / sys.D)
    return {
        "c": c,
        "abs_c": abs(c),
        "sigma": symplectic_form(X, Y),
        "closed_form_error": abs(c - sys.cocycle_closed(X, Y)),
        "c_inverse": c_inv,
        "inverse_error": float(np.max(np.abs(lhs - c_inv * rhs))),
        "inverse_closed_form_error": abs(c_inv - sys.cocycle_closed(-X, Y)),
    }


def cocycle_exhaustive(N: int = 5, d: int = 1) -> CocycleReport:
    """All pairs ``(X, Y)``: ``|c| = 1`` and ``c`` is a function of ``sigma(X, Y)``."""
    sys = WeylSystem(FinitePhaseSpace(N, d))
    pts = list(sys.space.points())
    by_sigma: dict = {}
    uni = closed = inv = 0.0
    for X in pts:
        for Y in pts:
            r = projective_cocycle_check(X, Y, sys)
            uni = max(uni, abs(r["abs_c"] - 1.0))
            closed = max(closed, r["closed_form_error"], r["inverse_closed_form_error"])
            inv = max(inv, r["inverse_error"])
            by_sigma.setdefault(r["sigma"], []).append(r["c"])
    spread = max(float(np.max(np.abs(np.array(v) - v[0]))) for v in by_sigma.values())
    return CocycleReport(N, d, len(pts) ** 2, uni, closed, len(by_sigma), spread, inv)


def heisenberg_bridge(N: int = 5) -> dict:
    """``h3`` has a two-dimensional predual; its finite Weyl cocycle passes exhaustively."""
    alg = LieAlgebraData.bundled("heisenberg_3")
    orbit = predual(alg, Functional.dual_basis(3, 1))
    report = cocycle_exhaustive(N, len(orbit.jump_set) // 2)
    return {"predual_dim": len(orbit.jump_set), "jump_set": orbit.jump_set, **report.record()}
