"""Hot inner loops, each in a numba and a pure-numpy flavour.

Every kernel works on flat integer index tables so it is independent of the
number of degrees of freedom. The public names at the bottom of the module
dispatch on :data:`weylkit._accel.USE_NUMBA`; the ``*_nb`` / ``*_np`` variants
stay importable so tests and the benchmark can compare them directly.
"""

import numpy as np

from ._accel import USE_NUMBA, njit


# ---------------------------------------------------------------------------
# direct symplectic Fourier sum:  out[P] = w * sum_X roots[sig[P, X]] * b[X]

@njit
def character_sum_nb(b, sig, roots, w):
    P = sig.shape[0]
    out = np.zeros(P, dtype=np.complex128)
    for i in range(P):
        acc = 0.0 + 0.0j
        for j in range(sig.shape[1]):
            acc += roots[sig[i, j]] * b[j]
        out[i] = w * acc
    return out


def character_sum_np(b, sig, roots, w):
    return w * (roots[sig] @ b)


# ---------------------------------------------------------------------------
# twisted convolution:  out[Z] = w * sum_X f[X] g[sub[Z, X]] roots[coc[X, sub[Z, X]]]

@njit
def twisted_convolution_nb(f, g, sub, coc, roots, w):
    P = f.shape[0]
    out = np.zeros(P, dtype=np.complex128)
    for z in range(P):
        acc = 0.0 + 0.0j
        for x in range(P):
            y = sub[z, x]
            acc += f[x] * g[y] * roots[coc[x, y]]
        out[z] = w * acc
    return out


def twisted_convolution_np(f, g, sub, coc, roots, w):
    xs = np.arange(f.shape[0])
    ys = sub  # [z, x]
    terms = f[None, :] * g[ys] * roots[coc[xs[None, :], ys]]
    return w * terms.sum(axis=1)


# ---------------------------------------------------------------------------
# row-wise gather:  out[i, j] = C[i, idx[i, j]]

@njit
def row_gather_nb(C, idx):
    R, K = idx.shape
    out = np.empty((R, K), dtype=C.dtype)
    for i in range(R):
        for j in range(K):
            out[i, j] = C[i, idx[i, j]]
    return out


def row_gather_np(C, idx):
    return np.take_along_axis(C, idx, axis=1)


# ---------------------------------------------------------------------------
# magnetic assembly:  out[x, src[x, X]] = scale * vals[X, x] * exp(i * gamma[x, X])

@njit
def translation_scatter_nb(vals, gamma, src, scale):
    D = src.shape[0]
    out = np.zeros((D, D), dtype=np.complex128)
    for x in range(D):
        for X in range(src.shape[1]):
            out[x, src[x, X]] = scale * vals[X, x] * np.exp(1j * gamma[x, X])
    return out


def translation_scatter_np(vals, gamma, src, scale):
    D = src.shape[0]
    out = np.zeros((D, D), dtype=np.complex128)
    rows = np.arange(D)[:, None]
    out[rows, src] = scale * vals.T * np.exp(1j * gamma)
    return out


# magnetic dequantization gather:  out[X, x] = T[x, src[x, X]] * exp(-i * gamma[x, X])

@njit
def translation_gather_nb(T, gamma, src):
    D = src.shape[0]
    out = np.empty((src.shape[1], D), dtype=np.complex128)
    for x in range(D):
        for X in range(src.shape[1]):
            out[X, x] = T[x, src[x, X]] * np.exp(-1j * gamma[x, X])
    return out


def translation_gather_np(T, gamma, src):
    rows = np.arange(src.shape[0])[:, None]
    return (T[rows, src] * np.exp(-1j * gamma)).T


if USE_NUMBA:
    character_sum = character_sum_nb
    twisted_convolution = twisted_convolution_nb
    row_gather = row_gather_nb
    translation_scatter = translation_scatter_nb
    translation_gather = translation_gather_nb
else:
    character_sum = character_sum_np
    twisted_convolution = twisted_convolution_np
    row_gather = row_gather_np
    translation_scatter = translation_scatter_np
    translation_gather = translation_gather_np

BACKEND = "numba" if USE_NUMBA else "numpy"
