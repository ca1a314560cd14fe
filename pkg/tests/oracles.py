"""Independent brute-force reference implementations for the search module.

Deliberately different machinery from the library: column-major index
iteration, norms through raw singular spectra of the dense blocks, no
pruning, no batching. Slow and only usable at toy sizes, which is the point.
"""

import itertools

import numpy as np


def fourier_matrix(n: int) -> np.ndarray:
    """Unitary discrete Fourier matrix, the flattest basis change there is."""
    j = np.arange(n)
    return np.exp(2j * np.pi * np.outer(j, j) / n) / np.sqrt(n)


def brute_block_norm(u, n: int, m: int):
    """Max operator norm over all n x m blocks by plain double enumeration."""
    a = np.asarray(u, dtype=np.complex128)
    best = -1.0
    witness = None
    for cols in itertools.combinations(range(a.shape[1]), m):
        for rows in itertools.combinations(range(a.shape[0]), n):
            block = a[np.ix_(rows, cols)]
            sigma = float(np.linalg.svd(block, compute_uv=False)[0])
            if sigma > best + 1e-15:
                best = sigma
                witness = (rows, cols)
    return best, witness


def brute_s_profile(u) -> np.ndarray:
    a = np.asarray(u, dtype=np.complex128)
    side = a.shape[0]
    values = np.zeros(side)
    for k in range(1, side + 1):
        best = -1.0
        for n in range(max(1, k + 1 - side), min(k, side) + 1):
            m = k + 1 - n
            val, _ = brute_block_norm(a, n, m)
            best = max(best, val)
        values[k - 1] = best
    return values


def brute_r_profile(u) -> np.ndarray:
    return ((1.0 + brute_s_profile(u)) / 2.0) ** 2


def brute_multi_profile(us) -> np.ndarray:
    w = np.hstack([np.asarray(u, dtype=np.complex128) for u in us])
    total = w.shape[1]
    values = np.zeros(total)
    for k in range(total):
        best = -1.0
        for cols in itertools.combinations(range(total), k + 1):
            sigma = float(np.linalg.svd(w[:, cols], compute_uv=False)[0])
            best = max(best, sigma)
        values[k] = best**2
    return values


def brute_column_subvector(u, n: int) -> float:
    a = np.asarray(u, dtype=np.complex128)
    best = -1.0
    for j in range(a.shape[1]):
        for rows in itertools.combinations(range(a.shape[0]), n):
            best = max(best, float(np.linalg.norm(a[list(rows), j])))
    return best
