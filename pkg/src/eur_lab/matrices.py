"""Dense complex matrix helpers: norms, submatrix extraction, unitarity checks.

Matrices are plain numpy arrays of complex128 in row-major order. Index sets
are strictly increasing integer sequences. Everything here is a pure function;
nothing mutates its input.
"""

from __future__ import annotations

import numpy as np

# Blocks with min side up to this size get their singular values through the
# Hermitian eigendecomposition of the Gram matrix, which is faster than a full
# SVD for the small dense blocks the subset searches produce.
GRAM_SIDE_LIMIT = 64


def as_matrix(m) -> np.ndarray:
    """Validate and return m as a 2-D complex128 array with finite entries."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"expected a 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
        raise ValueError("matrix has non-finite entries")
    return a


def check_index_set(indices, universe: int) -> np.ndarray:
    """Validate a strictly increasing index set inside [0, universe)."""
    idx = np.asarray(indices, dtype=np.intp)
    if idx.ndim != 1 or idx.size == 0:
        raise ValueError("index set must be a nonempty 1-D sequence")
    if np.any(idx < 0) or np.any(idx >= universe):
        raise ValueError(f"index out of range for universe {universe}")
    if np.any(np.diff(idx) <= 0):
        raise ValueError("index set must be strictly increasing")
    return idx


def submatrix(m, rows, cols) -> np.ndarray:
    """Return the block of m on the given row and column index sets."""
    a = as_matrix(m)
    r = check_index_set(rows, a.shape[0])
    c = check_index_set(cols, a.shape[1])
    return a[np.ix_(r, c)]


def singular_spectrum(m) -> np.ndarray:
    """All singular values of m, nonincreasing.

    For blocks whose short side is at most GRAM_SIDE_LIMIT the values come
    from the eigenvalues of the Gram matrix (clipped at zero before the square
    root); larger matrices go through a full SVD.
    """
    a = as_matrix(m)
    if min(a.shape) <= GRAM_SIDE_LIMIT:
        if a.shape[0] <= a.shape[1]:
            gram = a @ a.conj().T
        else:
            gram = a.conj().T @ a
        eigs = np.linalg.eigvalsh(gram)
        return np.sqrt(np.clip(eigs[::-1], 0.0, None))
    return np.linalg.svd(a, compute_uv=False)


def operator_norm(m) -> float:
    """Largest singular value of m."""
    a = as_matrix(m)
    # Cheap closed forms for vectors and scalars.
    if a.shape[0] == 1 or a.shape[1] == 1:
        return float(np.linalg.norm(a))
    return float(singular_spectrum(a)[0])


def hs_norm(m) -> float:
    """Hilbert-Schmidt (Frobenius) norm."""
    return float(np.linalg.norm(as_matrix(m)))


def unitarity_defect(m) -> float:
    """Hilbert-Schmidt distance of m†m from the identity; 0 iff m is unitary."""
    a = as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise ValueError("unitarity defect needs a square matrix")
    gram = a.conj().T @ a
    return float(np.linalg.norm(gram - np.eye(a.shape[0])))


def require_unitary(m, tol: float = 1e-8) -> np.ndarray:
    """Return m validated as unitary within tol."""
    a = as_matrix(m)
    defect = unitarity_defect(a)
    if defect > tol:
        raise ValueError(f"matrix is not unitary (defect {defect:.3e} > {tol:.1e})")
    return a


def save_matrix(path, m) -> None:
    """Write m as UTF-8 text: first line "N M", then rows of re+imj entries.

    Entries carry 17 significant digits so a load/save round trip is
    bit-stable.
    """
    a = as_matrix(m)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{a.shape[0]} {a.shape[1]}\n")
        for row in a:
            fh.write(" ".join(f"{z.real:.16e}{z.imag:+.16e}j" for z in row))
            fh.write("\n")


def load_matrix(path) -> np.ndarray:
    """Read a matrix written by save_matrix."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError("matrix file must start with a 'rows cols' line")
        rows, cols = int(header[0]), int(header[1])
        out = np.empty((rows, cols), dtype=np.complex128)
        for i in range(rows):
            parts = fh.readline().split()
            if len(parts) != cols:
                raise ValueError(f"row {i} has {len(parts)} entries, expected {cols}")
            out[i] = [complex(tok) for tok in parts]
    return as_matrix(out)
