"""Reproducible sampling of Haar unitaries, Ginibre matrices, and pure states.

Randomness is addressed, not sequenced: every draw site owns an RngStream,
which is a root seed plus a path of integers. The same (seed, path) produces
the same bytes on any platform and under any worker count, so parallel trials
never race for a shared generator.

Gaussians come from the Marsaglia polar method on top of the counter-based
generator. The method name is exported so run headers can record it; archived
seeds stay replayable as long as the recorded method matches.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .matrices import as_matrix

GAUSSIAN_METHOD = "marsaglia-polar"


@dataclass(frozen=True)
class RngStream:
    """Addressable random stream: a root seed plus a path of integers."""

    root_seed: int
    path: tuple = field(default_factory=tuple)

    def child(self, *indices: int) -> "RngStream":
        """Derive a sub-stream by appending indices to the path."""
        return RngStream(self.root_seed, self.path + tuple(int(i) for i in indices))

    def generator(self) -> np.random.Generator:
        """Fresh counter-based generator for this stream address."""
        seq = np.random.SeedSequence(self.root_seed, spawn_key=self.path)
        return np.random.Generator(np.random.Philox(seq))

    def path_string(self) -> str:
        return "/".join(str(i) for i in (self.root_seed,) + self.path)

    @staticmethod
    def from_path_string(s: str) -> "RngStream":
        parts = [int(tok) for tok in s.split("/")]
        if not parts:
            raise ValueError("empty stream path")
        return RngStream(parts[0], tuple(parts[1:]))


def _polar_normals(gen: np.random.Generator, count: int) -> np.ndarray:
    """count standard normals via the vectorized Marsaglia polar method.

    The rejection loop draws deterministic batch sizes from the generator, so
    the output is a pure function of the stream state.
    """
    out = np.empty(count)
    filled = 0
    while filled < count:
        need = count - filled
        # Acceptance rate is pi/4 and each accepted point yields two normals.
        batch = max(64, (need // 2) * 2 + need // 3 + 16)
        u = 2.0 * gen.random(batch) - 1.0
        v = 2.0 * gen.random(batch) - 1.0
        s = u * u + v * v
        keep = (s > 0.0) & (s < 1.0)
        u, v, s = u[keep], v[keep], s[keep]
        factor = np.sqrt(-2.0 * np.log(s) / s)
        pair = np.empty(2 * u.size)
        pair[0::2] = u * factor
        pair[1::2] = v * factor
        take = min(pair.size, need)
        out[filled : filled + take] = pair[:take]
        filled += take
    return out


def sample_ginibre(stream: RngStream, rows: int, cols: int) -> np.ndarray:
    """rows x cols matrix of i.i.d. standard complex Gaussians (E|entry|^2 = 1)."""
    if rows < 1 or cols < 1:
        raise ValueError("Ginibre dimensions must be at least 1")
    gen = stream.generator()
    flat = _polar_normals(gen, 2 * rows * cols)
    re = flat[: rows * cols].reshape(rows, cols)
    im = flat[rows * cols :].reshape(rows, cols)
    return (re + 1j * im) / np.sqrt(2.0)


def sample_haar_unitary(stream: RngStream, n: int) -> np.ndarray:
    """Haar-distributed n x n unitary.

    Orthonormalizes a Ginibre draw and rephases each column so the triangular
    factor has a positive diagonal; without that fix the distribution of the
    raw QR factor is not invariant.
    """
    if n < 1:
        raise ValueError("dimension must be at least 1")
    z = sample_ginibre(stream, n, n)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r).copy()
    mod = np.abs(diag)
    # A zero diagonal entry has probability zero; keep the phase neutral if
    # floating point ever produces one.
    phases = np.where(mod > 0, diag / np.where(mod > 0, mod, 1.0), 1.0)
    return as_matrix(q * phases)


def sample_pure_state(stream: RngStream, n: int) -> np.ndarray:
    """Uniform unit vector in complex dimension n (normalized Ginibre column)."""
    if n < 1:
        raise ValueError("dimension must be at least 1")
    z = sample_ginibre(stream, n, 1)[:, 0]
    norm = np.linalg.norm(z)
    return z / norm
