"""Shannon entropy, majorization tools, and the entropic lower bounds.

All logarithms are natural. Probability vectors carry a declared mass so the
same type covers ordinary distributions (mass 1) and direct sums of several
distributions (mass L). Bounds on a measurement pair are evaluated on the
unitary that relates the two bases; multi-measurement bounds consume the
S profile of the concatenated bases.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matrices import as_matrix, require_unitary
from .search import NormProfile

_NEG_CLAMP = 1e-12
_MASS_TOL = 1e-8


@dataclass(frozen=True)
class ProbVector:
    """Nonnegative weights with a declared total mass."""

    weights: np.ndarray
    mass: float = 1.0

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "weights", w)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("weights must be a nonempty 1-D sequence")
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")
        if np.any(w < -_NEG_CLAMP):
            raise ValueError("negative weight beyond the clamping tolerance")
        if abs(w.sum() - self.mass) > _MASS_TOL * max(1.0, abs(self.mass)):
            raise ValueError(
                f"weights sum to {w.sum():.12g}, declared mass is {self.mass:.12g}"
            )


def _clean_weights(v) -> np.ndarray:
    w = v.weights if isinstance(v, ProbVector) else np.asarray(v, dtype=float)
    if np.any(w < -_NEG_CLAMP):
        raise ValueError("negative weight beyond the clamping tolerance")
    return np.maximum(w, 0.0)


def shannon_entropy(v) -> float:
    """-sum w ln w with 0 ln 0 = 0; accepts a ProbVector or a plain array."""
    w = _clean_weights(v)
    nz = w[w > 0.0]
    return float(-(nz * np.log(nz)).sum())


def measurement_distribution(u, psi) -> ProbVector:
    """Outcome distribution (|<column_j(u)|psi>|^2)_j of measuring psi in u's basis."""
    a = require_unitary(u)
    vec = np.asarray(psi, dtype=np.complex128)
    if vec.shape != (a.shape[0],):
        raise ValueError("state dimension does not match the basis")
    amps = a.conj().T @ vec
    p = np.abs(amps) ** 2
    total = p.sum()
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"outcome mass {total:.12g} is not 1; state not normalized?")
    return ProbVector(p, 1.0)


def largest_two_moduli(u) -> tuple:
    """(c, c2): the two largest entry moduli over all N^2 positions."""
    mods = np.abs(as_matrix(u)).ravel()
    top = np.partition(mods, mods.size - 2)[-2:] if mods.size >= 2 else mods
    if mods.size < 2:
        raise ValueError("need at least two entries")
    return float(top[1]), float(top[0])


def maassen_uffink(u) -> float:
    """-ln c^2 where c is the largest entry modulus of the relating unitary."""
    a = require_unitary(u)
    c = float(np.abs(a).max())
    return float(-2.0 * np.log(c))


def coles_piani(u) -> float:
    """-ln c^2 plus the second-largest-entry correction (1/2 - c/2) ln(c^2/c2^2)."""
    a = require_unitary(u)
    if a.shape[0] < 2:
        raise ValueError("needs dimension at least 2")
    c, c2 = largest_two_moduli(a)
    return float(-2.0 * np.log(c) + (0.5 - 0.5 * c) * np.log(c**2 / c2**2))


def _profile_increments(values: np.ndarray, lead: float | None = None) -> np.ndarray:
    """Differences of a nondecreasing profile, clamping float-level dips."""
    base = values if lead is None else np.concatenate([[lead], values])
    diffs = np.diff(base)
    if np.any(diffs < -_NEG_CLAMP):
        raise ValueError("profile is not nondecreasing")
    return np.maximum(diffs, 0.0)


def tensor_majorization_bound(r: NormProfile) -> float:
    """H(Q) where Q = (R_1, R_2 - R_1, ..., R_N - R_{N-1})."""
    if r.kind != "R":
        raise ValueError("expected an R profile")
    q = _profile_increments(r.values, lead=0.0)
    return shannon_entropy(q)


def strong_direct_sum_bound(s: NormProfile) -> float:
    """H((s_1, s_2 - s_1, ..., s_N - s_{N-1})); the argument has mass s_N = 1."""
    if s.kind != "s":
        raise ValueError("expected an s profile")
    x = _profile_increments(s.values, lead=0.0)
    return shannon_entropy(x)


def multi_measurement_bound(s: NormProfile) -> float:
    """Entropy bound from the S profile: -sum (S_i - S_{i-1}) ln(S_i - S_{i-1}).

    The sum runs from i = 1 to LN with S_LN set to L, the total mass of the
    direct sum of the L outcome distributions.
    """
    if s.kind != "S":
        raise ValueError("expected an S profile")
    extended = np.concatenate([s.values, [float(s.L)]])
    diffs = _profile_increments(extended)
    return shannon_entropy(diffs)


def sorted_desc(v) -> np.ndarray:
    w = _clean_weights(v)
    return -np.sort(-w)


def is_majorized(x, y, tol: float = 1e-9) -> bool:
    """True iff x is majorized by y: partial sums of x never exceed y's, totals equal."""
    mx = x.mass if isinstance(x, ProbVector) else float(np.sum(_clean_weights(x)))
    my = y.mass if isinstance(y, ProbVector) else float(np.sum(_clean_weights(y)))
    if abs(mx - my) > tol:
        raise ValueError(f"mass mismatch: {mx:.12g} vs {my:.12g}")
    xs = np.cumsum(sorted_desc(x))
    ys = np.cumsum(sorted_desc(y))
    if xs.size < ys.size:
        xs = np.concatenate([xs, np.full(ys.size - xs.size, xs[-1])])
    elif ys.size < xs.size:
        ys = np.concatenate([ys, np.full(xs.size - ys.size, ys[-1])])
    if abs(xs[-1] - ys[-1]) > tol:
        return False
    return bool(np.all(xs <= ys + tol))


def direct_sum(vs) -> ProbVector:
    """Concatenate distributions; masses add."""
    vs = list(vs)
    if not vs:
        raise ValueError("need at least one vector")
    weights = np.concatenate([_clean_weights(v) for v in vs])
    mass = sum(v.mass if isinstance(v, ProbVector) else float(np.sum(_clean_weights(v))) for v in vs)
    return ProbVector(weights, mass)


def tensor_product(x, y) -> ProbVector:
    """Elementwise products of all pairs; masses multiply."""
    wx, wy = _clean_weights(x), _clean_weights(y)
    mx = x.mass if isinstance(x, ProbVector) else float(wx.sum())
    my = y.mass if isinstance(y, ProbVector) else float(wy.sum())
    return ProbVector(np.outer(wx, wy).ravel(), mx * my)


@dataclass(frozen=True)
class BoundReport:
    """Every lower bound for one measurement pair, plus the witnesses c, c2."""

    b_mu: float
    b_cp: float
    h_q: float
    strong: float
    c: float
    c2: float
    multi: float | None = None
    min_upper: float | None = None

    def bounds(self) -> dict:
        out = {"b_mu": self.b_mu, "b_cp": self.b_cp, "h_q": self.h_q, "strong": self.strong}
        if self.multi is not None:
            out["multi"] = self.multi
        return out


def bound_report(u, s: NormProfile, min_upper: float | None = None) -> BoundReport:
    """Assemble all two-measurement bounds from a unitary and its s profile."""
    from .search import r_profile

    a = require_unitary(u)
    c, c2 = largest_two_moduli(a)
    return BoundReport(
        b_mu=maassen_uffink(a),
        b_cp=coles_piani(a),
        h_q=tensor_majorization_bound(r_profile(s)),
        strong=strong_direct_sum_bound(s),
        c=c,
        c2=c2,
        min_upper=min_upper,
    )
