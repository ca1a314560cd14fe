"""Closed-form predictions, constants, and the staircase construction.

Everything here is deterministic arithmetic: harmonic/digamma formulas for
exact means, the scaling laws the Monte Carlo suites test against, the
high-probability envelope for the s profile, and the staircase probability
vector whose entropy pins the additive constant in the ln N lower bound.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate, optimize

from .bounds import ProbVector

EULER_GAMMA = 0.5772156649015328606

# Coefficient of the high-probability envelope for the s profile:
# s_k <= sqrt(ENVELOPE_COEFF * ((k+1)/N) * (1 + ln(2N/(k+1)))) w.h.p.
ENVELOPE_COEFF = 4.18

# Proven ceiling on ln N minus the staircase-vector entropy (the additive
# constant in the two-measurement entropy lower bound).
STAIRCASE_GAP_CEILING = 3.49

# Denominator constant in the per-block expected-norm bound that the envelope
# coefficient is calibrated against.
COVERING_BOUND_D = 4.175

# Upper integration limit for the staircase entropy integral; slightly above
# the unit-crossing fraction of the envelope.
STAIRCASE_INTEGRAL_LIMIT = 0.052

# Exponent denominator in the concentration tail 2 exp(-N t^2 / TAIL_DENOM)
# for the spread of submatrix norms around their medians.
TAIL_DENOM = 12.0

_HARMONIC_EXACT_LIMIT = 10**6


def harmonic_number(m: int) -> float:
    """m-th harmonic number; exact summation up to 10^6, then an asymptotic tail.

    The asymptotic branch ln m + gamma + 1/2m - 1/12m^2 truncates at the
    1/120m^4 term, which is below 1e-24 for every m it is used on.
    """
    if m < 1:
        raise ValueError("harmonic numbers need m >= 1")
    if m <= _HARMONIC_EXACT_LIMIT:
        return float(np.sum(1.0 / np.arange(1, m + 1, dtype=float)))
    return math.log(m) + EULER_GAMMA + 1.0 / (2 * m) - 1.0 / (12 * m * m)


def expected_subvector_norm_sq(n: int, N: int) -> float:
    """Exact mean of the squared best n-subvector norm of one Haar column."""
    if not 1 <= n <= N:
        raise ValueError("need 1 <= n <= N")
    return (n / N) * (1.0 + harmonic_number(N) - harmonic_number(n))


def expected_ordered_column_weight(m: int, N: int) -> float:
    """Exact mean of the m-th largest squared modulus of one Haar column."""
    if not 1 <= m <= N:
        raise ValueError("need 1 <= m <= N")
    h_prev = harmonic_number(m - 1) if m > 1 else 0.0
    return (harmonic_number(N) - h_prev) / N


_DIGAMMA_SHIFT = 10.0
# Bernoulli-number coefficients of the asymptotic series in 1/z^2.
_DIGAMMA_SERIES = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
)


def digamma(z: float) -> float:
    """Digamma via upward recurrence and the de Moivre series; error < 1e-12."""
    if z <= 0:
        raise ValueError("digamma implemented for positive arguments only")
    value = 0.0
    while z < _DIGAMMA_SHIFT:
        value -= 1.0 / z
        z += 1.0
    r = 1.0 / (z * z)
    tail = 0.0
    for coeff in reversed(_DIGAMMA_SERIES):
        tail = r * (coeff + tail)
    return value + math.log(z) - 0.5 / z - tail


def jones_mean_entropy(N: int) -> float:
    """Expected outcome entropy of a uniformly random pure state: Psi(N+1) - Psi(2)."""
    if N < 1:
        raise ValueError("dimension must be at least 1")
    return digamma(N + 1) - digamma(2)


def jiang_scale(N: int) -> float:
    """Almost-sure scale of the largest entry modulus: sqrt(2 ln N / N)."""
    if N < 2:
        raise ValueError("needs N >= 2")
    return math.sqrt(2.0 * math.log(N) / N)


def fixed_block_scale(n: int, m: int, N: int) -> float:
    """Limit scale of the best n x m block norm: sqrt((n+m) ln N / N)."""
    if N < 2 or n < 1 or m < 1 or n > N or m > N:
        raise ValueError("invalid block shape")
    return math.sqrt((n + m) * math.log(N) / N)


def one_column_scale(n: int, N: int) -> float:
    """Uniform-in-n scale of the best n x 1 block norm."""
    if N < 2 or not 1 <= n <= N:
        raise ValueError("need 2 <= N and 1 <= n <= N")
    return math.sqrt(((n + 1) / N) * (1.0 + math.log(N / n)))


def sk_envelope(k: int, N: int) -> float:
    """High-probability envelope for s_k at dimension N."""
    if not 1 <= k <= N:
        raise ValueError("need 1 <= k <= N")
    x = (k + 1) / N
    return math.sqrt(ENVELOPE_COEFF * x * (1.0 + math.log(2.0 / x)))


def multi_envelope(k: int, N: int, L: int, c_g: float) -> float:
    """Envelope for sqrt(S_k) with a caller-supplied leading constant.

    The universal constant in front of this shape is not pinned numerically
    anywhere; callers calibrate c_g empirically and report it.
    """
    if L < 2:
        raise ValueError("needs at least two measurements")
    if not 0 <= k <= L * N - 1:
        raise ValueError("k out of range")
    frac = (k + 1) / N
    return 1.0 + math.sqrt(c_g * frac * math.log(math.e * N * L / (k + 1)))


def _envelope_sq_unit_residual(x: float) -> float:
    return ENVELOPE_COEFF * x * (1.0 + math.log(2.0 / x)) - 1.0


def solve_xstar() -> float:
    """Fraction x* where the squared envelope reaches one, by bisection to 1e-10."""
    return float(
        optimize.bisect(_envelope_sq_unit_residual, 1e-12, 1.0 - 1e-12, xtol=1e-10)
    )


def _staircase_density(x: float) -> float:
    """Derivative of the envelope mass sqrt(C x (1 + ln(2/x))) in x."""
    return (
        math.sqrt(ENVELOPE_COEFF)
        * math.log(2.0 / x)
        / (2.0 * math.sqrt(x * math.log(2.0 * math.e / x)))
    )


def staircase_integral() -> float:
    """The limiting entropy deficit integral of g ln g over (0, 0.052).

    The integrand has an integrable singularity at 0; the substitution x = t^2
    removes it before adaptive quadrature (requested tolerance 1e-6).
    """

    def integrand(t: float) -> float:
        g = _staircase_density(t * t)
        return 2.0 * t * g * math.log(g)

    value, _ = integrate.quad(
        integrand, 0.0, math.sqrt(STAIRCASE_INTEGRAL_LIMIT), epsabs=1e-6, limit=200
    )
    return float(value)


def r_vector_with_cutoff(N: int):
    """Staircase probability vector and its cutoff index.

    The first entry is the envelope mass at 2/N; subsequent entries are the
    envelope-derivative increments (1/N) g(i/N) while the running sum stays at
    most 1; the remainder closes the vector to unit mass.
    """
    if N < 4:
        raise ValueError("staircase construction needs N >= 4")
    first = math.sqrt(ENVELOPE_COEFF * (2.0 / N) * (1.0 + math.log(N)))
    entries = [first]
    total = first
    cutoff = 1
    for i in range(2, N + 1):
        step = _staircase_density(i / N) / N
        if total + step > 1.0:
            break
        entries.append(step)
        total += step
        cutoff = i
    entries.append(1.0 - total)
    return ProbVector(np.array(entries), 1.0), cutoff


def r_vector(N: int) -> ProbVector:
    """Staircase probability vector; see r_vector_with_cutoff."""
    vec, _ = r_vector_with_cutoff(N)
    return vec


def covering_objective(eps: float, D: float = COVERING_BOUND_D) -> float:
    """Objective whose minimum over the net parameter eps yields the envelope constant."""
    if not 0.0 < eps < 1.0 / 3.0:
        raise ValueError("net parameter must lie in (0, 1/3)")
    shrink = 1.0 - 2.0 * eps - eps * eps
    return (1.0 / (shrink * shrink)) * (
        1.0 + 2.0 * math.log(1.0 + 2.0 / eps) / math.log(2.0 * math.e * D)
    )


def covering_minimum(D: float = COVERING_BOUND_D):
    """Golden-section minimum of the covering objective over (0, 1/3)."""
    res = optimize.minimize_scalar(
        covering_objective,
        bracket=(1e-3, 0.039, 1.0 / 3.0 - 1e-9),
        args=(D,),
        method="golden",
        options={"xtol": 1e-10},
    )
    return float(res.x), float(res.fun)


def concentration_tail(N: int, t: float) -> float:
    """Sub-Gaussian tail bound 2 exp(-N t^2 / 12) for norm spread around the median."""
    if N < 1 or t < 0:
        raise ValueError("need N >= 1 and t >= 0")
    return 2.0 * math.exp(-N * t * t / TAIL_DENOM)


def constants_table() -> list:
    """Every named constant with its value and role, for export and display."""
    xstar = solve_xstar()
    eps, cover = covering_minimum()
    return [
        {
            "name": "envelope_coeff",
            "value": ENVELOPE_COEFF,
            "description": "coefficient of the high-probability s_k envelope",
        },
        {
            "name": "staircase_gap_ceiling",
            "value": STAIRCASE_GAP_CEILING,
            "description": "proven ceiling on ln N minus the staircase entropy",
        },
        {
            "name": "covering_bound_D",
            "value": COVERING_BOUND_D,
            "description": "denominator constant in the per-block expected-norm bound",
        },
        {
            "name": "staircase_integral_limit",
            "value": STAIRCASE_INTEGRAL_LIMIT,
            "description": "upper limit of the staircase entropy integral",
        },
        {
            "name": "tail_denom",
            "value": TAIL_DENOM,
            "description": "denominator in the concentration tail exponent N t^2 / 12",
        },
        {
            "name": "euler_gamma",
            "value": EULER_GAMMA,
            "description": "Euler-Mascheroni constant",
        },
        {
            "name": "xstar",
            "value": xstar,
            "description": "fraction where the squared s_k envelope reaches one",
        },
        {
            "name": "staircase_integral",
            "value": staircase_integral(),
            "description": "limiting entropy deficit of the staircase vector",
        },
        {
            "name": "covering_eps",
            "value": eps,
            "description": "net parameter minimizing the covering objective",
        },
        {
            "name": "covering_minimum",
            "value": cover,
            "description": "minimal covering objective at D = 4.175",
        },
    ]
