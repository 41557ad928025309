"""Hot numeric kernels, with numba-compiled and pure-numpy implementations.

Every kernel exists twice: ``<name>_numpy`` (vectorized numpy/scipy) and,
when numba is importable, ``<name>_numba`` (@njit). The module-level alias
``<name>`` points at the numba build unless the environment variable
``SRLED_NUMBA`` is set to ``0``/``false``/``off``. ``benchmarks/bench_kernels.py``
times both paths.

All numba kernels are serial (no prange) so that reductions are bit-for-bit
deterministic across runs, which the sweep output contract requires.
"""

from __future__ import annotations

import os

import numpy as np
from scipy.signal import lfilter


def _flag_enabled() -> bool:
    return os.environ.get("SRLED_NUMBA", "1").strip().lower() not in ("0", "false", "off")


try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    numba = None
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and _flag_enabled()


# ---------------------------------------------------------------------------
# numpy implementations
# ---------------------------------------------------------------------------

def loop_abs2_numpy(omega, a_coef, b_coef):
    """|s(omega)|^2 = (A - omega^2)^2 + (B omega)^2 on an array."""
    w2 = omega * omega
    d = a_coef - w2
    return d * d + b_coef * b_coef * w2


def commutator_vals_numpy(omega, two_kappa, base, a_coef, b_coef):
    """c(omega) = (2 kappa omega^2 + base) / |s(omega)|^2 on an array."""
    w2 = omega * omega
    d = a_coef - w2
    return (two_kappa * w2 + base) / (d * d + b_coef * b_coef * w2)


def lorentzian_vals_numpy(omega, gamma, variance):
    """2 gamma variance / (omega^2 + gamma^2) on an array."""
    return 2.0 * gamma * variance / (omega * omega + gamma * gamma)


def ar1_path_numpy(innovations, rho, sigma, init):
    """x[0] = init; x[j] = rho x[j-1] + sigma innovations[j] for j >= 1."""
    n = innovations.shape[0]
    drive = sigma * innovations
    drive[0] = init
    # lfilter computes y[j] = drive[j] + rho y[j-1]
    return lfilter([1.0], [1.0, -rho], drive)


def cumulant_reduce_numpy(weights, abs_j2):
    """sum_ij weights[i] weights[j] abs_j2[i, j] (weights fold in c(omega))."""
    return float(np.einsum("i,j,ij->", weights, weights, abs_j2))


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

if HAVE_NUMBA:
    _njit = numba.njit(cache=True, fastmath=False)

    @_njit
    def loop_abs2_numba(omega, a_coef, b_coef):
        out = np.empty_like(omega)
        for i in range(omega.shape[0]):
            w2 = omega[i] * omega[i]
            d = a_coef - w2
            out[i] = d * d + b_coef * b_coef * w2
        return out

    @_njit
    def commutator_vals_numba(omega, two_kappa, base, a_coef, b_coef):
        out = np.empty_like(omega)
        for i in range(omega.shape[0]):
            w2 = omega[i] * omega[i]
            d = a_coef - w2
            out[i] = (two_kappa * w2 + base) / (d * d + b_coef * b_coef * w2)
        return out

    @_njit
    def lorentzian_vals_numba(omega, gamma, variance):
        out = np.empty_like(omega)
        g2 = gamma * gamma
        for i in range(omega.shape[0]):
            out[i] = 2.0 * gamma * variance / (omega[i] * omega[i] + g2)
        return out

    @_njit
    def ar1_path_numba(innovations, rho, sigma, init):
        n = innovations.shape[0]
        out = np.empty(n)
        out[0] = init
        for j in range(1, n):
            out[j] = rho * out[j - 1] + sigma * innovations[j]
        return out

    @_njit
    def cumulant_reduce_numba(weights, abs_j2):
        n = weights.shape[0]
        acc = 0.0
        for i in range(n):
            row = 0.0
            for j in range(n):
                row += weights[j] * abs_j2[i, j]
            acc += weights[i] * row
        return acc


if USE_NUMBA:
    loop_abs2 = loop_abs2_numba
    commutator_vals = commutator_vals_numba
    lorentzian_vals = lorentzian_vals_numba
    ar1_path = ar1_path_numba
    cumulant_reduce = cumulant_reduce_numba
else:
    loop_abs2 = loop_abs2_numpy
    commutator_vals = commutator_vals_numpy
    lorentzian_vals = lorentzian_vals_numpy
    ar1_path = ar1_path_numpy
    cumulant_reduce = cumulant_reduce_numpy
