"""Physical parameters, steady-state populations, and the two basic spectra.

Everything is expressed in units of the polarisation decay rate gamma_perp
(gamma_perp = 1 internally unless the caller rescales). The model describes a
single-mode two-level LED below threshold:

* ``loop_denominator`` s(omega) = (i omega - kappa)(i omega - gamma_perp/2)
  - (kappa gamma_perp / 2) N / N_th, the linear-response denominator whose
  zeros set the emission line shape,
* ``commutator_spectrum`` c(omega) = [2 kappa omega^2
  + (kappa gamma_perp^2 / 2)(1 - N/N_th)] / |s(omega)|^2, the field
  commutator spectrum, normalized so (2 pi)^-1 Int c d omega = 1,
* ``population_spectrum``, the Lorentzian spectrum of the upper-state
  population fluctuations (an Ornstein-Uhlenbeck process with rate
  gamma_P = gamma_par (P+1) and variance delta2_ne).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import kernels
from .errors import AboveThresholdError, GridMismatchError, InvalidParamsError


@dataclass(frozen=True)
class ModelParams:
    """One LED configuration.

    kappa        cavity decay rate (units of gamma_perp)
    gamma_par    population decay rate (units of gamma_perp)
    pump         dimensionless pumping rate P >= 0
    n_threshold  threshold inversion N_th > 0
    n_emitters   total emitter count N_0 >= 1
    gamma_perp   polarisation decay rate, the unit (default 1)
    f_factor     dimensionless coupling structure factor, about 1/2
    """

    kappa: float
    gamma_par: float
    pump: float
    n_threshold: float
    n_emitters: float
    gamma_perp: float = 1.0
    f_factor: float = 0.5

    def __post_init__(self):
        for name in ("kappa", "gamma_par", "gamma_perp", "n_threshold", "f_factor"):
            if not getattr(self, name) > 0.0 or not math.isfinite(getattr(self, name)):
                raise InvalidParamsError(f"{name} must be positive and finite, got {getattr(self, name)!r}")
        if not self.pump >= 0.0 or not math.isfinite(self.pump):
            raise InvalidParamsError(f"pump must be >= 0, got {self.pump!r}")
        if not self.n_emitters >= 1.0:
            raise InvalidParamsError(f"n_emitters must be >= 1, got {self.n_emitters!r}")
        if not math.isfinite(self.omega_rabi) or not self.omega_rabi > 0.0:
            raise InvalidParamsError("derived Rabi coupling is not a positive finite number")

    @property
    def kappa_ratio(self) -> float:
        """The adiabaticity parameter 2 kappa / gamma_perp."""
        return 2.0 * self.kappa / self.gamma_perp

    @property
    def omega_rabi(self) -> float:
        """Vacuum Rabi frequency implied by the threshold inversion."""
        return math.sqrt(self.kappa * self.gamma_perp / (2.0 * self.f_factor * self.n_threshold))

    @classmethod
    def from_ratio(cls, kappa_ratio: float, **kwargs) -> "ModelParams":
        """Build from 2 kappa / gamma_perp instead of kappa."""
        gamma_perp = kwargs.get("gamma_perp", 1.0)
        return cls(kappa=0.5 * kappa_ratio * gamma_perp, **kwargs)


@dataclass(frozen=True)
class Populations:
    """Steady-state populations and their fluctuation parameters.

    n_excited   mean upper-state population N_e
    n_ground    mean lower-state population N_g
    inversion   N = N_e - N_g
    delta2_ne   upper-state population fluctuation dispersion
    gamma_p     pump-broadened population decay rate gamma_par (P+1)
    diffusion   Langevin diffusion 2 D_NeNe = gamma_par (P N_g + N_e)
    """

    n_excited: float
    n_ground: float
    inversion: float
    delta2_ne: float
    gamma_p: float
    diffusion: float

    def without_fluctuations(self) -> "Populations":
        """Counterfactual copy with population fluctuations disabled."""
        return replace(self, delta2_ne=0.0)


def derive_populations(params: ModelParams) -> Populations:
    """Closed-form steady state for an incoherently pumped two-level medium.

    N_e = P N_0 / (P+1), N_e + N_g = N_0, delta2_ne = N_e / (P+1).
    Raises AboveThresholdError when the inversion reaches n_threshold, where
    the below-threshold model loses meaning.
    """
    p = params.pump
    n_e = p * params.n_emitters / (p + 1.0)
    n_g = params.n_emitters - n_e
    inversion = n_e - n_g
    if inversion >= params.n_threshold:
        raise AboveThresholdError(
            f"inversion {inversion:.6g} >= threshold {params.n_threshold:.6g}; "
            "the linear below-threshold model does not apply"
        )
    return Populations(
        n_excited=n_e,
        n_ground=n_g,
        inversion=inversion,
        delta2_ne=n_e / (p + 1.0),
        gamma_p=params.gamma_par * (p + 1.0),
        diffusion=params.gamma_par * (p * n_g + n_e),
    )


def loop_coefficients(params: ModelParams, pops: Populations) -> tuple[float, float]:
    """(A, B) with |s(omega)|^2 = (A - omega^2)^2 + (B omega)^2.

    A = s(0) = (kappa gamma_perp / 2)(1 - N/N_th); B = kappa + gamma_perp/2.
    """
    a = 0.5 * params.kappa * params.gamma_perp * (1.0 - pops.inversion / params.n_threshold)
    b = params.kappa + 0.5 * params.gamma_perp
    return a, b


def _check_below_threshold(params: ModelParams, pops: Populations) -> None:
    if pops.inversion >= params.n_threshold:
        raise AboveThresholdError(
            f"inversion {pops.inversion:.6g} >= threshold {params.n_threshold:.6g}"
        )


def _apply_kernel(kernel, omega, *args):
    """Run a 1-D float kernel over scalar or arbitrarily shaped omega."""
    w = np.asarray(omega, dtype=float)
    out = kernel(np.ascontiguousarray(w.reshape(-1)), *args)
    if w.ndim == 0:
        return float(out[0])
    return out.reshape(w.shape)


def loop_denominator(params: ModelParams, pops: Populations, omega):
    """s(omega), complex; accepts scalars or arrays."""
    w = np.asarray(omega, dtype=float)
    s = (1j * w - params.kappa) * (1j * w - 0.5 * params.gamma_perp) \
        - 0.5 * params.kappa * params.gamma_perp * (pops.inversion / params.n_threshold)
    return complex(s) if w.ndim == 0 else s


def loop_abs2(params: ModelParams, pops: Populations, omega):
    """|s(omega)|^2 on scalars or arrays."""
    a, b = loop_coefficients(params, pops)
    return _apply_kernel(kernels.loop_abs2, omega, a, b)


def commutator_spectrum(params: ModelParams, pops: Populations, omega):
    """c(omega): strictly positive, even, with (2 pi)^-1 Int c = 1."""
    _check_below_threshold(params, pops)
    a, b = loop_coefficients(params, pops)
    base = params.gamma_perp * a  # = (kappa gamma_perp^2/2)(1 - N/N_th)
    return _apply_kernel(kernels.commutator_vals, omega, 2.0 * params.kappa, base, a, b)


def population_spectrum(pops: Populations, omega):
    """Lorentzian spectrum of the population fluctuations.

    2 gamma_p delta2_ne / (omega^2 + gamma_p^2); its (2 pi)^-1 integral is
    delta2_ne. Identically zero when fluctuations are disabled.
    """
    return _apply_kernel(kernels.lorentzian_vals, omega, pops.gamma_p, pops.delta2_ne)


def validity_ratio(params: ModelParams) -> float:
    """gamma_par / sqrt(kappa gamma_perp).

    The narrow-population-spectrum (delta) approximation behind the closed
    forms holds when this is small; callers emit warnings above 0.1.
    """
    return params.gamma_par / math.sqrt(params.kappa * params.gamma_perp)


def energy_balance_residual(params: ModelParams, pops: Populations, n_photons: float) -> float:
    """Diagnostic residual 2 kappa n - gamma_par [P (N_0 - N_e) - N_e].

    With the closed-form populations the bracket vanishes identically, so the
    residual equals the cavity emission 2 kappa n that the linear-regime
    population balance neglects. Exposed for inspection only, never solved.
    """
    p = params.pump
    bracket = p * (params.n_emitters - pops.n_excited) - pops.n_excited
    return 2.0 * params.kappa * n_photons - params.gamma_par * bracket


# ---------------------------------------------------------------------------
# Sampling grids and sampled spectra
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform omega grid.

    layout="symmetric": odd point count, spans [-omega_max, omega_max].
    layout="fft": even point count, spans [-omega_max, omega_max - spacing),
    matching a power-of-two Monte Carlo record (fftshifted order).
    """

    omega_max: float
    n_points: int
    layout: str = "symmetric"

    def __post_init__(self):
        if not self.omega_max > 0.0:
            raise InvalidParamsError("omega_max must be positive")
        if self.layout == "symmetric":
            if self.n_points < 3 or self.n_points % 2 == 0:
                raise InvalidParamsError("symmetric grids need an odd point count >= 3")
        elif self.layout == "fft":
            if self.n_points < 2 or self.n_points % 2 == 1:
                raise InvalidParamsError("fft grids need an even point count >= 2")
        else:
            raise InvalidParamsError(f"unknown grid layout {self.layout!r}")

    @property
    def spacing(self) -> float:
        if self.layout == "symmetric":
            return 2.0 * self.omega_max / (self.n_points - 1)
        return 2.0 * self.omega_max / self.n_points

    def omegas(self) -> np.ndarray:
        if self.layout == "symmetric":
            return np.linspace(-self.omega_max, self.omega_max, self.n_points)
        return -self.omega_max + self.spacing * np.arange(self.n_points)

    @classmethod
    def for_model(cls, params: ModelParams, pops: Populations,
                  n_points: int = 8193, safety: float = 50.0) -> "FrequencyGrid":
        """Half-width covering every spectral scale.

        omega_max = safety * max(kappa, gamma_perp, sqrt(kappa gamma_perp
        (1 + |N|/N_th))). The 20x floor bounds the truncated tail mass of
        the |s|^-2 integrand near 1e-5; the 50x default brings it (and the
        faster-decaying |s|^-4 tails) below 1e-6, verified by the
        doubling-omega_max convergence test.
        """
        if safety < 20.0:
            raise InvalidParamsError("safety factor below the 20x tail rule")
        scale = widest_rate(params, pops)
        return cls(omega_max=safety * scale, n_points=n_points)


def widest_rate(params: ModelParams, pops: Populations) -> float:
    """max(kappa, gamma_perp, sqrt(kappa gamma_perp (1 + |N|/N_th)))."""
    return max(
        params.kappa,
        params.gamma_perp,
        math.sqrt(params.kappa * params.gamma_perp * (1.0 + abs(pops.inversion) / params.n_threshold)),
    )


@dataclass(frozen=True)
class SpectralDensity:
    """Real nonnegative spectrum sampled on a grid."""

    grid: FrequencyGrid
    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if vals.shape != (self.grid.n_points,):
            raise GridMismatchError(
                f"{len(vals)} samples for a {self.grid.n_points}-point grid"
            )
        if not np.all(np.isfinite(vals)):
            raise InvalidParamsError(f"spectral density {self.label!r} has non-finite samples")
        if np.any(vals < 0.0):
            raise InvalidParamsError(f"spectral density {self.label!r} has negative samples")

    def mass(self) -> float:
        """Plain integral of the samples (no 2 pi factor)."""
        if self.grid.layout == "symmetric":
            return float(np.trapezoid(self.values, dx=self.grid.spacing))
        return float(np.sum(self.values) * self.grid.spacing)

    def is_even(self, rtol: float = 1e-12) -> bool:
        if self.grid.layout != "symmetric":
            return False
        peak = float(np.max(self.values)) or 1.0
        return bool(np.all(np.abs(self.values - self.values[::-1]) <= rtol * peak))


def sample_commutator_spectrum(params: ModelParams, pops: Populations,
                               grid: FrequencyGrid) -> SpectralDensity:
    return SpectralDensity(grid, commutator_spectrum(params, pops, grid.omegas()), label="c")


def sample_population_spectrum(pops: Populations, grid: FrequencyGrid) -> SpectralDensity:
    return SpectralDensity(grid, population_spectrum(pops, grid.omegas()), label="delta2_ne")
