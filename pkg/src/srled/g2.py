"""Zero-delay second-order autocorrelation g2, closed form and brute force.

The closed form follows from the mean-photon split:

    g2 = 2 [1 + 2 (Delta_n / (1 + Delta_n))^2],

which is thermal (g2 = 2) without population fluctuations and super-thermal
(2 < g2 < 6) with them. The brute-force path re-derives nothing from that
formula: it builds the fourth-order cumulant of the population-noise-driven
field component from c(omega), s(omega) and the population spectrum alone,

    C = 4 (2 pi)^-2 Int c(w1) c(w2) |K(w1, w2)|^2 dw1 dw2,
    K(w1, w2) = (2 pi)^-1 Int pop_spectrum(w) dw / [s(w + w2) s*(w + w1)],

and assembles g2 = 2 + (kappa gamma_perp / N_th)^4 C / n^2 with n computed
by the matching quadrature mode. In the delta mode the population spectrum
collapses to a point mass and C must equal
[2 delta2_ne (2 pi)^-1 Int c/|s|^2]^2; agreement of the two paths is a
genuine cross-check of the cumulant algebra.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import InvalidParamsError
from .model import (
    ModelParams,
    Populations,
    _check_below_threshold,
    commutator_spectrum,
    loop_abs2,
    loop_denominator,
    widest_rate,
)
from .photon import fluctuation_coupling, mean_photon_closed, mean_photon_quadrature
from .quadrature import IntegrationSpec, integrate_1d, log_ring_rule, tan_map_rule

METHOD_CLOSED = "closed-form"
METHOD_DELTA = "cumulant-delta"
METHOD_FULL = "cumulant-full"


@dataclass(frozen=True)
class G2Result:
    g2: float
    cumulant: float | None
    method: str
    error: float = 0.0


def g2_from_delta_n(delta_n: float) -> float:
    """g2 = 2 [1 + 2 (Delta_n/(1+Delta_n))^2]; 2 at 0, 6 in the limit."""
    x = delta_n / (1.0 + delta_n)
    return 2.0 * (1.0 + 2.0 * x * x)


def g2_closed(params: ModelParams, pops: Populations) -> G2Result:
    """Closed-form g2 from the closed-form Delta_n."""
    mp = mean_photon_closed(params, pops)
    return G2Result(g2=g2_from_delta_n(mp.delta_n), cumulant=None, method=METHOD_CLOSED)


def cumulant_kernel(params: ModelParams, pops: Populations,
                    omega_a: float, omega_b: float, mode: str = "delta",
                    spec: IntegrationSpec = IntegrationSpec()) -> complex:
    """K(omega_a, omega_b), the kernel inside the cumulant integral.

    full: (2 pi)^-1 Int pop_spectrum(w) / [s(w + omega_b) s*(w + omega_a)] dw
    by adaptive quadrature on the Cauchy-mapped interval.
    delta: the point-mass reduction delta2_ne / [s(omega_b) s*(omega_a)].

    Satisfies K(a, b) = conj(K(b, a)).
    """
    _check_below_threshold(params, pops)
    if mode == "delta":
        return pops.delta2_ne / (
            loop_denominator(params, pops, omega_b)
            * np.conj(loop_denominator(params, pops, omega_a))
        )
    if mode != "full":
        raise InvalidParamsError(f"unknown kernel mode {mode!r}")
    if pops.delta2_ne == 0.0:
        return 0.0 + 0.0j
    gamma = pops.gamma_p

    def integrand(theta):
        w = gamma * np.tan(theta)
        return 1.0 / (
            loop_denominator(params, pops, w + omega_b)
            * np.conj(loop_denominator(params, pops, w + omega_a))
        )

    # omega = gamma tan(theta) absorbs the Cauchy mass exactly:
    # K = (delta2_ne / pi) Int_{-pi/2}^{pi/2} integrand d theta
    finite = IntegrationSpec(rel_tol=spec.rel_tol, abs_tol=spec.abs_tol,
                             max_subdivisions=spec.max_subdivisions,
                             half_width=0.5 * np.pi)
    val, _ = integrate_1d(integrand, finite)
    return pops.delta2_ne / np.pi * val


def _outer_rule(params, pops, n_nodes):
    omega, weights = tan_map_rule(widest_rate(params, pops), n_nodes)
    wc = weights * commutator_spectrum(params, pops, omega)
    return omega, wc


def _kernel_matrix_delta(params, pops, omega):
    inv_s = 1.0 / loop_denominator(params, pops, omega)
    return pops.delta2_ne * np.outer(np.conj(inv_s), inv_s)


def _kernel_matrix_full(params, pops, omega, ring_per_unit):
    """K on the outer grid, Cauchy-smoothed on a shared log ring.

    E[G(X)] = G(0) + Int_0^inf K(w)[G(w) + G(-w) - 2 G(0)] dw for each pair;
    the shifted inverse denominators factorize, so the double sum is two
    small matrix products.
    """
    nodes, ring_w = log_ring_rule(pops.gamma_p, widest_rate(params, pops), per_unit=ring_per_unit)
    inv0 = 1.0 / loop_denominator(params, pops, omega)
    up = 1.0 / loop_denominator(params, pops, nodes[:, None] + omega[None, :])
    dn = 1.0 / loop_denominator(params, pops, -nodes[:, None] + omega[None, :])
    g0 = np.outer(np.conj(inv0), inv0)
    smoothed = (np.conj(up).T * ring_w) @ up + (np.conj(dn).T * ring_w) @ dn
    return pops.delta2_ne * (g0 * (1.0 - 2.0 * float(np.sum(ring_w))) + smoothed)


def noise_cumulant(params: ModelParams, pops: Populations, mode: str = "delta",
                   n_outer: int = 200, ring_per_unit: int = 24) -> tuple[float, float]:
    """The fourth-order field-noise cumulant by 2-D tensor quadrature.

    Returns (value, refinement_error). Nonnegative by construction
    (the integrand is c c |K|^2 >= 0); zero when fluctuations are disabled.
    """
    _check_below_threshold(params, pops)
    if mode not in ("delta", "full"):
        raise InvalidParamsError(f"unknown cumulant mode {mode!r}")
    if pops.delta2_ne == 0.0:
        return 0.0, 0.0

    def evaluate(n_nodes, per_unit):
        omega, wc = _outer_rule(params, pops, n_nodes)
        if mode == "delta":
            kmat = _kernel_matrix_delta(params, pops, omega)
        else:
            kmat = _kernel_matrix_full(params, pops, omega, per_unit)
        abs2 = np.ascontiguousarray(np.abs(kmat) ** 2)
        return 4.0 / (2.0 * np.pi) ** 2 * kernels.cumulant_reduce(wc, abs2)

    coarse = evaluate(n_outer // 2, max(ring_per_unit // 2, 6))
    fine = evaluate(n_outer, ring_per_unit)
    return fine, abs(fine - coarse)


def mean_term_cancellation(params: ModelParams, pops: Populations,
                           spec: IntegrationSpec = IntegrationSpec()) -> tuple[float, float]:
    """Diagnostic for the cancellation between the cumulant's disconnected
    part and the squared-mean subtraction.

    Both equal [(2 pi)^-1 Int (c * pop)(w) / |s(w)|^2 dw] but are evaluated
    here by different nesting orders: (a) smooth c with the Cauchy kernel
    first, then integrate against |s|^-2; (b) shift the loop filter across
    the population spectrum (the exact-convolution mean-photon path).
    Returns (side_a, side_b); agreement confirms the disconnected terms
    drop out of g2 exactly.
    """
    _check_below_threshold(params, pops)
    gamma = pops.gamma_p
    c_peak = float(np.max(commutator_spectrum(
        params, pops, np.linspace(0.0, 3.0 * widest_rate(params, pops), 301))))

    def smoothed_c(w):
        # E over Cauchy(gamma) of c(w - X), via the exact tan substitution;
        # absolute tolerance tied to the spectrum's peak so the far tails
        # (tiny values, roundoff-limited) cannot trip the convergence check
        finite = IntegrationSpec(rel_tol=1e-10, abs_tol=1e-10 * c_peak,
                                 max_subdivisions=spec.max_subdivisions,
                                 half_width=0.5 * np.pi)
        val, _ = integrate_1d(
            lambda th: commutator_spectrum(params, pops, w - gamma * np.tan(th)), finite)
        return val / np.pi

    side_a, _ = integrate_1d(
        lambda w: smoothed_c(w) / loop_abs2(params, pops, w),
        IntegrationSpec(rel_tol=1e-8, abs_tol=1e-12,
                        max_subdivisions=spec.max_subdivisions))
    side_a *= pops.delta2_ne / (2.0 * np.pi)
    mp = mean_photon_quadrature(params, pops, mode="exact", spec=spec)
    side_b = (mp.n_total - mp.n0) / fluctuation_coupling(params) ** 2
    return side_a, side_b


def cumulant_delta_product_form(params: ModelParams, pops: Populations,
                                spec: IntegrationSpec = IntegrationSpec()) -> float:
    """[2 delta2_ne (2 pi)^-1 Int c/|s|^2 d omega]^2, the delta-mode value.

    Independent reference for the 2-D tensor quadrature in noise_cumulant;
    the quadratic dependence on delta2_ne follows from the kernel being
    linear in it.
    """
    val, _ = integrate_1d(
        lambda w: commutator_spectrum(params, pops, w) / loop_abs2(params, pops, w), spec
    )
    return (2.0 * pops.delta2_ne * val / (2.0 * np.pi)) ** 2


def g2_bruteforce(params: ModelParams, pops: Populations, mode: str = "delta",
                  n_outer: int = 200, ring_per_unit: int = 24,
                  spec: IntegrationSpec = IntegrationSpec()) -> G2Result:
    """g2 = 2 + (kappa gamma_perp/N_th)^4 C / n^2 with everything numerical.

    n comes from the matching mean-photon quadrature mode (delta <-> delta,
    full <-> exact convolution). Exactly 2 when fluctuations are disabled.
    """
    _check_below_threshold(params, pops)
    if pops.delta2_ne == 0.0:
        return G2Result(g2=2.0, cumulant=0.0,
                        method=METHOD_DELTA if mode == "delta" else METHOD_FULL)
    cum, cum_err = noise_cumulant(params, pops, mode, n_outer, ring_per_unit)
    photon_mode = "delta" if mode == "delta" else "exact"
    mp = mean_photon_quadrature(params, pops, mode=photon_mode, spec=spec)
    coup4 = fluctuation_coupling(params) ** 4
    n2 = mp.n_total ** 2
    g2 = 2.0 + coup4 * cum / n2
    err = coup4 * (cum_err / n2 + 2.0 * cum * mp.error / (n2 * mp.n_total))
    return G2Result(g2=g2, cumulant=cum,
                    method=METHOD_DELTA if mode == "delta" else METHOD_FULL, error=err)
