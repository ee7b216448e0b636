"""The matching unitary matrix model: densities, MCMC, partition functions.

The eigenvalue weight on U(ell) assigns each eigenvalue angle the potential
term 2 theta sum_r (-1)^(r-1) gamma_r cos(r alpha) plus the log-Vandermonde
repulsion 2 sum_{j<k} log |sin((alpha_j - alpha_k)/2)|.  Its partition
function equals exp(theta^2 sum_r r gamma_r^2) P(k_max < ell) of the fermion
model, which the edge module computes exactly.

In the supercritical regime ell/theta = x >= max D, the limiting eigenvalue
density is rho(alpha) = (1 - D(alpha - pi)/x) / (2 pi); it touches zero at
alpha = pi +- chi_b for each maximizer chi_b of D when x = max D, one zero
pair per cut of the sea at the edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .edge import exact_cdf
from .errors import CoincidentAngles, SubcriticalPhase
from .potential import HoppingCoefficients, eval_dispersion, global_extrema

def eigen_density_supercritical(gammas, x, alpha):
    """Limiting eigenvalue density at coupling ratio x = ell/theta >= max D."""
    coeffs = HoppingCoefficients(gammas)
    b, _ = global_extrema(coeffs)
    x = float(x)
    if x < b - 1e-12:
        raise SubcriticalPhase(f"x={x} below the critical point {b}")
    alpha_arr = np.asarray(alpha, dtype=float)
    rho = (1.0 - eval_dispersion(coeffs, alpha_arr - math.pi) / x) / (2.0 * math.pi)
    rho = np.maximum(rho, 0.0)  # clips only roundoff dips at the zeros
    if np.isscalar(alpha) or alpha_arr.ndim == 0:
        return float(rho)
    return rho


def density_support_cuts(gammas, x, rel_floor=1e-3, grid=4096):
    """Intervals of [-pi, pi] where the supercritical density is near zero.

    A "cut" is a maximal arc with rho < rel_floor * max(rho); arcs wrapping
    +-pi are counted once.
    """
    alphas = np.linspace(-math.pi, math.pi, grid, endpoint=False)
    rho = eigen_density_supercritical(gammas, x, alphas)
    low = rho < rel_floor * float(np.max(rho))
    if not np.any(low):
        return []
    # group circularly contiguous low runs
    idx = np.nonzero(low)[0]
    runs = []
    start = prev = idx[0]
    for i in idx[1:]:
        if i == prev + 1:
            prev = i
            continue
        runs.append((start, prev))
        start = prev = i
    runs.append((start, prev))
    if len(runs) > 1 and runs[0][0] == 0 and runs[-1][1] == grid - 1:
        first = runs.pop(0)
        runs[-1] = (runs[-1][0], first[1] + grid)
    return [(float(alphas[a % grid]), float(alphas[b % grid])) for a, b in runs]


def log_joint_density(gammas, theta, angles):
    """Unnormalised log density of the eigenvalue angles (exchangeable)."""
    angles = np.asarray(angles, dtype=float)
    coeffs = HoppingCoefficients(gammas)
    pot = 0.0
    for r, g in enumerate(coeffs.gammas, start=1):
        pot += -2.0 * theta * (-1.0) ** r * g * float(np.sum(np.cos(r * angles)))
    if len(angles) > 1:
        diff = angles[:, None] - angles[None, :]
        iu = np.triu_indices(len(angles), k=1)
        sines = np.abs(np.sin(0.5 * diff[iu]))
        if np.any(sines == 0.0):
            raise CoincidentAngles("coinciding eigenvalue angles have weight zero")
        pot += 2.0 * float(np.sum(np.log(sines)))
    return pot


@dataclass(frozen=True)
class EigenSample:
    angles: np.ndarray
    log_weight: float


@dataclass(frozen=True)
class ChainResult:
    samples: list
    acceptance_rate: float
    proposal_sigma: float


def _site_log_weight_delta(gammas, theta, angles, j, new_angle):
    """Change of the log weight when angle j moves (O(ell) update)."""
    old = angles[j]
    delta = 0.0
    for r, g in enumerate(gammas, start=1):
        delta += -2.0 * theta * (-1.0) ** r * g * (math.cos(r * new_angle)
                                                   - math.cos(r * old))
    others = np.delete(angles, j)
    if len(others):
        new_s = np.abs(np.sin(0.5 * (new_angle - others)))
        old_s = np.abs(np.sin(0.5 * (old - others)))
        if np.any(new_s == 0.0):
            return -np.inf
        delta += 2.0 * float(np.sum(np.log(new_s) - np.log(old_s)))
    return delta


def metropolis_chain(gammas, theta, ell, sweeps, seed, keep_every=1):
    """Single-angle Metropolis sampling of the joint eigenvalue law.

    Proposals are Gaussian steps wrapped to [-pi, pi]; the step size is tuned
    during the first 20% of sweeps towards a 20-50% acceptance rate, then
    frozen.  Returns the post-burn-in samples (every ``keep_every`` sweeps).
    """
    gam = HoppingCoefficients(gammas).gammas
    ell = int(ell)
    rng = np.random.Generator(np.random.Philox(key=[int(seed), 0]))
    angles = rng.uniform(-math.pi, math.pi, size=ell)
    sigma = 0.5
    burn = max(1, int(0.2 * sweeps))
    accepted = proposed = 0
    tune_acc = tune_prop = 0
    samples = []
    for sweep in range(int(sweeps)):
        for j in range(ell):
            new_angle = angles[j] + sigma * rng.normal()
            new_angle = math.remainder(new_angle, 2.0 * math.pi)
            delta = _site_log_weight_delta(gam, theta, angles, j, new_angle)
            take = delta >= 0.0 or rng.random() < math.exp(max(delta, -700.0))
            proposed += 1
            tune_prop += 1
            if take:
                angles[j] = new_angle
                accepted += 1
                tune_acc += 1
        if sweep < burn:
            if tune_prop >= 50 * ell:
                rate = tune_acc / tune_prop
                if rate < 0.20:
                    sigma *= 0.7
                elif rate > 0.50:
                    sigma *= 1.4
                tune_acc = tune_prop = 0
            continue
        if (sweep - burn) % keep_every == 0:
            samples.append(EigenSample(
                angles=np.sort(angles.copy()),
                log_weight=log_joint_density(gam, theta, angles)))
    return ChainResult(samples=samples,
                       acceptance_rate=accepted / max(proposed, 1),
                       proposal_sigma=sigma)


def angle_histogram(samples, bins=64):
    """Normalised histogram of all eigenvalue angles over [-pi, pi]."""
    all_angles = np.concatenate([s.angles for s in samples])
    hist, edges = np.histogram(all_angles, bins=bins,
                               range=(-math.pi, math.pi), density=True)
    return hist, edges


def partition_function_toeplitz(gammas, theta, ell):
    """Z_ell = exp(theta^2 sum r gamma_r^2) P(k_max < ell), via the edge CDF."""
    coeffs = HoppingCoefficients(gammas, theta=theta)
    norm = sum(r * (theta * g) ** 2 for r, g in enumerate(coeffs.gammas, start=1))
    return math.exp(norm) * exact_cdf(coeffs, ell)


def partition_function_quadrature(gammas, theta, ell, nodes=512):
    """Z_ell by direct angular quadrature (oracle; ell <= 2 practical).

    Periodic trapezoid over the ell-torus of the Weyl-measure integrand
    prod_j w(alpha_j) prod_{j<k} |e^{i a_j} - e^{i a_k}|^2 / ((2 pi)^ell ell!).
    """
    gam = HoppingCoefficients(gammas).gammas
    ell = int(ell)
    if ell not in (1, 2):
        raise ValueError("direct quadrature oracle supports ell in {1, 2}")
    alphas = 2.0 * math.pi * np.arange(nodes) / nodes - math.pi
    w = np.zeros_like(alphas)
    for r, g in enumerate(gam, start=1):
        w += 2.0 * theta * (-1.0) ** (r - 1) * g * np.cos(r * alphas)
    w = np.exp(w)
    h = 2.0 * math.pi / nodes
    if ell == 1:
        return float(np.sum(w) * h / (2.0 * math.pi))
    pair = 2.0 - 2.0 * np.cos(alphas[:, None] - alphas[None, :])
    z = float(w @ pair @ w) * h * h
    return z / ((2.0 * math.pi) ** 2 * 2.0)
