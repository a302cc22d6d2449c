"""Partial-distinguishability interference: overlaps, rates, dips, visibilities.

Photons are modeled as Gaussian wavepackets with a common temporal width
sigma; photon j arriving with delay tau_j overlaps photon k as

    S[j, k] = exp(-(tau_j - tau_k)^2 / (4 sigma^2)),

an all-ones matrix for perfectly overlapped photons and the identity in
the fully distinguishable limit.  Coincidence rates interpolate between
the quantum (permanent) and classical rates accordingly.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import SizeLimitError, UndefinedVisibilityError
from .unitary import is_unitary

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

RATE_PHOTON_LIMIT = 7
UNITARY_TOL = 1e-8
OVERLAP_TOL = 1e-8
CLASSICAL_RATE_FLOOR = 1e-12

# Default wavepacket width: transform-limited Gaussian after a 3 nm FWHM
# spectral filter centered at 789 nm, expressed in femtoseconds.
SPEED_OF_LIGHT_NM_PER_FS = 299.792458
CENTER_WAVELENGTH_NM = 789.0
FILTER_FWHM_NM = 3.0


def transform_limited_sigma_fs(
    center_nm: float = CENTER_WAVELENGTH_NM, fwhm_nm: float = FILTER_FWHM_NM
) -> float:
    """RMS temporal width (fs) of a transform-limited Gaussian wavepacket."""
    dnu_fwhm = SPEED_OF_LIGHT_NM_PER_FS * fwhm_nm / center_nm**2
    dt_fwhm = (2.0 * math.log(2.0) / math.pi) / dnu_fwhm
    return dt_fwhm / (2.0 * math.sqrt(2.0 * math.log(2.0)))


DEFAULT_SIGMA_FS = transform_limited_sigma_fs()


@dataclass(frozen=True)
class DelayConfig:
    """Arrival delays (one per photon) and the common wavepacket width."""

    delays: tuple[float, ...]
    sigma: float

    def __post_init__(self):
        object.__setattr__(self, "delays", tuple(float(d) for d in self.delays))
        if not self.delays:
            raise ValueError("need at least one delay")
        if not all(math.isfinite(d) for d in self.delays):
            raise ValueError("delays must be finite")
        if not (self.sigma > 0 and math.isfinite(self.sigma)):
            raise ValueError(f"sigma must be a positive real, got {self.sigma}")


def overlap_from_delays(config: DelayConfig) -> np.ndarray:
    """Gram matrix S[j,k] = exp(-(tau_j - tau_k)^2 / (4 sigma^2))."""
    tau = np.asarray(config.delays, dtype=float)
    gaps = np.subtract.outer(tau, tau)
    return np.exp(-(gaps**2) / (4.0 * config.sigma**2)).astype(np.complex128)


def _check_overlap(overlap, n: int) -> np.ndarray:
    s = np.asarray(overlap, dtype=np.complex128)
    if s.shape != (n, n):
        raise ValueError(f"overlap matrix must be {n} x {n}, got shape {s.shape}")
    if np.max(np.abs(s - s.conj().T)) > OVERLAP_TOL:
        raise ValueError("overlap matrix must be Hermitian")
    if np.max(np.abs(np.diagonal(s) - 1.0)) > OVERLAP_TOL:
        raise ValueError("overlap matrix must have a unit diagonal")
    if np.max(np.abs(s)) > 1.0 + OVERLAP_TOL:
        raise ValueError("overlap magnitudes cannot exceed 1")
    if np.linalg.eigvalsh(s).min() < -OVERLAP_TOL:
        raise ValueError("overlap matrix must be positive semidefinite")
    return s


def _mode_tuple(modes, m: int, label: str) -> tuple[int, ...]:
    out = tuple(int(x) for x in modes)
    if len(out) == 0:
        raise ValueError(f"need at least one {label} mode")
    if len(set(out)) != len(out):
        raise ValueError(f"{label} modes must be distinct, got {out}")
    for mode in out:
        if not 1 <= mode <= m:
            raise ValueError(f"{label} mode {mode} outside 1..{m}")
    return out


def _rate_terms(a, s, perms):
    count = perms.shape[0]
    n = perms.shape[1]
    total = 0.0 + 0.0j
    for p in range(count):
        for q in range(count):
            term = 1.0 + 0.0j
            for k in range(n):
                sk = perms[p, k]
                rk = perms[q, k]
                term *= s[sk, rk] * a[k, sk] * np.conj(a[k, rk])
            total += term
    return total


if numba is not None:
    _rate_terms = numba.njit(cache=True)(_rate_terms)


@functools.lru_cache(maxsize=None)
def _permutations(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=np.int64)


def coincidence_rate(U, in_modes, out_modes, overlap) -> float:
    """n-fold coincidence rate for partially distinguishable photons.

    One photon enters each of ``in_modes`` and one is detected in each
    of ``out_modes`` (both 1-based, collision-free).  With A[k, l] the
    amplitude from in_modes[l] to out_modes[k] and S the photon overlap
    Gram matrix, the rate is

        sum over permutation pairs (sigma, rho) of
            prod_k S[sigma(k), rho(k)] * A[k, sigma(k)] * conj(A[k, rho(k)])

    evaluated directly, so the cost is (n!)^2 and n is capped at 7.
    All-ones S reproduces |Per(A)|^2; identity S gives the permanent of
    the elementwise |A|^2 matrix (the classical rate).
    """
    u = np.asarray(U, dtype=np.complex128)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {u.shape}")
    if not is_unitary(u, UNITARY_TOL):
        raise ValueError(f"matrix is not unitary within {UNITARY_TOL}")
    ins = _mode_tuple(in_modes, u.shape[0], "input")
    outs = _mode_tuple(out_modes, u.shape[0], "output")
    if len(ins) != len(outs):
        raise ValueError("input and output mode counts must match")
    n = len(ins)
    if n > RATE_PHOTON_LIMIT:
        raise SizeLimitError(
            f"coincidence_rate is capped at {RATE_PHOTON_LIMIT} photons, got {n}"
        )
    s = _check_overlap(overlap, n)
    a = u[np.ix_([o - 1 for o in outs], [i - 1 for i in ins])]
    total = complex(_rate_terms(a, s, _permutations(n)))
    if abs(total.imag) > 1e-10:
        raise ValueError(f"rate has imaginary residue {total.imag!r}")
    if total.real < -1e-10:
        raise ValueError(f"rate is negative beyond tolerance: {total.real!r}")
    return max(float(total.real), 0.0)


def hom_scan(U, in_modes, out_modes, scan_delays) -> list[tuple[DelayConfig, float]]:
    """Coincidence rate at each delay configuration, in grid order."""
    return [
        (cfg, coincidence_rate(U, in_modes, out_modes, overlap_from_delays(cfg)))
        for cfg in scan_delays
    ]


def visibility(U, in_pair, out_pair) -> float:
    """Two-photon dip visibility V = (P_D - P_Q) / P_D.

    P_Q is the coincidence rate for perfectly overlapped photons and P_D
    the fully distinguishable (classical) rate.  Raises
    UndefinedVisibilityError when the classical rate vanishes.
    """
    if len(tuple(in_pair)) != 2 or len(tuple(out_pair)) != 2:
        raise ValueError("visibility needs exactly two input and two output modes")
    p_q = coincidence_rate(U, in_pair, out_pair, np.ones((2, 2)))
    p_d = coincidence_rate(U, in_pair, out_pair, np.eye(2))
    if p_d <= CLASSICAL_RATE_FLOOR:
        raise UndefinedVisibilityError(
            f"classical rate {p_d:.3e} for {tuple(in_pair)} -> {tuple(out_pair)} "
            "is too small to define a visibility"
        )
    return (p_d - p_q) / p_d
