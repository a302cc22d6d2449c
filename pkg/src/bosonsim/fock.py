"""Fock-basis bookkeeping and the permanent-to-probability pipeline.

Occupation vectors are plain tuples of nonnegative ints, one entry per
mode.  The canonical basis order is lexicographically decreasing, so
(n, 0, ..., 0) comes first; every distribution in this module lists its
outcomes in that order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, DegeneratePostselectionError
from .permanent import permanent_ryser
from .unitary import is_unitary

BASIS_GUARD = 10_000_000
UNITARY_TOL = 1e-8
NORMALIZATION_TOL = 1e-10
COLLISION_FREE_FLOOR = 1e-12

# factorials up to the Ryser photon ceiling
_FACTORIAL = np.array([math.factorial(k) for k in range(31)], dtype=float)


def as_occupation(state) -> tuple[int, ...]:
    """Normalize to a tuple of occupation numbers, rejecting bad entries."""
    occ = []
    for x in state:
        xi = int(x)
        if xi != x or xi < 0:
            raise ValueError(f"occupations must be nonnegative integers, got {x!r}")
        occ.append(xi)
    if not occ:
        raise ValueError("occupation vector needs at least one mode")
    return tuple(occ)


def basis_size(m: int, n: int) -> int:
    """Number of n-photon states over m modes, C(m+n-1, n)."""
    return math.comb(m + n - 1, n)


def enumerate_basis(m: int, n: int) -> list[tuple[int, ...]]:
    """All occupation vectors of n photons in m modes, lexicographically decreasing.

    The first state is (n, 0, ..., 0), the last (0, ..., 0, n), and the
    count is C(m+n-1, n).  Raises CapacityError beyond the 1e7 guard.
    """
    if m < 1:
        raise ValueError("mode count must be a positive integer")
    if n < 0:
        raise ValueError("photon number must be nonnegative")
    size = basis_size(m, n)
    if size > BASIS_GUARD:
        raise CapacityError(f"basis of {size} states exceeds the {BASIS_GUARD} guard")
    if n == 0:
        return [(0,) * m]
    states = []
    c = [n] + [0] * (m - 1)
    while True:
        states.append(tuple(c))
        donor = -1
        for i in range(m - 2, -1, -1):
            if c[i] > 0:
                donor = i
                break
        if donor < 0:
            break
        tail = sum(c[donor + 1:]) + 1
        c[donor] -= 1
        c[donor + 1] = tail
        for i in range(donor + 2, m):
            c[i] = 0
    return states


def _square_matrix(U) -> np.ndarray:
    u = np.asarray(U, dtype=np.complex128)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {u.shape}")
    return u


def build_submatrix(U, input_state, output_state) -> np.ndarray:
    """The n x n matrix whose permanent gives the I -> O amplitude.

    Columns of U are repeated by the input occupations (copies adjacent,
    ascending mode index), then rows of that by the output occupations.
    With single occupancies this is the plain row/column submatrix.
    """
    u = _square_matrix(U)
    inp = as_occupation(input_state)
    out = as_occupation(output_state)
    if len(inp) != u.shape[0] or len(out) != u.shape[0]:
        raise ValueError("occupation length does not match the matrix dimension")
    n = sum(inp)
    if n != sum(out):
        raise ValueError(f"photon numbers differ: input {n}, output {sum(out)}")
    if n < 1:
        raise ValueError("need at least one photon")
    return np.repeat(np.repeat(u, inp, axis=1), out, axis=0)


def _transition_probability(u, inp, out) -> float:
    sub = np.repeat(np.repeat(u, inp, axis=1), out, axis=0)
    per = permanent_ryser(sub)
    denom = _FACTORIAL[list(inp)].prod() * _FACTORIAL[list(out)].prod()
    return abs(per) ** 2 / denom


def transition_probability(U, input_state, output_state) -> float:
    """P(I -> O) = |Per(U_IO)|^2 / (prod_k i_k! * prod_k j_k!)."""
    u = _square_matrix(U)
    if not is_unitary(u, UNITARY_TOL):
        raise ValueError(f"matrix is not unitary within {UNITARY_TOL}")
    inp = as_occupation(input_state)
    out = as_occupation(output_state)
    if len(inp) != u.shape[0] or len(out) != u.shape[0]:
        raise ValueError("occupation length does not match the matrix dimension")
    if sum(inp) != sum(out):
        raise ValueError(f"photon numbers differ: input {sum(inp)}, output {sum(out)}")
    if sum(inp) < 1:
        raise ValueError("need at least one photon")
    return _transition_probability(u, inp, out)


@dataclass(frozen=True)
class OutputDistribution:
    """Exact output distribution over the canonical basis order.

    ``normalization`` is 1.0 for a full distribution; for a postselected
    one it records the probability mass kept before renormalization.
    """

    input_state: tuple[int, ...]
    states: tuple[tuple[int, ...], ...]
    probabilities: np.ndarray
    normalization: float

    def __post_init__(self):
        probs = np.asarray(self.probabilities, dtype=float)
        probs.flags.writeable = False
        object.__setattr__(self, "probabilities", probs)

    def outcomes(self) -> list[tuple[tuple[int, ...], float]]:
        """(state, probability) pairs in canonical basis order."""
        return list(zip(self.states, self.probabilities.tolist()))

    def probability_of(self, state) -> float:
        target = as_occupation(state)
        for s, p in zip(self.states, self.probabilities):
            if s == target:
                return float(p)
        raise KeyError(f"state {target} not in distribution")


def full_distribution(U, input_state) -> OutputDistribution:
    """Probabilities of every n-photon output state for the given input."""
    u = _square_matrix(U)
    inp = as_occupation(input_state)
    if len(inp) != u.shape[0]:
        raise ValueError("occupation length does not match the matrix dimension")
    if not is_unitary(u, UNITARY_TOL):
        raise ValueError(f"matrix is not unitary within {UNITARY_TOL}")
    n = sum(inp)
    basis = enumerate_basis(len(inp), n)
    if n == 0:
        probs = np.ones(1)
    else:
        probs = np.array([_transition_probability(u, inp, out) for out in basis])
    total = probs.sum()
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise ValueError(
            f"output probabilities sum to {total!r}; the matrix is not unitary "
            "enough to produce a normalized distribution"
        )
    return OutputDistribution(inp, tuple(basis), probs, 1.0)


def collision_free_distribution(U, input_state) -> OutputDistribution:
    """Distribution restricted to outputs with at most one photon per mode.

    Probabilities are the full-distribution values divided by the kept
    mass, which is recorded in ``normalization``.  Raises
    DegeneratePostselectionError when that mass is numerically zero.
    """
    full = full_distribution(U, input_state)
    keep = [i for i, s in enumerate(full.states) if max(s) <= 1]
    mass = float(full.probabilities[keep].sum()) if keep else 0.0
    if mass < COLLISION_FREE_FLOOR:
        raise DegeneratePostselectionError(
            f"collision-free mass {mass:.3e} is below {COLLISION_FREE_FLOOR}"
        )
    states = tuple(full.states[i] for i in keep)
    probs = full.probabilities[keep] / mass
    return OutputDistribution(full.input_state, states, probs, mass)


def sample(U, input_state, count: int, seed: int, collision_free: bool = False) -> list[tuple[int, ...]]:
    """``count`` i.i.d. output states drawn by inverse CDF over the exact distribution."""
    if count < 1:
        raise ValueError("count must be a positive integer")
    builder = collision_free_distribution if collision_free else full_distribution
    dist = builder(U, input_state)
    rng = np.random.default_rng(seed)
    cdf = np.cumsum(dist.probabilities)
    idx = np.searchsorted(cdf, rng.random(count), side="right")
    idx = np.minimum(idx, len(cdf) - 1)
    return [dist.states[i] for i in idx]
