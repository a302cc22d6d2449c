"""Matrix permanents: a factorial-time reference and a Ryser fast path.

Per(M) = sum over permutations sigma of prod_i M[i, sigma(i)].

``permanent_naive`` enumerates all n! permutations and serves as the
oracle, capped at n <= 9.  ``permanent_ryser`` is the production path:
Ryser's inclusion-exclusion formula walked in Gray-code order so each
subset step updates the running row sums in O(n), giving O(2^n * n)
overall.  Runtime roughly doubles per added row; n = 20 takes well under
ten seconds on one core and the hard cap is n = 30.

Both functions are pure and deterministic: repeated calls on the same
matrix return bit-identical results (no internal parallelism).
"""

from __future__ import annotations

import itertools

import numpy as np

from .errors import SizeLimitError

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

NAIVE_LIMIT = 9
RYSER_LIMIT = 30


def _square_complex(matrix) -> np.ndarray:
    m = np.asarray(matrix, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"permanent needs a square matrix, got shape {m.shape}")
    if m.size and not np.isfinite(m).all():
        raise ValueError("matrix entries must be finite")
    return m


def permanent_naive(matrix) -> complex:
    """Permanent by direct summation over all n! permutations (n <= 9)."""
    m = _square_complex(matrix)
    n = m.shape[0]
    if n > NAIVE_LIMIT:
        raise SizeLimitError(
            f"permanent_naive is capped at n = {NAIVE_LIMIT}, got n = {n}"
        )
    if n == 0:
        return 1 + 0j
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.intp)
    products = m[np.arange(n), perms].prod(axis=1)
    return complex(products.sum())


def _ryser_gray(m):
    # Per(M) = (-1)^n sum_{S != {}} (-1)^{|S|} prod_i sum_{j in S} M[i, j].
    # Subsets are visited in Gray-code order: step k toggles column
    # j = ctz(k), and |S| has the parity of k itself.
    n = m.shape[0]
    row_sums = np.zeros(n, dtype=np.complex128)
    total = 0.0 + 0.0j
    for k in range(1, 1 << n):
        kk = k
        j = 0
        while kk & 1 == 0:
            kk >>= 1
            j += 1
        if (k ^ (k >> 1)) & (1 << j):
            for i in range(n):
                row_sums[i] += m[i, j]
        else:
            for i in range(n):
                row_sums[i] -= m[i, j]
        prod = 1.0 + 0.0j
        for i in range(n):
            prod *= row_sums[i]
        if k & 1:
            total -= prod
        else:
            total += prod
    if n & 1:
        return -total
    return total


def _ryser_chunked(m, chunk_bits: int = 14):
    """Vectorized fallback: the same Gray-code walk in fixed-size chunks."""
    n = m.shape[0]
    end = 1 << n
    row_sums = np.zeros(n, dtype=np.complex128)
    total = 0.0 + 0.0j
    chunk = 1 << chunk_bits
    for start in range(1, end, chunk):
        ks = np.arange(start, min(start + chunk, end), dtype=np.int64)
        flips = np.log2(ks & -ks).astype(np.intp)
        gray = ks ^ (ks >> 1)
        signs = np.where((gray >> flips) & 1 == 1, 1.0, -1.0)
        cums = row_sums[None, :] + np.cumsum(signs[:, None] * m.T[flips], axis=0)
        prods = cums.prod(axis=1)
        total += ((1.0 - 2.0 * (ks & 1)) * prods).sum()
        row_sums = cums[-1]
    return -total if n & 1 else total


if numba is not None:
    _ryser = numba.njit(cache=True)(_ryser_gray)
else:  # pragma: no cover
    _ryser = _ryser_chunked


def permanent_ryser(matrix) -> complex:
    """Permanent via Gray-code Ryser inclusion-exclusion, O(2^n * n), n <= 30."""
    m = _square_complex(matrix)
    n = m.shape[0]
    if n > RYSER_LIMIT:
        raise SizeLimitError(
            f"permanent_ryser is capped at n = {RYSER_LIMIT}, got n = {n}"
        )
    if n == 0:
        return 1 + 0j
    return complex(_ryser(np.ascontiguousarray(m)))
