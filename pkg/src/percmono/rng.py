"""Counter-based random numbers.

Every uniform is a pure function of ``(seed, sample index, edge key, slot)``
pushed through the SplitMix64 finaliser, so a sample's randomness does not
depend on which worker draws it or in what order.  Slot 0 of an edge decides
its Bernoulli state (open iff ``u < p``) and its Pipe-Dust particle count;
slots ``1..k`` give the particle positions.  Thresholding the same uniforms
at different ``p`` is what provides common random numbers.
"""

import numpy as np
from numba import njit

MASK64 = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_K_EDGE = 0xD6E8FEB86659FD93

_U_GOLDEN = np.uint64(_GOLDEN)
_U_M1 = np.uint64(_M1)
_U_M2 = np.uint64(_M2)
_U_K_EDGE = np.uint64(_K_EDGE)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV53 = 1.0 / 9007199254740992.0


def mix64_py(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


@njit(cache=True, nogil=True)
def mix64(z):
    z = (z ^ (z >> _S30)) * _U_M1
    z = (z ^ (z >> _S27)) * _U_M2
    return z ^ (z >> _S31)


@njit(cache=True, nogil=True)
def sample_stream(seed, index):
    """Stream key of sample ``index`` under ``seed`` (both uint64)."""
    return mix64(mix64(seed + _U_GOLDEN) ^ (index * _U_GOLDEN + _U_M2))


@njit(cache=True, nogil=True)
def uniform(stream, key, slot):
    """Uniform on [0, 1) for (stream, edge key, slot); all arguments uint64."""
    x = mix64(stream ^ mix64(key * _U_K_EDGE + slot * _U_GOLDEN))
    return np.float64(x >> _S11) * _INV53


@njit(cache=True, nogil=True)
def poisson_inverse(u, lam):
    """Poisson(lam) count by CDF inversion of the uniform ``u``.

    Returns 0 exactly when ``u < exp(-lam)``.
    """
    pmf = np.exp(-lam)
    cdf = pmf
    k = 0
    while u >= cdf:
        k += 1
        pmf *= lam / k
        if pmf == 0.0 and k > lam:
            break
        cdf += pmf
    return k


def derive_seed(seed: int, *tags: int) -> int:
    """Deterministic child seed, used to give each bisection step fresh samples."""
    h = mix64_py(seed)
    for t in tags:
        h = mix64_py(h ^ mix64_py(t + _GOLDEN))
    return h


def uniform_py(seed: int, index: int, key: int, slot: int) -> float:
    stream = np.uint64(sample_stream(np.uint64(seed & MASK64), np.uint64(index)))
    return float(uniform(stream, np.uint64(key & MASK64), np.uint64(slot)))


@njit(cache=True, nogil=True)
def uniform_open(stream, key, slot):
    """Uniform on the open interval (0, 1)."""
    x = mix64(stream ^ mix64(key * _U_K_EDGE + slot * _U_GOLDEN))
    return (np.float64(x >> _S11) + 0.5) * _INV53
