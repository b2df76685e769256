"""Numba kernels for the lattice mode sums.

Reduced units: x = xi/gap = c |n - s|^2 - mu with n the integer mode index,
c = hbar^2 dk^2 / (2 m gap), mu = E_F/gap and s the branch shift in units of
dk.  Each kernel returns one partial sum per outer index; every partial is
accumulated with Neumaier compensation and the caller combines them with
math.fsum, so the result does not depend on thread scheduling.
"""

import math
import os

import numpy as np
from numba import config, njit, prange

if "NUMBA_THREADING_LAYER" not in os.environ:
    # skip the tbb version probe (it warns on old installs); partials are layer-independent
    config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]


@njit(cache=True, inline="always")
def _tanh_like(x):
    return x / math.sqrt(1.0 + x * x)


@njit(cache=True, parallel=True)
def exact_general(M, c, mu, s_left, s_right):
    n = 2 * M + 1
    ax = np.empty((2, 3, n))
    for i in range(n):
        m = i - M
        for d in range(3):
            ax[0, d, i] = c * (m - s_left[d]) ** 2
            ax[1, d, i] = c * (m - s_right[d]) ** 2
    parts = np.zeros(n)
    for i in prange(n):
        acc = 0.0
        comp = 0.0
        for j in range(n):
            base_l = ax[0, 0, i] + ax[0, 1, j] - mu
            base_r = ax[1, 0, i] + ax[1, 1, j] - mu
            row = 0.0
            for k in range(n):
                xl = base_l + ax[0, 2, k]
                xr = base_r + ax[1, 2, k]
                row += abs(_tanh_like(xr) - _tanh_like(xl))
            t = acc + row
            if abs(acc) >= abs(row):
                comp += (acc - t) + row
            else:
                comp += (row - t) + acc
            acc = t
        parts[i] = 0.5 * (acc + comp)
    return parts


@njit(cache=True, parallel=True)
def exact_axial(M, c, mu, b_left, b_right):
    """Both shifts along one lattice axis; the transverse plane is folded 8-fold."""
    n = 2 * M + 1
    zl = np.empty(n)
    zr = np.empty(n)
    for k in range(n):
        m = k - M
        zl[k] = c * (m - b_left) ** 2
        zr[k] = c * (m - b_right) ** 2
    parts = np.zeros(M + 1)
    for a in prange(M + 1):
        acc = 0.0
        comp = 0.0
        for b in range(a, M + 1):
            if a == 0 and b == 0:
                w = 1.0
            elif a == 0 or a == b:
                w = 4.0
            else:
                w = 8.0
            base = c * (a * a + b * b) - mu
            row = 0.0
            for k in range(n):
                xl = base + zl[k]
                xr = base + zr[k]
                row += abs(_tanh_like(xr) - _tanh_like(xl))
            v = w * row
            t = acc + v
            if abs(acc) >= abs(v):
                comp += (acc - t) + v
            else:
                comp += (v - t) + acc
            acc = t
        parts[a] = 0.5 * (acc + comp)
    return parts


@njit(cache=True, parallel=True)
def first_order_general(M, c, mu, g):
    """Sum of |g.n| / (1 + x^2)^(3/2) with x = c |n|^2 - mu."""
    n = 2 * M + 1
    parts = np.zeros(n)
    for i in prange(n):
        mi = i - M
        acc = 0.0
        comp = 0.0
        for j in range(n):
            mj = j - M
            base = c * (mi * mi + mj * mj) - mu
            lin = g[0] * mi + g[1] * mj
            row = 0.0
            for k in range(n):
                mk = k - M
                x = base + c * mk * mk
                row += abs(lin + g[2] * mk) / (1.0 + x * x) ** 1.5
            t = acc + row
            if abs(acc) >= abs(row):
                comp += (acc - t) + row
            else:
                comp += (row - t) + acc
            acc = t
        parts[i] = acc + comp
    return parts


@njit(cache=True, parallel=True)
def first_order_axial(M, c, mu, g):
    n = 2 * M + 1
    parts = np.zeros(M + 1)
    for a in prange(M + 1):
        acc = 0.0
        comp = 0.0
        for b in range(a, M + 1):
            if a == 0 and b == 0:
                w = 1.0
            elif a == 0 or a == b:
                w = 4.0
            else:
                w = 8.0
            base = c * (a * a + b * b) - mu
            row = 0.0
            for k in range(n):
                mk = k - M
                x = base + c * mk * mk
                row += abs(g * mk) / (1.0 + x * x) ** 1.5
            v = w * row
            t = acc + v
            if abs(acc) >= abs(v):
                comp += (acc - t) + v
            else:
                comp += (v - t) + acc
            acc = t
        parts[a] = acc + comp
    return parts
