"""Numba kernels for the accelerated relaxation mode."""

import numba
import numpy as np


@numba.njit(cache=True, nogil=True)
def sor_sweeps(indptr, indices, data, diag, b, x, omega, nsweeps):
    """In-place successive-over-relaxation sweeps in natural row order
    on a CSR matrix.  Single-threaded on purpose: the update order is
    part of the method and must stay deterministic."""
    n = x.shape[0]
    for _ in range(nsweeps):
        for i in range(n):
            acc = 0.0
            for jj in range(indptr[i], indptr[i + 1]):
                acc += data[jj] * x[indices[jj]]
            x[i] -= omega * (acc - b[i]) / diag[i]
    return x
