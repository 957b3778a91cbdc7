"""Sample moment and cumulant tensors of orders 1 to 4.

Estimators are plug-in: central moments with 1/N normalization combined by
the order-4 pairing formula

    C_ijkl = m_ijkl - m_ij m_kl - m_ik m_jl - m_il m_jk.

This choice keeps the estimators exactly multilinear, so transforming the
samples by any matrix M and transforming the tensor by the Tucker product
with M on every mode give identical results up to rounding.  Each distinct
entry is computed once per multi-index and broadcast, so the returned tensors
are symmetric by construction, and the sequential reduction order makes
results bit-reproducible.

Samples are plain arrays with one observation per row.
"""

from __future__ import annotations

import numpy as np

from .core import SymTensor
from .indexing import multi_indices, representative_axes

MAX_ORDER = 4


def as_samples(z) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    if z.ndim != 2:
        raise ValueError("samples must be a 2-D array, one observation per row")
    if z.shape[0] < 1:
        raise ValueError("at least one sample is required")
    if not np.all(np.isfinite(z)):
        raise ValueError("samples must be finite")
    return z


def _packed_products(z: np.ndarray, d: int) -> np.ndarray:
    """Mean of the d-fold column products, one value per multi-index."""
    n = z.shape[1]
    powers = [None, z]
    for _ in range(d - 1):
        powers.append(powers[-1] * z)
    out = np.empty(len(multi_indices(n, d)))
    for pos, j in enumerate(multi_indices(n, d)):
        acc = None
        for var, count in enumerate(j):
            if count == 0:
                continue
            col = powers[count][:, var]
            acc = col if acc is None else acc * col
        out[pos] = float(acc.mean())
    return out


def moment_tensor(z, d: int) -> SymTensor:
    """Raw moment tensor: sample average of d-fold products (no centering)."""
    if not 1 <= d <= MAX_ORDER:
        raise ValueError(f"order must be between 1 and {MAX_ORDER}")
    z = as_samples(z)
    return SymTensor(z.shape[1], d, _packed_products(z, d))


def cumulant_tensor(z, d: int) -> SymTensor:
    """Cumulant tensor of order ``d``; orders 2+ remove the sample mean first."""
    if not 1 <= d <= MAX_ORDER:
        raise ValueError(f"order must be between 1 and {MAX_ORDER}")
    z = as_samples(z)
    n = z.shape[1]
    if d == 1:
        return SymTensor(n, 1, z.mean(axis=0))
    if z.shape[0] < 2:
        raise ValueError("orders >= 2 need at least two samples")
    zc = z - z.mean(axis=0)
    if d in (2, 3):
        return SymTensor(n, d, _packed_products(zc, d))
    m2 = (zc.T @ zc) / zc.shape[0]
    m4 = _packed_products(zc, 4)
    packed = np.empty_like(m4)
    for pos, j in enumerate(multi_indices(n, 4)):
        i, k, l, m = representative_axes(j)
        packed[pos] = (
            m4[pos] - m2[i, k] * m2[l, m] - m2[i, l] * m2[k, m] - m2[i, m] * m2[k, l]
        )
    return SymTensor(n, 4, packed)


def offdiag_ratio(c: SymTensor) -> float:
    """Norm fraction carried by off-diagonal entries; 0 iff the tensor is diagonal."""
    total = c.norm()
    if total == 0.0:
        return 0.0
    diag_sq = sum(
        float(c.packed[pos]) ** 2
        for pos, j in enumerate(multi_indices(c.dim, c.order))
        if max(j) == c.order
    )
    off_sq = max(total**2 - diag_sq, 0.0)
    return float(np.sqrt(off_sq)) / total
