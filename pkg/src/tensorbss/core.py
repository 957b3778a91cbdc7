"""Dense and symmetric tensor types with the multilinear products used everywhere else.

Conventions, fixed once for the whole package:

* entries are real ``float64`` scalars in row-major layout (last index fastest);
* mode numbers are 1-based (``mode 1`` is the first axis), matching the usual
  mathematical naming, while entry indices are plain 0-based numpy indices;
* unfoldings enumerate their columns lexicographically over the remaining
  modes taken in increasing mode order;
* symmetric tensors are packed with one scalar per multi-index, in the
  descending-lex enumeration of :mod:`tensorbss.indexing`.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from math import comb, isqrt

import numpy as np

from .indexing import multi_indices, multiplicities, packed_length, packing_positions


def _as_array(t) -> np.ndarray:
    if isinstance(t, DenseTensor):
        return t.array
    if isinstance(t, SymTensor):
        return t.expand().array
    return np.asarray(t, dtype=float)


@dataclass(frozen=True)
class DenseTensor:
    """Order-``d`` array of real scalars; order 0 is a scalar, order 1 a vector."""

    array: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(np.asarray(self.array, dtype=float))
        if not np.all(np.isfinite(arr)):
            raise ValueError("tensor entries must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "array", arr)

    @property
    def order(self) -> int:
        return self.array.ndim

    @property
    def dims(self) -> tuple[int, ...]:
        return self.array.shape

    @property
    def data(self) -> np.ndarray:
        """Flat row-major view of the entries."""
        return self.array.reshape(-1)

    @classmethod
    def from_flat(cls, dims, data) -> "DenseTensor":
        dims = tuple(int(n) for n in dims)
        data = np.asarray(data, dtype=float)
        if data.size != int(np.prod(dims, dtype=np.int64)):
            raise ValueError("data length does not match the product of dims")
        return cls(data.reshape(dims))

    def norm(self) -> float:
        return float(np.linalg.norm(self.array))


@dataclass(frozen=True)
class SymTensor:
    """Symmetric tensor stored by distinct entries, one per multi-index.

    ``packed[p]`` is the common value of every entry whose axis counts equal
    the ``p``-th multi-index of ``multi_indices(dim, order)``.
    """

    dim: int
    order: int
    packed: np.ndarray

    def __post_init__(self):
        packed = np.asarray(self.packed, dtype=float)
        expected = packed_length(self.dim, self.order)
        if packed.shape != (expected,):
            raise ValueError(f"packed storage must have length {expected}, got {packed.shape}")
        packed = packed.copy()
        packed.setflags(write=False)
        object.__setattr__(self, "packed", packed)

    def expand(self) -> DenseTensor:
        pos = packing_positions(self.dim, self.order)
        full = self.packed[pos].reshape((self.dim,) * self.order)
        return DenseTensor(full)

    def entry(self, *axes: int) -> float:
        """Entry at 0-based indices ``axes`` (any permutation gives the same value)."""
        from .indexing import counts_from_axes, mindex_position

        j = counts_from_axes(axes, self.dim)
        return float(self.packed[mindex_position(self.dim, self.order)[j]])

    def norm(self) -> float:
        """Frobenius norm of the expanded tensor, computed from packed storage."""
        c = multiplicities(self.dim, self.order)
        return float(np.sqrt(np.sum(c * self.packed**2)))

    @classmethod
    def from_dense(cls, t, tol: float = 1e-8) -> "SymTensor":
        """Pack an (already symmetric) dense tensor; reject asymmetry beyond ``tol``."""
        arr = _as_array(t)
        dims = set(arr.shape)
        if len(dims) > 1:
            raise ValueError("symmetric tensors need equal dimensions on every mode")
        sym = symmetrize(arr)
        scale = max(1.0, float(np.abs(arr).max(initial=0.0)))
        if np.abs(sym.expand().array - arr).max(initial=0.0) > tol * scale:
            raise ValueError("input tensor is not symmetric within tolerance")
        return sym


def outer_product(a, b) -> DenseTensor:
    """Outer product; the result order is the sum of the input orders."""
    a, b = _as_array(a), _as_array(b)
    return DenseTensor(np.multiply.outer(a, b))


def contract(a, b, p: int = 1, q: int = 1) -> DenseTensor:
    """Contraction over mode ``p`` of ``a`` and mode ``q`` of ``b`` (1-based).

    The shared dimension is summed; remaining modes of ``a`` are followed by
    the remaining modes of ``b``.  With both defaults the first indices are
    contracted, so the ordinary matrix-vector product ``A u`` is
    ``contract(A.T, u)``.
    """
    a, b = _as_array(a), _as_array(b)
    if not 1 <= p <= a.ndim or not 1 <= q <= b.ndim:
        raise ValueError("contraction mode out of range")
    if a.shape[p - 1] != b.shape[q - 1]:
        raise ValueError(
            f"cannot contract: mode {p} of left operand has dimension "
            f"{a.shape[p - 1]} but mode {q} of right operand has {b.shape[q - 1]}"
        )
    return DenseTensor(np.tensordot(a, b, axes=(p - 1, q - 1)))


def tucker_transform(t, matrices) -> DenseTensor:
    """Multilinear change of coordinates ``T'_{ij..} = sum A_{ia} B_{jb} .. T_{ab..}``.

    ``matrices[k]`` acts on mode ``k+1`` and must have as many columns as that
    mode's dimension; output dimensions are the matrices' row counts.
    """
    arr = _as_array(t)
    matrices = [np.asarray(m, dtype=float) for m in matrices]
    if len(matrices) != arr.ndim:
        raise ValueError(f"expected {arr.ndim} matrices, got {len(matrices)}")
    for k, m in enumerate(matrices):
        if m.ndim != 2 or m.shape[1] != arr.shape[k]:
            raise ValueError(f"matrix {k} must have {arr.shape[k]} columns")
    out = arr
    for k, m in enumerate(matrices):
        out = np.moveaxis(np.tensordot(m, out, axes=(1, k)), 0, k)
    return DenseTensor(out)


def mode_n_unfold(t, n: int) -> np.ndarray:
    """Mode-``n`` unfolding: rows follow index ``n``, columns the remaining indices."""
    arr = _as_array(t)
    if not 1 <= n <= arr.ndim:
        raise ValueError(f"mode {n} invalid for an order-{arr.ndim} tensor")
    return np.moveaxis(arr, n - 1, 0).reshape(arr.shape[n - 1], -1)


def mode_n_rank(t, n: int, eps: float = 1e-12) -> int:
    """Numerical rank of the mode-``n`` unfolding.

    Singular values above ``max(dims) * eps * sigma_1`` count; the tensor rank
    is never smaller than any mode rank.
    """
    arr = _as_array(t)
    m = mode_n_unfold(arr, n)
    s = np.linalg.svd(m, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > max(arr.shape) * eps * s[0]))


def frobenius_inner(g, h) -> float:
    """Entrywise scalar product ``sum_i G_i H_i``; its square root is the norm."""
    g, h = _as_array(g), _as_array(h)
    if g.shape != h.shape:
        raise ValueError(f"shape mismatch: {g.shape} vs {h.shape}")
    return float(np.sum(g * h))


def kronecker(u, v) -> np.ndarray:
    """All cross-products ``u_j v_k`` of two vectors, lexicographic in (j, k)."""
    u = np.asarray(u, dtype=float).reshape(-1)
    v = np.asarray(v, dtype=float).reshape(-1)
    return np.kron(u, v)


def sym_kronecker(w, d: int) -> np.ndarray:
    """Symmetric Kronecker power: distinct monomials of ``w`` with norm-preserving weights.

    Entry for multi-index ``j`` is ``sqrt(c(j)) * w**j``, so that
    ``norm(sym_kronecker(w, d)) == norm(w)**d``, the norm of the full d-fold
    Kronecker power.  Length is ``binom(K + d - 1, d)``.
    """
    if d < 1:
        raise ValueError("order d must be >= 1")
    w = np.asarray(w, dtype=float).reshape(-1)
    k = w.size
    c = multiplicities(k, d)
    mono = np.array([np.prod(w**np.array(j)) for j in multi_indices(k, d)])
    return np.sqrt(c) * mono


def vecs(m, tol: float = 1e-8) -> np.ndarray:
    """Pack a symmetric matrix into its K(K+1)/2 distinct entries.

    Off-diagonal slots carry a ``sqrt(2)`` weight so the Euclidean norm of the
    packed vector equals the Frobenius norm of the matrix, and
    ``vecs(np.outer(f, f)) == sym_kronecker(f, 2)``.
    """
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("vecs expects a square matrix")
    scale = max(1.0, float(np.abs(m).max(initial=0.0)))
    if np.abs(m - m.T).max(initial=0.0) > tol * scale:
        raise ValueError("matrix is not symmetric within tolerance")
    k = m.shape[0]
    out = np.empty(packed_length(k, 2))
    for p, j in enumerate(multi_indices(k, 2)):
        a = [i for i, cnt in enumerate(j) for _ in range(cnt)]
        w = np.sqrt(2.0) if a[0] != a[1] else 1.0
        out[p] = w * m[a[0], a[1]]
    return out


def unvecs(x) -> np.ndarray:
    """Inverse of :func:`vecs`; rejects vectors whose length is not triangular."""
    x = np.asarray(x, dtype=float).reshape(-1)
    # K(K+1)/2 = len  =>  K = (sqrt(8*len + 1) - 1) / 2
    k = (isqrt(8 * x.size + 1) - 1) // 2
    if k * (k + 1) // 2 != x.size:
        raise ValueError(f"length {x.size} is not K(K+1)/2 for any K")
    m = np.empty((k, k))
    for p, j in enumerate(multi_indices(k, 2)):
        a = [i for i, cnt in enumerate(j) for _ in range(cnt)]
        val = x[p] / (np.sqrt(2.0) if a[0] != a[1] else 1.0)
        m[a[0], a[1]] = val
        m[a[1], a[0]] = val
    return m


def symmetrize(t) -> SymTensor:
    """Average a cubical tensor over all index permutations and pack it."""
    arr = _as_array(t)
    if arr.ndim == 0:
        raise ValueError("cannot symmetrize a scalar")
    if len(set(arr.shape)) > 1:
        raise ValueError("symmetrize needs equal dimensions on every mode")
    n, d = arr.shape[0], arr.ndim
    pos = packing_positions(n, d)
    flat = arr.reshape(-1)
    sums = np.bincount(pos, weights=flat, minlength=packed_length(n, d))
    counts = np.bincount(pos, minlength=packed_length(n, d))
    return SymTensor(n, d, sums / counts)


def symmetrize_dense(t) -> DenseTensor:
    """Permutation-averaged dense tensor (no packing); exact for small orders."""
    arr = _as_array(t)
    out = np.zeros_like(arr)
    axes = range(arr.ndim)
    nperm = 0
    for perm in permutations(axes):
        out += np.transpose(arr, perm)
        nperm += 1
    return DenseTensor(out / nperm)


def rank1_sym(w, d: int, weight: float = 1.0) -> DenseTensor:
    """Dense ``weight * w ∘ w ∘ ... ∘ w`` with ``d`` factors."""
    w = np.asarray(w, dtype=float).reshape(-1)
    out = np.array(weight, dtype=float)
    for _ in range(d):
        out = np.multiply.outer(out, w)
    return DenseTensor(out)
