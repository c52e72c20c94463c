"""Right quaternionic linear algebra on H^d.

Vectors form a right module: scalars multiply entries on the right, and
matrices act from the left, so M(phi*q) == (M phi)*q.  The H-valued inner
product <phi|psi> = sum_a conj(phi_a) * psi_a is linear in the second slot
and conjugate-linear in the first.

Spectral computations go through the complex embedding: an entry
q = a + b*i + c*j + d*k becomes the 2x2 complex block

    [[ a + b*i,  c + d*i],
     [-c + d*i,  a - b*i]]

which is a *-homomorphism, so a self-adjoint quaternionic matrix has the
(doubled) real spectrum of its embedded image.  Eigenvalues are extracted
with a cyclic Jacobi iteration; linear systems are solved with Gaussian
elimination over H, multiplying pivot inverses on the left so that
right-linearity of the system is preserved.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .errors import (
    AmbientMismatch,
    DimensionMismatch,
    NoConvergence,
    NotSelfAdjoint,
    SingularMatrix,
)
from .quat import Quaternion, qabs, qabs2, qconj, qmul

# Tolerance policy: rank decisions are relative to the largest input
# magnitude; self-adjointness and orthonormality checks are absolute at
# desk scale.
PIVOT_RTOL = 1e-12
SELF_ADJOINT_ATOL = 1e-10
ORTHO_ATOL = 1e-10
ORTHO_DROP_RTOL = 1e-10
OFF_DIAG_RTOL = 1e-12
DEFAULT_MAX_SWEEPS = 100


def _vector_array(entries) -> np.ndarray:
    if isinstance(entries, np.ndarray):
        arr = np.array(entries, dtype=float)
    else:
        rows = []
        for e in entries:
            rows.append(e.to_list() if isinstance(e, Quaternion) else list(e))
        arr = np.array(rows, dtype=float)
    if arr.ndim != 2 or arr.shape[-1] != 4:
        raise ValueError(f"expected shape (d, 4), got {arr.shape}")
    return arr


def _matrix_array(entries) -> np.ndarray:
    if isinstance(entries, np.ndarray):
        arr = np.array(entries, dtype=float)
    else:
        rows = []
        for row in entries:
            rows.append([e.to_list() if isinstance(e, Quaternion) else list(e) for e in row])
        arr = np.array(rows, dtype=float)
    if arr.ndim != 3 or arr.shape[-1] != 4:
        raise ValueError(f"expected shape (rows, cols, 4), got {arr.shape}")
    return arr


class QVector:
    """Immutable vector with quaternion entries, scalars acting on the right."""

    __slots__ = ("_a",)

    def __init__(self, entries):
        arr = _vector_array(entries)
        if arr.shape[0] == 0:
            raise ValueError("vector needs at least one entry")
        if not np.all(np.isfinite(arr)):
            raise ValueError("non-finite vector component")
        arr.flags.writeable = False
        self._a = arr

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "QVector":
        obj = object.__new__(cls)
        arr.flags.writeable = False
        obj._a = arr
        return obj

    @property
    def array(self) -> np.ndarray:
        """Read-only (d, 4) component view."""
        return self._a

    @property
    def dim(self) -> int:
        return self._a.shape[0]

    @property
    def entries(self) -> tuple:
        return tuple(Quaternion.from_array(row) for row in self._a)

    def entry(self, a: int) -> Quaternion:
        return Quaternion.from_array(self._a[a])

    def norm(self) -> float:
        return float(np.linalg.norm(self._a))

    def __add__(self, other: "QVector") -> "QVector":
        return QVector._wrap(self._a + other._a)

    def __sub__(self, other: "QVector") -> "QVector":
        return QVector._wrap(self._a - other._a)

    def __neg__(self) -> "QVector":
        return QVector._wrap(-self._a)

    def __mul__(self, scalar):
        """Right scalar multiplication, entrywise v_a * q."""
        if isinstance(scalar, Quaternion):
            return QVector._wrap(qmul(self._a, scalar.to_array()))
        if isinstance(scalar, (int, float)):
            return QVector._wrap(self._a * float(scalar))
        return NotImplemented

    def to_list(self) -> list:
        return [list(row) for row in self._a.tolist()]

    @classmethod
    def from_list(cls, data) -> "QVector":
        return cls(np.asarray(data, float))

    def __repr__(self):
        return f"QVector(dim={self.dim})"


class QMatrix:
    """Immutable matrix of quaternions acting on the left of QVectors."""

    __slots__ = ("_a",)

    def __init__(self, entries):
        arr = _matrix_array(entries)
        if arr.shape[0] == 0 or arr.shape[1] == 0:
            raise ValueError("matrix needs at least one row and column")
        if not np.all(np.isfinite(arr)):
            raise ValueError("non-finite matrix component")
        arr.flags.writeable = False
        self._a = arr

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "QMatrix":
        obj = object.__new__(cls)
        arr.flags.writeable = False
        obj._a = arr
        return obj

    @property
    def array(self) -> np.ndarray:
        """Read-only (rows, cols, 4) component view."""
        return self._a

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    def entry(self, r: int, c: int) -> Quaternion:
        return Quaternion.from_array(self._a[r, c])

    def __add__(self, other: "QMatrix") -> "QMatrix":
        return QMatrix._wrap(self._a + other._a)

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        return QMatrix._wrap(self._a - other._a)

    def __neg__(self) -> "QMatrix":
        return QMatrix._wrap(-self._a)

    def __mul__(self, scalar):
        if isinstance(scalar, (int, float)):
            return QMatrix._wrap(self._a * float(scalar))
        return NotImplemented

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, QMatrix):
            if self.cols != other.rows:
                raise DimensionMismatch(f"cannot multiply {self.cols} cols by {other.rows} rows")
            return QMatrix._wrap(_mm(self._a, other._a))
        if isinstance(other, QVector):
            if self.cols != other.dim:
                raise DimensionMismatch(f"matrix cols {self.cols} != vector dim {other.dim}")
            return QVector._wrap(_mv(self._a, other._a))
        return NotImplemented

    def to_dict(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "entries": [[list(e) for e in row] for row in self._a.tolist()],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "QMatrix":
        arr = np.asarray(data["entries"], float)
        m = cls(arr)
        if m.rows != int(data["rows"]) or m.cols != int(data["cols"]):
            raise ValueError("rows/cols fields disagree with entry array")
        return m

    def __repr__(self):
        return f"QMatrix({self.rows}x{self.cols})"


def _mm(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    # (r,k,4) @ (k,c,4) -> (r,c,4); Hamilton product then contraction over k
    return np.sum(qmul(A[:, :, None, :], B[None, :, :, :]), axis=1)


def _mv(A: np.ndarray, x: np.ndarray) -> np.ndarray:
    return np.sum(qmul(A, x[None, :, :]), axis=1)


def zero_vector(d: int) -> QVector:
    return QVector(np.zeros((d, 4)))


def basis_vector(d: int, a: int) -> QVector:
    arr = np.zeros((d, 4))
    arr[a, 0] = 1.0
    return QVector(arr)


def zero_matrix(rows: int, cols: int) -> QMatrix:
    return QMatrix(np.zeros((rows, cols, 4)))


def identity(d: int) -> QMatrix:
    arr = np.zeros((d, d, 4))
    arr[np.arange(d), np.arange(d), 0] = 1.0
    return QMatrix(arr)


def inner(phi: QVector, psi: QVector) -> Quaternion:
    """<phi|psi> = sum_a conj(phi_a) * psi_a."""
    if phi.dim != psi.dim:
        raise DimensionMismatch(f"inner product of dims {phi.dim} and {psi.dim}")
    return Quaternion.from_array(np.sum(qmul(qconj(phi._a), psi._a), axis=0))


def outer(eta: QVector, zeta: QVector) -> QMatrix:
    """|eta><zeta|: the matrix M with M[a,b] = eta_a * conj(zeta_b).

    Applying it gives M phi = eta * <zeta|phi> because the left factor
    eta_a is common to every term of the contraction.
    """
    if eta.dim != zeta.dim:
        raise DimensionMismatch(f"outer product of dims {eta.dim} and {zeta.dim}")
    return QMatrix._wrap(qmul(eta._a[:, None, :], qconj(zeta._a)[None, :, :]))


def adjoint(M: QMatrix) -> QMatrix:
    """Conjugate transpose; satisfies <adjoint(M) phi|psi> = <phi|M psi>."""
    return QMatrix._wrap(np.ascontiguousarray(qconj(np.swapaxes(M._a, 0, 1))))


def _solve_columns_raw(M: np.ndarray, B: np.ndarray, pivot_rtol: float) -> np.ndarray:
    """Gaussian elimination over H with partial pivoting on entry magnitude.

    Rows are normalized by left-multiplying with the pivot inverse (order
    matters in H; column scaling is never used).  Pivot viability is judged
    against the largest magnitude of the original matrix.
    """
    n = M.shape[0]
    aug = np.concatenate([np.array(M, dtype=float), np.array(B, dtype=float)], axis=1)
    scale = float(qabs(M).max())
    if scale == 0.0:
        raise SingularMatrix("zero matrix")
    tol = pivot_rtol * scale
    for col in range(n):
        mags = qabs(aug[col:, col])
        p = col + int(np.argmax(mags))
        if mags[p - col] <= tol:
            raise SingularMatrix(f"no usable pivot in column {col}")
        if p != col:
            aug[[col, p]] = aug[[p, col]]
        pivot = aug[col, col]
        inv_pivot = qconj(pivot) / qabs2(pivot)
        aug[col, col:] = qmul(inv_pivot[None, :], aug[col, col:])
        if col + 1 < n:
            factors = aug[col + 1:, col]
            aug[col + 1:, col:] -= qmul(factors[:, None, :], aug[col, col:][None, :, :])
            aug[col + 1:, col] = 0.0
    # back substitution; pivots are unit after normalization
    X = aug[:, n:].copy()
    for row in range(n - 2, -1, -1):
        X[row] -= np.sum(qmul(aug[row, row + 1: n][:, None, :], X[row + 1: n]), axis=0)
    return X


def solve(M: QMatrix, b: QVector, *, pivot_rtol: float = PIVOT_RTOL) -> QVector:
    """Solve M x = b over H."""
    if M.rows != M.cols:
        raise DimensionMismatch("solve needs a square matrix")
    if M.rows != b.dim:
        raise DimensionMismatch(f"matrix is {M.rows}x{M.cols}, vector dim {b.dim}")
    X = _solve_columns_raw(M._a, b._a[:, None, :], pivot_rtol)
    return QVector._wrap(X[:, 0, :])


def solve_columns(M: QMatrix, B: QMatrix, *, pivot_rtol: float = PIVOT_RTOL) -> QMatrix:
    """Solve M X = B column by column with a single elimination pass."""
    if M.rows != M.cols:
        raise DimensionMismatch("solve needs a square matrix")
    if M.rows != B.rows:
        raise DimensionMismatch(f"matrix is {M.rows}x{M.cols}, rhs has {B.rows} rows")
    return QMatrix._wrap(_solve_columns_raw(M._a, B._a, pivot_rtol))


def embed(M: QMatrix) -> np.ndarray:
    """Complex embedding; a (r, c) quaternionic matrix becomes (2r, 2c)."""
    a = M._a
    z1 = a[..., 0] + 1j * a[..., 1]
    z2 = a[..., 2] + 1j * a[..., 3]
    r, c = a.shape[0], a.shape[1]
    out = np.empty((2 * r, 2 * c), dtype=complex)
    out[0::2, 0::2] = z1
    out[0::2, 1::2] = z2
    out[1::2, 0::2] = -np.conj(z2)
    out[1::2, 1::2] = np.conj(z1)
    return out


def _jacobi_eigvals(H: np.ndarray, max_sweeps: int, off_rtol: float) -> np.ndarray:
    """Cyclic Jacobi for a complex Hermitian matrix, eigenvalues only.

    Sweeps the upper triangle in row-major order until the off-diagonal
    Frobenius norm drops below off_rtol * ||H||_F.
    """
    n = H.shape[0]
    A = 0.5 * (H + H.conj().T)
    norm = float(np.linalg.norm(A))
    if norm == 0.0:
        return np.zeros(n)
    target = off_rtol * norm
    skip = target / (2.0 * n * n)
    off_mask = ~np.eye(n, dtype=bool)
    for _ in range(max_sweeps):
        off = float(np.linalg.norm(A[off_mask]))
        if off <= target:
            return np.sort(np.diagonal(A).real)
        for p in range(n - 1):
            for q in range(p + 1, n):
                h = A[p, q]
                ah = abs(h)
                if ah <= skip:
                    continue
                phase = h / ah
                tau = (A[q, q].real - A[p, p].real) / (2.0 * ah)
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                sp = s * phase
                colp = A[:, p].copy()
                colq = A[:, q].copy()
                A[:, p] = c * colp - np.conj(sp) * colq
                A[:, q] = sp * colp + c * colq
                rowp = A[p, :].copy()
                rowq = A[q, :].copy()
                A[p, :] = c * rowp - sp * rowq
                A[q, :] = np.conj(sp) * rowp + c * rowq
                A[p, q] = 0.0
                A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
    raise NoConvergence(f"Jacobi did not reach off-diagonal target in {max_sweeps} sweeps")


def hermitian_spectrum(
    M: QMatrix,
    *,
    max_sweeps: int = DEFAULT_MAX_SWEEPS,
    off_rtol: float = OFF_DIAG_RTOL,
    adjoint_atol: float = SELF_ADJOINT_ATOL,
) -> np.ndarray:
    """Eigenvalues of a self-adjoint quaternionic matrix, sorted, length 2d.

    Computed on the complex embedding, so every quaternionic eigenvalue
    appears twice; the pairing is a built-in consistency check for callers.
    """
    if M.rows != M.cols:
        raise DimensionMismatch("spectrum of a non-square matrix")
    dev = float(np.max(np.abs(M._a - adjoint(M)._a)))
    if dev > adjoint_atol:
        raise NotSelfAdjoint(f"max |M - M*| component is {dev:.3e}")
    return _jacobi_eigvals(embed(M), max_sweeps, off_rtol)


def operator_norm(M: QMatrix) -> float:
    """Largest singular value: sqrt(max eigenvalue of M* M)."""
    gram = adjoint(M) @ M
    spectrum = hermitian_spectrum(gram)
    return math.sqrt(max(0.0, float(spectrum[-1])))


def neumann_invertible(M: QMatrix, *, certify_atol: float = 1e-9):
    """Decide ||M|| < 1 and, when true, return the inverse of I - M.

    Returns (False, None) otherwise.  The returned inverse is certified by
    multiplying back onto I - M; a residual above certify_atol raises.
    """
    if M.rows != M.cols:
        raise DimensionMismatch("Neumann test needs a square matrix")
    if operator_norm(M) >= 1.0:
        return False, None
    eye = identity(M.rows)
    shifted = eye - M
    inv = solve_columns(shifted, eye)
    residual = float(np.max(np.abs((shifted @ inv)._a - eye._a)))
    if residual > certify_atol:
        raise SingularMatrix(f"inverse certification residual {residual:.3e}")
    return True, inv


class Subspace:
    """A subspace given by an orthonormal basis (possibly empty)."""

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim: int, basis: Sequence[QVector], *, validate: bool = True):
        self.ambient_dim = int(ambient_dim)
        self.basis = tuple(basis)
        if validate:
            for v in self.basis:
                if v.dim != self.ambient_dim:
                    raise DimensionMismatch("basis vector has wrong ambient dimension")
            for i, bi in enumerate(self.basis):
                for j, bj in enumerate(self.basis):
                    g = inner(bi, bj).to_array()
                    g[0] -= 1.0 if i == j else 0.0
                    if np.max(np.abs(g)) > ORTHO_ATOL:
                        raise ValueError("basis is not orthonormal")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def basis_matrix(self) -> QMatrix:
        """Basis vectors stacked as columns."""
        if not self.basis:
            raise ValueError("zero subspace has no basis matrix")
        cols = np.stack([b._a for b in self.basis], axis=1)
        return QMatrix._wrap(cols)

    def projector(self) -> QMatrix:
        """Orthogonal projector sum_j |b_j><b_j| (zero matrix if empty)."""
        arr = np.zeros((self.ambient_dim, self.ambient_dim, 4))
        for b in self.basis:
            arr += qmul(b._a[:, None, :], qconj(b._a)[None, :, :])
        return QMatrix._wrap(arr)

    def __repr__(self):
        return f"Subspace(ambient={self.ambient_dim}, dim={self.dim})"


def orthonormalize(vectors: Sequence[QVector], *, drop_rtol: float = ORTHO_DROP_RTOL) -> Subspace:
    """Modified Gram-Schmidt with right scalar coefficients.

    Each candidate is reduced by v <- v - b * <b|v> against the accepted
    basis; residuals below drop_rtol times the largest input norm are
    discarded, so rank-deficient input just yields a smaller basis.
    """
    vectors = list(vectors)
    if not vectors:
        raise ValueError("orthonormalize needs at least one vector")
    d = vectors[0].dim
    for v in vectors:
        if v.dim != d:
            raise DimensionMismatch("mixed dimensions in orthonormalize")
    scale = max(v.norm() for v in vectors)
    if scale == 0.0:
        return Subspace(d, ())
    cutoff = drop_rtol * scale
    basis = []
    for v in vectors:
        w = v._a.copy()
        for b in basis:
            coeff = np.sum(qmul(qconj(b), w), axis=0)  # <b|w>
            w -= qmul(b, coeff[None, :])
        nrm = float(np.linalg.norm(w))
        if nrm > cutoff:
            basis.append(w / nrm)
    return Subspace(d, tuple(QVector._wrap(b) for b in basis))


def gap(K: Subspace, L: Subspace) -> float:
    """Directional gap sup_{phi in K, |phi|=1} dist(phi, L).

    Realized as the operator norm of (I - P_L) B_K, where B_K stacks K's
    basis as columns; the projection onto L attains the inner infimum.
    Zero subspace K gives 0 by convention.
    """
    if K.ambient_dim != L.ambient_dim:
        raise AmbientMismatch(f"ambient dims {K.ambient_dim} and {L.ambient_dim}")
    if K.dim == 0:
        return 0.0
    B = K.basis_matrix()
    residual = B - (L.projector() @ B)
    value = operator_norm(residual)
    return min(1.0, max(0.0, value))
