"""Rank-n frame families under a finite quadrature measure.

A family carries n vectors per measure node; integrals against the measure
are weighted sums over nodes.  The central object is the family operator

    A = sum_{i,k} w_k |eta_ik><eta_ik|

whose extreme eigenvalues are the sharp constants of the energy inequality

    lower * |phi|^2 <= sum_{i,k} w_k |<eta_ik|phi>|^2 <= upper * |phi|^2.

Coefficient tables store plain inner products; the measure weights are
applied on the synthesis side, where the integral sign sits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotAFrame, ShapeMismatch
from .linalg import QMatrix, QVector, hermitian_spectrum, solve_columns
from .quat import Quaternion, qabs2, qconj, qmul

# A family counts as a frame when lower > FRAME_RTOL * upper.
FRAME_RTOL = 1e-10

# Smallest node-Gram eigenvalue must exceed this fraction of the largest.
NODE_INDEPENDENCE_RTOL = 1e-10


@dataclass(frozen=True)
class QuadratureMeasure:
    """Finite node/weight stand-in for an integration measure.

    Labels are metadata carried through serialization; only the weights
    enter any computation.
    """

    nodes: tuple

    def __post_init__(self):
        nodes = tuple((label, float(weight)) for label, weight in self.nodes)
        for label, weight in nodes:
            if not isinstance(label, Quaternion):
                raise ValueError("node label must be a Quaternion")
            if not weight > 0.0:
                raise ValueError(f"node weight must be positive, got {weight!r}")
        object.__setattr__(self, "nodes", nodes)

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for _, w in self.nodes])

    @property
    def labels(self) -> np.ndarray:
        return np.array([lab.to_list() for lab, _ in self.nodes])


def node_vectors_independent(vectors, *, rtol: float = NODE_INDEPENDENCE_RTOL) -> bool:
    """Check right-linear independence of one node's vectors via their Gram."""
    arr = np.asarray(vectors, float)
    if arr.ndim != 3 or arr.shape[-1] != 4:
        raise ValueError("expected shape (n, d, 4)")
    gram = np.sum(qmul(qconj(arr)[:, None], arr[None, :]), axis=2)
    spectrum = hermitian_spectrum(QMatrix._wrap(gram))
    top = float(spectrum[-1])
    return top > 0.0 and float(spectrum[0]) > rtol * top


class FrameFamily:
    """n vectors per quadrature node, all sharing one ambient dimension."""

    __slots__ = ("_data", "dim", "rank", "measure")

    def __init__(self, dim, rank, measure, vectors, *, validate: bool = True):
        self.dim = int(dim)
        self.rank = int(rank)
        self.measure = measure
        if self.dim < 1 or self.rank < 1:
            raise ValueError("dim and rank must be positive")
        if isinstance(vectors, np.ndarray):
            data = np.array(vectors, dtype=float)
        else:
            data = np.array(
                [[v._a if isinstance(v, QVector) else np.asarray(v, float) for v in node]
                 for node in vectors],
                dtype=float,
            )
        expected = (measure.node_count, self.rank, self.dim, 4)
        if data.shape != expected:
            raise ShapeMismatch(f"vector block has shape {data.shape}, expected {expected}")
        if not np.all(np.isfinite(data)):
            raise ValueError("non-finite family component")
        if validate:
            for k in range(measure.node_count):
                if not node_vectors_independent(data[k]):
                    raise ValueError(f"vectors at node {k} are not right-linearly independent")
        data.flags.writeable = False
        self._data = data

    @property
    def data(self) -> np.ndarray:
        """Read-only (nodes, rank, dim, 4) component block."""
        return self._data

    @property
    def node_count(self) -> int:
        return self.measure.node_count

    @property
    def weights(self) -> np.ndarray:
        return self.measure.weights

    def vector(self, k: int, i: int) -> QVector:
        return QVector._wrap(self._data[k, i])

    @property
    def vectors(self) -> tuple:
        return tuple(tuple(QVector._wrap(self._data[k, i]) for i in range(self.rank))
                     for k in range(self.node_count))

    def all_vectors(self) -> list:
        return [QVector._wrap(self._data[k, i])
                for k in range(self.node_count) for i in range(self.rank)]

    def with_data(self, data: np.ndarray, *, validate: bool = True) -> "FrameFamily":
        """Same measure and shape, different vectors."""
        return FrameFamily(self.dim, self.rank, self.measure, data, validate=validate)

    def to_dict(self) -> dict:
        nodes = []
        for k, (label, weight) in enumerate(self.measure.nodes):
            nodes.append({
                "label": label.to_list(),
                "weight": weight,
                "vectors": [[list(e) for e in self._data[k, i].tolist()]
                            for i in range(self.rank)],
            })
        return {"dim": self.dim, "rank": self.rank, "nodes": nodes}

    @classmethod
    def from_dict(cls, payload: dict, *, validate: bool = True) -> "FrameFamily":
        dim = int(payload["dim"])
        rank = int(payload["rank"])
        nodes = payload["nodes"]
        measure = QuadratureMeasure(tuple(
            (Quaternion.from_array(node["label"]), float(node["weight"])) for node in nodes
        ))
        data = np.array([node["vectors"] for node in nodes], dtype=float)
        return cls(dim, rank, measure, data, validate=validate)

    def __repr__(self):
        return f"FrameFamily(dim={self.dim}, rank={self.rank}, nodes={self.node_count})"


@dataclass(frozen=True)
class FrameBounds:
    """Extreme eigenvalues of a family operator."""

    lower: float
    upper: float

    def __post_init__(self):
        object.__setattr__(self, "lower", float(self.lower))
        object.__setattr__(self, "upper", float(self.upper))
        if not (0.0 <= self.lower <= self.upper):
            raise ValueError(f"invalid bounds ({self.lower!r}, {self.upper!r})")

    @property
    def is_frame(self) -> bool:
        return self.lower > FRAME_RTOL * self.upper

    def to_dict(self) -> dict:
        return {"lower": self.lower, "upper": self.upper}


def _weighted_outer_sum(left: np.ndarray, right: np.ndarray, weights: np.ndarray) -> np.ndarray:
    # sum_{k,i} w_k |left_ki><right_ki| as an (d, d, 4) block
    prods = qmul(left[:, :, :, None, :], qconj(right)[:, :, None, :, :])
    return np.einsum("k,kiabc->abc", weights, prods)


def frame_operator(F: FrameFamily) -> QMatrix:
    """A = sum_{i,k} w_k |eta_ik><eta_ik|; self-adjoint and PSD."""
    return QMatrix._wrap(_weighted_outer_sum(F._data, F._data, F.weights))


def mixed_frame_operator(F: FrameFamily, G: FrameFamily) -> QMatrix:
    """sum_{i,k} w_k |eta_ik><zeta_ik| for two families on one measure."""
    _require_same_shape(F, G)
    return QMatrix._wrap(_weighted_outer_sum(F._data, G._data, F.weights))


def _bounds_of_operator(A: QMatrix) -> FrameBounds:
    spectrum = hermitian_spectrum(A)
    return FrameBounds(max(0.0, float(spectrum[0])), max(0.0, float(spectrum[-1])))


def frame_bounds(F: FrameFamily) -> FrameBounds:
    """Sharp constants of the energy inequality: extreme eigenvalues of A."""
    return _bounds_of_operator(frame_operator(F))


def analysis(F: FrameFamily, phi: QVector) -> np.ndarray:
    """Coefficient table c[i, k] = <eta_ik|phi>, shaped (rank, nodes, 4).

    Weights are not folded in here; they belong to the synthesis sum.
    """
    if phi.dim != F.dim:
        raise DimensionMismatch(f"family dim {F.dim}, vector dim {phi.dim}")
    coeffs = np.sum(qmul(qconj(F._data), phi._a[None, None, :, :]), axis=2)
    return np.ascontiguousarray(np.swapaxes(coeffs, 0, 1))


def synthesis(F: FrameFamily, table) -> QVector:
    """sum_{i,k} w_k * eta_ik * c[i,k] with coefficients on the right."""
    c = np.asarray(table, float)
    if c.shape != (F.rank, F.node_count, 4):
        raise ShapeMismatch(f"table shape {c.shape}, expected {(F.rank, F.node_count, 4)}")
    prods = qmul(F._data, np.swapaxes(c, 0, 1)[:, :, None, :])
    return QVector._wrap(np.einsum("k,kiac->ac", F.weights, prods))


def coefficient_weighted_norm(F: FrameFamily, table) -> float:
    """Weighted table norm: sqrt(sum_{i,k} w_k |c_ik|^2)."""
    c = np.asarray(table, float)
    if c.shape != (F.rank, F.node_count, 4):
        raise ShapeMismatch(f"table shape {c.shape}, expected {(F.rank, F.node_count, 4)}")
    return float(np.sqrt(np.einsum("k,ik->", F.weights, qabs2(c))))


def analysis_energy(F: FrameFamily, phis: np.ndarray) -> np.ndarray:
    """Batched energy sums sum_{i,k} w_k |<eta_ik|phi_b>|^2 for phis (B, d, 4)."""
    phis = np.asarray(phis, float)
    if phis.ndim != 3 or phis.shape[1] != F.dim or phis.shape[2] != 4:
        raise DimensionMismatch(f"expected batch of shape (B, {F.dim}, 4), got {phis.shape}")
    coeffs = np.sum(qmul(qconj(F._data)[:, :, None, :, :], phis[None, None, :, :, :]), axis=3)
    return np.einsum("k,kib->b", F.weights, qabs2(coeffs))


def canonical_dual(F: FrameFamily) -> FrameFamily:
    """Replace every vector by A^{-1} eta; bounds become reciprocals swapped."""
    A = frame_operator(F)
    bounds = _bounds_of_operator(A)
    if not bounds.is_frame:
        raise NotAFrame(f"lower bound {bounds.lower:.3e} vs upper {bounds.upper:.3e}")
    K, n, d, _ = F._data.shape
    columns = QMatrix._wrap(np.ascontiguousarray(
        np.transpose(F._data.reshape(K * n, d, 4), (1, 0, 2))))
    solved = solve_columns(A, columns)._a
    dual_data = np.transpose(solved, (1, 0, 2)).reshape(K, n, d, 4)
    return F.with_data(np.ascontiguousarray(dual_data))


def reconstruct(F: FrameFamily, phi: QVector, *, atol_scale: float = 1e-9) -> QVector:
    """Frame decomposition of phi through the canonical dual.

    Evaluates both orderings -- eta against dual coefficients and dual
    vectors against eta coefficients -- and insists they agree before
    returning the first.
    """
    bounds = frame_bounds(F)
    if not bounds.is_frame:
        raise NotAFrame(f"lower bound {bounds.lower:.3e} vs upper {bounds.upper:.3e}")
    dual = canonical_dual(F)
    first = synthesis(F, analysis(dual, phi))
    second = synthesis(dual, analysis(F, phi))
    tol = atol_scale * (1.0 + phi.norm())
    if (first - second).norm() > tol:
        raise RuntimeError("decomposition orderings disagree beyond tolerance")
    return first


def bessel_bound(F: FrameFamily) -> float:
    """Optimal upper energy constant: the largest eigenvalue of A."""
    return _bounds_of_operator(frame_operator(F)).upper


def integrated_vectors(F: FrameFamily) -> np.ndarray:
    """v_i = sum_k w_k eta_ik, shaped (rank, dim, 4)."""
    return np.einsum("k,kiac->iac", F.weights, F._data)


def riesz_bounds(F: FrameFamily) -> tuple:
    """Sharp constants bracketing |sum_i v_i c_i|^2 / sum_i |c_i|^2.

    The coefficients are indexed by i alone, so the family collapses to
    its integrated vectors v_i; the bounds are the extreme eigenvalues of
    the (rank x rank) Gram matrix of those vectors.
    """
    v = integrated_vectors(F)
    gram = np.sum(qmul(qconj(v)[:, None], v[None, :]), axis=2)
    spectrum = hermitian_spectrum(QMatrix._wrap(gram))
    return max(0.0, float(spectrum[0])), max(0.0, float(spectrum[-1]))


def _require_same_shape(F: FrameFamily, G: FrameFamily) -> None:
    if F.dim != G.dim or F.rank != G.rank or F.node_count != G.node_count:
        raise ShapeMismatch("families differ in dim, rank or node count")
    if not np.array_equal(F.weights, G.weights) or not np.array_equal(
            F.measure.labels, G.measure.labels):
        raise ShapeMismatch("families carry different measures")
