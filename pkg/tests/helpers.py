"""Shared builders for the test suite."""

import numpy as np

from rqframes import FrameFamily, QuadratureMeasure, Quaternion, QVector


def qv(*entries):
    """QVector from 4-sequences or Quaternions."""
    rows = [e.to_list() if isinstance(e, Quaternion) else list(e) for e in entries]
    return QVector(np.asarray(rows, float))


def e(d, a):
    arr = np.zeros((d, 4))
    arr[a, 0] = 1.0
    return QVector(arr)


def family(dim, rank, weights, vectors, labels=None):
    """FrameFamily from nested [node][i] vector lists and plain weights."""
    if labels is None:
        labels = [Quaternion()] * len(weights)
    measure = QuadratureMeasure(tuple((lab, w) for lab, w in zip(labels, weights)))
    data = np.array(
        [[v.array if isinstance(v, QVector) else np.asarray(v, float) for v in node]
         for node in vectors],
        dtype=float,
    )
    return FrameFamily(dim, rank, measure, data)


def random_family(rng, dim=4, rank=2, nodes=8):
    measure = QuadratureMeasure(tuple(
        (Quaternion(*rng.standard_normal(4)), float(rng.uniform(0.5, 1.5)))
        for _ in range(nodes)))
    data = rng.standard_normal((nodes, rank, dim, 4))
    return FrameFamily(dim, rank, measure, data)


def random_qvector(rng, d):
    return QVector(rng.standard_normal((d, 4)))
