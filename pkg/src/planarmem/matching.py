"""Maximum-weight general matching, C extension with networkx fallback."""

from __future__ import annotations

import numpy as np

try:
    from . import _blossom

    HAVE_C_SOLVER = True
except ImportError:  # pragma: no cover - build-dependent
    _blossom = None
    HAVE_C_SOLVER = False

__all__ = ["max_weight_matching_arrays", "HAVE_C_SOLVER"]


def max_weight_matching_arrays(n: int, ei, ej, w, force_python: bool = False):
    """Max-weight matching on vertices 0..n-1; returns mate array (-1 = free).

    ei, ej, w are equal-length integer arrays of edges; weights must be
    non-negative integers.
    """
    ei = np.ascontiguousarray(ei, dtype=np.int64)
    ej = np.ascontiguousarray(ej, dtype=np.int64)
    w = np.ascontiguousarray(w, dtype=np.int64)
    if not (len(ei) == len(ej) == len(w)):
        raise ValueError("edge arrays must have equal length")
    if HAVE_C_SOLVER and not force_python:
        raw = _blossom.solve(int(n), ei.tobytes(), ej.tobytes(), w.tobytes())
        return np.frombuffer(raw, dtype=np.int32).copy()
    return _nx_solve(n, ei, ej, w)


def _nx_solve(n, ei, ej, w):
    import networkx as nx

    G = nx.Graph()
    G.add_nodes_from(range(n))
    for a, b, wt in zip(ei.tolist(), ej.tolist(), w.tolist()):
        G.add_edge(a, b, weight=wt)
    mate = np.full(n, -1, dtype=np.int32)
    for a, b in nx.max_weight_matching(G, maxcardinality=False):
        mate[a] = b
        mate[b] = a
    return mate
