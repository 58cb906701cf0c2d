"""Defect extraction, space-time minimum-weight matching with boundary
proxies, and the line / multiline logical readout.

Matching graph (bit-flip sector): nodes are space-time defects (t, i, j) on
the plaquette grid; a pair edge costs the Manhattan distance
|di| + |dj| + |dt|; each defect also holds boundary options
  west  cost j   (j + 1 when the black qubit is protected and i = N,
                  detouring through row N-1; impossible when N = 1),
  east  cost M - j,
  time  cost k - t (only when the time boundary at round k is open).
Boundary-boundary pairings are free, so the minimum-weight perfect matching
reduces exactly to a maximum-gain non-perfect matching on the defects alone
with gain(u, v) = db(u) + db(v) - dist(u, v), keeping only positive-gain
edges.

Degenerate optima are resolved deterministically by scaled integer weights:
every true cost is multiplied by a constant larger than any achievable bias
sum and a small type bias is added (pair 0 < west 1 < east 2 < time 3).  At
equal true weight this prefers pairing over boundary exits, west over east,
and any space boundary over the time boundary.  Reported weights are in true
(unscaled) units.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .lattice import LatticeGeometry, TriangleSplit, logical_z, monotone_paths
from .matching import max_weight_matching_arrays

__all__ = [
    "SyndromeHistory",
    "DefectSet",
    "Correction",
    "extract_defects",
    "match_defects",
    "line_readout",
    "multiline_readout",
    "dump_matching",
]

_PAIR_BIAS, _WEST_BIAS, _EAST_BIAS, _TIME_BIAS = 0, 1, 2, 3
_INF = np.int64(2**60)


@dataclass(frozen=True)
class SyndromeHistory:
    """Per-round plaquette outcomes; bit 1 means outcome -1. Round 0 is the
    encoding round."""

    geom: LatticeGeometry
    rounds: np.ndarray  # (T, N*(M-1)) uint8

    def __post_init__(self):
        n_plaq = self.geom.N * (self.geom.M - 1)
        if self.rounds.ndim != 2 or self.rounds.shape[1] != n_plaq:
            raise ValueError("rounds must be (T, n_plaquettes)")


@dataclass(frozen=True)
class DefectSet:
    """Space-time defect points (round, plaquette-row, plaquette-col)."""

    points: tuple  # of (t, i, j)

    def __len__(self):
        return len(self.points)

    def arrays(self):
        if not self.points:
            z = np.zeros(0, dtype=np.int64)
            return z, z.copy(), z.copy()
        a = np.asarray(self.points, dtype=np.int64)
        return a[:, 0], a[:, 1], a[:, 2]


@dataclass(frozen=True)
class Correction:
    """Bit-flip set inferred by matching."""

    flips: frozenset  # qubit indices
    black_flip: bool
    pairs: tuple = ()
    boundary: tuple = ()  # (defect, 'west'|'east'|'time')
    total_weight: int = 0


def extract_defects(history: SyndromeHistory) -> DefectSet:
    """XOR of consecutive rounds (virtual round -1 is all +1)."""
    geom = history.geom
    rounds = history.rounds
    prev = np.zeros(rounds.shape[1], dtype=rounds.dtype)
    pts = []
    for t in range(rounds.shape[0]):
        diff = rounds[t] ^ prev
        for pid in np.flatnonzero(diff):
            i, j = divmod(int(pid), geom.M - 1)
            pts.append((t, i + 1, j + 1))
        prev = rounds[t]
    return DefectSet(tuple(pts))


def _boundary_tables(
    geom, t, i, j, protect_black, boundaries, time_boundary, scale, round0_east_only
):
    """Per-defect perturbed boundary cost and option label."""
    nd = len(t)
    db = np.full(nd, _INF, dtype=np.int64)
    opt = np.zeros(nd, dtype=np.int64)  # 0 west, 1 east, 2 time
    r0 = t == 0 if round0_east_only else np.zeros(nd, dtype=bool)
    if "west" in boundaries:
        cost = scale * j + _WEST_BIAS
        if protect_black:
            if geom.N == 1:
                cost = np.full(nd, _INF, dtype=np.int64)
            else:
                cost = np.where(i == geom.N, scale * (j + 1) + _WEST_BIAS, cost)
        cost = np.where(r0, _INF, cost)
        np.copyto(db, cost, where=cost < db)
    if "east" in boundaries:
        cost = scale * (geom.M - j) + _EAST_BIAS
        better = cost < db
        opt[better] = 1
        db[better] = cost[better]
    if time_boundary is not None:
        cost = np.where(r0, _INF, scale * (time_boundary - t) + _TIME_BIAS)
        better = cost < db
        opt[better] = 2
        db[better] = cost[better]
    return db, opt


def match_defects(
    defects: DefectSet,
    geom: LatticeGeometry,
    protect_black: bool = False,
    boundaries=("west", "east"),
    time_boundary=None,
    round0_east_only: bool = False,
) -> Correction:
    """Exact minimum-weight matching of defects to each other / boundaries.

    round0_east_only restricts round-0 defects (the encoding round) to
    east-boundary exits: their corrections then never touch the west
    column or the black qubit, while they may still pair with later
    defects (e.g. a round-0 readout flip pairs with its round-1 echo)."""
    nd = len(defects)
    if nd == 0:
        return Correction(frozenset(), False)
    t, i, j = defects.arrays()
    scale = np.int64(4 * (3 * nd + 4))
    db, opt = _boundary_tables(
        geom, t, i, j, protect_black, boundaries, time_boundary, scale,
        round0_east_only,
    )
    if np.any(db >= _INF):
        raise ValueError("a defect has no reachable boundary")

    i32, j32, t32 = i.astype(np.int32), j.astype(np.int32), t.astype(np.int32)
    dist = (
        np.abs(i32[:, None] - i32[None, :])
        + np.abs(j32[:, None] - j32[None, :])
        + np.abs(t32[:, None] - t32[None, :])
    ).astype(np.int64) * scale
    gain_m = (db[:, None] + db[None, :]) - dist
    iu, ju = np.nonzero(gain_m > 0)
    sel = iu < ju
    iu, ju = iu[sel], ju[sel]
    mate = _solve_by_components(nd, iu, ju, gain_m[iu, ju])

    flips = set()
    pairs, bnd = [], []
    total = np.int64(0)
    labels = ("west", "east", "time")
    for u in range(nd):
        v = int(mate[u])
        if v >= 0:
            if v > u:
                pairs.append((defects.points[u], defects.points[v]))
                flips ^= _pair_path(geom, i[u], j[u], i[v], j[v])
                total += dist[u, v]
        else:
            lab = labels[int(opt[u])]
            bnd.append((defects.points[u], lab))
            flips ^= _boundary_path(geom, int(i[u]), int(j[u]), lab, protect_black)
            total += db[u]
    total = int(total) // int(scale)  # strip bias, report true weight
    black = geom.black in flips
    if protect_black and black:
        raise AssertionError("protected black qubit appeared in a correction")
    return Correction(frozenset(flips), black, tuple(pairs), tuple(bnd), total)


def _solve_by_components(nd, iu, ju, gains):
    """Max-weight matching, solved independently per connected component of
    the positive-gain graph (exact: no optimal matching crosses components)."""
    mate = np.full(nd, -1, dtype=np.int32)
    if len(iu) == 0:
        return mate
    parent = list(range(nd))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    ius, jus = iu.tolist(), ju.tolist()
    for u, v in zip(ius, jus):
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    comp_edges = {}
    for e, u in enumerate(ius):
        comp_edges.setdefault(find(u), []).append(e)
    for edges in comp_edges.values():
        nodes = sorted({ius[e] for e in edges} | {jus[e] for e in edges})
        local = {u: a for a, u in enumerate(nodes)}
        ei = np.asarray([local[ius[e]] for e in edges], dtype=np.int64)
        ej = np.asarray([local[jus[e]] for e in edges], dtype=np.int64)
        sub = max_weight_matching_arrays(len(nodes), ei, ej, gains[edges])
        for a, u in enumerate(nodes):
            if sub[a] >= 0:
                mate[u] = nodes[int(sub[a])]
    return mate


def _pair_path(geom, i1, j1, i2, j2):
    """Column-first Manhattan path between plaquettes (i1,j1) and (i2,j2)."""
    qs = set()
    for r in range(min(i1, i2), max(i1, i2)):
        qs.add(geom.hq(int(r), int(j1)))
    for c in range(min(j1, j2) + 1, max(j1, j2) + 1):
        qs.add(geom.vq(int(i2), int(c)))
    return qs


def _boundary_path(geom, i, j, label, protect_black):
    if label == "time":
        return set()
    if label == "east":
        return {geom.vq(i, c) for c in range(j + 1, geom.M + 1)}
    # west
    if protect_black and i == geom.N:
        qs = {geom.hq(geom.N - 1, j)}
        qs |= {geom.vq(geom.N - 1, c) for c in range(1, j + 1)}
        return qs
    return {geom.vq(i, c) for c in range(1, j + 1)}


def line_readout(final_bits, geom: LatticeGeometry, split: TriangleSplit) -> bool:
    """Flip the black qubit iff the readout line (the logical-Z support
    minus the black qubit) has odd parity."""
    line = sorted(logical_z(geom).zs - {geom.black})
    return bool(sum(int(final_bits[q]) for q in line) % 2)


@lru_cache(maxsize=32)
def _path_matrix(N, M):
    from .lattice import build_lattice, default_split

    geom = build_lattice(N, M)
    split = default_split(geom)
    paths = monotone_paths(geom, split)
    mat = np.zeros((len(paths), geom.n_qubits), dtype=np.uint8)
    for k, p in enumerate(paths):
        for q in p:
            mat[k, q] = 1
    mat[:, geom.black] = 0  # parity taken excluding the black qubit
    return mat


def multiline_readout(final_bits, geom: LatticeGeometry, split: TriangleSplit) -> bool:
    """Majority vote over all staircase readout paths; exact ties -> no flip."""
    mat = _path_matrix(geom.N, geom.M)
    bits = np.asarray(
        [int(final_bits[q]) for q in range(geom.n_qubits)], dtype=np.uint8
    )
    parities = (mat @ bits) % 2
    return bool(2 * int(parities.sum()) > mat.shape[0])


def dump_matching(defects: DefectSet, corr: Correction, fh) -> None:
    """Debug dump of one matching instance as a JSON line."""
    rec = {
        "defects": [list(p) for p in defects.points],
        "pairs": [[list(a), list(b)] for a, b in corr.pairs],
        "boundary": [[list(d), lab] for d, lab in corr.boundary],
        "weight": corr.total_weight,
        "flips": sorted(corr.flips),
    }
    fh.write(json.dumps(rec) + "\n")
