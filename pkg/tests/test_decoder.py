"""Space-time decoder: defect extraction, matching, readout."""

import itertools

import numpy as np
import pytest

import reference_sim as rs
from planarmem.decoder import (
    DefectSet,
    SyndromeHistory,
    extract_defects,
    line_readout,
    match_defects,
    multiline_readout,
)
from planarmem.lattice import build_lattice, default_split

INF = 10**9


def exhaustive_weight(points, geom, k, protect_black=False,
                      time_boundary=None, round0_east_only=False):
    """Minimum total true cost over all pairings/boundary exits (<= 8 defects)."""
    M, N = geom.M, geom.N

    def boundary_cost(t, i, j):
        opts = [M - j]
        if not (round0_east_only and t == 0):
            west = j
            if protect_black and i == N:
                west = j + 1 if N > 1 else INF
            opts.append(west)
            if time_boundary is not None:
                opts.append(time_boundary - t)
        return min(opts)

    def solve(rest):
        if not rest:
            return 0
        (t, i, j), *others = rest
        best = boundary_cost(t, i, j) + solve(others)
        for idx, (t2, i2, j2) in enumerate(others):
            d = abs(t - t2) + abs(i - i2) + abs(j - j2)
            best = min(best, d + solve(others[:idx] + others[idx + 1:]))
        return best

    return solve(list(points))


def random_defects(rng, geom, k, n_def, round0=True):
    avail = (k + 1 if round0 else k) * geom.N * (geom.M - 1)
    n_def = min(n_def, avail)
    pts = set()
    while len(pts) < n_def:
        t = int(rng.integers(0 if round0 else 1, k + 1))
        i = int(rng.integers(1, geom.N + 1))
        j = int(rng.integers(1, geom.M))
        pts.add((t, i, j))
    return DefectSet(tuple(sorted(pts)))


def test_extract_defects_hand_case():
    geom = build_lattice(2, 3)  # plaquettes p(i,j), i in 1..2, j in 1..2
    rounds = np.zeros((3, 4), dtype=np.uint8)
    rounds[0, 0] = 1          # defect appears at t=0 in p(1,1)
    rounds[1, 0] = 1          # persists: no new defect at t=1
    rounds[2, 3] = 1          # p(1,1) heals and p(2,2) fires at t=2
    hist = SyndromeHistory(geom, rounds)
    pts = extract_defects(hist).points
    assert set(pts) == {(0, 1, 1), (2, 1, 1), (2, 2, 2)}


def test_empty_defects_empty_correction():
    geom = build_lattice(3, 3)
    corr = match_defects(DefectSet(()), geom)
    assert corr.flips == frozenset() and corr.total_weight == 0
    assert not corr.black_flip


def test_single_defect_goes_west():
    geom = build_lattice(3, 3)
    corr = match_defects(DefectSet(((1, 1, 1),)), geom, time_boundary=None)
    assert corr.flips == frozenset([geom.vq(1, 1)])
    assert corr.total_weight == 1
    assert corr.boundary == (((1, 1, 1), "west"),)


def test_single_defect_goes_east():
    geom = build_lattice(3, 4)
    corr = match_defects(DefectSet(((0, 2, 3),)), geom)
    assert corr.flips == frozenset([geom.vq(2, 4)])
    assert corr.total_weight == 1


def test_adjacent_pair_single_qubit():
    geom = build_lattice(3, 3)
    corr = match_defects(DefectSet(((0, 1, 1), (0, 1, 2))), geom)
    assert corr.flips == frozenset([geom.vq(1, 2)])
    assert corr.total_weight == 1
    assert corr.pairs == (((0, 1, 1), (0, 1, 2)),)


def test_vertical_pair_uses_horizontal_qubit():
    geom = build_lattice(3, 3)
    corr = match_defects(DefectSet(((0, 1, 1), (0, 2, 1))), geom)
    assert corr.flips == frozenset([geom.hq(1, 1)])
    assert corr.total_weight == 1


def test_time_boundary_absorbs_late_defect():
    geom = build_lattice(3, 5)
    # at t=k the time exit costs 0 and beats any spatial route
    corr = match_defects(
        DefectSet(((4, 2, 3),)), geom, time_boundary=4
    )
    assert corr.flips == frozenset()
    assert corr.total_weight == 0
    assert corr.boundary == (((4, 2, 3), "time"),)


def test_round0_east_only_restriction():
    geom = build_lattice(3, 5)
    # j=1 would exit west at cost 1; at t=0 it must go east (cost 4)
    corr = match_defects(
        DefectSet(((0, 1, 1),)), geom, time_boundary=3, round0_east_only=True
    )
    assert corr.boundary == (((0, 1, 1), "east"),)
    assert corr.total_weight == 4
    # the same defect at t=1 exits west
    corr = match_defects(
        DefectSet(((1, 1, 1),)), geom, time_boundary=3, round0_east_only=True
    )
    assert corr.boundary == (((1, 1, 1), "west"),)


def test_round0_pairs_with_echo():
    geom = build_lattice(3, 5)
    # a readout flip at t=0 re-fires at t=1: pairing costs 1, beats east
    corr = match_defects(
        DefectSet(((0, 2, 2), (1, 2, 2))), geom,
        time_boundary=5, round0_east_only=True,
    )
    assert corr.pairs == (((0, 2, 2), (1, 2, 2)),)
    assert corr.flips == frozenset()
    assert corr.total_weight == 1


@pytest.mark.parametrize("seed", range(120))
def test_weight_matches_exhaustive_oracle(seed):
    rng = np.random.default_rng(seed)
    N, M = int(rng.integers(1, 6)), int(rng.integers(2, 6))
    k = int(rng.integers(0, 6))
    geom = build_lattice(N, M)
    protect = bool(rng.integers(0, 2)) and N > 1
    timeb = k if rng.integers(0, 2) else None
    r0 = bool(rng.integers(0, 2))
    defects = random_defects(rng, geom, k, int(rng.integers(0, 9)))
    corr = match_defects(
        defects, geom, protect_black=protect,
        time_boundary=timeb, round0_east_only=r0,
    )
    want = exhaustive_weight(
        defects.points, geom, k, protect_black=protect,
        time_boundary=timeb, round0_east_only=r0,
    )
    assert corr.total_weight == want


@pytest.mark.parametrize("seed", range(40))
def test_correction_cancels_syndrome(seed):
    """Applying the matched correction to the final error must clear every
    plaquette that the final observed syndrome marked (noiseless history)."""
    rng = np.random.default_rng(500 + seed)
    N, M = int(rng.integers(2, 5)), int(rng.integers(2, 5))
    geom = build_lattice(N, M)
    err = (rng.random(geom.n_qubits) < 0.15).astype(np.uint8)
    pts = []
    for pid, (i, j) in enumerate(geom.plaquettes):
        if sum(int(err[q]) for q in geom.plaquette_support(i, j)) % 2:
            pts.append((0, i, j))
    corr = match_defects(DefectSet(tuple(pts)), geom)
    res = err.copy()
    for q in corr.flips:
        res[q] ^= 1
    for i, j in geom.plaquettes:
        assert sum(int(res[q]) for q in geom.plaquette_support(i, j)) % 2 == 0


@pytest.mark.parametrize("seed", range(30))
def test_protect_black_never_touches_black(seed):
    rng = np.random.default_rng(900 + seed)
    geom = build_lattice(int(rng.integers(2, 6)), int(rng.integers(2, 6)))
    k = 4
    defects = random_defects(rng, geom, k, int(rng.integers(1, 9)))
    corr = match_defects(defects, geom, protect_black=True, time_boundary=k)
    assert geom.black not in corr.flips
    assert not corr.black_flip


def test_deterministic_output(rng):
    geom = build_lattice(4, 4)
    defects = random_defects(rng, geom, 3, 6)
    a = match_defects(defects, geom, time_boundary=3)
    b = match_defects(defects, geom, time_boundary=3)
    assert a == b


def test_tie_break_prefers_pairing_then_west():
    geom = build_lattice(3, 3)
    # two defects at distance 2; each could exit west at total cost 2:
    # pairing is preferred at equal weight
    corr = match_defects(DefectSet(((0, 1, 1), (0, 3, 1))), geom)
    assert corr.pairs and not corr.boundary
    # centre column of a width-2 interior: west and east both cost 1
    geom2 = build_lattice(2, 2)
    corr2 = match_defects(DefectSet(((0, 1, 1),)), geom2)
    assert corr2.boundary[0][1] == "west"


def test_line_readout_parities():
    geom = build_lattice(3, 3)
    split = default_split(geom)
    bits = np.zeros(geom.n_qubits, dtype=np.uint8)
    assert not line_readout(bits, geom, split)
    bits[geom.vq(1, 1)] = 1
    assert line_readout(bits, geom, split)
    bits[geom.black] = 1  # black is excluded from the readout line
    assert line_readout(bits, geom, split)
    bits[geom.vq(2, 1)] = 1
    assert not line_readout(bits, geom, split)


def test_multiline_equals_line_on_single_column():
    geom = build_lattice(4, 1)
    split = default_split(geom)
    rng = np.random.default_rng(3)
    for _ in range(20):
        bits = (rng.random(geom.n_qubits) < 0.5).astype(np.uint8)
        assert multiline_readout(bits, geom, split) == line_readout(bits, geom, split)


@pytest.mark.parametrize("seed", range(20))
def test_multiline_matches_reference_majority(seed):
    rng = np.random.default_rng(seed)
    N, M = 4, 4
    geom = build_lattice(N, M)
    split = default_split(geom)
    green = rs.green_qubits(N, M)
    bits = (rng.random(geom.n_qubits) < 0.3).astype(np.uint8)
    want = rs._majority_paths(N, M, bits, green, geom.black)
    assert int(multiline_readout(bits, geom, split)) == want
