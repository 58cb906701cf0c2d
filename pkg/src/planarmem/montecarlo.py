"""Monte Carlo storage experiment in the bit-flip sector.

Only bit flips are simulated; by the rough/smooth duality of the code the
phase sector behaves as the transpose-lattice run, so checking the logical
bit for input 0 suffices (the average fidelity then follows from the
two-basis composition bound).

mode='encode' trial:
  round 0   green qubits flip w.p. 1/2 (|+> preparation has random bit
            values), red qubits flip w.p. p, black holds logical bit 0;
            plaquette syndrome measured (readout flips w.p. p when
            syndrome noise is on);
  rounds 1..k   every qubit flips w.p. p, then noisy syndrome readout;
  matching  one space-time matching over defects = XOR of consecutive
            observed syndromes (virtual round -1 all +1); west/east
            boundaries plus an open time boundary at round k (a defect at
            round t may exit at cost k - t).  Round-0 defects are
            restricted to east exits: they stem from the green triangle
            and never need to cross west, east routing keeps the p=0 case
            exactly correct, and their corrections never touch the black
            qubit; they may still pair with later defects, so a round-0
            readout flip cancels against its round-1 echo;
  readout   red qubits flip w.p. p, then the line or multiline parity
            decides the black-qubit flip; success iff the decoded black
            bit is 0.

mode='no-encode' trial: the frame starts all-zero (state already encoded),
k noisy rounds, then perfect decoding: one noiseless syndrome round is
appended, matching is unconstrained with a closed time boundary, and
success is the parity of the residual error on the logical-Z support
(noiseless readout; line and multiline decoders coincide here).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from math import sqrt

import numpy as np

from .decoder import DefectSet, line_readout, match_defects, multiline_readout
from .lattice import build_lattice, default_split, logical_z

__all__ = ["ExperimentConfig", "PauliFrame", "RunResult", "run_trial", "estimate_success"]


@dataclass(frozen=True)
class ExperimentConfig:
    N: int
    M: int
    p: float
    k: int
    n: int
    decoder: str = "line"
    mode: str = "encode"
    syndrome_noise: bool = True
    seed: int = 0

    def __post_init__(self):
        if not (0.0 <= self.p <= 1.0):
            raise ValueError("p must lie in [0, 1]")
        if self.k < 0 or self.n < 1 or self.N < 1 or self.M < 1:
            raise ValueError("k >= 0, n >= 1, N,M >= 1 required")
        if self.decoder not in ("line", "multiline"):
            raise ValueError("decoder must be 'line' or 'multiline'")
        if self.mode not in ("encode", "no-encode"):
            raise ValueError("mode must be 'encode' or 'no-encode'")


@dataclass
class PauliFrame:
    """Classical record of pending bit flips, one per qubit."""

    bits: np.ndarray

    def __post_init__(self):
        self.bits = np.asarray(self.bits, dtype=np.uint8)


@dataclass(frozen=True)
class RunResult:
    successes: int
    trials: int
    p_hat: float
    stderr: float

    @classmethod
    def from_counts(cls, successes, trials):
        ph = successes / trials
        return cls(successes, trials, ph, sqrt(ph * (1.0 - ph) / trials))


@lru_cache(maxsize=16)
def _context(N, M):
    geom = build_lattice(N, M)
    split = default_split(geom)
    n_plaq = N * (M - 1)
    H = np.zeros((n_plaq, geom.n_qubits), dtype=np.uint8)
    for pid, (i, j) in enumerate(geom.plaquettes):
        for q in geom.plaquette_support(i, j):
            H[pid, q] = 1
    green = np.zeros(geom.n_qubits, dtype=bool)
    red = np.zeros(geom.n_qubits, dtype=bool)
    green[sorted(split.green)] = True
    red[sorted(split.red)] = True
    zline = np.zeros(geom.n_qubits, dtype=np.uint8)
    zline[sorted(logical_z(geom).zs)] = 1
    return geom, split, H, green, red, zline


def _correction_bits(nq, *corrections):
    bits = np.zeros(nq, dtype=np.uint8)
    for c in corrections:
        for q in c.flips:
            bits[q] ^= 1
    return bits


def run_trial(config: ExperimentConfig, geom, split, rng) -> bool:
    N, M, p, k = config.N, config.M, config.p, config.k
    _, _, H, green, red, zline = _context(N, M)
    nq = geom.n_qubits
    n_plaq = N * (M - 1)

    if config.mode == "encode":
        E = np.zeros((k + 1, nq), dtype=np.uint8)
        E[0] = green & (rng.random(nq) < 0.5)
        E[0] |= red & (rng.random(nq) < p)
        if k:
            E[1:] = rng.random((k, nq)) < p
        cum = np.bitwise_xor.accumulate(E, axis=0)
        sig = (cum @ H.T) & 1
        if config.syndrome_noise and p > 0:
            sig ^= (rng.random((k + 1, n_plaq)) < p).astype(np.uint8)

        diffs = sig.copy()
        diffs[1:] ^= sig[:-1]
        ts, pids = np.nonzero(diffs)
        pts = [
            (int(t), int(pid) // (M - 1) + 1, int(pid) % (M - 1) + 1)
            for t, pid in zip(ts, pids)
        ]
        # noisy syndrome leaves the time boundary open (last-round defects
        # may be readout artefacts); a noiseless syndrome history is final,
        # so every defect must then be resolved in space.
        corr = match_defects(
            DefectSet(tuple(pts)),
            geom,
            boundaries=("west", "east"),
            time_boundary=k if config.syndrome_noise else None,
            round0_east_only=True,
        )
        final = cum[k] ^ _correction_bits(nq, corr)
        black_bit = int(final[geom.black])
        noisy = final.copy()
        if p > 0:
            noisy ^= red & (rng.random(nq) < p)
        readout = line_readout if config.decoder == "line" else multiline_readout
        decision = readout(noisy, geom, split)
        return (black_bit ^ int(decision)) == 0

    # no-encode: k noisy rounds, then one perfect round and perfect decoding
    E = (rng.random((k, nq)) < p).astype(np.uint8) if k else np.zeros((0, nq), np.uint8)
    cum = np.bitwise_xor.accumulate(E, axis=0) if k else E
    final_err = cum[-1] if k else np.zeros(nq, dtype=np.uint8)
    sig = (cum @ H.T) & 1
    if config.syndrome_noise and p > 0 and k:
        sig ^= (rng.random((k, n_plaq)) < p).astype(np.uint8)
    sig = np.vstack([sig, (final_err @ H.T) & 1])
    prev = np.zeros(n_plaq, dtype=np.uint8)
    pts = []
    for t in range(sig.shape[0]):
        for pid in np.flatnonzero(sig[t] ^ prev):
            pts.append((t + 1, int(pid) // (M - 1) + 1, int(pid) % (M - 1) + 1))
        prev = sig[t]
    c = match_defects(DefectSet(tuple(pts)), geom, boundaries=("west", "east"))
    residual = final_err ^ _correction_bits(nq, c)
    return int((residual & zline).sum()) % 2 == 0


def _trial_rng(seed, index):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def _run_block(args):
    config, lo, hi = args
    geom, split = _context(config.N, config.M)[:2]
    return sum(
        run_trial(config, geom, split, _trial_rng(config.seed, i)) for i in range(lo, hi)
    )


def estimate_success(config: ExperimentConfig, workers: int | None = None) -> RunResult:
    """Run config.n independent trials; bitwise reproducible for a fixed
    seed regardless of worker count (each trial owns an RNG substream)."""
    if workers is None:
        workers = int(os.environ.get("PLANARMEM_WORKERS", "1") or "1")
    n = config.n
    if workers <= 1:
        successes = _run_block((config, 0, n))
    else:
        import multiprocessing as mp

        step = max(1, -(-n // (workers * 4)))
        blocks = [(config, lo, min(lo + step, n)) for lo in range(0, n, step)]
        with mp.Pool(workers) as pool:
            successes = sum(pool.map(_run_block, blocks))
    return RunResult.from_counts(successes, n)
