"""Exact stabilizer-state engine with destabilizer bookkeeping.

Rows 0..n-1 are destabilizers, rows n..2n-1 stabilizers.  A row with bit
vectors (x, z) and phase r represents the operator i^r * prod_q X_q^{x_q}
Z_q^{z_q} (X written left of Z on each qubit); valid Hermitian rows have
r - |{q: x_q = z_q = 1}| congruent to 0 or 2 mod 4.  With this convention
the product of rows A and B only picks up the extra phase
2 * sum(z_A & x_B) mod 4, which keeps every update a handful of vectorized
boolean operations.
"""

from __future__ import annotations

import numpy as np

from .lattice import PauliOperator

__all__ = [
    "Tableau",
    "prepare_product",
    "measure_pauli",
    "apply_pauli",
    "contains",
    "from_stabilizers",
    "restrict",
    "embed",
    "canonical_stabilizers",
]

_BASIS_STATES = ("0", "1", "+", "-")


class Tableau:
    def __init__(self, n: int, X: np.ndarray, Z: np.ndarray, r: np.ndarray):
        self.n = n
        self.X = X  # (2n, n) bool
        self.Z = Z  # (2n, n) bool
        self.r = r  # (2n,) uint8, phase exponent mod 4

    def copy(self) -> "Tableau":
        return Tableau(self.n, self.X.copy(), self.Z.copy(), self.r.copy())

    # --- conversions -----------------------------------------------------
    def _encode(self, P: PauliOperator):
        x = np.zeros(self.n, dtype=bool)
        z = np.zeros(self.n, dtype=bool)
        for q in P.xs:
            x[q] = True
        for q in P.zs:
            z[q] = True
        r = ((0 if P.sign == 1 else 2) + len(P.xs & P.zs)) % 4
        return x, z, r

    def row_pauli(self, k: int) -> PauliOperator:
        xs = frozenset(np.flatnonzero(self.X[k]).tolist())
        zs = frozenset(np.flatnonzero(self.Z[k]).tolist())
        r = (int(self.r[k]) - len(xs & zs)) % 4
        if r not in (0, 2):
            raise ValueError("row is not a Hermitian Pauli")
        return PauliOperator(1 if r == 0 else -1, xs, zs)

    def stabilizers(self):
        return [self.row_pauli(k) for k in range(self.n, 2 * self.n)]

    # --- internals --------------------------------------------------------
    def _anticommute_mask(self, x, z) -> np.ndarray:
        return ((self.X & z).sum(axis=1) + (self.Z & x).sum(axis=1)) % 2 == 1

    def _mult_rows_by(self, rows: np.ndarray, x, z, r):
        """row_k := row_k * (x, z, r) for each k in rows."""
        self.r[rows] = (self.r[rows] + r + 2 * (self.Z[rows] & x).sum(axis=1)) % 4
        self.X[rows] ^= x
        self.Z[rows] ^= z

    def _group_decompose(self, x, z):
        """Product of stabilizer rows selected by destabilizer anticommutation.

        Any group element g factors over the stabilizer generators with
        exponents <destab_k, g>; returns that product as (x, z, r).
        """
        sel = np.flatnonzero(
            ((self.X[: self.n] & z).sum(axis=1) + (self.Z[: self.n] & x).sum(axis=1)) % 2
        )
        ax = np.zeros(self.n, dtype=bool)
        az = np.zeros(self.n, dtype=bool)
        ar = 0
        for k in sel:
            s = self.n + k
            ar = (ar + int(self.r[s]) + 2 * int((az & self.X[s]).sum())) % 4
            ax ^= self.X[s]
            az ^= self.Z[s]
        return ax, az, ar

    # --- operations -------------------------------------------------------
    def measure(self, P: PauliOperator, rng) -> tuple:
        """Projective measurement of P; returns (outcome, deterministic)."""
        x, z, r = self._encode(P)
        anti = self._anticommute_mask(x, z)
        stab_anti = np.flatnonzero(anti[self.n:])
        if stab_anti.size:
            p = self.n + int(stab_anti[0])
            rows = np.flatnonzero(anti)
            rows = rows[rows != p]
            px, pz, pr = self.X[p].copy(), self.Z[p].copy(), int(self.r[p])
            self._mult_rows_by(rows, px, pz, pr)
            # old stabilizer becomes the destabilizer of the new row
            self.X[p - self.n], self.Z[p - self.n], self.r[p - self.n] = px, pz, pr
            outcome = 1 if rng.random() < 0.5 else -1
            self.X[p], self.Z[p] = x, z
            self.r[p] = (r + (0 if outcome == 1 else 2)) % 4
            return outcome, False
        ax, az, ar = self._group_decompose(x, z)
        if not (np.array_equal(ax, x) and np.array_equal(az, z)):
            raise AssertionError("commuting Pauli outside group: tableau corrupt")
        return (1 if (ar - r) % 4 == 0 else -1), True

    def contains(self, P: PauliOperator):
        """Sign with which P sits in the stabilizer group, or None."""
        x, z, r = self._encode(P)
        if self._anticommute_mask(x, z)[self.n:].any():
            return None
        ax, az, ar = self._group_decompose(x, z)
        if not (np.array_equal(ax, x) and np.array_equal(az, z)):
            return None
        return 1 if (ar - r) % 4 == 0 else -1

    def apply_pauli(self, P: PauliOperator):
        """Conjugate the state by P: flip signs of anticommuting rows."""
        x, z, _ = self._encode(P)
        anti = self._anticommute_mask(x, z)
        self.r[anti] = (self.r[anti] + 2) % 4

    # --- invariants (test hook) -------------------------------------------
    def check_invariants(self):
        n = self.n
        X, Z = self.X.astype(np.uint8), self.Z.astype(np.uint8)
        sp = (X @ Z.T + Z @ X.T) % 2  # symplectic products of all rows
        expect = np.zeros((2 * n, 2 * n), dtype=np.uint8)
        expect[:n, n:] = np.eye(n, dtype=np.uint8)
        expect[n:, :n] = np.eye(n, dtype=np.uint8)
        if not np.array_equal(sp, expect):
            raise AssertionError("tableau commutation structure broken")
        if _gf2_rank(np.concatenate([X, Z], axis=1)) != 2 * n:
            raise AssertionError("tableau rows not independent")
        for k in range(2 * n):
            if (int(self.r[k]) - int((self.X[k] & self.Z[k]).sum())) % 2:
                raise AssertionError("row phase not Hermitian")


def _gf2_rank(mat: np.ndarray) -> int:
    m = mat.astype(np.uint8).copy()
    rank = 0
    for col in range(m.shape[1]):
        pivots = np.flatnonzero(m[rank:, col]) + rank
        if pivots.size == 0:
            continue
        piv = pivots[0]
        m[[rank, piv]] = m[[piv, rank]]
        others = np.flatnonzero(m[:, col])
        others = others[others != rank]
        m[others] ^= m[rank]
        rank += 1
        if rank == m.shape[0]:
            break
    return rank


def prepare_product(n: int, assignment) -> Tableau:
    """Product state from a per-qubit basis assignment over '0','1','+','-'."""
    if isinstance(assignment, str):
        assignment = list(assignment)
    if len(assignment) != n:
        raise ValueError("assignment length must equal qubit count")
    X = np.zeros((2 * n, n), dtype=bool)
    Z = np.zeros((2 * n, n), dtype=bool)
    r = np.zeros(2 * n, dtype=np.uint8)
    for q, b in enumerate(assignment):
        if b not in _BASIS_STATES:
            raise ValueError(f"unknown basis state {b!r}")
        if b in ("0", "1"):
            Z[n + q, q] = True  # stabilizer +-Z
            X[q, q] = True      # destabilizer X
        else:
            X[n + q, q] = True  # stabilizer +-X
            Z[q, q] = True      # destabilizer Z
        if b in ("1", "-"):
            r[n + q] = 2
    return Tableau(n, X, Z, r)


def from_stabilizers(n: int, gens) -> Tableau:
    """Tableau from n independent commuting signed generators.

    Symplectic Gram-Schmidt: destabilizers come from a pool of single-qubit
    Paulis; at each step the pool and the not-yet-processed generators are
    swept to commute with the fixed (stabilizer, destabilizer) pair.  Later
    generators may get replaced by products with earlier ones, which leaves
    the stabilizer group (and all signs) unchanged.
    """
    gens = list(gens)
    if len(gens) != n:
        raise ValueError("need exactly n generators")
    tab = Tableau(
        n,
        np.zeros((2 * n, n), dtype=bool),
        np.zeros((2 * n, n), dtype=bool),
        np.zeros(2 * n, dtype=np.uint8),
    )
    for k, g in enumerate(gens):
        x, z, r = tab._encode(g)
        tab.X[n + k], tab.Z[n + k], tab.r[n + k] = x, z, r

    def sym(x1, z1, x2, z2):
        return (int((x1 & z2).sum()) + int((z1 & x2).sum())) % 2

    pool = []
    for q in range(n):
        for part in range(2):
            px = np.zeros(n, dtype=bool)
            pz = np.zeros(n, dtype=bool)
            (px if part == 0 else pz)[q] = True
            pool.append((px, pz))

    for k in range(n):
        sx, sz, sr = tab.X[n + k].copy(), tab.Z[n + k].copy(), int(tab.r[n + k])
        hit = next(
            (i for i, (px, pz) in enumerate(pool) if sym(px, pz, sx, sz) == 1), None
        )
        if hit is None:
            raise ValueError("generators are dependent or include identity")
        dx, dz = pool.pop(hit)
        tab.X[k], tab.Z[k] = dx, dz
        tab.r[k] = int((dx & dz).sum()) % 4
        # sweep the pool to commute with the new pair
        for i, (px, pz) in enumerate(pool):
            if sym(px, pz, dx, dz) == 1:
                px, pz = px ^ sx, pz ^ sz
            if sym(px, pz, sx, sz) == 1:
                px, pz = px ^ dx, pz ^ dz
            pool[i] = (px, pz)
        # sweep later generators to commute with the destabilizer
        for j in range(k + 1, n):
            if sym(tab.X[n + j], tab.Z[n + j], dx, dz) == 1:
                tab.r[n + j] = (
                    tab.r[n + j] + sr + 2 * int((tab.Z[n + j] & sx).sum())
                ) % 4
                tab.X[n + j] ^= sx
                tab.Z[n + j] ^= sz
    return tab


def restrict(tab: Tableau, keep) -> Tableau:
    """Project out qubits not in `keep` (they must be in product states).

    Gaussian elimination over the dropped columns isolates the generators
    acting on dropped qubits; the remaining generators restrict to a full
    stabilizer group on the kept qubits.
    """
    keep = list(keep)
    drop = [q for q in range(tab.n) if q not in set(keep)]
    rows = [
        (tab.X[k].copy(), tab.Z[k].copy(), int(tab.r[k]))
        for k in range(tab.n, 2 * tab.n)
    ]

    def mult(a, b):
        ax, az, ar = a
        bx, bz, br = b
        return ax ^ bx, az ^ bz, (ar + br + 2 * int((az & bx).sum())) % 4

    pivot_rows = set()
    for q in drop:
        for part in range(2):
            piv = None
            for k, (x, z, _) in enumerate(rows):
                bit = x[q] if part == 0 else z[q]
                if bit and k not in pivot_rows:
                    piv = k
                    break
            if piv is None:
                continue
            for k in range(len(rows)):
                bit = rows[k][0][q] if part == 0 else rows[k][1][q]
                if k != piv and bit:
                    rows[k] = mult(rows[k], rows[piv])
            pivot_rows.add(piv)

    kept_idx = {q: i for i, q in enumerate(keep)}
    gens = []
    for k, (x, z, r) in enumerate(rows):
        if k in pivot_rows:
            continue
        if x[drop].any() or z[drop].any():
            raise ValueError("dropped qubits are entangled with kept qubits")
        xs = frozenset(kept_idx[q] for q in np.flatnonzero(x).tolist())
        zs = frozenset(kept_idx[q] for q in np.flatnonzero(z).tolist())
        sign = 1 if (r - len(xs & zs)) % 4 == 0 else -1
        gens.append(PauliOperator(sign, xs, zs))
    return from_stabilizers(len(keep), gens)


def embed(tab: Tableau, n_new: int, index_map: dict, new_assignment: dict) -> Tableau:
    """Relabel qubits into a larger register and prepare the fresh qubits.

    index_map: old index -> new index; new_assignment: new index -> basis.
    """
    old_stabs = tab.stabilizers()
    gens = []
    for P in old_stabs:
        gens.append(
            PauliOperator(
                P.sign,
                frozenset(index_map[q] for q in P.xs),
                frozenset(index_map[q] for q in P.zs),
            )
        )
    for q, b in sorted(new_assignment.items()):
        sign = 1 if b in ("0", "+") else -1
        if b in ("0", "1"):
            gens.append(PauliOperator(sign, frozenset(), frozenset([q])))
        else:
            gens.append(PauliOperator(sign, frozenset([q]), frozenset()))
    if len(gens) != n_new:
        raise ValueError("embedding does not cover the new register")
    return from_stabilizers(n_new, gens)


def canonical_stabilizers(tab: Tableau) -> tuple:
    """Unique signed generating set (GF2 reduced row echelon form over the
    symplectic matrix, phases carried along); equal tuples iff equal groups."""
    n = tab.n
    rows = [
        (tab.X[k].copy(), tab.Z[k].copy(), int(tab.r[k]))
        for k in range(n, 2 * n)
    ]

    def mult(a, b):
        ax, az, ar = a
        bx, bz, br = b
        return ax ^ bx, az ^ bz, (ar + br + 2 * int((az & bx).sum())) % 4

    rank = 0
    for col in range(2 * n):
        getbit = (lambda r: r[0][col]) if col < n else (lambda r: r[1][col - n])
        piv = next((k for k in range(rank, n) if getbit(rows[k])), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for k in range(n):
            if k != rank and getbit(rows[k]):
                rows[k] = mult(rows[k], rows[rank])
        rank += 1
        if rank == n:
            break
    out = []
    for x, z, r in rows:
        sign = 1 if (r - int((x & z).sum())) % 4 == 0 else -1
        out.append((sign, tuple(np.flatnonzero(x).tolist()), tuple(np.flatnonzero(z).tolist())))
    return tuple(out)


# module-level wrappers (spec surface)
def measure_pauli(tab: Tableau, P: PauliOperator, rng):
    return tab.measure(P, rng)


def apply_pauli(tab: Tableau, P: PauliOperator):
    tab.apply_pauli(P)
    return tab


def contains(tab: Tableau, P: PauliOperator):
    return tab.contains(P)
