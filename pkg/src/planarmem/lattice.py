"""Planar-code geometry: qubit layout, stabilizer supports, logical operators,
homology classification, and the readout path sets used by decoding.

Coordinate convention (fixed, all modules inherit it):
  vertical qubits   v(i,j)  1 <= i <= N, 1 <= j <= M
  horizontal qubits h(i,j)  1 <= i <= N-1, 1 <= j <= M-1
  plaquettes        p(i,j)  1 <= i <= N, 1 <= j <= M-1
  stars             s(i,j)  1 <= i <= N-1, 1 <= j <= M
The logical Z is the west column (j=1) of vertical qubits, the logical X the
south row (i=N); the black qubit v(N,1) is their unique intersection.

The triangle split separates the non-black qubits along the anti-diagonal:
the green region is the lower-right part (it contains the full south row
except the black qubit and the full east column), the red region the
upper-left part (it contains the west column above the black qubit and most
of the north row).  This orientation is forced by the requirements that
(a) the west column carries the definite-bit preparation that seeds the
logical Z value, (b) green is connected to the east boundary so green-sector
defects can always be annihilated without crossing the split, and (c) the
readout paths (north-to-black staircases) fit inside red + black.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

__all__ = [
    "LatticeGeometry",
    "PauliOperator",
    "TriangleSplit",
    "build_lattice",
    "plaquette_support",
    "star_support",
    "logical_z",
    "logical_x",
    "homology_parity",
    "default_split",
    "monotone_paths",
]


@dataclass(frozen=True)
class PauliOperator:
    """Sparse signed multi-qubit Pauli. Qubits in xs and zs carry Y."""

    sign: int = 1
    xs: frozenset = frozenset()
    zs: frozenset = frozenset()

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        object.__setattr__(self, "xs", frozenset(self.xs))
        object.__setattr__(self, "zs", frozenset(self.zs))

    def commutes_with(self, other: "PauliOperator") -> bool:
        return (len(self.xs & other.zs) + len(self.zs & other.xs)) % 2 == 0

    @property
    def support(self) -> frozenset:
        return self.xs | self.zs

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        # i-exponent bookkeeping: P = sign * i^{|Y|} X^x Z^z, and
        # Z^a X^b reordering contributes (-1)^{a&b}.
        r1 = (0 if self.sign == 1 else 2) + len(self.xs & self.zs)
        r2 = (0 if other.sign == 1 else 2) + len(other.xs & other.zs)
        xs = self.xs ^ other.xs
        zs = self.zs ^ other.zs
        r = (r1 + r2 + 2 * len(self.zs & other.xs)) % 4
        r = (r - len(xs & zs)) % 4
        if r not in (0, 2):
            raise ValueError("product is not a Hermitian Pauli")
        return PauliOperator(1 if r == 0 else -1, xs, zs)


@dataclass(frozen=True)
class LatticeGeometry:
    """N x M planar-code layout; immutable and shareable across workers."""

    N: int
    M: int

    def __post_init__(self):
        if self.N < 1 or self.M < 1:
            raise ValueError("lattice dimensions must be positive")

    # --- qubit indexing -------------------------------------------------
    @property
    def n_vertical(self) -> int:
        return self.N * self.M

    @property
    def n_qubits(self) -> int:
        return self.N * self.M + (self.N - 1) * (self.M - 1)

    def vq(self, i: int, j: int) -> int:
        """Index of vertical qubit v(i,j)."""
        if not (1 <= i <= self.N and 1 <= j <= self.M):
            raise ValueError(f"no vertical qubit ({i},{j}) on {self.N}x{self.M}")
        return (i - 1) * self.M + (j - 1)

    def hq(self, i: int, j: int) -> int:
        """Index of horizontal qubit h(i,j)."""
        if not (1 <= i <= self.N - 1 and 1 <= j <= self.M - 1):
            raise ValueError(f"no horizontal qubit ({i},{j}) on {self.N}x{self.M}")
        return self.n_vertical + (i - 1) * (self.M - 1) + (j - 1)

    def qubit_label(self, q: int):
        """Inverse of vq/hq: ('v'|'h', i, j)."""
        if not 0 <= q < self.n_qubits:
            raise ValueError("qubit index out of range")
        if q < self.n_vertical:
            return ("v", q // self.M + 1, q % self.M + 1)
        q -= self.n_vertical
        return ("h", q // (self.M - 1) + 1, q % (self.M - 1) + 1)

    @property
    def black(self) -> int:
        return self.vq(self.N, 1)

    # --- stabilizer index sets ------------------------------------------
    @property
    def plaquettes(self) -> tuple:
        return tuple(
            (i, j)
            for i in range(1, self.N + 1)
            for j in range(1, self.M)
        )

    @property
    def stars(self) -> tuple:
        return tuple(
            (i, j)
            for i in range(1, self.N)
            for j in range(1, self.M + 1)
        )

    def plaquette_support(self, i: int, j: int) -> frozenset:
        if not (1 <= i <= self.N and 1 <= j <= self.M - 1):
            raise ValueError(f"no plaquette ({i},{j}) on {self.N}x{self.M}")
        qs = {self.vq(i, j), self.vq(i, j + 1)}
        if i > 1:
            qs.add(self.hq(i - 1, j))
        if i < self.N:
            qs.add(self.hq(i, j))
        return frozenset(qs)

    def star_support(self, i: int, j: int) -> frozenset:
        if not (1 <= i <= self.N - 1 and 1 <= j <= self.M):
            raise ValueError(f"no star ({i},{j}) on {self.N}x{self.M}")
        qs = {self.vq(i, j), self.vq(i + 1, j)}
        if j > 1:
            qs.add(self.hq(i, j - 1))
        if j < self.M:
            qs.add(self.hq(i, j))
        return frozenset(qs)

    def stabilizer_paulis(self):
        """All star (X-type) and plaquette (Z-type) generators."""
        ops = [PauliOperator(1, self.star_support(i, j), frozenset())
               for i, j in self.stars]
        ops += [PauliOperator(1, frozenset(), self.plaquette_support(i, j))
                for i, j in self.plaquettes]
        return ops


def build_lattice(N: int, M: int) -> LatticeGeometry:
    return LatticeGeometry(N, M)


def plaquette_support(geom: LatticeGeometry, i: int, j: int) -> frozenset:
    return geom.plaquette_support(i, j)


def star_support(geom: LatticeGeometry, i: int, j: int) -> frozenset:
    return geom.star_support(i, j)


def logical_z(geom: LatticeGeometry) -> PauliOperator:
    """Z on the full west column of vertical qubits."""
    return PauliOperator(
        1, frozenset(), frozenset(geom.vq(i, 1) for i in range(1, geom.N + 1))
    )


def logical_x(geom: LatticeGeometry) -> PauliOperator:
    """X on the full south row of vertical qubits."""
    return PauliOperator(
        1, frozenset(geom.vq(geom.N, j) for j in range(1, geom.M + 1)), frozenset()
    )


def homology_parity(geom: LatticeGeometry, config, sector: str) -> int:
    """Homology class of a bit-per-qubit configuration.

    sector='z': config is a bit-flip (x-error) pattern; it must have trivial
    plaquette syndrome, and the class is its parity on the logical-Z support.
    sector='x' is the dual (star syndrome / logical-X support).
    """
    bits = _as_bitset(geom, config)
    if sector == "z":
        checks, logical = geom.plaquettes, logical_z(geom).zs
        support = geom.plaquette_support
    elif sector == "x":
        checks, logical = geom.stars, logical_x(geom).xs
        support = geom.star_support
    else:
        raise ValueError("sector must be 'z' or 'x'")
    for i, j in checks:
        if len(bits & support(i, j)) % 2:
            raise ValueError(f"nontrivial syndrome at ({i},{j}) in sector {sector}")
    return len(bits & logical) % 2


def _as_bitset(geom, config) -> frozenset:
    if isinstance(config, (set, frozenset)):
        return frozenset(config)
    return frozenset(q for q in range(geom.n_qubits) if config[q])


@dataclass(frozen=True)
class TriangleSplit:
    """Partition of the qubits into green / red / {black}."""

    green: frozenset
    red: frozenset
    black: int

    def __post_init__(self):
        if self.green & self.red or self.black in self.green | self.red:
            raise ValueError("split parts must be disjoint")


def default_split(geom: LatticeGeometry) -> TriangleSplit:
    """Fixed anti-diagonal split (integer arithmetic, ties go to red).

    Vertical v(i,j) is green iff i/N + (j-1)/(M-1) > 1; horizontal h(i,j)
    is green iff i/N + (j-1/2)/(M-1) > 1.  For M=1 there is nothing to the
    right of the west column and everything non-black is red.
    """
    N, M = geom.N, geom.M
    green, red = set(), set()
    for i in range(1, N + 1):
        for j in range(1, M + 1):
            q = geom.vq(i, j)
            if q == geom.black:
                continue
            if M > 1 and i * (M - 1) + (j - 1) * N > N * (M - 1):
                green.add(q)
            else:
                red.add(q)
    for i in range(1, N):
        for j in range(1, M):
            q = geom.hq(i, j)
            if 2 * i * (M - 1) + (2 * j - 1) * N > 2 * N * (M - 1):
                green.add(q)
            else:
                red.add(q)
    return TriangleSplit(frozenset(green), frozenset(red), geom.black)


def monotone_paths(geom: LatticeGeometry, split: TriangleSplit) -> list:
    """All readout staircases from the north boundary to the black qubit.

    A path takes one vertical qubit v(i, c_i) per row with the column
    sequence non-increasing (each step moves down or left), ends on the
    black qubit (c_N = 1), stays inside red + black, and picks up the
    horizontal qubits h(i, c_{i+1}..c_i - 1) between consecutive rows.
    Each path is a deformation of the west column by plaquette supports,
    so on any trivial-plaquette-syndrome configuration every path carries
    the same parity: the logical-Z class.
    """
    N, M = geom.N, geom.M
    allowed = split.red | {split.black}

    def vertical_ok(i, c):
        return geom.vq(i, c) in allowed

    def rungs(i, lo, hi):
        # horizontal qubits crossed between rows i and i+1
        return [geom.hq(i, j) for j in range(lo, hi)]

    paths = []

    def extend(i, c, acc):
        if i == N:
            paths.append(tuple(acc))
            return
        for c_next in range(c, 0, -1):
            hs = rungs(i, c_next, c)
            if any(h not in allowed for h in hs):
                continue
            if not vertical_ok(i + 1, c_next):
                continue
            extend(i + 1, c_next, acc + hs + [geom.vq(i + 1, c_next)])

    for c1 in range(M, 0, -1):
        if vertical_ok(1, c1):
            extend(1, c1, [geom.vq(1, c1)])
    # paths must end at the black qubit; c_N = 1 is enforced by vertical_ok
    # only when split.red excludes the rest of the south row, which the
    # anti-diagonal rule guarantees -- assert anyway.
    paths = [p for p in paths if p[-1] == split.black]
    return paths
