"""Measurement-only code manipulation protocols as executable schedules.

A schedule is an ordered list of phases: prepare qubits in basis states,
measure a commuting list of Pauli operators, or apply Pauli corrections
conditioned on the product of named earlier outcomes.  Schedules are
immutable and JSON-serializable.

Defect annihilation during encoding uses per-outcome boundary chains: a
star X_s(i,j) with outcome -1 is fixed by sigma_z on the column segment
v(1..i, j) (this chain anticommutes with exactly that one star, commutes
with every plaquette, and never touches the south row or the black qubit);
a plaquette Z_p(i,j) with outcome -1 is fixed by sigma_x on the row segment
v(i, j+1..M) (anticommutes with exactly that one plaquette, commutes with
every star, and never touches the west column).  Any homologically
consistent deterministic rule is valid; this one makes every conditional
correction a fixed map from a single outcome to a support.

Corrections may be applied physically or tracked as a Pauli frame
(default); frame-tracked execution adjusts later reported outcomes by the
pending frame.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .lattice import LatticeGeometry, PauliOperator, TriangleSplit, build_lattice
from .tableau import Tableau, embed, prepare_product, restrict

__all__ = [
    "PreparePhase",
    "MeasurePhase",
    "ConditionalPhase",
    "ProtocolSchedule",
    "ExecResult",
    "DecodeResult",
    "run_schedule",
    "encode_schedule",
    "teleport_encode_schedule",
    "one_shot_encode",
    "one_shot_decode",
    "append_smooth_column",
    "remove_smooth_column",
    "append_rough_row",
    "remove_rough_row",
]

_BASES = ("0", "1", "+", "-")


@dataclass(frozen=True)
class PreparePhase:
    """(qubit, basis) pairs; basis in '0','1','+','-'."""

    assignment: tuple

    def __post_init__(self):
        for _, b in self.assignment:
            if b not in _BASES:
                raise ValueError(f"unknown basis {b!r}")


@dataclass(frozen=True)
class MeasurePhase:
    """Named Pauli measurements; all operators must pairwise commute."""

    operators: tuple  # of (name, PauliOperator)

    def __post_init__(self):
        ops = [p for _, p in self.operators]
        for a in range(len(ops)):
            for b in range(a + 1, len(ops)):
                if not ops[a].commutes_with(ops[b]):
                    raise ValueError("measurement phase contains anticommuting pair")


@dataclass(frozen=True)
class ConditionalPhase:
    """Apply each Pauli iff the product of its named outcomes is -1."""

    corrections: tuple  # of (outcome_names: tuple, PauliOperator)


@dataclass(frozen=True)
class ProtocolSchedule:
    n_qubits: int
    phases: tuple

    def __post_init__(self):
        for ph in self.phases:
            for P in _phase_paulis(ph):
                top = max(P.xs | P.zs, default=-1)
                if top >= self.n_qubits:
                    raise ValueError("operator references a qubit outside the register")

    def to_json(self) -> str:
        return json.dumps(
            {"n_qubits": self.n_qubits, "phases": [_phase_json(p) for p in self.phases]},
            indent=2,
        )

    @classmethod
    def from_json(cls, doc: str) -> "ProtocolSchedule":
        d = json.loads(doc)
        return cls(d["n_qubits"], tuple(_phase_from_json(p) for p in d["phases"]))


def _phase_paulis(ph):
    if isinstance(ph, MeasurePhase):
        return [p for _, p in ph.operators]
    if isinstance(ph, ConditionalPhase):
        return [p for _, p in ph.corrections]
    return []


def _pauli_json(P: PauliOperator):
    return {"sign": P.sign, "x": sorted(P.xs), "z": sorted(P.zs)}


def _pauli_from_json(d) -> PauliOperator:
    return PauliOperator(d["sign"], frozenset(d["x"]), frozenset(d["z"]))


def _phase_json(ph):
    if isinstance(ph, PreparePhase):
        return {"type": "prepare", "assignment": [[q, b] for q, b in ph.assignment]}
    if isinstance(ph, MeasurePhase):
        return {
            "type": "measure",
            "operators": [[name, _pauli_json(p)] for name, p in ph.operators],
        }
    return {
        "type": "conditional",
        "corrections": [
            [list(names), _pauli_json(p)] for names, p in ph.corrections
        ],
    }


def _phase_from_json(d):
    if d["type"] == "prepare":
        return PreparePhase(tuple((q, b) for q, b in d["assignment"]))
    if d["type"] == "measure":
        return MeasurePhase(
            tuple((name, _pauli_from_json(p)) for name, p in d["operators"])
        )
    return ConditionalPhase(
        tuple((tuple(names), _pauli_from_json(p)) for names, p in d["corrections"])
    )


# --- execution --------------------------------------------------------------


@dataclass
class ExecResult:
    tableau: Tableau
    outcomes: dict
    frame_x: frozenset
    frame_z: frozenset

    def resolved(self) -> Tableau:
        """Copy of the tableau with any pending frame applied."""
        tab = self.tableau.copy()
        if self.frame_x or self.frame_z:
            tab.apply_pauli(PauliOperator(1, self.frame_x, self.frame_z))
        return tab


def _frame_sign(fx, fz, P: PauliOperator) -> int:
    return -1 if (len(fz & P.xs) + len(fx & P.zs)) % 2 else 1


def run_schedule(
    schedule: ProtocolSchedule, tab: Tableau, rng, apply_corrections: bool = False
) -> ExecResult:
    """Execute a schedule on a tableau (mutated in place).

    Reported outcomes are frame-adjusted.  Conditional corrections are
    recorded in the Pauli frame unless apply_corrections is set;
    preparation flips are always physical.
    """
    outcomes = {}
    fx, fz = set(), set()
    for ph in schedule.phases:
        if isinstance(ph, PreparePhase):
            for q, b in ph.assignment:
                if b in ("0", "1"):
                    op = PauliOperator(1, frozenset(), frozenset([q]))
                    flip = PauliOperator(1, frozenset([q]), frozenset())
                else:
                    op = PauliOperator(1, frozenset([q]), frozenset())
                    flip = PauliOperator(1, frozenset(), frozenset([q]))
                want = 1 if b in ("0", "+") else -1
                out, _ = tab.measure(op, rng)
                if out * _frame_sign(fx, fz, op) != want:
                    tab.apply_pauli(flip)
        elif isinstance(ph, MeasurePhase):
            for name, P in ph.operators:
                out, _ = tab.measure(P, rng)
                outcomes[name] = out * _frame_sign(fx, fz, P)
        elif isinstance(ph, ConditionalPhase):
            for names, P in ph.corrections:
                prod = 1
                for name in names:
                    prod *= outcomes[name]
                if prod == -1:
                    if apply_corrections:
                        tab.apply_pauli(P)
                    else:
                        fx ^= P.xs
                        fz ^= P.zs
        else:
            raise TypeError(f"unknown phase {ph!r}")
    return ExecResult(tab, outcomes, frozenset(fx), frozenset(fz))


# --- operator helpers -------------------------------------------------------


def _star_op(geom, i, j) -> PauliOperator:
    return PauliOperator(1, geom.star_support(i, j), frozenset())


def _plaq_op(geom, i, j) -> PauliOperator:
    return PauliOperator(1, frozenset(), geom.plaquette_support(i, j))


def _north_chain(geom, i, j) -> PauliOperator:
    """sigma_z on v(1..i, j): anticommutes with X_s(i,j) and nothing else."""
    return PauliOperator(1, frozenset(), frozenset(geom.vq(r, j) for r in range(1, i + 1)))


def _east_chain(geom, i, j) -> PauliOperator:
    """sigma_x on v(i, j+1..M): anticommutes with Z_p(i,j) and nothing else."""
    return PauliOperator(
        1, frozenset(geom.vq(i, c) for c in range(j + 1, geom.M + 1)), frozenset()
    )


def _prepare_phase(geom, split) -> PreparePhase:
    pairs = [(q, "+") for q in sorted(split.green)]
    pairs += [(q, "0") for q in sorted(split.red)]
    return PreparePhase(tuple(sorted(pairs)))


# --- one-shot encode / decode -----------------------------------------------


def encode_schedule(geom: LatticeGeometry, split: TriangleSplit) -> ProtocolSchedule:
    """Measure every star touching a red qubit, then every plaquette touching
    a green qubit; each -1 outcome triggers its boundary chain."""
    phases = [_prepare_phase(geom, split)]
    xs, xc = [], []
    for i, j in geom.stars:
        if geom.star_support(i, j) & split.red:
            name = f"Xs_{i}_{j}"
            xs.append((name, _star_op(geom, i, j)))
            xc.append(((name,), _north_chain(geom, i, j)))
    zp, zc = [], []
    for i, j in geom.plaquettes:
        if geom.plaquette_support(i, j) & split.green:
            name = f"Zp_{i}_{j}"
            zp.append((name, _plaq_op(geom, i, j)))
            zc.append(((name,), _east_chain(geom, i, j)))
    if xs:
        phases += [MeasurePhase(tuple(xs)), ConditionalPhase(tuple(xc))]
    if zp:
        phases += [MeasurePhase(tuple(zp)), ConditionalPhase(tuple(zc))]
    return ProtocolSchedule(geom.n_qubits, tuple(phases))


def one_shot_encode(
    input_state: str,
    geom: LatticeGeometry,
    split: TriangleSplit,
    rng,
    apply_corrections: bool = False,
) -> Tableau:
    """Encode the black qubit's basis state into the code."""
    if input_state not in _BASES:
        raise ValueError(f"unknown input state {input_state!r}")
    assignment = ["0"] * geom.n_qubits
    for q in split.green:
        assignment[q] = "+"
    assignment[geom.black] = input_state
    tab = prepare_product(geom.n_qubits, assignment)
    res = run_schedule(encode_schedule(geom, split), tab, rng, apply_corrections)
    return res.tableau if apply_corrections else res.resolved()


@dataclass
class DecodeResult:
    tableau: Tableau
    phase_flip: bool
    bit_flip: bool
    outcomes: dict


def one_shot_decode(tab: Tableau, geom: LatticeGeometry, rng) -> DecodeResult:
    """Measure the south row (X basis) then the west column (Z basis),
    flipping the black qubit on odd -1 parity of each; the black qubit ends
    in the originally encoded state."""
    outcomes = {}
    phase_parity = 0
    for j in range(2, geom.M + 1):
        q = geom.vq(geom.N, j)
        out, _ = tab.measure(PauliOperator(1, frozenset([q]), frozenset()), rng)
        outcomes[f"Xq_{q}"] = out
        phase_parity ^= out == -1
    if phase_parity:
        tab.apply_pauli(PauliOperator(1, frozenset(), frozenset([geom.black])))
    bit_parity = 0
    for i in range(1, geom.N):
        q = geom.vq(i, 1)
        out, _ = tab.measure(PauliOperator(1, frozenset(), frozenset([q])), rng)
        outcomes[f"Zq_{q}"] = out
        bit_parity ^= out == -1
    if bit_parity:
        tab.apply_pauli(PauliOperator(1, frozenset([geom.black]), frozenset()))
    return DecodeResult(tab, bool(phase_parity), bool(bit_parity), outcomes)


# --- teleportation formulation ----------------------------------------------


def teleport_encode_schedule(geom: LatticeGeometry) -> ProtocolSchedule:
    """Encoding as teleportation: (a) measure every syndrome not touching
    the black qubit and annihilate defects, (b) measure the plaquette and
    star touching it, (c) conditional flips along the south row / west
    column.  Equals one_shot_encode as a map on logical content."""
    N, M = geom.N, geom.M
    if N < 2 or M < 2:
        raise ValueError("teleportation schedule needs at least a 2x2 lattice")
    split = _default_split(geom)
    ops_a, cond_a = [], []
    for i, j in geom.stars:
        if (i, j) == (N - 1, 1):
            continue
        name = f"Xs_{i}_{j}"
        ops_a.append((name, _star_op(geom, i, j)))
        cond_a.append(((name,), _north_chain(geom, i, j)))
    for i, j in geom.plaquettes:
        if (i, j) == (N, 1):
            continue
        name = f"Zp_{i}_{j}"
        ops_a.append((name, _plaq_op(geom, i, j)))
        cond_a.append(((name,), _east_chain(geom, i, j)))
    phase_b = MeasurePhase(
        ((f"Zp_{N}_1", _plaq_op(geom, N, 1)), (f"Xs_{N-1}_1", _star_op(geom, N - 1, 1)))
    )
    south = PauliOperator(
        1, frozenset(geom.vq(N, c) for c in range(2, M + 1)), frozenset()
    )
    west = PauliOperator(
        1, frozenset(), frozenset(geom.vq(r, 1) for r in range(1, N))
    )
    cond_b = ConditionalPhase((((f"Zp_{N}_1",), south), ((f"Xs_{N-1}_1",), west)))
    return ProtocolSchedule(
        geom.n_qubits,
        (
            _prepare_phase(geom, split),
            MeasurePhase(tuple(ops_a)),
            ConditionalPhase(tuple(cond_a)),
            phase_b,
            cond_b,
        ),
    )


def _default_split(geom):
    from .lattice import default_split

    return default_split(geom)


# --- grow / shrink ----------------------------------------------------------


def _column_embed_map(geom, geom2):
    m = {}
    for i in range(1, geom.N + 1):
        for j in range(1, geom.M + 1):
            m[geom.vq(i, j)] = geom2.vq(i, j)
    for i in range(1, geom.N):
        for j in range(1, geom.M):
            m[geom.hq(i, j)] = geom2.hq(i, j)
    return m


def append_smooth_column(tab: Tableau, geom: LatticeGeometry, rng):
    """Grow M -> M+1: prepare the new east column in |+>, measure the new
    plaquettes, bit-flip the new column's vertical on each -1 outcome."""
    N, M = geom.N, geom.M
    geom2 = build_lattice(N, M + 1)
    new_assignment = {geom2.vq(i, M + 1): "+" for i in range(1, N + 1)}
    new_assignment.update({geom2.hq(i, M): "+" for i in range(1, N)})
    tab2 = embed(tab, geom2.n_qubits, _column_embed_map(geom, geom2), new_assignment)
    info = {"outcomes": {}, "correction": set()}
    for i in range(1, N + 1):
        out, _ = tab2.measure(_plaq_op(geom2, i, M), rng)
        info["outcomes"][f"Zp_{i}_{M}"] = out
        if out == -1:
            q = geom2.vq(i, M + 1)
            tab2.apply_pauli(PauliOperator(1, frozenset([q]), frozenset()))
            info["correction"].add(q)
    return tab2, geom2, info


def remove_smooth_column(tab: Tableau, geom: LatticeGeometry, rng):
    """Shrink M -> M-1: measure the east column in |+->; phase-flip the
    neighbouring vertical wherever the removed vertical gave -1."""
    N, M = geom.N, geom.M
    if M < 2:
        raise ValueError("need M >= 2 to remove a column")
    info = {"outcomes": {}, "correction": set()}
    for i in range(1, N + 1):
        q = geom.vq(i, M)
        out, _ = tab.measure(PauliOperator(1, frozenset([q]), frozenset()), rng)
        info["outcomes"][f"Xq_{q}"] = out
        if out == -1:
            keep_q = geom.vq(i, M - 1)
            tab.apply_pauli(PauliOperator(1, frozenset(), frozenset([keep_q])))
            info["correction"].add(keep_q)
    for i in range(1, N):
        q = geom.hq(i, M - 1)
        out, _ = tab.measure(PauliOperator(1, frozenset([q]), frozenset()), rng)
        info["outcomes"][f"Xq_{q}"] = out
    geom2 = build_lattice(N, M - 1)
    keep = [geom.vq(i, j) for i in range(1, N + 1) for j in range(1, M)]
    keep += [geom.hq(i, j) for i in range(1, N) for j in range(1, M - 1)]
    return restrict(tab, keep), geom2, info


def append_rough_row(tab: Tableau, geom: LatticeGeometry, rng):
    """Grow N -> N+1: dual of append_smooth_column under 0/1 <-> +/- and
    X <-> Z; the new south row is prepared in |0>."""
    N, M = geom.N, geom.M
    geom2 = build_lattice(N + 1, M)
    new_assignment = {geom2.vq(N + 1, j): "0" for j in range(1, M + 1)}
    new_assignment.update({geom2.hq(N, j): "0" for j in range(1, M)})
    tab2 = embed(tab, geom2.n_qubits, _column_embed_map(geom, geom2), new_assignment)
    info = {"outcomes": {}, "correction": set()}
    for j in range(1, M + 1):
        out, _ = tab2.measure(_star_op(geom2, N, j), rng)
        info["outcomes"][f"Xs_{N}_{j}"] = out
        if out == -1:
            q = geom2.vq(N + 1, j)
            tab2.apply_pauli(PauliOperator(1, frozenset(), frozenset([q])))
            info["correction"].add(q)
    return tab2, geom2, info


def remove_rough_row(tab: Tableau, geom: LatticeGeometry, rng):
    """Shrink N -> N-1: measure the south row in the bit basis; bit-flip the
    row above wherever the removed vertical gave -1."""
    N, M = geom.N, geom.M
    if N < 2:
        raise ValueError("need N >= 2 to remove a row")
    info = {"outcomes": {}, "correction": set()}
    for j in range(1, M + 1):
        q = geom.vq(N, j)
        out, _ = tab.measure(PauliOperator(1, frozenset(), frozenset([q])), rng)
        info["outcomes"][f"Zq_{q}"] = out
        if out == -1:
            keep_q = geom.vq(N - 1, j)
            tab.apply_pauli(PauliOperator(1, frozenset([keep_q]), frozenset()))
            info["correction"].add(keep_q)
    for j in range(1, M):
        q = geom.hq(N - 1, j)
        out, _ = tab.measure(PauliOperator(1, frozenset(), frozenset([q])), rng)
        info["outcomes"][f"Zq_{q}"] = out
    geom2 = build_lattice(N - 1, M)
    keep = [geom.vq(i, j) for i in range(1, N) for j in range(1, M + 1)]
    keep += [geom.hq(i, j) for i in range(1, N - 1) for j in range(1, M)]
    return restrict(tab, keep), geom2, info
