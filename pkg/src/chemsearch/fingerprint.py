"""Circular fingerprints and Tanimoto similarity.

Each atom contributes one hashed neighborhood per round (0..radius); the
64-bit FNV-1a hash of a canonical byte encoding picks the bit.  Bit-level
compatibility with external toolkits is not a goal -- scores are meaningful
only against fingerprints produced by this module.
"""

from __future__ import annotations

from dataclasses import dataclass

from chemsearch.molgraph import MolecularGraph

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = (1 << 64) - 1

_BOND_CODE = {"single": 1, "double": 2, "triple": 3, "aromatic": 4}

DEFAULT_WIDTH = 2048
DEFAULT_RADIUS = 2


class WidthMismatch(ValueError):
    """Tanimoto comparison of fingerprints with different widths."""


@dataclass(frozen=True)
class Fingerprint:
    width: int
    bits: int       # bitset packed into a Python int
    set_count: int

    @classmethod
    def from_bit_indices(cls, indices, width: int) -> "Fingerprint":
        bits = 0
        for i in indices:
            if not 0 <= i < width:
                raise ValueError(f"bit index {i} outside width {width}")
            bits |= 1 << i
        return cls(width, bits, bits.bit_count())

    def bit_indices(self) -> list[int]:
        return [i for i in range(self.width) if self.bits >> i & 1]


def _fnv1a(data: bytes) -> int:
    h = _FNV_OFFSET
    for byte in data:
        h = ((h ^ byte) * _FNV_PRIME) & _MASK64
    return h


def morgan_fingerprint(
    g: MolecularGraph, radius: int = DEFAULT_RADIUS, width: int = DEFAULT_WIDTH
) -> Fingerprint:
    """Hash atom-centered neighborhoods of increasing radius into a bit vector.

    Invariant to input atom order: round-0 invariants are local atom
    properties and later rounds combine sorted neighbor lists.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    if width <= 0 or width & (width - 1):
        raise ValueError("width must be a positive power of two")

    invariants = []
    for i, atom in enumerate(g.atoms):
        seed = (
            f"{atom.element}|{g.degree(i)}|{atom.implicit_h}"
            f"|{atom.formal_charge}|{int(atom.aromatic)}"
        )
        invariants.append(_fnv1a(seed.encode()))

    bits = 0
    for h in invariants:
        bits |= 1 << (h % width)

    current = invariants
    for rnd in range(1, radius + 1):
        nxt = []
        for i in range(g.num_atoms):
            env = sorted((_BOND_CODE[order], current[j]) for j, order in g.neighbors(i))
            blob = f"{rnd}|{current[i]:016x}|" + ",".join(f"{c}:{h:016x}" for c, h in env)
            nxt.append(_fnv1a(blob.encode()))
        for h in nxt:
            bits |= 1 << (h % width)
        current = nxt

    return Fingerprint(width, bits, bits.bit_count())


def tanimoto(a: Fingerprint, b: Fingerprint) -> float:
    """|a AND b| / |a OR b| over set bits; 0.0 when both vectors are empty."""
    if a.width != b.width:
        raise WidthMismatch(f"widths differ: {a.width} vs {b.width}")
    union = (a.bits | b.bits).bit_count()
    if union == 0:
        return 0.0
    return (a.bits & b.bits).bit_count() / union
