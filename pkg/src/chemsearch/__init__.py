"""Multimodal chemical search: SMILES structures, text retrieval, and linking."""

from chemsearch.molgraph import (
    MolecularGraph,
    SmilesParseError,
    canonical_smiles,
    parse_smiles,
    randomized_smiles,
)

__all__ = [
    "MolecularGraph",
    "SmilesParseError",
    "canonical_smiles",
    "parse_smiles",
    "randomized_smiles",
]

__version__ = "0.1.0"
