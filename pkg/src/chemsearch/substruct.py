"""Subgraph-isomorphism matching of a pattern molecule inside a target.

Atoms match on element and aromatic flag; a charged pattern atom additionally
requires an equal charge, while an uncharged pattern atom matches any charge.
Pattern hydrogen counts are not constraints.  Bonds match on exact order
(aromatic only matches aromatic).  Matching is monomorphic: extra target
bonds between mapped atoms are allowed.
"""

from __future__ import annotations

from chemsearch.molgraph import Atom, MolecularGraph


def atoms_compatible(pattern_atom: Atom, target_atom: Atom) -> bool:
    if pattern_atom.element != target_atom.element:
        return False
    if pattern_atom.aromatic != target_atom.aromatic:
        return False
    if pattern_atom.formal_charge != 0 and pattern_atom.formal_charge != target_atom.formal_charge:
        return False
    return True


def bonds_compatible(pattern_order: str, target_order: str) -> bool:
    return pattern_order == target_order


def _pattern_order(pattern: MolecularGraph) -> list[int]:
    """Visit order that keeps each atom adjacent to an already-placed one."""
    n = pattern.num_atoms
    if n == 0:
        return []
    start = max(range(n), key=lambda i: (pattern.degree(i), -i))
    order = [start]
    placed = {start}
    while len(order) < n:
        frontier = [
            (sum(1 for j, _ in pattern.neighbors(i) if j in placed), pattern.degree(i), -i)
            for i in range(n)
        ]
        best = max(
            (i for i in range(n) if i not in placed),
            key=lambda i: frontier[i],
        )
        order.append(best)
        placed.add(best)
    return order


def find_matches(
    pattern: MolecularGraph, target: MolecularGraph, limit: int = 1000
) -> list[dict[int, int]]:
    """Up to ``limit`` distinct injective pattern->target atom mappings.

    Every pattern bond must map onto a compatible target bond.  Returns an
    empty list when the pattern does not embed.  Deterministic: target atoms
    are tried in index order.
    """
    if limit < 1:
        raise ValueError("limit must be >= 1")
    np_, nt = pattern.num_atoms, target.num_atoms
    if np_ == 0 or np_ > nt:
        return []

    order = _pattern_order(pattern)
    matches: list[dict[int, int]] = []
    mapping: dict[int, int] = {}
    used = [False] * nt

    def backtrack(depth: int) -> bool:
        if depth == np_:
            matches.append(dict(mapping))
            return len(matches) >= limit
        p = order[depth]
        p_atom = pattern.atoms[p]
        placed_nbrs = [(j, o) for j, o in pattern.neighbors(p) if j in mapping]
        for t in range(nt):
            if used[t] or not atoms_compatible(p_atom, target.atoms[t]):
                continue
            ok = True
            for j, p_order in placed_nbrs:
                t_order = target.bond_order(mapping[j], t)
                if t_order is None or not bonds_compatible(p_order, t_order):
                    ok = False
                    break
            if not ok:
                continue
            mapping[p] = t
            used[t] = True
            done = backtrack(depth + 1)
            used[t] = False
            del mapping[p]
            if done:
                return True
        return False

    backtrack(0)
    return matches


def has_substructure(pattern: MolecularGraph, target: MolecularGraph) -> bool:
    """True when the pattern embeds in the target at least once."""
    return bool(find_matches(pattern, target, limit=1))
