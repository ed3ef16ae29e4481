"""Molecular graphs, SMILES parsing, and canonical / randomized SMILES writers.

The supported SMILES dialect is the organic subset (B, C, N, O, P, S, F, Cl,
Br, I, plus aromatic lowercase forms) and bracket atoms with explicit hydrogen
counts and formal charges.  Stereo markers (``/``, ``\\``, ``@``, ``@@``) are
accepted and dropped with a :class:`SmilesWarning`; isotopes and atom classes
are rejected.  Multi-fragment strings (``.``) are rejected here -- callers
split reaction strings before parsing each component.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass, field
from math import floor

SINGLE = "single"
DOUBLE = "double"
TRIPLE = "triple"
AROMATIC = "aromatic"

BOND_VALENCE = {SINGLE: 1.0, DOUBLE: 2.0, TRIPLE: 3.0, AROMATIC: 1.5}
_BOND_SORT = {SINGLE: 1, DOUBLE: 2, TRIPLE: 3, AROMATIC: 4}

ORGANIC_SUBSET = {"B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I"}
AROMATIC_ORGANIC = {"b", "c", "n", "o", "p", "s"}
# Aromatic symbols allowed inside brackets.
AROMATIC_BRACKET = {"b", "c", "n", "o", "p", "s", "se", "as"}

DEFAULT_VALENCE = {
    "B": 3, "C": 4, "N": 3, "O": 2, "P": 3, "S": 2,
    "F": 1, "Cl": 1, "Br": 1, "I": 1,
}

# All recognized element symbols (bracket atoms may use any of these).
ELEMENTS = frozenset("""
    H He Li Be B C N O F Ne Na Mg Al Si P S Cl Ar K Ca Sc Ti V Cr Mn Fe Co Ni
    Cu Zn Ga Ge As Se Br Kr Rb Sr Y Zr Nb Mo Tc Ru Rh Pd Ag Cd In Sn Sb Te I
    Xe Cs Ba La Ce Pr Nd Pm Sm Eu Gd Tb Dy Ho Er Tm Yb Lu Hf Ta W Re Os Ir Pt
    Au Hg Tl Pb Bi Po At Rn Fr Ra Ac Th Pa U Np Pu Am Cm Bk Cf Es Fm Md No Lr
    Rf Db Sg Bh Hs Mt Ds Rg Cn Nh Fl Mc Lv Ts Og
""".split())


class SmilesParseError(ValueError):
    """Base error for unparseable SMILES input."""


class EmptyInput(SmilesParseError):
    pass


class UnknownElement(SmilesParseError):
    pass


class BadBracketAtom(SmilesParseError):
    pass


class UnclosedRing(SmilesParseError):
    pass


class UnbalancedParenthesis(SmilesParseError):
    pass


class SmilesWarning(UserWarning):
    """Accepted-but-discarded SMILES features (stereo markers)."""


@dataclass(frozen=True)
class Atom:
    element: str
    aromatic: bool = False
    formal_charge: int = 0
    implicit_h: int = 0
    index: int = 0


@dataclass(frozen=True)
class Bond:
    a: int
    b: int
    order: str  # single | double | triple | aromatic


@dataclass
class MolecularGraph:
    atoms: list[Atom]
    bonds: list[Bond]
    _adjacency: dict[int, list[tuple[int, str]]] = field(
        init=False, repr=False, compare=False, default_factory=dict
    )

    def __post_init__(self):
        adj: dict[int, list[tuple[int, str]]] = {i: [] for i in range(len(self.atoms))}
        for bond in self.bonds:
            adj[bond.a].append((bond.b, bond.order))
            adj[bond.b].append((bond.a, bond.order))
        self._adjacency = adj

    def neighbors(self, i: int) -> list[tuple[int, str]]:
        """(neighbor index, bond order) pairs for atom ``i``."""
        return self._adjacency[i]

    def degree(self, i: int) -> int:
        return len(self._adjacency[i])

    def bond_order(self, a: int, b: int) -> str | None:
        for j, order in self._adjacency[a]:
            if j == b:
                return order
        return None

    @property
    def num_atoms(self) -> int:
        return len(self.atoms)


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

class _PendingAtom:
    __slots__ = ("element", "aromatic", "charge", "bracket_h", "from_bracket")

    def __init__(self, element, aromatic, charge=0, bracket_h=None, from_bracket=False):
        self.element = element
        self.aromatic = aromatic
        self.charge = charge
        self.bracket_h = bracket_h      # explicit H count, bracket atoms only
        self.from_bracket = from_bracket


def parse_smiles(s: str) -> MolecularGraph:
    """Parse a single-compound SMILES string into a molecular graph.

    Ring closures are paired, implicit hydrogen counts computed, and aromatic
    flags taken from lowercase atom symbols.  Stereo markers are discarded
    with a warning.  Raises a :class:`SmilesParseError` subclass on malformed
    input.
    """
    text = s.strip()
    if not text:
        raise EmptyInput("empty SMILES string")

    atoms: list[_PendingAtom] = []
    bonds: list[tuple[int, int, str]] = []
    bonded_pairs: set[tuple[int, int]] = set()
    prev: int | None = None
    pending_bond: str | None = None
    branch_stack: list[int | None] = []
    ring_open: dict[int, tuple[int, str | None]] = {}

    def add_bond(a: int, b: int, order: str | None):
        if a == b:
            raise UnclosedRing(f"ring bond from atom {a} to itself")
        key = (min(a, b), max(a, b))
        if key in bonded_pairs:
            raise UnclosedRing(f"duplicate bond between atoms {a} and {b}")
        if order is None:
            both_aromatic = atoms[a].aromatic and atoms[b].aromatic
            order = AROMATIC if both_aromatic else SINGLE
        bonded_pairs.add(key)
        bonds.append((a, b, order))

    def add_atom(pending: _PendingAtom):
        nonlocal prev, pending_bond
        atoms.append(pending)
        idx = len(atoms) - 1
        if prev is not None:
            add_bond(prev, idx, pending_bond)
        pending_bond = None
        prev = idx

    def close_or_open_ring(digit: int):
        nonlocal pending_bond
        if prev is None:
            raise UnclosedRing(f"ring closure digit {digit} before any atom")
        if digit in ring_open:
            other, open_order = ring_open.pop(digit)
            if open_order is not None and pending_bond is not None and open_order != pending_bond:
                raise UnclosedRing(f"conflicting bond orders for ring closure {digit}")
            add_bond(other, prev, pending_bond or open_order)
        else:
            ring_open[digit] = (prev, pending_bond)
        pending_bond = None

    i = 0
    n = len(text)
    while i < n:
        ch = text[i]

        if ch == "(":
            if prev is None:
                raise UnbalancedParenthesis("branch opened before any atom")
            if pending_bond is not None:
                raise SmilesParseError("bond symbol immediately before '('")
            branch_stack.append(prev)
            i += 1
        elif ch == ")":
            if not branch_stack:
                raise UnbalancedParenthesis("unmatched ')'")
            if pending_bond is not None:
                raise SmilesParseError("dangling bond symbol before ')'")
            prev = branch_stack.pop()
            i += 1
        elif ch in "-=#:":
            if pending_bond is not None:
                raise SmilesParseError("two bond symbols in a row")
            pending_bond = {"-": SINGLE, "=": DOUBLE, "#": TRIPLE, ":": AROMATIC}[ch]
            i += 1
        elif ch in "/\\":
            warnings.warn(f"stereo bond marker {ch!r} discarded", SmilesWarning, stacklevel=2)
            if pending_bond is None:
                pending_bond = SINGLE
            i += 1
        elif ch.isdigit():
            close_or_open_ring(int(ch))
            i += 1
        elif ch == "%":
            if i + 2 >= n or not text[i + 1 : i + 3].isdigit():
                raise SmilesParseError("'%' ring closure requires two digits")
            close_or_open_ring(int(text[i + 1 : i + 3]))
            i += 3
        elif ch == "[":
            end = text.find("]", i)
            if end < 0:
                raise BadBracketAtom("unterminated bracket atom")
            add_atom(_parse_bracket(text[i + 1 : end]))
            i = end + 1
        elif ch == ".":
            raise SmilesParseError(
                "multi-fragment SMILES not supported here; split on '.' first"
            )
        elif ch.isupper():
            two = text[i : i + 2]
            if two in ("Cl", "Br"):
                add_atom(_PendingAtom(two, aromatic=False))
                i += 2
            elif ch in ORGANIC_SUBSET:
                add_atom(_PendingAtom(ch, aromatic=False))
                i += 1
            else:
                raise UnknownElement(f"element {ch!r} not in the organic subset; use brackets")
        elif ch in AROMATIC_ORGANIC:
            add_atom(_PendingAtom(ch.upper(), aromatic=True))
            i += 1
        else:
            raise UnknownElement(f"unexpected character {ch!r} at position {i}")

    if pending_bond is not None:
        raise SmilesParseError("dangling bond symbol at end of input")
    if branch_stack:
        raise UnbalancedParenthesis("unclosed '('")
    if ring_open:
        digits = ", ".join(str(d) for d in sorted(ring_open))
        raise UnclosedRing(f"unpaired ring closure digit(s): {digits}")

    return _materialize(atoms, bonds)


def _parse_bracket(body: str) -> _PendingAtom:
    if not body:
        raise BadBracketAtom("empty bracket atom")
    i = 0
    if body[0].isdigit():
        raise BadBracketAtom(f"isotopes not supported: [{body}]")

    # element symbol, possibly aromatic lowercase
    aromatic = False
    if body[i].islower():
        two = body[i : i + 2]
        if two in AROMATIC_BRACKET:
            element, aromatic = two.capitalize(), True
            i += 2
        elif body[i] in AROMATIC_BRACKET:
            element, aromatic = body[i].upper(), True
            i += 1
        else:
            raise BadBracketAtom(f"bad element symbol in [{body}]")
    else:
        if i + 1 < len(body) and body[i + 1].islower() and body[i : i + 2] in ELEMENTS:
            element = body[i : i + 2]
            i += 2
        else:
            element = body[i]
            i += 1
    if element not in ELEMENTS:
        raise UnknownElement(f"unknown element {element!r} in [{body}]")

    h_count = 0
    saw_h = False
    charge = 0
    saw_charge = False
    while i < len(body):
        ch = body[i]
        if ch == "@":
            j = i
            while j < len(body) and body[j] == "@":
                j += 1
            warnings.warn("chirality marker discarded", SmilesWarning, stacklevel=3)
            i = j
        elif ch == "H":
            if saw_h:
                raise BadBracketAtom(f"repeated H count in [{body}]")
            saw_h = True
            i += 1
            start = i
            while i < len(body) and body[i].isdigit():
                i += 1
            h_count = int(body[start:i]) if i > start else 1
        elif ch in "+-":
            if saw_charge:
                raise BadBracketAtom(f"repeated charge in [{body}]")
            saw_charge = True
            sign = 1 if ch == "+" else -1
            j = i + 1
            if j < len(body) and body[j] == ch:
                # ++ / -- shorthand
                while j < len(body) and body[j] == ch:
                    j += 1
                charge = sign * (j - i)
            elif j < len(body) and body[j].isdigit():
                start = j
                while j < len(body) and body[j].isdigit():
                    j += 1
                charge = sign * int(body[start:j])
            else:
                charge = sign
            i = j
        elif ch == ":":
            raise BadBracketAtom(f"atom class not supported: [{body}]")
        else:
            raise BadBracketAtom(f"unexpected {ch!r} in [{body}]")

    return _PendingAtom(element, aromatic, charge=charge, bracket_h=h_count, from_bracket=True)


def _materialize(pending: list[_PendingAtom], bonds: list[tuple[int, int, str]]) -> MolecularGraph:
    order_sums = [0.0] * len(pending)
    for a, b, order in bonds:
        order_sums[a] += BOND_VALENCE[order]
        order_sums[b] += BOND_VALENCE[order]

    atoms = []
    for i, p in enumerate(pending):
        if p.from_bracket:
            h = p.bracket_h or 0
        else:
            # Aromatic bonds count 1.5 toward valence; the sum is floored.
            h = max(0, DEFAULT_VALENCE[p.element] - floor(order_sums[i]))
        atoms.append(Atom(p.element, p.aromatic, p.charge, h, i))
    return MolecularGraph(atoms, [Bond(a, b, order) for a, b, order in bonds])


# ---------------------------------------------------------------------------
# Canonical ranking
# ---------------------------------------------------------------------------

def _dense_ranks(keys: list) -> list[int]:
    order = {k: r for r, k in enumerate(sorted(set(keys)))}
    return [order[k] for k in keys]


def _initial_ranks(g: MolecularGraph) -> list[int]:
    keys = [
        (a.element, g.degree(i), a.formal_charge, a.aromatic, a.implicit_h)
        for i, a in enumerate(g.atoms)
    ]
    return _dense_ranks(keys)


def _refine(g: MolecularGraph, ranks: list[int]) -> list[int]:
    """Iterative neighborhood refinement until the partition stabilizes."""
    distinct = len(set(ranks))
    while True:
        keys = [
            (ranks[i], tuple(sorted((_BOND_SORT[o], ranks[j]) for j, o in g.neighbors(i))))
            for i in range(g.num_atoms)
        ]
        new_ranks = _dense_ranks(keys)
        new_distinct = len(set(new_ranks))
        if new_distinct == distinct:
            return new_ranks
        ranks, distinct = new_ranks, new_distinct


def canonical_smiles(g: MolecularGraph) -> str:
    """Deterministic SMILES, identical for every atom ordering of a molecule.

    Atom ranks are refined from local invariants; remaining ties are broken
    by promoting each member of the lowest tied class in turn and keeping the
    lexicographically smallest emission, so symmetric atoms cannot make the
    output depend on input order.
    """
    if not g.atoms:
        raise ValueError("cannot write SMILES for an empty graph")
    ranks = _refine(g, _initial_ranks(g))
    return _min_emission(g, ranks)


def _min_emission(g: MolecularGraph, ranks: list[int]) -> str:
    if len(set(ranks)) == g.num_atoms:
        return _emit(g, ranks)
    tied = min(r for r in ranks if ranks.count(r) > 1)
    members = [i for i, r in enumerate(ranks) if r == tied]
    best = None
    for m in members:
        promoted = [r * 2 for r in ranks]
        promoted[m] -= 1
        candidate = _min_emission(g, _refine(g, _dense_ranks(promoted)))
        if best is None or candidate < best:
            best = candidate
    return best


def randomized_smiles(g: MolecularGraph, seed: int) -> str:
    """A valid SMILES rendering of ``g`` starting from a seeded random atom.

    Deterministic for a fixed ``(g, seed)``; reparsing yields a graph with
    the same canonical form.  Used to exercise order invariance.
    """
    if not g.atoms:
        raise ValueError("cannot write SMILES for an empty graph")
    rng = random.Random(seed)
    ranks = list(range(g.num_atoms))
    rng.shuffle(ranks)
    return _emit(g, ranks)


# ---------------------------------------------------------------------------
# SMILES emission
# ---------------------------------------------------------------------------

def _emit(g: MolecularGraph, ranks: list[int]) -> str:
    """DFS emission from the minimal-rank atom, neighbors in ascending rank."""
    n = g.num_atoms
    start = min(range(n), key=lambda i: ranks[i])

    visited = [False] * n
    tree_children: dict[int, list[int]] = {i: [] for i in range(n)}
    ring_keys: set[tuple[int, int]] = set()

    def classify(v: int, parent: int):
        visited[v] = True
        for j, _order in sorted(g.neighbors(v), key=lambda t: ranks[t[0]]):
            if not visited[j]:
                tree_children[v].append(j)
                classify(j, v)
            elif j != parent:
                ring_keys.add((min(v, j), max(v, j)))

    classify(start, -1)
    if not all(visited):
        raise ValueError("graph is disconnected; emit one fragment at a time")

    ring_partner: dict[int, list[int]] = {i: [] for i in range(n)}
    for a, b in ring_keys:
        ring_partner[a].append(b)
        ring_partner[b].append(a)
    for i in ring_partner:
        ring_partner[i].sort(key=lambda j: ranks[j])

    # ring digit bookkeeping: smallest free digit, reused after closing
    open_digits: dict[tuple[int, int], int] = {}
    free_digits = set(range(1, 100))

    def digit_token(d: int) -> str:
        return str(d) if d < 10 else f"%{d:02d}"

    def bond_token(a: int, b: int) -> str:
        order = g.bond_order(a, b)
        both_aromatic = g.atoms[a].aromatic and g.atoms[b].aromatic
        if order == AROMATIC:
            return "" if both_aromatic else ":"
        if order == SINGLE:
            return "-" if both_aromatic else ""
        return "=" if order == DOUBLE else "#"

    def atom_token(i: int) -> str:
        a = g.atoms[i]
        plain_symbol = a.element.lower() if a.aromatic else a.element
        if a.formal_charge == 0 and a.element in ORGANIC_SUBSET:
            if not a.aromatic or a.element.lower() in AROMATIC_ORGANIC:
                total = sum(BOND_VALENCE[o] for _, o in g.neighbors(i))
                expected = max(0, DEFAULT_VALENCE[a.element] - floor(total))
                if expected == a.implicit_h:
                    return plain_symbol
        h = "" if a.implicit_h == 0 else ("H" if a.implicit_h == 1 else f"H{a.implicit_h}")
        if a.formal_charge == 0:
            q = ""
        elif a.formal_charge == 1:
            q = "+"
        elif a.formal_charge == -1:
            q = "-"
        else:
            q = f"{a.formal_charge:+d}"
        return f"[{plain_symbol}{h}{q}]"

    def render(v: int) -> str:
        parts = [atom_token(v)]
        for j in ring_partner[v]:
            key = (min(v, j), max(v, j))
            if key in open_digits:
                d = open_digits.pop(key)
                parts.append(digit_token(d))
                free_digits.add(d)
            else:
                d = min(free_digits)
                free_digits.discard(d)
                open_digits[key] = d
                parts.append(bond_token(v, j) + digit_token(d))
        children = tree_children[v]
        for c in children[:-1]:
            parts.append("(" + bond_token(v, c) + render(c) + ")")
        if children:
            c = children[-1]
            parts.append(bond_token(v, c) + render(c))
        return "".join(parts)

    return render(start)


def graphs_match(a: MolecularGraph, b: MolecularGraph) -> bool:
    """True when two graphs describe the same molecule (canonical equality)."""
    return canonical_smiles(a) == canonical_smiles(b)
