"""
Explicit Finite-Word Automata

This module provides DFAs and NFAs over total-assignment alphabets, together
with the algebra the synthesis pipelines are built from: subset construction,
complement, synchronous product, existential abstraction, the universal
(belief) subset construction, minimization and DOT export.

Letters are integers: bit i is set iff proposition i of the automaton's
``props`` order is true. Every automaton has 2**len(props) letters and stores
its transitions in a dense numpy table indexed by (state, letter).
"""

import logging
from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union, TYPE_CHECKING

import numpy as np

from constants import SUBSET_LIMIT, STAGE_DETERMINIZE, STAGE_BELIEF, STAGE_PRODUCT
from errors import SynthError, ResourceLimitError, WidthMismatchError

if TYPE_CHECKING:
    from logic import Partition, Trace

logger = logging.getLogger(__name__)


# --- Automaton Types ---

@dataclass(frozen=True, eq=False)
class Dfa:
    """Deterministic automaton with a total transition table.

    Attributes:
        props: Proposition order; bit i of a letter is props[i].
        initial: Initial state.
        finals: Boolean vector, finals[s] iff s is accepting.
        table: int32 array of shape (states, 2**len(props)).
    """
    props: Tuple[str, ...]
    initial: int
    finals: np.ndarray
    table: np.ndarray

    def __post_init__(self):
        table = np.ascontiguousarray(self.table, dtype=np.int32)
        finals = np.ascontiguousarray(self.finals, dtype=bool)
        n = table.shape[0]
        if table.ndim != 2 or table.shape[1] != 1 << len(self.props):
            raise WidthMismatchError(
                f"transition table has shape {table.shape}, expected (n, {1 << len(self.props)})")
        if finals.shape != (n,):
            raise SynthError(f"final vector has shape {finals.shape}, expected ({n},)", error_type="automaton")
        if not 0 <= self.initial < n:
            raise SynthError(f"initial state {self.initial} outside 0..{n - 1}", error_type="automaton")
        if n and (table.min() < 0 or table.max() >= n):
            raise SynthError("transition target out of range", error_type="automaton")
        table.flags.writeable = False
        finals.flags.writeable = False
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "finals", finals)

    @property
    def n_states(self) -> int:
        return self.table.shape[0]

    @property
    def width(self) -> int:
        return len(self.props)

    @property
    def n_letters(self) -> int:
        return self.table.shape[1]

    @property
    def final_states(self) -> frozenset:
        return frozenset(int(s) for s in np.flatnonzero(self.finals))

    def step(self, state: int, letter: int) -> int:
        return int(self.table[state, letter])

    def __repr__(self) -> str:
        return f"Dfa(states={self.n_states}, props={list(self.props)}, finals={len(self.final_states)})"


@dataclass(frozen=True, eq=False)
class Nfa:
    """Nondeterministic automaton.

    ``succ[s, letter]`` is a Python int used as a bitset of successor states;
    0 means no transition.
    """
    props: Tuple[str, ...]
    initial: int
    finals: np.ndarray
    succ: np.ndarray

    def __post_init__(self):
        finals = np.ascontiguousarray(self.finals, dtype=bool)
        n = finals.shape[0]
        if self.succ.shape != (n, 1 << len(self.props)):
            raise WidthMismatchError(
                f"successor table has shape {self.succ.shape}, expected ({n}, {1 << len(self.props)})")
        if not 0 <= self.initial < n:
            raise SynthError(f"initial state {self.initial} outside 0..{n - 1}", error_type="automaton")
        finals.flags.writeable = False
        self.succ.flags.writeable = False
        object.__setattr__(self, "finals", finals)

    @property
    def n_states(self) -> int:
        return self.finals.shape[0]

    @property
    def width(self) -> int:
        return len(self.props)

    @property
    def n_letters(self) -> int:
        return 1 << len(self.props)

    @property
    def final_mask(self) -> int:
        return sum(1 << int(s) for s in np.flatnonzero(self.finals))

    @classmethod
    def from_dfa(cls, d: Dfa) -> 'Nfa':
        succ = np.array([[1 << x for x in row] for row in d.table.tolist()], dtype=object)
        succ = succ.reshape(d.table.shape)
        return cls(d.props, d.initial, d.finals.copy(), succ)

    @classmethod
    def from_transitions(cls, props: Sequence[str], n_states: int, initial: int, finals: Iterable[int],
                         transitions: Dict[Tuple[int, int], Iterable[int]]) -> 'Nfa':
        """Build an NFA from a {(state, letter): successors} map; missing entries have no successor."""
        succ = np.zeros((n_states, 1 << len(props)), dtype=object)
        for (state, letter), targets in transitions.items():
            bits = 0
            for target in targets:
                if not 0 <= target < n_states:
                    raise SynthError(f"successor state {target} outside 0..{n_states - 1}", error_type="automaton")
                bits |= 1 << target
            succ[state, letter] = bits
        final_vec = np.zeros(n_states, dtype=bool)
        final_vec[list(finals)] = True
        return cls(tuple(props), initial, final_vec, succ)

    def __repr__(self) -> str:
        return f"Nfa(states={self.n_states}, props={list(self.props)})"


Automaton = Union[Dfa, Nfa]


def make_dfa(props: Sequence[str], initial: int, finals: Iterable[int], table: Sequence[Sequence[int]]) -> Dfa:
    """Convenience constructor from plain Python lists."""
    table = np.asarray(table, dtype=np.int32)
    final_vec = np.zeros(table.shape[0], dtype=bool)
    final_vec[list(finals)] = True
    return Dfa(tuple(props), initial, final_vec, table)


def universal_dfa(props: Sequence[str]) -> Dfa:
    """One-state automaton accepting every non-empty trace."""
    return make_dfa(props, 0, [0], [[0] * (1 << len(props))])


# --- Letters and Traces ---

def encode_letter(letter: Iterable[str], props: Sequence[str]) -> int:
    positions = {name: i for i, name in enumerate(props)}
    bits = 0
    for name in letter:
        if name not in positions:
            raise WidthMismatchError(f"proposition '{name}' is not in the alphabet {list(props)}")
        bits |= 1 << positions[name]
    return bits


def encode_trace(t: 'Trace', props: Sequence[str]) -> List[int]:
    return [encode_letter(letter, props) for letter in t]


def decode_letter(letter: int, props: Sequence[str]) -> frozenset:
    return frozenset(name for i, name in enumerate(props) if letter >> i & 1)


def _letters(a: Automaton, t: Sequence) -> List[int]:
    letters = []
    for letter in t:
        if isinstance(letter, (int, np.integer)):
            if not 0 <= letter < a.n_letters:
                raise WidthMismatchError(f"letter {letter} outside alphabet of width {a.width}")
            letters.append(int(letter))
        else:
            letters.append(encode_letter(letter, a.props))
    return letters


def accepts(a: Automaton, t: Sequence) -> bool:
    """Run a on t; the empty trace is always rejected.

    Args:
        a: Dfa or Nfa.
        t: Trace of letter sets, or a sequence of integer letters.
    """
    letters = _letters(a, t)
    if not letters:
        return False
    if isinstance(a, Dfa):
        state = a.initial
        for letter in letters:
            state = int(a.table[state, letter])
        return bool(a.finals[state])
    current = 1 << a.initial
    for letter in letters:
        nxt = 0
        members = current
        while members:
            low = members & -members
            nxt |= a.succ[low.bit_length() - 1, letter]
            members ^= low
        current = nxt
        if not current:
            return False
    return bool(current & a.final_mask)


# --- Reachability ---

def reachable(d: Dfa) -> Dfa:
    """Restrict d to the states reachable from the initial state, renumbered in BFS order."""
    order = [d.initial]
    index = {d.initial: 0}
    queue = deque([d.initial])
    while queue:
        state = queue.popleft()
        for target in np.unique(d.table[state]).tolist():
            if target not in index:
                index[target] = len(order)
                order.append(target)
                queue.append(target)
    if len(order) == d.n_states and order == list(range(d.n_states)):
        return d
    remap = np.zeros(d.n_states, dtype=np.int32)
    for new, old in enumerate(order):
        remap[old] = new
    keep = np.asarray(order)
    return Dfa(d.props, 0, d.finals[keep], remap[d.table[keep]])


def is_empty(d: Dfa) -> bool:
    """True iff d accepts no non-empty trace."""
    seen = set(np.unique(d.table[d.initial]).tolist())
    queue = deque(seen)
    while queue:
        state = queue.popleft()
        if d.finals[state]:
            return False
        for target in np.unique(d.table[state]).tolist():
            if target not in seen:
                seen.add(target)
                queue.append(target)
    return True


def _check_same_alphabet(a: Automaton, b: Automaton) -> None:
    if a.width != b.width:
        raise WidthMismatchError(f"alphabet widths differ: {a.width} vs {b.width}")
    if a.props != b.props:
        raise WidthMismatchError(f"proposition orders differ: {list(a.props)} vs {list(b.props)}")


# --- Algebra ---

def complement(d: Dfa) -> Dfa:
    """Swap final and non-final states; accepts exactly the non-empty traces d rejects."""
    return Dfa(d.props, d.initial, ~d.finals, d.table)


def product(d1: Dfa, d2: Dfa, limit: int = SUBSET_LIMIT, stage: str = STAGE_PRODUCT) -> Dfa:
    """Synchronous product over reachable state pairs; final iff both components are final.

    Raises:
        WidthMismatchError: If the alphabets differ.
        ResourceLimitError: If more than ``limit`` pairs are reachable.
    """
    _check_same_alphabet(d1, d2)
    n2 = d2.n_states
    t1 = d1.table.astype(np.int64)
    t2 = d2.table.astype(np.int64)
    start = d1.initial * n2 + d2.initial
    index: Dict[int, int] = {start: 0}
    codes = [start]
    rows: List[np.ndarray] = []
    i = 0
    while i < len(codes):
        code = codes[i]
        s1, s2 = divmod(code, n2)
        row_codes = t1[s1] * n2 + t2[s2]
        uniq, inverse = np.unique(row_codes, return_inverse=True)
        ids = np.empty(len(uniq), dtype=np.int32)
        for k, c in enumerate(uniq.tolist()):
            target = index.get(c)
            if target is None:
                target = len(codes)
                if target >= limit:
                    raise ResourceLimitError(f"product exceeds {limit} states", stage=stage)
                index[c] = target
                codes.append(c)
            ids[k] = target
        rows.append(ids[inverse.reshape(-1)])
        i += 1
    pairs = np.asarray(codes, dtype=np.int64)
    finals = d1.finals[pairs // n2] & d2.finals[pairs % n2]
    logger.debug("product of %d x %d states: %d reachable", d1.n_states, n2, len(codes))
    return Dfa(d1.props, 0, finals, np.vstack(rows))


def _var_mask(props: Sequence[str], names: Iterable[str]) -> int:
    positions = {name: i for i, name in enumerate(props)}
    mask = 0
    for name in names:
        if name not in positions:
            raise SynthError(f"cannot abstract unknown variable '{name}'", error_type="alphabet")
        mask |= 1 << positions[name]
    return mask


def exist_abstract(a: Automaton, names: Iterable[str]) -> Nfa:
    """Existential abstraction over the variables ``names``.

    A transition on letter sigma is allowed whenever the original automaton
    has it on some letter that differs from sigma only in ``names``. States,
    initial state and finals are unchanged.

    Raises:
        SynthError: If a name is not a proposition of the automaton.
    """
    nfa = Nfa.from_dfa(a) if isinstance(a, Dfa) else a
    mask = _var_mask(nfa.props, names)
    if not mask:
        return nfa
    n, w = nfa.n_states, nfa.width
    # bit i of the letter is axis (w - i) of the reshaped table
    cube = nfa.succ.reshape((n,) + (2,) * w)
    axes = tuple(w - i for i in range(w) if mask >> i & 1)
    merged = np.bitwise_or.reduce(cube, axis=axes, keepdims=True)
    succ = np.broadcast_to(merged, cube.shape).reshape(n, 1 << w).copy()
    return Nfa(nfa.props, nfa.initial, nfa.finals.copy(), succ)


def _subset_construction(nfa: Nfa, is_final: Callable[[int, int], bool], limit: int, stage: str) -> Dfa:
    final_mask = nfa.final_mask
    start = 1 << nfa.initial
    index: Dict[int, int] = {start: 0}
    subsets = [start]
    rows: List[np.ndarray] = []
    i = 0
    while i < len(subsets):
        subset = subsets[i]
        members = [s for s in range(subset.bit_length()) if subset >> s & 1]
        if members:
            row = np.bitwise_or.reduce(nfa.succ[members], axis=0)
        else:
            row = np.zeros(nfa.n_letters, dtype=object)
        uniq, inverse = np.unique(row, return_inverse=True)
        ids = np.empty(len(uniq), dtype=np.int32)
        for k, target_subset in enumerate(uniq.tolist()):
            target = index.get(target_subset)
            if target is None:
                target = len(subsets)
                if target >= limit:
                    raise ResourceLimitError(f"subset construction exceeds {limit} states", stage=stage)
                index[target_subset] = target
                subsets.append(target_subset)
            ids[k] = target
        rows.append(ids[inverse.reshape(-1)])
        i += 1
    finals = np.array([is_final(subset, final_mask) for subset in subsets], dtype=bool)
    logger.debug("%s: %d NFA states -> %d subsets", stage, nfa.n_states, len(subsets))
    return Dfa(nfa.props, 0, finals, np.vstack(rows))


def determinize(a: Automaton, limit: int = SUBSET_LIMIT, stage: str = STAGE_DETERMINIZE) -> Dfa:
    """Subset construction over reachable subsets; the empty subset is a non-final sink.

    Raises:
        ResourceLimitError: If more than ``limit`` subsets are reachable.
    """
    nfa = Nfa.from_dfa(a) if isinstance(a, Dfa) else a
    return _subset_construction(nfa, lambda subset, fin: bool(subset & fin), limit, stage)


def universal_abstract(d: Dfa, names: Iterable[str], limit: int = SUBSET_LIMIT,
                       stage: str = STAGE_BELIEF) -> Dfa:
    """Subset construction over the abstraction of d on ``names`` with the universal rule.

    A subset is final iff it is non-empty and contained in the finals of d, so
    a trace is accepted iff every rewriting of ``names`` is accepted by d.
    """
    nfa = exist_abstract(d, names)
    return _subset_construction(nfa, lambda subset, fin: subset != 0 and subset & ~fin == 0, limit, stage)


def restrict_alphabet(d: Dfa, width: int) -> Dfa:
    """Keep only the letters over the first ``width`` propositions (higher bits zero)."""
    if width > d.width:
        raise WidthMismatchError(f"cannot restrict width {d.width} automaton to width {width}")
    return reachable(Dfa(d.props[:width], d.initial, d.finals, d.table[:, :1 << width]))


def minimize(d: Dfa) -> Dfa:
    """Minimal DFA for the language of d, by partition refinement over reachable states."""
    d = reachable(d)
    classes = d.finals.astype(np.int64)
    count = len(np.unique(classes))
    while True:
        signature = np.column_stack([classes, classes[d.table]])
        _, refined = np.unique(signature, axis=0, return_inverse=True)
        refined = refined.reshape(-1)
        new_count = int(refined.max()) + 1
        classes = refined
        if new_count == count:
            break
        count = new_count
    # renumber so that the initial class comes first and the rest follow first occurrence
    order: Dict[int, int] = {int(classes[d.initial]): 0}
    for c in classes.tolist():
        if c not in order:
            order[c] = len(order)
    remap = np.array([order[c] for c in range(count)], dtype=np.int32)
    representative = np.zeros(count, dtype=np.int64)
    for state in range(d.n_states - 1, -1, -1):
        representative[remap[classes[state]]] = state
    table = remap[classes[d.table[representative]]]
    finals = d.finals[representative]
    logger.debug("minimized %d -> %d states", d.n_states, count)
    return Dfa(d.props, 0, finals, table)


def equivalent(d1: Dfa, d2: Dfa) -> bool:
    """Language equality over non-empty traces."""
    return is_empty(product(d1, complement(d2))) and is_empty(product(complement(d1), d2))


# --- DOT Export ---

def letter_cubes(letters: Iterable[int], width: int) -> List[Tuple[int, int]]:
    """Merge letters into cubes (value, care-mask) along one bit at a time."""
    full = (1 << width) - 1
    cubes: Set[Tuple[int, int]] = {(letter, full) for letter in letters}
    for bit in range(width):
        b = 1 << bit
        merged: Set[Tuple[int, int]] = set()
        for value, care in cubes:
            if care & b and not value & b and (value | b, care) in cubes:
                merged.add((value, care & ~b))
            elif care & b and value & b and (value & ~b, care) in cubes:
                continue
            else:
                merged.add((value, care))
        cubes = merged
    return sorted(cubes)


def cube_label(value: int, care: int, props: Sequence[str], partition: Optional['Partition']) -> str:
    if not care:
        return "true"
    parts = []
    for i, name in enumerate(props):
        if care >> i & 1:
            prefix = ""
            if partition is not None and name in partition.order:
                if name in partition.outputs:
                    prefix = "y:"
                elif name in partition.rel_inputs:
                    prefix = "x_rel:"
                else:
                    prefix = "x_unr:"
            parts.append(f"{prefix}{name}={value >> i & 1}")
    return " ".join(parts)


def to_dot(a: Automaton, partition: Optional['Partition'] = None, name: str = "automaton") -> str:
    """Render a in Graphviz DOT; final states are double circles.

    Edge labels list cubes of letters in the global proposition order, one per
    line, e.g. ``y:y=1 x_rel:a=1 x_unr:u=0``.
    """
    lines = [f'digraph "{name}" {{', "  rankdir=LR;", '  __start [shape=point, label=""];']
    for s in range(a.n_states):
        shape = "doublecircle" if a.finals[s] else "circle"
        lines.append(f"  {s} [shape={shape}];")
    lines.append(f"  __start -> {a.initial};")
    edges: Dict[Tuple[int, int], List[int]] = defaultdict(list)
    for s in range(a.n_states):
        for letter in range(a.n_letters):
            if isinstance(a, Dfa):
                edges[(s, int(a.table[s, letter]))].append(letter)
            else:
                targets = a.succ[s, letter]
                for t in range(int(targets).bit_length()):
                    if targets >> t & 1:
                        edges[(s, t)].append(letter)
    for (s, t), letters in sorted(edges.items()):
        label = "\\n".join(cube_label(v, c, a.props, partition) for v, c in letter_cubes(letters, a.width))
        lines.append(f'  {s} -> {t} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
