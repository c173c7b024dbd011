"""
LTLf to DFA Compilation by Formula Progression

This module compiles an LTLf formula into a DFA whose states are pairs
(residual formula, accepted flag). Reading a letter progresses the residual
under the assumption that more letters follow, and records whether the
prefix read so far satisfies the formula if the trace ended here.

Residuals are kept in a canonical form so that equivalent residuals are
usually shared: negation normal form, flattened sorted n-ary AND/OR without
duplicates, constant folding and complementary-literal detection.
"""

import logging
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from automata import Dfa
from cache import MemoTable
from config import Limits, DEFAULT_LIMITS
from constants import FORMULA_CACHE_MAX_SIZE, PROGRESSION_CACHE_MAX_SIZE, STAGE_DFA_MAIN
from errors import SynthError, ResourceLimitError, UnsupportedInputError
from logic import (
    Formula, Op, TRUE, FALSE, _make, atoms, has_quantifier, to_text, QUANTIFIER_OPS,
)

logger = logging.getLogger(__name__)


# --- Canonical Form ---

def mk_not(f: Formula) -> Formula:
    """Negation pushed to atoms."""
    op = f.op
    if op is Op.TRUE:
        return FALSE
    if op is Op.FALSE:
        return TRUE
    if op is Op.ATOM:
        return _make(Op.NOT, (f,))
    if op is Op.NOT:
        return f.args[0]
    if op is Op.AND:
        return mk_or([mk_not(g) for g in f.args])
    if op is Op.OR:
        return mk_and([mk_not(g) for g in f.args])
    if op is Op.NEXT:
        return mk_wnext(mk_not(f.args[0]))
    if op is Op.WNEXT:
        return mk_next(mk_not(f.args[0]))
    if op is Op.UNTIL:
        return mk_release(mk_not(f.args[0]), mk_not(f.args[1]))
    if op is Op.RELEASE:
        return mk_until(mk_not(f.args[0]), mk_not(f.args[1]))
    if op is Op.EVENTUALLY:
        return mk_always(mk_not(f.args[0]))
    if op is Op.ALWAYS:
        return mk_eventually(mk_not(f.args[0]))
    raise UnsupportedInputError(f"cannot negate node {op.name} during compilation")


def _mk_junction(op: Op, parts: Iterable[Formula]) -> Formula:
    unit, zero = (TRUE, FALSE) if op is Op.AND else (FALSE, TRUE)
    flat: Dict[Formula, None] = {}
    for part in parts:
        if part == zero:
            return zero
        if part == unit:
            continue
        if part.op is op:
            for inner in part.args:
                flat[inner] = None
        else:
            flat[part] = None
    if not flat:
        return unit
    literals = {g for g in flat if g.op is Op.ATOM}
    for g in flat:
        if g.op is Op.NOT and g.args[0] in literals:
            return zero
    if len(flat) == 1:
        return next(iter(flat))
    return _make(op, tuple(sorted(flat, key=to_text)))


def mk_and(parts: Iterable[Formula]) -> Formula:
    return _mk_junction(Op.AND, parts)


def mk_or(parts: Iterable[Formula]) -> Formula:
    return _mk_junction(Op.OR, parts)


def mk_next(f: Formula) -> Formula:
    return FALSE if f == FALSE else _make(Op.NEXT, (f,))


def mk_wnext(f: Formula) -> Formula:
    return TRUE if f == TRUE else _make(Op.WNEXT, (f,))


def mk_until(f: Formula, g: Formula) -> Formula:
    if g == TRUE or g == FALSE or f == FALSE:
        return g
    return _make(Op.UNTIL, (f, g))


def mk_release(f: Formula, g: Formula) -> Formula:
    if g == TRUE or g == FALSE or f == TRUE:
        return g
    return _make(Op.RELEASE, (f, g))


def mk_eventually(f: Formula) -> Formula:
    if f == TRUE or f == FALSE or f.op is Op.EVENTUALLY:
        return f
    return _make(Op.EVENTUALLY, (f,))


def mk_always(f: Formula) -> Formula:
    if f == TRUE or f == FALSE or f.op is Op.ALWAYS:
        return f
    return _make(Op.ALWAYS, (f,))


_canonical_cache = MemoTable("canonical", FORMULA_CACHE_MAX_SIZE)


def canonical(f: Formula) -> Formula:
    """Canonical negation normal form of a quantifier-free formula.

    Raises:
        UnsupportedInputError: If f contains quantifiers.
    """
    cached = _canonical_cache.lookup(f)
    if cached is not None:
        return cached
    op = f.op
    if op in QUANTIFIER_OPS:
        raise UnsupportedInputError("quantified formulas are compiled by qltlf2dfa")
    if op is Op.TRUE or op is Op.FALSE or op is Op.ATOM:
        result = f
    elif op is Op.NOT:
        result = mk_not(canonical(f.args[0]))
    elif op is Op.AND:
        result = mk_and([canonical(g) for g in f.args])
    elif op is Op.OR:
        result = mk_or([canonical(g) for g in f.args])
    elif op is Op.NEXT:
        result = mk_next(canonical(f.args[0]))
    elif op is Op.WNEXT:
        result = mk_wnext(canonical(f.args[0]))
    elif op is Op.UNTIL:
        result = mk_until(canonical(f.args[0]), canonical(f.args[1]))
    elif op is Op.RELEASE:
        result = mk_release(canonical(f.args[0]), canonical(f.args[1]))
    elif op is Op.EVENTUALLY:
        result = mk_eventually(canonical(f.args[0]))
    else:
        result = mk_always(canonical(f.args[0]))
    return _canonical_cache.store(f, result)


# --- Progression ---

class Progressor:
    """Progression of canonical formulas over integer letters of a fixed proposition order.

    Results are memoized on (formula, letter restricted to the atoms the
    formula reads at the current instant).
    """

    def __init__(self, props: Sequence[str]):
        self.props = tuple(props)
        self._positions = {name: i for i, name in enumerate(self.props)}
        self._now_masks: Dict[Formula, int] = {}
        self._more = MemoTable("progress-more", PROGRESSION_CACHE_MAX_SIZE)
        self._last = MemoTable("progress-last", PROGRESSION_CACHE_MAX_SIZE)

    def bit(self, name: str) -> int:
        try:
            return 1 << self._positions[name]
        except KeyError:
            raise SynthError(f"atom '{name}' is not in the alphabet {list(self.props)}",
                             error_type="alphabet") from None

    def now_mask(self, f: Formula) -> int:
        """Bits of the atoms f reads at the current instant (not under a next operator)."""
        mask = self._now_masks.get(f)
        if mask is None:
            if f.op is Op.ATOM:
                mask = self.bit(f.name)
            elif f.op is Op.NEXT or f.op is Op.WNEXT:
                mask = 0
            else:
                mask = 0
                for child in f.args:
                    mask |= self.now_mask(child)
            self._now_masks[f] = mask
        return mask

    def more(self, f: Formula, letter: int) -> Formula:
        """Residual of f after reading letter, assuming at least one more letter follows."""
        key = (f, letter & self.now_mask(f))
        cached = self._more.lookup(key)
        if cached is not None:
            return cached
        op = f.op
        if op is Op.TRUE or op is Op.FALSE:
            result = f
        elif op is Op.ATOM:
            result = TRUE if letter & self.bit(f.name) else FALSE
        elif op is Op.NOT:
            result = FALSE if letter & self.bit(f.args[0].name) else TRUE
        elif op is Op.AND:
            result = mk_and([self.more(g, letter) for g in f.args])
        elif op is Op.OR:
            result = mk_or([self.more(g, letter) for g in f.args])
        elif op is Op.NEXT or op is Op.WNEXT:
            result = f.args[0]
        elif op is Op.UNTIL:
            left, right = f.args
            result = mk_or([self.more(right, letter), mk_and([self.more(left, letter), f])])
        elif op is Op.RELEASE:
            left, right = f.args
            result = mk_and([self.more(right, letter), mk_or([self.more(left, letter), f])])
        elif op is Op.EVENTUALLY:
            result = mk_or([self.more(f.args[0], letter), f])
        elif op is Op.ALWAYS:
            result = mk_and([self.more(f.args[0], letter), f])
        else:
            raise UnsupportedInputError(f"cannot progress node {op.name}")
        return self._more.store(key, result)

    def last(self, f: Formula, letter: int) -> bool:
        """Truth of f on the one-letter trace [letter]."""
        key = (f, letter & self.now_mask(f))
        cached = self._last.lookup(key)
        if cached is not None:
            return cached
        op = f.op
        if op is Op.TRUE:
            result = True
        elif op is Op.FALSE:
            result = False
        elif op is Op.ATOM:
            result = bool(letter & self.bit(f.name))
        elif op is Op.NOT:
            result = not self.last(f.args[0], letter)
        elif op is Op.AND:
            result = all(self.last(g, letter) for g in f.args)
        elif op is Op.OR:
            result = any(self.last(g, letter) for g in f.args)
        elif op is Op.NEXT:
            result = False
        elif op is Op.WNEXT:
            result = True
        elif op is Op.UNTIL or op is Op.RELEASE:
            result = self.last(f.args[1], letter)
        elif op is Op.EVENTUALLY or op is Op.ALWAYS:
            result = self.last(f.args[0], letter)
        else:
            raise UnsupportedInputError(f"cannot progress node {op.name}")
        return self._last.store(key, result)

    def memo_stats(self) -> str:
        return f"{self._more.stats()}; {self._last.stats()}"

    def encode(self, letter: Iterable[str]) -> int:
        bits = 0
        for name in letter:
            bits |= self.bit(name)
        return bits


def _progressor_for(f: Formula, letter: Iterable[str]) -> Tuple[Progressor, int]:
    letter = frozenset(letter)
    progressor = Progressor(sorted(atoms(f) | letter))
    return progressor, progressor.encode(letter)


def progress_more(f: Formula, letter: Iterable[str]) -> Formula:
    """Residual g of f after the letter, such that t |= f iff tail(t) |= g for traces of length >= 2.

    Args:
        f: Quantifier-free formula.
        letter: Names of the propositions true at the first instant.

    Returns:
        The canonical residual formula.
    """
    progressor, bits = _progressor_for(f, letter)
    return progressor.more(canonical(f), bits)


def progress_last(f: Formula, letter: Iterable[str]) -> bool:
    """Truth of f on the single-letter trace [letter]."""
    progressor, bits = _progressor_for(f, letter)
    return progressor.last(canonical(f), bits)


# --- Compilation ---

def check_width(width: int, limits: Limits, stage: str) -> None:
    """Log a warning above the warning width and fail above the cap."""
    if width > limits.max_width:
        raise ResourceLimitError(
            f"alphabet width {width} exceeds cap {limits.max_width} (2^{width} letters per state)",
            stage=stage)
    if width > limits.warn_width:
        logger.warning("alphabet width %d: every state enumerates %d letters", width, 1 << width)


def _submasks(mask: int) -> List[int]:
    subs = [0]
    sub = mask
    while sub:
        subs.append(sub)
        sub = (sub - 1) & mask
    return subs


def ltlf_to_dfa(f: Formula, props: Sequence[str], limits: Limits = DEFAULT_LIMITS,
                stage: str = STAGE_DFA_MAIN, progressor: Optional[Progressor] = None) -> Dfa:
    """Compile a quantifier-free LTLf formula into a DFA over props.

    States are reachable pairs (residual, accepted) from (f, False); a state is
    final iff its accepted flag is set, so the initial state is never final.

    Args:
        f: Formula whose atoms are all in props.
        props: Proposition order of the alphabet.
        limits: Width cap and state limit.
        stage: Stage name reported in resource errors.
        progressor: Optional shared progressor over the same props.

    Raises:
        ResourceLimitError: If the width exceeds the cap or states exceed the limit.
        UnsupportedInputError: If f contains quantifiers.
    """
    props = tuple(props)
    check_width(len(props), limits, stage)
    if has_quantifier(f):
        raise UnsupportedInputError("quantified formulas are compiled by qltlf2dfa")
    missing = atoms(f) - set(props)
    if missing:
        raise SynthError(f"atoms {sorted(missing)} are not in the alphabet {list(props)}",
                         error_type="alphabet")
    if progressor is None or progressor.props != props:
        progressor = Progressor(props)

    n_letters = 1 << len(props)
    letters = np.arange(n_letters, dtype=np.int64)
    lut = np.zeros(n_letters, dtype=np.int32)

    start = (canonical(f), False)
    index: Dict[Tuple[Formula, bool], int] = {start: 0}
    states: List[Tuple[Formula, bool]] = [start]
    row_cache: Dict[Formula, np.ndarray] = {}
    rows: List[np.ndarray] = []

    def state_id(key: Tuple[Formula, bool]) -> int:
        sid = index.get(key)
        if sid is None:
            sid = len(states)
            if sid >= limits.dfa_state_limit:
                raise ResourceLimitError(
                    f"formula DFA exceeds {limits.dfa_state_limit} states", stage=stage)
            index[key] = sid
            states.append(key)
        return sid

    i = 0
    while i < len(states):
        residual, _ = states[i]
        row = row_cache.get(residual)
        if row is None:
            mask = progressor.now_mask(residual)
            for sub in _submasks(mask):
                target = (progressor.more(residual, sub), progressor.last(residual, sub))
                lut[sub] = state_id(target)
            row = lut[letters & mask]
            row_cache[residual] = row
        rows.append(row)
        i += 1

    finals = np.array([accepted for _, accepted in states], dtype=bool)
    logger.info("%s: compiled %d states over %d propositions", stage, len(states), len(props))
    logger.debug("%s: %d distinct residuals; %s", stage, len(row_cache), progressor.memo_stats())
    return Dfa(props, 0, finals, np.vstack(rows))
