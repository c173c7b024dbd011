"""
DFA Reachability Games

This module solves the reachability game played on an arena DFA, extracts a
finite-state strategy from the solution and verifies strategies exhaustively
against the main/backup acceptance conditions.

Each round the agent commits its outputs Y first, then the environment
reveals the inputs X. A letter is ``y | x << len(Y)`` in the partition's
global order, so the output bits are the low bits.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from automata import Dfa, letter_cubes, cube_label, decode_letter
from config import Limits, DEFAULT_LIMITS
from errors import StrategyError, WidthMismatchError, EnumerationCapError
from logic import Formula, Partition, Trace, eval_trace, iter_rewritings
from ltlf2dfa import Progressor, canonical

logger = logging.getLogger(__name__)


# --- Game Solving ---

@dataclass(frozen=True)
class GameResult:
    """Solution of the reachability game.

    Attributes:
        winning: States from which the agent forces a final state.
        realizable: Whether the initial state can force a final state in at least one round.
        rank: Round at which each winning state entered the fixpoint (0 for finals).
    """
    winning: FrozenSet[int]
    realizable: bool
    rank: Dict[int, int] = field(hash=False, compare=False)
    rounds: int = 0


def _check_arena(arena: Dfa, p: Partition) -> None:
    if arena.width != p.width:
        raise WidthMismatchError(f"arena width {arena.width} differs from partition width {p.width}")
    if arena.props != p.order:
        raise WidthMismatchError(f"arena propositions {list(arena.props)} are not in partition order")


def _game_table(arena: Dfa, p: Partition) -> np.ndarray:
    """Transition table reshaped to (states, input letters, output letters)."""
    return arena.table.reshape(arena.n_states, 1 << len(p.inputs), 1 << len(p.outputs))


def _controllable_predecessors(moves: np.ndarray, target: np.ndarray) -> np.ndarray:
    """States with some output letter whose every input completion lands in target."""
    return target[moves].all(axis=1).any(axis=1)


def solve_game(arena: Dfa, p: Partition) -> GameResult:
    """Least fixpoint of the output-first controllable predecessor from the final states.

    The instance is realizable iff the initial state is a controllable
    predecessor of the winning set, which excludes the empty trace.

    Raises:
        WidthMismatchError: If the arena alphabet does not match the partition.
    """
    _check_arena(arena, p)
    moves = _game_table(arena, p)
    winning = arena.finals.copy()
    rank = np.where(winning, 0, -1)
    rounds = 0
    while True:
        fresh = _controllable_predecessors(moves, winning) & ~winning
        if not fresh.any():
            break
        rounds += 1
        rank[fresh] = rounds
        winning |= fresh
        logger.debug("fixpoint round %d: %d new states", rounds, int(fresh.sum()))
    realizable = bool(_controllable_predecessors(moves, winning)[arena.initial])
    states = np.flatnonzero(winning).tolist()
    logger.info("game: %d of %d states winning after %d rounds, realizable=%s",
                len(states), arena.n_states, rounds, realizable)
    return GameResult(
        winning=frozenset(states),
        realizable=realizable,
        rank={s: int(rank[s]) for s in states},
        rounds=rounds,
    )


# --- Strategies ---

@dataclass(frozen=True)
class Strategy:
    """Output-first finite-state strategy.

    Machine states are arena states. ``outputs[m]`` is the output letter
    (bits over Y) played in m; ``steps[m][x]`` is the successor after input
    letter x; reaching a state in ``stops`` after a round declares the goal
    satisfied at that round.
    """
    partition: Partition
    initial: int
    outputs: Dict[int, int] = field(hash=False, compare=False)
    steps: Dict[int, Tuple[int, ...]] = field(hash=False, compare=False)
    stops: FrozenSet[int] = frozenset()

    @property
    def states(self) -> List[int]:
        return sorted(set(self.outputs) | set(self.stops))

    def output_names(self, m: int) -> FrozenSet[str]:
        return decode_letter(self.outputs[m], self.partition.outputs)

    def step(self, m: int, x: int) -> int:
        return self.steps[m][x]

    def letter(self, m: int, x: int) -> int:
        return self.outputs[m] | x << len(self.partition.outputs)

    def encode_inputs(self, inputs: Iterable[str]) -> int:
        positions = {name: i for i, name in enumerate(self.partition.inputs)}
        bits = 0
        for name in inputs:
            if name not in positions:
                raise WidthMismatchError(f"'{name}' is not an input")
            bits |= 1 << positions[name]
        return bits

    def run(self, inputs: Sequence) -> Tuple[Trace, Optional[int]]:
        """Play against an input sequence.

        Args:
            inputs: Input letters, as integers over X or iterables of input names.

        Returns:
            The trace played (cut at the stop round) and the stop round, or None
            if the strategy did not stop within the given inputs.
        """
        m = self.initial
        played: List[frozenset] = []
        for k, x in enumerate(inputs, start=1):
            bits = x if isinstance(x, (int, np.integer)) else self.encode_inputs(x)
            played.append(decode_letter(self.letter(m, int(bits)), self.partition.order))
            m = self.step(m, int(bits))
            if m in self.stops:
                return tuple(played), k
        return tuple(played), None

    def to_dot(self, name: str = "strategy") -> str:
        """Render in DOT: outputs on nodes, input cubes on edges, stop states double-circled."""
        p = self.partition
        lines = [f'digraph "{name}" {{', "  rankdir=LR;", '  __start [shape=point, label=""];']
        for m in self.states:
            shape = "doublecircle" if m in self.stops else "circle"
            if m in self.outputs:
                out = " ".join(f"{y}={self.outputs[m] >> i & 1}" for i, y in enumerate(p.outputs))
                label = f"m{m}\\n{out}" if out else f"m{m}"
            else:
                label = f"m{m}"
            lines.append(f'  {m} [shape={shape}, label="{label}"];')
        lines.append(f"  __start -> {self.initial};")
        for m in sorted(self.steps):
            targets: Dict[int, List[int]] = {}
            for x, target in enumerate(self.steps[m]):
                targets.setdefault(target, []).append(x)
            for target, xs in sorted(targets.items()):
                label = "\\n".join(cube_label(v, c, p.inputs, p)
                                   for v, c in letter_cubes(xs, len(p.inputs)))
                lines.append(f'  {m} -> {target} [label="{label}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _lex_key(y: int, width: int) -> Tuple[int, ...]:
    return tuple(y >> i & 1 for i in range(width))


def extract_strategy(arena: Dfa, result: GameResult, p: Partition) -> Strategy:
    """Build the strategy that plays, in each state, the output minimizing the worst successor rank.

    Ties are broken by the lexicographically smallest output bit tuple, first
    output bit first.

    Raises:
        StrategyError: If the result is unrealizable or a non-final winning state
            has no rank-decreasing output.
    """
    if not result.realizable:
        raise StrategyError("cannot extract a strategy from an unrealizable game")
    _check_arena(arena, p)
    moves = _game_table(arena, p)
    n_outputs = len(p.outputs)
    big = arena.n_states + 1
    rank = np.full(arena.n_states, big, dtype=np.int64)
    for state, r in result.rank.items():
        rank[state] = r
    output_keys = sorted(range(1 << n_outputs), key=lambda y: _lex_key(y, n_outputs))

    outputs: Dict[int, int] = {}
    steps: Dict[int, Tuple[int, ...]] = {}
    stops = set()
    queue = deque([arena.initial])
    seen = {arena.initial}
    while queue:
        m = queue.popleft()
        worst = rank[moves[m]].max(axis=0)
        best_y = min(output_keys, key=lambda y: worst[y])
        if worst[best_y] >= big:
            raise StrategyError(f"state {m} has no output keeping the play winning")
        if not arena.finals[m] and worst[best_y] >= rank[m]:
            raise StrategyError(f"rank does not decrease from state {m}")
        outputs[m] = best_y
        row = tuple(int(t) for t in moves[m, :, best_y])
        steps[m] = row
        for target in row:
            if arena.finals[target]:
                # play ends after this round
                stops.add(target)
            elif target not in seen:
                seen.add(target)
                queue.append(target)
    logger.info("strategy: %d machine states, %d stop states", len(outputs), len(stops))
    return Strategy(p, arena.initial, outputs, steps, frozenset(stops))


# --- Verification ---

@dataclass(frozen=True)
class VerifyResult:
    passed: bool
    counterexample: Optional[Tuple[FrozenSet[str], ...]] = None
    reason: str = ""
    plays: int = 0


class _PlayChecker:
    """Checks both acceptance conditions along a play, letter by letter."""

    def __init__(self, main: Formula, backup: Formula, p: Partition, literal: bool, max_bits: int):
        self.main = main
        self.backup = backup
        self.p = p
        self.literal = literal
        self.max_bits = max_bits
        self.progressor = Progressor(p.order)
        unr = p.unr_mask
        subs = [0]
        sub = unr
        while sub:
            subs.append(sub)
            sub = (sub - 1) & unr
        self.unr_mask = unr
        self.unr_variants = subs

    def start(self) -> Tuple[Formula, FrozenSet[Formula]]:
        return canonical(self.main), frozenset((canonical(self.backup),))

    def rewrites(self, letter: int) -> List[int]:
        base = letter & ~self.unr_mask
        return [base | sub for sub in self.unr_variants]

    def advance(self, state: Tuple[Formula, FrozenSet[Formula]], letter: int):
        residual, backups = state
        more = self.progressor.more
        return (more(residual, letter),
                frozenset(more(r, l) for r in backups for l in self.rewrites(letter)))

    def accept(self, state, letter: int, trace: Trace) -> Tuple[bool, bool]:
        if self.literal:
            main_ok = eval_trace(trace, 1, self.main)
            backup_ok = all(eval_trace(t, 1, self.backup)
                            for t in iter_rewritings(trace, self.p.unr_inputs, self.max_bits))
            return main_ok, backup_ok
        residual, backups = state
        last = self.progressor.last
        return (last(residual, letter),
                all(last(r, l) for r in backups for l in self.rewrites(letter)))


def verify_strategy(s: Strategy, main: Formula, backup: Formula, p: Partition, horizon: int,
                    limits: Limits = DEFAULT_LIMITS, literal: bool = False) -> VerifyResult:
    """Exhaustively check a strategy against every environment input sequence.

    Each play is cut at the strategy's stop round k. The main formula must hold
    on the trace and the backup formula on every rewriting of its unreliable
    inputs, both at the same k. Input sequences are enumerated depth-first in
    increasing letter order, so the reported counterexample is the
    lexicographically first one. Without ``literal``, a (machine state,
    progression state) pair already checked with no more remaining rounds is
    not explored again; the progression state determines every future verdict.

    Args:
        s: Strategy to check.
        main, backup: The two formulas.
        p: Partition.
        horizon: Maximal number of rounds before a play must stop.
        limits: ``enumeration_bits`` caps the number of checked plays (and,
            with ``literal``, the rewritings per play).
        literal: Evaluate stopped plays with eval_trace and the explicit
            rewriting enumeration instead of incremental progression.

    The cap counts plays that reach a stop state, not input sequences: a
    strategy that stops early passes even when len(p.inputs) * horizon
    exceeds ``enumeration_bits``, and the memoized search may check far
    fewer plays than the 2**(len(p.inputs) * horizon) sequences it covers.

    Raises:
        EnumerationCapError: If more than 2**enumeration_bits plays are checked.
    """
    checker = _PlayChecker(main, backup, p, literal, limits.enumeration_bits)
    n_inputs = 1 << len(p.inputs)
    max_plays = 1 << limits.enumeration_bits
    plays = 0
    inputs: List[int] = []
    letters: List[int] = []
    passed: Dict[Tuple[int, object], int] = {}  # (m, state) -> fewest remaining rounds that passed

    def counterexample() -> Tuple[FrozenSet[str], ...]:
        return tuple(decode_letter(x, p.inputs) for x in inputs)

    def explore(m: int, state) -> Optional[VerifyResult]:
        nonlocal plays
        remaining = horizon - len(inputs)
        key = (m, state)
        if not checker.literal and passed.get(key, horizon + 1) <= remaining:
            return None
        for x in range(n_inputs):
            letter = s.letter(m, x)
            target = s.step(m, x)
            inputs.append(x)
            letters.append(letter)
            try:
                if target in s.stops:
                    plays += 1
                    if plays > max_plays:
                        raise EnumerationCapError(f"verification exceeds 2^{limits.enumeration_bits} plays")
                    trace = tuple(decode_letter(l, p.order) for l in letters) if checker.literal else ()
                    main_ok, backup_ok = checker.accept(state, letter, trace)
                    if not main_ok:
                        return VerifyResult(False, counterexample(), "main formula violated", plays)
                    if not backup_ok:
                        return VerifyResult(False, counterexample(),
                                            "backup formula violated under some rewriting", plays)
                elif len(inputs) >= horizon:
                    return VerifyResult(False, counterexample(),
                                        f"strategy does not stop within {horizon} rounds", plays)
                else:
                    failure = explore(target, checker.advance(state, letter))
                    if failure is not None:
                        return failure
            finally:
                inputs.pop()
                letters.pop()
        passed[key] = remaining
        return None

    if horizon < 1:
        return VerifyResult(False, (), "horizon must allow at least one round", 0)
    failure = explore(s.initial, checker.start())
    if failure is not None:
        logger.warning("verification failed: %s", failure.reason)
        return failure
    logger.info("verification passed over %d plays", plays)
    return VerifyResult(True, None, "", plays)
