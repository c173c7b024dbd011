"""
Synthesis Under Unreliable Inputs

This module builds the game arena for a main/backup specification pair in
one of three interchangeable ways and runs the game on it:

- direct: product of the main DFA with the complement of the determinized,
  existentially abstracted DFA of the negated backup formula;
- belief: product of the main DFA with the belief-state automaton of the
  backup DFA over the unreliable inputs;
- qltlf: the DFA of main & forall U1..Un. backup, compiled block by block.

All three arenas recognize the same traces: those satisfying the main formula
whose every rewriting of the unreliable inputs satisfies the backup formula.
"""

import logging
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, Optional

from automata import (
    Automaton, Dfa, complement, determinize, exist_abstract, minimize as minimize_dfa, product,
    restrict_alphabet, universal_abstract,
)
from config import Limits, DEFAULT_LIMITS, normalize_mode
from constants import (
    MODE_DIRECT, MODE_BELIEF, STAGE_DFA_MAIN, STAGE_DFA_BACKUP, STAGE_ABSTRACTION,
    STAGE_DETERMINIZE, STAGE_BELIEF, STAGE_PRODUCT, STAGE_GAME,
)
from errors import PartitionError, ResourceLimitError, WidthMismatchError
from game import GameResult, Strategy, solve_game, extract_strategy
from logic import (
    Formula, Partition, atoms, not_, and_, forall, to_pnf, parse_ltlf_file, parse_partition,
)
from ltlf2dfa import check_width, ltlf_to_dfa
from qltlf2dfa import qltlf_to_dfa

logger = logging.getLogger(__name__)

StageCallback = Callable[[str, Automaton], None]


@dataclass(frozen=True)
class SynthInstance:
    """Main formula, backup formula and the partition they are read over."""
    main: Formula
    backup: Formula
    partition: Partition

    def __post_init__(self):
        stray = (atoms(self.main) | atoms(self.backup)) - set(self.partition.order)
        if stray:
            raise PartitionError(f"atoms not declared in the partition: {' '.join(sorted(stray))}")

    @classmethod
    def from_text(cls, ltlf_text: str, part_text: str) -> 'SynthInstance':
        main, backup = parse_ltlf_file(ltlf_text)
        return cls(main, backup, parse_partition(part_text))


# --- Stage Bookkeeping ---

class StageRecorder:
    """Collects per-stage state counts and timings, and names the stage of resource failures."""

    def __init__(self, on_stage: Optional[StageCallback] = None):
        self.on_stage = on_stage
        self.states: Dict[str, int] = {}
        self.timings: Dict[str, float] = {}

    @contextmanager
    def stage(self, name: str) -> Iterator[None]:
        start = time.perf_counter()
        try:
            yield
        except ResourceLimitError as exc:
            if exc.stage is None:
                exc.stage = name
            raise
        finally:
            elapsed = (time.perf_counter() - start) * 1000.0
            self.timings[name] = self.timings.get(name, 0.0) + elapsed

    def record(self, name: str, automaton: Automaton) -> None:
        self.states[name] = automaton.n_states
        logger.info("%s: %d states", name, automaton.n_states)
        if self.on_stage is not None:
            self.on_stage(name, automaton)


# --- Arena Constructions ---

def _main_dfa(inst: SynthInstance, limits: Limits, recorder: StageRecorder,
              main_dfa: Optional[Dfa]) -> Dfa:
    if main_dfa is not None:
        if main_dfa.props != inst.partition.order:
            raise WidthMismatchError("shared main DFA is not over the partition order")
        recorder.record(STAGE_DFA_MAIN, main_dfa)
        return main_dfa
    with recorder.stage(STAGE_DFA_MAIN):
        dfa = ltlf_to_dfa(inst.main, inst.partition.order, limits, stage=STAGE_DFA_MAIN)
    recorder.record(STAGE_DFA_MAIN, dfa)
    return dfa


def build_direct_arena(inst: SynthInstance, limits: Limits = DEFAULT_LIMITS,
                       main_dfa: Optional[Dfa] = None,
                       recorder: Optional[StageRecorder] = None) -> Dfa:
    """Arena = main DFA x complement(determinize(exist_abstract(DFA of !backup, X_unr)))."""
    recorder = recorder or StageRecorder()
    p = inst.partition
    main = _main_dfa(inst, limits, recorder, main_dfa)
    with recorder.stage(STAGE_DFA_BACKUP):
        negated = ltlf_to_dfa(not_(inst.backup), p.order, limits, stage=STAGE_DFA_BACKUP)
    recorder.record(STAGE_DFA_BACKUP, negated)
    with recorder.stage(STAGE_ABSTRACTION):
        abstracted = exist_abstract(negated, p.unr_inputs)
    recorder.record(STAGE_ABSTRACTION, abstracted)
    with recorder.stage(STAGE_DETERMINIZE):
        backup = complement(determinize(abstracted, limit=limits.subset_limit, stage=STAGE_DETERMINIZE))
    recorder.record(STAGE_DETERMINIZE, backup)
    with recorder.stage(STAGE_PRODUCT):
        arena = product(main, backup, limit=limits.subset_limit)
    recorder.record(STAGE_PRODUCT, arena)
    return arena


def belief_construct(d: Dfa, p: Partition, limits: Limits = DEFAULT_LIMITS) -> Dfa:
    """Belief-state automaton of d over the unreliable inputs of p.

    A belief is the set of states reachable under every rewriting of the
    unreliable inputs; it is final iff all of its members are final.

    Raises:
        WidthMismatchError: If d is not over the partition order.
        ResourceLimitError: If more than ``limits.subset_limit`` beliefs are reachable.
    """
    if d.props != p.order:
        raise WidthMismatchError(f"automaton propositions {list(d.props)} are not in partition order")
    return universal_abstract(d, p.unr_inputs, limit=limits.subset_limit, stage=STAGE_BELIEF)


def build_belief_arena(inst: SynthInstance, limits: Limits = DEFAULT_LIMITS,
                       main_dfa: Optional[Dfa] = None,
                       recorder: Optional[StageRecorder] = None) -> Dfa:
    """Arena = main DFA x belief_construct(DFA of backup)."""
    recorder = recorder or StageRecorder()
    p = inst.partition
    main = _main_dfa(inst, limits, recorder, main_dfa)
    with recorder.stage(STAGE_DFA_BACKUP):
        backup = ltlf_to_dfa(inst.backup, p.order, limits, stage=STAGE_DFA_BACKUP)
    recorder.record(STAGE_DFA_BACKUP, backup)
    with recorder.stage(STAGE_BELIEF):
        belief = belief_construct(backup, p, limits)
    recorder.record(STAGE_BELIEF, belief)
    with recorder.stage(STAGE_PRODUCT):
        arena = product(main, belief, limit=limits.subset_limit)
    recorder.record(STAGE_PRODUCT, arena)
    return arena


def qltlf_reduction(inst: SynthInstance) -> Formula:
    """The formula main & forall U1. ... forall Un. backup over the unreliable inputs."""
    body = inst.backup
    for name in reversed(inst.partition.unr_inputs):
        body = forall(name, body)
    return and_(inst.main, body)


def build_qltlf_arena(inst: SynthInstance, limits: Limits = DEFAULT_LIMITS,
                      recorder: Optional[StageRecorder] = None, minimize: bool = False) -> Dfa:
    """Arena = DFA of the prenex form of main & forall X_unr. backup.

    Unreliable inputs that also occur in the main formula are renamed apart
    by the prenex conversion; the renamed copies are appended to the alphabet
    during compilation and dropped afterwards.
    """
    recorder = recorder or StageRecorder()
    p = inst.partition
    qf = to_pnf(qltlf_reduction(inst))
    extra = tuple(v for v in qf.variables if v not in p.order)
    props = p.order + extra
    check_width(len(props), limits, STAGE_DFA_MAIN)
    logger.debug("qltlf reduction: prefix %s, %d alternations",
                 " ".join(f"{q.value} {v}" for q, v in qf.prefix), qf.alternation_count)
    with recorder.stage(STAGE_ABSTRACTION):
        full = qltlf_to_dfa(qf, props, limits, minimize=minimize, stage=STAGE_DFA_MAIN)
    recorder.record(STAGE_ABSTRACTION, full)
    with recorder.stage(STAGE_PRODUCT):
        arena = restrict_alphabet(full, p.width)
    recorder.record(STAGE_PRODUCT, arena)
    return arena


# --- Synthesis ---

@dataclass
class SynthResult:
    """Verdict, strategy and per-stage statistics of one synthesis run."""
    mode: str
    realizable: bool
    arena: Dfa
    game: GameResult
    strategy: Optional[Strategy] = None
    states: Dict[str, int] = field(default_factory=dict)
    timings: Dict[str, float] = field(default_factory=dict)

    @property
    def construction_ms(self) -> float:
        return sum(ms for stage, ms in self.timings.items() if stage != STAGE_GAME)

    @property
    def game_ms(self) -> float:
        return self.timings.get(STAGE_GAME, 0.0)

    @property
    def winning_size(self) -> int:
        return len(self.game.winning)


def build_arena(inst: SynthInstance, mode: str, limits: Limits = DEFAULT_LIMITS,
                main_dfa: Optional[Dfa] = None, recorder: Optional[StageRecorder] = None,
                minimize: bool = False) -> Dfa:
    mode = normalize_mode(mode)
    if mode == MODE_DIRECT:
        return build_direct_arena(inst, limits, main_dfa, recorder)
    if mode == MODE_BELIEF:
        return build_belief_arena(inst, limits, main_dfa, recorder)
    return build_qltlf_arena(inst, limits, recorder, minimize=minimize)


def synth(inst: SynthInstance, mode: str = MODE_DIRECT, limits: Limits = DEFAULT_LIMITS,
          main_dfa: Optional[Dfa] = None, on_stage: Optional[StageCallback] = None,
          minimize: bool = False) -> SynthResult:
    """Decide realizability under unreliable inputs and extract a strategy.

    Args:
        inst: The instance.
        mode: "direct", "belief" or "qltlf" (alias "mso").
        limits: Resource caps.
        main_dfa: Precompiled DFA of the main formula over the partition order,
            shared between the direct and belief modes.
        on_stage: Called with (stage name, automaton) after each stage.
        minimize: Minimize the arena before solving the game.

    Raises:
        ResourceLimitError: Naming the stage that exceeded its limit.
    """
    mode = normalize_mode(mode)
    recorder = StageRecorder(on_stage)
    arena = build_arena(inst, mode, limits, main_dfa, recorder, minimize)
    if minimize:
        with recorder.stage(STAGE_PRODUCT):
            arena = minimize_dfa(arena)
        recorder.record(STAGE_PRODUCT, arena)
    with recorder.stage(STAGE_GAME):
        game = solve_game(arena, inst.partition)
        strategy = extract_strategy(arena, game, inst.partition) if game.realizable else None
    recorder.states[STAGE_GAME] = len(game.winning)
    logger.info("%s: %s", mode, "realizable" if game.realizable else "unrealizable")
    return SynthResult(mode, game.realizable, arena, game, strategy,
                       dict(recorder.states), dict(recorder.timings))
