"""Tests for the three arena constructions and the synthesis driver."""
import random

import pytest

from helpers import all_traces, observation_realizable
from automata import accepts, equivalent, is_empty
from benchmarks import gen_hiker, gen_named_trap, gen_random, random_formula
from config import Limits
from errors import PartitionError, ResourceLimitError, WidthMismatchError
from game import solve_game
from logic import (
    TRUE, Partition, always, and_, atom, eventually, expand_unreliable, iff, next_, not_, or_, satisfies,
)
from ltlf2dfa import ltlf_to_dfa
from unreliable import (
    SynthInstance, belief_construct, build_arena, build_belief_arena, build_direct_arena,
    build_qltlf_arena, synth,
)

y, a, u = atom("y"), atom("a"), atom("u")
P_YU = Partition(outputs=("y",), rel_inputs=(), unr_inputs=("u",))
MODES = ("direct", "belief", "qltlf")


def arena_expected(inst, t):
    p = inst.partition
    return satisfies(t, inst.main) and all(satisfies(r, inst.backup) for r in expand_unreliable(t, p.unr_inputs))


class TestDirectArena:
    """Main DFA times the complemented abstraction of the negated backup."""

    def test_trivial_goals_accept_everything(self):
        arena = build_direct_arena(SynthInstance(TRUE, TRUE, P_YU))
        assert all(accepts(arena, t) for t in all_traces(P_YU.order, 3))

    def test_backup_reading_unreliable_input_is_empty(self):
        assert is_empty(build_direct_arena(SynthInstance(TRUE, iff(y, u), P_YU)))

    def test_output_goal(self):
        arena = build_direct_arena(SynthInstance(y, y, P_YU))
        for t in all_traces(P_YU.order, 3):
            assert accepts(arena, t) == ("y" in t[0])


class TestBeliefArena:
    """Belief-state construction over the unreliable inputs."""

    def test_no_unreliable_inputs(self):
        p = Partition(outputs=("y",), rel_inputs=("a",))
        d = ltlf_to_dfa(or_(y, eventually(a)), p.order)
        assert equivalent(belief_construct(d, p), d)

    def test_dependent_backup_rejects_everything(self):
        d = ltlf_to_dfa(iff(y, u), P_YU.order)
        assert is_empty(belief_construct(d, P_YU))

    def test_universal_stays_universal(self):
        d = ltlf_to_dfa(TRUE, P_YU.order)
        belief = belief_construct(d, P_YU)
        assert all(accepts(belief, t) for t in all_traces(P_YU.order, 3))

    def test_order_mismatch(self):
        with pytest.raises(WidthMismatchError):
            belief_construct(ltlf_to_dfa(TRUE, ("u", "y")), P_YU)

    def test_belief_arena_matches_direct(self):
        inst = gen_named_trap("diverted")
        assert equivalent(build_belief_arena(inst), build_direct_arena(inst))


class TestQltlfArena:
    """Arena compiled from main & forall X_unr. backup."""

    def test_forall_of_dependent_backup_is_empty(self):
        assert is_empty(build_qltlf_arena(SynthInstance(TRUE, always(not_(u)), P_YU)))

    def test_unreliable_input_in_main_is_renamed_apart(self):
        inst = SynthInstance(or_(y, u), or_(y, u), P_YU)
        arena = build_qltlf_arena(inst)
        assert arena.props == P_YU.order
        assert equivalent(arena, build_direct_arena(inst))


class TestModesAgree:
    """All three arenas recognize the same traces."""

    def test_languages_on_random_instances(self):
        for index in range(10):
            inst = gen_random(5, index)
            arenas = [build_arena(inst, mode) for mode in MODES]
            for t in all_traces(inst.partition.order, 3):
                expected = arena_expected(inst, t)
                assert [accepts(arena, t) for arena in arenas] == [expected] * 3, (index, t)

    def test_verdicts_on_random_instances(self):
        for index in range(20):
            inst = gen_random(7, index)
            verdicts = {synth(inst, mode).realizable for mode in MODES}
            assert len(verdicts) == 1, index

    def test_hiker_with_herbs(self):
        inst = gen_hiker(4, True)
        for mode in MODES:
            assert synth(inst, mode).realizable, mode

    def test_mso_alias(self):
        inst = gen_random(5, 1)
        assert synth(inst, "mso").mode == "qltlf"


class TestSynth:
    """Driver-level properties, statistics and errors."""

    def test_dropping_backup_keeps_realizability(self):
        for index in range(20):
            inst = gen_random(17, index)
            if synth(inst).realizable:
                relaxed = SynthInstance(inst.main, TRUE, inst.partition)
                assert synth(relaxed).realizable, index

    def test_true_backup_is_plain_synthesis(self):
        rng = random.Random(19)
        p = Partition(outputs=("y",), rel_inputs=("a",))
        for _ in range(25):
            f = random_formula(rng, p.order, 3)
            plain = solve_game(ltlf_to_dfa(f, p.order), p).realizable
            assert synth(SynthInstance(f, TRUE, p)).realizable == plain, str(f)

    def test_stray_atom(self):
        with pytest.raises(PartitionError):
            SynthInstance(atom("z"), TRUE, P_YU)

    def test_limit_names_main_stage(self):
        with pytest.raises(ResourceLimitError) as exc_info:
            synth(gen_named_trap("fork8"), limits=Limits(dfa_state_limit=2))
        assert exc_info.value.stage == "dfa-main"

    def test_limit_names_determinize_stage(self):
        with pytest.raises(ResourceLimitError) as exc_info:
            synth(gen_named_trap("fork8"), limits=Limits(subset_limit=1))
        assert exc_info.value.stage == "determinize"

    def test_limit_names_belief_stage(self):
        with pytest.raises(ResourceLimitError) as exc_info:
            synth(gen_named_trap("fork8"), "belief", limits=Limits(subset_limit=1))
        assert exc_info.value.stage == "belief"

    def test_stage_statistics(self):
        seen = []
        result = synth(gen_named_trap("corridor"), on_stage=lambda name, _: seen.append(name))
        assert seen == ["dfa-main", "dfa-backup", "abstraction", "determinize", "product"]
        assert set(result.states) == set(seen) | {"game"}
        assert result.states["game"] == result.winning_size
        assert "game" in result.timings
        assert result.construction_ms >= 0.0 and result.game_ms >= 0.0

    def test_shared_main_dfa(self):
        inst = gen_named_trap("corridor")
        main_dfa = ltlf_to_dfa(inst.main, inst.partition.order)
        assert synth(inst, main_dfa=main_dfa).realizable
        assert synth(inst, "belief", main_dfa=main_dfa).realizable

    def test_shared_main_dfa_order_mismatch(self):
        inst = SynthInstance(y, TRUE, P_YU)
        with pytest.raises(WidthMismatchError):
            synth(inst, main_dfa=ltlf_to_dfa(y, ("u", "y")))

    def test_minimize(self):
        inst = gen_named_trap("fork8")
        plain = synth(inst)
        small = synth(inst, minimize=True)
        assert small.realizable == plain.realizable
        assert small.arena.n_states <= plain.arena.n_states

    def test_unrealizable_has_no_strategy(self):
        result = synth(gen_named_trap("unreachable"))
        assert not result.realizable
        assert result.strategy is None


P_YAU = Partition(outputs=("y",), rel_inputs=("a",), unr_inputs=("u",))
BLIND_GOALS = [
    (eventually(y), True),
    (eventually(u), False),
    (always(iff(y, a)), False),
    (iff(a, next_(y)), True),
    (iff(u, next_(y)), False),
    (eventually(and_(y, not_(u))), False),
]


class TestTrivialMainGoal:
    """With main goal true the problem is synthesis without sight of the unreliable inputs."""

    @pytest.mark.parametrize("backup, expected", BLIND_GOALS, ids=str)
    def test_matches_observation_game(self, backup, expected):
        assert observation_realizable(backup, P_YAU, 3) is expected
        inst = SynthInstance(TRUE, backup, P_YAU)
        for mode in MODES:
            assert synth(inst, mode).realizable is expected, mode
