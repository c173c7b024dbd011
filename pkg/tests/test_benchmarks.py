"""Tests for the benchmark generators, instance files and the cross-check harness."""
import os

import pytest

from benchmarks import (
    NAMED_GRAPHS, GeneratedInstance, InstanceDescriptor, cross_check, desk_suite, gen_hiker,
    gen_named_trap, gen_random, gen_sheep, gen_trap, generate, hiker_descriptor, load_instance,
    parse_expected, parse_graph, random_instances, sheep_descriptor, trap_descriptor, write_instance,
)
from config import Limits
from errors import GeneratorError, SynthError
from logic import atoms, satisfies

SLOW = pytest.mark.skipif(os.environ.get("SYNTH_SKIP_SLOW") is not None, reason="slow desk-scale suite skipped")


class TestDescriptors:
    """Instance names and expected verdicts."""

    def test_names(self):
        assert sheep_descriptor(2).name == "sheep_n2_fav1"
        assert sheep_descriptor(3, disliked=[(1, 2)]).name == "sheep_n3_d1.2_fav1"
        assert hiker_descriptor(5, True).name == "hiker_k5_herbs"
        assert hiker_descriptor(5, False).name == "hiker_k5_no_herbs"
        assert trap_descriptor("corridor").name == "trap_corridor"
        assert random_instances(4)[3].name == "random_seed0_index3"

    def test_sheep_parity(self):
        assert sheep_descriptor(2).expected is True
        assert sheep_descriptor(3).expected is False
        assert sheep_descriptor(4, liked=[(1, 2)]).expected is None

    def test_unknown_family(self):
        with pytest.raises(GeneratorError):
            InstanceDescriptor("ferry")

    def test_unknown_graph(self):
        with pytest.raises(GeneratorError):
            trap_descriptor("maze")

    def test_missing_parameter(self):
        with pytest.raises(GeneratorError):
            generate(InstanceDescriptor("hiker", (("k", 5),)))

    def test_suite_names_are_unique(self):
        names = [d.name for d in desk_suite(random_count=3)]
        assert len(names) == len(set(names))

    def test_generation_is_deterministic(self):
        assert gen_random(0, 3) == gen_random(0, 3)
        assert gen_random(0, 3) != gen_random(0, 4)
        desc = hiker_descriptor(5, True)
        assert generate(desc).ltlf_text == generate(desc).ltlf_text


class TestSheep:
    """Sheep-crossing generator."""

    def test_partition(self):
        inst = gen_sheep(3, disliked=[(2, 1)])
        p = inst.partition
        assert p.outputs == ("move_1", "move_2", "move_3")
        assert p.rel_inputs == ("left_1", "left_2", "left_3")
        assert p.unr_inputs == ("disallow_1_2",)

    def test_backup_does_not_pin_pairs(self):
        inst = gen_sheep(3, disliked=[(1, 2)])
        assert "disallow_1_2" in atoms(inst.backup)

    def test_bad_parameters(self):
        for kwargs in ({"n": 1}, {"n": 3, "disliked": [(1, 1)]}, {"n": 3, "disliked": [(1, 4)]},
                       {"n": 3, "disliked": [(1, 2)], "liked": [(2, 1)]}, {"n": 3, "favorites": [4]}):
            with pytest.raises(GeneratorError):
                gen_sheep(**kwargs)

    def test_even_flock_crosses(self):
        report = cross_check(sheep_descriptor(2))
        assert report.ok, report.failures
        assert report.verdict is True

    def test_four_sheep_cross_with_verified_strategies(self):
        report = cross_check(sheep_descriptor(4))
        assert report.ok, report.failures
        assert report.verdict is True
        assert [o.verified for o in report.outcomes] == [True, True, True]

    def test_odd_flock_cannot_cross(self):
        report = cross_check(sheep_descriptor(3))
        assert report.ok, report.failures
        assert report.verdict is False


class TestTrap:
    """Graph parsing and the trap generator."""

    def test_parse_with_comments(self):
        graph = parse_graph("# corridor\n0 1  # first\n\n1 2 0 0\n")
        assert graph.n_vertices == 3
        assert graph.traps == (0,)
        assert graph.out_edges(1)[0].alt == 0

    def test_parse_reports_line(self):
        with pytest.raises(GeneratorError) as exc_info:
            parse_graph("0 1\n0 1 2\n")
        assert exc_info.value.line == 2

    def test_parse_degree(self):
        with pytest.raises(GeneratorError) as exc_info:
            parse_graph("0 1\n0 2\n0 3\n")
        assert exc_info.value.line == 3

    def test_parse_non_integer(self):
        with pytest.raises(GeneratorError) as exc_info:
            parse_graph("0 x\n")
        assert exc_info.value.line == 1

    def test_parse_empty(self):
        with pytest.raises(GeneratorError):
            parse_graph("# nothing\n")

    def test_start_out_of_range(self):
        with pytest.raises(GeneratorError):
            gen_trap("0 1\n", 5, (1,), (1,))

    def test_position_encoding(self):
        inst = gen_named_trap("fork8")
        assert inst.partition.rel_inputs == ("p0", "p1", "p2")
        assert inst.partition.unr_inputs == ("t0", "t1")

    def test_missing_edge_keeps_position(self):
        """Vertex 0 has no second edge: not going left keeps the robot at vertex 0."""
        inst = gen_trap("0 1\n", 0, (1,), (1,))
        assert not satisfies([set(), set()], inst.main)
        assert satisfies([set(), {"left", "p0"}], inst.main)

    def test_move_rules_do_not_constrain_the_last_instant(self):
        inst = gen_named_trap("corridor")
        assert not satisfies([set()], inst.main)
        walk = [set(), {"left", "p0"}, {"left", "p1"}, {"left", "p0", "p1"}]
        assert satisfies(walk, inst.main)
        assert not satisfies(walk[:3], inst.main)

    @pytest.mark.parametrize("name", sorted(NAMED_GRAPHS))
    def test_named_graphs(self, name):
        report = cross_check(trap_descriptor(name))
        assert report.ok, report.failures
        assert report.verdict == NAMED_GRAPHS[name].expected


class TestHiker:
    """Hiker-on-a-trail generator."""

    def test_partition(self):
        p = gen_hiker(5, True).partition
        assert p.outputs == ("eat", "take_medicine", "collect_medicine")
        assert p.rel_inputs == ("berry", "herbs", "sick", "eot", "inbag")
        assert p.unr_inputs == ("poison",)
        assert p.width == 9

    def test_short_trail(self):
        with pytest.raises(GeneratorError):
            gen_hiker(3, True)

    def test_with_herbs(self):
        report = cross_check(hiker_descriptor(5, True))
        assert report.ok, report.failures
        assert report.verdict is True

    def test_without_herbs(self):
        report = cross_check(hiker_descriptor(5, False))
        assert report.ok, report.failures
        assert report.verdict is False

    @SLOW
    @pytest.mark.parametrize("k", range(4, 9))
    def test_herbs_decide_the_verdict(self, k):
        for herbs in (True, False):
            report = cross_check(hiker_descriptor(k, herbs))
            assert report.ok, report.failures
            assert report.verdict is herbs, (k, herbs)

class TestInstanceFiles:
    """write_instance / load_instance and the expected file."""

    def test_round_trip(self, tmp_path):
        gi = generate(sheep_descriptor(2))
        directory = write_instance(gi, str(tmp_path))
        assert directory == os.path.join(str(tmp_path), "sheep_n2_fav1")
        assert sorted(os.listdir(directory)) == ["expected", "sheep_n2_fav1.ltlf", "sheep_n2_fav1.part"]
        loaded = load_instance(directory)
        assert loaded.name == gi.name
        assert loaded.instance == gi.instance
        assert loaded.expected is True

    def test_unknown_expected(self, tmp_path):
        directory = write_instance(generate(sheep_descriptor(4, liked=[(1, 2)])), str(tmp_path))
        with open(os.path.join(directory, "expected")) as f:
            assert f.read() == "unknown\n"
        assert load_instance(directory).expected is None

    def test_parse_expected(self):
        assert parse_expected("1\n") is True
        assert parse_expected(" 0 ") is False
        assert parse_expected("unknown") is None
        with pytest.raises(GeneratorError):
            parse_expected("maybe")

    def test_two_formula_files(self, tmp_path):
        directory = write_instance(generate(sheep_descriptor(2)), str(tmp_path))
        with open(os.path.join(directory, "other.ltlf"), "w") as f:
            f.write("true\ntrue\n")
        with pytest.raises(SynthError):
            load_instance(directory)


class TestCrossCheck:
    """Failure reporting of the harness."""

    def test_unexpected_verdict(self):
        gi = GeneratedInstance("liar", gen_named_trap("unreachable"), expected=True)
        report = cross_check(gi)
        assert not report.ok
        assert any(f.startswith("expected REALIZABLE but") for f in report.failures)
        assert report.verdict is False

    def test_single_mode(self):
        report = cross_check(trap_descriptor("corridor"), modes=("mso",))
        assert [o.mode for o in report.outcomes] == ["qltlf"]
        assert report.ok

    def test_resource_error_is_reported(self):
        report = cross_check(trap_descriptor("fork8"), limits=Limits(dfa_state_limit=2))
        assert not report.ok
        assert all(o.status == "error" for o in report.outcomes)
        assert report.verdict is None

    def test_outcomes_carry_statistics(self):
        report = cross_check(trap_descriptor("corridor"))
        for outcome in report.outcomes:
            assert outcome.verified is True
            assert "game" in outcome.states
            assert outcome.wall_ms >= outcome.game_ms


@SLOW
class TestDeskSuite:
    """Every mode agrees, matches the expected verdict and verifies its strategy on the whole desk suite."""

    @pytest.mark.parametrize("desc", desk_suite(random_count=20), ids=lambda d: d.name)
    def test_modes_agree(self, desc):
        report = cross_check(desc)
        assert report.ok, report.failures
        assert report.verdict is not None
        assert all(o.verified is (True if o.realizable else None) for o in report.outcomes)
