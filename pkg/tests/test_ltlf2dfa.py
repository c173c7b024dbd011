"""Tests for LTLf to DFA compilation by progression, checked against the trace semantics."""
import logging
import random

import pytest

from helpers import all_letters, all_traces
from automata import accepts, is_empty
from benchmarks import gen_named_trap, random_formula
from cache import MemoTable
from config import Limits
from errors import ResourceLimitError, SynthError, UnsupportedInputError
from logic import (
    FALSE, TRUE, atom, eval_trace, eventually, exists, next_, parse_ltlf, satisfies, subformulas, until,
    wnext,
)
from ltlf2dfa import Progressor, canonical, ltlf_to_dfa, progress_last, progress_more

a, b = atom("a"), atom("b")


class TestProgression:
    """One-letter progression and last-instant evaluation."""

    def test_until_keeps_obligation(self):
        assert progress_more(until(a, b), {"a"}) == until(a, b)

    def test_strong_next_obligation(self):
        assert progress_more(next_(a), set()) == a

    def test_true_is_stable(self):
        assert progress_more(TRUE, {"a"}) is TRUE

    def test_strong_next_at_last_instant(self):
        assert progress_last(next_(a), {"a"}) is False

    def test_weak_next_at_last_instant(self):
        assert progress_last(wnext(FALSE), set()) is True

    def test_until_at_last_instant(self):
        assert progress_last(until(a, b), {"b"}) is True

    def test_progression_soundness(self):
        """Evaluating [letter] + tail equals evaluating the residual on tail."""
        rng = random.Random(41)
        props = ("a", "b")
        for _ in range(60):
            f = random_formula(rng, props, 4)
            for letter in all_letters(props):
                residual = progress_more(f, letter)
                assert progress_last(f, letter) == eval_trace((letter,), 1, f)
                for tail in all_traces(props, 3):
                    assert eval_trace((letter,) + tail, 1, f) == eval_trace(tail, 1, residual)

    def test_canonical_preserves_semantics(self):
        rng = random.Random(43)
        for _ in range(60):
            f = random_formula(rng, ("a", "b"), 4)
            g = canonical(f)
            for t in all_traces(("a", "b"), 3):
                assert satisfies(t, f) == satisfies(t, g)

    def test_unknown_atom(self):
        with pytest.raises(SynthError):
            Progressor(("a",)).bit("b")


class TestCompilation:
    """ltlf_to_dfa examples, limits and the oracle equivalence."""

    def test_eventually(self):
        d = ltlf_to_dfa(eventually(a), ("a",))
        assert accepts(d, [set(), {"a"}])
        assert not accepts(d, [set(), set()])

    def test_false_is_empty(self):
        assert is_empty(ltlf_to_dfa(FALSE, ("a",)))

    def test_atom_reads_first_letter(self):
        d = ltlf_to_dfa(a, ("a", "b"))
        for t in all_traces(("a", "b"), 3):
            assert accepts(d, t) == ("a" in t[0])

    def test_initial_state_not_final(self):
        for f in (TRUE, a, wnext(FALSE), eventually(b)):
            d = ltlf_to_dfa(f, ("a", "b"))
            assert not d.finals[d.initial]

    def test_state_limit(self):
        with pytest.raises(ResourceLimitError) as exc_info:
            ltlf_to_dfa(until(a, next_(next_(b))), ("a", "b"), Limits(dfa_state_limit=2))
        assert exc_info.value.stage == "dfa-main"

    def test_width_cap(self):
        with pytest.raises(ResourceLimitError):
            ltlf_to_dfa(a, ("a", "b", "c"), Limits(max_width=2, warn_width=1), stage="dfa-backup")

    def test_width_warning(self, caplog):
        with caplog.at_level(logging.WARNING, logger="ltlf2dfa"):
            ltlf_to_dfa(a, ("a", "b"), Limits(max_width=4, warn_width=1))
        assert "alphabet width 2" in caplog.text

    def test_quantifier_rejected(self):
        with pytest.raises(UnsupportedInputError):
            ltlf_to_dfa(exists("u", a), ("a", "u"))

    def test_atom_outside_alphabet(self):
        with pytest.raises(SynthError):
            ltlf_to_dfa(b, ("a",))

    def test_shared_progressor(self):
        progressor = Progressor(("a", "b"))
        d1 = ltlf_to_dfa(until(a, b), ("a", "b"), progressor=progressor)
        d2 = ltlf_to_dfa(until(a, b), ("a", "b"))
        assert d1.n_states == d2.n_states

    def test_random_formulas_two_props(self):
        """200 random formulas of depth 4 against eval_trace on every trace up to length 4."""
        rng = random.Random(2024)
        props = ("a", "b")
        traces = list(all_traces(props, 4))
        for _ in range(200):
            f = random_formula(rng, props, 4)
            d = ltlf_to_dfa(f, props)
            for t in traces:
                assert accepts(d, t) == satisfies(t, f), (str(f), t)

    def test_random_formulas_three_props(self):
        rng = random.Random(2025)
        props = ("a", "b", "c")
        traces = list(all_traces(props, 3))
        for _ in range(60):
            f = random_formula(rng, props, 4)
            d = ltlf_to_dfa(f, props)
            for t in traces:
                assert accepts(d, t) == satisfies(t, f), (str(f), t)

    def test_benchmark_subformulas(self):
        """Every subformula of a small trap instance over its three propositions."""
        inst = gen_named_trap("corridor")
        props = inst.partition.order
        assert len(props) == 3
        traces = list(all_traces(props, 3))
        for f in set(subformulas(inst.main)) | set(subformulas(inst.backup)):
            d = ltlf_to_dfa(f, props)
            for t in traces:
                assert accepts(d, t) == satisfies(t, f), (str(f), t)


class TestMemoTable:
    """Bounded memo tables behind hash-consing and progression."""

    def test_evicts_least_recently_looked_up(self):
        table = MemoTable("progress-more", 2)
        table.store("a", 1)
        table.store("b", 2)
        assert table.lookup("a") == 1
        table.store("c", 3)
        assert table.lookup("b") is None
        assert (table.lookup("a"), table.lookup("c")) == (1, 3)
        assert len(table) == 2

    def test_false_is_a_stored_value(self):
        table = MemoTable("progress-last", 4)
        assert table.store(("f", 0), False) is False
        assert table.lookup(("f", 0)) is False
        assert table.stats() == "progress-last: 1 entries, 1 hits, 0 misses"

    def test_progression_statistics_are_logged(self, caplog):
        with caplog.at_level(logging.DEBUG, logger="ltlf2dfa"):
            ltlf_to_dfa(parse_ltlf("F(a & N(b))"), ("a", "b"))
        assert "progress-more:" in caplog.text
        assert "progress-last:" in caplog.text
