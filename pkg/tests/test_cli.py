"""Tests for the command-line front end."""
import io
import os

import helpers
from config import RunConfig
from main import SynthesisCli

GOLDEN_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "golden")

GUARD_LTLF = "y\nG(!u)\n"
GUARD_PART = ".inputs: u\n.outputs: y\n.unobservables: u\n"
EASY_LTLF = "y\ntrue\n"
EASY_PART = ".inputs: x\n.outputs: y\n"
HARD_LTLF = "F(x)\ntrue\n"


def run_cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = SynthesisCli(out=out, err=err).run(list(argv))
    return code, out.getvalue(), err.getvalue()


def write_instance_files(tmp_path, ltlf, part, name="instance"):
    ltlf_path = tmp_path / f"{name}.ltlf"
    part_path = tmp_path / f"{name}.part"
    ltlf_path.write_text(ltlf)
    part_path.write_text(part)
    return str(ltlf_path), str(part_path)


class TestSynthCommand:
    """synth verdicts, exit codes and artifacts."""

    def test_realizable(self, tmp_path):
        code, out, _ = run_cli("synth", *write_instance_files(tmp_path, EASY_LTLF, EASY_PART))
        assert code == 0
        assert out == "REALIZABLE\n"

    def test_unrealizable(self, tmp_path):
        code, out, _ = run_cli("synth", *write_instance_files(tmp_path, HARD_LTLF, EASY_PART))
        assert code == 1
        assert out == "UNREALIZABLE\n"

    def test_guard_is_unrealizable_in_every_mode(self, tmp_path):
        paths = write_instance_files(tmp_path, GUARD_LTLF, GUARD_PART)
        for mode in ("direct", "belief", "qltlf", "mso"):
            code, out, _ = run_cli("synth", *paths, "--mode", mode)
            assert (code, out) == (1, "UNREALIZABLE\n"), mode

    def test_legacy_arguments(self, tmp_path):
        paths = write_instance_files(tmp_path, EASY_LTLF, EASY_PART)
        code, out, _ = run_cli("synth", *paths, "0", "belief")
        assert code == 0
        assert out == "REALIZABLE\n"

    def test_legacy_unknown_mode(self, tmp_path):
        paths = write_instance_files(tmp_path, EASY_LTLF, EASY_PART)
        code, _, err = run_cli("synth", *paths, "0", "sideways")
        assert code == 2
        assert "unknown mode 'sideways'" in err

    def test_missing_part_file(self, tmp_path):
        ltlf_path, _ = write_instance_files(tmp_path, EASY_LTLF, EASY_PART)
        missing = str(tmp_path / "absent.part")
        code, out, err = run_cli("synth", ltlf_path, missing)
        assert code == 2
        assert out == ""
        assert err.startswith("error: ")
        assert missing in err

    def test_syntax_error(self, tmp_path):
        code, _, err = run_cli("synth", *write_instance_files(tmp_path, "y &\ntrue\n", EASY_PART))
        assert code == 2
        assert "line 1" in err

    def test_undeclared_atom(self, tmp_path):
        code, _, err = run_cli("synth", *write_instance_files(tmp_path, "z\ntrue\n", EASY_PART))
        assert code == 2
        assert "z" in err

    def test_state_limit_names_stage(self, tmp_path):
        paths = write_instance_files(tmp_path, "F(y & N(y & N(y)))\ntrue\n", EASY_PART)
        code, _, err = run_cli("synth", *paths, "--state-limit", "2")
        assert code == 2
        assert "[dfa-main]" in err

    def test_verify(self, tmp_path):
        paths = write_instance_files(tmp_path, EASY_LTLF, EASY_PART)
        assert run_cli("synth", *paths, "--verify")[0] == 0
        assert run_cli("synth", *paths, "--verify", "3")[0] == 0

    def test_strategy_dot(self, tmp_path):
        dot_path = tmp_path / "out" / "strategy.dot"
        paths = write_instance_files(tmp_path, EASY_LTLF, EASY_PART)
        code, _, _ = run_cli("synth", *paths, "--strategy-dot", str(dot_path))
        assert code == 0
        assert dot_path.read_text().startswith('digraph "strategy" {')

    def test_emit_stages(self, tmp_path):
        paths = write_instance_files(tmp_path, EASY_LTLF, EASY_PART)
        emit_dir = tmp_path / "stages"
        code, _, _ = run_cli("synth", *paths, "--emit", "dfa-main", "--emit", "product", "--emit", "game",
                             "--emit-dir", str(emit_dir))
        assert code == 0
        assert sorted(os.listdir(emit_dir)) == ["dfa-main.dot", "game.dot", "product.dot"]
        assert (emit_dir / "dfa-main.dot").read_text().startswith('digraph "dfa-main" {')


class TestGenCommand:
    """gen writes instance directories and prints them."""

    def test_sheep(self, tmp_path):
        code, out, _ = run_cli("gen", "sheep", "--n", "2", "--out", str(tmp_path))
        assert code == 0
        directory = out.strip()
        assert directory == os.path.join(str(tmp_path), "sheep_n2_fav1")
        assert (tmp_path / "sheep_n2_fav1" / "expected").read_text() == "1\n"

    def test_hiker_without_herbs(self, tmp_path):
        code, _, _ = run_cli("gen", "hiker", "--k", "5", "--no-herbs", "--out", str(tmp_path))
        assert code == 0
        assert (tmp_path / "hiker_k5_no_herbs" / "expected").read_text() == "0\n"

    def test_sheep_needs_n(self, tmp_path):
        code, _, err = run_cli("gen", "sheep", "--out", str(tmp_path))
        assert code == 2
        assert "--n" in err

    def test_trap_from_graph_file(self, tmp_path):
        graph = tmp_path / "line.graph"
        graph.write_text("0 1\n1 2\n")
        code, out, _ = run_cli("gen", "trap", "--graph", str(graph), "--out", str(tmp_path))
        assert code == 0
        assert out.strip().endswith("trap_line")
        assert (tmp_path / "trap_line" / "expected").read_text() == "unknown\n"

    def test_trap_graph_error_names_line(self, tmp_path):
        graph = tmp_path / "broken.graph"
        graph.write_text("0 1\n1 x\n")
        code, _, err = run_cli("gen", "trap", "--graph", str(graph), "--out", str(tmp_path))
        assert code == 2
        assert "line 2" in err

    def test_random(self, tmp_path):
        code, out, _ = run_cli("gen", "random", "--count", "3", "--seed", "2", "--out", str(tmp_path))
        assert code == 0
        assert len(out.splitlines()) == 3


class TestBenchCommand:
    """bench cross-checks directories and writes the CSV."""

    def test_csv(self, tmp_path):
        run_cli("gen", "sheep", "--n", "2", "--out", str(tmp_path))
        run_cli("gen", "trap", "--graph", "corridor", "--out", str(tmp_path))
        code, out, err = run_cli("bench", str(tmp_path), "--workers", "1")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "# schema=1"
        assert lines[1] == ("instance,mode,verdict,status,states_per_stage,"
                            "construction_ms,game_ms,wall_ms,verified")
        assert len(lines) == 2 + 2 * 3
        assert lines[2].startswith("sheep_n2_fav1,direct,REALIZABLE,ok,")
        assert "2 instance(s), 0 failed, 0 timed out" in err

    def test_csv_file_and_mode_subset(self, tmp_path):
        instances = tmp_path / "instances"
        run_cli("gen", "trap", "--graph", "corridor", "--out", str(instances))
        csv_path = tmp_path / "results.csv"
        code, out, _ = run_cli("bench", str(instances), "--workers", "1", "--modes", "belief",
                               "--csv", str(csv_path))
        assert code == 0
        assert out == ""
        assert len(csv_path.read_text().splitlines()) == 3

    def test_wrong_expectation_fails(self, tmp_path):
        run_cli("gen", "trap", "--graph", "unreachable", "--out", str(tmp_path))
        (tmp_path / "trap_unreachable" / "expected").write_text("1\n")
        code, out, err = run_cli("bench", str(tmp_path), "--workers", "1", "--modes", "direct")
        assert code == 1
        assert ",unexpected," in out
        assert "FAIL trap_unreachable" in err

    def test_timeout_clock_starts_with_each_instance(self, tmp_path):
        run_cli("gen", "trap", "--graph", "corridor", "--out", str(tmp_path))
        directories = [str(tmp_path / "stalled"), str(tmp_path / "trap_corridor")]
        cli = SynthesisCli(out=io.StringIO(), err=io.StringIO())
        stalled, corridor = cli._run_bench(directories, ["direct"], RunConfig(workers=1, timeout=3.0),
                                           worker=helpers.scripted_bench)
        assert [o.status for o in stalled.outcomes] == ["timeout"]
        assert [o.status for o in corridor.outcomes] == ["ok"]
        assert corridor.ok and corridor.verdict is True

    def test_crashed_worker_is_a_failure(self, tmp_path):
        run_cli("gen", "trap", "--graph", "corridor", "--out", str(tmp_path))
        directories = [str(tmp_path / "crashed"), str(tmp_path / "trap_corridor")]
        cli = SynthesisCli(out=io.StringIO(), err=io.StringIO())
        crashed, corridor = cli._run_bench(directories, ["direct", "belief"], RunConfig(workers=2),
                                           worker=helpers.scripted_bench)
        assert not crashed.ok
        assert [o.status for o in crashed.outcomes] == ["error", "error"]
        assert "code 3" in crashed.failures[0]
        assert corridor.ok

    def test_empty_directory(self, tmp_path):
        code, _, err = run_cli("bench", str(tmp_path))
        assert code == 2
        assert "no instance directories" in err


class TestExportCommand:
    """export-mso prints the MONA program of the reduction."""

    def test_golden(self, tmp_path):
        paths = write_instance_files(tmp_path, GUARD_LTLF, GUARD_PART)
        code, out, _ = run_cli("export-mso", *paths)
        assert code == 0
        with open(os.path.join(GOLDEN_DIR, "guard.mona")) as f:
            assert out == f.read()

    def test_no_unreliable_inputs(self, tmp_path):
        code, out, _ = run_cli("export-mso", *write_instance_files(tmp_path, EASY_LTLF, EASY_PART))
        assert code == 0
        assert "all2" not in out
        assert out.startswith("m2l-str;\n")

    def test_deterministic_file_output(self, tmp_path):
        paths = write_instance_files(tmp_path, GUARD_LTLF, GUARD_PART)
        first, second = tmp_path / "a.mona", tmp_path / "b.mona"
        assert run_cli("export-mso", *paths, "--out", str(first))[0] == 0
        assert run_cli("export-mso", *paths, "--out", str(second))[0] == 0
        assert first.read_text() == second.read_text()
