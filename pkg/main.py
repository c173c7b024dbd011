#!/usr/bin/env python3
"""
LTLf Synthesis Under Unreliable Inputs - command line

    main.py synth in.ltlf in.part [0] [direct|belief|qltlf|mso] [options]
    main.py gen {sheep,trap,hiker,random,suite} [options]
    main.py bench DIR [--modes ...] [--workers N] [--timeout S] [--csv PATH]
    main.py export-mso in.ltlf in.part

Exit codes: 0 realizable (or success), 1 unrealizable (or a bench failure),
2 any error. Verdicts, DOT, CSV and MONA text go to stdout; diagnostics go
to stderr.
"""

import argparse
import logging
import sys
from typing import Any, Callable, Dict, List, Optional, TextIO

from commands import SynthCommandsMixin, GenerateCommandsMixin, BenchCommandsMixin, ExportCommandsMixin
from commands.generate import GEN_FAMILIES, parse_pair
from constants import DEFAULT_BENCH_TIMEOUT, EXIT_ERROR, MODES, MODE_ALIASES, STAGES
from errors import SynthError

logger = logging.getLogger(__name__)

MODE_CHOICES = MODES + tuple(MODE_ALIASES)


def _add_limit_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("resource limits")
    group.add_argument("--max-width", type=int, help="largest alphabet width accepted")
    group.add_argument("--warn-width", type=int, help="alphabet width that triggers a warning")
    group.add_argument("--state-limit", type=int, help="most DFA states per compiled formula")
    group.add_argument("--subset-limit", type=int, help="most subsets per determinization or belief construction")
    group.add_argument("--enumeration-bits", type=int, help="brute-force checks enumerate at most 2**N cases")


class SynthesisCli(SynthCommandsMixin, GenerateCommandsMixin, BenchCommandsMixin, ExportCommandsMixin):
    """Command-line front end.

    Inherits from the command mixins:
        SynthCommandsMixin: synth and shared file helpers
        GenerateCommandsMixin: gen
        BenchCommandsMixin: bench
        ExportCommandsMixin: export-mso
    """

    def __init__(self, out: Optional[TextIO] = None, err: Optional[TextIO] = None):
        self.out = out or sys.stdout
        self.err = err or sys.stderr
        self._command_dispatch = self._build_command_dispatch()

    def _build_command_dispatch(self) -> Dict[str, Callable[[Any], int]]:
        """Map subcommand names to handlers taking the parsed namespace and returning an exit code."""
        return {
            "synth": self._cmd_synth,
            "gen": self._cmd_gen,
            "bench": self._cmd_bench,
            "export-mso": self._cmd_export_mso,
        }

    def build_parser(self) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(
            prog="main.py",
            description="LTLf synthesis under unreliable inputs: direct, belief-state and QLTLf pipelines.",
        )
        parser.add_argument("-v", "--verbose", action="count", default=0,
                            help="-v for stage statistics, -vv for debugging output")
        sub = parser.add_subparsers(dest="command", required=True)

        synth = sub.add_parser("synth", help="decide realizability of one instance")
        synth.add_argument("ltlf", help="file with the main and backup formulas, one per line")
        synth.add_argument("part", help="partition file (.inputs/.outputs/.unobservables)")
        synth.add_argument("legacy", nargs="*", metavar="[0] MODE",
                           help="Syft-style trailing arguments; a leading 0 is ignored")
        synth.add_argument("--mode", choices=MODE_CHOICES, help="synthesis technique (default: direct)")
        synth.add_argument("--verify", type=int, nargs="?", const=0, metavar="H",
                           help="exhaustively verify the strategy within H rounds (default: winning-set size)")
        synth.add_argument("--strategy-dot", metavar="PATH", help="write the strategy in DOT")
        synth.add_argument("--emit", action="append", choices=STAGES, metavar="STAGE",
                           help=f"write the automaton of a stage in DOT ({', '.join(STAGES)})")
        synth.add_argument("--emit-dir", metavar="DIR", help="directory for --emit output (default: .)")
        synth.add_argument("--minimize", action="store_true", help="minimize automata before solving")
        _add_limit_options(synth)

        gen = sub.add_parser("gen", help="generate benchmark instances")
        gen.add_argument("family", choices=GEN_FAMILIES)
        gen.add_argument("--out", default=".", help="output directory (default: .)")
        gen.add_argument("--n", type=int, help="sheep: number of sheep")
        gen.add_argument("--disliked", type=parse_pair, action="append", metavar="I,J",
                         help="sheep: pair that refuses to travel together")
        gen.add_argument("--liked", type=parse_pair, action="append", metavar="I,J",
                         help="sheep: pair believed to travel together")
        gen.add_argument("--favorites", type=int, nargs="+", help="sheep: sheep the backup goal moves")
        gen.add_argument("--k", type=int, help="hiker: trail length")
        gen.add_argument("--no-herbs", action="store_true", help="hiker: do not force herbs on the trail")
        gen.add_argument("--graph", help="trap: graph file or named graph")
        gen.add_argument("--start", type=int, default=0, help="trap: start vertex")
        gen.add_argument("--main", type=int, nargs="+", help="trap: main goal region")
        gen.add_argument("--backup", type=int, nargs="+", help="trap: backup region")
        gen.add_argument("--count", type=int, default=20, help="random: number of instances")
        gen.add_argument("--seed", type=int, default=0, help="random: seed")
        gen.add_argument("--random", action="store_true", help="suite: include --count random instances")

        bench = sub.add_parser("bench", help="cross-check all modes on a directory of instances")
        bench.add_argument("directory", help="directory of instance subdirectories")
        bench.add_argument("--modes", nargs="+", choices=MODE_CHOICES, help="modes to run (default: all)")
        bench.add_argument("--workers", type=int, help="worker processes (default: CPU count)")
        bench.add_argument("--timeout", type=float, default=DEFAULT_BENCH_TIMEOUT,
                           help=f"seconds per instance (default: {DEFAULT_BENCH_TIMEOUT:g})")
        bench.add_argument("--csv", metavar="PATH", help="write the CSV here instead of stdout")
        bench.add_argument("--horizon", dest="verify", type=int, metavar="H",
                           help="verification horizon (default: winning-set size)")
        _add_limit_options(bench)

        export = sub.add_parser("export-mso", help="print the MONA program of main & forall X_unr. backup")
        export.add_argument("ltlf")
        export.add_argument("part")
        export.add_argument("--out", metavar="PATH", help="write the program here instead of stdout")
        return parser

    def _configure_logging(self, verbosity: int) -> None:
        level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
        logging.basicConfig(level=level, stream=self.err, format="%(levelname)s %(name)s: %(message)s",
                            force=True)

    def run(self, argv: Optional[List[str]] = None) -> int:
        """Parse argv and run the subcommand.

        Returns:
            The subcommand's exit code, or EXIT_ERROR for any SynthError.
            argparse usage errors exit with status 2 as well.
        """
        args = self.build_parser().parse_args(argv)
        self._configure_logging(args.verbose)
        handler = self._command_dispatch[args.command]
        try:
            return handler(args)
        except SynthError as exc:
            print(f"error: {exc}", file=self.err)
            return EXIT_ERROR


def main(argv: Optional[List[str]] = None) -> int:
    return SynthesisCli().run(argv)


if __name__ == '__main__':
    sys.exit(main())
