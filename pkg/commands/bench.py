"""
Benchmark Command Handler

This module provides the BenchCommandsMixin class which cross-checks every
instance directory under a root directory in a worker pool and writes one
CSV row per instance and mode.
"""

import csv
import io
import logging
import multiprocessing
import os
import time
from collections import deque
from multiprocessing.connection import Connection, wait
from typing import TYPE_CHECKING, Callable, Deque, Dict, List, Optional, Sequence, TextIO, Tuple

from benchmarks import CrossCheckReport, ModeOutcome, cross_check, load_instance
from config import Limits, RunConfig, normalize_mode
from constants import (
    CSV_COLUMNS, CSV_SCHEMA_VERSION, EXIT_OK, EXIT_UNREALIZABLE, LTLF_SUFFIX, MODES,
)
from errors import SynthError

if TYPE_CHECKING:
    from main import SynthesisCli

logger = logging.getLogger(__name__)


def find_instances(root: str) -> List[str]:
    """Instance directories under root in name order; root itself if it holds a `.ltlf` file."""
    def is_instance(path: str) -> bool:
        return os.path.isdir(path) and any(name.endswith(LTLF_SUFFIX) for name in os.listdir(path))

    if not os.path.isdir(root):
        raise SynthError(f"cannot read {root}: not a directory", error_type="io")
    if is_instance(root):
        return [root]
    return [path for path in (os.path.join(root, name) for name in sorted(os.listdir(root))) if is_instance(path)]


def bench_instance(directory: str, modes: Sequence[str], limits: Limits,
                   horizon: Optional[int]) -> CrossCheckReport:
    """Worker entry point: load and cross-check one instance directory."""
    try:
        gi = load_instance(directory)
    except (SynthError, OSError) as exc:
        name = os.path.basename(os.path.normpath(directory))
        report = CrossCheckReport(name, None)
        for mode in modes:
            report.outcomes.append(ModeOutcome(mode, status="error", message=str(exc)))
        report.failures.append(f"load: {exc}")
        return report
    return cross_check(gi, horizon, modes, limits)


BenchWorker = Callable[[str, Sequence[str], Limits, Optional[int]], CrossCheckReport]


def _child_main(conn: Connection, worker: BenchWorker, directory: str, modes: Sequence[str],
                limits: Limits, horizon: Optional[int]) -> None:
    try:
        conn.send(worker(directory, modes, limits, horizon))
    finally:
        conn.close()


def _timeout_report(directory: str, modes: Sequence[str], seconds: float) -> CrossCheckReport:
    report = CrossCheckReport(os.path.basename(os.path.normpath(directory)), None)
    for mode in modes:
        report.outcomes.append(ModeOutcome(mode, status="timeout", message=f"timed out after {seconds:g} s",
                                           wall_ms=seconds * 1000.0))
    return report


def _crash_report(directory: str, modes: Sequence[str], exitcode: Optional[int]) -> CrossCheckReport:
    report = CrossCheckReport(os.path.basename(os.path.normpath(directory)), None)
    message = f"worker exited with code {exitcode} before reporting"
    for mode in modes:
        report.outcomes.append(ModeOutcome(mode, status="error", message=message))
    report.failures.append(message)
    return report


def _row_status(report: CrossCheckReport, outcome: ModeOutcome) -> str:
    if outcome.status != "ok":
        return outcome.status
    if outcome.verified is False:
        return "unverified"
    if any(f.startswith("verdicts disagree") for f in report.failures):
        return "disagree"
    if any(f.startswith("expected") for f in report.failures):
        return "unexpected"
    return "ok"


def write_csv(reports: Sequence[CrossCheckReport], stream: TextIO) -> None:
    """Versioned CSV: a ``# schema=N`` comment, the header row, then one row per instance and mode."""
    stream.write(f"# schema={CSV_SCHEMA_VERSION}\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for report in reports:
        for o in report.outcomes:
            writer.writerow([
                report.name,
                o.mode,
                o.verdict,
                _row_status(report, o),
                ";".join(f"{stage}={states}" for stage, states in o.states.items()),
                f"{o.construction_ms:.3f}",
                f"{o.game_ms:.3f}",
                f"{o.wall_ms:.3f}",
                "" if o.verified is None else str(o.verified).lower(),
            ])


class BenchCommandsMixin:
    """Mixin class providing the `bench` command.

    Required attributes from SynthesisCli:
    - out: Text stream receiving the CSV when no --csv path is given
    - err: Text stream for the summary
    - _write_text: File writer reporting the path on failure
    """

    def _run_bench(self: 'SynthesisCli', directories: Sequence[str], modes: Sequence[str],
                   config: RunConfig, worker: BenchWorker = bench_instance) -> List[CrossCheckReport]:
        """Cross-check each directory in its own process, at most ``config.workers`` at a time.

        Each instance gets the full timeout from the moment its process
        starts; a process still running at its deadline is terminated.
        """
        workers = config.workers or os.cpu_count() or 1
        reports: Dict[str, CrossCheckReport] = {}
        queued: Deque[str] = deque(directories)
        running: Dict[Connection, Tuple[str, multiprocessing.Process, float]] = {}
        try:
            while queued or running:
                while queued and len(running) < workers:
                    directory = queued.popleft()
                    receiver, sender = multiprocessing.Pipe(duplex=False)
                    process = multiprocessing.Process(
                        target=_child_main,
                        args=(sender, worker, directory, modes, config.limits, config.horizon),
                        daemon=True,
                    )
                    process.start()
                    sender.close()
                    running[receiver] = (directory, process, time.monotonic() + config.timeout)

                nearest = min(deadline for _, _, deadline in running.values())
                for receiver in wait(list(running), timeout=max(0.0, nearest - time.monotonic())):
                    directory, process, _ = running.pop(receiver)
                    try:
                        reports[directory] = receiver.recv()
                    except EOFError:
                        process.join()
                        logger.warning("%s: worker exited with code %s", directory, process.exitcode)
                        reports[directory] = _crash_report(directory, modes, process.exitcode)
                    receiver.close()
                    process.join()

                now = time.monotonic()
                for receiver, (directory, process, deadline) in list(running.items()):
                    if now < deadline:
                        continue
                    del running[receiver]
                    process.terminate()
                    process.join()
                    receiver.close()
                    logger.warning("%s: timed out after %g s", directory, config.timeout)
                    reports[directory] = _timeout_report(directory, modes, config.timeout)
        finally:
            for receiver, (_, process, _) in running.items():
                process.terminate()
                process.join()
                receiver.close()
        return [reports[d] for d in directories]

    def _cmd_bench(self: 'SynthesisCli', args) -> int:
        """Cross-check every instance under a directory.

        Timeouts are recorded in the CSV and are not failures. Returns
        EXIT_UNREALIZABLE if any instance reports a failure.
        """
        config = RunConfig.from_args(args)
        modes = [normalize_mode(m) for m in (args.modes or MODES)]
        directories = find_instances(args.directory)
        if not directories:
            raise SynthError(f"no instance directories under {args.directory}", error_type="io")
        reports = self._run_bench(directories, modes, config)

        if config.csv_path:
            buffer = io.StringIO()
            write_csv(reports, buffer)
            self._write_text(config.csv_path, buffer.getvalue())
        else:
            write_csv(reports, self.out)

        failed = [r for r in reports if not r.ok]
        timeouts = sum(1 for r in reports if any(o.status == "timeout" for o in r.outcomes))
        print(f"{len(reports)} instance(s), {len(failed)} failed, {timeouts} timed out", file=self.err)
        for report in failed:
            for failure in report.failures:
                print(f"FAIL {report.name}: {failure}", file=self.err)
        return EXIT_UNREALIZABLE if failed else EXIT_OK
