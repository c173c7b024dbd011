"""
Synthesis Command Handler

This module provides the SynthCommandsMixin class which reads an instance
from `.ltlf` and `.part` files, decides realizability in the selected mode
and prints the verdict.
"""

import logging
import os
from typing import TYPE_CHECKING

from automata import Automaton, to_dot
from config import RunConfig
from constants import (
    REALIZABLE, UNREALIZABLE, EXIT_REALIZABLE, EXIT_UNREALIZABLE, EXIT_ERROR, STAGE_GAME,
)
from errors import SynthError
from game import verify_strategy
from unreliable import SynthInstance, synth

if TYPE_CHECKING:
    from main import SynthesisCli

logger = logging.getLogger(__name__)


class SynthCommandsMixin:
    """Mixin class providing the `synth` command and shared file helpers.

    Required attributes from SynthesisCli:
    - out: Text stream for verdicts and machine-readable output
    - err: Text stream for human-readable diagnostics
    """

    def _read_text(self: 'SynthesisCli', path: str) -> str:
        try:
            with open(path) as f:
                return f.read()
        except OSError as exc:
            raise SynthError(f"cannot read {path}: {exc.strerror or exc}", error_type="io") from None

    def _write_text(self: 'SynthesisCli', path: str, text: str) -> None:
        try:
            directory = os.path.dirname(path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            with open(path, "w") as f:
                f.write(text)
        except OSError as exc:
            raise SynthError(f"cannot write {path}: {exc.strerror or exc}", error_type="io") from None

    def _load_instance(self: 'SynthesisCli', ltlf_path: str, part_path: str) -> SynthInstance:
        ltlf_text = self._read_text(ltlf_path)
        part_text = self._read_text(part_path)
        return SynthInstance.from_text(ltlf_text, part_text)

    def _cmd_synth(self: 'SynthesisCli', args) -> int:
        """Decide realizability of one instance.

        Accepts the Syft invocation shape ``synth in.ltlf in.part 0 <mode>``:
        a leading "0" among the trailing positionals is ignored and a
        remaining one selects the mode.

        Returns:
            EXIT_REALIZABLE or EXIT_UNREALIZABLE, or EXIT_ERROR when
            verification of the extracted strategy fails.
        """
        legacy = list(args.legacy or [])
        if legacy and legacy[0] == "0":
            legacy.pop(0)
        if len(legacy) > 1:
            raise SynthError(f"unexpected arguments: {' '.join(legacy)}", error_type="config")
        if legacy:
            args.mode = legacy[0]
        config = RunConfig.from_args(args)
        inst = self._load_instance(config.ltlf_path, config.part_path)

        def dump_stage(stage: str, automaton: Automaton) -> None:
            if stage in config.emit:
                path = os.path.join(config.emit_dir, f"{stage}.dot")
                self._write_text(path, to_dot(automaton, inst.partition, name=stage))
                logger.info("wrote %s", path)

        result = synth(inst, config.mode, config.limits,
                       on_stage=dump_stage if config.emit else None, minimize=config.minimize)
        for stage, states in result.states.items():
            logger.info("%-12s %8d states %10.1f ms", stage, states, result.timings.get(stage, 0.0))
        print(REALIZABLE if result.realizable else UNREALIZABLE, file=self.out)

        if STAGE_GAME in config.emit and result.strategy is not None:
            self._write_text(os.path.join(config.emit_dir, f"{STAGE_GAME}.dot"), result.strategy.to_dot())
        if config.strategy_dot:
            if result.strategy is None:
                logger.warning("no strategy to write: instance is unrealizable")
            else:
                self._write_text(config.strategy_dot, result.strategy.to_dot())

        if config.verify and result.strategy is not None:
            horizon = config.horizon or result.winning_size
            check = verify_strategy(result.strategy, inst.main, inst.backup, inst.partition,
                                    horizon, config.limits)
            if not check.passed:
                shown = " ".join("{" + ",".join(sorted(x)) + "}" for x in check.counterexample or ())
                print(f"error: strategy verification failed: {check.reason}; inputs: {shown}", file=self.err)
                return EXIT_ERROR
            logger.info("strategy verified at horizon %d over %d plays", horizon, check.plays)

        return EXIT_REALIZABLE if result.realizable else EXIT_UNREALIZABLE

