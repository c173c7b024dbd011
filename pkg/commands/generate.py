"""
Instance Generation Command Handler

This module provides the GenerateCommandsMixin class which writes benchmark
instances (`<name>.ltlf`, `<name>.part`, `expected`) into an output directory.
"""

import argparse
import logging
import os
from typing import TYPE_CHECKING, List, Tuple

from benchmarks import (
    NAMED_GRAPHS, GeneratedInstance, InstanceDescriptor, desk_suite, gen_trap, generate, hiker_descriptor,
    parse_graph, random_instances, sheep_descriptor, trap_descriptor, write_instance,
)
from constants import EXIT_OK
from errors import GeneratorError

if TYPE_CHECKING:
    from main import SynthesisCli

logger = logging.getLogger(__name__)

GEN_FAMILIES = ("sheep", "trap", "hiker", "random", "suite")


def parse_pair(text: str) -> Tuple[int, int]:
    """argparse type for a sheep pair written ``i,j``."""
    try:
        i, j = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a pair 'i,j', got '{text}'") from None
    return i, j


class GenerateCommandsMixin:
    """Mixin class providing the `gen` command.

    Required attributes from SynthesisCli:
    - out: Text stream receiving one written directory per line
    - _read_text: File reader reporting the path on failure
    """

    def _trap_from_args(self: 'SynthesisCli', args) -> GeneratedInstance:
        if args.graph in NAMED_GRAPHS:
            return generate(trap_descriptor(args.graph))
        graph = parse_graph(self._read_text(args.graph))
        main_region = args.main or [graph.n_vertices - 1]
        backup_region = args.backup or main_region
        name = os.path.splitext(os.path.basename(args.graph))[0]
        return GeneratedInstance(f"trap_{name}", gen_trap(graph, args.start, main_region, backup_region))

    def _descriptors_from_args(self: 'SynthesisCli', args) -> List[InstanceDescriptor]:
        family = args.family
        if family == "sheep":
            if args.n is None:
                raise GeneratorError("gen sheep needs --n")
            return [sheep_descriptor(args.n, args.disliked or (), args.liked or (), args.favorites or (1,))]
        if family == "hiker":
            if args.k is None:
                raise GeneratorError("gen hiker needs --k")
            return [hiker_descriptor(args.k, not args.no_herbs)]
        if family == "random":
            return random_instances(args.count, args.seed)
        return desk_suite(args.count if args.random else 0, args.seed)

    def _cmd_gen(self: 'SynthesisCli', args) -> int:
        """Generate instances of one family, or the whole desk-scale suite."""
        if args.family == "trap":
            if not args.graph:
                raise GeneratorError(f"gen trap needs --graph (a file or one of {', '.join(NAMED_GRAPHS)})")
            instances = [self._trap_from_args(args)]
        else:
            instances = [generate(desc) for desc in self._descriptors_from_args(args)]
        try:
            for gi in instances:
                print(write_instance(gi, args.out), file=self.out)
        except OSError as exc:
            raise GeneratorError(f"cannot write to {args.out}: {exc.strerror or exc}") from None
        logger.info("generated %d instance(s) in %s", len(instances), args.out)
        return EXIT_OK
