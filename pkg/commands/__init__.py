"""
Command Handler Modules

This package contains mixin classes that provide the subcommand handlers of
SynthesisCli. Each mixin provides one subcommand.

Available mixins:
- SynthCommandsMixin: synth (plus the file helpers the other mixins share)
- GenerateCommandsMixin: gen
- BenchCommandsMixin: bench
- ExportCommandsMixin: export-mso
"""

from commands.synth import SynthCommandsMixin
from commands.generate import GenerateCommandsMixin
from commands.bench import BenchCommandsMixin
from commands.export import ExportCommandsMixin

__all__ = ['SynthCommandsMixin', 'GenerateCommandsMixin', 'BenchCommandsMixin', 'ExportCommandsMixin']
