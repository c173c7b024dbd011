"""
MSO Export Command Handler

This module provides the ExportCommandsMixin class which prints the MONA
program of main & forall X_unr. backup for an instance.
"""

from typing import TYPE_CHECKING

from constants import EXIT_OK
from qltlf2dfa import mso_export
from unreliable import qltlf_reduction

if TYPE_CHECKING:
    from main import SynthesisCli


class ExportCommandsMixin:
    """Mixin class providing the `export-mso` command.

    Required attributes from SynthesisCli:
    - out: Text stream receiving the program
    - _load_instance, _write_text: File helpers from SynthCommandsMixin
    """

    def _cmd_export_mso(self: 'SynthesisCli', args) -> int:
        inst = self._load_instance(args.ltlf, args.part)
        program = mso_export(qltlf_reduction(inst))
        if args.out:
            self._write_text(args.out, program)
        else:
            self.out.write(program)
        return EXIT_OK
