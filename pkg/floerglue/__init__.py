"""FloerGlue computes knot and longitude Floer complexes of thin knots and glues them together.

See the documentation for the 'process' function for details.
"""

__all__ = [
    "process",
]

from typing import List, Tuple, TextIO, Optional
import sys

def process(command: str,
            knots: List[str] = [],
            pd_files: List[str] = [],
            theory: str = "cfk",
            spinc: Optional[Tuple[int, int]] = None,
            glue: Optional[str] = None,
            suite: str = "all",
            output_dir: str = "out",
            output_format: str = "json",
            flag_file: Optional[str] = None,
            golden_dir: Optional[str] = None,
            regenerate: bool = False,
            stdout: Optional[TextIO] = None,
            stderr: Optional[TextIO] = None) -> int:
    """
    Run one of the ``invariants``, ``compute`` or ``verify`` commands.

    :param command: The command to run.
    :param knots: Names of knots from the built-in table, e.g. "3_1" or "T(2,5)".
    :param pd_files: Files holding PD codes, as text or as JSON.
    :param theory: Flag family built by ``compute``, either "cfk" or "cfl".
    :param spinc: Inclusive range of doubled Spin^c labels to report.
    :param glue: Glue two knots instead of building flags (see below).
    :param suite: Verification suite run by ``verify`` (see below).
    :param output_dir: Directory to write generated files.
    :param output_format: One of "json", "csv" or "pretty".
    :param flag_file: Flag JSON file whose exact sequence ``verify`` checks.
    :param golden_dir: Directory holding golden files; ``verify`` compares against it when given.
    :param regenerate: Write ``compute`` results into the golden directory.
    :param stdout: Redirect reports.
    :param stderr: Redirect diagnostics.
    :return: Zero on success, 2 for bad input, 3 for knots that are not thin, 4 for failed constraints.

    Where ``glue`` is one of the following:

    * "parallel"
    * "perp"
    * "connsum"

    Where ``suite`` is one of the following:

    * "genus"
    * "ses"
    * "euler"
    * "symmetry"
    * "connsum"
    * "all"

    This function should **not** raise any exceptions.
    """

    from .option import Arguments
    from .__main__ import main
    args = Arguments()
    args.command = command
    args.knots = list(knots)
    args.pd_files = list(pd_files)
    args.theory = theory
    args.spinc = spinc
    if spinc is not None:
        args.spinc_min, args.spinc_max = spinc
    args.glue = glue
    args.suite = suite
    args.output = output_dir
    args.format = output_format
    args.flag_file = flag_file
    args.golden_dir = golden_dir
    args.regenerate = regenerate
    if stdout is None:
        args.stdout = sys.stdout
    else:
        args.stdout = stdout
    if stderr is None:
        args.stderr = sys.stderr
    else:
        args.stderr = stderr
    return main(args)
