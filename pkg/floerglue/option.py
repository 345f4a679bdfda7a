#  FloerGlue
#  Copyright (C) 2023-2024, Henry Stratmann III
#
#  This program is free software: you can redistribute it and/or modify
#  it under the terms of the GNU General Public License version 3 as
#  published by the Free Software Foundation.
#
#  This program is distributed in the hope that it will be useful,
#  but WITHOUT ANY WARRANTY; without even the implied warranty of
#  MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
#  GNU General Public License for more details.
#
#  You should have received a copy of the GNU General Public License
#  along with this program.  If not, see <https://www.gnu.org/licenses/>.

from typing import List, Tuple, Optional, TextIO

import os
import re
import sys
import argparse

GOLDEN_ENV = "FLOERGLUE_GOLDEN_DIR"
DEFAULT_GOLDEN_DIR = os.path.join("tests", "golden")

class Arguments(argparse.Namespace):
    def __init__(self) -> None:
        self.command = ""
        self.names: List[str] = []
        self._knots: List[List[str]] = []
        self.knots: List[str] = []
        self.pd_files: List[str] = []
        self.theory = "cfk"
        self.spinc: Optional[Tuple[int, int]] = None
        self.spinc_min: Optional[int] = None
        self.spinc_max: Optional[int] = None
        self.glue: Optional[str] = None
        self.suite = "all"
        self.output = "out"
        self.format = "json"
        self.flag_file: Optional[str] = None
        self.golden_dir: Optional[str] = None
        self.regenerate = False
        self.suppress_output = False
        self.stdout: TextIO = sys.stdout
        self.stderr: TextIO = sys.stderr

    def finish(self) -> None:
        # Subcommand parsers leave None behind for options that were never given.
        self.names = self.names or []
        self._knots = self._knots or []
        self.pd_files = self.pd_files or []

        # Both "--knot 3_1 --knot 4_1" and "--knot 3_1,4_1" are accepted.
        for sublist in [self.names] + self._knots:
            for item in sublist:
                self.knots += [name for name in re.split(r",(?![^()]*\))", item) if len(name) > 0]
        if self.spinc is not None:
            self.spinc_min, self.spinc_max = self.spinc
        # An explicit --golden wins over the environment.
        if self.golden_dir is None:
            self.golden_dir = os.environ.get(GOLDEN_ENV) or None
        if self.suppress_output:
            self.stdout = open(os.devnull, 'w')
            self.stderr = open(os.devnull, 'w')

    def in_range(self, label: int) -> bool:
        if self.spinc_min is not None and label < self.spinc_min:
            return False
        if self.spinc_max is not None and label > self.spinc_max:
            return False
        return True

args = Arguments()
