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

from typing import Optional

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NOT_THIN = 3
EXIT_CONSTRAINT = 4

class FloerGlueError(Exception):
    exit_code = 1

# Problems with what the user handed us: unparsable text, unknown names, bad diagrams.
class InputError(FloerGlueError):
    exit_code = EXIT_INPUT

class PdSyntaxError(InputError):
    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"{offset}: {message}")
        self.offset = offset

class EdgeCountError(InputError):
    pass

class Disconnected(InputError):
    pass

class NotKnot(InputError):
    pass

class UnsupportedDiagram(InputError):
    pass

class NormalizationImpossible(InputError):
    pass

class UnknownKnot(InputError):
    pass

class NotThin(FloerGlueError):
    exit_code = EXIT_NOT_THIN

# Broken algebra: a complex, map or family failed one of its invariants.
class ConstraintError(FloerGlueError):
    exit_code = EXIT_CONSTRAINT

    def __init__(self, message: str, constraint: Optional[str] = None) -> None:
        super().__init__(message)
        self.constraint = constraint

class Dsquared(ConstraintError):
    pass

class DegreeViolation(ConstraintError):
    pass

class FiltrationViolation(ConstraintError):
    pass

class NotClosed(ConstraintError):
    pass

class EmptyFamily(ConstraintError):
    pass

class PerturbationFailure(ConstraintError):
    pass

class ConstraintUnsatisfiable(ConstraintError):
    pass

class NotIso(ConstraintError):
    pass

class IncompatibleRelation(ConstraintError):
    pass
