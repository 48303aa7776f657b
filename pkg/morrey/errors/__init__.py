##
##  Copyright (c) 2023 Chakib Ben Ziane <contact@blob42.xyz>. All rights reserved.
##
##  SPDX-License-Identifier: AGPL-3.0-or-later
##
##  This file is part of Morrey.
##
##  This program is free software: you can redistribute it and/or modify it under
##  the terms of the GNU Affero General Public License as published by the Free
##  Software Foundation, either version 3 of the License, or (at your option) any
##  later version.
##
##  This program is distributed in the hope that it will be useful, but WITHOUT
##  ANY WARRANTY; without even the implied warranty of MERCHANTABILITY or FITNESS
##  FOR A PARTICULAR PURPOSE.  See the GNU Affero General Public License for more
##  details.
##
##  You should have received a copy of the GNU Affero General Public License along
##  with this program.  If not, see <http://www.gnu.org/licenses/>.
##
"""Morrey errors"""

# base class for every error raised by the package
class MorreyError(Exception):
    """An error raised by a solver, a measurement or the experiment runner.

    The message should name the offending value.
    """
    pass

class GridError(MorreyError):
    pass

class ConstraintError(MorreyError):
    pass

class FieldError(MorreyError):
    pass

class ArchiveError(MorreyError):
    """Field archive could not be written or parsed."""
    pass

class EnergyError(MorreyError):
    pass

class DescentError(MorreyError):
    pass

class DivergenceError(DescentError):
    """The iteration blew up: reduce tau."""
    pass

class AnalysisError(MorreyError):
    pass

class ChainError(MorreyError):
    pass

class ConfigError(MorreyError):
    pass
