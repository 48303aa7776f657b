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
"""Console log filters.

Each filter selects records by logger prefix or message pattern. Filters
compose with ``|`` (union), ``&`` (intersection) and ``~`` (complement), so the
console handler can be given a single filter built from small pieces.
"""

import logging
import re
from logging import Filter, Formatter, LogRecord
from typing import ClassVar, Iterable, Optional, Pattern


class ConsoleFilter(Filter):
    """Selects the records shown on the console.

    Subclasses set ``modules`` (logger name prefixes) and ``patterns``
    (regexes matched against the formatted message). Records at or above
    ``min_level`` always pass. Debug mode lets everything through.
    """

    modules: ClassVar[tuple[str, ...]] = ()
    patterns: ClassVar[tuple[Pattern[str], ...]] = ()
    formatter: ClassVar[Formatter] = Formatter("%(message)s")

    def __init__(self,
                 module_filters: Optional[Iterable[str]] = None,
                 pattern_filters: Optional[Iterable[Pattern[str]]] = None,
                 min_level: int = logging.WARNING,
                 negate: bool = False):
        super().__init__()
        self.module_filters = set(self.modules if module_filters is None else module_filters)
        self.pattern_filters = set(self.patterns if pattern_filters is None else pattern_filters)
        self.min_level = min_level
        self.negate = negate

    def selects(self, record: LogRecord) -> bool:
        if record.levelno >= self.min_level:
            return True
        if any(record.name.startswith(m) for m in self.module_filters):
            return True
        msg = record.getMessage()
        return any(p.match(msg) for p in self.pattern_filters)

    def filter(self, record: LogRecord) -> bool:
        from .config import APP_SETTINGS
        if APP_SETTINGS.debug:
            return True
        return self.selects(record) != self.negate

    def __or__(self, other: "ConsoleFilter") -> "ConsoleFilter":
        return ConsoleFilter(self.module_filters | other.module_filters,
                             self.pattern_filters | other.pattern_filters,
                             min(self.min_level, other.min_level))

    def __and__(self, other: "ConsoleFilter") -> "ConsoleFilter":
        return ConsoleFilter(self.module_filters & other.module_filters,
                             self.pattern_filters & other.pattern_filters,
                             max(self.min_level, other.min_level))

    def __invert__(self) -> "ConsoleFilter":
        return ConsoleFilter(self.module_filters, self.pattern_filters,
                             self.min_level, negate=not self.negate)


class ErrorF(ConsoleFilter):
    """Errors, divergence and failed checks."""
    patterns = (re.compile(r".*(error|exception|diverge).*", re.IGNORECASE), )


class DescentF(ConsoleFilter):
    """Solver progress."""
    modules = ("morrey.descent", )


class AnalysisF(ConsoleFilter):
    """Verdicts of the analysis suite and the run summary."""
    modules = ("morrey.analysis", "morrey.cli")
