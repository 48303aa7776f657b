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
import logging

from rich.logging import RichHandler

from .config import APP_SETTINGS
from .console_capture import AnalysisF, ConsoleFilter, DescentF, ErrorF


def setup_logging(debug: bool = False) -> logging.Handler:
    """Route package logs to a rich console handler."""
    if debug:
        APP_SETTINGS.debug = True

    handler = RichHandler(show_path=False, markup=False, rich_tracebacks=True)
    handler.setFormatter(ConsoleFilter.formatter)
    handler.setLevel(logging.DEBUG if APP_SETTINGS.debug else logging.INFO)

    filter = DescentF() | AnalysisF() | ErrorF()
    handler.addFilter(filter)

    logging.basicConfig(
        level=logging.DEBUG if APP_SETTINGS.debug else logging.INFO,
        handlers=[handler],
        force=True,
    )

    # silence numerical backends
    for name in ("matplotlib", "numexpr", "PIL"):
        logging.getLogger(name).setLevel("WARNING")

    return handler
