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
"""Consolidated text report of a run.

Sections are ``[name]`` headers followed by ``key = value`` lines in key
order. Lines carrying a verdict append ``tol=<tolerance> PASS|FAIL``.
Repeated sections (several stability trials) are numbered ``name.0``,
``name.1``...
"""

from typing import Any, Optional, Protocol

from ..analysis import ReportLine
from ..config import ExperimentConfig, serialize_config


class Reportable(Protocol):
    section: str

    def report_lines(self) -> list[ReportLine]:
        ...


def format_value(v: Any) -> str:
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(float(v))
    if isinstance(v, (list, tuple)):
        return "(" + ", ".join(format_value(x) for x in v) + ")"
    if hasattr(v, "item"):
        return format_value(v.item())
    return str(v)


def _format_line(line: ReportLine) -> str:
    text = f"{line.key} = {format_value(line.value)}"
    if line.passed is not None:
        text += f" tol={format_value(line.tolerance)} {'PASS' if line.passed else 'FAIL'}"
    return text


def _section_names(reports: tuple[Reportable, ...]) -> list[str]:
    counts: dict[str, int] = {}
    for r in reports:
        counts[r.section] = counts.get(r.section, 0) + 1
    seen: dict[str, int] = {}
    names = []
    for r in reports:
        if counts[r.section] == 1:
            names.append(r.section)
        else:
            names.append(f"{r.section}.{seen.get(r.section, 0)}")
            seen[r.section] = seen.get(r.section, 0) + 1
    return names


def emit_report(config: Optional[ExperimentConfig], *reports: Reportable) -> str:
    """Render the config echo, each report and a pass/fail summary."""
    out: list[str] = []
    if config is not None:
        out.append("[config]")
        out.extend(sorted(line.replace("=", " = ", 1)
                          for line in serialize_config(config).splitlines()))

    passed = failed = 0
    for name, report in sorted(zip(_section_names(reports), reports), key=lambda t: t[0]):
        out.append(f"[{name}]")
        for line in sorted(report.report_lines(), key=lambda ln: ln.key):
            out.append(_format_line(line))
            if line.passed is True:
                passed += 1
            elif line.passed is False:
                failed += 1

    if reports:
        out.append("[summary]")
        out.append(f"failed = {failed}")
        out.append(f"passed = {passed}")
        out.append(f"verdict = {'PASS' if failed == 0 else 'FAIL'}")
    return "\n".join(out) + "\n"
