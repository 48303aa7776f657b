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
"""Report models returned by the analysis functions."""

from typing import Any, ClassVar, NamedTuple, Optional

from pydantic import BaseModel, Field

from ..types import NodeIndex, Point


class ReportLine(NamedTuple):
    """One ``key = value`` line of the consolidated text report."""
    key: str
    value: Any
    tolerance: Optional[float] = None
    passed: Optional[bool] = None


class HolderReport(BaseModel):
    seminorm: float
    argmax_pair: Optional[tuple[NodeIndex, NodeIndex]] = None
    """Maximizing node pair, lexicographically smallest on ties. None for constant fields."""
    ratio_at_constraints: Optional[float] = None
    c_star_estimate: Optional[float] = None
    dirichlet_norm: float = 0.0
    mode: str = "exact"
    pairs_scanned: int = 0
    degenerate: bool = False

    section: ClassVar[str] = "holder"

    def report_lines(self) -> list[ReportLine]:
        return [
            ReportLine("argmax_pair", self.argmax_pair),
            ReportLine("c_star_estimate", self.c_star_estimate),
            ReportLine("degenerate", self.degenerate),
            ReportLine("dirichlet_norm", self.dirichlet_norm),
            ReportLine("mode", self.mode),
            ReportLine("pairs_scanned", self.pairs_scanned),
            ReportLine("ratio_at_constraints", self.ratio_at_constraints),
            ReportLine("seminorm", self.seminorm),
        ]


class PropertyEntry(BaseModel):
    """A nonnegative residual with its verdict."""

    name: str
    value: float
    tolerance: float
    passed: bool
    lower_bound: bool = False
    """Passes when ``value > tolerance`` instead of ``value <= tolerance``."""
    degenerate: bool = False
    details: dict[str, float] = Field(default_factory=dict)

    @classmethod
    def at_most(cls, name: str, value: float, tolerance: float, **kwargs: Any) -> "PropertyEntry":
        return cls(name=name, value=value, tolerance=tolerance,
                   passed=value <= tolerance, **kwargs)

    @classmethod
    def above(cls, name: str, value: float, threshold: float, **kwargs: Any) -> "PropertyEntry":
        return cls(name=name, value=value, tolerance=threshold,
                   passed=value > threshold, lower_bound=True, **kwargs)


class PropertyReport(BaseModel):
    entries: dict[str, PropertyEntry] = Field(default_factory=dict)

    section: ClassVar[str] = "properties"

    def add(self, entry: PropertyEntry) -> None:
        self.entries[entry.name] = entry

    def __getitem__(self, name: str) -> PropertyEntry:
        return self.entries[name]

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries.values())

    def report_lines(self) -> list[ReportLine]:
        lines = []
        for name in sorted(self.entries):
            e = self.entries[name]
            lines.append(ReportLine(name, e.value, e.tolerance, e.passed))
            for key in sorted(e.details):
                lines.append(ReportLine(f"{name}.{key}", e.details[key]))
        return lines


class SingularFit(BaseModel):
    center: Point
    radii: list[float]
    """Sample radii, strictly decreasing."""
    exponent: float
    gamma: float
    residual: float
    expected_exponent: float
    gamma_at_expected: float
    """Coefficient refitted with the exponent held at ``(p-n)/(p-1)``."""
    dirac_weight: float

    section: ClassVar[str] = "singular"

    def report_lines(self) -> list[ReportLine]:
        return [
            ReportLine("center", self.center),
            ReportLine("dirac_weight", self.dirac_weight),
            ReportLine("expected_exponent", self.expected_exponent),
            ReportLine("exponent", self.exponent),
            ReportLine("gamma", self.gamma),
            ReportLine("gamma_at_expected", self.gamma_at_expected),
            ReportLine("radii", self.radii),
            ReportLine("residual", self.residual),
        ]


class StabilityReport(BaseModel):
    lhs: float
    rhs: float
    slack: float
    c_star: float
    x0: Point
    y0: Point
    exponent: float
    """Power the inequality is raised to: p, or p/(p-1) for 1 < p <= 2."""

    section: ClassVar[str] = "stability"

    @property
    def relative_slack(self) -> float:
        return self.slack / self.rhs if self.rhs > 0 else 0.0

    def report_lines(self) -> list[ReportLine]:
        return [
            ReportLine("c_star", self.c_star),
            ReportLine("exponent", self.exponent),
            ReportLine("lhs", self.lhs),
            ReportLine("relative_slack", self.relative_slack),
            ReportLine("rhs", self.rhs),
            ReportLine("slack", self.slack),
            ReportLine("x0", self.x0),
            ReportLine("y0", self.y0),
        ]


class GapReport(BaseModel):
    fraction_outside: Optional[float]
    """Share of the energy outside the ball. None when the field has no energy."""
    energy_outside: float
    energy_total: float
    center: Point
    radius: float
    degenerate: bool = False

    section: ClassVar[str] = "gap"

    def report_lines(self) -> list[ReportLine]:
        return [
            ReportLine("center", self.center),
            ReportLine("degenerate", self.degenerate),
            ReportLine("energy_outside", self.energy_outside),
            ReportLine("energy_total", self.energy_total),
            ReportLine("fraction_outside", self.fraction_outside),
            ReportLine("radius", self.radius),
        ]
