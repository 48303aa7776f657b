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
"""Plain-text field archives.

An archive is a YAML header, a ``---`` separator line and the node values
written with 17 significant digits, so that a save/load round trip is
bit-exact::

    #morrey-field-archive
    format_version: 1
    n: 2
    ell: 6
    k: 10
    ...
    ---
    <N rows of N values>
"""

import io
import logging
from pathlib import Path
from typing import NamedTuple, Optional, Union

import numpy as np
import yaml
from pydantic import BaseModel, ValidationError, validator

from ..errors import ArchiveError, FieldError, GridError
from .grid import make_grid
from .scalar import ScalarField

log = logging.getLogger(__name__)

FORMAT_VERSION = 1
MAGIC = "#morrey-field-archive"
SEPARATOR = "---"


class ArchiveHeader(BaseModel):
    format_version: int = FORMAT_VERSION
    n: int
    ell: int
    k: int
    p: Optional[float] = None
    """Exponent the field was computed for, if any."""
    iteration: int = 0
    energy: Optional[float] = None
    tol: Optional[float] = None
    """Absolute residual threshold of the run that wrote the checkpoint."""
    tau: Optional[float] = None
    """Last accepted step size."""
    shape: list[int]

    @validator("format_version")
    def validate_version(cls, v: int) -> int:
        if v != FORMAT_VERSION:
            raise ValueError(f"unsupported archive format version {v}, expected {FORMAT_VERSION}")
        return v


class FieldArchive(NamedTuple):
    header: ArchiveHeader
    field: ScalarField
    path: Optional[Path] = None


def save_field(field: ScalarField,
               destination: Union[str, Path],
               p: Optional[float] = None,
               iteration: int = 0,
               energy: Optional[float] = None,
               tol: Optional[float] = None,
               tau: Optional[float] = None) -> FieldArchive:
    """Write ``field`` to ``destination``."""
    grid = field.grid
    header = ArchiveHeader(n=grid.n, ell=grid.ell, k=grid.k, p=p,
                           iteration=iteration, energy=energy, tol=tol, tau=tau,
                           shape=list(grid.shape))
    buf = io.StringIO()
    buf.write(MAGIC + "\n")
    yaml.safe_dump(header.dict(), buf, sort_keys=False)
    buf.write(SEPARATOR + "\n")
    np.savetxt(buf, field.values, fmt="%.17g")

    path = Path(destination)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(buf.getvalue(), encoding="utf-8")
    except OSError as e:
        raise ArchiveError(f"cannot write archive {path}: {e}") from e
    log.debug(f"saved field archive {path} (iteration={iteration})")
    return FieldArchive(header, field, path)


def load_archive(source: Union[str, Path]) -> FieldArchive:
    path = Path(source)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ArchiveError(f"cannot read archive {path}: {e}") from e

    lines = text.splitlines()
    if not lines or lines[0].strip() != MAGIC:
        raise ArchiveError(f"{path} is not a field archive")
    try:
        sep = lines.index(SEPARATOR)
    except ValueError as e:
        raise ArchiveError(f"{path}: missing header separator") from e

    try:
        raw = yaml.safe_load("\n".join(lines[1:sep]))
        header = ArchiveHeader.parse_obj(raw)
    except (yaml.YAMLError, ValidationError) as e:
        raise ArchiveError(f"{path}: invalid header: {e}") from e

    try:
        grid = make_grid(header.n, header.ell, header.k)
    except GridError as e:
        raise ArchiveError(f"{path}: invalid grid in header: {e}") from e

    try:
        values = np.loadtxt(io.StringIO("\n".join(lines[sep + 1:])),
                            dtype=np.float64, ndmin=header.n)
    except ValueError as e:
        raise ArchiveError(f"{path}: malformed values: {e}") from e

    if tuple(header.shape) != grid.shape or values.shape != grid.shape:
        raise ArchiveError(
            f"{path}: shape mismatch, header declares {tuple(header.shape)}, "
            f"grid implies {grid.shape}, payload has {values.shape}")
    try:
        field = ScalarField(grid, values, copy=False)
    except FieldError as e:
        raise ArchiveError(f"{path}: {e}") from e
    return FieldArchive(header, field, path)


def load_field(source: Union[str, Path]) -> ScalarField:
    """Read the field stored in an archive."""
    return load_archive(source).field
