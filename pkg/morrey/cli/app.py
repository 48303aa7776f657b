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
"""``morrey`` command line."""

import logging
import sys
from typing import Any, Optional

import click
import numpy as np

from .._logging import setup_logging
from ..chain import finite_chain, verify_chain
from ..config import ConfigManager
from ..errors import ChainError, ConfigError
from .experiment import EXIT_INVALID, EXIT_IO, EXIT_OK, run_experiment

log = logging.getLogger(__name__)


def _floats(text: str) -> list[float]:
    try:
        return [float(s) for s in text.split(",") if s.strip()]
    except ValueError as e:
        raise click.BadParameter(f"expected comma separated numbers, got {text!r}") from e


@click.group()
@click.option("--debug", is_flag=True, help="Show every log record.")
def cli(debug: bool) -> None:
    """Extremals of Morrey's inequality by constrained energy descent."""
    setup_logging(debug)


@cli.command("run")
@click.option("--config", "config_file", type=click.Path(dir_okay=False),
              help="key=value config file; flags override its values.")
@click.option("--n", type=int)
@click.option("--ell", type=int)
@click.option("--k", type=int)
@click.option("--p", type=float)
@click.option("--tau", type=float)
@click.option("--iters", "max_iters", type=int)
@click.option("--adaptive/--fixed-tau", default=None)
@click.option("--momentum/--no-momentum", default=None, help="Accelerated descent with restarts.")
@click.option("--resume", type=click.Path(dir_okay=False), help="Checkpoint archive to continue from.")
@click.option("--out", type=click.Path(file_okay=False))
@click.option("--seed", type=int)
@click.option("--analysis", help="Comma separated analyses to run.")
@click.option("--levels", help="Comma separated quasiconcavity levels.")
def run_command(config_file: Optional[str], **flags: Any) -> None:
    """Run the descent and the analysis suite, then write the artifacts."""
    try:
        manager = ConfigManager(config_file, **flags)
    except ConfigError as e:
        log.error(f"invalid configuration: {e}")
        sys.exit(EXIT_INVALID)
    except OSError as e:
        log.error(f"cannot read config {config_file}: {e}")
        sys.exit(EXIT_IO)
    sys.exit(run_experiment(manager.C))


@cli.command("chain")
@click.option("--x", "x", required=True, help="First point, comma separated.")
@click.option("--y", "y", required=True, help="Second point, comma separated.")
@click.option("--R", "R", type=float, required=True, help="Radius of the avoided ball.")
def chain_command(x: str, y: str, R: float) -> None:
    """Build and verify a finite chain between two points outside B_2R(0)."""
    try:
        chain = finite_chain(np.array(_floats(x)), np.array(_floats(y)), R)
    except ChainError as e:
        log.error(f"chain error: {e}")
        sys.exit(EXIT_INVALID)
    verification = verify_chain(chain)
    click.echo(chain.to_record())
    click.echo(verification.to_record())
    sys.exit(EXIT_OK if verification.passed else EXIT_INVALID)


def run() -> None:
    """run script entry"""
    cli()


if __name__ == "__main__":
    run()
