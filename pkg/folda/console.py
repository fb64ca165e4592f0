#!/usr/bin/env python
# -*- coding:utf-8 -*-
from __future__ import annotations

import argparse

from folda.core.di import get_settings
from folda.core.errors import UsageError
from folda.core.log import configure_logging
from folda.interfaces.cli.commands import COMMANDS


class CliParser(argparse.ArgumentParser):
    """Reports usage problems as :class:`UsageError` instead of exiting."""

    def error(self, message: str):  # type: ignore[override]
        raise UsageError(f"{self.prog}: {message}")


def create_cli() -> CliParser:
    settings = get_settings()
    configure_logging(settings)

    parser = CliParser(
        prog=settings.app_name,
        description="Optimal partial-order alignments by directed unfolding",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.app_version}")
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND", required=True)

    for register in COMMANDS:
        register(subparsers)
    return parser
