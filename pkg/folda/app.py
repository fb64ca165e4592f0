#!/usr/bin/env python
# -*- coding:utf-8 -*-
from __future__ import annotations

from typing import Optional, Sequence
import sys

from folda.console import create_cli
from folda.core.errors import handle_error


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = create_cli()
    try:
        args = parser.parse_args(argv)
        return args.handler(args)
    except Exception as exc:
        return handle_error(exc)


if __name__ == "__main__":
    sys.exit(main())
