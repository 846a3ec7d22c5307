"""lllhnf entry point. See ``lllhnf.cli`` for the subcommands."""

from __future__ import annotations

import sys

from lllhnf.cli import main

if __name__ == "__main__":
    sys.exit(main())
