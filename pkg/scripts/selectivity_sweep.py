#!/usr/bin/env python3
"""Single-gate selectivity sweep through the command-line front end.

Thin wrapper over `fockgate sweep`: scans the default drive-ratio grid for
the effective model and leaves sweep.csv in the output directory.
"""

import sys
from pathlib import Path

from fockgate.cli import main as cli_main


def main(argv=None):
    args = list(argv) if argv is not None else sys.argv[1:]
    out = args[0] if args else str(Path(__file__).with_name("sweep_out"))
    return cli_main(["sweep", "--model", "effective", "--seed", "7", "--out", out])


if __name__ == "__main__":
    sys.exit(main())
