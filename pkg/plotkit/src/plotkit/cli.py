"""plotkit CLI: plotkit <kind> --in <files...> --out <image.png>"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import __version__
from .readers import InputError
from .render import FIGURE_KINDS, FigureSpec, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plotkit",
        description="Render figures from ris-sizer CSV/JSON artifacts.",
    )
    parser.add_argument("--version", action="version", version=f"plotkit {__version__}")
    parser.add_argument("kind", choices=FIGURE_KINDS, help="figure kind")
    parser.add_argument(
        "--in", dest="inputs", nargs="+", required=True, metavar="FILE",
        help="input artifact file(s)",
    )
    parser.add_argument("--out", required=True, help="output PNG path")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        result = render(FigureSpec(kind=args.kind, inputs=tuple(args.inputs), output=args.out))
    except InputError as exc:
        print(f"plotkit: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"plotkit: i/o error: {exc}", file=sys.stderr)
        return 3
    print(f"wrote {result.path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
