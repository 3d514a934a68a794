"""Console entry point for the ``seedwave`` script."""

import sys

from .cli import parse_and_dispatch


def main() -> None:
    """Main entry point for the application."""
    sys.exit(parse_and_dispatch())


if __name__ == "__main__":
    main()
