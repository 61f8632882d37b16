from __future__ import annotations

import logging
import sys

from episolve.cli import app
from episolve.config import Settings


def main() -> None:
    try:
        settings = Settings.from_env()
    except RuntimeError as exc:
        sys.stderr.write(f"Error: {exc}\n")
        raise SystemExit(2) from None
    logging.basicConfig(
        level=settings.log_level,
        format="%(asctime)s %(levelname)s %(name)s %(message)s",
    )
    app()


if __name__ == "__main__":
    main()
