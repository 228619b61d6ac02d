"""Allow ``python -m atnorm`` as an alias for the ``atnorm`` script."""

import sys

from .cli import main

if __name__ == "__main__":
    sys.exit(main())
