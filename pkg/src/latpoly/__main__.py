import sys

from .cli_io.cli import main

sys.exit(main())
