"""Run the walsh-summability command line interface."""

import sys

from walsh_summability.cli import main

sys.exit(main())
