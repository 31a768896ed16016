"""Allow ``python -m mst_cover``."""
import sys

from .cli import main

sys.exit(main())
