import sys

from synsetlink.cli import main

sys.exit(main())
