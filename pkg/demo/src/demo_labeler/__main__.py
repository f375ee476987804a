import sys

from demo_labeler.cli import main

sys.exit(main())
