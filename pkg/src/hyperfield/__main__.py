import sys

from hyperfield.cli import main

sys.exit(main())
