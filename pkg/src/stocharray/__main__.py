import sys

from stocharray.cli import main

sys.exit(main())
