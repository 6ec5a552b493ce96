import sys

from projcauchy.cli import main

sys.exit(main())
