import sys

from secidx.cli import main

sys.exit(main())
