import sys

from hfbgeo.cli import main

sys.exit(main())
