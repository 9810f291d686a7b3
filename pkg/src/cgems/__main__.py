import sys

from cgems.cli import main

sys.exit(main())
