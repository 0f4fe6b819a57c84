import sys

from redsbo.harness.cli import main

sys.exit(main())
