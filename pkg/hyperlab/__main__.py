import sys

from hyperlab.hyperlab.api.cli import main

sys.exit(main())
