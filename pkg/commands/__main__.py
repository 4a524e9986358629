import sys

from commands.default_cmdsets import main

sys.exit(main())
