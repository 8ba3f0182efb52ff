import sys

from src.interfaces.cli.commands import main

sys.exit(main())
