import sys

from learngame.cli import main

sys.exit(main())
