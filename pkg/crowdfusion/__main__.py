"""python -m crowdfusion"""

import sys

from crowdfusion.cli import main


if __name__ == "__main__":
    sys.exit(main())
