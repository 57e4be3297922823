import sys

from dfzcodec.cli import main

sys.exit(main())
