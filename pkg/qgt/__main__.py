import sys

from qgt.main import main


sys.exit(main())
