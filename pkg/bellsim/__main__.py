import sys

from bellsim.main import main

sys.exit(main())
