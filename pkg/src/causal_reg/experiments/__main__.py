"""Allow running as: python -m causal_reg.experiments <command> [flags]."""

import sys

from causal_reg.experiments.runner import main

sys.exit(main())
