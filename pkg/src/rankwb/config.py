"""
Run configuration defaults. Values in this module may be overridden through
environment variables (``RANKWB_BUDGET``) or command line flags; a flag always
takes precedence over the environment.
"""

import os

from .errors import BudgetExceeded, InputError

# Largest matrix dimension any amplification step may materialize
DEFAULT_SIZE_BUDGET = 16384

# Smallest prime tried by select_good_prime()
DEFAULT_PRIME_START = 2

# Field used when a file or flag does not name one
DEFAULT_FIELD = {'kind': 'Q'}

# Seed of every randomized routine (demo, test fixtures)
RANDOM_SEED = 12345

# Prime fields are capped so residues fit in double-width machine words
PRIME_LIMIT = 2**61

BUDGET_ENV_VAR = 'RANKWB_BUDGET'


def size_budget(override=None):
    """
    Resolve the active size budget.

    Parameter ``override`` (``int`` or ``None``):
        Value given on the command line. Takes precedence over the
        ``RANKWB_BUDGET`` environment variable, which in turn takes
        precedence over :py:data:`DEFAULT_SIZE_BUDGET`.
    """
    if override is not None:
        value, origin = override, '--budget'
    elif os.environ.get(BUDGET_ENV_VAR):
        value, origin = os.environ[BUDGET_ENV_VAR], BUDGET_ENV_VAR
    else:
        return DEFAULT_SIZE_BUDGET

    try:
        budget = int(value)
    except (TypeError, ValueError):
        raise InputError('size_budget(): %s must be an integer, got %r'
                         % (origin, value)) from None
    if budget <= 0:
        raise InputError('size_budget(): %s must be positive, got %i'
                         % (origin, budget))
    return budget


def check_budget(size, budget, what):
    """Raise :py:class:`BudgetExceeded` when ``size`` rows exceed ``budget``."""
    if size > budget:
        raise BudgetExceeded('%s: size %i exceeds the budget of %i rows'
                             % (what, size, budget), size=size, budget=budget)
