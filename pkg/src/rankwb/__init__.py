"""
Exact rank metric workbench: normalized ranks, almost representations of
group fragments and algebra patches, separation amplification by tensor
squaring and certified reduction modulo primes. All arithmetic is exact.
"""

import logging

__version__ = '0.1.0'

logging.getLogger(__name__).addHandler(logging.NullHandler())


def set_log_level(level):
    """Set the level of the ``rankwb`` logger (a ``logging`` level or name)."""
    logging.getLogger(__name__).setLevel(level)


from .errors import (WorkbenchError, InputError, FieldMismatchError,
                     BudgetExceeded, CertificationError)
from .field import FieldSpec, make_field, parse_field
from .matrix import (Matrix, rank, normalized_rank, rank_distance, tensor,
                     tensor_power, direct_sum, kernel_basis,
                     find_full_rank_minor, invertible_completion)
from .certify import (PartialGroupTable, AlmostRep, AlgebraPatch,
                      defect_report, align_basis, algebra_almost_rep_check,
                      group_algebra_apply)
from .perm import Permutation, permutation_matrix, embed_sofic_rep
from .jordan import (algebraic_multiplicity, jordan_profile_at,
                     jordan_tensor_blocks, verify_jordan_tensor)
from .amplify import (tensor_square_iterate, boost_separation,
                      weighted_combine, tensor_elimination_witness)
from .reduce import select_good_prime, reduce_mod_p
from .constructions import (regular_rep, amenable_extension_rep,
                            lupini_witnesses, folner_left_mult_rep)
