"""Roman domination number of cylinders P_m x C_n via (min,+) powers of transfer matrices."""
from .errors import CapacityError, FormatError
from .oracle import (
    CylinderGraph,
    RomanFunction,
    border_loss_dp,
    border_loss_exhaustive,
    brute_force_gamma_R,
    diagonal_pattern,
    validate_rdf,
)
from .solver import (
    RecurrenceResult,
    RomanFormula,
    border_loss,
    find_recurrence,
    lower_bound,
    roman_number,
    roman_numbers,
    solve_formula,
    verify_loss_lemma,
)
from .transfer import arc_label, build_transfer_matrix, can_follow, newly_dominated
from .tropical import (
    INF,
    TropMatrix,
    min_diagonal,
    power_sequence,
    read_matrix,
    shift_difference,
    trop_mul,
    trop_scalar,
    write_matrix,
)
from .words import BORDER, STANDARD, WordTable, generate_words, letter_counts

__version__ = "0.1.0"
