"""Words with constants over symmetric groups.

Normal forms and norms of words in F_r * S_n, exact and sampled image
diameters of the induced word maps, constructive diameter certificates,
the quantitative diameter bounds, and a compiler turning any self-map of a
finite simple group into a one-variable word with constants.
"""

__version__ = "0.1.0"

from .exceptions import BudgetExceeded, CoveringError, InternalContradiction, InvalidInput, WordMapError
from .perm import (
    ConjugacyClass,
    EnumeratedGroup,
    Permutation,
    alternating_group,
    conjugacy_classes,
    format_cycle_notation,
    group_closure,
    hamming_distance,
    hamming_norm,
    parse_cycle_notation,
    parse_group,
    symmetric_group,
)
from .words import (
    ContentWord,
    IndexClassification,
    Letter,
    WordWithConstants,
    classify,
    commutator,
    content,
    elementary_reduction,
    is_strong,
    norms,
    reduce,
    reduction_chain,
)
from .evaluate import (
    ImageReport,
    diameter_sampled,
    evaluate,
    exact_diameter,
    image_exhaustive,
    is_mixed_identity,
)
from .schreier import (
    LemmaConditions,
    PartialSchreierGraph,
    WitnessCertificate,
    check_conditions,
    complete_partial,
    construct_witness,
    largest_feasible_d,
)
from .bounds import BoundReport, find_small_critical_constant, master_inequality, theorem_bounds
from .interpolate import (
    CoveringData,
    InterpolationCertificate,
    SeparatorWord,
    build_delta,
    build_separator,
    counting_lower_bound,
    covering_number,
    interpolate,
)
from .dsl import parse_word, word_from_text
