"""Local unitary equivalence of bipartite quantum states, canonical forms of
Schmidt-correlated states, and correlation measures."""

__version__ = "0.1.0"

from .canonical import (
    GeneralSCForm,
    StandardForm2Q,
    general_sc_equivalent,
    pure_sc_equivalent,
    sc_lu_equivalent,
    sc_lu_witness,
    sc_separable,
    standard_form_2q,
    standard_form_general,
    theorem2_family,
)
from .correlations import (
    CorrelationReport,
    classical_correlation_measured,
    classical_correlation_relative,
    correlation_report,
    discord_relative_entropy,
    entropy_via_delta,
    er_equals_dr_check,
    mutual_information,
)
from .equivalence import (
    EquivalenceVerdict,
    Status,
    brute_force_lu_search,
    decide_lu_equivalence,
    extract_tensor_factors,
    nondegenerate_lu_test,
)
from .exceptions import (
    DimensionMismatch,
    NotDecomposable,
    NotHermitian,
    NotNormalized,
    NotPSD,
    NotUnitary,
    TraceNotOne,
    ValidationError,
)
from .invariants import invariants_I, pure_lu_equivalent, pure_lu_witness, representation_of, schmidt_decompose
from .io import parse_state_file, serialize_state_file
from .linalg import kron, partial_trace, partial_transpose, realign, relative_entropy, von_neumann_entropy
from .states import (
    DensityMatrix,
    LocalUnitary2,
    PureState,
    SCCoefficients,
    bell_density,
    haar_unitary,
    random_density,
    random_sc,
    sc_embed,
)
from .verify import VerifyReport, run_verify_suite
