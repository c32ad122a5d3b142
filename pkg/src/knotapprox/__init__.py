"""Link polynomials, their Vassiliev sequences, and exact coefficient reconstruction."""

from .algebra import (
    ComplexHP,
    HalfGridLaurent,
    PiPolynomial,
    TwoVarLaurent,
    laurent_eval,
    laurent_op,
    pi_poly_eval,
    substitute_two_var,
)
from .approximation import (
    VassilievSequence,
    approx_eval,
    degree_estimate,
    finite_gen_fn,
    reconstruct_finite,
    reconstruct_infinite,
    sinc_coeffs,
    vandermonde_solve,
    vassiliev_consistency,
    vassiliev_from_laurent,
)
from .invariants import (
    alexander,
    fox_colorings,
    homfly,
    homfly_specialize,
    jones,
    kauffman_bracket,
    kauffman_specialize,
    q_polynomial,
    skein_check,
)
from .notation import (
    BraidWord,
    CorpusEntry,
    PDCode,
    components,
    load_corpus,
    parse_braid,
    parse_pd,
    torus_braid,
    writhe,
)

__version__ = "0.1.0"
