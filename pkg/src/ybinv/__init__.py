"""Exact computation in the framed type-B Yokonuma-Hecke algebra Y_{d,n}^B,
its Markov trace, and the resulting invariants of framed type-B braids."""

from __future__ import annotations

from .algebra import (
    AlgebraElement,
    CBlock,
    CWord,
    DSplitWord,
    YAlgebra,
    builder,
    dimension,
    embed,
    enumerate_basis,
    from_c_coords,
    get_algebra,
    mul,
    to_c_coords,
    to_dsplit,
)
from .coxeter import SignedPermutation, standard_form, wdn_standard_form
from .errors import ParameterError, ParseError, SingularMatrixError, SizeGuardError, YBInvError
from .exact import (
    CyclotomicScalar,
    LaurentScalar,
    ScalarDomain,
    canonical_string,
    laurent_substitute,
    parse_cyclotomic,
)
from .invariant import (
    BraidWordB,
    InvariantValue,
    compute_invariant,
    invariant_equal,
    markov_move,
    parse_braid,
)
from .trace import (
    CyclicFunction,
    SubsetSolution,
    TraceParams,
    convolve,
    dft,
    markov_trace,
    subset_solution,
)

__version__ = "0.1.0"

__all__ = [
    "AlgebraElement",
    "BraidWordB",
    "CBlock",
    "CWord",
    "CyclicFunction",
    "CyclotomicScalar",
    "DSplitWord",
    "InvariantValue",
    "LaurentScalar",
    "ParameterError",
    "ParseError",
    "ScalarDomain",
    "SignedPermutation",
    "SingularMatrixError",
    "SizeGuardError",
    "SubsetSolution",
    "TraceParams",
    "YAlgebra",
    "YBInvError",
    "builder",
    "canonical_string",
    "compute_invariant",
    "convolve",
    "dft",
    "dimension",
    "embed",
    "enumerate_basis",
    "from_c_coords",
    "get_algebra",
    "invariant_equal",
    "laurent_substitute",
    "markov_move",
    "markov_trace",
    "mul",
    "parse_braid",
    "parse_cyclotomic",
    "standard_form",
    "subset_solution",
    "to_c_coords",
    "to_dsplit",
    "wdn_standard_form",
]
