"""Certified multiplicity bounds for polynomial restrictions to foliation leaves."""

from .errors import (
    BudgetExceededError,
    CertificateError,
    DomainError,
    HypothesisError,
    InconclusiveError,
    LeafmultError,
    ParseError,
    RegenerationRequest,
    RingMismatchError,
)
from .extension import ExtensionWitness, MonodromicSubset, construct_witness, enumerate_monodromic
from .foliation import CommutationReport, FoliationContext, VectorField, check_commute, lie_derivative
from .germs import (
    FactorMultiplicities,
    GermSplit,
    NPConfig,
    PuiseuxBranchSet,
    factor_multiplicities,
    germ_divide,
    local_membership,
    local_multiplicity,
    newton_puiseux,
    split_common,
)
from .ideals import (
    Budget,
    GroebnerBasis,
    IdealPresentation,
    MonomialOrder,
    RadicalCertificate,
    attempt_radical,
    dimension,
    groebner,
    ideal_power,
    leading_term_ideal,
    multiplicity_zero_dim,
    normal_form,
    radical_membership,
)
from .jets import Jet2, jet_arith
from .manifest import ProblemManifest, load_trace, write_trace
from .pairs import (
    BoundLedger,
    BoundReport,
    LedgerStep,
    NoetherianPair,
    PipelineOptions,
    find_transverse_pair,
    isolated_locus_reduction,
    jacobian_extension,
    make_pair,
    nonisolated_bound,
    poisson_extension,
    radical_extension,
)
from .poly import Polynomial, gcd, parse_polynomial, squarefree_part
from .verify import run_all_suites, run_suite, verify_trace

__all__ = [
    "BoundLedger",
    "BoundReport",
    "Budget",
    "BudgetExceededError",
    "CertificateError",
    "CommutationReport",
    "DomainError",
    "ExtensionWitness",
    "FactorMultiplicities",
    "FoliationContext",
    "GermSplit",
    "GroebnerBasis",
    "HypothesisError",
    "IdealPresentation",
    "InconclusiveError",
    "Jet2",
    "LeafmultError",
    "LedgerStep",
    "MonodromicSubset",
    "MonomialOrder",
    "NPConfig",
    "NoetherianPair",
    "ParseError",
    "PipelineOptions",
    "Polynomial",
    "ProblemManifest",
    "PuiseuxBranchSet",
    "RadicalCertificate",
    "RegenerationRequest",
    "RingMismatchError",
    "VectorField",
    "attempt_radical",
    "check_commute",
    "construct_witness",
    "dimension",
    "enumerate_monodromic",
    "factor_multiplicities",
    "find_transverse_pair",
    "gcd",
    "germ_divide",
    "groebner",
    "ideal_power",
    "isolated_locus_reduction",
    "jacobian_extension",
    "jet_arith",
    "leading_term_ideal",
    "lie_derivative",
    "load_trace",
    "local_membership",
    "local_multiplicity",
    "make_pair",
    "multiplicity_zero_dim",
    "newton_puiseux",
    "nonisolated_bound",
    "normal_form",
    "parse_polynomial",
    "poisson_extension",
    "radical_extension",
    "radical_membership",
    "run_all_suites",
    "run_suite",
    "split_common",
    "squarefree_part",
    "verify_trace",
    "write_trace",
]
