"""
Constants for the weakly exact structure lattice toolkit

Contains exit codes, file schema versions, DOT styling and user-facing messages.
"""

# Exit Codes
EXIT_OK = 0
EXIT_CHECKS_FAILED = 1
EXIT_VALIDATION_ERROR = 2
EXIT_BUDGET_EXCEEDED = 3
EXIT_STRUCTURAL_ERROR = 4
EXIT_OUTPUT_ERROR = 5

# File Formats
CATEGORY_SCHEMA_VERSION = "1.0"
REPORT_SCHEMA_VERSION = "1.0"
JSON_INDENT = 2

# Field Configuration
SUPPORTED_PRIMES = (2, 3, 5, 7)
STABILITY_PRIMES = (2, 3, 5)

# Enumeration
DEFAULT_ENUMERATION_BUDGET = 10_000_000  # bound on p ** dim(B) for the general sweep
DEFAULT_NODE_BUDGET = 5_000_000  # bound on the number of nodes of the coordinate fast path
DEFAULT_COMPOSITION_DEPTH = 2
DEFAULT_VERIFY_SAMPLES = 24
MAX_TABLE_NODES = 5_000  # above this, meet/join tables and order matrices are not materialized
MAX_ORACLE_NODES = 2_000  # above this, per-node oracles are skipped unless requested
MAX_REPORTED_WITNESSES = 50

# Orientation Encoding
ORIENTATION_RIGHT = "R"  # arrow k -> k+1
ORIENTATION_LEFT = "L"  # arrow k+1 -> k

# DOT Styling
DOT_GRAPH_NAME = "lattice"
DOT_RANKDIR = "BT"
DOT_NODE_SHAPE = "circle"
DOT_CLOSED_SHAPE = "doublecircle"
DOT_EMPTY_LABEL = "0"

# Verify Suites
VERIFY_CHECKS = (
    "roundtrip",
    "baer",
    "pushout",
    "bifunctor",
    "vanishing",
    "obscure",
    "oracles",
    "modularity",
    "boolean",
    "field-stability",
)

# Error Messages
ERROR_NOT_PRIME = "Field characteristic must be one of 2, 3, 5, 7."
ERROR_BAD_ORIENTATION = "Orientation must be a string of 'L'/'R' of length n-1."
ERROR_NOT_BRICK = "Indecomposable has an endomorphism ring larger than the field."
ERROR_DUPLICATE_INDECOMPOSABLE = "Two listed indecomposables are isomorphic."
ERROR_QUIVER_MISMATCH = "Representations live over different quivers or fields."
ERROR_NOT_CLOSED = "closed_join expects closed sub-bimodules."

# Conventions recorded in every report
CONVENTION_BASIS_ORDER = (
    "global coordinates: Ext blocks sorted by (C index, A index), then local Ext basis order"
)
CONVENTION_SCALARS = (
    "each Ext basis vector is a unit cocycle on a non-pivot coordinate of the "
    "coboundary row space; relations hold up to the reported nonzero scalar"
)
CONVENTION_RIGHT_ACTION = (
    "right action matrices act on column vectors, so act(c*c') = act(c') @ act(c)"
)
TRUNCATION_MIDDLE_EXACT = (
    "middle-exactness tested for X indecomposable and N-sequences realized from "
    "basis classes of the Peirce blocks of N"
)
TRUNCATION_COMPOSITION = (
    "composition search: first inflations from basis classes, second inflations "
    "from pushouts of basis classes along Hom-basis morphisms (depth 1) and Baer "
    "sums of two such classes (depth 2)"
)
