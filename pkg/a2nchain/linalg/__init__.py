from a2nchain.linalg.tensor import (
    DEFAULT_EIG_CAP,
    commutator,
    eig,
    elementary_matrix,
    frobenius,
    identity,
    is_finite,
    kron,
    num_derivative,
    partial_trace,
    partial_transpose,
    permutation_operator,
    relative_residual,
    site_embed,
    trace_out,
)

__all__ = [
    "DEFAULT_EIG_CAP",
    "commutator",
    "eig",
    "elementary_matrix",
    "frobenius",
    "identity",
    "is_finite",
    "kron",
    "num_derivative",
    "partial_trace",
    "partial_transpose",
    "permutation_operator",
    "relative_residual",
    "site_embed",
    "trace_out",
]
