"""Verification toolkit for Boolean and multi-valued control networks."""

from .stp import (
    CanonicalVector,
    DimensionOverflowError,
    LogicalMatrix,
    columnwise_stp,
    delta,
    hstack,
    identity,
    kron,
    power_reducing_matrix,
    stp,
    stp_vec,
    swap_matrix,
)
from .network import Bcn, Bn, StateSpace, Trajectory, VariableSpec, decode, encode, input_block, simulate, step

__version__ = "0.1.0"
