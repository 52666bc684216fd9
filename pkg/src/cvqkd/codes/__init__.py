"""
Forward error correction.

This module exports the LDPC, convolutional and IRCC codes, the trellis
kernels they share, EXIT-chart measurement and the uniform codec interface
used by the reconciliation systems.
"""

from cvqkd.codes.codecs import Codec, ConvCodec, IrccCodec, LdpcCodec, build_codec
from cvqkd.codes.conv import ConvCode, cc_decode, cc_encode, exhaustive_ml_decode
from cvqkd.codes.exit import (
    component_exit_curve,
    default_grid,
    exit_inner,
    exit_outer,
    tunnel_is_open,
)
from cvqkd.codes.interleaver import deinterleave, interleave, permutation
from cvqkd.codes.ircc import (
    IrccCode,
    IrccProfile,
    ircc_decode,
    ircc_decode_trajectory,
    ircc_encode,
    urc_inverse,
    urc_transform,
)
from cvqkd.codes.ldpc import (
    ParityCheckMatrix,
    construct_regular,
    decode_bf,
    decode_bp,
    encode,
    load_alist,
    save_alist,
    syndrome,
)
from cvqkd.codes.mutual_info import (
    MiEstimate,
    apriori_llrs,
    j_function,
    j_inverse,
    mi_estimate,
    mi_estimate_detail,
)
from cvqkd.codes.trellis import Trellis

__all__ = [
    # LDPC
    "ParityCheckMatrix",
    "construct_regular",
    "load_alist",
    "save_alist",
    "syndrome",
    "encode",
    "decode_bp",
    "decode_bf",
    # Convolutional codes
    "Trellis",
    "ConvCode",
    "cc_encode",
    "cc_decode",
    "exhaustive_ml_decode",
    # IRCC
    "IrccProfile",
    "IrccCode",
    "ircc_encode",
    "ircc_decode",
    "ircc_decode_trajectory",
    "urc_transform",
    "urc_inverse",
    # EXIT
    "MiEstimate",
    "j_function",
    "j_inverse",
    "apriori_llrs",
    "mi_estimate",
    "mi_estimate_detail",
    "default_grid",
    "exit_inner",
    "exit_outer",
    "component_exit_curve",
    "tunnel_is_open",
    # Interleaving
    "permutation",
    "interleave",
    "deinterleave",
    # Codec interface
    "Codec",
    "LdpcCodec",
    "ConvCodec",
    "IrccCodec",
    "build_codec",
]
