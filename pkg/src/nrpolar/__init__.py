"""5G NR polar codes: parameter selection, encoding chain and SC/SCL decoding."""
from ._backend import IMPLEMENTATION
from .config import ChannelKind, CodeConfig, CrcPoly, RmMode, select_params
from .construct import SubchannelAllocation, assemble_u, build_frozen_set, default_sequence
from .decode import (AssistMode, CrcContext, DecodeResult, DecoderPolicy, ml_decode_bruteforce,
                     sc_decode_bec, sc_decode_llr, scl_decode)
from .errors import PolarError
from .kernel import polar_transform
from .pipeline import EncodeTrace, decode, encode, prepare_decoder_input
from .ratematch import ERASED, Domain
from .sim import ChannelModel, Modulation, SimReport, bec_polarize, run_bler, run_far

__all__ = [
    "IMPLEMENTATION", "ChannelKind", "CodeConfig", "CrcPoly", "RmMode", "select_params",
    "SubchannelAllocation", "assemble_u", "build_frozen_set", "default_sequence",
    "AssistMode", "CrcContext", "DecodeResult", "DecoderPolicy", "ml_decode_bruteforce",
    "sc_decode_bec", "sc_decode_llr", "scl_decode", "PolarError", "polar_transform",
    "EncodeTrace", "decode", "encode", "prepare_decoder_input", "ERASED", "Domain",
    "ChannelModel", "Modulation", "SimReport", "bec_polarize", "run_bler", "run_far",
]
