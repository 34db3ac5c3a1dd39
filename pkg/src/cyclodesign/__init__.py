"""Trace codes {Tr(a x^(p^l+1) + b x) + h} over GF(p^m), their weight
distributions, and the 2-designs held by their fixed-weight supports."""

from .code import CodeSpec, CodewordId, WeightDistribution, code_spec, weight_distribution
from .designs import BlockSet, DesignParams, extract_blocks, verify_2design
from .field import FieldCtx, build_field

__all__ = [
    "BlockSet",
    "CodeSpec",
    "CodewordId",
    "DesignParams",
    "FieldCtx",
    "WeightDistribution",
    "build_field",
    "code_spec",
    "extract_blocks",
    "verify_2design",
    "weight_distribution",
]
__version__ = "0.1.0"
