"""Elliptic-curve GOST-like blind signatures with an operation-count cost model."""

from .codec import registry_lookup
from .curve import INFINITY, CurveParams, Point, validate_params
from .field import ModInt
from .protocol import (
    BlindingFactors,
    KeyPair,
    Signature,
    Variant,
    blind,
    keygen,
    message_to_scalar,
    run_protocol,
    session_init,
    sign,
    unblind,
    verify,
)

__all__ = [
    "INFINITY",
    "BlindingFactors",
    "CurveParams",
    "KeyPair",
    "ModInt",
    "Point",
    "Signature",
    "Variant",
    "blind",
    "keygen",
    "message_to_scalar",
    "registry_lookup",
    "run_protocol",
    "session_init",
    "sign",
    "unblind",
    "validate_params",
    "verify",
]
