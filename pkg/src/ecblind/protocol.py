"""GOST-like blind signatures over an elliptic curve.

Roles: the signer holds a key pair and opens one session per signature; the
requester blinds a message scalar against the session point R, the signer
signs the blinded value, and the requester unblinds the share into (X, s).
A signature verifies when s*G == m*X + Q.

The generalized scheme uses three blinding factors (t1, t2, t3); each educed
variant pins one of them (t1 = 1, t2 = 0 or t3 = 0) and drops the work it
would have cost.

Every arithmetic step that the cost model prices (EC scalar multiplication,
EC addition, scalar multiply/add/invert mod n) goes through ``_Ops`` so an
optional counter can tally it. Counting never changes results.
"""

from __future__ import annotations

import enum
import hashlib
import secrets
import threading
from dataclasses import dataclass, field
from typing import NamedTuple, Protocol

from .curve import INFINITY, CurveParams, Point, add, is_on_curve, scalar_mul
from .field import ModInt

MAX_ATTEMPTS = 64


class ProtocolError(Exception):
    pass


class SessionConsumed(ProtocolError):
    """A signer session was asked to sign a second time."""


class RetryExhausted(ProtocolError):
    """Degenerate random draws persisted past the retry bound."""


class DegenerateTranscript(ProtocolError):
    """A quantity that has to be inverted is zero."""


class Variant(enum.Enum):
    GENERALIZED = "generalized"
    EDUCED_I = "educed-i"
    EDUCED_II = "educed-ii"
    EDUCED_III = "educed-iii"

    @classmethod
    def parse(cls, text: str) -> Variant:
        key = text.strip().lower().replace("_", "-")
        aliases = {"educed1": "educed-i", "educed2": "educed-ii", "educed3": "educed-iii"}
        return cls(aliases.get(key, key))


class Counter(Protocol):
    def record(self, op: str) -> None: ...


class RandomSource(Protocol):
    def randrange(self, start: int, stop: int) -> int: ...


def default_rng() -> RandomSource:
    return secrets.SystemRandom()


@dataclass(frozen=True)
class KeyPair:
    d: ModInt
    Q: Point


@dataclass
class SignerSession:
    k: ModInt
    R: Point
    r_scalar: ModInt
    consumed: bool = False
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def consume(self) -> None:
        with self._lock:
            if self.consumed:
                raise SessionConsumed("session already signed a blinded message")
            self.consumed = True


@dataclass(frozen=True)
class BlindingFactors:
    t1: ModInt
    t2: ModInt
    t3: ModInt


@dataclass(frozen=True)
class Signature:
    X: Point
    s: ModInt


@dataclass(frozen=True)
class SignerView:
    R: Point
    r_scalar: ModInt
    m_prime: ModInt
    s_prime: ModInt


@dataclass(frozen=True)
class RequesterResult:
    X: Point
    s: ModInt
    m: ModInt


class BlindOutput(NamedTuple):
    factors: BlindingFactors
    X: Point
    m_prime: ModInt


class _Ops:
    """Priced arithmetic. Tallies are held back until ``commit`` so that work
    spent on a discarded (degenerate) draw never reaches the counter."""

    def __init__(self, params: CurveParams, counter: Counter | None):
        self.params = params
        self.counter = counter
        self.pending: list[str] = []

    def _note(self, op: str) -> None:
        if self.counter is not None:
            self.pending.append(op)

    def ec_mul(self, k: ModInt, p: Point) -> Point:
        self._note("ec_mul")
        return scalar_mul(self.params, k.value, p)

    def ec_add(self, p: Point, r: Point) -> Point:
        self._note("ec_add")
        return add(self.params, p, r)

    def mul(self, a: ModInt, b: ModInt) -> ModInt:
        self._note("mul")
        return a * b

    def add(self, a: ModInt, b: ModInt) -> ModInt:
        self._note("add")
        return a + b

    def inv(self, a: ModInt) -> ModInt:
        self._note("inv")
        return a.inv()

    def commit(self) -> None:
        if self.counter is None:
            return
        for op in self.pending:
            self.counter.record(op)
        self.pending.clear()

    def discard(self) -> None:
        self.pending.clear()


def x_scalar(params: CurveParams, R: Point) -> ModInt:
    """x-coordinate of R reduced into the scalar ring."""
    return ModInt(R.x % params.n, params.n)


def keygen(
    params: CurveParams,
    rng: RandomSource | None = None,
    d: int | None = None,
    counter: Counter | None = None,
) -> KeyPair:
    rng = rng or default_rng()
    if d is None:
        d = rng.randrange(1, params.n)
    if not 1 <= d < params.n:
        raise ValueError("private key must lie in [1, n-1]")
    ops = _Ops(params, counter)
    d_ = params.scalar(d)
    Q = ops.ec_mul(d_, params.G)
    ops.commit()
    return KeyPair(d_, Q)


def session_init(
    params: CurveParams,
    rng: RandomSource | None = None,
    k: int | None = None,
    counter: Counter | None = None,
) -> SignerSession:
    """Pick a nonce k, publish R = kG. Nonces whose R has x = 0 mod n are redrawn."""
    rng = rng or default_rng()
    ops = _Ops(params, counter)
    for _ in range(MAX_ATTEMPTS):
        kk = rng.randrange(1, params.n) if k is None else k
        if not 1 <= kk < params.n:
            raise ValueError("nonce must lie in [1, n-1]")
        k_ = params.scalar(kk)
        R = ops.ec_mul(k_, params.G)
        r = x_scalar(params, R)
        if r:
            ops.commit()
            return SignerSession(k_, R, r)
        ops.discard()
        if k is not None:
            raise ValueError(f"nonce {k} gives x_R = 0 mod n")
    raise RetryExhausted("could not draw a usable nonce")


def message_to_scalar(message: bytes, params: CurveParams) -> ModInt:
    """SHA-256 of the message, big-endian, mod n; a zero result is re-hashed
    with a 4-byte big-endian counter appended (1, 2, ...) until nonzero."""
    digest = hashlib.sha256(message).digest()
    m = int.from_bytes(digest, "big") % params.n
    ctr = 0
    while m == 0:
        ctr += 1
        digest = hashlib.sha256(message + ctr.to_bytes(4, "big")).digest()
        m = int.from_bytes(digest, "big") % params.n
    return params.scalar(m)


def _draw_factors(params: CurveParams, variant: Variant, rng: RandomSource) -> BlindingFactors:
    n = params.n
    one, zero = params.scalar(1), params.scalar(0)
    t1 = one if variant is Variant.EDUCED_I else params.scalar(rng.randrange(1, n))
    t2 = zero if variant is Variant.EDUCED_II else params.scalar(rng.randrange(1, n))
    t3 = zero if variant is Variant.EDUCED_III else params.scalar(rng.randrange(1, n))
    return BlindingFactors(t1, t2, t3)


def check_factor_constraints(variant: Variant, f: BlindingFactors) -> list[str]:
    """Names of the variant constraints that ``f`` violates."""
    bad = []
    if not f.t1:
        bad.append("t1 != 0")
    if variant is Variant.EDUCED_I and f.t1.value != 1:
        bad.append("t1 = 1")
    if variant is Variant.EDUCED_II and f.t2:
        bad.append("t2 = 0")
    if variant is Variant.EDUCED_III and f.t3:
        bad.append("t3 = 0")
    return bad


def _blind_once(
    ops: _Ops, variant: Variant, R: Point, Q: Point, m: ModInt, f: BlindingFactors
) -> tuple[Point, ModInt] | None:
    params = ops.params
    xr = x_scalar(params, R)
    t1, t2, t3 = f.t1, f.t2, f.t3

    if variant is Variant.EDUCED_III:
        m_prime = ops.mul(ops.mul(xr, t1), m)
    else:
        denom = ops.add(ops.inv(m), t3)
        if not denom:
            return None
        scale = ops.inv(denom)
        if variant is Variant.EDUCED_I:
            m_prime = ops.mul(xr, scale)
        else:
            m_prime = ops.mul(ops.mul(xr, t1), scale)

    if variant is Variant.GENERALIZED:
        X = ops.ec_add(ops.ec_add(ops.ec_mul(t1, R), ops.ec_mul(t2, params.G)), ops.ec_mul(t3, Q))
    elif variant is Variant.EDUCED_I:
        X = ops.ec_add(ops.ec_add(R, ops.ec_mul(t2, params.G)), ops.ec_mul(t3, Q))
    elif variant is Variant.EDUCED_II:
        X = ops.ec_add(ops.ec_mul(t1, R), ops.ec_mul(t3, Q))
    else:
        X = ops.ec_add(ops.ec_mul(t1, R), ops.ec_mul(t2, params.G))

    if not m_prime or X.is_infinity:
        return None
    return X, m_prime


def blind(
    params: CurveParams,
    variant: Variant,
    R: Point,
    Q: Point,
    m: ModInt,
    rng: RandomSource | None = None,
    factors: BlindingFactors | None = None,
    counter: Counter | None = None,
) -> BlindOutput:
    """Requester step: derive X and the blinded message m'.

    Random factors are redrawn (up to MAX_ATTEMPTS) while m^-1 + t3 = 0,
    m' = 0 or X = O. Explicit ``factors`` are used as given and a degenerate
    choice raises DegenerateTranscript.
    """
    for p, label in ((R, "R"), (Q, "Q")):
        if p.is_infinity or not is_on_curve(params, p):
            raise ValueError(f"{label} must be a finite point on the curve")
    if m.modulus != params.n or not m:
        raise ValueError("message scalar must be a nonzero residue mod n")
    if factors is not None:
        bad = check_factor_constraints(variant, factors)
        if bad:
            raise ValueError(f"factors violate {variant.value} constraints: {bad}")

    rng = rng or default_rng()
    ops = _Ops(params, counter)
    for _ in range(MAX_ATTEMPTS):
        f = factors if factors is not None else _draw_factors(params, variant, rng)
        out = _blind_once(ops, variant, R, Q, m, f)
        if out is not None:
            ops.commit()
            return BlindOutput(f, out[0], out[1])
        ops.discard()
        if factors is not None:
            raise DegenerateTranscript("supplied blinding factors are degenerate")
    raise RetryExhausted("could not draw non-degenerate blinding factors")


def sign(
    params: CurveParams,
    keys: KeyPair,
    session: SignerSession,
    m_prime: ModInt,
    counter: Counter | None = None,
) -> ModInt:
    """Signer step: s' = d*x_R + k*m'. Burns the session."""
    if m_prime.modulus != params.n or not m_prime:
        raise ValueError("blinded message must be a nonzero residue mod n")
    session.consume()
    ops = _Ops(params, counter)
    s_prime = ops.add(ops.mul(keys.d, session.r_scalar), ops.mul(session.k, m_prime))
    ops.commit()
    return s_prime


def unblind(
    params: CurveParams,
    variant: Variant,
    factors: BlindingFactors,
    m: ModInt,
    m_prime: ModInt,
    s_prime: ModInt,
    X: Point,
    counter: Counter | None = None,
) -> Signature:
    if not m_prime:
        raise ValueError("blinded message must be nonzero")
    ops = _Ops(params, counter)
    t1, t2 = factors.t1, factors.t2
    if variant is Variant.EDUCED_II:
        s = ops.mul(ops.mul(ops.mul(t1, m), s_prime), ops.inv(m_prime))
    elif variant is Variant.EDUCED_I:
        s = ops.mul(m, ops.add(ops.mul(s_prime, ops.inv(m_prime)), t2))
    else:
        s = ops.mul(m, ops.add(ops.mul(ops.mul(t1, s_prime), ops.inv(m_prime)), t2))
    ops.commit()
    return Signature(X, s)


def verify(
    params: CurveParams,
    Q: Point,
    m: ModInt,
    sig: Signature,
    counter: Counter | None = None,
) -> bool:
    """True iff s*G == m*X + Q with X a finite curve point. Never raises."""
    try:
        X = sig.X
        if X.is_infinity or not is_on_curve(params, X) or not is_on_curve(params, Q):
            return False
        if sig.s.modulus != params.n or m.modulus != params.n:
            return False
        ops = _Ops(params, counter)
        lhs = ops.ec_mul(sig.s, params.G)
        rhs = ops.ec_add(ops.ec_mul(m, X), Q)
        ops.commit()
        return lhs == rhs
    except (AttributeError, TypeError, ValueError):
        return False


@dataclass(frozen=True)
class Transcript:
    """Everything produced by one honest run, split by who sees what."""

    variant: Variant
    keys: KeyPair
    factors: BlindingFactors
    view: SignerView
    result: RequesterResult
    verified: bool

    @property
    def signature(self) -> Signature:
        return Signature(self.result.X, self.result.s)


def run_protocol(
    params: CurveParams,
    variant: Variant,
    m: ModInt,
    rng: RandomSource | None = None,
    keys: KeyPair | None = None,
    counter: Counter | None = None,
) -> Transcript:
    """One honest run: (keygen), session, blind, sign, unblind, verify."""
    rng = rng or default_rng()
    if keys is None:
        keys = keygen(params, rng, counter=counter)
    session = session_init(params, rng, counter=counter)
    factors, X, m_prime = blind(params, variant, session.R, keys.Q, m, rng, counter=counter)
    s_prime = sign(params, keys, session, m_prime, counter=counter)
    sig = unblind(params, variant, factors, m, m_prime, s_prime, X, counter=counter)
    ok = verify(params, keys.Q, m, sig, counter=counter)
    view = SignerView(session.R, session.r_scalar, m_prime, s_prime)
    return Transcript(variant, keys, factors, view, RequesterResult(sig.X, sig.s, m), ok)


def derive_unblinding_factors(
    view: SignerView,
    result: RequesterResult,
    variant: Variant,
    t1_choice: ModInt | None = None,
) -> BlindingFactors:
    """Blinding factors that would have turned signer view ``view`` into the
    requester output ``result``.

    Such factors existing for every (view, result) pair is what makes the
    scheme blind. The generalized scheme has one spare degree of freedom, so
    the caller fixes t1 and t2, t3 follow.
    """
    n = view.m_prime.modulus
    xr, mp, sp = view.r_scalar, view.m_prime, view.s_prime
    s, m = result.s, result.m
    one, zero = ModInt(1, n), ModInt(0, n)

    def inv(v: ModInt, what: str) -> ModInt:
        if not v:
            raise DegenerateTranscript(f"{what} is zero and cannot be inverted")
        return v.inv()

    m_inv = inv(m, "m")
    mp_inv = inv(mp, "m'")
    if variant is Variant.EDUCED_I:
        t1 = one
        t2 = m_inv * s - mp_inv * sp
        t3 = mp_inv * xr - m_inv
    elif variant is Variant.EDUCED_II:
        sp_inv = inv(sp, "s'")
        t1 = sp_inv * mp * s * m_inv
        t2 = zero
        t3 = m_inv * (xr * sp_inv * s - one)
        if not t1:
            raise DegenerateTranscript("s = 0 forces t1 = 0")
    elif variant is Variant.EDUCED_III:
        xr_inv = inv(xr, "x_R")
        t1 = mp * xr_inv * m_inv
        t2 = m_inv * (s - xr_inv * sp)
        t3 = zero
    else:
        if t1_choice is None or not t1_choice:
            raise ValueError("generalized scheme needs a nonzero t1_choice")
        t1 = ModInt(t1_choice.value, n)
        t3 = mp_inv * xr * t1 - m_inv
        t2 = m_inv * s - t1 * sp * mp_inv
    return BlindingFactors(t1, t2, t3)


def check_blinding(
    params: CurveParams,
    Q: Point,
    view: SignerView,
    result: RequesterResult,
    factors: BlindingFactors,
    variant: Variant,
) -> dict[str, bool]:
    """Evaluate each blinding function of ``variant`` on (view, factors) and
    compare against ``result``."""
    t1, t2, t3 = factors.t1, factors.t2, factors.t3
    m, xr = result.m, view.r_scalar
    # The variant's own blinding functions are used unchanged; zeroed factors
    # make the generalized forms collapse onto the educed ones.
    if variant is Variant.EDUCED_III:
        mp = xr * t1 * m
    else:
        denom = m.inv() + t3
        mp = xr * t1 * denom.inv() if denom else None
    X = add(
        params,
        add(params, scalar_mul(params, t1.value, view.R), scalar_mul(params, t2.value, params.G)),
        scalar_mul(params, t3.value, Q),
    )
    if variant is Variant.EDUCED_II:
        s = t1 * m * view.s_prime * view.m_prime.inv()
    else:
        s = m * (t1 * view.s_prime * view.m_prime.inv() + t2)
    return {
        "constraints": not check_factor_constraints(variant, factors),
        "X": X == result.X,
        "m'": mp is not None and mp == view.m_prime,
        "s": s == result.s,
    }


__all__ = [
    "INFINITY",
    "BlindOutput",
    "BlindingFactors",
    "DegenerateTranscript",
    "KeyPair",
    "ProtocolError",
    "RequesterResult",
    "RetryExhausted",
    "SessionConsumed",
    "Signature",
    "SignerSession",
    "SignerView",
    "Transcript",
    "Variant",
    "blind",
    "check_blinding",
    "derive_unblinding_factors",
    "keygen",
    "message_to_scalar",
    "run_protocol",
    "session_init",
    "sign",
    "unblind",
    "verify",
]
