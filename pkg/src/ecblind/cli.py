"""``ecblind`` command line: run the blind-signature protocol between a signer
and a requester through files.

Exit codes: 0 success / signature valid, 1 signature invalid, 2 I/O error,
3 bad curve or parameters, 4 malformed envelope or input, 5 protocol-state
violation (e.g. reusing a session).
"""

from __future__ import annotations

import argparse
import os
import random
import sys
import tempfile
from pathlib import Path

from . import protocol as P
from .codec import (
    CodecError,
    CurveFileError,
    Envelope,
    UnknownCurve,
    available_curves,
    encode_scalar,
    parse_curve_file,
    parse_envelope,
    point_hex,
    read_curve_params,
    registry_lookup,
)
from .costmodel import (
    SCHEME_COSTS,
    VARIANT_SCHEME,
    OpCounter,
    format_report,
    report_envelope,
    table3_report,
)
from .curve import MIN_SECURE_ORDER, CurveParams, InvalidCurve, scalar_mul, validate_params

EXIT_OK, EXIT_INVALID, EXIT_IO, EXIT_CURVE, EXIT_MALFORMED, EXIT_STATE = 0, 1, 2, 3, 4, 5


class CliError(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        super().__init__(message)


def load_curve(spec: str, test_mode: bool) -> CurveParams:
    """Resolve a registry name or a curve-file path."""
    try:
        if spec in available_curves():
            params = registry_lookup(spec)
        elif Path(spec).is_file():
            params = parse_curve_file(Path(spec).read_text(), test_mode=test_mode)
        else:
            raise UnknownCurve(spec)
    except (UnknownCurve, CurveFileError, InvalidCurve) as e:
        raise CliError(EXIT_CURVE, f"bad curve {spec!r}: {e}") from None
    if params.n <= MIN_SECURE_ORDER and not test_mode:
        raise CliError(
            EXIT_CURVE,
            f"curve {params.name} has a {params.n.bit_length()}-bit order (needs n > 2^160); "
            "pass --test-mode to use it anyway",
        )
    return params


def make_rng(seed: int | None) -> P.RandomSource:
    return random.Random(seed) if seed is not None else P.default_rng()


def read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise CliError(EXIT_IO, f"cannot read {path}: {e.strerror}") from None


def read_bytes(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as e:
        raise CliError(EXIT_IO, f"cannot read {path}: {e.strerror}") from None


def write_atomic(path: str, text: str) -> None:
    target = Path(path)
    try:
        fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.")
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except OSError as e:
        raise CliError(EXIT_IO, f"cannot write {path}: {e.strerror}") from None


def read_envelope(path: str, kind: str, params: CurveParams) -> Envelope:
    try:
        env = parse_envelope(read_text(path), expect=kind)
    except CodecError as e:
        raise CliError(EXIT_MALFORMED, f"{path}: {e}") from None
    if env.curve != params.name:
        raise CliError(EXIT_MALFORMED, f"{path}: envelope is for curve {env.curve}, not {params.name}")
    return env


def decoded(path: str, fn, *args):
    try:
        return fn(*args)
    except CodecError as e:
        raise CliError(EXIT_MALFORMED, f"{path}: {e}") from None


def load_private(path: str, params: CurveParams) -> P.KeyPair:
    env = read_envelope(path, "privkey", params)
    d = decoded(path, env.scalar, "d", params)
    Q = decoded(path, env.point, "q", params)
    if not d or scalar_mul(params, d.value, params.G) != Q:
        raise CliError(EXIT_MALFORMED, f"{path}: public point does not match private key")
    return P.KeyPair(d, Q)


def load_public(path: str, params: CurveParams):
    env = read_envelope(path, "pubkey", params)
    Q = decoded(path, env.point, "q", params)
    if Q.is_infinity:
        raise CliError(EXIT_MALFORMED, f"{path}: public key is the point at infinity")
    return Q


# --- subcommands ---------------------------------------------------------


def cmd_keygen(args, params: CurveParams) -> int:
    keys = P.keygen(params, make_rng(args.seed))
    q_hex = point_hex(params, keys.Q)
    priv = Envelope.build("privkey", params.name, d=encode_scalar(keys.d, params.n), q=q_hex)
    pub = Envelope.build("pubkey", params.name, q=q_hex)
    write_atomic(args.out_private, priv.serialize())
    write_atomic(args.out_public, pub.serialize())
    return EXIT_OK


def cmd_session(args, params: CurveParams) -> int:
    load_private(args.private, params)
    s = P.session_init(params, make_rng(args.seed))
    r_hex = point_hex(params, s.R)
    secret = Envelope.build(
        "session-secret", params.name, k=encode_scalar(s.k, params.n), r=r_hex, status="fresh"
    )
    write_atomic(args.out_secret, secret.serialize())
    write_atomic(args.out_r, Envelope.build("session", params.name, r=r_hex).serialize())
    return EXIT_OK


def cmd_blind(args, params: CurveParams) -> int:
    variant = P.Variant.parse(args.variant)
    R = decoded(args.session, read_envelope(args.session, "session", params).point, "r", params)
    if R.is_infinity:
        raise CliError(EXIT_MALFORMED, f"{args.session}: R is the point at infinity")
    Q = load_public(args.public, params)
    m = P.message_to_scalar(read_bytes(args.message), params)
    f, X, m_prime = P.blind(params, variant, R, Q, m, make_rng(args.seed))
    enc = lambda v: encode_scalar(v, params.n)  # noqa: E731
    write_atomic(args.out_blinded, Envelope.build("blinded", params.name, m_prime=enc(m_prime)).serialize())
    factors = Envelope.build(
        "factors",
        params.name,
        variant=variant.value,
        t1=enc(f.t1),
        t2=enc(f.t2),
        t3=enc(f.t3),
        x=point_hex(params, X),
        m=enc(m),
        m_prime=enc(m_prime),
    )
    write_atomic(args.out_factors, factors.serialize())
    return EXIT_OK


def cmd_sign(args, params: CurveParams) -> int:
    keys = load_private(args.private, params)
    secret = read_envelope(args.session_secret, "session-secret", params)
    if secret["status"] != "fresh":
        raise CliError(EXIT_STATE, f"{args.session_secret}: session already used")
    k = decoded(args.session_secret, secret.scalar, "k", params)
    R = decoded(args.session_secret, secret.point, "r", params)
    if not k or scalar_mul(params, k.value, params.G) != R:
        raise CliError(EXIT_MALFORMED, f"{args.session_secret}: R does not match nonce")
    r = P.x_scalar(params, R)
    if not r:
        raise CliError(EXIT_MALFORMED, f"{args.session_secret}: x_R = 0 mod n")
    m_prime = decoded(args.blinded, read_envelope(args.blinded, "blinded", params).scalar, "m_prime", params)
    if not m_prime:
        raise CliError(EXIT_MALFORMED, f"{args.blinded}: blinded message is zero")
    # Burn the session on disk before the share exists anywhere.
    write_atomic(args.session_secret, secret.replace(status="consumed").serialize())
    s_prime = P.sign(params, keys, P.SignerSession(k, R, r), m_prime)
    share = Envelope.build("share", params.name, s_prime=encode_scalar(s_prime, params.n))
    write_atomic(args.out_share, share.serialize())
    return EXIT_OK


def cmd_unblind(args, params: CurveParams) -> int:
    variant = P.Variant.parse(args.variant)
    env = read_envelope(args.factors, "factors", params)
    if env["variant"] != variant.value:
        raise CliError(EXIT_MALFORMED, f"{args.factors}: factors are for {env['variant']}")
    get = lambda key: decoded(args.factors, env.scalar, key, params)  # noqa: E731
    f = P.BlindingFactors(get("t1"), get("t2"), get("t3"))
    m, m_prime = get("m"), get("m_prime")
    X = decoded(args.factors, env.point, "x", params)
    if not m_prime or not m:
        raise CliError(EXIT_MALFORMED, f"{args.factors}: zero message scalar")
    s_prime = decoded(args.share, read_envelope(args.share, "share", params).scalar, "s_prime", params)
    sig = P.unblind(params, variant, f, m, m_prime, s_prime, X)
    out = Envelope.build(
        "signature", params.name, x=point_hex(params, sig.X), s=encode_scalar(sig.s, params.n)
    )
    write_atomic(args.out_signature, out.serialize())
    return EXIT_OK


def cmd_verify(args, params: CurveParams) -> int:
    Q = load_public(args.public, params)
    env = read_envelope(args.signature, "signature", params)
    sig = P.Signature(decoded(args.signature, env.point, "x", params), decoded(args.signature, env.scalar, "s", params))
    m = P.message_to_scalar(read_bytes(args.message), params)
    if P.verify(params, Q, m, sig):
        print("signature valid")
        return EXIT_OK
    print("signature INVALID")
    return EXIT_INVALID


def cmd_demo(args, params: CurveParams) -> int:
    variant = P.Variant.parse(args.variant)
    rng = make_rng(args.seed)
    counter = OpCounter()
    enc = lambda v: encode_scalar(v, params.n)  # noqa: E731
    pt = lambda p: point_hex(params, p)  # noqa: E731
    m = P.message_to_scalar(args.message.encode(), params)

    print(f"curve {params.name}, variant {variant.value}")
    keys = P.keygen(params, rng, counter=counter)
    print(f"[init]    signer publishes Q = {pt(keys.Q)}")
    session = P.session_init(params, rng, counter=counter)
    print(f"[init]    signer -> requester  R = {pt(session.R)}")
    f, X, m_prime = P.blind(params, variant, session.R, keys.Q, m, rng, counter=counter)
    print(f"[request] m = {enc(m)}  t1 = {enc(f.t1)}  t2 = {enc(f.t2)}  t3 = {enc(f.t3)}")
    print(f"[request] requester -> signer  m' = {enc(m_prime)}")
    s_prime = P.sign(params, keys, session, m_prime, counter=counter)
    print(f"[sign]    signer -> requester  s' = {enc(s_prime)}")
    sig = P.unblind(params, variant, f, m, m_prime, s_prime, X, counter=counter)
    print(f"[extract] signature X = {pt(sig.X)}  s = {enc(sig.s)}")
    ok = P.verify(params, keys.Q, m, sig, counter=counter)

    c = counter.count
    want = SCHEME_COSTS[VARIANT_SCHEME[variant]]
    print(
        f"[ops]     EC-MUL {c.ec_mul}  EC-ADD {c.ec_add}  INV {c.inv}  MUL {c.mul}  ADD {c.add}"
        f"  (expected {want.ec_mul}/{want.ec_add}/{want.inv}/{want.mul}/{want.add}:"
        f" {'match' if c.as_tuple() == want.as_tuple() and c.add == want.add else 'MISMATCH'})"
    )
    print("VERIFIED" if ok else "FAILED")
    return EXIT_OK if ok else EXIT_INVALID


def cmd_report(args) -> int:
    params = load_curve(args.curve, args.test_mode) if args.curve else None
    rows = table3_report(params)
    print(format_report(rows))
    if args.out:
        write_atomic(args.out, report_envelope(rows).serialize())
    return EXIT_OK


def cmd_validate(args) -> int:
    try:
        if args.curve in available_curves():
            params = registry_lookup(args.curve)
        elif not Path(args.curve).is_file():
            raise CliError(EXIT_CURVE, f"unknown curve {args.curve!r}")
        else:
            params = read_curve_params(read_text(args.curve))
    except CodecError as e:
        raise CliError(EXIT_CURVE, f"cannot load curve {args.curve!r}: {e}") from None
    rep = validate_params(params, test_mode=args.test_mode)
    print(rep.render())
    return EXIT_OK if rep.ok else EXIT_CURVE


# --- argument parsing ----------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ecblind", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, help, curve=True, variant=False, seed=True):
        p = sub.add_parser(name, help=help)
        if curve:
            p.add_argument("--curve", required=True, help="registry name or curve-file path")
            p.add_argument("--test-mode", action="store_true", help="allow curves with n <= 2^160")
        if variant:
            p.add_argument("--variant", default="generalized",
                           choices=[v.value for v in P.Variant])
        if seed:
            p.add_argument("--seed", type=int, help="deterministic randomness (fixtures only)")
        return p

    p = command("keygen", "signer: create a key pair")
    p.add_argument("--out-private", required=True)
    p.add_argument("--out-public", required=True)

    p = command("session", "signer: open a session and publish R")
    p.add_argument("--private", required=True)
    p.add_argument("--out-secret", required=True)
    p.add_argument("--out-r", required=True)

    p = command("blind", "requester: blind a message against R", variant=True)
    p.add_argument("--session", required=True, help="R envelope from the signer")
    p.add_argument("--public", required=True)
    p.add_argument("--message", required=True, help="file holding the raw message bytes")
    p.add_argument("--out-blinded", required=True)
    p.add_argument("--out-factors", required=True)

    p = command("sign", "signer: sign a blinded message", seed=False)
    p.add_argument("--private", required=True)
    p.add_argument("--session-secret", required=True)
    p.add_argument("--blinded", required=True)
    p.add_argument("--out-share", required=True)

    p = command("unblind", "requester: extract the signature", variant=True, seed=False)
    p.add_argument("--factors", required=True)
    p.add_argument("--share", required=True)
    p.add_argument("--out-signature", required=True)

    p = command("verify", "anyone: check a signature", seed=False)
    p.add_argument("--public", required=True)
    p.add_argument("--message", required=True)
    p.add_argument("--signature", required=True)

    p = command("demo", "run all phases in-process and print the transcript", variant=True)
    p.add_argument("--message", default="hello, blind world")

    p = sub.add_parser("report", help="print the cost comparison table")
    p.add_argument("--curve", help="curve for the counted runs (default secp160r1)")
    p.add_argument("--test-mode", action="store_true")
    p.add_argument("--out", help="also write the report envelope here")

    p = sub.add_parser("validate", help="check curve domain parameters")
    p.add_argument("--curve", required=True)
    p.add_argument("--test-mode", action="store_true")
    return parser


HANDLERS = {
    "keygen": cmd_keygen,
    "session": cmd_session,
    "blind": cmd_blind,
    "sign": cmd_sign,
    "unblind": cmd_unblind,
    "verify": cmd_verify,
    "demo": cmd_demo,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "report":
            return cmd_report(args)
        if args.command == "validate":
            return cmd_validate(args)
        params = load_curve(args.curve, args.test_mode)
        return HANDLERS[args.command](args, params)
    except CliError as e:
        print(f"ecblind: {e}", file=sys.stderr)
        return e.code
    except P.SessionConsumed as e:
        print(f"ecblind: {e}", file=sys.stderr)
        return EXIT_STATE
    except (P.DegenerateTranscript, P.RetryExhausted, ValueError) as e:
        print(f"ecblind: {e}", file=sys.stderr)
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
