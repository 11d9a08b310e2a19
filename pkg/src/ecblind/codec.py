"""Text and byte encodings: scalars, points, curve files, protocol envelopes.

Curve files and envelopes share one grammar: ``key = value`` per line, ``#``
starts a comment line, blank lines are ignored, keys may not repeat.

Envelopes are written canonically (``kind`` first, ``curve`` second, the
remaining keys sorted, hex in lowercase) so that transcripts can be hashed
and diffed. Parse then serialize reproduces the original bytes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cache
from importlib import resources

from .curve import INFINITY, CurveParams, Point, is_on_curve, require_valid
from .field import ModInt, byte_length


class CodecError(ValueError):
    """Input could not be decoded."""


class CurveFileError(CodecError):
    pass


class UnknownCurve(KeyError):
    pass


# --- scalars and points --------------------------------------------------

_HEX = re.compile(r"[0-9a-f]*")


def encode_scalar(value: ModInt | int, modulus: int) -> str:
    v = value.value if isinstance(value, ModInt) else value
    if not 0 <= v < modulus:
        raise CodecError(f"scalar {v} out of range for modulus {modulus}")
    return v.to_bytes(byte_length(modulus), "big").hex()


def decode_scalar(modulus: int, text: str) -> ModInt:
    width = 2 * byte_length(modulus)
    if len(text) != width:
        raise CodecError(f"scalar must be {width} hex digits, got {len(text)}")
    if not _HEX.fullmatch(text):
        raise CodecError("scalar is not lowercase hex")
    v = int(text, 16)
    if v >= modulus:
        raise CodecError(f"scalar {v} overflows modulus {modulus}")
    return ModInt(v, modulus)


def encode_point(params: CurveParams, p: Point) -> bytes:
    if p.is_infinity:
        return b"\x00"
    L = byte_length(params.q)
    return b"\x04" + p.x.to_bytes(L, "big") + p.y.to_bytes(L, "big")


def decode_point(params: CurveParams, data: bytes) -> Point:
    L = byte_length(params.q)
    if data == b"\x00":
        return INFINITY
    if len(data) != 1 + 2 * L:
        raise CodecError(f"point encoding must be 1 or {1 + 2 * L} bytes, got {len(data)}")
    if data[0] != 0x04:
        raise CodecError(f"bad point prefix 0x{data[0]:02x}")
    x = int.from_bytes(data[1 : 1 + L], "big")
    y = int.from_bytes(data[1 + L :], "big")
    p = Point(x, y)
    if not is_on_curve(params, p):
        raise CodecError(f"point {p} is not on curve {params.name}")
    return p


def decode_point_hex(params: CurveParams, text: str) -> Point:
    if not _HEX.fullmatch(text) or len(text) % 2:
        raise CodecError("point is not lowercase hex")
    return decode_point(params, bytes.fromhex(text))


# --- key-value grammar ---------------------------------------------------

_KEY = re.compile(r"[a-z][a-z0-9_]*")


def parse_kv(text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not _KEY.fullmatch(key) or not value:
            raise CodecError(f"line {lineno}: expected 'key = value', got {raw!r}")
        if key in out:
            raise CodecError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


# --- curve files ---------------------------------------------------------

CURVE_KEYS = ("name", "q", "a", "b", "gx", "gy", "n", "h")


def _parse_int(key: str, text: str) -> int:
    try:
        if text.lower().startswith("0x"):
            return int(text[2:], 16)
        if text.isdigit():
            return int(text)
    except ValueError:
        pass
    raise CurveFileError(f"{key}: not a decimal or 0x-hex integer: {text!r}")


def read_curve_params(text: str) -> CurveParams:
    """Parse a curve file without validating the parameters it describes."""
    try:
        kv = parse_kv(text)
    except CodecError as e:
        raise CurveFileError(str(e)) from None
    missing = [k for k in CURVE_KEYS if k not in kv]
    if missing:
        raise CurveFileError(f"missing key(s): {', '.join(missing)}")
    extra = sorted(set(kv) - set(CURVE_KEYS))
    if extra:
        raise CurveFileError(f"unknown key(s): {', '.join(extra)}")
    v = {k: _parse_int(k, kv[k]) for k in CURVE_KEYS if k != "name"}
    return CurveParams(
        name=kv["name"],
        q=v["q"],
        a=v["a"],
        b=v["b"],
        G=Point(v["gx"], v["gy"]),
        n=v["n"],
        h=v["h"],
    )


def parse_curve_file(text: str, test_mode: bool = False) -> CurveParams:
    return require_valid(read_curve_params(text), test_mode=test_mode)


def format_curve_file(params: CurveParams) -> str:
    rows = [
        ("name", params.name),
        ("q", hex(params.q)),
        ("a", hex(params.a)),
        ("b", hex(params.b)),
        ("gx", hex(params.G.x)),
        ("gy", hex(params.G.y)),
        ("n", hex(params.n)),
        ("h", str(params.h)),
    ]
    return "".join(f"{k} = {val}\n" for k, val in rows)


@cache
def _bundled() -> dict[str, CurveParams]:
    curves = {}
    for entry in resources.files("ecblind.curves").iterdir():
        if entry.name.endswith(".curve"):
            # Bundled files are trusted; the n > 2^160 policy is the caller's call.
            params = parse_curve_file(entry.read_text(), test_mode=True)
            curves[params.name] = params
    return curves


def available_curves() -> list[str]:
    return sorted(_bundled())


def registry_lookup(name: str) -> CurveParams:
    try:
        return _bundled()[name]
    except KeyError:
        raise UnknownCurve(f"unknown curve {name!r}; known: {', '.join(available_curves())}") from None


# --- envelopes -----------------------------------------------------------

# Which payload keys each envelope kind carries, and how each is typed.
# "scalar" is hex mod n, "point" an encoded point in hex, "text" free-form.
SCHEMAS: dict[str, dict[str, str]] = {
    "pubkey": {"q": "point"},
    "privkey": {"d": "scalar", "q": "point"},
    "session": {"r": "point"},
    "session-secret": {"k": "scalar", "r": "point", "status": "text"},
    "blinded": {"m_prime": "scalar"},
    "share": {"s_prime": "scalar"},
    "signature": {"x": "point", "s": "scalar"},
    "factors": {
        "variant": "text",
        "t1": "scalar",
        "t2": "scalar",
        "t3": "scalar",
        "x": "point",
        "m": "scalar",
        "m_prime": "scalar",
    },
}

REPORT_SCHEMES = ("camenisch", "ecdlp_based", "proposed", "educed_i", "educed_ii", "educed_iii")
SCHEMAS["report"] = {f"{sid}_{col}": "text" for sid in REPORT_SCHEMES for col in ("cost", "rounded")}

HEADERS = {
    "privkey": "# SECRET: signer private key. Keep on the signer side.",
    "session-secret": "# SECRET: signer nonce k for one session. Never transmit; single use.",
    "factors": "# SECRET: requester blinding factors and message scalar. Never transmit.",
}

SESSION_STATUSES = ("fresh", "consumed")


@dataclass(frozen=True)
class Envelope:
    kind: str
    curve: str
    fields: tuple[tuple[str, str], ...]

    @classmethod
    def build(cls, kind: str, curve: str, **fields: str) -> Envelope:
        env = cls(kind, curve, tuple(sorted(fields.items())))
        env.check()
        return env

    def check(self) -> None:
        schema = SCHEMAS.get(self.kind)
        if schema is None:
            raise CodecError(f"unknown envelope kind {self.kind!r}")
        keys = {k for k, _ in self.fields}
        if keys != set(schema):
            missing, extra = set(schema) - keys, keys - set(schema)
            raise CodecError(
                f"{self.kind} envelope: missing {sorted(missing)}, unexpected {sorted(extra)}"
            )
        for k, v in self.fields:
            if schema[k] in ("scalar", "point") and (not _HEX.fullmatch(v) or len(v) % 2):
                raise CodecError(f"{k}: expected lowercase hex")
        if self.kind == "session-secret" and self["status"] not in SESSION_STATUSES:
            raise CodecError(f"bad session status {self['status']!r}")

    def __getitem__(self, key: str) -> str:
        for k, v in self.fields:
            if k == key:
                return v
        raise KeyError(key)

    def replace(self, **updates: str) -> Envelope:
        merged = dict(self.fields) | updates
        return Envelope.build(self.kind, self.curve, **merged)

    def scalar(self, key: str, params: CurveParams) -> ModInt:
        return decode_scalar(params.n, self[key])

    def point(self, key: str, params: CurveParams) -> Point:
        return decode_point_hex(params, self[key])

    def serialize(self) -> str:
        lines = [HEADERS[self.kind]] if self.kind in HEADERS else []
        lines += [f"kind = {self.kind}", f"curve = {self.curve}"]
        lines += [f"{k} = {v}" for k, v in sorted(self.fields)]
        return "\n".join(lines) + "\n"


def parse_envelope(text: str, expect: str | None = None) -> Envelope:
    kv = parse_kv(text)
    kind = kv.pop("kind", None)
    curve = kv.pop("curve", None)
    if kind is None or curve is None:
        raise CodecError("envelope needs 'kind' and 'curve'")
    if expect is not None and kind != expect:
        raise CodecError(f"expected a {expect} envelope, got {kind}")
    env = Envelope(kind, curve, tuple(sorted(kv.items())))
    env.check()
    return env


def point_hex(params: CurveParams, p: Point) -> str:
    return encode_point(params, p).hex()
