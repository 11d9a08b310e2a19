import subprocess
import sys

import pytest

from ecblind.cli import main
from ecblind.codec import Envelope, parse_envelope, registry_lookup
from ecblind.curve import Point, add, scalar_mul

TOY = ["--curve", "toy17", "--test-mode"]


def run(*args):
    return main([str(a) for a in args])


def pipeline(tmp_path, curve_args, variant="generalized", message=b"vote: yes", seed=1):
    f = {k: tmp_path / k for k in ["priv", "pub", "sess", "r", "blinded", "factors", "share", "sig", "msg"]}
    f["msg"].write_bytes(message)
    s = ["--seed", seed] if seed is not None else []
    assert run("keygen", *curve_args, *s, "--out-private", f["priv"], "--out-public", f["pub"]) == 0
    assert run("session", *curve_args, *s, "--private", f["priv"], "--out-secret", f["sess"], "--out-r", f["r"]) == 0
    assert run("blind", *curve_args, *s, "--variant", variant, "--session", f["r"], "--public", f["pub"],
               "--message", f["msg"], "--out-blinded", f["blinded"], "--out-factors", f["factors"]) == 0
    assert run("sign", *curve_args, "--private", f["priv"], "--session-secret", f["sess"],
               "--blinded", f["blinded"], "--out-share", f["share"]) == 0
    assert run("unblind", *curve_args, "--variant", variant, "--factors", f["factors"],
               "--share", f["share"], "--out-signature", f["sig"]) == 0
    return f


def verify(f, curve_args):
    return run("verify", *curve_args, "--public", f["pub"], "--message", f["msg"], "--signature", f["sig"])


@pytest.mark.parametrize("variant", ["generalized", "educed-i", "educed-ii", "educed-iii"])
def test_pipeline_toy(tmp_path, variant):
    f = pipeline(tmp_path, TOY, variant)
    assert verify(f, TOY) == 0


def test_pipeline_standard(tmp_path):
    f = pipeline(tmp_path, ["--curve", "secp160r1"], seed=None)
    assert verify(f, ["--curve", "secp160r1"]) == 0
    f["msg"].write_bytes(b"vote: yeS")
    assert verify(f, ["--curve", "secp160r1"]) == 1


def test_keygen_reproducible(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        d.mkdir()
        assert run("keygen", *TOY, "--seed", 1, "--out-private", d / "priv", "--out-public", d / "pub") == 0
    assert (a / "priv").read_bytes() == (b / "priv").read_bytes()
    assert (a / "pub").read_bytes() == (b / "pub").read_bytes()
    assert (a / "priv").read_text().startswith("# SECRET")


def test_bad_curve_exit_codes(tmp_path):
    out = ["--out-private", tmp_path / "p", "--out-public", tmp_path / "q"]
    assert run("keygen", "--curve", "nosuch", *out) == 3
    assert run("keygen", "--curve", "toy17", *out) == 3  # small n without --test-mode
    bad = tmp_path / "bad.curve"
    bad.write_text("name = x\nq = 17\na = 2\nb = 2\ngx = 5\ngy = 2\nn = 19\nh = 1\n")
    assert run("keygen", "--curve", bad, "--test-mode", *out) == 3
    assert run("validate", "--curve", bad, "--test-mode") == 3
    assert run("validate", "--curve", "toy17", "--test-mode") == 0
    assert run("validate", "--curve", "toy17") == 3
    assert run("validate", "--curve", "nosuch") == 3


def test_curve_file_path(tmp_path):
    path = tmp_path / "t.curve"
    path.write_text("name = toy17\nq = 0x11\na = 2\nb = 2\ngx = 5\ngy = 1\nn = 19\nh = 1\n")
    f = pipeline(tmp_path, ["--curve", path, "--test-mode"])
    assert verify(f, ["--curve", path, "--test-mode"]) == 0


def test_session_reuse_exit_5(tmp_path):
    f = pipeline(tmp_path, TOY)
    assert "status = consumed" in f["sess"].read_text()
    again = run("sign", *TOY, "--private", f["priv"], "--session-secret", f["sess"],
                "--blinded", f["blinded"], "--out-share", tmp_path / "share2")
    assert again == 5
    assert not (tmp_path / "share2").exists()


def test_tampered_r_exit_4(tmp_path):
    f = pipeline(tmp_path, TOY)
    f["r"].write_text("kind = session\ncurve = toy17\nr = 040502\n")
    rc = run("blind", *TOY, "--session", f["r"], "--public", f["pub"], "--message", f["msg"],
             "--out-blinded", tmp_path / "b2", "--out-factors", tmp_path / "f2")
    assert rc == 4


def test_factors_file_satisfies_blinding(tmp_path):
    toy = registry_lookup("toy17")
    f = pipeline(tmp_path, TOY)
    fac = parse_envelope(f["factors"].read_text())
    R = parse_envelope(f["r"].read_text()).point("r", toy)
    Q = parse_envelope(f["pub"].read_text()).point("q", toy)
    t1, t2, t3 = (fac.scalar(k, toy).value for k in ("t1", "t2", "t3"))
    X = add(toy, add(toy, scalar_mul(toy, t1, R), scalar_mul(toy, t2, toy.G)), scalar_mul(toy, t3, Q))
    assert fac.point("x", toy) == X


def write_env(path, kind, **fields):
    path.write_text(Envelope.build(kind, "toy17", **fields).serialize())


def test_fixture_sign_and_unblind(tmp_path):
    # d=7, k=5, m'=1 -> s' = 11; then m=3, (t1,t2,t3)=(2,4,5) -> (X, s) = ((13,10), 2).
    write_env(tmp_path / "priv", "privkey", d="07", q="040006")
    write_env(tmp_path / "sess", "session-secret", k="05", r="040910", status="fresh")
    write_env(tmp_path / "blinded", "blinded", m_prime="01")
    assert run("sign", *TOY, "--private", tmp_path / "priv", "--session-secret", tmp_path / "sess",
               "--blinded", tmp_path / "blinded", "--out-share", tmp_path / "share") == 0
    share = parse_envelope((tmp_path / "share").read_text())
    assert share["s_prime"] == "0b"

    write_env(tmp_path / "factors", "factors", variant="generalized", t1="02", t2="04", t3="05",
              x="040d0a", m="03", m_prime="01")
    assert run("unblind", *TOY, "--factors", tmp_path / "factors", "--share", tmp_path / "share",
               "--out-signature", tmp_path / "sig") == 0
    sig = parse_envelope((tmp_path / "sig").read_text())
    assert sig.point("x", registry_lookup("toy17")) == Point(13, 10)
    assert sig["s"] == "02"


def test_unblind_missing_factors_exit_2(tmp_path):
    rc = run("unblind", *TOY, "--factors", tmp_path / "missing", "--share", tmp_path / "x",
             "--out-signature", tmp_path / "sig")
    assert rc == 2


def test_unblind_variant_mismatch_exit_4(tmp_path):
    f = pipeline(tmp_path, TOY, "educed-i")
    rc = run("unblind", *TOY, "--variant", "educed-ii", "--factors", f["factors"], "--share", f["share"],
             "--out-signature", tmp_path / "sig2")
    assert rc == 4


def test_verify_truncated_signature_exit_4(tmp_path):
    f = pipeline(tmp_path, TOY)
    text = f["sig"].read_text()
    f["sig"].write_text(text[: len(text) // 2])
    assert verify(f, TOY) == 4


def test_verify_wrong_curve_envelope_exit_4(tmp_path):
    f = pipeline(tmp_path, TOY)
    f["sig"].write_text(f["sig"].read_text().replace("curve = toy17", "curve = p256"))
    assert verify(f, TOY) == 4


def test_private_key_tamper_rejected(tmp_path):
    write_env(tmp_path / "priv", "privkey", d="08", q="040006")
    rc = run("session", *TOY, "--private", tmp_path / "priv", "--out-secret", tmp_path / "s",
             "--out-r", tmp_path / "r")
    assert rc == 4


def test_role_separation(tmp_path):
    # The requester's commands take only public signer material.
    f = pipeline(tmp_path, TOY)
    for secret in ("priv", "sess"):
        assert "SECRET" in f[secret].read_text()
    assert "SECRET" not in f["r"].read_text()
    assert "SECRET" not in f["pub"].read_text()
    assert "SECRET" not in f["blinded"].read_text()
    assert "SECRET" not in f["share"].read_text()


@pytest.mark.parametrize("variant", ["generalized", "educed-i", "educed-ii", "educed-iii"])
def test_demo(capsys, variant):
    assert run("demo", *TOY, "--variant", variant, "--seed", 1) == 0
    out = capsys.readouterr().out
    assert out.rstrip().endswith("VERIFIED")
    assert "match" in out and "MISMATCH" not in out
    assert "m' =" in out and "s' =" in out


def test_demo_many_seeds(capsys):
    for variant in ["generalized", "educed-i", "educed-ii", "educed-iii"]:
        for seed in range(100):
            assert run("demo", *TOY, "--variant", variant, "--seed", seed) == 0
    capsys.readouterr()


def test_report(capsys, tmp_path):
    assert run("report", "--out", tmp_path / "report.txt") == 0
    out = capsys.readouterr().out
    for value in ["1696", "206", "176", "14.6%"]:
        assert value in out
    env = parse_envelope((tmp_path / "report.txt").read_text())
    assert env["educed_iii_rounded"] == "176"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ecblind", "demo", *TOY, "--seed", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.rstrip().endswith("VERIFIED")
