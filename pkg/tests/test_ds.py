import random

import pytest

from nicknames import ds
from nicknames.algebra import CONTEXT, ORDER, DecodeError
from nicknames.ds import DsSignature, ds_keygen, ds_sign, ds_verify


def test_keygen_deterministic_under_seed():
    a = ds_keygen(0, random.Random(1))
    b = ds_keygen(0, random.Random(1))
    assert a == b
    assert a.upk == CONTEXT.g**a.usk


def test_distinct_users_distinct_keys():
    rng = random.Random(2)
    assert ds_keygen(0, rng).upk != ds_keygen(1, rng).upk


def test_usk_never_zero():
    class Zeroish:
        # would return zero if the lower bound allowed it
        def randrange(self, lo, hi):
            return lo

    assert ds_keygen(0, Zeroish()).usk == 1
    rng = random.Random(3)
    assert all(ds.random_scalar(rng, nonzero=True) != 0 for _ in range(10_000))
    with pytest.raises(ValueError):
        ds.DsKeyPair(0, CONTEXT.g)


def test_sign_verify_and_rejections():
    rng = random.Random(4)
    alice, bob = ds_keygen(0, rng), ds_keygen(1, rng)
    msg = b"registration value"
    sig = ds_sign(alice.usk, msg, rng)
    assert ds_verify(alice.upk, msg, sig)
    assert not ds_verify(alice.upk, msg + b"!", sig)
    assert not ds_verify(bob.upk, msg, sig)
    assert not ds_verify(CONTEXT.g**0, msg, sig)


def test_signature_encoding():
    rng = random.Random(5)
    keys = ds_keygen(0, rng)
    sig = ds_sign(keys.usk, b"m", rng)
    data = sig.to_bytes()
    assert data[0] == ds.SCHNORR_G1
    assert len(data) == 1 + 2 * (4 + 32)
    assert DsSignature.from_bytes(data) == sig
    assert DsSignature.from_hex(sig.hex()) == sig
    for bad in (b"", data[:-1], data + b"\x00"):
        with pytest.raises(DecodeError):
            DsSignature.from_bytes(bad)
    with pytest.raises(DecodeError):
        DsSignature.from_bytes(data[:5] + ORDER.to_bytes(32, "big") + data[37:])


def test_unknown_scheme_rejected():
    rng = random.Random(6)
    keys = ds_keygen(0, rng)
    sig = ds_sign(keys.usk, b"m", rng)
    assert not ds_verify(keys.upk, b"m", DsSignature(7, sig.challenge, sig.response))


def test_registry_accepts_alternate_scheme():
    class Always:
        scheme_id = 200

        def verify(self, upk, message, sig):
            return message == b"ok"

    ds.register_scheme(Always())
    try:
        assert ds_verify(CONTEXT.g, b"ok", DsSignature(200, 0, 0))
        assert not ds_verify(CONTEXT.g, b"no", DsSignature(200, 0, 0))
        with pytest.raises(ValueError):
            ds.register_scheme(Always())
    finally:
        del ds.SCHEMES[200]


def test_bit_flips_rejected():
    rng = random.Random(7)
    keys = ds_keygen(0, rng)
    msg = bytes(range(16))
    sig = ds_sign(keys.usk, msg, rng)
    data = bytearray(sig.to_bytes())
    for _ in range(40):
        pos = rng.randrange(len(data) * 8)
        mutated = bytearray(data)
        mutated[pos // 8] ^= 1 << (pos % 8)
        try:
            forged = DsSignature.from_bytes(bytes(mutated))
        except DecodeError:
            continue
        assert not ds_verify(keys.upk, msg, forged)
        bad_msg = bytearray(msg)
        bad_msg[rng.randrange(len(msg))] ^= 1 << rng.randrange(8)
        assert not ds_verify(keys.upk, bytes(bad_msg), sig)
