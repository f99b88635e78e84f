"""Canonical serialization: byte stability, key-order independence, round trips."""

from __future__ import annotations

import random

import pytest

from firstperson.model.canonical import (
    CanonicalizationError,
    canonical_deserialize,
    canonical_serialize,
)
from firstperson.model.documents import ZERO_ATTESTATION_HEX


def empty_segment_jsonable() -> dict:
    return {"seq": 0, "prev_attestation": ZERO_ATTESTATION_HEX, "samples": []}


def test_empty_segment_has_fixed_bytes():
    expected = ('{"prev_attestation":"' + "0" * 64 + '","samples":[],"seq":0}').encode()
    assert canonical_serialize(empty_segment_jsonable()) == expected
    assert canonical_serialize(empty_segment_jsonable()) == canonical_serialize(empty_segment_jsonable())


def test_key_insertion_order_is_irrelevant():
    forward = {"a": 1, "b": {"x": 1.5, "y": "z"}, "c": [1, 2]}
    reverse = {"c": [1, 2], "b": {"y": "z", "x": 1.5}, "a": 1}
    assert canonical_serialize(forward) == canonical_serialize(reverse)


def test_non_finite_rejected():
    with pytest.raises(CanonicalizationError):
        canonical_serialize({"v": float("nan")})
    with pytest.raises(CanonicalizationError):
        canonical_serialize({"v": [1.0, float("inf")]})


def test_non_string_keys_rejected():
    with pytest.raises(CanonicalizationError):
        canonical_serialize({1: "x"})


def test_unserializable_type_rejected():
    with pytest.raises(CanonicalizationError):
        canonical_serialize({"v": {1, 2}})


def test_unicode_survives_round_trip():
    doc = {"text": "café — 日記"}
    data = canonical_serialize(doc)
    assert canonical_deserialize(data) == doc
    assert canonical_serialize(canonical_deserialize(data)) == data


def test_thousand_random_segments_round_trip_byte_identical():
    from helpers import random_segment_jsonable

    rng = random.Random(20240925)
    for i in range(1000):
        doc = random_segment_jsonable(rng, seq=i)
        first = canonical_serialize(doc)
        second = canonical_serialize(canonical_deserialize(first))
        assert first == second
        assert canonical_deserialize(first) == doc
