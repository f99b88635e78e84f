"""Hypothesis property tests for the core value-level invariants."""

from __future__ import annotations

import math

from hypothesis import given, settings
from hypothesis import strategies as st

from firstperson.enrich.clients import LexiconSentimentClient
from firstperson.model.canonical import canonical_deserialize, canonical_serialize
from firstperson.sim.gsr import scr_bump

json_scalars = st.one_of(
    st.none(),
    st.booleans(),
    st.integers(min_value=-(2**53), max_value=2**53),
    st.floats(allow_nan=False, allow_infinity=False),
    st.text(max_size=24),
)

json_documents = st.recursive(
    json_scalars,
    lambda children: st.one_of(
        st.lists(children, max_size=5),
        st.dictionaries(st.text(max_size=8), children, max_size=5),
    ),
    max_leaves=25,
)


@given(json_documents)
@settings(max_examples=300, deadline=None)
def test_canonical_round_trip_is_byte_stable(document):
    first = canonical_serialize(document)
    second = canonical_serialize(canonical_deserialize(first))
    assert first == second


@given(st.text(max_size=200))
@settings(max_examples=300, deadline=None)
def test_sentiment_scores_always_form_a_simplex(text):
    scores = LexiconSentimentClient().score(text)
    assert set(scores) == {"positive", "negative", "mixed", "neutral"}
    assert all(v >= 0.0 for v in scores.values())
    assert math.isclose(sum(scores.values()), 1.0, abs_tol=1e-6)


@given(
    st.floats(min_value=0.01, max_value=100.0),
    st.floats(min_value=-10_000.0, max_value=600_000.0),
)
@settings(max_examples=300, deadline=None)
def test_scr_bump_bounded_by_amplitude_and_causal(amplitude, dt_ms):
    value = scr_bump(amplitude, dt_ms)
    assert 0.0 <= value <= amplitude + 1e-12
    if dt_ms < 0:
        assert value == 0.0
