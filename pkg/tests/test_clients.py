"""Mock analyzer clients: the deterministic oracles behind enrichment."""

from __future__ import annotations

import random

import pytest

from firstperson.enrich.clients import (
    AnalyzerError,
    LexiconSentimentClient,
    LiveSentimentClient,
    LiveTranscribeClient,
    MockImageAnalysisClient,
    MockTranscribeClient,
    NEGATIVE_WORDS,
    POSITIVE_WORDS,
)


def sidecar_utterances(*utterances):
    return {
        "ground_truth": {
            "utterances": [
                {"speaker": s, "text": t, "start_ms": i * 1000, "end_ms": i * 1000 + 500}
                for i, (s, t) in enumerate(utterances)
            ]
        }
    }


class TestTranscribe:
    def test_speaker_separation(self):
        client = MockTranscribeClient(wearer_speaker="wearer")
        out = client.transcribe(sidecar_utterances(("wearer", "hello"), ("guest", "hi")))
        assert [(u.speaker, u.text) for u in out] == [("wearer", "hello"), ("other", "hi")]

    def test_silent_chunk_has_no_transcripts(self):
        client = MockTranscribeClient()
        assert client.transcribe({"ground_truth": {"utterances": []}}) == []
        assert client.transcribe(None) == []

    def test_fuzz_count_and_order_preserved(self):
        rng = random.Random(4)
        utterances = [(rng.choice(["wearer", "a", "b"]), f"word{i}") for i in range(100)]
        client = MockTranscribeClient()
        out = client.transcribe(sidecar_utterances(*utterances))
        assert len(out) == 100
        assert [u.text for u in out] == [f"word{i}" for i in range(100)]

    def test_injected_failure(self):
        client = MockTranscribeClient(fail_on_calls={1})
        client.transcribe(sidecar_utterances())
        with pytest.raises(AnalyzerError):
            client.transcribe(sidecar_utterances())


class TestSentiment:
    def test_empty_text_is_pure_neutral(self):
        scores = LexiconSentimentClient().score("")
        assert scores == {"positive": 0.0, "negative": 0.0, "mixed": 0.0, "neutral": 1.0}

    def test_positive_phrase_argmax(self):
        scores = LexiconSentimentClient().score("I love this")
        assert max(scores, key=scores.get) == "positive"

    def test_negative_phrase_argmax(self):
        scores = LexiconSentimentClient().score("that was terrible and awful")
        assert max(scores, key=scores.get) == "negative"

    def test_mixed_phrase_argmax(self):
        scores = LexiconSentimentClient().score("I love it but I hate the noise")
        assert max(scores, key=scores.get) == "mixed"

    def test_no_lexicon_hits_is_neutral(self):
        scores = LexiconSentimentClient().score("the train departs at noon")
        assert max(scores, key=scores.get) == "neutral"

    def test_simplex_on_arbitrary_inputs(self):
        rng = random.Random(6)
        vocabulary = list(POSITIVE_WORDS)[:5] + list(NEGATIVE_WORDS)[:5] + ["desk", "lamp", "very"]
        client = LexiconSentimentClient()
        for _ in range(200):
            text = " ".join(rng.choice(vocabulary) for _ in range(rng.randint(0, 12)))
            scores = client.score(text)
            assert abs(sum(scores.values()) - 1.0) <= 1e-6
            assert all(v >= 0 for v in scores.values())

    def test_punctuation_and_case_do_not_matter(self):
        client = LexiconSentimentClient()
        assert client.score("LOVE!") == client.score("love")


class TestImageAnalysis:
    def test_scene_truth_copied_with_full_confidence(self):
        client = MockImageAnalysisClient()
        sidecar = {
            "ground_truth": {
                "texts": [{"value": "EXIT", "box": {"x": 1, "y": 2, "w": 10, "h": 4}}],
                "objects": [{"label": "burger", "box": {"x": 5, "y": 6, "w": 20, "h": 10}}],
            }
        }
        texts = client.detect_text(sidecar)
        labels = client.detect_labels(sidecar)
        assert [(d.value, d.confidence) for d in texts] == [("EXIT", 1.0)]
        assert [(d.value, d.confidence) for d in labels] == [("burger", 1.0)]

    def test_empty_scene(self):
        client = MockImageAnalysisClient()
        assert client.detect_text({"ground_truth": {}}) == []
        assert client.detect_labels(None) == []


class TestLiveStubs:
    def test_stubs_raise_until_configured(self):
        with pytest.raises(AnalyzerError):
            LiveTranscribeClient(endpoint="https://example.invalid").transcribe(None)
        with pytest.raises(AnalyzerError):
            LiveSentimentClient().score("x")
