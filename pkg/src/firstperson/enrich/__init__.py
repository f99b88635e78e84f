"""Derived streams: band power, experience reports, redaction, analyzers."""

from .bandpower import (
    BandDefinition,
    BandPowerAnalyzer,
    DEFAULT_BANDS,
    band_power,
    periodogram_psd,
    total_power,
)
from .blur import FrameQuarantined, RedactedFrame, blur_frame, pixelate_region, redact
from .clients import (
    AnalyzerError,
    FaceDetection,
    LexiconSentimentClient,
    LiveFaceDetectClient,
    LiveImageAnalysisClient,
    LiveSentimentClient,
    LiveTranscribeClient,
    MockFaceDetectClient,
    MockImageAnalysisClient,
    MockTranscribeClient,
    NEGATIVE_WORDS,
    POSITIVE_WORDS,
    Utterance,
)
from .des import DesSpotter, spot_des
from .pipeline import EnrichmentPipeline, PipelineResult

__all__ = [
    "AnalyzerError",
    "BandDefinition",
    "BandPowerAnalyzer",
    "DEFAULT_BANDS",
    "DesSpotter",
    "EnrichmentPipeline",
    "FaceDetection",
    "FrameQuarantined",
    "LexiconSentimentClient",
    "LiveFaceDetectClient",
    "LiveImageAnalysisClient",
    "LiveSentimentClient",
    "LiveTranscribeClient",
    "MockFaceDetectClient",
    "MockImageAnalysisClient",
    "MockTranscribeClient",
    "NEGATIVE_WORDS",
    "POSITIVE_WORDS",
    "PipelineResult",
    "RedactedFrame",
    "Utterance",
    "band_power",
    "blur_frame",
    "periodogram_psd",
    "pixelate_region",
    "redact",
    "spot_des",
    "total_power",
]
