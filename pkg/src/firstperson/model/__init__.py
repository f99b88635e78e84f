"""Domain model: streams, envelopes, documents, canonical JSON, validation."""

from .canonical import (
    CanonicalizationError,
    canonical_deserialize,
    canonical_dumps,
    canonical_serialize,
)
from .config import (
    DEFAULT_TARGETS_KB_S,
    SCHEMA_VERSION,
    SECONDS_PER_RECORDING_DAY,
    TEXT_PROFILE_EXCLUDED,
    default_config,
    enabled_streams,
    merge_config,
    validate_config,
)
from .documents import (
    ZERO_ATTESTATION_HEX,
    ConsentRecord,
    ConsentRegistry,
    SchemaVersionError,
    SegmentEntry,
    SegmentFile,
    SessionManifest,
    check_schema_version,
    segment_file_name,
)
from .schemas import all_schemas, dump_schemas
from .streams import (
    AudioChunkPayload,
    BandPowerPayload,
    ChannelBandPower,
    CognitionPayload,
    DesReportPayload,
    Detection,
    EegRawPayload,
    FaceAction,
    FacialExpressionPayload,
    GsrPayload,
    ImageFramePayload,
    ImageLabelsPayload,
    ImageTextPayload,
    MediaRef,
    Rect,
    SampleEnvelope,
    SentimentPayload,
    StreamId,
    STREAM_ORDER,
    TimeSpan,
    TranscriptPayload,
)
from .validation import (
    ValidationReport,
    Violation,
    validate_envelope,
    validate_manifest,
    validate_segment,
    validate_session_streams,
)

__all__ = [
    "AudioChunkPayload",
    "BandPowerPayload",
    "CanonicalizationError",
    "ChannelBandPower",
    "CognitionPayload",
    "ConsentRecord",
    "ConsentRegistry",
    "DEFAULT_TARGETS_KB_S",
    "DesReportPayload",
    "Detection",
    "EegRawPayload",
    "FaceAction",
    "FacialExpressionPayload",
    "GsrPayload",
    "ImageFramePayload",
    "ImageLabelsPayload",
    "ImageTextPayload",
    "MediaRef",
    "Rect",
    "SCHEMA_VERSION",
    "SECONDS_PER_RECORDING_DAY",
    "STREAM_ORDER",
    "SampleEnvelope",
    "SchemaVersionError",
    "SegmentEntry",
    "SegmentFile",
    "SentimentPayload",
    "SessionManifest",
    "StreamId",
    "TEXT_PROFILE_EXCLUDED",
    "TimeSpan",
    "TranscriptPayload",
    "ValidationReport",
    "Violation",
    "ZERO_ATTESTATION_HEX",
    "all_schemas",
    "canonical_deserialize",
    "canonical_dumps",
    "canonical_serialize",
    "check_schema_version",
    "default_config",
    "dump_schemas",
    "enabled_streams",
    "merge_config",
    "segment_file_name",
    "validate_config",
    "validate_envelope",
    "validate_manifest",
    "validate_segment",
    "validate_session_streams",
]
