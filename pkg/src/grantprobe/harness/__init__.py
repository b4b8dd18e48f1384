from .config import Config, EndpointSettings, load_config
from .manifest import RunManifest
from .records import latest_stream, read_stream, stream_digest, write_stream
from .reporting import DetectionTable, detection_report, reliability_report

__all__ = [
    "Config",
    "DetectionTable",
    "EndpointSettings",
    "RunManifest",
    "detection_report",
    "latest_stream",
    "load_config",
    "read_stream",
    "reliability_report",
    "stream_digest",
    "write_stream",
]
