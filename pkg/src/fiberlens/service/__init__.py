"""HTTP service: jobs, queries, analytics, and fiber geometry."""

from .app import create_app
from .geometry import decode_payload, encode_payload
from .jobs import DONE, FAILED, PENDING, RUNNING, JobConflict, JobManager, JobRecord

__all__ = [
    "DONE",
    "FAILED",
    "JobConflict",
    "JobManager",
    "JobRecord",
    "PENDING",
    "RUNNING",
    "create_app",
    "decode_payload",
    "encode_payload",
]
