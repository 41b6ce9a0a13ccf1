"""Exception hierarchy shared across the package.

Everything raised on purpose derives from :class:`FiberlensError` so callers
(CLI, HTTP service) can map domain failures to exit codes / status codes
without catching bare ``Exception``.
"""


class FiberlensError(Exception):
    """Base class for all domain errors."""


# ---------------------------------------------------------------------------
# parsing / ingestion

class ParseError(FiberlensError):
    """A byte stream or text file violates its declared format."""


class MalformedHeader(ParseError):
    pass


class UnsupportedDatatype(ParseError):
    pass


class TruncatedStream(ParseError):
    pass


class SizeMismatch(ParseError):
    pass


class BadAffine(ParseError):
    pass


class MissingColumn(ParseError):
    pass


class DuplicateScanId(ParseError):
    pass


class BadDate(ParseError):
    pass


class BadValue(ParseError):
    pass


# ---------------------------------------------------------------------------
# feature extraction / dataset assembly

class MissingVolume(FiberlensError):
    """A scan lacks a scalar volume required for a configured measure."""


class UnknownScan(FiberlensError):
    pass


class UnknownRegion(FiberlensError):
    pass


class UnknownSubject(FiberlensError):
    pass


class UnknownFeature(FiberlensError):
    pass


class MeasureUnavailable(FiberlensError):
    pass


# ---------------------------------------------------------------------------
# cohort / ML pipeline

class EmptyCohort(FiberlensError):
    pass


class TooFewSubjects(FiberlensError):
    pass


class DegenerateData(FiberlensError):
    pass


class OneClassOnly(FiberlensError):
    pass


class TooFewRows(FiberlensError):
    pass


class InvalidConfig(FiberlensError):
    pass
