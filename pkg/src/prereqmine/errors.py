"""Exception types raised across the package.

Everything inherits from PrereqMineError so callers (notably the CLI) can
map any data/analysis failure to one exit code while letting genuine I/O
errors (OSError, FileWriteError) surface separately.
"""

from __future__ import annotations


class PrereqMineError(Exception):
    """Base class for all prereqmine errors."""


class IngestError(PrereqMineError):
    """A problem in an input score file, tagged with its 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class MalformedRow(IngestError):
    """Row has the wrong column count, an empty field, or an unparseable score."""


class ScoreOutOfRange(IngestError):
    """Score parsed but falls outside [0, 1]."""


class DuplicateQuestionScore(IngestError):
    """A (student_id, question_id) pair appeared more than once."""


class UnknownSkill(IngestError):
    """Skill label not in the configured skill set."""


class EmptyDistribution(PrereqMineError):
    """Thresholding asked for on an empty score distribution."""


class NoPairedStudents(PrereqMineError):
    """No student appears in both binary score maps."""


class NoCommonTopics(PrereqMineError):
    """A skill pair shares no usable topic."""


class InsufficientSamples(PrereqMineError):
    """Fewer than two defined conviction samples in some direction."""


class DegenerateSamples(PrereqMineError):
    """Rank-sum test on samples whose pooled values are all identical."""


class TooLargeForExact(PrereqMineError):
    """Exact permutation test requested beyond the enumeration bound."""


class InvalidSpec(PrereqMineError):
    """Synthetic cohort spec fails validation (cyclic edges, bad parameters)."""


class SchemaMismatch(PrereqMineError):
    """A results file does not carry the expected schema tag."""


class FileWriteError(PrereqMineError):
    """Wraps an OSError raised while writing an output artifact."""


class ConflictWarning(UserWarning):
    """Two thresholds decided opposite prerequisite directions for one pair."""
