"""
FILE: errors.py
DESCRIPTION:
  Exception hierarchy shared by every module.
  Library code raises these; main.py maps them onto exit codes
  (2 = usage/input problem, 1 = verification failure).
"""


class SpectraError(Exception):
    """Base class for everything this project raises on purpose."""


class FieldError(SpectraError, ValueError):
    """Bad field parameters, or elements/subsets from different fields."""


class SubsetSyntaxError(FieldError):
    """A subset string could not be parsed (bad token, element out of range)."""


class HypothesisError(SpectraError, ValueError):
    """Inputs violate the side conditions of an identity or operation."""


class EnumerationError(SpectraError):
    """Sweep parameters out of range, or an enumeration invariant broke."""


class CheckpointError(EnumerationError):
    """Checkpoint file is corrupt or belongs to a different run."""


class ShardMergeError(EnumerationError):
    """Shard tables cannot be merged (different n, overlapping shards)."""


class SweepInterrupted(EnumerationError):
    """A sweep stopped early (stop request or step limit); its checkpoint can be resumed."""

    def __init__(self, message, partial=None, checkpoints=()):
        super().__init__(message)
        self.partial = partial
        self.checkpoints = list(checkpoints)


class RuleEmissionError(SpectraError, RuntimeError):
    """A construction rule produced a witness whose r-value differs from its claim."""

    def __init__(self, rule_id, claimed, computed, subset_hex, detail=""):
        self.rule_id = rule_id
        self.claimed = claimed
        self.computed = computed
        self.subset_hex = subset_hex
        msg = (
            f"rule {rule_id} claimed r={claimed} but witness {subset_hex} has r={computed}"
        )
        if detail:
            msg = f"{msg} ({detail})"
        super().__init__(msg)


class TableFormatError(SpectraError, ValueError):
    """A spectrum/pool/table file does not match the expected schema."""
