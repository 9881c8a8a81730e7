"""Exception types shared across the simulator."""


class SimError(Exception):
    """Base class for all simulator errors."""


class ParseError(SimError):
    """Config document could not be parsed."""


class ValidationError(SimError):
    """A config or input value violates a constraint.

    The offending field name is kept in ``.field``.
    """

    def __init__(self, field, message=""):
        self.field = field
        super().__init__(f"{field}: {message}" if message else field)


class SimFault(SimError):
    """Unrecoverable simulation condition (log zone or extension overflow)."""


class OutOfRange(SimError):
    """Pmem access outside the device range."""


class NestedTransaction(SimError):
    """tx_start while a transaction is already active on the thread."""


class TxIdExhausted(SimError):
    """The 21-bit transaction id space is used up for this run."""


class DoubleCommit(SimError):
    """Profile entry already holds a non-zero length."""


class TxConflict(SimError):
    """A write touched a line owned by a different live transaction."""


class IsolationViolation(SimError):
    """A transactional access was resolved by aborting a transaction."""

    def __init__(self, message, aborted_tx_id=None):
        self.aborted_tx_id = aborted_tx_id
        super().__init__(message)


class EmptySamples(SimError):
    """Percentile of an empty sample set."""


class MismatchedRuns(SimError):
    """compare_designs over results from different workloads/seeds."""


class CorruptDump(SimError):
    """Device dump violates the documented binary format."""


class PowerLoss(Exception):
    """Internal signal raised when an injected crash point is reached.

    Deliberately not a SimError: it must never be swallowed by normal
    error handling; only the crash harness catches it.
    """

    def __init__(self, event_index):
        self.event_index = event_index
        super().__init__(f"power loss at event {event_index}")
