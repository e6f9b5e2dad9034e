"""Exception types raised across the package."""


class PscaleError(Exception):
    """Base class for all package errors."""


class WorkloadError(PscaleError, ValueError):
    """A layer file or layer description is malformed."""

    def __init__(self, message, row=None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class EmptyWorkloadError(WorkloadError):
    pass


class InstanceTooLargeError(PscaleError, ValueError):
    """The reference simulator refuses instances beyond its size guard."""


class InfeasibleError(PscaleError, ValueError):
    """No optical mesh size satisfies the link budget."""


class ConfigError(PscaleError, ValueError):
    """Invalid run configuration; ``violations`` lists every problem found."""

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class ReportError(PscaleError, ValueError):
    """A persisted report file is missing or corrupt."""


# counts are serialized and handed to the compiled core as signed 64-bit
COUNT_MAX = 2**63 - 1


def check_count(value, what="count"):
    if value > COUNT_MAX:
        raise OverflowError(f"{what} {value} exceeds the 64-bit count range")
    return value
