"""Shared exception types."""


class SonomapError(Exception):
    """Base class for engine errors."""


class DuplicateId(SonomapError):
    pass


class MalformedPath(SonomapError):
    pass


class UnknownSignal(SonomapError):
    pass


class NotAnAutomatable(SonomapError):
    pass


class UnsupportedFormat(SonomapError):
    pass


class CorruptHeader(SonomapError):
    pass


class EmptyInput(SonomapError):
    pass


class InvalidCutoff(SonomapError):
    pass


class UnknownFeatureName(SonomapError):
    pass


class DestinationBusy(SonomapError):
    pass


class UnknownMapping(SonomapError):
    pass


class SchemaError(SonomapError):
    """Session file validation failure, carries a JSON-pointer location."""

    def __init__(self, pointer, message):
        self.pointer = pointer
        super().__init__(f"{pointer}: {message}")


class UnsupportedType(SonomapError):
    pass


class MalformedPacket(SonomapError):
    pass
