class StegEdgeError(ValueError):
    """
    Base for everything stegedge raises on bad input. The exit status is what
    the command line tools hand back to the shell.
    """
    exit_status = 1


class ImageFormatError(StegEdgeError):
    exit_status = 2


class MalformedHeader(ImageFormatError):
    pass


class TruncatedData(ImageFormatError):
    pass


class UnsupportedMaxval(ImageFormatError):
    pass


class PlaneOutOfRange(StegEdgeError):
    pass


class ParameterOutOfRange(StegEdgeError):
    pass


class InvalidBlockSize(StegEdgeError):
    pass


class EmptyPayload(StegEdgeError):
    pass


class PayloadTooLarge(StegEdgeError):
    pass


class OddPayloadLength(StegEdgeError):
    pass


class ImageTooNarrow(StegEdgeError):
    pass


class GroupTooShort(StegEdgeError):
    pass


class InsufficientCapacity(StegEdgeError):
    exit_status = 3

    def __init__(self, required, available):
        self.required = tuple(required)
        self.available = tuple(available)
        super().__init__("payload needs {} bits per case but the cover offers at most {}".format(
            self.required, self.available))


class DimensionMismatch(StegEdgeError):
    exit_status = 4


class IntegrityError(StegEdgeError):
    exit_status = 4


class BadMagic(IntegrityError):
    pass


class UnsupportedVersion(IntegrityError):
    pass


class CorruptHeader(IntegrityError):
    pass


class PlanMismatch(IntegrityError):
    pass
