"""Exception hierarchy shared by the library and the command line."""


class MapperError(Exception):
    """Base class for every error raised by mapperci."""

    exit_code = 1


class InputError(MapperError, ValueError):
    """Invalid argument, malformed file or out-of-range parameter."""

    exit_code = 2


class DegenerateDataError(InputError):
    """Input is well formed but cannot support the requested computation."""

    exit_code = 3


class InternalError(MapperError, RuntimeError):
    """An invariant that construction should guarantee was violated."""

    exit_code = 4
