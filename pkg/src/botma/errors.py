"""Exception hierarchy shared by all modules."""


class TMAError(Exception):
    """Base class for every error raised by this package."""


class DegenerateGeometry(TMAError):
    """Observer and target coincide, so no bearing is defined."""


class InvalidRange(TMAError, ValueError):
    pass


class NearParallel(TMAError):
    """A bearing line and a track line are (almost) parallel."""


class OutOfWindow(TMAError, ValueError):
    pass


class SingularCandidate(TMAError):
    """Some bearing line never crosses the candidate track."""


class DegenerateTrack(TMAError):
    """Intersection points collapse onto each other (mean segment ~ 0)."""


class ShapeError(TMAError, ValueError):
    pass


class EmptySearchSpace(TMAError, ValueError):
    pass


class NoFeasibleCandidate(TMAError):
    """Every grid cell evaluated to an infinite cost."""


class DegenerateDistribution(TMAError):
    """Sample has zero variance; higher moments are undefined."""


class ConfigError(TMAError, ValueError):
    """Invalid or unreadable configuration file.

    ``field`` and ``line`` locate the problem when known.
    """

    def __init__(self, message, field=None, line=None, path=None):
        self.field = field
        self.line = line
        self.path = path
        loc = []
        if path is not None:
            loc.append(str(path))
        if line is not None:
            loc.append(f"line {line}")
        if field is not None:
            loc.append(f"field '{field}'")
        prefix = ": ".join([", ".join(loc)]) + ": " if loc else ""
        super().__init__(prefix + message)
