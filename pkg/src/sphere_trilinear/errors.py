"""Exception hierarchy shared by every submodule."""


class SphereTrilinearError(ValueError):
    """Base class for all domain errors raised by the package."""


class UnsupportedDimension(SphereTrilinearError):
    pass


class InvalidRotation(SphereTrilinearError):
    pass


class InvalidGroupElement(SphereTrilinearError):
    pass


class NumericalDegeneracy(SphereTrilinearError):
    pass


class PoleOfChart(SphereTrilinearError):
    pass


class CoincidentPoints(SphereTrilinearError):
    pass


class SingularPoint(SphereTrilinearError):
    pass


class PoleOfGamma(SphereTrilinearError):
    pass


class OnPoleHyperplane(SphereTrilinearError):
    pass


class NotIntegrable(SphereTrilinearError):
    """The kernel is not absolutely integrable for the requested parameters.

    Callers should fall back on the closed form or on the normalized objects.
    """


class TruncationUnsound(SphereTrilinearError):
    pass
