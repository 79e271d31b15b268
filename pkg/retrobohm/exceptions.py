"""Provide the RetroBohm exception hierarchy."""


class RetroBohmError(Exception):
    """Base class for every error raised by RetroBohm."""


class InvalidDirection(RetroBohmError, ValueError):
    """A direction vector is too short to be normalized."""


class NotHermitian(RetroBohmError, ValueError):
    """A spin operator matrix is not Hermitian."""


class ZeroOverlap(RetroBohmError):
    """The post-selected state is (numerically) orthogonal to the pre-selected one."""


class ZeroBranch(RetroBohmError):
    """The conditioning outcome has zero amplitude in the entangled state."""


class AntiparallelAxes(RetroBohmError):
    """Two measurement axes are too close to antiparallel for a finite spin vector."""


class PacketTooWide(RetroBohmError):
    """A wavepacket does not decay to the tail tolerance inside the grid."""


class UnstableStep(RetroBohmError):
    """A time step or its outcome violates the propagator's contract."""


class GridMismatch(RetroBohmError, ValueError):
    """Two grid functions do not share a grid or a time stamp."""


class MissingSpin(RetroBohmError, ValueError):
    """A spin density was requested for a wavefunction without a spin part."""


class NodeEncounter(RetroBohmError):
    """A trajectory reached a point where its velocity field is undefined."""


class GridExit(RetroBohmError):
    """A trajectory left the interior of the spacetime region it was given."""


class ZeroCurrent(RetroBohmError, ValueError):
    """A 4-current with both components zero has no direction."""


class PacketsNotSeparated(RetroBohmError):
    """Outcome packets still overlap at the end of a measurement run."""


class IncompleteBasis(RetroBohmError):
    """A basis fails the resolution-of-identity check on its grid."""


class ConfigInvalid(RetroBohmError):
    """A configuration file could not be parsed or validated."""


class ExperimentFailed(RetroBohmError):
    """An experiment ran but at least one of its criteria was not met."""
