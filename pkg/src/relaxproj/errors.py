"""Exception types raised across the library."""


class EmptyPolyhedronError(ValueError):
    """The polyhedron has no feasible point."""


class FaceCapError(ValueError):
    """Face enumeration requested beyond the supported constraint count."""


class PointNotInSetError(ValueError):
    """A point required to lie in a set does not."""


class KernelContainmentError(ValueError):
    """A supplied subspace is not contained in the common kernel of the normals."""


class ConfigError(ValueError):
    """An experiment configuration failed validation."""


class NumericalError(RuntimeError):
    """A numerical routine failed to certify its own postcondition."""
