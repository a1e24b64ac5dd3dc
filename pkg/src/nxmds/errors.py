"""Exception hierarchy.

Everything raised on bad input derives from NxmdsError so callers (and
the CLI) can catch one base class.  Division by zero in a field raises
the builtin ZeroDivisionError, as Python users expect.
"""


class NxmdsError(Exception):
    """Base class for all package errors."""


# --- field ---

class NonPrimeCharacteristic(NxmdsError):
    """Field characteristic is not a prime number."""


class FieldMismatch(NxmdsError):
    """Operand is not a canonical element of the field operated in."""


# --- code ---

class FieldTooSmall(NxmdsError):
    """Fewer field elements than storage nodes: no distinct evaluation points."""


class ShapeMismatch(NxmdsError):
    """Matrix or vector dimensions disagree with the code parameters."""


class TooFewNodes(NxmdsError):
    """Fewer than k distinct nodes supplied to the erasure decoder."""


class SingularSystem(NxmdsError):
    """Linear system that must be invertible was not; input is corrupt."""


class BadNodeId(NxmdsError):
    """Node id outside 1..n."""


# --- storage ---

class DataTooLarge(NxmdsError):
    """Payload exceeds the bit capacity of the data matrix."""


class BadModel(NxmdsError):
    """Unknown or inconsistently parameterized error-injection model."""


class NoGroundTruth(NxmdsError):
    """Operation needs the retained original data, which was dropped."""


# --- hashing ---

class ExtensionTooSmall(NxmdsError):
    """Seed extension field is too small for the requested output length."""


# --- verifier ---

class CommitmentViolation(NxmdsError):
    """Projection randomness was drawn before the error plan was committed."""


class TooFewHelpers(NxmdsError):
    """Fewer than k helper nodes supplied for a rebuild."""


class CorruptHelper(NxmdsError):
    """Helper contents are mutually inconsistent; some helper is corrupted."""


class DegenerateCode(NxmdsError):
    """n - k <= 1: the code cannot locate any erroneous node."""


# --- experiments ---

class TooLargeToEnumerate(NxmdsError):
    """Exhaustive enumeration would exceed the configured budget."""


# --- container / CLI formats ---

class ContainerError(NxmdsError):
    """Malformed container file."""


class BadMagic(ContainerError):
    """File does not start with the container magic."""


class VersionMismatch(ContainerError):
    """Container format version not supported."""


class TruncatedPayload(ContainerError):
    """Payload length disagrees with the declared shape."""
