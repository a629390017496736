class McKayFoldException(Exception):
    """Base exception for folding engine operations"""
    pass


class GroupMismatchError(McKayFoldException):
    """Raised when operands come from different ambient groups or levels"""
    pass


class LatticeMismatchError(GroupMismatchError):
    """Raised when a lattice vector lives on the wrong index set"""
    pass


class NotASubgroupError(McKayFoldException):
    """Raised when restricting to a subgroup of another group"""
    pass


class InvalidQuiverError(McKayFoldException):
    """Raised when a quiver has loops, duplicate ids or dangling endpoints"""
    pass


class InvalidActionError(McKayFoldException):
    """Raised when a monomial action fails validation"""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class UnknownArrowError(McKayFoldException):
    """Raised when an arrow id is not part of the quiver"""
    pass


class ConstructionMismatchError(McKayFoldException):
    """Raised when two constructions of the same object disagree"""
    pass


class NotSymmetrizableError(McKayFoldException):
    """Raised when a matrix is not a symmetrizable generalized Cartan matrix"""
    pass


class NotFiniteTypeError(McKayFoldException):
    """Raised when a finite type construction is requested for other input"""
    pass


class RepresentationError(McKayFoldException):
    """Raised when representation shapes or dimensions do not match"""
    pass


class DocumentError(McKayFoldException):
    """Raised when an input document fails schema or reference checks"""
    pass
