"""Exception hierarchy shared by every bipmesh module."""


class MeshError(Exception):
    """Base class for all errors raised by bipmesh."""


class DegenerateElement(MeshError):
    """A triangle or tetrahedron has (numerically) zero measure."""


class OutOfRangeIndex(MeshError):
    """An element references a vertex index that does not exist."""


class NonConforming(MeshError):
    """An edge (2-D) or face (3-D) is shared by more than two elements."""


class DuplicateElement(MeshError):
    """Two elements have the same vertex set."""


class ParseError(MeshError):
    """Malformed mesh file. Carries the 1-based line and column of the problem."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class IndexBaseMismatch(ParseError):
    """Node and element files disagree on 0- versus 1-based numbering."""


class EmptyMesh(MeshError):
    """An operation that needs at least one element got none."""


class InvalidParam(MeshError):
    """Bad generator name or parameter."""


class SimplyConnectedWarning(UserWarning):
    """Euler characteristic differs from 1, so the domain is not simply connected."""
