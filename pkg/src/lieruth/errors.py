"""Exception hierarchy shared by every module."""


class LieRuthError(Exception):
    pass


class StructureError(LieRuthError):
    """Operands have incompatible shapes, variables or bundles."""


class PolyParseError(LieRuthError):
    def __init__(self, message, text="", position=None):
        self.text = text
        self.position = position
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)


class UnknownIdentifierError(PolyParseError):
    def __init__(self, name, text="", position=None):
        self.name = name
        super().__init__(f"unknown identifier {name!r}", text, position)


class UnsupportedBaseError(LieRuthError):
    """The computation is only defined over a point (constant coefficients)."""


class NotRegularError(LieRuthError):
    def __init__(self, message, witness=None):
        self.witness = witness
        super().__init__(message)


class NotExactError(NotRegularError):
    pass


class ExtensionError(LieRuthError):
    """Input does not define a Lie algebra extension."""


class DegreeBoundError(LieRuthError):
    pass


class ManifestError(LieRuthError):
    def __init__(self, message, block=None):
        self.block = block
        if block:
            message = f"[{block}] {message}"
        super().__init__(message)
