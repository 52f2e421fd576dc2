class SignatureError(ValueError):
    """An operation or index is not available in the chosen signature."""


class ParseError(ValueError):
    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")

    def pointer(self) -> str:
        return f"{self.text}\n{' ' * self.position}^"


class AxiomViolation(ValueError):
    """A finite algebra fails some instance of its axioms."""

    def __init__(self, failures):
        self.failures = list(failures)
        super().__init__(f"{len(self.failures)} axiom instance(s) fail, first: {self.failures[:3]}")
