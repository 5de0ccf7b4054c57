class ModelError(Exception):
    """Invalid model text or model content, positioned at ``line``/``column`` (1-based)."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column

    @property
    def pos(self) -> tuple[int, int]:
        return (self.line, self.column)

    def __str__(self):
        if self.line:
            return f"line {self.line}, column {self.column}: {self.message}"
        return self.message


class ParseError(ModelError):
    pass


class SemanticError(ModelError):
    pass


class CompileError(ModelError):
    pass
