"""Error types shared across the compiler pipeline."""


class ParseError(Exception):
    """Syntax error in .stex source or math source, with location."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        self.message = message
        loc = ""
        if line is not None:
            loc = f"line {line}"
            if column is not None:
                loc += f", col {column}"
            loc += ": "
        super().__init__(loc + message)


class ResolveError(Exception):
    """Import / reference resolution failure."""

    def __init__(self, message, module=None):
        self.module = module
        self.message = message
        if module:
            message = f"module '{module}': {message}"
        super().__init__(message)


class FormatError(Exception):
    """Malformed OMDoc XML input."""


class MissingNotation(Exception):
    """A symbol has no notation template in the render context."""

    def __init__(self, symbol_uri):
        self.symbol_uri = symbol_uri
        super().__init__(f"no notation for symbol {symbol_uri}")


class PatternError(Exception):
    """Malformed query pattern (e.g. unknown prefix)."""


class RepoError(Exception):
    """Repository access failure (missing revision, path, bad layout)."""
