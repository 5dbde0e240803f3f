"""
Error type shared by every polycover module.

Failures carry a stable ``code`` (e.g. ``"ZeroVector"``, ``"OutsideDilate"``)
so callers and the CLI can branch on the kind of failure without parsing
messages.
"""

from typing import Any, Optional


class PolycoverError(RuntimeError):
    def __init__(self, code: str, message: str = "", *, witness: Optional[Any] = None):
        self.code = code
        self.witness = witness
        super().__init__(f"{code}: {message}" if message else code)


# Codes that signal bad input files or parameters rather than a
# mathematical failure. The CLI exits with 2 on these.
USAGE_ERROR_CODES = frozenset({"ParseError", "InvalidParameter"})
