"""A JSON parser that remembers the line of every value."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

Path = tuple[str | int, ...]


class TokenType(Enum):
    """Lexical classes of a configuration document.

    Each value is the pattern of the class; the lexer tries them in
    declaration order."""

    OPEN_BRACE = r"\{"
    CLOSE_BRACE = r"\}"
    OPEN_BRACKET = r"\["
    CLOSE_BRACKET = r"\]"
    COLON = r":"
    COMMA = r","
    STRING = r"\"(?:[^\"\\\n\t]|\\[\"\\/bfnrt]|\\u[a-fA-F0-9]{4})*\""
    NUMBER = r"-?(?:0|[1-9]\d*)(?:\.\d+)?(?:[eE][+-]?\d+)?"
    NULL = r"null"
    TRUE = r"true"
    FALSE = r"false"
    WHITESPACE = r"\s+"
    EOF = r"\Z"


PATTERNS = {token_type: re.compile(token_type.value) for token_type in TokenType}

LITERALS = {TokenType.NULL: None, TokenType.TRUE: True, TokenType.FALSE: False}


@dataclass(frozen=True)
class Token:
    """A lexed token and the line it starts on."""

    pos: int
    line: int
    type: TokenType
    value: str


class ConfigSyntaxError(ValueError):
    """Raised when a document is not valid JSON."""

    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


class Lexer:
    """Tokenize a string, counting lines."""

    def __init__(self, text: str) -> None:
        self._text = text
        self._pos = 0
        self._line = 1
        self._tokens: list[Token] = []

    def tokenize(self) -> None:
        """Tokenize the held string into self.tokens."""
        while True:
            token = self.get_next_token()
            self._tokens.append(token)
            if token.type == TokenType.EOF:
                break

    def get_next_token(self) -> Token:
        """Return the next token from the current position."""
        for token_type, pattern in PATTERNS.items():
            if match := pattern.match(self._text, pos=self._pos):
                value = match.group()
                token = Token(self._pos, self._line, token_type, value)
                self._pos += len(value)
                self._line += value.count("\n")
                return token

        chunk = self._text[self._pos : self._pos + 20]
        raise ConfigSyntaxError(self._line, f"unrecognized token {chunk!r}")

    @property
    def tokens(self) -> list[Token]:
        """Return the list of tokens."""
        return self._tokens


@dataclass
class Document:
    """Parsed values plus the line each value started on, keyed by path."""

    root: Any
    lines: dict[Path, int] = field(default_factory=dict)

    def line(self, path: Path) -> int:
        """Return the line of ``path`` or of its closest recorded ancestor."""
        while path not in self.lines and path:
            path = path[:-1]
        return self.lines.get(path, 1)


class ConfigParser:
    """Build Python values from tokens, rejecting what JSON rejects."""

    def __init__(self, tokens: list[Token], max_nesting: int = 19) -> None:
        self._tokens = tokens
        self._pos = 0
        self._nesting_level = 0
        self._nesting_max = max_nesting
        self._lines: dict[Path, int] = {}

    @property
    def current(self) -> Token:
        """Return the token at the current pointer."""
        return self._tokens[self._pos]

    def current_type(self) -> TokenType:
        """Return the type of the token at the current pointer."""
        return self.current.type

    def next(self) -> None:
        """Advance the pointer."""
        self._pos += 1

    def skip_whitespace(self) -> None:
        """Skip a whitespace token."""
        if self.current_type() == TokenType.WHITESPACE:
            self.next()

    def fail(self, message: str) -> ConfigSyntaxError:
        """Return a syntax error located at the current token."""
        return ConfigSyntaxError(self.current.line, message)

    def expect(self, token_type: TokenType, what: str) -> None:
        """Consume a token of ``token_type`` or fail."""
        if self.current_type() != token_type:
            raise self.fail(f"expected {what}, found {self.current.value or 'end of file'!r}")
        self.next()

    def depth_increase(self) -> None:
        """Increase the nesting level, failing past the limit."""
        self._nesting_level += 1
        if self._nesting_level > self._nesting_max:
            raise self.fail(f"nesting deeper than {self._nesting_max} levels")

    def depth_decrease(self) -> None:
        """Decrease the nesting level."""
        self._nesting_level -= 1

    def parse(self) -> Document:
        """Return the document; the top level must be an object."""
        self.skip_whitespace()
        if self.current_type() != TokenType.OPEN_BRACE:
            raise self.fail("a configuration must be a JSON object")
        root = self.parse_object(())
        self.skip_whitespace()
        self.expect(TokenType.EOF, "end of file")
        return Document(root, self._lines)

    def parse_object(self, path: Path) -> dict[str, Any]:
        """Parse an ``object``."""
        self.depth_increase()
        self.next()  # Skip {
        self.skip_whitespace()
        result: dict[str, Any] = {}
        while self.current_type() != TokenType.CLOSE_BRACE:
            if self.current_type() != TokenType.STRING:
                raise self.fail("object keys must be strings")
            key = json.loads(self.current.value)
            if key in result:
                raise self.fail(f"duplicate key {key!r}")
            self.next()
            self.skip_whitespace()
            self.expect(TokenType.COLON, "':'")
            result[key] = self.parse_value(path + (key,))
            if self.current_type() == TokenType.COMMA:
                self.next()
                self.skip_whitespace()
                # , cannot be followed by }
                if self.current_type() == TokenType.CLOSE_BRACE:
                    raise self.fail("trailing comma")
            elif self.current_type() != TokenType.CLOSE_BRACE:
                raise self.fail("expected ',' or '}'")
        self.next()  # Skip }
        self.depth_decrease()
        return result

    def parse_array(self, path: Path) -> list[Any]:
        """Parse an ``array``."""
        self.depth_increase()
        self.next()  # Skip [
        self.skip_whitespace()
        result: list[Any] = []
        while self.current_type() != TokenType.CLOSE_BRACKET:
            result.append(self.parse_value(path + (len(result),)))
            if self.current_type() == TokenType.COMMA:
                self.next()
                # , cannot be followed by ]
                self.skip_whitespace()
                if self.current_type() == TokenType.CLOSE_BRACKET:
                    raise self.fail("trailing comma")
            elif self.current_type() != TokenType.CLOSE_BRACKET:
                raise self.fail("expected ',' or ']'")
        self.next()  # Skip ]
        self.depth_decrease()
        return result

    def parse_value(self, path: Path) -> Any:
        """Parse a ``value`` and record its line."""
        self.skip_whitespace()
        token = self.current
        self._lines[path] = token.line
        if token.type in LITERALS:
            self.next()
            value = LITERALS[token.type]
        elif token.type == TokenType.NUMBER:
            self.next()
            value = float(token.value) if re.search(r"[.eE]", token.value) else int(token.value)
        elif token.type == TokenType.STRING:
            self.next()
            value = json.loads(token.value)
        elif token.type == TokenType.OPEN_BRACKET:
            value = self.parse_array(path)
        elif token.type == TokenType.OPEN_BRACE:
            value = self.parse_object(path)
        else:
            raise self.fail(f"unexpected {token.value or 'end of file'!r}")
        self.skip_whitespace()
        return value


def parse_document(text: str) -> Document:
    """Lex and parse a configuration document."""
    lexer = Lexer(text)
    lexer.tokenize()
    return ConfigParser(lexer.tokens).parse()
