"""Tokenizer for VQL text.

Keywords are case-insensitive; each token records the byte offset of its
first character so syntax errors can point at the exact input position.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import VqlSyntaxError

KEYWORDS = frozenset(
    {
        "visualize",
        "select",
        "from",
        "join",
        "on",
        "as",
        "where",
        "group",
        "order",
        "by",
        "bin",
        "asc",
        "desc",
        "and",
        "or",
        "not",
        "in",
        "like",
        "between",
    }
)

_SYMBOLS = {
    ",": "COMMA",
    "(": "LPAREN",
    ")": "RPAREN",
    ".": "DOT",
    "*": "STAR",
}

_OPERATORS = ("<=", ">=", "!=", "<>", "=", "<", ">")


@dataclass(frozen=True)
class Token:
    kind: str  # keyword name, IDENT, NUMBER, STRING, COMMA, ..., OP, EOF
    text: str  # raw lexeme (quotes stripped for STRING)
    offset: int  # byte offset into the source


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    data = text
    i = 0
    n = len(data)
    byte_offset = 0

    def advance(k: int) -> None:
        nonlocal i, byte_offset
        byte_offset += len(data[i : i + k].encode("utf-8"))
        i += k

    while i < n:
        ch = data[i]
        if ch.isspace():
            advance(1)
            continue
        start = byte_offset
        if ch in _SYMBOLS:
            tokens.append(Token(_SYMBOLS[ch], ch, start))
            advance(1)
            continue
        two = data[i : i + 2]
        if two in _OPERATORS:
            tokens.append(Token("OP", two, start))
            advance(2)
            continue
        if ch in _OPERATORS:
            tokens.append(Token("OP", ch, start))
            advance(1)
            continue
        if ch in ("'", '"'):
            quote = ch
            j = i + 1
            while j < n and data[j] != quote:
                j += 1
            if j >= n:
                raise VqlSyntaxError("unterminated string literal", start)
            tokens.append(Token("STRING", data[i + 1 : j], start))
            advance(j - i + 1)
            continue
        if ch.isdigit() or (
            ch == "-" and i + 1 < n and data[i + 1].isdigit() and _number_position(tokens)
        ):
            j = i + 1 if ch == "-" else i
            while j < n and (data[j].isdigit() or data[j] == "."):
                j += 1
            tokens.append(Token("NUMBER", data[i:j], start))
            advance(j - i)
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (data[j].isalnum() or data[j] == "_"):
                j += 1
            word = data[i:j]
            low = word.lower()
            if low in KEYWORDS:
                tokens.append(Token(low.upper(), word, start))
            else:
                tokens.append(Token("IDENT", word, start))
            advance(j - i)
            continue
        raise VqlSyntaxError(f"unexpected character {ch!r}", start)
    tokens.append(Token("EOF", "", byte_offset))
    return tokens


def _number_position(tokens: list[Token]) -> bool:
    # A leading '-' starts a number only where a value makes sense, i.e.
    # after an operator, comma, opening paren, or value-introducing keyword.
    if not tokens:
        return False
    return tokens[-1].kind in {"OP", "COMMA", "LPAREN", "IN", "BETWEEN", "AND", "OR", "LIKE", "ON", "WHERE"}
