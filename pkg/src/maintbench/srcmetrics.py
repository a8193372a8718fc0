"""Token-level metric extraction from C-like source files.

A deliberately small scanner: no preprocessing, no parsing. It lexes one
file at a time, counts Halstead operators/operands, decision points, and
line categories, and feeds the results to the maintainability-index
formulas. The counting convention is fixed and documented here so fixture
records stay stable:

* keywords count as operators;
* the '(' of a call (an identifier immediately followed by '(') counts
  once as the operator "()";
* ';' and ',' and remaining punctuation are not counted;
* identifiers and literals (one token per string/char/number) are operands;
* preprocessor directive lines are skipped by the lexer but still count
  as source lines.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from .mi import MiInputs, MiScore, compute_mi

IDENTIFIER = "identifier"
LITERAL = "literal"
OPERATOR = "operator"
KEYWORD = "keyword"
PUNCTUATION = "punctuation"

_PUNCT_CHARS = set("(){}[];,")


class LexError(ValueError):
    """Unterminated comment or literal; the message names the line."""


@dataclass(frozen=True)
class Token:
    lexeme: str
    cls: str
    line: int


@dataclass(frozen=True)
class LanguageProfile:
    name: str
    line_comment: str
    block_comment: tuple[str, str]
    string_delimiters: tuple[str, ...]
    operators: tuple[str, ...]  # sorted longest-first for maximal munch
    keywords: frozenset[str]
    decision_keywords: frozenset[str]
    short_circuit: frozenset[str]


def _profile(name, operators, keywords) -> LanguageProfile:
    return LanguageProfile(
        name=name,
        line_comment="//",
        block_comment=("/*", "*/"),
        string_delimiters=('"', "'"),
        operators=tuple(sorted(operators, key=len, reverse=True)),
        keywords=frozenset(keywords),
        decision_keywords=frozenset({"if", "while", "for", "case", "catch"}),
        short_circuit=frozenset({"&&", "||"}),
    )


_C_OPERATORS = [
    "<<=", ">>=", "...",
    "->", "++", "--", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||",
    "+=", "-=", "*=", "/=", "%=", "&=", "^=", "|=",
    "+", "-", "*", "/", "%", "=", "<", ">", "!", "&", "|", "^", "~",
    "?", ":", ".",
]

_C_KEYWORDS = [
    "auto", "break", "case", "char", "const", "continue", "default", "do",
    "double", "else", "enum", "extern", "float", "for", "goto", "if",
    "inline", "int", "long", "register", "restrict", "return", "short",
    "signed", "sizeof", "static", "struct", "switch", "typedef", "union",
    "unsigned", "void", "volatile", "while",
]

_CPP_KEYWORDS = _C_KEYWORDS + [
    "bool", "catch", "class", "constexpr", "delete", "explicit", "false",
    "friend", "mutable", "namespace", "new", "noexcept", "nullptr",
    "operator", "private", "protected", "public", "template", "this",
    "throw", "true", "try", "typename", "using", "virtual",
]

_JAVA_KEYWORDS = [
    "abstract", "assert", "boolean", "break", "byte", "case", "catch",
    "char", "class", "const", "continue", "default", "do", "double",
    "else", "enum", "extends", "false", "final", "finally", "float",
    "for", "goto", "if", "implements", "import", "instanceof", "int",
    "interface", "long", "native", "new", "null", "package", "private",
    "protected", "public", "return", "short", "static", "strictfp",
    "super", "switch", "synchronized", "this", "throw", "throws",
    "transient", "true", "try", "void", "volatile", "while",
]

C_PROFILE = _profile("c", _C_OPERATORS, _C_KEYWORDS)
CPP_PROFILE = _profile("cpp", _C_OPERATORS + ["::", "->*", ".*"], _CPP_KEYWORDS)
JAVA_PROFILE = _profile(
    "java", _C_OPERATORS + [">>>=", ">>>", "::"], _JAVA_KEYWORDS
)

_PROFILES = {
    "c": C_PROFILE,
    "cpp": CPP_PROFILE,
    "c++": CPP_PROFILE,
    "cxx": CPP_PROFILE,
    "java": JAVA_PROFILE,
}


def profile_for(language: str) -> LanguageProfile:
    try:
        return _PROFILES[language.lower()]
    except KeyError:
        raise ValueError(
            f"no language profile for {language!r}; available: c, cpp, java"
        ) from None


@dataclass(frozen=True)
class FileMetrics:
    eta1: int
    eta2: int
    n1: int
    n2: int
    volume: float
    cyclomatic: int
    loc_total: int
    loc_source: int
    loc_comment: int
    comment_fraction: float


class _LineFlags:
    __slots__ = ("comment", "code")

    def __init__(self):
        self.comment: set[int] = set()
        self.code: set[int] = set()


def _is_ident_start(ch: str) -> bool:
    return ch.isalpha() or ch in "_$"


def _is_ident_char(ch: str) -> bool:
    return ch.isalnum() or ch in "_$"


def _scan(source: str, profile: LanguageProfile) -> tuple[list[Token], _LineFlags]:
    tokens: list[Token] = []
    flags = _LineFlags()
    i = 0
    n = len(source)
    line = 1
    at_line_start = True
    lc = profile.line_comment
    bc_open, bc_close = profile.block_comment

    while i < n:
        ch = source[i]
        if ch == "\n":
            line += 1
            at_line_start = True
            i += 1
            continue
        if ch.isspace():
            i += 1
            continue
        if at_line_start and ch == "#":
            # Preprocessor directive: the line (plus backslash continuations)
            # is source but its tokens are not counted.
            flags.code.add(line)
            while i < n:
                eol = source.find("\n", i)
                if eol == -1:
                    i = n
                    break
                continued = source[i:eol].rstrip().endswith("\\")
                i = eol + 1
                line += 1
                if not continued:
                    break
                flags.code.add(line)
            at_line_start = True
            continue
        at_line_start = False
        if source.startswith(lc, i):
            flags.comment.add(line)
            eol = source.find("\n", i)
            i = n if eol == -1 else eol
            continue
        if source.startswith(bc_open, i):
            start_line = line
            flags.comment.add(line)
            end = source.find(bc_close, i + len(bc_open))
            if end == -1:
                raise LexError(f"unterminated block comment starting at line {start_line}")
            line += source.count("\n", i, end)
            for extra in range(start_line, line + 1):
                flags.comment.add(extra)
            i = end + len(bc_close)
            continue
        if ch in profile.string_delimiters:
            start = i
            i += 1
            while i < n:
                if source[i] == "\\":
                    i += 2
                    continue
                if source[i] == "\n":
                    raise LexError(f"unterminated string literal at line {line}")
                if source[i] == ch:
                    i += 1
                    break
                i += 1
            else:
                raise LexError(f"unterminated string literal at line {line}")
            if i > n:
                raise LexError(f"unterminated string literal at line {line}")
            tokens.append(Token(source[start:i], LITERAL, line))
            flags.code.add(line)
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and source[i + 1].isdigit()):
            start = i
            i += 1
            while i < n:
                c = source[i]
                if c.isalnum() or c in "._":
                    i += 1
                elif c in "+-" and source[i - 1] in "eEpP" and source[start] != "'":
                    i += 1
                else:
                    break
            tokens.append(Token(source[start:i], LITERAL, line))
            flags.code.add(line)
            continue
        if _is_ident_start(ch):
            start = i
            i += 1
            while i < n and _is_ident_char(source[i]):
                i += 1
            lexeme = source[start:i]
            cls = KEYWORD if lexeme in profile.keywords else IDENTIFIER
            tokens.append(Token(lexeme, cls, line))
            flags.code.add(line)
            continue
        matched = None
        for op in profile.operators:
            if source.startswith(op, i):
                matched = op
                break
        if matched is not None:
            tokens.append(Token(matched, OPERATOR, line))
            flags.code.add(line)
            i += len(matched)
            continue
        # Everything else (braces, separators, stray symbols) is punctuation.
        tokens.append(Token(ch, PUNCTUATION, line))
        flags.code.add(line)
        i += 1

    return tokens, flags


def tokenize(source: str, profile: LanguageProfile) -> list[Token]:
    """Lex a source file; comments and literal contents are opaque."""
    tokens, _ = _scan(source, profile)
    return tokens


@dataclass(frozen=True)
class HalsteadCounts:
    eta1: int
    eta2: int
    n1: int
    n2: int
    volume: float


def halstead(tokens: list[Token], profile: LanguageProfile) -> HalsteadCounts:
    """Distinct/total operator and operand counts plus Halstead volume."""
    operators: Counter[str] = Counter()
    operands: Counter[str] = Counter()
    prev: Token | None = None
    for tok in tokens:
        if tok.cls in (OPERATOR, KEYWORD):
            operators[tok.lexeme] += 1
        elif tok.cls in (IDENTIFIER, LITERAL):
            operands[tok.lexeme] += 1
        elif tok.lexeme == "(" and prev is not None and prev.cls == IDENTIFIER:
            operators["()"] += 1
        prev = tok
    eta1, eta2 = len(operators), len(operands)
    n1, n2 = sum(operators.values()), sum(operands.values())
    vocabulary = eta1 + eta2
    volume = (n1 + n2) * math.log2(vocabulary) if vocabulary >= 2 else 0.0
    return HalsteadCounts(eta1=eta1, eta2=eta2, n1=n1, n2=n2, volume=volume)


def cyclomatic(tokens: list[Token], profile: LanguageProfile) -> int:
    """1 + decision keywords + short-circuit operators + ternary '?'."""
    count = 1
    for tok in tokens:
        if tok.cls == KEYWORD and tok.lexeme in profile.decision_keywords:
            count += 1
        elif tok.cls == OPERATOR and (tok.lexeme in profile.short_circuit or tok.lexeme == "?"):
            count += 1
    return count


def loc_stats(source: str, profile: LanguageProfile) -> tuple[int, int, int, float]:
    """(total, source, comment, comment_fraction) line counts.

    A line counts as comment if any comment content touches it, and as
    source if it carries at least one code token (directive lines
    included); a line can be both.
    """
    _, flags = _scan(source, profile)
    loc_total = len(source.splitlines())
    loc_comment = len(flags.comment)
    loc_source = len(flags.code)
    return loc_total, loc_source, loc_comment, loc_comment / max(1, loc_total)


def compute_file_metrics(source: str, profile: LanguageProfile) -> FileMetrics:
    tokens, flags = _scan(source, profile)
    counts = halstead(tokens, profile)
    loc_total = len(source.splitlines())
    return FileMetrics(
        eta1=counts.eta1,
        eta2=counts.eta2,
        n1=counts.n1,
        n2=counts.n2,
        volume=counts.volume,
        cyclomatic=cyclomatic(tokens, profile),
        loc_total=loc_total,
        loc_source=len(flags.code),
        loc_comment=len(flags.comment),
        comment_fraction=len(flags.comment) / max(1, loc_total),
    )


def file_mi(
    source: str, profile: LanguageProfile, variant: str = "visual_studio"
) -> tuple[FileMetrics, MiScore]:
    """Extract metrics and score them with the chosen MI variant.

    Degenerate files whose Halstead volume is below 1 are scored with a
    neutral volume of 1 (ln 1 = 0) so near-empty but non-empty files still
    get a score; a file with no source lines is a domain error.
    """
    metrics = compute_file_metrics(source, profile)
    score = compute_mi(
        MiInputs(
            volume=max(metrics.volume, 1.0),
            cyclomatic=float(metrics.cyclomatic),
            loc=float(metrics.loc_source),
            comment_fraction=metrics.comment_fraction,
        ),
        variant,
    )
    return metrics, score
