"""Tokenizer and recursive-descent parser for the autonomy model DSL.

Grammar (keywords are literal, `#` starts a line comment, input is UTF-8):

    model      := { behavior }
    behavior   := "behavior" IDENT "{" { alias | guard } "tree" "{" node "}" "}"
    alias      := "alias" STRING { "," STRING }
    guard      := "guard" cond [ "[" "prior" NUMBER "]" ] "explain" STRING
    node       := ifnode | reason | "null"
    ifnode     := "if" cond [ "[" "prior" NUMBER "]" ] "{" node "}" "else" "{" node "}"
    reason     := "reason" IDENT STRING
    cond       := or ;  or := and {"or" and} ;  and := unary {"and" unary}
    unary      := "not" unary | "(" cond ")" | compare | in_zone | phase
    compare    := operand CMP operand ;  CMP := "<"|"<="|">"|">="|"=="|"!="
    operand    := IDENT | NUMBER | DURATION | STRING | "true" | "false"
               | "elapsed_since" "(" IDENT ")"
    in_zone    := "in_zone" "(" STRING ")" ;  phase := "phase" "==" STRING
    DURATION   := NUMBER ("s"|"m"|"h")

Every failure raises ModelSyntaxError carrying the 1-based line and column of
the offending token plus an expected/found message. Prior values are parsed
as plain numbers; range checks live in the validator, not here.
"""

from __future__ import annotations

from dataclasses import dataclass

from .nodes import (
    DEFAULT_PRIOR,
    And,
    AutonomyModel,
    BehaviorSpec,
    BoolLit,
    Compare,
    Condition,
    DecisionNode,
    DurationLit,
    ElapsedSince,
    GuardConstraint,
    InZone,
    Not,
    NullLeaf,
    NumberLit,
    Operand,
    Or,
    PhaseIs,
    ReasonLeaf,
    TemplateText,
    TextLit,
    TreeNode,
    Var,
    template_slot_error,
)

RESERVED = frozenset(
    {
        "behavior",
        "alias",
        "guard",
        "explain",
        "tree",
        "if",
        "else",
        "reason",
        "null",
        "prior",
        "and",
        "or",
        "not",
        "in_zone",
        "phase",
        "elapsed_since",
        "true",
        "false",
    }
)

_DURATION_UNITS = {"s": 1.0, "m": 60.0, "h": 3600.0}
_CMP_TOKENS = frozenset({"<", "<=", ">", ">=", "==", "!="})


class ModelSyntaxError(ValueError):
    """Syntax-level rejection of DSL text, with position information."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.reason = message
        self.line = line
        self.col = col


class DuplicateBehaviorError(ModelSyntaxError):
    def __init__(self, behavior_id: str, line: int, col: int):
        super().__init__(f"duplicate behavior id '{behavior_id}'", line, col)
        self.behavior_id = behavior_id


class DuplicateAliasError(ModelSyntaxError):
    def __init__(self, alias: str, first_behavior: str, second_behavior: str, line: int, col: int):
        super().__init__(
            f"alias \"{alias}\" is declared by both behavior "
            f"'{first_behavior}' and behavior '{second_behavior}'",
            line,
            col,
        )
        self.alias = alias
        self.behaviors = (first_behavior, second_behavior)


@dataclass(frozen=True)
class Token:
    kind: str  # "ident" | "number" | "duration" | "string" | punctuation | "eof"
    value: object
    line: int
    col: int

    def describe(self) -> str:
        if self.kind == "eof":
            return "end of input"
        if self.kind == "string":
            return "string"
        if self.kind in ("number", "duration"):
            return f"{self.kind} {self.value}"
        if self.kind == "ident":
            return f"'{self.value}'"
        return f"'{self.kind}'"


def _is_digit(ch: str) -> bool:
    return "0" <= ch <= "9"


def _is_ident_start(ch: str) -> bool:
    return "a" <= ch <= "z" or "A" <= ch <= "Z" or ch == "_"


def _is_ident_char(ch: str) -> bool:
    return _is_ident_start(ch) or _is_digit(ch)


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    i = 0
    line = 1
    col = 1
    n = len(source)

    def error(message: str, at_line: int, at_col: int):
        raise ModelSyntaxError(message, at_line, at_col)

    while i < n:
        ch = source[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and source[i] != "\n":
                i += 1
            continue

        start_line, start_col = line, col

        if _is_ident_start(ch):
            j = i
            while j < n and _is_ident_char(source[j]):
                j += 1
            tokens.append(Token("ident", source[i:j], start_line, start_col))
            col += j - i
            i = j
            continue

        if _is_digit(ch):
            j = i
            while j < n and _is_digit(source[j]):
                j += 1
            if j < n and source[j] == "." and j + 1 < n and _is_digit(source[j + 1]):
                j += 1
                while j < n and _is_digit(source[j]):
                    j += 1
            value = float(source[i:j])
            if (
                j < n
                and source[j] in _DURATION_UNITS
                and (j + 1 >= n or not _is_ident_char(source[j + 1]))
            ):
                value *= _DURATION_UNITS[source[j]]
                j += 1
                tokens.append(Token("duration", value, start_line, start_col))
            else:
                tokens.append(Token("number", value, start_line, start_col))
            col += j - i
            i = j
            continue

        if ch == '"':
            j = i + 1
            out: list[str] = []
            while True:
                if j >= n or source[j] == "\n":
                    error("unterminated string", start_line, start_col)
                c = source[j]
                if c == '"':
                    j += 1
                    break
                if c == "\\":
                    if j + 1 >= n:
                        error("unterminated string", start_line, start_col)
                    esc = source[j + 1]
                    if esc == "n":
                        out.append("\n")
                    elif esc == "t":
                        out.append("\t")
                    elif esc in ('"', "\\"):
                        out.append(esc)
                    else:
                        error(f"invalid escape '\\{esc}' in string", line, col + (j - i))
                    j += 2
                    continue
                out.append(c)
                j += 1
            tokens.append(Token("string", "".join(out), start_line, start_col))
            col += j - i
            i = j
            continue

        two = source[i : i + 2]
        if two in ("<=", ">=", "==", "!="):
            tokens.append(Token(two, two, start_line, start_col))
            i += 2
            col += 2
            continue
        if ch in "{}()[],<>":
            tokens.append(Token(ch, ch, start_line, start_col))
            i += 1
            col += 1
            continue
        if ch in "=!":
            error(f"unexpected character '{ch}' (did you mean '{ch}='?)", start_line, start_col)
        error(f"unexpected character {ch!r}", start_line, start_col)

    tokens.append(Token("eof", None, line, col))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token]):
        self._tokens = tokens
        self._pos = 0

    # -- token plumbing --------------------------------------------------

    def peek(self) -> Token:
        return self._tokens[self._pos]

    def advance(self) -> Token:
        tok = self._tokens[self._pos]
        if tok.kind != "eof":
            self._pos += 1
        return tok

    def at_eof(self) -> bool:
        return self.peek().kind == "eof"

    def at_keyword(self, word: str) -> bool:
        tok = self.peek()
        return tok.kind == "ident" and tok.value == word

    def fail(self, expected: str) -> ModelSyntaxError:
        tok = self.peek()
        raise ModelSyntaxError(f"expected {expected}, found {tok.describe()}", tok.line, tok.col)

    def expect(self, kind: str) -> Token:
        if self.peek().kind != kind:
            self.fail(f"'{kind}'")
        return self.advance()

    def expect_keyword(self, word: str) -> Token:
        if not self.at_keyword(word):
            self.fail(f"'{word}'")
        return self.advance()

    def expect_ident(self, what: str) -> Token:
        tok = self.peek()
        if tok.kind != "ident":
            self.fail(what)
        if tok.value in RESERVED:
            raise ModelSyntaxError(
                f"'{tok.value}' is a reserved word and cannot be used as {what}",
                tok.line,
                tok.col,
            )
        return self.advance()

    def expect_string(self, what: str) -> Token:
        tok = self.peek()
        if tok.kind != "string":
            self.fail(what)
        return self.advance()

    # -- grammar productions ----------------------------------------------

    def parse_model(self, model_name: str, version: str) -> AutonomyModel:
        behaviors: list[BehaviorSpec] = []
        id_lines: dict[str, int] = {}
        alias_owner: dict[str, str] = {}
        while not self.at_eof():
            if not self.at_keyword("behavior"):
                self.fail("'behavior'")
            spec, id_tok, alias_toks = self.parse_behavior()
            if spec.id in id_lines:
                raise DuplicateBehaviorError(spec.id, id_tok.line, id_tok.col)
            id_lines[spec.id] = id_tok.line
            for phrase, tok in alias_toks:
                if phrase in alias_owner:
                    raise DuplicateAliasError(
                        phrase, alias_owner[phrase], spec.id, tok.line, tok.col
                    )
                alias_owner[phrase] = spec.id
            behaviors.append(spec)
        return AutonomyModel(tuple(behaviors), model_name, version)

    def parse_behavior(self) -> tuple[BehaviorSpec, Token, list[tuple[str, Token]]]:
        self.expect_keyword("behavior")
        id_tok = self.expect_ident("a behavior id")
        self.expect("{")
        aliases: list[str] = []
        alias_toks: list[tuple[str, Token]] = []
        guards: list[GuardConstraint] = []
        while True:
            if self.at_keyword("alias"):
                self.advance()
                tok = self.expect_string("an alias phrase")
                aliases.append(tok.value)
                alias_toks.append((tok.value, tok))
                while self.peek().kind == ",":
                    self.advance()
                    tok = self.expect_string("an alias phrase")
                    aliases.append(tok.value)
                    alias_toks.append((tok.value, tok))
            elif self.at_keyword("guard"):
                self.advance()
                cond = self.parse_cond()
                prior = self.parse_optional_prior()
                self.expect_keyword("explain")
                guards.append(
                    GuardConstraint(
                        condition=cond,
                        explain_template=self.parse_template("a guard explanation"),
                        prior_true=prior,
                    )
                )
            else:
                break
        self.expect_keyword("tree")
        self.expect("{")
        tree = self.parse_node()
        self.expect("}")
        self.expect("}")
        spec = BehaviorSpec(id=id_tok.value, aliases=tuple(aliases), guards=tuple(guards), tree=tree)
        return spec, id_tok, alias_toks

    def parse_optional_prior(self) -> float:
        if self.peek().kind != "[":
            return DEFAULT_PRIOR
        self.advance()
        self.expect_keyword("prior")
        tok = self.peek()
        if tok.kind != "number":
            self.fail("a prior probability")
        self.advance()
        self.expect("]")
        return float(tok.value)

    def parse_template(self, what: str) -> TemplateText:
        tok = self.expect_string(what)
        problem = template_slot_error(tok.value)
        if problem is not None:
            raise ModelSyntaxError(f"malformed template: {problem}", tok.line, tok.col)
        return TemplateText(tok.value)

    def parse_node(self) -> TreeNode:
        if self.at_keyword("if"):
            self.advance()
            cond = self.parse_cond()
            prior = self.parse_optional_prior()
            self.expect("{")
            true_child = self.parse_node()
            self.expect("}")
            self.expect_keyword("else")
            self.expect("{")
            false_child = self.parse_node()
            self.expect("}")
            return DecisionNode(cond, prior, true_child, false_child)
        if self.at_keyword("reason"):
            self.advance()
            id_tok = self.expect_ident("a reason id")
            template = self.parse_template("a reason template")
            return ReasonLeaf(id_tok.value, template)
        if self.at_keyword("null"):
            self.advance()
            return NullLeaf()
        self.fail("'if', 'reason' or 'null'")

    def parse_cond(self) -> Condition:
        node = self.parse_and()
        while self.at_keyword("or"):
            self.advance()
            node = Or(node, self.parse_and())
        return node

    def parse_and(self) -> Condition:
        node = self.parse_unary()
        while self.at_keyword("and"):
            self.advance()
            node = And(node, self.parse_unary())
        return node

    def parse_unary(self) -> Condition:
        if self.at_keyword("not"):
            self.advance()
            return Not(self.parse_unary())
        if self.peek().kind == "(":
            self.advance()
            node = self.parse_cond()
            self.expect(")")
            return node
        if self.at_keyword("in_zone"):
            self.advance()
            self.expect("(")
            zone = self.expect_string("a zone id")
            self.expect(")")
            return InZone(zone.value)
        if self.at_keyword("phase"):
            self.advance()
            self.expect("==")
            phase = self.expect_string("a phase id")
            return PhaseIs(phase.value)
        left = self.parse_operand()
        op_tok = self.peek()
        if op_tok.kind not in _CMP_TOKENS:
            self.fail("a comparison operator")
        self.advance()
        right = self.parse_operand()
        return Compare(left, op_tok.kind, right)

    def parse_operand(self) -> Operand:
        tok = self.peek()
        if tok.kind == "number":
            self.advance()
            return NumberLit(float(tok.value))
        if tok.kind == "duration":
            self.advance()
            return DurationLit(float(tok.value))
        if tok.kind == "string":
            self.advance()
            return TextLit(tok.value)
        if self.at_keyword("true"):
            self.advance()
            return BoolLit(True)
        if self.at_keyword("false"):
            self.advance()
            return BoolLit(False)
        if self.at_keyword("elapsed_since"):
            self.advance()
            self.expect("(")
            kind = self.expect_ident("an event kind")
            self.expect(")")
            return ElapsedSince(kind.value)
        if tok.kind == "ident" and tok.value not in RESERVED:
            self.advance()
            return Var(tok.value)
        self.fail("an operand")


def parse_model(source: str, model_name: str = "", version: str = "") -> AutonomyModel:
    """Parse DSL text into a fully-structured model.

    Defaults (prior 0.5) are filled in here. The model name and version are
    not part of the DSL; callers that care can pass them through.
    """
    return _Parser(tokenize(source)).parse_model(model_name, version)


def parse_condition(source: str) -> Condition:
    """Parse a standalone condition expression."""
    parser = _Parser(tokenize(source))
    cond = parser.parse_cond()
    if not parser.at_eof():
        parser.fail("end of input")
    return cond
