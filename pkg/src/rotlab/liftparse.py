"""Recursive-descent parser for lift expressions.

Grammar (whitespace insensitive):

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := ('+' | '-') unary | power
    power   := atom ('^' unary)?
    atom    := NUMBER | 'pi' | VAR | ('sin' | 'cos') '(' expr ')' | '(' expr ')'

Numbers are decimal literals; rationals are written with '/'. The only names
allowed are the variables (usually just `x`), `pi`, `sin` and `cos`, which
keeps every parsed lift continuous by construction. Parse failures raise
LiftSyntaxError carrying the 0-based offset and what was expected there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from rotlab.errors import LiftSyntaxError

_FUNCTIONS = ("sin", "cos")


@dataclass(frozen=True, slots=True)
class Token:
    kind: str  # "num" | "name" | "op" | "end"
    text: str
    pos: int


def _tokenize(source: str) -> list[Token]:
    tokens = []
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit() or ch == ".":
            j = i
            seen_dot = False
            while j < n and (source[j].isdigit() or (source[j] == "." and not seen_dot)):
                if source[j] == ".":
                    seen_dot = True
                j += 1
            text = source[i:j]
            if text == ".":
                raise LiftSyntaxError(f"bad number at position {i}", i, "digit")
            tokens.append(Token("num", text, i))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            tokens.append(Token("name", source[i:j], i))
            i = j
        elif ch in "+-*/^()":
            tokens.append(Token("op", ch, i))
            i += 1
        else:
            raise LiftSyntaxError(
                f"unexpected character {ch!r} at position {i}", i,
                "number, name or operator")
    tokens.append(Token("end", "", n))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token], variables: tuple[str, ...]):
        self.tokens = tokens
        self.k = 0
        self.variables = variables

    def peek(self) -> Token:
        return self.tokens[self.k]

    def take(self) -> Token:
        t = self.tokens[self.k]
        self.k += 1
        return t

    def expect_op(self, op: str):
        t = self.peek()
        if t.kind == "op" and t.text == op:
            return self.take()
        raise LiftSyntaxError(
            f"expected {op!r} at position {t.pos}", t.pos, repr(op))

    def parse(self):
        node = self.expr()
        t = self.peek()
        if t.kind != "end":
            raise LiftSyntaxError(
                f"unexpected {t.text!r} at position {t.pos}", t.pos,
                "end of input")
        return node

    def expr(self):
        node = self.term()
        while True:
            t = self.peek()
            if t.kind == "op" and t.text in "+-":
                self.take()
                rhs = self.term()
                node = ("add" if t.text == "+" else "sub", node, rhs)
            else:
                return node

    def term(self):
        node = self.unary()
        while True:
            t = self.peek()
            if t.kind == "op" and t.text in "*/":
                self.take()
                rhs = self.unary()
                node = ("mul" if t.text == "*" else "div", node, rhs)
            else:
                return node

    def unary(self):
        t = self.peek()
        if t.kind == "op" and t.text in "+-":
            self.take()
            node = self.unary()
            return node if t.text == "+" else ("neg", node)
        return self.power()

    def power(self):
        base = self.atom()
        t = self.peek()
        if t.kind == "op" and t.text == "^":
            self.take()
            return ("pow", base, self.unary())
        return base

    def atom(self):
        t = self.peek()
        if t.kind == "num":
            self.take()
            return ("num", float(t.text))
        if t.kind == "name":
            self.take()
            if t.text in self.variables:
                return ("var", t.text)
            if t.text == "pi":
                return ("num", math.pi)
            if t.text in _FUNCTIONS:
                self.expect_op("(")
                arg = self.expr()
                self.expect_op(")")
                return (t.text, arg)
            raise LiftSyntaxError(
                f"unknown name {t.text!r} at position {t.pos}", t.pos,
                f"one of {self.variables + ('pi',) + _FUNCTIONS}")
        if t.kind == "op" and t.text == "(":
            self.take()
            node = self.expr()
            self.expect_op(")")
            return node
        raise LiftSyntaxError(
            f"expected expression at position {t.pos}", t.pos,
            "number, variable or '('")


def parse_lift(source: str, variables: tuple[str, ...] = ("x",)):
    """Parse an expression into an evaluable tree. Raises LiftSyntaxError."""
    return _Parser(_tokenize(source), variables).parse()


def eval_tree(node, env: dict[str, float]) -> float:
    op = node[0]
    if op == "num":
        return node[1]
    if op == "var":
        return env[node[1]]
    if op == "neg":
        return -eval_tree(node[1], env)
    if op == "sin":
        return math.sin(eval_tree(node[1], env))
    if op == "cos":
        return math.cos(eval_tree(node[1], env))
    a = eval_tree(node[1], env)
    b = eval_tree(node[2], env)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "pow":
        return a ** b
    raise ValueError(f"bad node {node!r}")


def _codegen(node) -> str:
    op = node[0]
    if op == "num":
        return repr(node[1])
    if op == "var":
        return node[1]
    if op == "neg":
        return f"(-{_codegen(node[1])})"
    if op in _FUNCTIONS:
        return f"{op}({_codegen(node[1])})"
    a, b = _codegen(node[1]), _codegen(node[2])
    sym = {"add": "+", "sub": "-", "mul": "*", "div": "/", "pow": "**"}[op]
    return f"({a}{sym}{b})"


def compile_tree(node, variables: tuple[str, ...] = ("x",)):
    """Compile a parse tree to a fast plain-Python callable."""
    src = f"lambda {', '.join(variables)}: {_codegen(node)}"
    return eval(src, {"sin": math.sin, "cos": math.cos, "__builtins__": {}})


def tree_to_source(node) -> str:
    """Round-trippable text form of a parse tree."""
    return _codegen(node)
