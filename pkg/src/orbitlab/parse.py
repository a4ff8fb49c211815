"""Parsing and serialization of the JSON input documents.

Expressions use ``+ - * / ^``, integer or decimal literals, parentheses, and
the variables allowed by context (``x1..xn`` for maps, ``n`` for recurrence
coefficients, ``x`` for ODE coefficients).  Exponents must be integer
constants.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .dynamics import INF, Extended, RationalSelfMap, format_extended
from .errors import ParseError
from .exact import as_rational, format_rational
from .holonomic import DFiniteODE, PRecurrence, minimal_shift
from .multgroup import MultSubgroup, build_group
from .poly import MultiPoly, RatFunc

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d*)?|\.\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


@dataclass
class _Tok:
    kind: str  # num, name, op, end
    text: str
    col: int


def _tokenize(text: str, where: Optional[str]) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group(1):
            toks.append(_Tok("num", m.group(1), m.start(1) + 1))
        elif m.group(2):
            toks.append(_Tok("name", m.group(2), m.start(2) + 1))
        elif m.group(3):
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError("SyntaxError", "unexpected character", 1, m.start(3) + 1, ch, where)
            toks.append(_Tok("op", ch, m.start(3) + 1))
        pos = m.end()
    toks.append(_Tok("end", "", len(text) + 1))
    return toks


class _Parser:
    def __init__(self, text: str, names: Sequence[str], where: Optional[str]):
        self.text = text
        self.names = {name: i for i, name in enumerate(names)}
        self.nvars = len(names)
        self.where = where
        self.toks = _tokenize(text, where)
        self.i = 0

    def error(self, kind, message, tok=None):
        tok = tok or self.peek()
        raise ParseError(kind, message, 1, tok.col, tok.text or "<end>", self.where)

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def accept(self, op) -> bool:
        t = self.peek()
        if t.kind == "op" and t.text == op:
            self.i += 1
            return True
        return False

    def parse(self) -> RatFunc:
        if self.peek().kind == "end":
            self.error("SyntaxError", "empty expression")
        out = self.expr()
        if self.peek().kind != "end":
            self.error("SyntaxError", "unexpected token")
        return out

    def expr(self) -> RatFunc:
        out = self.term()
        while True:
            if self.accept("+"):
                out = out + self.term()
            elif self.accept("-"):
                out = out - self.term()
            else:
                return out

    def term(self) -> RatFunc:
        out = self.unary()
        while True:
            if self.accept("*"):
                out = out * self.unary()
            elif self.peek().kind == "op" and self.peek().text == "/":
                tok = self.take()
                rhs = self.unary()
                if rhs.num.is_zero():
                    self.error("SyntaxError", "division by zero", tok)
                out = out / rhs
            else:
                return out

    def unary(self) -> RatFunc:
        if self.accept("-"):
            return -self.unary()
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self) -> RatFunc:
        base = self.atom()
        if self.peek().kind == "op" and self.peek().text == "^":
            self.take()
            k = self.exponent()
            if k < 0 and base.num.is_zero():
                self.error("SyntaxError", "negative power of zero")
            return base**k
        return base

    def exponent(self) -> int:
        tok = self.peek()
        sign = 1
        while tok.kind == "op" and tok.text in "+-":
            if tok.text == "-":
                sign = -sign
            self.take()
            tok = self.peek()
        if tok.kind == "num":
            self.take()
            if not tok.text.isdigit():
                self.error("NonIntegerExponent", "exponents must be integers", tok)
            return sign * int(tok.text)
        if tok.kind == "op" and tok.text == "(":
            self.take()
            val = self.expr()
            if not self.accept(")"):
                self.error("SyntaxError", "expected ')'")
            if not (val.num.is_constant() and val.den.is_constant()):
                self.error("NonIntegerExponent", "exponents must be constant", tok)
            c = val.num.constant_value() / val.den.constant_value()
            if c.denominator != 1:
                self.error("NonIntegerExponent", "exponents must be integers", tok)
            return sign * int(c)
        self.error("NonIntegerExponent", "exponents must be integer constants", tok)

    def atom(self) -> RatFunc:
        tok = self.take()
        if tok.kind == "num":
            return RatFunc(MultiPoly.constant(Fraction(tok.text), self.nvars))
        if tok.kind == "name":
            if tok.text not in self.names:
                self.error("UnknownVariable", f"allowed variables: {', '.join(self.names)}", tok)
            return RatFunc(MultiPoly.variable(self.names[tok.text], self.nvars))
        if tok.kind == "op" and tok.text == "(":
            out = self.expr()
            if not self.accept(")"):
                self.error("SyntaxError", "expected ')'")
            return out
        self.error("SyntaxError", "expected a number, variable or '('", tok)


def parse_expression(text: str, names: Sequence[str], where: Optional[str] = None) -> RatFunc:
    if not isinstance(text, str):
        text = str(text)
    return _Parser(text, names, where).parse()


def system_names(n: int) -> list[str]:
    return [f"x{i + 1}" for i in range(n)]


def _parse_rational_field(text, where) -> Fraction:
    try:
        return as_rational(text if not isinstance(text, float) else str(text))
    except (ValueError, ZeroDivisionError, TypeError):
        raise ParseError("SyntaxError", "expected a rational literal", 1, 1, str(text), where) from None


def _parse_extended(text, where) -> Extended:
    if isinstance(text, str) and text.strip().lower() in ("inf", "infinity"):
        return INF
    return _parse_rational_field(text, where)


# -- documents ---------------------------------------------------------------------


@dataclass
class System:
    map: RationalSelfMap
    observable: RatFunc
    start: tuple[Fraction, ...]

    @property
    def dim(self) -> int:
        return self.map.dimension


@dataclass
class Document:
    system: Optional[System] = None
    group: Optional[MultSubgroup] = None
    recurrence: Optional[PRecurrence] = None
    ode: Optional[DFiniteODE] = None
    values: Optional[list] = None
    primes: Optional[list[int]] = None
    raw: dict = field(default_factory=dict, repr=False)


def _load_json(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        line_text = text.splitlines()[exc.lineno - 1] if text.splitlines() else ""
        token = line_text[exc.colno - 1: exc.colno + 9] if line_text else ""
        raise ParseError("SyntaxError", exc.msg, exc.lineno, exc.colno, token, "json") from None
    if not isinstance(doc, dict):
        raise ParseError("SyntaxError", "top level must be a JSON object", 1, 1, text[:10], "json")
    return doc


def parse_system(text: str) -> Document:
    """Parse any input document (system, group, recurrence, ODE, values)."""
    doc = _load_json(text)
    out = Document(raw=doc)
    if "map" in doc:
        maps = doc["map"]
        if isinstance(maps, str):
            maps = [maps]
        dim = int(doc.get("dim", len(maps)))
        if dim != len(maps):
            raise ParseError("SyntaxError", f"dim is {dim} but map has {len(maps)} coordinates",
                             1, 1, str(dim), "dim")
        names = system_names(dim)
        coords = tuple(parse_expression(m, names, f"map[{i}]") for i, m in enumerate(maps))
        obs = parse_expression(doc.get("observable", "x1"), names, "observable")
        start = doc.get("start")
        if start is None or len(start) != dim:
            raise ParseError("SyntaxError", f"start must list {dim} coordinates", 1, 1,
                             str(start), "start")
        pt = tuple(_parse_rational_field(s, f"start[{i}]") for i, s in enumerate(start))
        out.system = System(RationalSelfMap(coords), obs, pt)
    gens = doc.get("generators")
    if gens is None and isinstance(doc.get("group"), dict):
        gens = doc["group"].get("generators")
    if gens is not None:
        out.group = build_group([_parse_rational_field(g, f"generators[{i}]") for i, g in enumerate(gens)])
    rec = doc.get("recurrence", doc if "coeffs" in doc else None)
    if rec is not None:
        out.recurrence = _parse_recurrence(rec)
    ode = doc.get("ode", doc if "poly_coeffs" in doc else None)
    if ode is not None:
        polys = []
        for i, s in enumerate(ode["poly_coeffs"]):
            r = parse_expression(s, ["x"], f"poly_coeffs[{i}]")
            if not r.is_polynomial():
                raise ParseError("SyntaxError", "ODE coefficients must be polynomials", 1, 1,
                                 str(s), f"poly_coeffs[{i}]")
            polys.append(r.num.scale(1 / r.den.constant_value()))
        init = [_parse_rational_field(a, f"init[{i}]") for i, a in enumerate(ode.get("init", []))]
        out.ode = DFiniteODE(tuple(polys), tuple(init))
    if "values" in doc:
        out.values = [_parse_extended(v, f"values[{i}]") for i, v in enumerate(doc["values"])]
    if "primes" in doc:
        out.primes = [int(p) for p in doc["primes"]]
    return out


def _parse_recurrence(rec: dict) -> PRecurrence:
    coeffs = tuple(parse_expression(c, ["n"], f"coeffs[{i}]") for i, c in enumerate(rec["coeffs"]))
    if "order" in rec and int(rec["order"]) != len(coeffs) - 1:
        raise ParseError("SyntaxError", "order must equal len(coeffs) - 1", 1, 1,
                         str(rec["order"]), "order")
    init = tuple(_parse_rational_field(a, f"init[{i}]") for i, a in enumerate(rec["init"]))
    shift = int(rec["shift"]) if "shift" in rec else minimal_shift(coeffs)
    return PRecurrence(coeffs, shift, init)


# -- serialization -------------------------------------------------------------------


def serialize_system(system: System, group: Optional[MultSubgroup] = None) -> dict:
    names = system_names(system.dim)
    out = {
        "dim": system.dim,
        "map": [c.to_string(names) for c in system.map.coordinates],
        "observable": system.observable.to_string(names),
        "start": [format_rational(x) for x in system.start],
    }
    if group is not None:
        out["generators"] = [format_rational(g) for g in group.generators]
    return out


def serialize_document(doc: Document) -> str:
    out: dict = {}
    if doc.system is not None:
        out.update(serialize_system(doc.system))
    if doc.group is not None:
        out["generators"] = [format_rational(g) for g in doc.group.generators]
    if doc.recurrence is not None:
        out["recurrence"] = doc.recurrence.to_json()
    if doc.ode is not None:
        out["ode"] = doc.ode.to_json()
    if doc.values is not None:
        out["values"] = [format_extended(v) for v in doc.values]
    if doc.primes is not None:
        out["primes"] = list(doc.primes)
    return json.dumps(out, indent=2)
