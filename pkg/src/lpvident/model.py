"""Model text frontend.

The input is a line-oriented description; `#` starts a comment.  Statements
are `key: value`, separated by newlines or by `;` outside brackets:

    time: continuous            (or discrete)
    states: x1, x2
    inputs: u                   (optional; omitting it means no inputs)
    outputs: y
    params: theta1, theta2
    scheduling: rho             (optional external scheduling signals)
    A: [theta1, theta2*u; 1, 0]
    B: [1; 0]                   (optional, defaults to zero)
    C: [u, 0]
    D: [0]                      (optional, defaults to zero)

Matrix entries are arithmetic over declared names with + - * / ^ (integer
power), parentheses and rational literals.  Matrices may span lines until
the closing bracket.  Missing `states:`/`outputs:` sections are auto-named
x1../y1.. from the A/C row counts, and a missing `params:` section infers
names of the form theta<digits> used in entries; any other undeclared name
is an error.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (DimensionMismatch, LpvIdentError, ModelSyntaxError,
                     NotAffineInParameters, StateInMatrixEntry,
                     UnknownSymbol)
from .indets import Indeterminate, Kind, Role, parameter, signal
from .expr import Expression, expr_text
from .poly import Polynomial, collect

_SECTIONS = ("time", "states", "inputs", "outputs", "params", "scheduling")
_MATRICES = ("A", "B", "C", "D")


@dataclass(frozen=True)
class ParseDiagnostic:
    severity: str  # "error" | "warning"
    code: str
    message: str
    line: int
    col: int

    def render(self) -> str:
        where = f" (line {self.line}, col {self.col})" if self.line else ""
        return f"{self.severity}: {self.message}{where}"


@dataclass
class LpvModel:
    domain: str
    state_names: tuple
    input_names: tuple
    output_names: tuple
    param_names: tuple
    sched_names: tuple
    A: tuple
    B: tuple
    C: tuple
    D: tuple
    warnings: tuple = ()

    @property
    def n(self) -> int:
        return len(self.state_names)

    @property
    def m(self) -> int:
        return len(self.input_names)

    @property
    def p(self) -> int:
        return len(self.output_names)

    @property
    def q(self) -> int:
        return len(self.param_names)

    @property
    def discrete(self) -> bool:
        return self.domain == "discrete"

    def params(self) -> list:
        return [parameter(name, i + 1) for i, name in enumerate(self.param_names)]

    def states(self) -> list:
        return [signal(name, Role.STATE) for name in self.state_names]

    def inputs(self) -> list:
        return [signal(name, Role.INPUT) for name in self.input_names]

    def outputs(self) -> list:
        return [signal(name, Role.OUTPUT) for name in self.output_names]

    def scheduling(self) -> list:
        return [signal(name, Role.SCHEDULING) for name in self.sched_names]


# --- tokenizer ---

_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<comment>#[^\n]*)|(?P<nl>\n)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<int>\d+)"
    r"|(?P<punct>[-+*/^()\[\],;:])")


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list:
    toks = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ModelSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        s = m.group()
        if kind == "nl":
            toks.append(_Tok("nl", s, line, col))
            line += 1
            col = 1
        else:
            if kind not in ("ws", "comment"):
                toks.append(_Tok(kind, s, line, col))
            col += len(s)
        pos = m.end()
    return toks


# --- statement splitting ---

def _split_statements(toks: list) -> list:
    """Group tokens into statements; `;` and newlines split at depth 0."""
    stmts = []
    cur: list = []
    depth = 0
    for t in toks:
        if t.kind == "punct" and t.text == "[":
            depth += 1
        elif t.kind == "punct" and t.text == "]":
            depth -= 1
            if depth < 0:
                raise ModelSyntaxError("unbalanced ']'", t.line, t.col)
        if depth == 0 and (t.kind == "nl" or (t.kind == "punct" and t.text == ";")):
            if cur:
                stmts.append(cur)
                cur = []
            continue
        if t.kind != "nl":
            cur.append(t)
    if depth != 0:
        raise ModelSyntaxError("unbalanced '['", cur[-1].line if cur else 0, 0)
    if cur:
        stmts.append(cur)
    return stmts


# --- entry expression parser ---

class _EntryParser:
    def __init__(self, toks: list, symbols: dict):
        self.toks = toks
        self.i = 0
        self.symbols = symbols

    def _peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def _take(self):
        t = self._peek()
        if t is None:
            last = self.toks[-1] if self.toks else _Tok("", "", 0, 0)
            raise ModelSyntaxError("unexpected end of entry", last.line, last.col)
        self.i += 1
        return t

    def parse(self) -> Expression:
        e = self._expr()
        t = self._peek()
        if t is not None:
            raise ModelSyntaxError(f"unexpected token {t.text!r}", t.line, t.col)
        return e

    def _expr(self) -> Expression:
        e = self._term()
        while (t := self._peek()) and t.kind == "punct" and t.text in "+-":
            self._take()
            rhs = self._term()
            e = e + rhs if t.text == "+" else e - rhs
        return e

    def _term(self) -> Expression:
        e = self._factor()
        while (t := self._peek()) and t.kind == "punct" and t.text in "*/":
            self._take()
            rhs = self._factor()
            if t.text == "*":
                e = e * rhs
            else:
                if rhs.is_zero():
                    raise ModelSyntaxError("division by zero in entry", t.line, t.col)
                e = e / rhs
        return e

    def _factor(self) -> Expression:
        t = self._peek()
        if t and t.kind == "punct" and t.text in "+-":
            self._take()
            e = self._factor()
            return e if t.text == "+" else -e
        return self._power()

    def _power(self) -> Expression:
        e = self._atom()
        t = self._peek()
        if t and t.kind == "punct" and t.text == "^":
            self._take()
            sign = 1
            t2 = self._peek()
            if t2 and t2.kind == "punct" and t2.text in "+-":
                self._take()
                sign = -1 if t2.text == "-" else 1
            t3 = self._take()
            if t3.kind != "int":
                raise ModelSyntaxError("exponent must be an integer literal",
                                       t3.line, t3.col)
            exp = sign * int(t3.text)
            if exp < 0 and e.is_zero():
                raise ModelSyntaxError("zero to a negative power", t3.line, t3.col)
            e = e ** exp
        return e

    def _atom(self) -> Expression:
        t = self._take()
        if t.kind == "int":
            return Expression(Polynomial.const(int(t.text)))
        if t.kind == "name":
            if t.text not in self.symbols:
                raise UnknownSymbol(f"undeclared name {t.text!r}", t.line, t.col)
            return Expression.var(self.symbols[t.text])
        if t.kind == "punct" and t.text == "(":
            e = self._expr()
            t2 = self._take()
            if not (t2.kind == "punct" and t2.text == ")"):
                raise ModelSyntaxError("expected ')'", t2.line, t2.col)
            return e
        raise ModelSyntaxError(f"unexpected token {t.text!r}", t.line, t.col)


def _split_matrix(toks: list):
    """Token span 'A : [ ... ]' -> list of rows of entry token lists."""
    if len(toks) < 2 or not (toks[0].kind == "punct" and toks[0].text == "["):
        t = toks[0] if toks else _Tok("", "", 0, 0)
        raise ModelSyntaxError("expected '[' to open matrix", t.line, t.col)
    last = toks[-1]
    if not (last.kind == "punct" and last.text == "]"):
        raise ModelSyntaxError("expected ']' to close matrix", last.line, last.col)
    inner = toks[1:-1]
    rows: list = [[]]
    cur: list = []
    for t in inner:
        if t.kind == "punct" and t.text == ";":
            rows[-1].append(cur)
            cur = []
            rows.append([])
        elif t.kind == "punct" and t.text == ",":
            rows[-1].append(cur)
            cur = []
        else:
            cur.append(t)
    rows[-1].append(cur)
    return rows


_THETA_RE = re.compile(r"^theta(\d+)$")


def parse_model(text: str) -> LpvModel:
    """Parse and validate; raises on errors, keeps warnings on the model."""
    toks = _tokenize(text)
    stmts = _split_statements(toks)

    sections: dict = {}
    matrices: dict = {}
    for st in stmts:
        head = st[0]
        if head.kind != "name":
            raise ModelSyntaxError(f"expected statement keyword, got {head.text!r}",
                                   head.line, head.col)
        if len(st) < 2 or not (st[1].kind == "punct" and st[1].text == ":"):
            raise ModelSyntaxError("expected ':' after keyword", head.line, head.col)
        key = head.text
        body = st[2:]
        if key in _SECTIONS:
            if key in sections:
                raise ModelSyntaxError(f"duplicate section {key!r}", head.line, head.col)
            sections[key] = (head, body)
        elif key in _MATRICES:
            if key in matrices:
                raise ModelSyntaxError(f"duplicate matrix {key!r}", head.line, head.col)
            matrices[key] = (head, body)
        else:
            raise ModelSyntaxError(f"unknown statement {key!r}", head.line, head.col)

    # time
    if "time" not in sections:
        raise ModelSyntaxError("missing 'time:' statement", 1, 1)
    thead, tbody = sections["time"]
    if len(tbody) != 1 or tbody[0].kind != "name" or tbody[0].text not in ("continuous", "discrete"):
        raise ModelSyntaxError("time must be 'continuous' or 'discrete'",
                               thead.line, thead.col)
    domain = tbody[0].text

    def name_list(key: str) -> list:
        if key not in sections:
            return []
        head, body = sections[key]
        names = []
        expect_name = True
        for t in body:
            if expect_name:
                if t.kind != "name":
                    raise ModelSyntaxError(f"expected name in {key!r} list", t.line, t.col)
                names.append(t.text)
                expect_name = False
            else:
                if not (t.kind == "punct" and t.text == ","):
                    raise ModelSyntaxError(f"expected ',' in {key!r} list", t.line, t.col)
                expect_name = True
        if expect_name:
            raise ModelSyntaxError(f"empty or trailing-comma {key!r} list",
                                   head.line, head.col)
        return names

    if "A" not in matrices:
        raise DimensionMismatch("matrix A is required", 1, 1)
    if "C" not in matrices:
        raise DimensionMismatch("matrix C is required", 1, 1)

    raw = {k: _split_matrix(v[1]) for k, v in matrices.items()}

    state_names = name_list("states") or [f"x{i+1}" for i in range(len(raw["A"]))]
    output_names = name_list("outputs") or [f"y{i+1}" for i in range(len(raw["C"]))]
    input_names = name_list("inputs")
    sched_names = name_list("scheduling")
    param_names = name_list("params")
    if "params" not in sections:
        found = {}
        for rows in raw.values():
            for row in rows:
                for entry in row:
                    for t in entry:
                        m = _THETA_RE.match(t.text) if t.kind == "name" else None
                        if m and t.text not in (state_names + output_names
                                                + input_names + sched_names):
                            found[t.text] = int(m.group(1))
        param_names = sorted(found, key=found.get)

    declared = {}
    for group, names in (("state", state_names), ("input", input_names),
                         ("output", output_names), ("param", param_names),
                         ("scheduling", sched_names)):
        for nm in names:
            if nm in declared:
                raise ModelSyntaxError(
                    f"name {nm!r} declared as both {declared[nm]} and {group}", 1, 1)
            declared[nm] = group

    symbols: dict = {}
    for i, nm in enumerate(param_names):
        symbols[nm] = parameter(nm, i + 1)
    for nm in state_names:
        symbols[nm] = signal(nm, Role.STATE)
    for nm in input_names:
        symbols[nm] = signal(nm, Role.INPUT)
    for nm in output_names:
        symbols[nm] = signal(nm, Role.OUTPUT)
    for nm in sched_names:
        symbols[nm] = signal(nm, Role.SCHEDULING)

    n, m, p = len(state_names), len(input_names), len(output_names)
    shapes = {"A": (n, n), "B": (n, m), "C": (p, n), "D": (p, m)}

    def parse_matrix(key: str) -> tuple:
        rows_exp, cols_exp = shapes[key]
        if key not in raw:
            return tuple(tuple(Expression(Polynomial())
                               for _ in range(cols_exp)) for _ in range(rows_exp))
        head = matrices[key][0]
        rows = raw[key]
        if len(rows) != rows_exp:
            raise DimensionMismatch(
                f"matrix {key} has {len(rows)} rows, expected {rows_exp}",
                head.line, head.col)
        out = []
        for row in rows:
            if len(row) != cols_exp:
                raise DimensionMismatch(
                    f"matrix {key} row has {len(row)} entries, expected {cols_exp}",
                    head.line, head.col)
            out.append(tuple(_EntryParser(entry, symbols).parse() for entry in row))
        return tuple(out)

    A = parse_matrix("A")
    B = parse_matrix("B")
    C = parse_matrix("C")
    D = parse_matrix("D")

    model = LpvModel(domain, tuple(state_names), tuple(input_names),
                     tuple(output_names), tuple(param_names), tuple(sched_names),
                     A, B, C, D)
    diags = validate_model(model)
    errors = [d for d in diags if d.severity == "error"]
    if errors:
        d = errors[0]
        exc = {"state-in-entry": StateInMatrixEntry,
               "not-affine": NotAffineInParameters,
               "dimension": DimensionMismatch}.get(d.code, ModelSyntaxError)
        raise exc(d.message, d.line, d.col)
    model.warnings = tuple(d for d in diags if d.severity == "warning")
    return model


def validate_model(model: LpvModel) -> list:
    """Structural checks; returns diagnostics (errors and warnings)."""
    diags: list = []
    params = set(model.params())
    states = set(model.states())

    def entries():
        for key, mat in (("A", model.A), ("B", model.B), ("C", model.C), ("D", model.D)):
            for i, row in enumerate(mat):
                for j, e in enumerate(row):
                    yield key, i, j, e

    saw_output = False
    for key, i, j, e in entries():
        vars_ = e.indeterminates()
        if vars_ & states:
            diags.append(ParseDiagnostic(
                "error", "state-in-entry",
                f"state appears in {key}[{i+1},{j+1}]; states are not valid "
                f"scheduling premises (substitute measured signals)", 0, 0))
        if e.num.degree_in(params) > 1 or e.den.degree_in(params) > 0:
            diags.append(ParseDiagnostic(
                "error", "not-affine",
                f"entry {key}[{i+1},{j+1}] is not affine in the parameters", 0, 0))
        if any(v.kind is Kind.SIGNAL and v.role is Role.OUTPUT for v in vars_):
            saw_output = True
        if any(v.kind is Kind.SIGNAL and v.order != 0 for v in vars_):
            diags.append(ParseDiagnostic(
                "error", "dimension",
                f"entry {key}[{i+1},{j+1}] uses a shifted or differentiated signal",
                0, 0))
    if saw_output:
        diags.append(ParseDiagnostic(
            "warning", "output-premise",
            "outputs appear in matrix entries (output-substituted quasi-LPV); "
            "results rely on measured outputs as premise variables", 0, 0))

    if model.p and model.n and _generic_rank_C(model) < min(model.p, model.n):
        diags.append(ParseDiagnostic(
            "warning", "rank-deficient-C",
            "C has generically deficient rank; some outputs carry no "
            "independent state information", 0, 0))
    return diags


def _generic_rank_C(model: LpvModel, trials: int = 3) -> int:
    from .elimination import rank_rational
    rng = random.Random(20210 + model.n)
    best = 0
    vars_ = set()
    for row in model.C:
        for e in row:
            vars_ |= e.indeterminates()
    for _ in range(trials):
        bind = {v: Fraction(rng.randint(1, 97), rng.randint(1, 13)) for v in vars_}
        try:
            rows = [[e.evaluate(bind) for e in row] for row in model.C]
        except LpvIdentError:
            continue
        best = max(best, rank_rational(rows))
        if best >= min(model.p, model.n):
            break
    return best


def affine_decompose(matrix: tuple, params: list) -> tuple:
    """Split X(rho, theta) = X0 + sum_j theta_j * Xbar_j.

    Entries must be affine in the parameters jointly; denominators must be
    parameter-free (both enforced by validation).
    """
    pset = set(params)
    zero = Expression(Polynomial())
    x0 = []
    bars = [[] for _ in params]
    for row in matrix:
        x0.append([])
        for b in bars:
            b.append([])
        for e in row:
            if e.den.degree_in(pset) > 0 or e.num.degree_in(pset) > 1:
                raise NotAffineInParameters("entry is not affine in the parameters")
            grouped = collect(e.num, pset)
            x0[-1].append(Expression(grouped.get((), Polynomial()), e.den))
            for j, th in enumerate(params):
                coeff = grouped.get(((th, 1),), Polynomial())
                bars[j][-1].append(Expression(coeff, e.den) if not coeff.is_zero()
                                   else zero)
    freeze = lambda mat: tuple(tuple(r) for r in mat)
    return freeze(x0), [freeze(b) for b in bars]


def print_model(model: LpvModel) -> str:
    """Canonical text form; parse_model(print_model(m)) reproduces m."""
    lines = [f"time: {model.domain}"]
    lines.append("states: " + ", ".join(model.state_names))
    if model.input_names:
        lines.append("inputs: " + ", ".join(model.input_names))
    lines.append("outputs: " + ", ".join(model.output_names))
    lines.append("params: " + ", ".join(model.param_names))
    if model.sched_names:
        lines.append("scheduling: " + ", ".join(model.sched_names))

    def mat_text(mat: tuple) -> str:
        return "[" + "; ".join(", ".join(expr_text(e) for e in row)
                               for row in mat) + "]"

    lines.append("A: " + mat_text(model.A))
    if model.m:
        lines.append("B: " + mat_text(model.B))
    lines.append("C: " + mat_text(model.C))
    if model.m:
        lines.append("D: " + mat_text(model.D))
    return "\n".join(lines) + "\n"
