"""OpenQASM 2.0 subset reader and writer.

Accepted statements: the ``OPENQASM 2.0;`` header, ``include "qelib1.inc";``
(ignored), ``qreg``/``creg`` declarations, the gates in
:data:`qbk.circuit.GATES`, ``measure``, ``reset``, ``barrier`` and ``//``
comments. Angle arguments are arithmetic over numeric literals and ``pi``.

Every rejection raises a subclass of :class:`QasmError` carrying the line and
column of the offending token.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .circuit import GATES, Circuit, ClbitId, Instruction, QubitId, Register

__all__ = [
    "AngleExpressionError",
    "ArityError",
    "QasmError",
    "QasmSyntaxError",
    "RegisterIndexError",
    "UndeclaredRegisterError",
    "UnsupportedGateError",
    "emit_qasm",
    "parse_qasm",
]


class QasmError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        super().__init__(f"{line}:{column}: {message}")


class QasmSyntaxError(QasmError):
    pass


class UndeclaredRegisterError(QasmError):
    pass


class RegisterIndexError(QasmError):
    pass


class UnsupportedGateError(QasmError):
    pass


class ArityError(QasmError):
    pass


class AngleExpressionError(QasmError):
    pass


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<newline>\n)
  | (?P<comment>//[^\n]*)
  | (?P<real>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][-+]?\d+)?)
  | (?P<id>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<string>"[^"\n]*")
  | (?P<arrow>->)
  | (?P<sym>[;,\[\]()+\-*/^])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str  # real, id, string, sym, eof
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise QasmSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "newline":
            line, line_start = line + 1, m.end()
        elif kind not in ("ws", "comment"):
            toks.append(_Tok("sym" if kind == "arrow" else kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.pos = 0
        self.qregs: dict[str, int] = {}
        self.cregs: dict[str, int] = {}
        self.qreg_order: list[Register] = []
        self.creg_order: list[Register] = []
        self.instructions: list[Instruction] = []

    # token helpers
    def peek(self) -> _Tok:
        return self.toks[self.pos]

    def next(self) -> _Tok:
        tok = self.toks[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, text: str) -> _Tok:
        tok = self.next()
        if tok.text != text or tok.kind in ("string", "eof"):
            shown = tok.text or "end of input"
            raise QasmSyntaxError(f"expected {text!r}, found {shown!r}", tok.line, tok.col)
        return tok

    def expect_kind(self, kind: str, what: str) -> _Tok:
        tok = self.next()
        if tok.kind != kind:
            shown = tok.text or "end of input"
            raise QasmSyntaxError(f"expected {what}, found {shown!r}", tok.line, tok.col)
        return tok

    def expect_int(self) -> int:
        tok = self.expect_kind("real", "an integer")
        if not tok.text.isdigit():
            raise QasmSyntaxError(f"expected an integer, found {tok.text!r}", tok.line, tok.col)
        return int(tok.text)

    # grammar
    def parse(self) -> Circuit:
        head = self.peek()
        if head.text != "OPENQASM":
            raise QasmSyntaxError("missing 'OPENQASM 2.0;' header", head.line, head.col)
        self.next()
        ver = self.expect_kind("real", "a version number")
        if ver.text != "2.0":
            raise QasmSyntaxError(f"unsupported OpenQASM version {ver.text}", ver.line, ver.col)
        self.expect(";")
        while self.peek().kind != "eof":
            self.statement()
        return Circuit(tuple(self.qreg_order), tuple(self.creg_order), tuple(self.instructions))

    def statement(self) -> None:
        tok = self.next()
        if tok.kind != "id":
            raise QasmSyntaxError(f"unexpected {tok.text!r}", tok.line, tok.col)
        word = tok.text
        if word == "include":
            path = self.expect_kind("string", "a file name")
            if path.text != '"qelib1.inc"':
                raise QasmSyntaxError(f"only qelib1.inc may be included, got {path.text}", path.line, path.col)
            self.expect(";")
        elif word in ("qreg", "creg"):
            self.declaration(word)
        elif word == "measure":
            self.measure(tok)
        elif word == "reset":
            for q in self.qubit_arg():
                self.instructions.append(Instruction("reset", (q,)))
            self.expect(";")
        elif word == "barrier":
            self.barrier()
        elif word in ("gate", "opaque", "if", "OPENQASM"):
            raise QasmSyntaxError(f"unsupported statement {word!r}", tok.line, tok.col)
        else:
            self.gate(tok)

    def declaration(self, kind: str) -> None:
        name = self.expect_kind("id", "a register name")
        self.expect("[")
        size = self.expect_int()
        self.expect("]")
        self.expect(";")
        if name.text in self.qregs or name.text in self.cregs:
            raise QasmSyntaxError(f"register {name.text!r} declared twice", name.line, name.col)
        if size < 1:
            raise QasmSyntaxError("register size must be positive", name.line, name.col)
        if kind == "qreg":
            self.qregs[name.text] = size
            self.qreg_order.append(Register(name.text, size))
        else:
            self.cregs[name.text] = size
            self.creg_order.append(Register(name.text, size))

    def _arg(self, regs: dict[str, int], what: str) -> tuple[str, list[int], _Tok]:
        name = self.expect_kind("id", f"a {what} register")
        if name.text not in regs:
            raise UndeclaredRegisterError(f"undeclared {what} register {name.text!r}", name.line, name.col)
        if self.peek().text == "[":
            self.next()
            idx_tok = self.peek()
            idx = self.expect_int()
            self.expect("]")
            if idx >= regs[name.text]:
                raise RegisterIndexError(
                    f"index {idx} out of range for {name.text}[{regs[name.text]}]", idx_tok.line, idx_tok.col
                )
            return name.text, [idx], name
        return name.text, list(range(regs[name.text])), name

    def qubit_arg(self) -> list[QubitId]:
        reg, idxs, _ = self._arg(self.qregs, "quantum")
        return [QubitId(reg, i) for i in idxs]

    def measure(self, start: _Tok) -> None:
        qs = self.qubit_arg()
        self.expect("->")
        reg, idxs, _ = self._arg(self.cregs, "classical")
        if len(qs) != len(idxs):
            raise ArityError("measure source and target sizes differ", start.line, start.col)
        for q, i in zip(qs, idxs):
            self.instructions.append(Instruction("measure", (q,), clbit=ClbitId(reg, i)))
        self.expect(";")

    def barrier(self) -> None:
        if self.peek().text == ";":
            self.next()
            qs = [QubitId(r.name, i) for r in self.qreg_order for i in range(r.size)]
            if qs:
                self.instructions.append(Instruction("barrier", tuple(qs)))
            return
        qs: list[QubitId] = []
        while True:
            qs.extend(self.qubit_arg())
            if self.peek().text != ",":
                break
            self.next()
        self.expect(";")
        self.instructions.append(Instruction("barrier", tuple(dict.fromkeys(qs))))

    def gate(self, name_tok: _Tok) -> None:
        name = name_tok.text
        if name not in GATES:
            raise UnsupportedGateError(f"unsupported gate {name!r}", name_tok.line, name_tok.col)
        nq, npar = GATES[name]
        params: list[float] = []
        if self.peek().text == "(":
            self.next()
            if self.peek().text != ")":
                params.append(self.expression())
                while self.peek().text == ",":
                    self.next()
                    params.append(self.expression())
            close = self.next()
            if close.text != ")":
                raise AngleExpressionError(f"malformed angle list at {close.text or 'end of input'!r}", close.line, close.col)
        if len(params) != npar:
            raise ArityError(f"{name} takes {npar} parameter(s), got {len(params)}", name_tok.line, name_tok.col)
        args: list[list[QubitId]] = [self.qubit_arg()]
        while self.peek().text == ",":
            self.next()
            args.append(self.qubit_arg())
        self.expect(";")
        if len(args) != nq:
            raise ArityError(f"{name} acts on {nq} qubit(s), got {len(args)}", name_tok.line, name_tok.col)
        widths = {len(a) for a in args if len(a) > 1}
        if len(widths) > 1:
            raise ArityError(f"{name}: register arguments of different sizes", name_tok.line, name_tok.col)
        width = widths.pop() if widths else 1
        for k in range(width):
            qubits = tuple(a[k] if len(a) > 1 else a[0] for a in args)
            if len(set(qubits)) != len(qubits):
                raise ArityError(f"{name}: repeated qubit argument", name_tok.line, name_tok.col)
            self.instructions.append(Instruction(name, qubits, tuple(params)))

    # angle expressions: sums/products of numeric literals and pi
    def expression(self) -> float:
        value = self.term()
        while self.peek().text in ("+", "-"):
            op = self.next().text
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> float:
        value = self.unary()
        while self.peek().text in ("*", "/"):
            op = self.next()
            rhs = self.unary()
            if op.text == "/":
                if rhs == 0:
                    raise AngleExpressionError("division by zero", op.line, op.col)
                value /= rhs
            else:
                value *= rhs
        return value

    def unary(self) -> float:
        if self.peek().text in ("+", "-"):
            sign = -1.0 if self.next().text == "-" else 1.0
            return sign * self.unary()
        return self.atom()

    def atom(self) -> float:
        tok = self.next()
        if tok.kind == "real":
            return float(tok.text)
        if tok.kind == "id" and tok.text == "pi":
            return math.pi
        if tok.text == "(":
            value = self.expression()
            close = self.next()
            if close.text != ")":
                raise AngleExpressionError("unbalanced parenthesis in angle", close.line, close.col)
            return value
        shown = tok.text or "end of input"
        raise AngleExpressionError(f"malformed angle expression at {shown!r}", tok.line, tok.col)


def parse_qasm(text: str) -> Circuit:
    """Parse an OpenQASM 2.0 document into a :class:`Circuit`."""
    return _Parser(text).parse()


def _fmt_angle(x: float) -> str:
    return format(x, ".12g")


def emit_qasm(circuit: Circuit) -> str:
    """Serialize ``circuit``; angles are written with 12 significant digits."""
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";']
    lines += [f"qreg {r.name}[{r.size}];" for r in circuit.qregs]
    lines += [f"creg {r.name}[{r.size}];" for r in circuit.cregs]
    for inst in circuit.instructions:
        args = ",".join(str(q) for q in inst.qubits)
        if inst.name == "measure":
            lines.append(f"measure {args} -> {inst.clbit};")
        elif inst.params:
            lines.append(f"{inst.name}({','.join(_fmt_angle(p) for p in inst.params)}) {args};")
        else:
            lines.append(f"{inst.name} {args};")
    return "\n".join(lines) + "\n"
