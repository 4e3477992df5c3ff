from __future__ import annotations

import math

import pytest
from _strategies import circuits
from hypothesis import given, settings

from qbk.benchmarks import FAMILIES, ghz_circuit, make_instance
from qbk.circuit import CircuitBuilder, QubitId
from qbk.qasm import (
    AngleExpressionError,
    ArityError,
    QasmError,
    QasmSyntaxError,
    RegisterIndexError,
    UndeclaredRegisterError,
    UnsupportedGateError,
    emit_qasm,
    parse_qasm,
)

HEADER = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[2];\ncreg c[2];\n"


def test_basic_document():
    c = parse_qasm("OPENQASM 2.0; qreg q[2]; creg c[2]; h q[0]; cx q[0],q[1]; measure q[0]->c[0];")
    assert [i.name for i in c.instructions] == ["h", "cx", "measure"]
    assert c.num_qubits == 2 and c.num_clbits == 2


@pytest.mark.parametrize(
    "expr, value",
    [
        ("pi/2", math.pi / 2),
        ("3*pi/4", 3 * math.pi / 4),
        ("-pi", -math.pi),
        ("0.25", 0.25),
        ("1e-3", 1e-3),
        ("-(pi/4 + 0.5)*2", -(math.pi / 4 + 0.5) * 2),
        ("+pi", math.pi),
    ],
)
def test_angle_expressions(expr, value):
    c = parse_qasm(HEADER + f"rz({expr}) q[0];")
    assert c.instructions[0].params[0] == pytest.approx(value, abs=1e-15)


def test_register_broadcast_and_measure_forms():
    c = parse_qasm(HEADER + "h q;\ncx q[0],q[1];\nmeasure q -> c;\n")
    names = [i.name for i in c.instructions]
    assert names == ["h", "h", "cx", "measure", "measure"]
    assert [i.clbit.index for i in c.instructions if i.name == "measure"] == [0, 1]


def test_bare_barrier_spans_all_qubits():
    c = parse_qasm(HEADER + "barrier;\nbarrier q[1];\n")
    assert c.instructions[0].qubits == (QubitId("q", 0), QubitId("q", 1))
    assert c.instructions[1].qubits == (QubitId("q", 1),)


def test_comments_and_reset():
    c = parse_qasm(HEADER + "// prepare\nreset q[0]; // inline\nx q[1];\n")
    assert [i.name for i in c.instructions] == ["reset", "x"]


MALFORMED = [
    ("", QasmSyntaxError),
    ("qreg q[1];", QasmSyntaxError),
    ("OPENQASM 3.0; qreg q[1];", QasmSyntaxError),
    ("OPENQASM 2.0; include \"other.inc\";", QasmSyntaxError),
    ("OPENQASM 2.0; qreg q[1]; h q[0]", QasmSyntaxError),
    ("OPENQASM 2.0; qreg q[1]; qreg q[2];", QasmSyntaxError),
    ("OPENQASM 2.0; qreg q[1]; gate foo a { h a; }", QasmSyntaxError),
    ("OPENQASM 2.0; qreg q[1]; creg c[1]; if(c==1) x q[0];", QasmSyntaxError),
    ("OPENQASM 2.0; qreg q[0];", QasmSyntaxError),
    ("OPENQASM 2.0; qreg q[1]; h r[0];", UndeclaredRegisterError),
    ("OPENQASM 2.0; qreg q[1]; measure q[0] -> c[0];", UndeclaredRegisterError),
    ("OPENQASM 2.0; qreg q[1]; h q[1];", RegisterIndexError),
    ("OPENQASM 2.0; qreg q[3]; ccx q[0],q[1],q[2];", UnsupportedGateError),
    ("OPENQASM 2.0; qreg q[2]; u3(0,0,0) q[0];", UnsupportedGateError),
    ("OPENQASM 2.0; qreg q[2]; cx q[0];", ArityError),
    ("OPENQASM 2.0; qreg q[2]; h q[0],q[1];", ArityError),
    ("OPENQASM 2.0; qreg q[2]; rz q[0];", ArityError),
    ("OPENQASM 2.0; qreg q[2]; h(0.5) q[0];", ArityError),
    ("OPENQASM 2.0; qreg q[2]; cx q[0],q[0];", ArityError),
    ("OPENQASM 2.0; qreg q[2]; creg c[1]; measure q -> c;", ArityError),
    ("OPENQASM 2.0; qreg q[2]; rz(pi/) q[0];", AngleExpressionError),
    ("OPENQASM 2.0; qreg q[2]; rz(theta) q[0];", AngleExpressionError),
    ("OPENQASM 2.0; qreg q[2]; rz(pi/0) q[0];", AngleExpressionError),
    ("OPENQASM 2.0; qreg q[2]; rz((pi) q[0];", AngleExpressionError),
]


@pytest.mark.parametrize("text, error", MALFORMED)
def test_malformed_corpus(text, error):
    with pytest.raises(error) as info:
        parse_qasm(text)
    assert type(info.value) is error
    assert isinstance(info.value, QasmError)


def test_error_location():
    with pytest.raises(UnsupportedGateError) as info:
        parse_qasm("OPENQASM 2.0;\nqreg q[3];\n  ccx q[0],q[1],q[2];\n")
    assert (info.value.line, info.value.column) == (3, 3)


def test_every_error_class_covered():
    classes = {err for _, err in MALFORMED}
    assert classes == {
        QasmSyntaxError,
        UndeclaredRegisterError,
        RegisterIndexError,
        UnsupportedGateError,
        ArityError,
        AngleExpressionError,
    }


def test_emit_ghz3():
    text = emit_qasm(ghz_circuit(3))
    body = [line for line in text.splitlines() if line.startswith(("h ", "cx "))]
    assert body == ["h q[0];", "cx q[0],q[1];", "cx q[1],q[2];"]


def test_emit_empty():
    text = emit_qasm(CircuitBuilder(1).build())
    assert text == 'OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[1];\n'


@pytest.mark.parametrize("family", FAMILIES)
@pytest.mark.parametrize("size", [2, 3, 4, 5, 6])
def test_generator_roundtrip(family, size):
    for circuit in make_instance(family, size).circuits:
        back = parse_qasm(emit_qasm(circuit))
        assert back.approx_equal(circuit, atol=1e-10)
        assert emit_qasm(back) == emit_qasm(circuit)


@settings(max_examples=200, deadline=None)
@given(circuits())
def test_random_roundtrip(c):
    back = parse_qasm(emit_qasm(c))
    assert back.approx_equal(c, atol=1e-10)
