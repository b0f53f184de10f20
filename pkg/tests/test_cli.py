import json
import math
import subprocess
import sys

import pytest
from hypothesis import given
from hypothesis import strategies as st

from colombeau.cli import run
from colombeau.literals import format_openset, parse_literal, parse_openset
from colombeau.opensets import OpenSet1D


def test_dist_example():
    code, out = run(["dist", "--sharp", "eps", "0"])
    assert code == 0 and out.strip() == "distance: 0.367879441"


def test_fr_example():
    code, out = run(["fr", "--f", "sin(x)", "--U", "(-10,10)", "--x", "0", "--h", "eps"])
    assert code == 0
    first = out.splitlines()[0]
    assert first.startswith("r: 1 - (1/6)*eps^2 + (1/120)*eps^4 - (1/5040)*eps^6")
    assert first.endswith("+ O(eps^40)")
    assert "verified: True" in out


def test_json_envelope():
    code, out = run(["valuation", "5*eps^(-2) + eps", "--format", "json", "--Q", "30", "--seed", "4"])
    doc = json.loads(out)
    assert code == 0
    assert set(doc) == {"command", "config", "inputs", "result", "diagnostics"}
    assert doc["config"]["Q"] == "30" and doc["config"]["seed"] == 4
    assert doc["result"]["valuation"] == "-2"


def test_conv_ex_demo_table():
    code, out = run(["demo", "conv-ex", "--kmax", "100", "--format", "json"])
    rows = json.loads(out)["result"]["rows"]
    assert code == 0 and len(rows) == 100
    for r in rows:
        assert r["d_omega"] == 1 / r["k"]
        assert abs(r["d_s_u"] - math.e) <= 1e-12


@pytest.mark.parametrize("name", ["conv-ex", "discreteness", "sphere", "ball-convert", "probe-demo"])
def test_demo_byte_stable(name):
    a = run(["demo", name, "--seed", "11", "--format", "csv"])
    b = run(["demo", name, "--seed", "11", "--format", "csv"])
    assert a == b and a[0] == 0


MATRIX = [
    (["dist", "--omega", "3 + eps", "3 + eps^2"], 0),
    (["eval", "x^2", "--x", "3 + eps"], 0),
    (["abs", "-5"], 0),
    (["order", "1 || -1", "-1 || 1"], 0),
    (["invert", "2*eps"], 0),
    (["decompose", "3 + 2*eps^(1/2)"], 0),
    (["thicken", "--U", "(0,1)", "--x", "1/4", "--h", "1/2"], 0),
    (["probe", "x/eps"], 0),
    (["invert", "3 +"], 2),
    (["eval", "sin(x", "--x", "0"], 2),
    (["thicken", "--U", "(1,0)", "--x", "0", "--h", "0"], 2),
    (["nonsense"], 2),
    (["dist"], 2),
    (["invert", "1 || 0"], 3),
    (["decompose", "eps^(-1)"], 3),
    (["decompose", "3 + eps || 4 + eps"], 3),
    (["fr", "--f", "log(x)", "--U", "(0,inf)", "--x", "1 + eps", "--h", "-2"], 3),
    (["order", "O(eps^40)", "0"], 4),
    (["valuation", "O(eps^3)"], 4),
    (["dist", "O(eps^2)", "0"], 4),
]


@pytest.mark.parametrize("argv,code", MATRIX)
def test_exit_codes(argv, code):
    assert run(argv)[0] == code


def test_console_entry_point():
    p = subprocess.run([sys.executable, "-m", "colombeau", "abs", "-3*eps + eps^2"], capture_output=True, text=True)
    assert p.returncode == 0 and p.stdout.strip() == "abs: 3*eps - eps^2"
    p = subprocess.run([sys.executable, "-m", "colombeau", "invert", "0"], capture_output=True, text=True)
    assert p.returncode == 3 and "NotInvertible" in p.stderr


def test_parse_literal_examples():
    x = parse_literal("gennum", "3 + 2*eps^(1/2) || 3 + eps")
    assert x.k == 2
    from colombeau.gennum import standard_part

    assert standard_part(x) == 3
    assert parse_literal("expr", "x/eps") is not None
    assert parse_literal("gennum", "eps^(-1) + O(eps^(40))").tail == 40


endpoints = st.fractions(-20, 20, max_denominator=6)


@given(st.lists(endpoints, min_size=2, max_size=6, unique=True), st.booleans(), st.booleans())
def test_openset_round_trip(points, left_inf, right_inf):
    points = sorted(points)
    if len(points) % 2:
        points = points[:-1]
    ivs = [(points[i], points[i + 1]) for i in range(0, len(points), 2)]
    if left_inf:
        ivs[0] = (-math.inf, ivs[0][1])
    if right_inf:
        ivs[-1] = (ivs[-1][0], math.inf)
    u = OpenSet1D(ivs)
    assert parse_openset(format_openset(u)).intervals == u.intervals
