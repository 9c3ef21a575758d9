"""Smoke test for the superqubit_py extension.

Build and install first:
    pip install maturin
    cd crates/py && maturin build --release -o dist && pip install dist/*.whl
"""

import json
import math

import superqubit_py as sq


def close(a, b, tol=1e-12):
    return abs(a - b) <= tol


def main():
    bell = sq.parse_state("(1/sqrt(2))(|00> + |11>)")
    assert bell.n == 2
    assert close(sq.sdet(bell).body, 0.5)
    assert sq.classify(bell) == "AB"

    mixed = sq.State("(1/sqrt(3))(|00> + |11> + i|**>)")
    assert close(sq.sdet(mixed).body, 0.5)

    ghz = sq.parse_state("(1/sqrt(8))(|000> + |**0> + |*0*> + |0**> + |111> + |**1> + |*1*> + |1**>)")
    assert close(sq.superhyperdet(ghz).body, 1 / 64)
    report = json.loads(sq.invariants_json(ghz))
    assert report["class"] == "GHZ"

    w = sq.parse_state("(1/sqrt(6))(|110> + |101> + |011> + |**1> + |*1*> + |1**>)")
    assert sq.classify(w) == "W"
    t111 = json.loads(sq.invariants_json(w))["super"]["T"]["111"]
    assert close(t111[0]["re"], 1 / (2 * math.sqrt(6)))

    soul = sq.parse_state("|00> + g0 g2 |11> + g0 |0*>")
    unit = soul.normalize()
    norm = unit.norm_squared()
    assert norm.approx_eq(sq.Grassmann(1, norm.pairs), 1e-12), norm

    moved = bell.act("Q0", 1)
    assert moved.n == 2

    a = sq.Grassmann.generator(0, 2)
    b = sq.Grassmann.generator(2, 2)
    assert (a * b + b * a).is_zero()
    assert (a * a).is_zero()
    assert (a * b).superstar().superstar() == a * b
    assert close(sq.Grassmann(4.0).sqrt().body, 2.0)

    try:
        sq.parse_state("|00> + |111>")
    except ValueError as err:
        assert "expected 2" in str(err), err
    else:
        raise AssertionError("length mismatch accepted")

    checks = sq.verify_algebra(seed=1, cases=10)
    assert all(passed for _, passed, _ in checks), checks

    rows = sq.sweep_family("bell-soul", 1.0, "-1:1:3")
    assert [round(t, 12) for _, t in rows] == [0.0, 1.0, 0.0]

    print("superqubit_py smoke test passed")


if __name__ == "__main__":
    main()
