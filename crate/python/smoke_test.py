"""Smoke test for the e8lie_py extension module.

Build and install first:
    pip install maturin
    maturin build --release -m crates/e8lie-py/Cargo.toml -o dist
    pip install dist/e8lie_py-*.whl
"""

import json
import pathlib
import sys
from fractions import Fraction as F

import e8lie_py

ROOT = pathlib.Path(__file__).resolve().parent.parent
SCHEMA = ROOT / "crates" / "e8lie" / "schema" / "verification-report.v1.json"


def check(cond, msg):
    if not cond:
        print("FAIL", msg)
        sys.exit(1)
    print("ok  ", msg)


def main():
    t = e8lie_py.Table()
    check(t.convention.startswith("extraspecial"), f"convention {t.convention}")
    anchors = t.check_anchors()
    check(all(exp == got for _, exp, got in anchors), f"{len(anchors)} anchors reproduced")
    check(t.n("10000000", "01000000") == 0, "N of non-adjacent simple roots is 0")
    check(abs(t.n("10000000", "00100000")) == 1, "N of adjacent simple roots is +-1")
    check(t.n("10000000", "00100000") == -t.n("00100000", "10000000"), "antisymmetry")

    t2 = e8lie_py.Table.import_text(t.export())
    check(t2.export() == t.export(), "export/import round trip")
    try:
        e8lie_py.Table.import_text(t.export().replace("E8 v1", "E8 v9", 1))
        check(False, "corrupted table rejected")
    except ValueError:
        check(True, "corrupted table rejected")

    o = t.orbit("a5a1")
    check(o.dim_centralizer == 46, "dim g_e = 46")
    a, b, s, ep, lam, dim_ab = o.lambda_result()
    check(F(a) == F(189, 2) and F(b) == F(-896, 3), f"A = {a}, B = {b}")
    check(F(lam) == F(-1, 6), f"lambda = {lam}")
    check(F(o.darboux_sum(3)) == F(s), "A+B independent of Darboux basis")

    lr = [F(x) for x in e8lie_py.lambda_plus_rho("a5a1")]
    check(len(lr) == 8, "Lambda + rho has 8 coordinates")
    check(F(e8lie_py.norm_difference("a5a1")) == F(-5, 3), "norm difference -5/3")
    is_unit, exps, _ = e8lie_py.r_unit(lam)
    check(is_unit and exps == [-1, -1, 0], "lambda is an R-unit")
    check(all(e8lie_py.nonzero_mod_p(lam, p) for p in (7, 11, 13, 97)), "lambda nonzero mod good primes")
    try:
        e8lie_py.nonzero_mod_p(lam, 5)
        check(False, "bad prime rejected")
    except ValueError:
        check(True, "bad prime rejected")

    report = json.loads(t.verify("a5a1"))
    check(report["totals"]["failed"] == 0, f"a5a1 report: {report['totals']}")
    try:
        import jsonschema
    except ImportError:
        print("skip jsonschema not installed")
    else:
        jsonschema.validate(report, json.loads(SCHEMA.read_text()))
        jsonschema.validate(json.loads(t.verify("d5a1a2")), json.loads(SCHEMA.read_text()))
        check(True, "reports conform to schema")
    print("all smoke checks passed")


if __name__ == "__main__":
    main()
