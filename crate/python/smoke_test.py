"""Smoke test for the pyqaseries extension module.

Build and install first, e.g.

    pip install maturin
    maturin build --release -m crates/python/Cargo.toml -o dist
    pip install dist/pyqaseries-*.whl
    python python/smoke_test.py
"""

import math
import os
import sys
import tempfile

import pyqaseries as q


def check(name, got, want):
    if got != want:
        print(f"FAIL {name}: got {got!r}, expected {want!r}")
        sys.exit(1)
    print(f"ok   {name}")


check("primes", q.primes_upto(30), [2, 3, 5, 7, 11, 13, 17, 19, 23, 29])
check("forms e=14", q.enumerate_forms(14), [1, 3, 5, 9, 11, 13])
check("counts", [q.count_alternatives(e) for e in (4, 8, 12, 14, 16, 32)], [2, 6, 6, 20, 70, 12870])
check("huge count", q.count_alternatives(256), math.comb(128, 64))

alts = q.alternatives(4)
check("e=4 alternatives", [(a.id, a.signs) for a in alts], [(1, "+-"), (2, "-+")])
x = q.canonical(6)
check("canonical", (x.signs, x.id), ("-+", 2))
check("negate", x.negate(), q.Alternative(6, "+-"))
check("by id", q.Alternative(6, 1), x.negate())
check("sign_of", (x.sign_of(1), x.sign_of(5), x.sign_of(3)), (-1, 1, None))

check("golden e=4", q.partial_sums(q.canonical(4), 9), [3, -2, 5, 16, 3, -14, 5, 28, -1])
check("zeros e=6", q.find_zeros(x, terms=600), [(78, 409), (84, 443), (528, 3821)])
check("first crossing", q.crossings(q.canonical(4), terms=200)[-1][0], 195)
check("census", q.census(4, 100), {1: 11, 3: 13})
check("relations", q.table2_relations(q.canonical(4), [4, 12]), [(4, 7, 11, 5), (12, -37, -41, -7)])

rep = q.scan(x, terms=600)
check("scan report", (rep["terms"], rep["series"]["signs"], len(rep["zeros"])), (600, "-+", 3))

composed = q.infscan(q.canonical(4), terms=392, lengths=[196])
check("infscan boundaries", composed["boundaries"], [1, 197])

verdict = q.classify(6, prime_bound=10_000)
check("classify", verdict["aggregate"], "all_alternatives_zero")
cands = q.candidates(4, 12, prime_bound=10_000)
check("candidates", [m["modulus"] for m in cands["members"]], [4, 8, 10])
check("identities", [r["squares_ok"] and r["base_sum_ok"] for r in q.identities(5)], [True] * 4)

with tempfile.TemporaryDirectory() as d:
    path = os.path.join(d, "cp.json")
    s = q.Scan(x)
    s.run(terms=50)
    s.save(path)
    t = q.Scan.resume(path)
    t.run(terms=100)
    check("resume", t.zeros, [(78, 409), (84, 443)])

try:
    q.Alternative(6, "--")
except ValueError as e:
    print(f"ok   rejects unbalanced ({e})")
else:
    print("FAIL unbalanced alternative accepted")
    sys.exit(1)

print("all smoke checks passed")
