"""Generate Euler-factor fixtures from PARI/GP's hypergeometric motive package.

Run once, outside the package environment, with an interpreter that has
cypari2 installed:

    python tools/gen_fixtures.py > tests/data/fixtures.jsonl

Each output line is one JSON record in the fixture schema (see README).
The ``t`` field is in PARI's normalization; ``tests/data/fixtures.jsonl``
records the map to this package's parameter in the ``convention`` field.
"""

import json
import sys
from fractions import Fraction

import cypari2

pari = cypari2.Pari()

DATA = [
    (["1/3", "2/3"], ["1/4", "3/4"], [2, 3], [7, 11, 13]),
    (["1/3", "2/3"], ["1/4", "3/4"], [5, "1/2", "-3"], [17, 19, 23, 29, 31, 37, 41, 43, 47]),
    (["1/2", "1/2"], ["1/6", "5/6"], [2, 3, 5], [7, 11, 13, 17]),
    (["1/2", "1/2"], ["1/3", "2/3"], [2, 5], [7, 11, 13]),
    (["1/2"], ["0"], [2, 3, 5, 7], [11, 13, 17]),
    (["1/5", "2/5", "3/5", "4/5"], ["1/8", "3/8", "5/8", "7/8"], [2, 3], [7, 11, 13]),
]


def euler_factor(alpha, beta, t, p):
    H = pari(f"hgminit([{','.join(alpha)}],[{','.join(beta)}])")
    ef = pari.hgmeulerfactor(H, pari(str(t)), p)
    return [int(c) for c in pari.Vec(ef)][::-1]


def main(argv):
    data = DATA
    if len(argv) > 1:
        data = json.loads(argv[1])
    version = str(pari.version())
    for alpha, beta, ts, ps in data:
        for t in ts:
            for p in ps:
                coeffs = euler_factor(alpha, beta, t, p)
                rec = {"alpha": alpha, "beta": beta, "t": str(Fraction(t)), "p": p, "coeffs": coeffs,
                       "convention": "inverse", "source": f"PARI/GP {version} hgmeulerfactor"}
                print(json.dumps(rec))


if __name__ == "__main__":
    main(sys.argv)
