"""Randomized verification of every identity the engine knows.

Each suite draws seeded random operators (one or two base variables, one or
two fiber variables, jet order and degree at most two) and checks that the
exact residual of the identity is zero.  Failures would carry a full replay
fixture; with a correct engine there are none.
"""

import time

from jetcalc import run_random_suite

DESCRIPTIONS = {
    "hess-sym": "Hessian form is symmetric in its two derivative slots",
    "prop2": "commutator defect of linearizations equals the Hessian difference",
    "prop3": "bracket Leibniz rule, compensated by the Hessian",
    "jacobi": "cyclic sum of nested brackets vanishes",
    "antihom": "evolutionary derivations anti-represent the bracket",
    "commutation-lemma": "jet partials push through total derivatives with binomial weights",
    "mu-lemma": "multiplier exchange identity",
    "bracket-oracle": "operator-algebra bracket equals the coordinate-formula bracket",
}

for identity, blurb in DESCRIPTIONS.items():
    start = time.monotonic()
    report = run_random_suite(identity, trials=100, seed=2024)
    elapsed = time.monotonic() - start
    status = "ok" if report["holds"] else f"{len(report['failures'])} FAILURES"
    print(f"{identity:20s} {status:>4s}  ({report['trials']} trials, {elapsed:5.2f}s)  {blurb}")
