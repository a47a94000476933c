"""Executable verification of the bracket/Hessian identities.

Every check instantiates concrete polynomial operators, computes the exact
defect of one identity and wraps it in a Residual; holds is true exactly
when the canonical form of the defect is zero.  The randomized suites draw
inputs from a seeded regime (default: 100 trials, one or two base and fiber
variables, jet order and degree at most 2, coefficients in -2..2) and record
the master seed plus full replay fixtures for any failure.  Trial k of a
suite with master seed s uses seed s * 1_000_003 + k.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence, Union

from .calculus import (
    DerivativeCache,
    ad_apply,
    evolutionary_apply,
    hessian_form,
    hessian_operator,
    jacobi_bracket,
    jacobi_bracket_coord,
    linearize,
    random_vector_operator,
)
from .expressions import Bundle, PolyExpr, random_expr
from .multiindex import MultiIndex, binom_product, sub_indices
from .operators import CDiffOperator
from .vectorops import VectorOperator

SUITE_IDENTITIES = (
    "hess-sym",
    "prop2",
    "prop3",
    "jacobi",
    "antihom",
    "commutation-lemma",
    "mu-lemma",
    "bracket-oracle",
)

DEFAULT_COEFF_POOL = (-2, -1, 0, 1, 2)


@dataclass
class Residual:
    """Exact defect of one identity instance.

    value is a VectorOperator (for probe-family checks, one component per
    probe) or a CDiffOperator; holds is true iff the canonical form of
    value is zero; context records the identity name and its inputs.
    """

    value: Union[VectorOperator, CDiffOperator]
    holds: bool
    context: dict = field(default_factory=dict)


def _residual(name: str, value, **context) -> Residual:
    return Residual(value=value, holds=value.is_zero(), context={"identity": name, **context})


def check_hessian_symmetry(f: VectorOperator, g: VectorOperator, h: VectorOperator) -> Residual:
    """The Hessian form is symmetric in its two derivative slots."""
    value = hessian_form(f, g, h) - hessian_form(f, h, g)
    return _residual("hess-sym", value, f=f, g=g, h=h)


def check_linearization_anomaly(
    f: VectorOperator, g: VectorOperator, h: VectorOperator
) -> Residual:
    """Commutator of linearizations minus linearized bracket equals the
    difference of Hessians (applied to a third operator h).

    The left side goes through the operator algebra, the right side through
    the trilinear form, so the two sides cannot share a bug.  The context
    additionally records whether both sides agree when assembled as matrix
    operators and compared canonically.
    """
    lf, lg = linearize(f), linearize(g)
    lhs_op = lf.commutator(lg) - linearize(jacobi_bracket(f, g))
    value = lhs_op.apply(h) - (hessian_form(g, f, h) - hessian_form(f, g, h))
    rhs_op = hessian_operator(g, f) - hessian_operator(f, g)
    return _residual(
        "prop2", value, f=f, g=g, h=h, operator_form_equal=(lhs_op == rhs_op)
    )


def check_bracket_leibniz(f: VectorOperator, g: VectorOperator, h: VectorOperator) -> Residual:
    """Leibniz rule for the bracket against a composed operator, compensated
    by the Hessian of the outer operator."""
    lg = linearize(g)
    value = (
        jacobi_bracket(f, lg.apply(h))
        - linearize(jacobi_bracket(f, g)).apply(h)
        - lg.apply(jacobi_bracket(f, h))
        + hessian_form(f, g, h)
    )
    return _residual("prop3", value, f=f, g=g, h=h)


def check_jacobi_identity(f: VectorOperator, g: VectorOperator, h: VectorOperator) -> Residual:
    """Cyclic sum of nested brackets vanishes."""
    value = (
        jacobi_bracket(f, jacobi_bracket(g, h))
        + jacobi_bracket(g, jacobi_bracket(h, f))
        + jacobi_bracket(h, jacobi_bracket(f, g))
    )
    return _residual("jacobi", value, f=f, g=g, h=h)


def check_evolutionary_antihomomorphism(
    f: VectorOperator, g: VectorOperator, probes: Sequence[PolyExpr]
) -> Residual:
    """Commutator of evolutionary derivations is minus the derivation of the bracket.

    Evaluated on a family of probe expressions; the stacked defects form the
    residual, one component per probe.
    """
    probes = list(probes)
    if not probes:
        raise ValueError("need at least one probe expression")
    bracket = jacobi_bracket(f, g)
    fc, gc, bc = DerivativeCache(f), DerivativeCache(g), DerivativeCache(bracket)
    defects = []
    for e in probes:
        d = (
            evolutionary_apply(f, evolutionary_apply(g, e, gc), fc)
            - evolutionary_apply(g, evolutionary_apply(f, e, fc), gc)
            + evolutionary_apply(bracket, e, bc)
        )
        defects.append(d)
    value = VectorOperator(defects)
    return _residual("antihom", value, f=f, g=g, probes=[str(e) for e in probes])


def check_commutation(zeta, tau, fiber: int, e: PolyExpr) -> Residual:
    """Pushing a jet partial through an iterated total derivative.

    The closed form sums over common sub-indices kappa with multiplicity
    binom_product(tau, kappa); the residual compares it against the direct
    computation on e.
    """
    bundle = e.bundle
    zeta = zeta if isinstance(zeta, MultiIndex) else MultiIndex(zeta)
    tau = tau if isinstance(tau, MultiIndex) else MultiIndex(tau)
    lhs = e.total_derivative_multi(tau).partial(bundle.jet_coord(fiber, zeta))
    rhs = bundle.zero()
    for kappa in sub_indices(tau):
        rem = zeta.checked_sub(kappa)
        if rem is None:
            continue
        part = e.partial(bundle.jet_coord(fiber, rem))
        if part:
            rhs = rhs + part.total_derivative_multi(tau.checked_sub(kappa)).scale(
                binom_product(tau, kappa)
            )
    value = VectorOperator([lhs - rhs])
    return _residual(
        "commutation-lemma", value, zeta=list(zeta), tau=list(tau), fiber=fiber, e=e
    )


def check_multiplier_identity(
    g: VectorOperator, h: VectorOperator, mu: VectorOperator
) -> Residual:
    """Unconditional exchange identity between a multiplier mu, an operator h
    and an argument g:

        linearize({mu,h}) g + ad_h(linearize(mu) g)
        + hessian_form(h, mu, g) + linearize(mu) {g,h}  =  0
    """
    l_mu = linearize(mu)
    value = (
        linearize(jacobi_bracket(mu, h)).apply(g)
        + ad_apply(h, l_mu.apply(g))
        + hessian_form(h, mu, g)
        + l_mu.apply(jacobi_bracket(g, h))
    )
    return _residual("mu-lemma", value, g=g, h=h, mu=mu)


def check_bracket_oracle(f: VectorOperator, g: VectorOperator) -> Residual:
    """The operator-algebra bracket against the coordinate-formula bracket."""
    value = jacobi_bracket(f, g) - jacobi_bracket_coord(f, g)
    return _residual("bracket-oracle", value, f=f, g=g)


# -- randomized suites ---------------------------------------------------------


def trial_seed(master_seed: int, k: int) -> int:
    return master_seed * 1_000_003 + k


def _suite_bundle(rng: random.Random, n_choices, r_choices) -> Bundle:
    n = rng.choice(list(n_choices))
    r = rng.choice(list(r_choices))
    return Bundle(("x", "y")[:n], ("u", "v")[:r])


def run_random_suite(
    identity: str,
    trials: int = 100,
    seed: int = 0,
    n_choices: Sequence[int] = (1, 2),
    r_choices: Sequence[int] = (1, 2),
    max_jet_order: int = 2,
    max_degree: int = 2,
    coeff_pool: Sequence = DEFAULT_COEFF_POOL,
    probe_order: int = 4,
    max_index_order: int = 3,
) -> dict:
    """Run one identity's randomized suite; returns the verification report.

    The report is deterministic for a fixed seed and carries a replay
    fixture (inputs and residual, JSON form) for every failing trial.
    """
    if identity not in SUITE_IDENTITIES:
        raise ValueError(f"unknown identity {identity!r}; pick one of {SUITE_IDENTITIES}")
    failures = []
    for k in range(trials):
        tseed = trial_seed(seed, k)
        rng = random.Random(tseed)
        bundle = _suite_bundle(rng, n_choices, r_choices)

        def rand_op():
            return random_vector_operator(
                bundle,
                rng.randrange(2**32),
                max_jet_order=max_jet_order,
                max_degree=max_degree,
                coeff_pool=list(coeff_pool),
                max_terms=4,
            )

        def rand_expr():
            return random_expr(
                bundle,
                rng.randrange(2**32),
                max_jet_order=max_jet_order,
                max_degree=max_degree,
                coeff_pool=list(coeff_pool),
                max_terms=4,
            )

        if identity == "antihom":
            f, g = rand_op(), rand_op()
            probes = [bundle.coord_var(v) for v in bundle.jet_coordinates_up_to(probe_order)]
            res = check_evolutionary_antihomomorphism(f, g, probes)
            inputs = {"f": f.to_json(), "g": g.to_json(), "probe_order": probe_order}
        elif identity == "commutation-lemma":
            choices = [s for s in _index_choices(bundle.n, max_index_order)]
            zeta, tau = rng.choice(choices), rng.choice(choices)
            fiber = rng.randrange(bundle.r)
            e = rand_expr()
            res = check_commutation(zeta, tau, fiber, e)
            inputs = {
                "zeta": list(zeta),
                "tau": list(tau),
                "fiber": fiber,
                "e": e.to_json(),
                "signature": bundle.to_json(),
            }
        elif identity == "bracket-oracle":
            f, g = rand_op(), rand_op()
            res = check_bracket_oracle(f, g)
            inputs = {"f": f.to_json(), "g": g.to_json()}
        elif identity == "mu-lemma":
            g, h, mu = rand_op(), rand_op(), rand_op()
            res = check_multiplier_identity(g, h, mu)
            inputs = {"g": g.to_json(), "h": h.to_json(), "mu": mu.to_json()}
        else:
            f, g, h = rand_op(), rand_op(), rand_op()
            check = {
                "hess-sym": check_hessian_symmetry,
                "prop2": check_linearization_anomaly,
                "prop3": check_bracket_leibniz,
                "jacobi": check_jacobi_identity,
            }[identity]
            res = check(f, g, h)
            inputs = {"f": f.to_json(), "g": g.to_json(), "h": h.to_json()}

        ok = res.holds and res.context.get("operator_form_equal", True)
        if not ok:
            failures.append(
                {
                    "trial": k,
                    "seed": tseed,
                    "inputs": inputs,
                    "residual": res.value.to_json(),
                }
            )
    return {
        "identity": identity,
        "trials": trials,
        "seed": seed,
        "failures": failures,
        "holds": not failures,
        "regime": {
            "n": list(n_choices),
            "r": list(r_choices),
            "max_jet_order": max_jet_order,
            "max_degree": max_degree,
            "coeff_pool": [str(c) for c in coeff_pool],
        },
    }


def _index_choices(n: int, max_order: int) -> list[MultiIndex]:
    from .expressions import indices_up_to

    return indices_up_to(n, max_order)
