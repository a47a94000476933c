"""Symmetry and auxiliary-integral residuals, including the cautionary pair.

An operator H is a symmetry of F (with witness theta) when {F,H} equals the
witness acting on F; an auxiliary integral G splits the bracket {F,G} through
two multipliers lambda and mu.  Both conditions are exact zero tests here.

The second half builds two diagonal constant-coefficient operators with
constant free terms.  Their free-term-stripped parts commute, which is the
usual quick symmetry argument, yet the full bracket is the constant (-1, 1):
the free terms matter, and membership checks must not drop them.
"""

from fractions import Fraction

from jetcalc import (
    AuxClaim,
    Bundle,
    SymmetryClaim,
    VectorOperator,
    aux_residual,
    nonhomogeneous_diagonal_pair,
    symmetry_residual,
)

b = Bundle(("x",), ("u",))
u = b.fiber_var(0)
p = b.jet(0, (1,))
heat = VectorOperator([b.jet(0, (2,))])
translation = VectorOperator([p])
zero = VectorOperator.zero(b)

res = symmetry_residual(SymmetryClaim(heat, translation, zero))
print(f"translation flow vs u_xx: residual {res.value}, holds={res.holds}")

# a genuinely nonlinear membership: {u_xx + u^2, u} = u^2 = l_mu(u) for mu = u^2/2
source = VectorOperator([b.jet(0, (2,)) + u * u])
gen = VectorOperator([u])
mu = VectorOperator([(u * u).scale(Fraction(1, 2))])
res = aux_residual(AuxClaim(source, gen, zero, mu))
print(
    f"aux split for u_xx + u^2: residual {res.value}, holds={res.holds}, "
    f"order(mu)={res.context['order_mu']} < order(f)={res.context['order_f']}"
)

print()
ex = nonhomogeneous_diagonal_pair()
print(f"F = {ex.f}")
print(f"G = {ex.g}")
print(f"bracket of free-term-stripped parts: {ex.linear_part_bracket}")
print(f"bracket of the full operators:       {ex.full_bracket}")
print(f"(coordinate-formula cross-check:     {ex.full_bracket_coord})")
print()
print("the stripped parts commute, but the full pair fails the symmetry test")
