"""The linearization anomaly, end to end on one scalar example.

Take F = u_x^2 and G = u_x + c*x on a one-dimensional bundle.  The Jacobi
bracket {F, G} and the linearizations of F and G are all first-order
operators, but the commutator of the linearizations does not match the
linearization of the bracket: linearization drops free terms and squares
interact.  The gap is exactly a difference of Hessians.
"""

from jetcalc import (
    Bundle,
    VectorOperator,
    hessian_operator,
    jacobi_bracket,
    linearize,
)

bundle = Bundle(base=("x",), fiber=("u",), params=("c",))
p = bundle.jet(0, (1,))
x = bundle.base_var(0)
c = bundle.param("c")

F = VectorOperator([p * p])
G = VectorOperator([p + c * x])
print(f"F = {F}")
print(f"G = {G}")

bracket = jacobi_bracket(F, G)
print(f"\nJacobi bracket {{F,G}} = {bracket}")

lF, lG = linearize(F), linearize(G)
print(f"\nlinearize(F) = {lF}")
print(f"linearize(G) = {lG}")

commutator = lF.commutator(lG)
linearized_bracket = linearize(bracket)
print(f"\n[linearize(F), linearize(G)] = {commutator}")
print(f"linearize({{F,G}})            = {linearized_bracket}")
print(f"anomaly (difference)         = {commutator - linearized_bracket}")

# The anomaly is HessG F - HessF G; here G is affine, so its Hessian vanishes
# and the whole gap comes from F.
hFG = hessian_operator(F, G)
hGF = hessian_operator(G, F)
print(f"\nHessian of F along G = {hFG}")
print(f"Hessian of G along F = {hGF}")
print(f"HessG F - HessF G    = {hGF - hFG}")

assert commutator - linearized_bracket == hGF - hFG
print("\nthe commutator defect equals the Hessian difference, exactly")
