"""
Almost-positive maps and Auerbach systems
=========================================

A unital map with operator norm close to one is close to an honest
positive map, with an exact distance bound. The correction is built from
Jordan decompositions of the rows, and the bound is tight enough to be
checked as an identity.
"""

from fractions import Fraction

from aoulab import Matrix, UnitalMap, auerbach_basis, linf, operator_norm, pert, perturb

half = Fraction(1, 2)

# a symmetric unital map that dips slightly negative: norm 2
T = UnitalMap(
    linf(2),
    linf(2),
    Matrix.from_rows([(Fraction(3, 2), -half), (-half, Fraction(3, 2))]),
)
print("||T|| =", operator_norm(T))

S = pert(T)
print("pert(T) rows:", S.matrix.data)
diff = Matrix.from_rows(
    [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(T.matrix.data, S.matrix.data)]
)
print("||T - S|| =", operator_norm(diff, T.source, T.target), "<= ||T|| - 1 =", operator_norm(T) - 1)

# for a general polyhedral target the bound picks up a dimension factor
S2, bound = perturb(T)
print("perturb bound dim * (||T|| - 1) =", bound)

# Auerbach: a basis of unit vectors whose dual functionals are also unit
basis, duals = auerbach_basis(linf(3))
print("\nAuerbach basis:", basis)
print("dual system:   ", duals)
