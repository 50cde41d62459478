"""Tour of the matrix exponential and logarithm kernels.

Run:  python3 demos/01_matrix_functions.py
"""

import math

import numpy as np

from expnet import check_commuting_product, expm, jordan_block_log, logm, random_matrix
from expnet.matfuncs import BranchSpec

np.set_printoptions(precision=4, suppress=True, linewidth=100)

print("== exponential basics ==")
a = random_matrix(4, seed=1)
print("||expm(0) - I|| =", np.linalg.norm(expm(np.zeros((4, 4))) - np.eye(4)))
print("||expm(a) @ expm(-a) - I|| =", np.linalg.norm(expm(a) @ expm(-a) - np.eye(4)))

# the exponential of any matrix is invertible: det(expm a) = exp(tr a) != 0
det = np.linalg.det(expm(a))
print("det(expm a) =", det, " exp(tr a) =", np.exp(np.trace(a)))

print("\n== logarithm and roundtrips ==")
lg = logm(a)
print("||expm(logm(a)) - a|| / ||a|| =",
      np.linalg.norm(expm(lg) - a) / np.linalg.norm(a))

# a matrix has infinitely many logarithms; branches differ by 2*pi*i*k
lg1 = logm(a, BranchSpec(1))
print("branch 1 minus principal (should be 2*pi*i*I):")
print(lg1 - lg)
print("branch 1 still exponentiates back: ",
      np.linalg.norm(expm(lg1) - a) / np.linalg.norm(a))

print("\n== the principal branch cut ==")
neg = np.array([[-1.0]])
print("logm([[-1]]) =", logm(neg)[0, 0], " (argument +pi, not -pi)")

print("\n== defective eigenvalues: Jordan blocks ==")
lam, m = 0.5 - 0.3j, 4
block = lam * np.eye(m, dtype=complex) + np.eye(m, k=1, dtype=complex)
closed = jordan_block_log(lam, m)
print("closed-form log of a 4x4 Jordan block at", lam)
print(closed)
print("||expm(closed) - block|| =", np.linalg.norm(expm(closed) - block))
# the Schur-based logm agrees even though the matrix is defective
print("||logm(block) - closed|| =", np.linalg.norm(logm(block) - closed))

print("\n== products of exponentials ==")
# expm(a) expm(b) = expm(a+b) requires commuting arguments
b = 0.7 * a @ a - 1.2 * a + 0.1 * np.eye(4)
print("commuting pair defect:    ", check_commuting_product(a, b))
c = random_matrix(4, seed=2)
print("non-commuting pair defect:", check_commuting_product(a, c))
