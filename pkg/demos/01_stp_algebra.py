"""
Semi-tensor products on logical matrices
========================================

Logical matrices are stored by their column indices, so products never
touch a dense array.
"""

# %%
# Canonical vectors and the product
# ---------------------------------
from bcnkit import LogicalMatrix, delta, power_reducing_matrix, stp, stp_vec, swap_matrix

x, y = delta(2, 3), delta(1, 2)
print("x ⋉ y =", stp_vec(x, y))

# A 2x4 matrix times a 2x2 one: the inner sizes do not match, the
# semi-tensor product pads with identities.
a = LogicalMatrix(2, 4, [1, 2, 2, 1])
b = LogicalMatrix(2, 2, [2, 1])
print("a ⋉ b column indices:", stp(a, b).col_index)

# %%
# Swapping and squaring factors
# -----------------------------
w = swap_matrix(3, 2)
print("W (x ⋉ y) =", w.apply(stp_vec(x, y)), " y ⋉ x =", stp_vec(y, x))

phi = power_reducing_matrix(3)
print("Φ x =", phi.apply(x), " x ⋉ x =", stp_vec(x, x))
