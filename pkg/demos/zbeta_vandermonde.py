"""Left-invertible Vandermonde matrices over ZZ and ZZ[b], b^2 = b - 3."""
from qinv.parser import print_canonical
from qinv.rings import ZBETA, ZZ
from qinv.vandermonde import det_product_formula, search_left_invertible, vandermonde

print("ZZ, points 0,1,2:", search_left_invertible(ZZ, 3, [0, 1, 2], 3))
print("det V(0,1,2) =", det_product_formula(ZZ, [0, 1, 2]))

pts, L = search_left_invertible(ZBETA, 3, [0, 1, 2, "b"], 4)
V = vandermonde(ZBETA, pts, 3)
print("ZZ[b] points:", ", ".join(map(str, pts)))
print("V =", print_canonical(V))
print("L =", print_canonical(L))
print("L V =", print_canonical(L @ V))
