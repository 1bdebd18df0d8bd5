"""Walk through the integer counterexample: QI holds but K adj(I-GK) escapes S."""
from qinv import oracle
from qinv.parser import print_canonical
from qinv.problem import load_problem
from qinv.qi import adjugate_invariance, check_qi, k_adj
from qinv.rings import IntegersModP

prob = load_problem("corpus:counterexample")
G, S = prob.plant, prob.controller_set
print("G =", print_canonical(G))
for i, H in enumerate(S.generators()):
    print(f"H{i} =", print_canonical(H))

print("QI over ZZ:", check_qi(G, S).verdict.value)
K0 = S.generators()[2]
M = k_adj(K0, G)
print("K0 adj(I - G K0) =", print_canonical(M))
print("membership certificate:", S.contains(M).certificate["obstruction"])

# odd residue fields repair the defect
for p in (3, 5, 7):
    F = IntegersModP(p)
    Sp = type(S)(F, [H.map(F.convert, F) for H in S.generators()])
    print(f"adjugate invariance mod {p}:", adjugate_invariance(G.map(F.convert, F), Sp).verdict.value)

rep = oracle.counterexample_replay()
print("mod 2: K0 adj(I - G K0) in S?", rep["mod2"]["k0_adj_in_s"])
