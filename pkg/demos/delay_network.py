"""Two subsystems with a one-step communication delay between them."""
from qinv.parser import parse_matrix, print_canonical
from qinv.problem import load_problem
from qinv.qi import check_qi, closed_loop_set, h_invariance, h_map

prob = load_problem("corpus:network")
G, S = prob.plant, prob.controller_set
print("plant:", print_canonical(G))
print("QI:", check_qi(G, S).verdict.value)

rep = h_invariance(G, S)
print("h-invariance:", rep.verdict.value)
for name, status in rep.preconditions:
    print(f"  [{status}] {name}")

K = parse_matrix([["1/(s+1)", "1/(d*(s+3))"], ["1/(d*(s+2))", "2"]], G.ring)
hK = h_map(K, G)
print("K in S:", K in S, " h(K) in S:", hK in S)
print("h(h(K)) == K:", h_map(hK, G) == K)

aff = closed_loop_set(prob.p11, prob.p12, prob.p21, G, S)
print(f"closed-loop maps: P11 - sum c_i T_i with {len(aff.images)} images")
for T in aff.images:
    print("  ", print_canonical(T))

# without the delay in the plant, no theorem applies
nd = load_problem("corpus:network_nodelay")
print("no-delay plant, h-invariance:", h_invariance(nd.plant, nd.controller_set).verdict.value)
