"""Brute-force QI against brute-force h-invariance over small prime fields."""
from qinv.oracle import ExperimentConfig, run_experiment

for p in (3, 5, 7, 11):
    rep = run_experiment(ExperimentConfig(p=p, m=2, n=2, trials=200, seed=1))
    tag = "exploratory" if rep["exploratory"] else "in range"
    print(f"p={p:<3} {tag:<12} qi_true={rep['qi_true']:<4} agreements={rep['agreements']}/{rep['trials']}"
          f"  discrepancies={len(rep['discrepancies'])}")
    for d in rep["discrepancies"][:3]:
        print(f"    trial {d['trial']}: qi={d['qi']} h_invariant={d['h_invariant']} G={d['G']} gens={d['generators']}")
