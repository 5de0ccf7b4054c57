"""
The healthcare case study
=========================

A diagnosis-and-therapy context in feedback with a patient model.
"""

# %%
import time

from bcnkit.analysis import correct_diagnosis_set, healthy_set, is_global_attractor, limit_cycles
from bcnkit.casestudy import ASSUMPTIONS, closed_loop, load_case_study, triage_table

context, plant, targets = load_case_study()
print("context:", context.n_inputs, "inputs,", context.n_states, "states,", context.n_outputs, "outputs")
print("patient:", plant.n_inputs, "inputs,", plant.n_states, "states")
for line in ASSUMPTIONS:
    print(" -", line)

# %%
# First diagnosis from the admission reading
for row in triage_table()[:6]:
    print(row)

# %%
# Close the loop and check both targets
t0 = time.perf_counter()
cl = closed_loop()
cd, h = correct_diagnosis_set(cl), healthy_set(cl)
print(len(cd), "correct-diagnosis states,", len(h), "healthy states")
print("correct diagnosis:", is_global_attractor(cl.bn, cd).to_dict())
print("healthy:", is_global_attractor(cl.bn, h).to_dict())
print("cycles:", [len(c) for c in limit_cycles(cl.bn)])

# %%
# The relapse mutant lets a healthy patient fall ill again
bad = closed_loop(mutant=True)
print("mutant healthy:", is_global_attractor(bad.bn, healthy_set(bad)).to_dict())
print(f"{time.perf_counter() - t0:.1f} s")
