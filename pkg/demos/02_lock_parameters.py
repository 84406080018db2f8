"""
Sizing the lock: selector width against added states
====================================================

"""

from fsmlock import (continuous_optimum_b, feasible_selector_widths, optimize,
                     states_added, states_added_layered)

# 1. a selector width b must divide the license width L; each choice
#    costs 2^b - 1 black holes plus a 2L/b state chain
L = 128
print(f"license width L = {L}")
for b in feasible_selector_widths(L):
    print(f"  b={b:3d}: adds {states_added(L, b)} states")

# 2. the integer optimum balances the two terms
best = optimize(L)
print(f"optimum: b={best.selector_bits}, chain n={best.chain_states},"
      f" holes h={best.black_hole_states}, total {best.added_states}")

# 3. the continuous relaxation lands nearby; the integer scan decides
print(f"continuous optimum b* = {continuous_optimum_b(L):.6f}")

# 4. the layered alternative pays (M/2)(1+m) states for the same job
for m, M in ((4, 4), (4, 6), (3, 178)):
    print(f"layered m={m}, M={M}: adds {states_added_layered(m, M)} states")
print(f"dummy-chain lock at L=128 again: {best.added_states}")
