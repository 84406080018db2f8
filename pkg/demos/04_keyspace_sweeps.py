"""
Exhaustive keyspace sweeps and exact unlock probabilities
=========================================================

"""

from fsmlock import (BitString, LayeredParams, build_bfsm, build_layered,
                     count_valid_licenses, count_valid_responses, counter_fsm,
                     random_license, unlock_probability_layered,
                     unlock_probability_proposed)

ip = counter_fsm(7)
response = BitString.from_text("001011")
license = BitString.from_text("111011")

# 1. dummy-chain lock: sweep all 64 responses against the fixed license
locked = build_bfsm(ip, response, license, wiring_seed=0)
report = count_valid_responses(locked, license)
print(f"valid responses: {report.valid_count} / {report.space_size},"
      f" namely {report.valid_examples[0].text}")

# 2. and all 64 licenses against the fixed response
report = count_valid_licenses(locked, response)
print(f"valid licenses:  {report.valid_count} / {report.space_size},"
      f" namely {report.valid_examples[0].text}")

# 3. with the license unknown, no other device's response can unlock:
#    the closed form is exactly zero, not merely small
print(f"unauthorized unlock probability: {unlock_probability_proposed()}")

# 4. the layered baseline accepts one response per branch pattern, so
#    m=4 branches over M=6 layers leave 4^3 = 64 backdoors in 4096
shape = LayeredParams(branch_states=4, layers=6)
wide = random_license(1, shape.response_bits)
layered = build_layered(ip, wide, license, shape)
report = count_valid_responses(layered, license)
print(f"layered valid responses: {report.valid_count} / {report.space_size}")
print(f"layered closed form, authorized excluded:"
      f" {unlock_probability_layered(4, 6)}")
