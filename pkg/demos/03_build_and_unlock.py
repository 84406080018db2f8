"""
Locking a machine and walking the dummy chain
=============================================

"""

from fsmlock import (BitString, LockParams, build_bfsm, counter_fsm, determiners,
                     run_unlock)

# 1. a 7-state counter stands in for the IP to protect
ip = counter_fsm(7)
print(f"original: {len(ip.states)} states, reset {ip.reset_state}")

# 2. a 6-bit device response and a 6-bit license give b=2 selector bits;
#    even steps read the response, odd steps read response XOR license
response = BitString.from_text("001011")
license = BitString.from_text("111011")
schedule = determiners(response, license, LockParams.for_widths(6, 2))
print(f"determiner sequence: {schedule.determiners}")

# 3. the locked machine prepends a 6-state chain and 3 black holes
locked = build_bfsm(ip, response, license, wiring_seed=0)
print(f"locked: {len(locked.fsm.states)} states, reset {locked.fsm.reset_state}")
print(f"chain: {' '.join(locked.dummy_states)}")
print(f"black holes: {' '.join(locked.black_holes)}")

# 4. the right pair walks the chain to the original reset
print(f"authorized unlock: {run_unlock(locked, response, license)}")

# 5. flip any response bit and the walk falls into a black hole
flipped = BitString(6, response.value ^ 0b000100)
print(f"one bit wrong:     {run_unlock(locked, flipped, license)}")

# 6. black holes only lead to black holes, so there is no way back
for hole in locked.black_holes:
    reachable = locked.fsm.reachable_states(hole)
    print(f"  from {hole}: reaches {sorted(reachable)}")
