"""
Reading, driving, and re-emitting a KISS2 state machine
=======================================================

"""

import os

from fsmlock import emit_hdl, emit_kiss2, parse_kiss2

# 1. parse one of the bundled benchmark machines
path = os.path.join(os.path.dirname(__file__), "..", "benchmarks", "dk16.kiss2")
with open(path) as handle:
    fsm = parse_kiss2(handle.read())

print(f"dk16: {fsm.inputs_width} inputs, {fsm.outputs_width} outputs,"
      f" {len(fsm.states)} states, {len(fsm.transitions)} transitions")
print(f"reset state: {fsm.reset_state}")

# 2. drive it a few steps; unmatched inputs stall with zero outputs
state = fsm.reset_state
for vector in ("00", "01", "10", "11"):
    following, output = fsm.step(state, vector)
    print(f"  {state} --{vector}/{output}--> {following}")
    state = following

# 3. emission round-trips: parse(emit(fsm)) is the same machine
again = parse_kiss2(emit_kiss2(fsm))
print(f"round-trip equal: {again == fsm}")

# 4. the same machine as synthesizable Verilog
verilog = emit_hdl(fsm, "dk16")
print(f"Verilog: {len(verilog.splitlines())} lines, starts with:")
for line in verilog.splitlines()[:4]:
    print(f"  {line}")
