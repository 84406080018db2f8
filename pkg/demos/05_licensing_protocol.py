"""
The three-party pay-per-device licensing flow
=============================================

"""

import tempfile

from fsmlock import Deliverable, MockPuf, activate, counter_fsm, run_protocol

# 1. one run plays FPGA vendor, IP vendor, and system designer in turn:
#    manufacture, enroll, sell, order, lock, deliver, activate
transcript, deliverable = run_protocol(
    device_seed=123, challenges=[1], ip_id="demo-counter",
    ip=counter_fsm(7), license_bits=6, rng_seed=0)
print(transcript.render())

# 2. the deliverable ships as three plain text files
with tempfile.TemporaryDirectory() as workdir:
    deliverable.write_dir(workdir)
    again = Deliverable.read_dir(workdir)
    print(f"deliverable round-trips from disk: {again == deliverable}")

# 3. the ordered device answers the challenge and unlocks
print(f"device 123: {activate(deliverable, MockPuf(123), deliverable.challenge)}")

# 4. any other device answers differently and lands in a trap
print(f"device 124: {activate(deliverable, MockPuf(124), deliverable.challenge)}")
print(f"device 125: {activate(deliverable, MockPuf(125), deliverable.challenge)}")
