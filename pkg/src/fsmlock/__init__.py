"""Lock FSM IP cores to a specific device.

The lock prepends a keyed dummy chain to the machine: a walk that only
the right (device response, license) pair completes, with every wrong
selector value falling into closed black-hole trap states.  The package
covers the whole pay-per-device flow: KISS2 parsing and emission,
Verilog generation, lock sizing, a deterministic mock PUF, exhaustive
keyspace sweeps with exact probabilities, and a three-party licensing
protocol simulation.
"""

from .bits import BitString
from .fsm import (Fsm, Kiss2Error, TernaryPattern, Transition, counter_fsm,
                  emit_kiss2, parse_kiss2)
from .hdl import emit_hdl
from .lock import (LAYERED, PROPOSED, BoostedFsm, KeySchedule, LayeredParams,
                   build_bfsm, build_layered, determiners, layered_determiners,
                   random_license)
from .params import (LockParams, continuous_optimum_b, feasible_selector_widths,
                     optimize, states_added, states_added_layered)
from .protocol import (CrTransfer, Deliverable, DeliverableError, DeviceSale,
                       FpgaVendor, IpVendor, OrderRequest, ProtocolError,
                       SystemDesigner, Transcript, TranscriptEntry, activate,
                       run_protocol)
from .puf import (CrDatabase, CrDbError, CrPair, MockPuf, enroll, load_db,
                  mix64, respond, save_db)
from .report import (CostRow, HighSecuritySummary, comparison_rows,
                     high_security_summary, layered_shape_for_license,
                     lock_cost, render_rows)
from .unlock import (DEFAULT_SWEEP_LIMIT, EnumerationReport, NotUnlockedError,
                     UnlockOutcome, count_valid_licenses, count_valid_responses,
                     iter_valid_licenses, iter_valid_responses, run_unlock,
                     trace_equivalence, unlock_probability_layered,
                     unlock_probability_proposed)

__version__ = "0.1.0"

__all__ = [
    "BitString",
    "BoostedFsm",
    "CostRow",
    "CrDatabase",
    "CrDbError",
    "CrPair",
    "CrTransfer",
    "DEFAULT_SWEEP_LIMIT",
    "Deliverable",
    "DeliverableError",
    "DeviceSale",
    "EnumerationReport",
    "FpgaVendor",
    "Fsm",
    "HighSecuritySummary",
    "IpVendor",
    "KeySchedule",
    "Kiss2Error",
    "LAYERED",
    "LayeredParams",
    "LockParams",
    "MockPuf",
    "NotUnlockedError",
    "OrderRequest",
    "PROPOSED",
    "ProtocolError",
    "SystemDesigner",
    "TernaryPattern",
    "Transcript",
    "TranscriptEntry",
    "Transition",
    "UnlockOutcome",
    "activate",
    "build_bfsm",
    "build_layered",
    "comparison_rows",
    "continuous_optimum_b",
    "count_valid_licenses",
    "count_valid_responses",
    "counter_fsm",
    "determiners",
    "emit_hdl",
    "emit_kiss2",
    "enroll",
    "feasible_selector_widths",
    "high_security_summary",
    "iter_valid_licenses",
    "iter_valid_responses",
    "layered_determiners",
    "layered_shape_for_license",
    "load_db",
    "lock_cost",
    "mix64",
    "optimize",
    "parse_kiss2",
    "random_license",
    "render_rows",
    "respond",
    "run_protocol",
    "run_unlock",
    "save_db",
    "states_added",
    "states_added_layered",
    "trace_equivalence",
    "unlock_probability_layered",
    "unlock_probability_proposed",
]
