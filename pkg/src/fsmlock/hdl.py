"""Synthesizable Verilog-2001 text for an :class:`~fsmlock.fsm.Fsm`.

States are encoded in binary in their list order.  First-match-wins
transition priority maps onto nested ``casez`` arms ('-' becomes '?'),
and the stall convention becomes the default assignments: hold state,
drive zero outputs.  Input bus bit ``[width-1]`` carries the first
(leftmost) pattern position, matching the MSB-first reading of
simulation input strings.
"""

from __future__ import annotations

import re

from .fsm import Fsm

_MODULE_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_$]*$")


def _state_bits(n_states: int) -> int:
    return max(1, (n_states - 1).bit_length())


def emit_hdl(fsm: Fsm, module_name: str = "locked_fsm") -> str:
    """Deterministically render ``fsm`` as a single Verilog module."""
    if not _MODULE_NAME_RE.match(module_name):
        raise ValueError(f"invalid Verilog module name {module_name!r}")
    iw, ow = fsm.inputs_width, fsm.outputs_width
    sbits = _state_bits(len(fsm.states))
    index = {name: i for i, name in enumerate(fsm.states)}

    ports = ["    input  wire clk", "    input  wire rst"]
    if iw:
        ports.append(f"    input  wire [{iw - 1}:0] in_bits")
    if ow:
        ports.append(f"    output reg  [{ow - 1}:0] out_bits")

    lines = [
        f"// {module_name}: synchronous Mealy machine, {len(fsm.states)} states,"
        f" {len(fsm.transitions)} transitions",
        f"module {module_name} (",
        ",\n".join(ports),
        ");",
        "",
        f"    localparam integer STATE_BITS = {sbits};",
    ]
    for i, name in enumerate(fsm.states):
        lines.append(f"    localparam [STATE_BITS-1:0] ST{i} = {sbits}'d{i};  // {name}")
    lines += [
        "",
        "    reg [STATE_BITS-1:0] state;",
        "    reg [STATE_BITS-1:0] state_next;",
        "",
        "    always @* begin",
        "        state_next = state;",
    ]
    if ow:
        lines.append(f"        out_bits = {ow}'b{'0' * ow};")
    lines.append("        case (state)")
    for i, name in enumerate(fsm.states):
        arcs = fsm.transitions_from(name)
        if not arcs:
            continue
        lines.append(f"            ST{i}: begin")
        if iw:
            lines.append("                casez (in_bits)")
            for t in arcs:
                actions = [f"state_next = ST{index[t.dst]};"]
                if ow:
                    actions.append(f"out_bits = {ow}'b{t.output.chars.replace('-', '0')};")
                lines.append(
                    f"                    {iw}'b{t.input.chars.replace('-', '?')}: "
                    f"begin {' '.join(actions)} end")
            lines.append("                    default: ;")
            lines.append("                endcase")
        else:
            t = arcs[0]
            lines.append(f"                state_next = ST{index[t.dst]};")
            if ow:
                lines.append(f"                out_bits = {ow}'b{t.output.chars.replace('-', '0')};")
        lines.append("            end")
    lines += [
        "            default: ;",
        "        endcase",
        "    end",
        "",
        "    always @(posedge clk) begin",
        "        if (rst)",
        f"            state <= ST{index[fsm.reset_state]};",
        "        else",
        "            state <= state_next;",
        "    end",
        "",
        "endmodule",
    ]
    return "\n".join(lines) + "\n"
