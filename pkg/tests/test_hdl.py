import pytest

from fsmlock import emit_hdl, parse_kiss2

TOGGLE = """\
.i 1
.o 1
.r A
1 A B 1
0 A A -
- B A 0
.e
"""

TOGGLE_HDL = """\
// toggle: synchronous Mealy machine, 2 states, 3 transitions
module toggle (
    input  wire clk,
    input  wire rst,
    input  wire [0:0] in_bits,
    output reg  [0:0] out_bits
);

    localparam integer STATE_BITS = 1;
    localparam [STATE_BITS-1:0] ST0 = 1'd0;  // A
    localparam [STATE_BITS-1:0] ST1 = 1'd1;  // B

    reg [STATE_BITS-1:0] state;
    reg [STATE_BITS-1:0] state_next;

    always @* begin
        state_next = state;
        out_bits = 1'b0;
        case (state)
            ST0: begin
                casez (in_bits)
                    1'b1: begin state_next = ST1; out_bits = 1'b1; end
                    1'b0: begin state_next = ST0; out_bits = 1'b0; end
                    default: ;
                endcase
            end
            ST1: begin
                casez (in_bits)
                    1'b?: begin state_next = ST0; out_bits = 1'b0; end
                    default: ;
                endcase
            end
            default: ;
        endcase
    end

    always @(posedge clk) begin
        if (rst)
            state <= ST0;
        else
            state <= state_next;
    end

endmodule
"""


def test_emission_is_stable():
    fsm = parse_kiss2(TOGGLE)
    assert emit_hdl(fsm, "toggle") == TOGGLE_HDL
    assert emit_hdl(fsm, "toggle") == emit_hdl(fsm, "toggle")


def test_dont_care_becomes_question_mark():
    fsm = parse_kiss2(".i 3\n.o 2\n-1- A B 1-\n--- B A 00\n.e\n")
    text = emit_hdl(fsm, "m")
    assert "3'b?1?" in text
    assert "2'b10" in text  # '-' output position emitted as 0


def test_state_width_grows_with_state_count(dk16):
    text = emit_hdl(dk16, "dk16_core")
    assert "STATE_BITS = 5" in text  # 27 states
    assert "input  wire [1:0] in_bits" in text
    assert "output reg  [2:0] out_bits" in text
    assert text.count("casez (in_bits)") == 27


def test_single_state_machine_uses_one_bit():
    fsm = parse_kiss2(".i 1\n.o 1\n- A A 1\n.e\n")
    assert "STATE_BITS = 1;" in emit_hdl(fsm, "single")


def test_state_names_survive_as_comments(dk16):
    text = emit_hdl(dk16, "dk16_core")
    assert "// s0" in text
    assert "// s26" in text


def test_reset_targets_the_reset_state():
    fsm = parse_kiss2(".i 1\n.o 1\n.r B\n1 A B 1\n0 B A 0\n.e\n")
    text = emit_hdl(fsm, "m")
    # states in appearance order: A=ST0, B=ST1
    assert "state <= ST1;" in text


def test_invalid_module_name_rejected():
    fsm = parse_kiss2(TOGGLE)
    with pytest.raises(ValueError):
        emit_hdl(fsm, "1bad")
    with pytest.raises(ValueError):
        emit_hdl(fsm, "has space")
    with pytest.raises(ValueError):
        emit_hdl(fsm, "")
