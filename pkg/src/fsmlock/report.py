"""Added-cost comparison between the dummy-chain lock and the layered baseline.

Hardware-level numbers (LUTs, slices, delay, power) need a synthesis
toolchain; what a desk build can measure exactly is how many states and
transitions each scheme adds to a given machine, so that is what the
comparison reports.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .fsm import Fsm
from .lock import LAYERED, PROPOSED, BoostedFsm, LayeredParams, build_bfsm, build_layered, random_license
from .params import optimize, states_added_layered

# Published added-state count for the layered baseline at (m=3, M=178);
# the layer formula (M/2)(1+m) gives 356 and no derivation of 365 is on
# record, so both are carried and labeled.
CITED_HIGH_SECURITY_LAYERED = 365
HIGH_SECURITY_LAYERED_SHAPE = LayeredParams(branch_states=3, layers=178)
HIGH_SECURITY_LICENSE_BITS = 128


@dataclass(frozen=True)
class CostRow:
    """Measured cost of locking one benchmark with one scheme."""

    benchmark: str
    license_bits: int
    scheme: str
    added_states: int
    added_transitions: int


@dataclass(frozen=True)
class HighSecuritySummary:
    """The 128-bit-license comparison, as exact numbers."""

    proposed_added: int
    layered_formula_added: int
    layered_cited_added: int
    formula_ratio: Fraction
    cited_ratio: Fraction

    @property
    def quarter_claim_formula(self) -> bool:
        """Proposed cost is at most a quarter of the layered formula count."""
        return self.formula_ratio <= Fraction(1, 4)

    @property
    def quarter_claim_cited(self) -> bool:
        """Same claim against the published count."""
        return self.cited_ratio <= Fraction(1, 4)


def lock_cost(original: Fsm, locked: BoostedFsm) -> tuple[int, int]:
    """(added states, added transitions) of a built lock, by direct count."""
    return (len(locked.fsm.states) - len(original.states),
            len(locked.fsm.transitions) - len(original.transitions))


def layered_shape_for_license(license_bits: int, branch_states: int = 4) -> LayeredParams:
    """The layered shape consuming the same license width: M = 2L / ceil(log2 m)."""
    step_bits = (branch_states - 1).bit_length()
    if (2 * license_bits) % step_bits:
        raise ValueError(
            f"license width {license_bits} does not fill whole {step_bits}-bit steps")
    return LayeredParams(branch_states, 2 * license_bits // step_bits)


def comparison_rows(named_fsms: list[tuple[str, Fsm]], license_bits_values: list[int],
                    seed: int = 0) -> list[CostRow]:
    """Build both locks on each benchmark at each license width and count costs.

    Responses and licenses are drawn deterministically from ``seed``, so
    the rows are reproducible; the counts themselves do not depend on
    the drawn values, only on the shapes.
    """
    rows: list[CostRow] = []
    draw = seed
    for name, fsm in named_fsms:
        for license_bits in license_bits_values:
            license = random_license(draw, license_bits)
            response = random_license(draw + 1, license_bits)
            proposed = build_bfsm(fsm, response, license, wiring_seed=draw)
            added_s, added_t = lock_cost(fsm, proposed)
            rows.append(CostRow(name, license_bits, PROPOSED, added_s, added_t))

            shape = layered_shape_for_license(license_bits)
            wide_response = random_license(draw + 2, shape.response_bits)
            layered = build_layered(fsm, wide_response, license, shape)
            added_s, added_t = lock_cost(fsm, layered)
            rows.append(CostRow(name, license_bits, LAYERED, added_s, added_t))
            draw += 3
    return rows


def render_rows(rows: list[CostRow]) -> str:
    """A fixed-width text table of comparison rows."""
    header = f"{'benchmark':<12} {'L':>4} {'scheme':<9} {'+states':>8} {'+transitions':>13}"
    lines = [header, "-" * len(header)]
    for row in rows:
        lines.append(
            f"{row.benchmark:<12} {row.license_bits:>4} {row.scheme:<9}"
            f" {row.added_states:>8} {row.added_transitions:>13}")
    return "\n".join(lines) + "\n"


def high_security_summary() -> HighSecuritySummary:
    """Exact added-state comparison for a 128-bit license."""
    proposed = optimize(HIGH_SECURITY_LICENSE_BITS).added_states
    formula = states_added_layered(HIGH_SECURITY_LAYERED_SHAPE.branch_states,
                                   HIGH_SECURITY_LAYERED_SHAPE.layers)
    return HighSecuritySummary(
        proposed_added=proposed,
        layered_formula_added=formula,
        layered_cited_added=CITED_HIGH_SECURITY_LAYERED,
        formula_ratio=Fraction(proposed, formula),
        cited_ratio=Fraction(proposed, CITED_HIGH_SECURITY_LAYERED),
    )
