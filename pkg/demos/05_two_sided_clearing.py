"""Two-sided clearing: both books, both thresholds, and the circuit breaker.

A match needs a triple coincidence.  The demo builds the eight pass/fail
combinations and shows the first-failure reporting, then prices the largest
deliverable transfer for a given spread.
"""

import itertools

from matchbook import (
    CandidateEntry,
    CompensationRule,
    Counterparty,
    LiquidityStatus,
    PreferenceBook,
    effective_compensation_cap,
    outcomes_to_csv,
    triple_coincidence,
)

rule = CompensationRule(elasticity=0.05, cap=20.0)


def side_book(theta, owner):
    return PreferenceBook(
        entries=(
            CandidateEntry("ideal", 100.0, 0.0, LiquidityStatus.HYPOTHETICAL),
            CandidateEntry("bid", 100.0 * theta, 0.0, LiquidityStatus.LIQUID),
        ),
        owner_id=owner,
    )


print("== the eight clause combinations ==")
rows = []
for f_pass, m_pass, c_pass in itertools.product((True, False), repeat=3):
    outcome = triple_coincidence(
        side_book(0.9 if f_pass else 0.7, "F"),
        0.8,
        Counterparty(
            id="M",
            book=side_book(0.9 if m_pass else 0.7, "M"),
            threshold=0.8,
            c_max=100.0,
        ),
        50.0 if c_pass else 150.0,
        rule,
    )
    rows.append(("F", "M", outcome))
    flags = f"F:{'pass' if f_pass else 'FAIL'} M:{'pass' if m_pass else 'FAIL'} C:{'pass' if c_pass else 'FAIL'}"
    print(f"{flags}  ->  {outcome.result.value}")

print("\nOne-sided willingness is not enough, and the capital check only")
print("gets a say once both liquidity checks pass.")

print("\n== the pairwise report format ==")
print(outcomes_to_csv(rows[:3]))

print("== pricing the deliverable transfer ==")
for gap, ceiling in ((10.0, 500.0), (10.0, 100.0), (35.0, 500.0)):
    deliverable = effective_compensation_cap(gap, ceiling, rule)
    print(
        f"utility gap {gap:>4.0f}, counterparty ceiling {ceiling:>5.0f}k"
        f" -> deliverable {deliverable:.0f}k"
    )
print("\nThe 35-point gap clamps to the 20-point cap first (costing 400k);")
print("beyond that, more money changes nothing, which is the whole point.")
