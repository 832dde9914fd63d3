"""Settling: execution driven by threshold decay, not spread closure.

A constant bid sits 22% below the ask.  Nothing about the book improves;
the agent's willingness threshold decays with inventory age until the
standing ratio clears it.
"""

from matchbook import (
    AgentState,
    CandidateEntry,
    CompensationRule,
    DecaySchedule,
    LiquidityStatus,
    Phase,
    PreferenceBook,
    SETTLING_TABLE,
    records_to_csv,
    step,
)

book = PreferenceBook(
    entries=(
        CandidateEntry("ideal", 90.0, 0.0, LiquidityStatus.HYPOTHETICAL),
        CandidateEntry("candidate", 70.0, 0.0, LiquidityStatus.LIQUID),
    ),
    owner_id="F",
)
rule = CompensationRule(elasticity=0.05, cap=20.0)

print("== tabulated decay ==")
state = AgentState()
records = []
for t in range(1, 6):
    state, record = step(state, book, rule, SETTLING_TABLE, t)
    records.append(record)
    print(
        f"t{t}: theta {record.theta:.4f} vs T {record.threshold:.2f}"
        f" -> {record.decision.value.upper()}"
    )
    if state.phase is Phase.EXECUTE:
        break

print(f"\nexecuted at t={state.executed_at}, committed threshold {state.commit_threshold}")
print(f"theta never moved; only T did. Slippage locked in: {records[-1].slippage}")

print("\n== the same run as a record stream (CSV) ==")
print(records_to_csv(records))

print("== parametric decay reaches the same place ==")
schedule = DecaySchedule(t0=0.95, rate=0.06, floor=0.70)
state = AgentState()
for t in range(0, 30):
    state, record = step(state, book, rule, schedule, t)
    if state.phase is Phase.EXECUTE:
        print(f"exponential schedule executes at t={t} (T={record.threshold:.4f})")
        break
