"""Immediate fills, post-execution shocks, regret, lock-in, impulse orders.

High-quality bids clear instantly (theta > 1 beats any threshold).  After a
lower-quality execution, an upward repricing of the internal ask drags theta
below the committed threshold: regret, the psychological form of slippage.
Lock-in explains why the match survives it anyway.
"""

from matchbook import (
    AgentState,
    CandidateEntry,
    CompensationRule,
    LiquidityStatus,
    PreferenceBook,
    ShockEvent,
    TableSchedule,
    apply_shock,
    decide,
    impulse_adjust,
    lock_in_threshold,
    step,
)

rule = CompensationRule(elasticity=0.05, cap=20.0)

print("== a marketable bid ==")
book = PreferenceBook(
    entries=(
        CandidateEntry("ideal", 90.0, 0.0, LiquidityStatus.HYPOTHETICAL),
        CandidateEntry("star", 94.0, 0.0, LiquidityStatus.LIQUID),
    ),
    owner_id="F",
)
state, record = step(
    AgentState(), book, rule, TableSchedule(points=((1, 0.95),)), 1, ask=90.0
)
print(f"theta {record.theta:.4f} >= T {record.threshold} -> {record.decision.value}: instant fill")

print("\n== a settled match, then a peer-comparison shock ==")
book = PreferenceBook(
    entries=(
        CandidateEntry("ideal", 90.0, 0.0, LiquidityStatus.HYPOTHETICAL),
        CandidateEntry("partner", 75.0, 0.0, LiquidityStatus.LIQUID),
    ),
    owner_id="F",
)
state, record = step(AgentState(), book, rule, TableSchedule(points=((1, 0.80),)), 1)
print(f"executed: theta {record.theta:.4f} at threshold {record.threshold}")

shock = ShockEvent.multiplicative(1.10, step=2)
result = apply_shock(state, 90.0, 75.0, shock)
print(f"shock: ask 90 -> {result.new_v_uncond}, theta -> {result.new_theta:.4f}")
print(f"regret (theta below committed {state.commit_threshold}): {result.regret}")

print("\n== lock-in keeps the match despite regret ==")
exit_T = lock_in_threshold(state.commit_threshold, kappa=0.15)
print(f"exit threshold {exit_T:.2f}; theta {result.new_theta:.2f} is below it, yet the")
print(f"state machine stays in phase {state.phase.value!r}: exit is sticky, not automatic")

print("\n== a counter-shock clears regret ==")
recovered = apply_shock(state, result.new_v_uncond, 75.0, ShockEvent.absolute(88.0, step=3))
print(f"ask repriced down to 88: theta {recovered.new_theta:.4f}, regret {recovered.regret}")

print("\n== impulse orders: the threshold side can also jump ==")
T = 0.95
theta = 0.78
print(f"theta {theta} vs T {T}: {decide(theta, T).value}")
dropped = impulse_adjust(T, delta_emotion=0.20)
print(f"after an impulse drop to {dropped:.2f}: {decide(theta, dropped).value}")
