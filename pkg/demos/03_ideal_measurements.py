#!/usr/bin/env python3
"""Pure indecomposable effects and the ideal measurements they generate.

Ideal measurements are the polytope analogue of projection-valued
measures: every outcome effect is a sum of pure indecomposable effects or
the unit effect minus such a sum.  Even polygons need the stretch
re-expression before their effects acquire eigenstates inside the state
space.
"""

from gptlab import (
    binary_ideal_measurement,
    effect_eval,
    eigenstate,
    enumerate_ideal_measurements,
    fuzzify,
    indecomposable_pure_effects,
    make_classical,
    make_polygon,
    psi_transform,
    validate_measurement,
)

print("=== pure indecomposable effects of the pentagon ===")
t5 = make_polygon(5)
for i, e in enumerate(indecomposable_pure_effects(t5)):
    print(f"e({i}) = {tuple(round(x, 6) for x in e)}")

print()
print("=== enumeration: how many ideal measurements with <= 3 outcomes? ===")
for t in (make_polygon(3), make_polygon(5), make_classical(2), psi_transform(make_polygon(4))):
    ms = enumerate_ideal_measurements(t, 3)
    sizes = [m.n_outcomes for m in ms]
    print(f"{t.name}: {len(ms)} measurements, outcome counts {sizes}")

print()
print("=== eigenstates: each ideal effect is certain on its own state ===")
f = binary_ideal_measurement(t5, 0)
state = eigenstate(t5, f.effects[0], ideal=True)
print(f"pentagon e(0) eigenstate: {tuple(round(x, 6) for x in state)}")
print(f"evaluates to {effect_eval(t5, f.effects[0], state):.9f} there")

print()
print("=== even polygons: raw effects have no internal eigenstate ===")
t4 = make_polygon(4)
raw_e = indecomposable_pure_effects(t4)[0]
try:
    eigenstate(t4, raw_e)
except ValueError as err:
    print(f"raw square: {err}")
t4h = psi_transform(t4)
hat_e = indecomposable_pure_effects(t4h)[0]
s = eigenstate(t4h, hat_e, ideal=True)
print(f"re-expressed square: eigenstate {tuple(round(x, 6) for x in s)} (edge midpoint)")

print()
print("=== fuzzification: mixing with uniform trivial noise ===")
f8 = binary_ideal_measurement(make_polygon(7), 2)
t7 = make_polygon(7)
for lam in (1.0, 0.7, 0.3, 0.0):
    ft = fuzzify(t7, f8, lam)
    ok = validate_measurement(t7, ft)
    print(f"lambda={lam:.1f}: effect(0) z-component {ft.effects[0][2]:.4f}, valid: {ok}")
