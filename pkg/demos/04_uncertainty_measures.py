#!/usr/bin/env python3
"""The four width/error measures on a worked example.

Preparation side: overall width (smallest ball diameter at a confidence
level) and minimum localization error.  Measurement side: error-bar
width, the Lipschitz-ball distance, and the worst per-outcome gap.  The
fuzzified family has closed forms for all of them, which the LP-based
implementations reproduce.
"""

import math

from gptlab import (
    distribution,
    eigenstate,
    error_bar_width,
    fuzzify,
    linf_distance,
    localization_error,
    min_le_sum,
    overall_width,
    perpendicular_ideal_pair,
    psi_transform,
    make_polygon,
    werner_distance,
)

t = psi_transform(make_polygon(8))
f, g = perpendicular_ideal_pair(t)

print("=== distributions on the octagon (re-expressed) ===")
state = eigenstate(t, f.effects[0], ideal=True)
df = distribution(t, f, state)
dg = distribution(t, g, state)
print(f"eigenstate of f0: F gives {tuple(round(p, 6) for p in df.probs)}")
print(f"                  G gives {tuple(round(p, 6) for p in dg.probs)}")
print(f"LE(F) = {localization_error(df):.6f}, LE(G) = {localization_error(dg):.6f}")

print()
print("=== overall width shrinks as the confidence loosens ===")
for eps in (0.0, 0.3, 0.5, 1.0):
    print(f"eps={eps:.1f}: W(G on eigenstate of f0) = {overall_width(dg, eps, t.ctx)}")

print()
print("=== the fuzzified family: closed forms vs the implementations ===")
print(f"{'lambda':>8} {'werner':>10} {'(1-l)/2':>10} {'linf':>10} {'errbar@0.1':>11} {'errbar@0.4':>11}")
for lam in (0.0, 0.25, 0.5, 0.75, 1.0):
    ft = fuzzify(t, f, lam)
    dw = werner_distance(t, ft, f)
    di = linf_distance(t, ft, f)
    w1 = error_bar_width(t, ft, f, 0.1)
    w4 = error_bar_width(t, ft, f, 0.4)
    print(f"{lam:>8.2f} {dw:>10.6f} {(1 - lam) / 2:>10.6f} {di:>10.6f} {w1:>11} {w4:>11}")

print()
print("=== preparation uncertainty floor (no state localizes both) ===")
res = min_le_sum(t, f, g)
print(f"min over states of LE(F) + LE(G) = {float(res.value):.9f}")
print(f"the qubit-like bound 1 - 1/sqrt(2) = {1 - 1 / math.sqrt(2):.9f}")
print(f"attained at vertex {tuple(round(x, 6) for x in res.argmin)}")
