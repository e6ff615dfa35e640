#!/usr/bin/env python3
"""Exact Hessian determinants of the closed-form examples, written as a C++ header.

Built from the Cartesian formulas with sympy; shares nothing with the library.
Usage: python3 make_oracles.py > ../oracle_values.hpp
"""
import sympy as sp

R = sp.Rational


def family(n, k, u):
    xs = sp.symbols(f"x0:{n}", real=True)
    rho = sp.sqrt(sum(x**2 for x in xs[: n - k]))
    r = sp.sqrt(sum(x**2 for x in xs[n - k:]))
    return xs, u(rho, r)


def f(r):
    return 1 + r**2 / 2


def det_at(xs, w, pts):
    H = sp.hessian(w, xs)
    out = []
    for p in pts:
        sub = dict(zip(xs, [R(c) for c in p]))
        out.append((p, sp.N(H.subs(sub).det(), 30), sp.N(w.subs(sub), 30)))
    return out


cases = []

P3 = [("0.12", "0.05", "0.3"), ("0.03", "-0.08", "-0.21"), ("0.2", "0.1", "0.1")]
P2 = [("0.15", "0.3"), ("-0.07", "0.22"), ("0.25", "-0.1")]

for n, k, q, pts in [(3, 1, 0, P3), (3, 1, 1, P3), (2, 1, 1, P2)]:
    beta = R(n - k + 1 + q, k + 1)
    xs, w = family(n, k, lambda rho, r: rho + rho**beta * f(r))
    cases.append((f"family_a_n{n}k{k}q{q}", n, k, q, 1, "balanced", det_at(xs, w, pts)))

for n, k, q, s, rule in [(3, 1, 0, R(5, 4), "balanced"), (3, 1, 1, R(3, 2), "balanced"), (3, 1, 1, R(3, 2), "printed")]:
    if rule == "balanced":
        g = (2 * (n - k) + (k - n + q) * s) / k
    else:
        g = (n - k + q + (k - n + q) * s) / k
    xs, w = family(n, k, lambda rho, r: rho**s + rho**g * f(r))
    tag = f"family_b_n{n}k{k}q{q}s{str(s).replace('/', '_')}_{rule}"
    cases.append((tag, n, k, q, float(s), rule, det_at(xs, w, P3)))

for n, q, pts in [(2, 1, [("0.7", "0.1"), ("-0.62", "-0.2"), ("0.9", "0.05")]),
                  (3, 1, [("0.5", "0.4", "0.1"), ("-0.6", "0.1", "-0.2"), ("0.3", "-0.55", "0.15")])]:
    s = R(q + 2, 2)

    def u(rho, r):
        d = rho - R(1, 2)  # points are chosen with rho > 1/2
        return d + d**s * f(r)

    xs, w = family(n, 1, u)
    cases.append((f"cylinder_n{n}q{q}", n, 1, q, float(s), "balanced", det_at(xs, w, pts)))

for n, q, pts in [(2, R(0), P2), (2, R(1), P2), (2, R(1, 2), P2), (3, R(1), P3)]:
    a = R(2 * n) / (n - q)
    c = (a**n * (a - 1)) ** (-1 / (n - q))
    xs = sp.symbols(f"x0:{n}", real=True)
    w = c * sp.sqrt(sum(x**2 for x in xs)) ** a
    cases.append((f"radial_n{n}q{str(q).replace('/', '_')}", n, 1, float(q), float(a), "balanced", det_at(xs, w, pts)))

print("#pragma once")
print("// Generated by tests/oracle/make_oracles.py. Do not edit.")
print("#include <array>")
print("#include <string_view>")
print("#include <vector>")
print("namespace oracle {")
print("struct DetSample { std::vector<double> x; double det; double value; };")
print("struct DetCase { std::string_view name; int n, k; double q, exponent; std::string_view rule; std::vector<DetSample> samples; };")
print("inline const std::vector<DetCase>& det_cases() {")
print("  static const std::vector<DetCase> cases{")
for name, n, k, q, e, rule, samples in cases:
    body = ", ".join("{{" + ", ".join(p) + "}, " + f"{sp.Float(d, 20)}, {sp.Float(v, 20)}" + "}" for p, d, v in samples)
    print(f'      {{"{name}", {n}, {k}, {float(q)!r}, {float(e)!r}, "{rule}", {{{body}}}}},')
print("  };")
print("  return cases;")
print("}")
print("}  // namespace oracle")
