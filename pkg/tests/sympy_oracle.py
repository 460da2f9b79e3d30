"""Independent sympy re-derivations used to freeze reference values.

Nothing here imports the package: the invariants, the degree-two covariant
and the change of variables are restated from their polynomial definitions.
"""
import sympy as sp

X = sp.symbols("x1:6")


def t2_t3(x=X):
    x1, x2, x3, x4, x5 = x
    t2 = x1**2 + x2**2 + x3**2 + x4**2 + x5**2 + x1 * x4
    t3 = x1 * (x2**2 - x4**2 - x5**2) - x4 * (x1**2 - x2**2 + x3**2) + 2 * x2 * x3 * x5
    return sp.expand(t2), sp.expand(t3)


def f2(x=X):
    x1, x2, x3, x4, x5 = x
    return [
        (x1**2 + x2**2 + x3**2) - 2 * (x1 * x4 + x4**2 + x5**2),
        3 * (x1 * x2 + x2 * x4 + x3 * x5),
        3 * (x2 * x5 - x3 * x4),
        (x2**2 + x4**2 + x5**2) - 2 * (x1**2 + x3**2 + x1 * x4),
        3 * (x2 * x3 - x1 * x5),
    ]


def generators(x=X):
    """Shift fields F2, T2 x, T3 x, T2 F2, T2^2 x, T3 F2 in that order."""
    t2, t3 = t2_t3(x)
    xs = list(x)
    F = f2(x)
    return [F, [t2 * v for v in xs], [t3 * v for v in xs], [t2 * v for v in F],
            [t2**2 * v for v in xs], [t3 * v for v in F]]


def _trunc(p, n):
    return p.ring.from_dict({m: v for m, v in p.items() if m[0] + m[1] <= n})


def _mul(a, b, n):
    return _trunc(a * b, n)


def order6_regular(c):
    """Solve the order-6 reduction degree by degree on the line x2 = x3 = x5 = 0.

    The shift fields are tangent to that line, so composing there is exact.
    Returns the k's (with k4 = 0) and the pre-k5/k6 coefficients alpha, beta.
    """
    line = {X[1]: 0, X[2]: 0, X[4]: 0}
    ksym = sp.symbols("k1:7")
    R, *gens_r = sp.ring("u,v," + ",".join(str(k) for k in ksym), sp.QQ)
    u, v, ks = gens_r[0], gens_r[1], gens_r[2:]
    to_r = lambda e: R(sp.expand(e).xreplace(line).subs({X[0]: sp.Symbol("u"), X[3]: sp.Symbol("v")}))
    t2, t3 = t2_t3()
    T2, T3 = to_r(t2), to_r(t3)
    fields = generators()
    h1 = sum((k * to_r(g[0]) for k, g in zip(ks, fields)), R.zero)
    h4 = sum((k * to_r(g[3]) for k, g in zip(ks, fields)), R.zero)
    y1, y4 = u + h1, v + h4
    # T2 and T3 at the shifted point, truncated at degree 6 in (u, v)
    S2 = _trunc(y1**2 + y4**2 + y1 * y4, 6)
    S3 = _trunc(-_mul(_mul(y1, y4, 6), y1 + y4, 6), 6)
    c = [sp.Rational(x) for x in c]
    K = R
    val = (K(c[0]) * S2 + K(c[1]) * S3 + K(c[2]) * _mul(S2, S2, 6) + K(c[3]) * _mul(S2, S3, 6)
           + K(c[4]) * _mul(_mul(S2, S2, 6), S2, 6) + K(c[5]) * _mul(S3, S3, 6))
    basis = [T2, T3, T2**2, T2 * T3, T2**3, T3**2]
    rest = val
    total = {}
    for deg, members in ((2, [0]), (3, [1]), (4, [2]), (5, [3]), (6, [4, 5])):
        part = R.from_dict({m: v for m, v in rest.items() if m[0] + m[1] == deg})
        gs = sp.symbols(f"g0:{len(members)}")
        expr = part.as_expr() - sum(gi * basis[j].as_expr() for gi, j in zip(gs, members))
        eqs = sp.Poly(expr, sp.Symbol("u"), sp.Symbol("v")).coeffs()
        sol = sp.solve(eqs, gs, dict=True)
        if not sol:
            raise AssertionError(f"degree {deg} part is not invariant")
        for gi, j in zip(gs, members):
            total[j] = sp.expand(sol[0][gi])
    sol = {ksym[3]: 0}
    sol[ksym[0]] = sp.solve(total[1].subs(sol), ksym[0])[0]
    sol[ksym[1]] = sp.solve(total[2].subs(sol), ksym[1])[0]
    sol[ksym[2]] = sp.solve(total[3].subs(sol), ksym[2])[0]
    alpha = total[4].subs({**sol, ksym[4]: 0, ksym[5]: 0})
    beta = total[5].subs({**sol, ksym[4]: 0, ksym[5]: 0})
    rest56 = sp.solve([total[4].subs(sol) - 1, total[5].subs(sol)], [ksym[4], ksym[5]], dict=True)[0]
    sol.update(rest56)
    return {f"k{i + 1}": sp.Rational(sol[k]) for i, k in enumerate(ksym)}, alpha, beta
