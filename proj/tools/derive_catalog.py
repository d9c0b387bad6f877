#!/usr/bin/env python3
"""Derive closed-form catalog truths symbolically and freeze them as C++ data.

Usage: python3 tools/derive_catalog.py > src/catalog_truths.inc

For each weighted manifold (g, log rho) this emits, as expression strings in
the coefficient grammar: the metric, the co-metric G = g^-1, the drift
b^j = d_i G^ij + G^ij d_i(log rho + 1/2 log det g), the Christoffel symbols,
the Ricci tensor of g and the covariant Hessian of log rho.
"""

import sympy as sp

X = sp.symbols("x1 x2 x3", real=True)


def weighted(name, n, metric, log_rho, box, chart, notes):
    return dict(name=name, n=n, metric=sp.Matrix(metric), log_rho=sp.sympify(log_rho),
                box=box, chart=chart, notes=notes)


def catalog():
    x1, x2, x3 = X
    phi = sp.Rational(3, 10) * sp.sin(x1) * sp.cos(x2)
    two_pi = 6.283185307179586
    return [
        weighted("euclidean2", 2, sp.eye(2), 0, [[-2, 2], [-2, 2]],
                 "R^2, global chart", "flat plane"),
        weighted("euclidean3", 3, sp.eye(3), 0, [[-2, 2], [-2, 2], [-2, 2]],
                 "R^3, global chart", "flat space"),
        weighted("sphere2_spherical", 2, sp.diag(1, sp.sin(x1) ** 2), 0,
                 [[0.2, 2.941592653589793], [-3.0, 3.0]],
                 "x1 = polar angle in (0, pi), x2 = azimuth (periodic)",
                 "unit sphere, constant curvature +1"),
        weighted("sphere2_stereographic", 2,
                 sp.eye(2) * 4 / (1 + x1 ** 2 + x2 ** 2) ** 2, 0, [[-2, 2], [-2, 2]],
                 "stereographic projection from the north pole, (x1, x2) in R^2",
                 "unit sphere, constant curvature +1; x1 + i x2 = cot(theta/2) e^{i phi}"),
        weighted("hyperbolic_halfplane", 2, sp.eye(2) / x2 ** 2, 0, [[-2, 2], [0.5, 4]],
                 "upper half-plane x2 > 0", "Poincare half-plane, constant curvature -1"),
        weighted("ou_gaussian1", 1, sp.eye(1), -x1 ** 2 / 2, [[-3, 3]],
                 "R^1", "Ornstein-Uhlenbeck, standard Gaussian reference measure"),
        weighted("ou_gaussian2", 2, sp.eye(2), -(x1 ** 2 + x2 ** 2) / 2, [[-3, 3], [-3, 3]],
                 "R^2", "Ornstein-Uhlenbeck, standard Gaussian reference measure"),
        weighted("torus_conformal", 2, sp.eye(2) * sp.exp(2 * phi),
                 sp.Rational(1, 2) * sp.sin(x1) * sp.sin(x2), [[0, two_pi], [0, two_pi]],
                 "flat torus [0, 2pi)^2, periodic",
                 "conformal metric exp(2 phi) I, phi = 0.3 sin x1 cos x2; density exp(0.5 sin x1 sin x2)"),
    ]


def to_grammar(e):
    e = sp.simplify(e)
    e = e.replace(sp.cot, lambda a: sp.cos(a) / sp.sin(a))
    e = e.replace(sp.tan, lambda a: sp.sin(a) / sp.cos(a))
    e = e.replace(sp.csc, lambda a: 1 / sp.sin(a))
    e = e.replace(sp.sec, lambda a: 1 / sp.cos(a))
    s = sp.sstr(e).replace("**", "^")
    for bad in ("pi", "E", "I", "Abs", "sign", "cot", "tan(", "csc", "sec"):
        assert bad not in s.replace("sin", "").replace("exp", ""), (bad, s)
    return s


def derive(m):
    n = m["n"]
    xs = X[:n]
    g = m["metric"]
    psi = m["log_rho"]
    G = sp.simplify(g.inv())
    half_logdet = sp.log(sp.simplify(g.det())) / 2
    drift = [sp.simplify(sum(sp.diff(G[i, j], xs[i]) + G[i, j] * sp.diff(psi + half_logdet, xs[i])
                             for i in range(n))) for j in range(n)]
    chris = [[[sp.simplify(sum(G[k, l] * (sp.diff(g[j, l], xs[i]) + sp.diff(g[i, l], xs[j])
                                          - sp.diff(g[i, j], xs[l])) for l in range(n)) / 2)
               for j in range(n)] for i in range(n)] for k in range(n)]

    def riemann(l, i, j, k):
        r = sp.diff(chris[l][j][k], xs[i]) - sp.diff(chris[l][i][k], xs[j])
        r += sum(chris[l][i][p] * chris[p][j][k] - chris[l][j][p] * chris[p][i][k] for p in range(n))
        return r

    ricci = [[sp.simplify(sum(riemann(i, i, j, k) for i in range(n))) for k in range(n)] for j in range(n)]
    hess = [[sp.simplify(sp.diff(psi, xs[i], xs[j]) - sum(chris[k][i][j] * sp.diff(psi, xs[k]) for k in range(n)))
             for j in range(n)] for i in range(n)]
    return G, drift, chris, ricci, hess


def cxx_str(s):
    return '"' + s + '"'


def emit(m):
    n = m["n"]
    G, drift, chris, ricci, hess = derive(m)
    g = m["metric"]
    out = []
    out.append("    CatalogRecord{")
    out.append(f"        {cxx_str(m['name'])}, {n},")
    out.append(f"        {cxx_str(m['chart'])},")
    out.append(f"        {cxx_str(m['notes'])},")

    def mat(M):
        return "{" + ", ".join(cxx_str(to_grammar(M[i][j] if isinstance(M, list) else M[i, j]))
                               for i in range(n) for j in range(n)) + "}"

    out.append(f"        /*metric*/ {mat(g)},")
    out.append(f"        /*cometric*/ {mat(G)},")
    out.append("        /*drift*/ {" + ", ".join(cxx_str(to_grammar(d)) for d in drift) + "},")
    out.append(f"        /*log_rho*/ {cxx_str(to_grammar(m['log_rho']))},")
    out.append("        /*christoffels k,i,j*/ {" + ", ".join(
        cxx_str(to_grammar(chris[k][i][j])) for k in range(n) for i in range(n) for j in range(n)) + "},")
    out.append(f"        /*ricci*/ {mat(ricci)},")
    out.append(f"        /*hess_log_rho*/ {mat(hess)},")
    out.append("        /*box*/ {" + ", ".join(f"{{{float(lo)!r}, {float(hi)!r}}}" for lo, hi in m["box"]) + "},")
    out.append("    },")
    return "\n".join(out)


def main():
    print("// Generated by tools/derive_catalog.py. Do not edit by hand.")
    print("// clang-format off")
    for m in catalog():
        print(emit(m))
    print("// clang-format on")


if __name__ == "__main__":
    main()
