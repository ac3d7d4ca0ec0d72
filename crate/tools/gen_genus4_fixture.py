"""Generate models/canonical-genus4.json.

X is the canonical genus-4 curve V(x0*x3 - x1*x2, x0^3 + x1^3 + x2^3 + x3^3)
in P^3, with L = O(2) = 2K and W = <x0^2, x1^2, x2^2> (base-point free on X).

The model is X embedded by L: quadric_presented in the 9 coordinates of
H^0(L), with I2 the kernel of S^2 H^0(L) -> H^0(4K). The extra blocks are

  canonical_mult: W x H^0(K) -> H^0(K + L)            (the map mu)
  dual_complex:   W x H^0(O) -> H^0(L), W x H^0(L) -> H^0(2L)

Section spaces are quotients of the homogeneous coordinate ring; the basis of
each degree is the set of monomials that are not pivots of the ideal's
degree-k part in reduced row echelon form.

Usage: python3 tools/gen_genus4_fixture.py > models/canonical-genus4.json
"""

import itertools
import json

import sympy as sp

xs = sp.symbols("x0:4")
Q = xs[0] * xs[3] - xs[1] * xs[2]
C = xs[0] ** 3 + xs[1] ** 3 + xs[2] ** 3 + xs[3] ** 3


def monomials(k):
    if k == 0:
        return [sp.Integer(1)]
    return [sp.Mul(*c) for c in itertools.combinations_with_replacement(xs, k)]


def coords(f, k):
    poly = sp.Poly(sp.expand(f), *xs)
    return [poly.coeff_monomial(m) for m in monomials(k)]


class Quotient:
    """Degree-k part of k[x0..x3]/(Q, C)."""

    def __init__(self, k):
        rows = []
        if k >= 2:
            rows += [coords(Q * m, k) for m in monomials(k - 2)]
        if k >= 3:
            rows += [coords(C * m, k) for m in monomials(k - 3)]
        n = len(monomials(k))
        self.k = k
        if rows:
            rref, pivots = sp.Matrix(rows).rref()
            self.rref = rref[: len(pivots), :]
            self.pivots = list(pivots)
        else:
            self.rref, self.pivots = sp.zeros(0, n), []
        self.free = [c for c in range(n) if c not in self.pivots]
        self.basis = [monomials(k)[c] for c in self.free]

    def dim(self):
        return len(self.free)

    def project(self, f):
        v = sp.Matrix(coords(f, self.k))
        for r, c in enumerate(self.pivots):
            if v[c] != 0:
                v = v - v[c] * self.rref[r, :].T
        return [v[c] for c in self.free]


def rat(x):
    x = sp.Rational(x)
    return f"{x.p}/{x.q}"


def table(left, right, target, product):
    entries = []
    for i, a in enumerate(left):
        for j, b in enumerate(right):
            for k, c in enumerate(target.project(product(a, b))):
                if c != 0:
                    entries.append({"i": i, "j": j, "k": k, "c": rat(c)})
    return {"left_dim": len(left), "right_dim": len(right), "target_dim": target.dim(), "entries": entries}


def main():
    h0 = Quotient(0)
    h1 = Quotient(1)  # H^0(K)
    h2 = Quotient(2)  # H^0(L)
    h3 = Quotient(3)  # H^0(K + L)
    h4 = Quotient(4)  # H^0(2L)
    w = [xs[0] ** 2, xs[1] ** 2, xs[2] ** 2]
    n = h2.dim()

    # I2: kernel of S^2 H^0(L) -> H^0(2L), columns indexed by pairs i <= j
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    images = sp.Matrix([h4.project(h2.basis[i] * h2.basis[j]) for i, j in pairs]).T
    i2 = []
    for v in images.nullspace():
        v = v / sp.gcd(list(v)) if any(v) else v
        # Gram entries: a monomial y_i*y_j with i < j contributes half to each side
        i2.append([rat(c if i == j else c / 2) for (i, j), c in zip(pairs, v)])

    model = {
        "kind": "quadric_presented",
        "n_vars": n,
        "I2": i2,
        "canonical_mult": table(w, h1.basis, h3, lambda a, b: a * b),
        "dual_complex": {
            "low": table(w, h0.basis, h2, lambda a, b: a * b),
            "high": table(w, h2.basis, h4, lambda a, b: a * b),
        },
    }
    print(json.dumps(model, indent=1))


if __name__ == "__main__":
    main()
