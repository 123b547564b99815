"""Cartier-type structure maps on Artinian quotients and the mapping-cone
resolution they induce over the twisted ring R{F}.

A Cartier-type map on M is additive with phi(r^p m) = r phi(m).  On a
quotient A = R/(x1^a1, ..., xd^ad) every such map (valued in rank-`rank`
columns) is the descent of

    y |-> C(c[t][s] * (x1...xd)^((p-1)*a) * y)

where C is the digit-projection operator of the ring; the inner factor makes
the descent automatic, because C((xi^ai)^p h) = xi^ai C(h) pushes the ideal
into itself.
"""

from __future__ import annotations

import itertools
import random

import numpy as np

from .artinian import ArtinianAlgebra
from .koszul import KoszulComplex
from .linalg import (
    FpLinearMap,
    StructureError,
    artin_schreier_map,
    intersection_dim,
    kernel_basis,
    matrix_of_map,
    rank as mat_rank,
    solve,
    subquotient_dim,
)
from .poly import MultiPoly, PolySpace, monomials_box


def _boundary(S):
    """Wedge-basis boundary terms: (sign, dropped index, remaining tuple)."""
    return [((-1) ** idx, l, S[:idx] + S[idx + 1 :]) for idx, l in enumerate(S)]


def _digit_tuples(p, d):
    return list(itertools.product(range(p), repeat=d))


class _TupleBoxSpace:
    """Flat F_p coordinates for rank-tuples of reduced algebra elements."""

    def __init__(self, module):
        self.module = module
        self.aspace = module.algebra.space
        self.p = module.ring.field.p

    def dim(self):
        return self.module.rank * self.aspace.dim()

    def basis_elems(self):
        for s in range(self.module.rank):
            for b in self.aspace.basis_elems():
                m = list(self.module.zero())
                m[s] = b
                yield tuple(m)

    def coords(self, m):
        out = []
        for comp in m:
            out.extend(self.aspace.coords(comp))
        return out

    def from_coords(self, vec):
        n = self.aspace.dim()
        return tuple(
            self.aspace.from_coords(vec[s * n : (s + 1) * n]) for s in range(self.module.rank)
        )


class ArtinianCartierModule:
    """A = R/(x1^a1..xd^ad) to the power `rank`, with structure map

        phi(y)_t = reduce(C(c * cmatrix[t][s] * twist * y_s summed over s))

    where twist = prod_i xi^(ai*(p-1)).  c = 1 is the standard structure,
    c = 0 the zero one, any other scalar a rescaling; cmatrix couples the
    components of a higher-rank module.
    """

    def __init__(self, algebra, rank=1, c=None, cmatrix=None, check=True):
        self.algebra = algebra
        self.ring = algebra.ring
        self.rank = rank
        ring = self.ring
        if c is None:
            c = ring.one
        self.c = ring.coerce(c)
        if cmatrix is None:
            cmatrix = [[ring.one if s == t else ring.zero for s in range(rank)] for t in range(rank)]
        self.cmatrix = [[ring.coerce(v) for v in row] for row in cmatrix]
        if len(self.cmatrix) != rank or any(len(r) != rank for r in self.cmatrix):
            raise ValueError("cmatrix must be rank x rank")
        p = ring.field.p
        twist = ring.one
        for i, a in enumerate(algebra.exponents):
            twist = twist * ring.gens()[i] ** (a * (p - 1))
        self.twist_poly = twist
        self._space = _TupleBoxSpace(self)
        if check:
            self.structure_check()

    # -- carrier protocol --------------------------------------------------

    def zero(self):
        return (self.ring.zero,) * self.rank

    def add(self, a, b):
        return tuple(self.algebra.reduce(x + y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def scal(self, c, a):
        return tuple(self.algebra.reduce(x * c) for x in a)

    def act(self, r, a):
        return tuple(self.algebra.reduce(x * r) for x in a)

    def phi(self, a):
        out = []
        for t in range(self.rank):
            acc = self.ring.zero
            for s in range(self.rank):
                k = self.c * self.cmatrix[t][s]
                if k and a[s]:
                    acc = acc + k * self.twist_poly * a[s]
            out.append(self.algebra.reduce(self.ring.cartier(acc)))
        return tuple(out)

    def phi_iter(self, a, k):
        for _ in range(k):
            a = self.phi(a)
        return a

    def eq(self, a, b):
        return all(x == y for x, y in zip(a, b))

    def format(self, a):
        if self.rank == 1:
            return self.ring.format(a[0])
        return "(" + ", ".join(self.ring.format(x) for x in a) + ")"

    def space(self):
        return self._space

    def wrap(self, polys):
        if self.rank == 1 and not isinstance(polys, (tuple, list)):
            polys = (polys,)
        polys = tuple(self.algebra.reduce(self.ring.coerce(f)) for f in polys)
        if len(polys) != self.rank:
            raise ValueError("expected %d components" % self.rank)
        return polys

    def basis_gen(self, s=0):
        m = list(self.zero())
        m[s] = self.ring.one
        return tuple(m)

    def is_trivial(self):
        return not self.c

    def structure_check(self):
        """Spot-check additivity and the twist law phi(r^p y) = r phi(y)."""
        ring = self.ring
        probes = [ring.one] + list(ring.gens())
        basis = list(self._space.basis_elems())
        sample = basis[: min(len(basis), 6)]
        for y in sample:
            for z in sample[:2]:
                lhs = self.phi(self.add(y, z))
                rhs = self.add(self.phi(y), self.phi(z))
                if not self.eq(lhs, rhs):
                    raise StructureError("structure map is not additive")
            for r in probes:
                lhs = self.phi(self.act(r ** ring.field.p, y))
                rhs = self.act(r, self.phi(y))
                if not self.eq(lhs, rhs):
                    raise StructureError("structure map violates the p-th power twist law")

    def __repr__(self):
        return "ArtinianCartierModule(%r, rank=%d, c=%s)" % (
            self.algebra,
            self.rank,
            self.ring.format(self.c),
        )


def standard_module(algebra, rank=1):
    return ArtinianCartierModule(algebra, rank=rank)


def zero_structure_module(algebra, rank=1):
    return ArtinianCartierModule(algebra, rank=rank, c=0)


def scaled_module(algebra, lam, rank=1):
    return ArtinianCartierModule(algebra, rank=rank, c=lam)


def random_module(algebra, rank, seed):
    """A reproducible random structure: cmatrix entries are random reduced
    polynomials of the ambient box."""
    rng = random.Random(seed)
    ring = algebra.ring
    mons = algebra.space.mons
    field = ring.field

    def rand_poly():
        f = ring.zero
        for m in mons:
            if rng.random() < 0.5:
                coef = field.from_coords([rng.randrange(field.p) for _ in range(field.e)])
                f = f + ring.monomial(m, coef)
        return f

    cm = [[rand_poly() for _ in range(rank)] for _ in range(rank)]
    return ArtinianCartierModule(algebra, rank=rank, cmatrix=cm)


# -- lifting the structure map over the wedge resolution ---------------------


class KoszulCartierLift:
    """The diagonal lift of the structure map over the wedge resolution of
    A^rank: on the spot-j generator g . e_(S,s) it acts by

        (g . e_(S,s))  |->  sum_t C(kernel(S,t,s) * g) . e_(S,t)

    with kernel(S,t,s) = c * cmatrix[t][s] * prod_(i not in S) fi^(p-1).
    Each square against the wedge differential commutes exactly, which
    verify_squares checks symbolically on the digit monomials.
    """

    def __init__(self, module):
        self.module = module
        ring = module.ring
        self.ring = ring
        self.d = ring.d
        self.fs = [ring.gens()[i] ** a for i, a in enumerate(module.algebra.exponents)]
        # wedge-spot validation (regularity of the defining sequence)
        self.K = KoszulComplex(ring, self.fs)
        p = ring.field.p
        self._outside = {}
        for j in range(self.d + 1):
            for S in itertools.combinations(range(self.d), j):
                prod = ring.one
                for i in range(self.d):
                    if i not in S:
                        prod = prod * self.fs[i] ** (p - 1)
                self._outside[S] = prod

    def kernel(self, S, t, s):
        return self.module.c * self.module.cmatrix[t][s] * self._outside[tuple(S)]

    def apply(self, elem):
        """elem: dict (S, s) -> poly;  returns dict (S, t) -> poly."""
        ring = self.ring
        out = {}
        for (S, s), g in elem.items():
            for t in range(self.module.rank):
                v = ring.cartier(self.kernel(S, t, s) * g)
                if v:
                    key = (tuple(S), t)
                    out[key] = out.get(key, ring.zero) + v
        return {k: v for k, v in out.items() if v}

    def boundary(self, elem):
        """The wedge differential on dict (S, s) -> poly."""
        out = {}
        for (S, s), g in elem.items():
            for sign, l, T in _boundary(tuple(S)):
                v = self.fs[l] * g * sign
                if v:
                    key = (T, s)
                    out[key] = out.get(key, self.ring.zero) + v
        return {k: v for k, v in out.items() if v}

    def verify_squares(self):
        """Check boundary . lift == lift . boundary on every spot, generator
        and digit monomial.  Both sides are additive and satisfy the p-th
        power twist law, so agreeing on the digit monomials x^a, a in
        [0, p-1]^d, pins them down completely."""
        ring = self.ring
        p = ring.field.p
        for j in range(1, self.d + 1):
            for S in itertools.combinations(range(self.d), j):
                for s in range(self.module.rank):
                    for a in _digit_tuples(p, self.d):
                        g = ring.monomial(a, ring.field.one)
                        elem = {(S, s): g}
                        lhs = self.boundary(self.apply(elem))
                        rhs = self.apply(self.boundary(elem))
                        if lhs != rhs:
                            raise StructureError(
                                "lift square fails at spot %d, S=%r, digit %r" % (j, S, a)
                            )
        return True

    def top_is_plain(self):
        """At the full wedge the lift kernel is just c * cmatrix."""
        S = tuple(range(self.d))
        for t in range(self.module.rank):
            for s in range(self.module.rank):
                if self.kernel(S, t, s) != self.module.c * self.module.cmatrix[t][s]:
                    return False
        return True


# -- the mapping cone over R{F} ----------------------------------------------


class ConeElem:
    """An element of a cone spot: two parts, keyed (S, s, F-degree) -> poly.

    Part "C" carries the twisted copies (right action through one extra
    p-th power), part "D" the plain ones.
    """

    __slots__ = ("cone", "C", "D")

    def __init__(self, cone, C=None, D=None):
        self.cone = cone
        self.C = {k: v for k, v in (C or {}).items() if v}
        self.D = {k: v for k, v in (D or {}).items() if v}

    def _merge(self, mine, theirs):
        out = dict(mine)
        for k, v in theirs.items():
            cur = out.get(k)
            cur = v if cur is None else cur + v
            if cur:
                out[k] = cur
            else:
                out.pop(k, None)
        return out

    def __add__(self, other):
        return ConeElem(self.cone, self._merge(self.C, other.C), self._merge(self.D, other.D))

    def __neg__(self):
        return ConeElem(
            self.cone,
            {k: -v for k, v in self.C.items()},
            {k: -v for k, v in self.D.items()},
        )

    def __sub__(self, other):
        return self + (-other)

    def act_ring(self, r):
        from .skew import frob_power

        C = {}
        for (S, s, i), g in self.C.items():
            C[(S, s, i)] = g * frob_power(r, i + 1)
        D = {}
        for (S, s, i), g in self.D.items():
            D[(S, s, i)] = g * frob_power(r, i)
        return ConeElem(self.cone, C, D)

    def act_F(self, k=1):
        return ConeElem(
            self.cone,
            {(S, s, i + k): g for (S, s, i), g in self.C.items()},
            {(S, s, i + k): g for (S, s, i), g in self.D.items()},
        )

    def __bool__(self):
        return bool(self.C) or bool(self.D)

    def __eq__(self, other):
        return isinstance(other, ConeElem) and self.C == other.C and self.D == other.D

    def __repr__(self):
        if not self:
            return "0"
        bits = []
        for (S, s, i), g in sorted(self.C.items()):
            bits.append("[%s . e%r_%d]'(x)F^%d" % (self.cone.ring.format(g), list(S), s, i))
        for (S, s, i), g in sorted(self.D.items()):
            bits.append("[%s . e%r_%d](x)F^%d" % (self.cone.ring.format(g), list(S), s, i))
        return " + ".join(bits)


class ConeComplex:
    """The mapping cone gluing the twisted and plain wedge resolutions of M
    over R{F}.  Spot n is C_(n-1) (+) D_n; the differential sends

        (c, y)  |->  (-boundary(c), lift(c) - shift(c) + boundary(y))

    where shift is the F-degree bump.  Spots run 0..d+1.
    """

    def __init__(self, module):
        self.module = module
        self.ring = module.ring
        self.d = self.ring.d
        self.p = self.ring.field.p
        self.lift = KoszulCartierLift(module)
        self.fs = self.lift.fs
        self.length = self.d + 1

    def subsets(self, j):
        if j < 0 or j > self.d:
            return []
        return list(itertools.combinations(range(self.d), j))

    def generator_count(self, n):
        """Wedge-level generators at spot n (twisted + plain)."""
        from math import comb

        r = self.module.rank
        return r * (comb(self.d, n - 1) if 1 <= n <= self.d + 1 else 0) + r * (
            comb(self.d, n) if 0 <= n <= self.d else 0
        )

    def free_rank(self, n):
        """Rank over R{F}: the twisted part needs p^d digit generators."""
        from math import comb

        r = self.module.rank
        ctw = comb(self.d, n - 1) if 1 <= n <= self.d + 1 else 0
        cpl = comb(self.d, n) if 0 <= n <= self.d else 0
        return r * ctw * self.p**self.d + r * cpl

    def zero(self):
        return ConeElem(self)

    def elem(self, C=None, D=None):
        return ConeElem(self, C, D)

    def differential(self, n, z):
        """d_n: spot n -> spot n-1."""
        ring = self.ring
        out = self.zero()
        for (S, s, i), g in z.C.items():
            # -boundary into the twisted part
            C = {}
            for sign, l, T in _boundary(S):
                v = self.fs[l] * g * (-sign)
                if v:
                    C[(T, s, i)] = C.get((T, s, i), ring.zero) + v
            # the two-step leg into the plain part
            D = {}
            for t in range(self.module.rank):
                v = ring.cartier(self.lift.kernel(S, t, s) * g)
                if v:
                    D[(S, t, i)] = D.get((S, t, i), ring.zero) + v
            D[(S, s, i + 1)] = D.get((S, s, i + 1), ring.zero) - g
            out = out + ConeElem(self, C, D)
        for (S, s, i), g in z.D.items():
            D = {}
            for sign, l, T in _boundary(S):
                v = self.fs[l] * g * sign
                if v:
                    D[(T, s, i)] = D.get((T, s, i), ring.zero) + v
            out = out + ConeElem(self, {}, D)
        return out

    def augment(self, z):
        """Spot 0 -> M: g . e_s (x) F^i  |->  phi^i(class(g) . e_s)."""
        m = self.module.zero()
        for (S, s, i), g in z.D.items():
            v = list(self.module.zero())
            v[s] = self.module.algebra.reduce(g)
            m = self.module.add(m, self.module.phi_iter(tuple(v), i))
        return m

    def generators(self, n):
        """Right-module generators of spot n: digit monomials on the twisted
        part, plain unit coefficients on the other."""
        gens = []
        for S in self.subsets(n - 1):
            for s in range(self.module.rank):
                for a in _digit_tuples(self.p, self.d):
                    g = self.ring.monomial(a, self.ring.field.one)
                    gens.append((("C", S, s, a), ConeElem(self, {(S, s, 0): g}, {})))
        for S in self.subsets(n):
            for s in range(self.module.rank):
                gens.append((("D", S, s), ConeElem(self, {}, {(S, s, 0): self.ring.one})))
        return gens

    def d_squared_on_generators(self):
        """d . d = 0 on every right-module generator; with the differential
        right R{F}-linear this pins down d^2 = 0 everywhere."""
        for n in range(2, self.length + 1):
            for _, g in self.generators(n):
                if self.differential(n - 1, self.differential(n, g)):
                    return False
        for _, g in self.generators(1):
            img = self.augment(self.differential(1, g))
            if not self.module.eq(img, self.module.zero()):
                return False
        return True

    def right_linearity_check(self, seed=0, samples=4):
        """Spot-check d(z . r) = d(z) . r and d(z . F) = d(z) . F."""
        rng = random.Random(seed)
        ring = self.ring
        field = ring.field
        mons = monomials_box(self.d, (self.p,) * self.d)

        def rand_poly():
            f = ring.zero
            for m in mons:
                if rng.random() < 0.4:
                    f = f + ring.monomial(m, field.from_coords([rng.randrange(field.p) for _ in range(field.e)]))
            return f

        for n in range(1, self.length + 1):
            gens = self.generators(n)
            for _ in range(samples):
                key, z = gens[rng.randrange(len(gens))]
                z = z.act_F(rng.randrange(2))
                r = rand_poly()
                if self.differential(n, z.act_ring(r)) != self.differential(n, z).act_ring(r):
                    return False
                if self.differential(n, z.act_F()) != self.differential(n, z).act_F():
                    return False
        return True


class ConeWindowSpace:
    """Flat F_p coordinates for a cone spot restricted to coefficient
    exponents <= cap and F-degree <= dfmax."""

    def __init__(self, cone, n, cap, dfmax):
        self.cone = cone
        self.n = n
        self.cap = cap
        self.dfmax = dfmax
        ring = cone.ring
        # cap is the largest exponent allowed, inclusive
        self.pspace = PolySpace.box(ring, cap + 1)
        self.keys = []
        for S in cone.subsets(n - 1):
            for s in range(cone.module.rank):
                self.keys.append(("C", S, s))
        for S in cone.subsets(n):
            for s in range(cone.module.rank):
                self.keys.append(("D", S, s))
        self.p = ring.field.p

    def dim(self):
        return len(self.keys) * (self.dfmax + 1) * self.pspace.dim()

    def basis_elems(self):
        for key in self.keys:
            part, S, s = key
            for i in range(self.dfmax + 1):
                for b in self.pspace.basis_elems():
                    if part == "C":
                        yield ConeElem(self.cone, {(S, s, i): b}, {})
                    else:
                        yield ConeElem(self.cone, {}, {(S, s, i): b})

    def coords(self, z):
        pdim = self.pspace.dim()
        block = (self.dfmax + 1) * pdim
        vec = [0] * self.dim()
        for part, terms in (("C", z.C), ("D", z.D)):
            for (S, s, i), g in terms.items():
                try:
                    k = self.keys.index((part, S, s))
                except ValueError:
                    raise ValueError("cone term %r outside spot %d" % ((part, S, s), self.n))
                if i > self.dfmax:
                    raise ValueError("F-degree %d exceeds window %d" % (i, self.dfmax))
                c = self.pspace.coords(g)
                base = k * block + i * pdim
                for t, ct in enumerate(c):
                    vec[base + t] = ct
        return vec

    def from_coords(self, vec):
        pdim = self.pspace.dim()
        block = (self.dfmax + 1) * pdim
        C, D = {}, {}
        for k, (part, S, s) in enumerate(self.keys):
            for i in range(self.dfmax + 1):
                g = self.pspace.from_coords(vec[k * block + i * pdim : k * block + (i + 1) * pdim])
                if g:
                    (C if part == "C" else D)[(S, s, i)] = g
        return ConeElem(self.cone, C, D)


def _content_window(cone, n, elems, min_cap, min_df):
    cap, df = min_cap, min_df
    for z in elems:
        for terms in (z.C, z.D):
            for (S, s, i), g in terms.items():
                df = max(df, i)
                for exp in g.terms:
                    cap = max(cap, max(exp) if exp else 0)
    return ConeWindowSpace(cone, n, cap, df)


def _flatten_diff(cone, n, dom):
    """Flatten d_n from the window `dom`; codomain grows to fit content."""
    basis = list(dom.basis_elems())
    images = [cone.differential(n, z) for z in basis]
    cod = _content_window(cone, n - 1, images, dom.cap, dom.dfmax)
    cols = [cod.coords(z) for z in images]
    mat = (
        np.array(cols, dtype=np.int64).T % dom.p
        if cols
        else np.zeros((cod.dim(), 0), dtype=np.int64)
    )
    return FpLinearMap(mat, dom.p), cod


def cone_acyclicity_report(cone, cap, dfmax, max_growth=3):
    """Windowed exactness sweep of the cone over the augmentation.

    At each inner spot, every cycle supported in the (cap, dfmax) window must
    be a boundary from a grown window; at the top spot the differential must
    have no kernel in the window; at spot 0 the augmentation kernel must be
    hit.  Growth proceeds in steps of the largest defining exponent.
    """
    module = cone.module
    p = cone.p
    step = max(max(module.algebra.exponents), 1)
    report = {"cap": cap, "dfmax": dfmax, "spots": [], "passed": True}

    def hit_by_next(n, cycles_coords, cyc_space):
        """Can each cycle (coords in cyc_space) be written as d_(n+1) of an
        element from a grown window?"""
        for g in range(1, max_growth + 1):
            dom = ConeWindowSpace(cone, n + 1, cap + g * step, dfmax)
            basis = list(dom.basis_elems())
            images = [cone.differential(n + 1, z) for z in basis]
            cod = _content_window(cone, n, images, cyc_space.cap, cyc_space.dfmax)
            cols = [cod.coords(z) for z in images]
            A = (
                np.array(cols, dtype=np.int64).T % p
                if cols
                else np.zeros((cod.dim(), 0), dtype=np.int64)
            )
            ok = True
            for vec in cycles_coords:
                z = cyc_space.from_coords(list(vec))
                b = np.array(cod.coords(z), dtype=np.int64)
                if solve(A, b, p) is None:
                    ok = False
                    break
            if ok:
                return True, g
        return False, max_growth

    # top spot: no cycles at all
    top = cone.length
    dom = ConeWindowSpace(cone, top, cap, dfmax)
    dmap, _ = _flatten_diff(cone, top, dom)
    ker = kernel_basis(dmap.mat, p)
    entry = {"spot": top, "window_dim": dom.dim(), "cycles": int(ker.shape[0]), "ok": ker.shape[0] == 0}
    report["spots"].append(entry)
    report["passed"] = report["passed"] and entry["ok"]

    # inner spots
    for n in range(1, top):
        dom = ConeWindowSpace(cone, n, cap, dfmax)
        dmap, _ = _flatten_diff(cone, n, dom)
        ker = kernel_basis(dmap.mat, p)
        ok, used = (True, 0) if ker.shape[0] == 0 else hit_by_next(n, ker, dom)
        entry = {
            "spot": n,
            "window_dim": dom.dim(),
            "cycles": int(ker.shape[0]),
            "growth_used": used,
            "ok": ok,
        }
        report["spots"].append(entry)
        report["passed"] = report["passed"] and ok

    # spot 0: augmentation kernel
    dom = ConeWindowSpace(cone, 0, cap, dfmax)
    mspace = module.space()
    amap = matrix_of_map(dom.basis_elems(), cone.augment, mspace.coords, mspace.dim(), p)
    ker = kernel_basis(amap.mat, p)
    ok, used = (True, 0) if ker.shape[0] == 0 else hit_by_next(0, ker, dom)
    entry = {
        "spot": 0,
        "window_dim": dom.dim(),
        "cycles": int(ker.shape[0]),
        "growth_used": used,
        "ok": ok,
    }
    report["spots"].append(entry)
    report["passed"] = report["passed"] and ok
    report["spots"].sort(key=lambda ent: ent["spot"])
    return report


# -- value targets for the dual complex --------------------------------------


class ArtinianTarget:
    """Dual-complex values in an Artinian carrier: everything is exact."""

    exact = True

    def __init__(self, module):
        self.module = module
        self.ring = module.ring

    def zero(self):
        return self.module.zero()

    def add(self, a, b):
        return self.module.add(a, b)

    def act(self, r, v):
        return self.module.act(r, v)

    def phi(self, v):
        return self.module.phi(v)

    def space(self, cap=None):
        return self.module.space()

    def degree(self, v):
        return 0


class FreeTarget:
    """Dual-complex values in the polynomial ring itself, structure map
    C(cN * -).  Flat spaces are degree-capped boxes; callers must run the
    stability protocol."""

    exact = False

    def __init__(self, ring, cN=None):
        self.ring = ring
        self.cN = ring.one if cN is None else ring.coerce(cN)

    def zero(self):
        return self.ring.zero

    def add(self, a, b):
        return a + b

    def act(self, r, v):
        return r * v

    def phi(self, v):
        return self.ring.cartier(self.cN * v)

    def space(self, cap):
        # cap is the largest exponent allowed, inclusive
        return PolySpace.box(self.ring, cap + 1)

    def degree(self, v):
        return max((max(e) if e else 0 for e in v.terms), default=0)


class HomSpot:
    """Keys of the value tuple describing Hom(spot n, N): the twisted part
    contributes one key per (S, s, digit), the plain part one per (S, s)."""

    def __init__(self, cone, n):
        self.cone = cone
        self.n = n
        p = cone.p
        self.keys = []
        for S in cone.subsets(n - 1):
            for s in range(cone.module.rank):
                for a in _digit_tuples(p, cone.d):
                    self.keys.append(("C", S, s, a))
        for S in cone.subsets(n):
            for s in range(cone.module.rank):
                self.keys.append(("D", S, s))

    def flat(self, nspace):
        return _KeyedValueSpace(self.keys, nspace)


class _KeyedValueSpace:
    def __init__(self, keys, nspace):
        self.keys = keys
        self.nspace = nspace
        self.p = nspace.p

    def dim(self):
        return len(self.keys) * self.nspace.dim()

    def basis_funcs(self):
        for k in self.keys:
            for b in self.nspace.basis_elems():
                yield {k: b}

    def coords(self, fvals):
        n = self.nspace.dim()
        vec = [0] * self.dim()
        for key, v in fvals.items():
            k = self.keys.index(key)
            c = self.nspace.coords(v)
            for t, ct in enumerate(c):
                vec[k * n + t] = ct
        return vec


def _evaluate_hom(cone, target, fvals, z):
    """Evaluate a Hom element (finitely supported key -> value dict) on a
    cone element, using right R{F}-linearity:

        f(g . e' (x) F^i) = phiN^i( sum_b digit_b(g) * f(x^b . e') )
        f(g . e  (x) F^i) = phiN^i( g * f(e) )
    """
    ring = cone.ring
    acc = target.zero()
    for (S, s, i), g in z.C.items():
        inner = target.zero()
        for b, w in ring.frobenius_digits(g).items():
            v = fvals.get(("C", S, s, b))
            if v is not None and w:
                inner = target.add(inner, target.act(w, v))
        for _ in range(i):
            inner = target.phi(inner)
        acc = target.add(acc, inner)
    for (S, s, i), g in z.D.items():
        v = fvals.get(("D", S, s))
        if v is None:
            continue
        inner = target.act(g, v)
        for _ in range(i):
            inner = target.phi(inner)
        acc = target.add(acc, inner)
    return acc


def _dual_images(cone, target, n, dom_space):
    """Images of the dual differential Hom(spot n) -> Hom(spot n+1) on the
    flat basis of dom_space; each image is a key -> value dict."""
    gens = cone.generators(n + 1)
    bounded = [(key, cone.differential(n + 1, g)) for key, g in gens]
    images = []
    for fvals in dom_space.basis_funcs():
        img = {}
        for key, dz in bounded:
            v = _evaluate_hom(cone, target, fvals, dz)
            if not _is_zero_value(target, v):
                img[key] = v
        images.append(img)
    return images


def _is_zero_value(target, v):
    if target.exact:
        return target.module.eq(v, target.module.zero())
    return not v


def _value_degree(target, img):
    return max((target.degree(v) for v in img.values()), default=0)


def ext_dims_artinian(cone, target, jmax=None):
    """Exact Ext dimensions over R{F} against an Artinian target, one per
    spot 0..d+1 (and 0 beyond)."""
    jmax = cone.length if jmax is None else jmax
    nspace = target.space()
    p = nspace.p
    mats = []
    for n in range(0, cone.length + 1):
        dom = HomSpot(cone, n).flat(nspace)
        images = _dual_images(cone, target, n, dom)
        cod = HomSpot(cone, n + 1).flat(nspace)
        cols = [cod.coords(img) for img in images]
        mat = (
            np.array(cols, dtype=np.int64).T % p
            if cols and cod.dim()
            else np.zeros((cod.dim(), max(len(cols), 0)), dtype=np.int64)
        )
        mats.append(FpLinearMap(mat, p))
    dims = []
    for j in range(0, jmax + 1):
        if j > cone.length:
            dims.append(0)
            continue
        ker = kernel_basis(mats[j].mat, p)
        if j == 0:
            dims.append(int(ker.shape[0]))
            continue
        dims.append(subquotient_dim(mats[j - 1].image_rows(), ker, p))
    return dims


def ext_dim_free_target(cone, target, j, cap=2, gap=None, max_rounds=3):
    """Ext^j against the free target, computed on degree caps with a
    stability protocol.

    Cycles are drawn from functionals with values capped at L; boundaries
    from functionals capped at p*L + gap, since the dual differential routes
    through the structure map, which divides degrees by p — a preimage of a
    degree-L value may need degree about p*L.  The reported number is

        q(L) = dim(capped cycles) - dim(capped cycles meeting the boundary
                                        span from the grown cap)

    which is a lower bound for the true dimension at every L and reaches it
    once L exhausts a representative set.  Two consecutive cap levels
    agreeing is reported as stable; otherwise callers must treat the answer
    as inconclusive.
    """
    if j > cone.length:
        return {"dim": 0, "stable": True, "structural_zero": True, "caps": []}
    ring = cone.ring
    p = ring.field.p
    if gap is None:
        gap = p + sum(cone.module.algebra.exponents) + target.degree(target.cN)

    def flat_diff(nspot, dom, domcap):
        images = _dual_images(cone, target, nspot, dom)
        codcap = max([domcap] + [_value_degree(target, img) for img in images])
        cod = HomSpot(cone, nspot + 1).flat(target.space(codcap))
        cols = [cod.coords(img) for img in images]
        A = (
            np.array(cols, dtype=np.int64).T % p
            if cols and cod.dim()
            else np.zeros((cod.dim(), len(cols)), dtype=np.int64)
        )
        return A, images

    def q(L):
        dom = HomSpot(cone, j).flat(target.space(L))
        A, _ = flat_diff(j, dom, L)
        ker = kernel_basis(A, p)  # exact cycles with values capped at L
        if j == 0 or ker.shape[0] == 0:
            return int(ker.shape[0])
        big = p * L + gap
        dom_prev = HomSpot(cone, j - 1).flat(target.space(big))
        prev_images = _dual_images(cone, target, j - 1, dom_prev)
        ambcap = max([L] + [_value_degree(target, img) for img in prev_images])
        amb = HomSpot(cone, j).flat(target.space(ambcap))
        lift = _reembed_rows(ker, dom, amb)
        brows = [amb.coords(img) for img in prev_images]
        B = (
            np.array(brows, dtype=np.int64) % p
            if brows
            else np.zeros((0, amb.dim()), dtype=np.int64)
        )
        return int(lift.shape[0]) - intersection_dim(lift, B, p)

    caps = []
    prev = None
    for L in range(cap, cap + max_rounds + 1):
        val = q(L)
        caps.append({"cap": L, "dim": val})
        if prev is not None and prev == val:
            return {"dim": val, "stable": True, "structural_zero": False, "caps": caps}
        prev = val
    return {"dim": prev, "stable": False, "structural_zero": False, "caps": caps}


def _reembed_rows(rows, small, big):
    """Re-express flat vectors of a smaller value space inside a bigger one."""
    if rows.shape[0] == 0:
        return np.zeros((0, big.dim()), dtype=np.int64)
    out = []
    nsm = small.nspace
    for vec in rows:
        fvals = {}
        n = nsm.dim()
        for k, key in enumerate(small.keys):
            v = nsm.from_coords([int(x) for x in vec[k * n : (k + 1) * n]])
            if v:
                fvals[key] = v
        out.append(big.coords(fvals))
    return np.array(out, dtype=np.int64)


def ext_rf(module, target, j, **caps):
    """Ext^j over R{F} of the module against the target, via the cone."""
    cone = ConeComplex(module)
    if target.exact:
        dims = ext_dims_artinian(cone, target, jmax=j)
        return {"dim": dims[j], "stable": True, "structural_zero": j > cone.length, "caps": []}
    return ext_dim_free_target(cone, target, j, **caps)


# -- plain-ring Ext and the splitting comparison ------------------------------


def ext_r_dims(module, ntarget):
    """Ext over the plain ring via the wedge resolution, Artinian target."""
    cone = ConeComplex(module)
    ring = cone.ring
    p = cone.p
    nspace = ntarget.space()
    mats = []
    for jj in range(0, cone.d + 1):
        keys = [(tuple(S), s) for S in cone.subsets(jj) for s in range(module.rank)]
        cod_keys = [(tuple(S), s) for S in cone.subsets(jj + 1) for s in range(module.rank)]
        cols = []
        for key in keys:
            for b in nspace.basis_elems():
                img = {}
                for T, s in cod_keys:
                    acc = ntarget.zero()
                    for sign, l, U in _boundary(T):
                        if (U, s) == key:
                            v = ntarget.act(cone.fs[l] * sign, b)
                            acc = ntarget.add(acc, v)
                    if not _is_zero_value(ntarget, acc):
                        img[(T, s)] = acc
                vec = [0] * (len(cod_keys) * nspace.dim())
                nd = nspace.dim()
                for (T, s), v in img.items():
                    kk = cod_keys.index((T, s))
                    for t, ct in enumerate(nspace.coords(v)):
                        vec[kk * nd + t] = ct
                cols.append(vec)
        rowdim = len(cod_keys) * nspace.dim()
        mat = (
            np.array(cols, dtype=np.int64).T % p
            if cols and rowdim
            else np.zeros((rowdim, len(cols)), dtype=np.int64)
        )
        mats.append(FpLinearMap(mat, p))
    dims = []
    for jj in range(0, cone.d + 1):
        ker = kernel_basis(mats[jj].mat, p)
        if jj == 0:
            dims.append(int(ker.shape[0]))
        else:
            dims.append(subquotient_dim(mats[jj - 1].image_rows(), ker, p))
    return dims


def ext_r_twisted_dims(module, ntarget):
    """Ext over the plain ring of the p-th power relabeling of the module:
    the resolution spots are free on (digit, wedge) pairs and the
    differential pushes the wedge entries through digit decomposition."""
    cone = ConeComplex(module)
    ring = cone.ring
    p = cone.p
    nspace = ntarget.space()
    digits = _digit_tuples(p, cone.d)
    mats = []
    for jj in range(0, cone.d + 1):
        keys = [
            (tuple(S), s, a)
            for S in cone.subsets(jj)
            for s in range(module.rank)
            for a in digits
        ]
        cod_keys = [
            (tuple(S), s, a)
            for S in cone.subsets(jj + 1)
            for s in range(module.rank)
            for a in digits
        ]
        nd = nspace.dim()
        cols = []
        for key in keys:
            S0, s0, b0 = key
            for bval in nspace.basis_elems():
                img = {}
                for T, s, a in cod_keys:
                    if s != s0:
                        continue
                    acc = ntarget.zero()
                    for sign, l, U in _boundary(T):
                        if U != S0:
                            continue
                        # fl * x^a = sum_b digit_b^p x^b ; the x^(b0) leg acts by digit_(b0)
                        w = ring.frobenius_digits(cone.fs[l] * ring.monomial(a, ring.field.one)).get(b0)
                        if w:
                            acc = ntarget.add(acc, ntarget.act(w * sign, bval))
                    if not _is_zero_value(ntarget, acc):
                        img[(T, s, a)] = acc
                vec = [0] * (len(cod_keys) * nd)
                for ckey, v in img.items():
                    kk = cod_keys.index(ckey)
                    for t, ct in enumerate(nspace.coords(v)):
                        vec[kk * nd + t] = ct
                cols.append(vec)
        rowdim = len(cod_keys) * nd
        mat = (
            np.array(cols, dtype=np.int64).T % p
            if cols and rowdim
            else np.zeros((rowdim, len(cols)), dtype=np.int64)
        )
        mats.append(FpLinearMap(mat, p))
    dims = []
    for jj in range(0, cone.d + 1):
        ker = kernel_basis(mats[jj].mat, p)
        if jj == 0:
            dims.append(int(ker.shape[0]))
        else:
            dims.append(subquotient_dim(mats[jj - 1].image_rows(), ker, p))
    return dims


def ext_split_check(module, nmodule, jmax=None):
    """Compare the twisted-ring Ext dims with the direct sum of the two
    plain-ring contributions, spot by spot.  When both structure maps vanish
    the connecting leg of the dual differential is identically zero and the
    comparison must be an equality."""
    cone = ConeComplex(module)
    jmax = cone.length if jmax is None else jmax
    target = ArtinianTarget(nmodule)
    lhs = ext_dims_artinian(cone, target, jmax=jmax)
    plain = ext_r_dims(module, target)
    twisted = ext_r_twisted_dims(module, target)

    def at(arr, j):
        return arr[j] if 0 <= j < len(arr) else 0

    rhs = [at(plain, j) + at(twisted, j - 1) for j in range(jmax + 1)]
    cross_zero = None
    if module.is_trivial() and nmodule.is_trivial():
        cross_zero = _cross_block_is_zero(cone, target)
    return {
        "dims": lhs,
        "plain": plain,
        "twisted_shifted": [at(twisted, j - 1) for j in range(jmax + 1)],
        "sum": rhs,
        "split": lhs == rhs,
        "cross_block_zero": cross_zero,
    }


def _cross_block_is_zero(cone, target):
    """The connecting leg of the dual differential, evaluated on plain-part
    functionals at twisted-part generators, must vanish when both structure
    maps are zero."""
    nspace = target.space()
    for n in range(0, cone.length):
        dom = HomSpot(cone, n)
        plain_keys = [k for k in dom.keys if k[0] == "D"]
        gens = [(key, g) for key, g in cone.generators(n + 1) if key[0] == "C"]
        for key in plain_keys:
            for b in nspace.basis_elems():
                fvals = {key: b}
                for gkey, g in gens:
                    v = _evaluate_hom(cone, target, fvals, cone.differential(n + 1, g))
                    if not _is_zero_value(target, v):
                        return False
    return True


# -- the one-dimensional cokernel --------------------------------------------


def coker_formula(field):
    """dim over F_p of F_q modulo the image of x -> x^p - x.

    The kernel of that map is exactly F_p (solutions of x^p = x), so the
    image has codimension one; the formula e - rank is computed anyway and
    the surjective branch is unreachable for a finite field.
    """
    fmap = artin_schreier_map(
        _FieldAsSpace(field), _FieldAsSpace(field), lambda x: x**field.p, check=True
    )
    r = fmap.rank()
    if r >= field.e:
        # cannot happen: x^p - x kills all of F_p
        return 0
    return field.e - r


class _FieldAsSpace:
    def __init__(self, field):
        self.field = field
        self.p = field.p

    def dim(self):
        return self.field.e

    def basis_elems(self):
        one = self.field.one
        for i in range(self.field.e):
            vec = [0] * self.field.e
            vec[i] = 1
            yield self.field.from_coords(vec)

    def coords(self, x):
        return list(x.val)

    def from_coords(self, vec):
        return self.field.from_coords([int(v) for v in vec])


# -- transpose and the unitalization tower ------------------------------------


def unit_transpose_map(module):
    """tau(m) = (phi(x^a m))_a over the digit tuples, flattened over F_p."""
    ring = module.ring
    p = ring.field.p
    digits = _digit_tuples(p, ring.d)
    mspace = module.space()

    def tau(m):
        return tuple(module.phi(module.act(ring.monomial(a, ring.field.one), m)) for a in digits)

    def coords(tup):
        out = []
        for comp in tup:
            out.extend(mspace.coords(comp))
        return out

    fmap = matrix_of_map(mspace.basis_elems(), tau, coords, len(digits) * mspace.dim(), p)
    return fmap, tau, digits


def unit_transpose_report(module):
    fmap, tau, digits = unit_transpose_map(module)
    ker = kernel_basis(fmap.mat, fmap.p)
    return {
        "domain_dim": fmap.domain_dim,
        "codomain_dim": fmap.mat.shape[0],
        "rank": fmap.rank(),
        "injective": ker.shape[0] == 0,
        "surjective": fmap.rank() == fmap.mat.shape[0],
    }


def free_transpose_roundtrip(ring, cap):
    """For the rank-one free module with the plain digit projection, the
    transpose is digit reversal: tau(f)_a = digit_(p-1-a)(f), with inverse
    (m_a) -> sum_a m_a^p x^(p-1-a).  Checked exactly on the capped box."""
    p = ring.field.p
    digits = _digit_tuples(p, ring.d)
    rev = [tuple(p - 1 - ai for ai in a) for a in digits]

    def tau(f):
        return tuple(ring.cartier(ring.monomial(a, ring.field.one) * f) for a in digits)

    def inv(tup):
        acc = ring.zero
        for a, m in zip(digits, tup):
            acc = acc + m.frobenius() * ring.monomial(tuple(p - 1 - ai for ai in a), ring.field.one)
        return acc

    space = PolySpace.box(ring, cap)
    for f in space.basis_elems():
        t = tau(f)
        # digit reversal
        dig = ring.frobenius_digits(f)
        for a, v in zip(digits, t):
            want = dig.get(tuple(p - 1 - ai for ai in a), ring.zero)
            if v != want:
                return False
        if inv(t) != f:
            return False
    # the other composition, on tuples of capped polynomials
    small = PolySpace.box(ring, max(cap // p, 1))
    for k in range(len(digits)):
        for b in small.basis_elems():
            tup = tuple(b if i == k else ring.zero for i in range(len(digits)))
            if tau(inv(tup)) != tup:
                return False
    return True


def unitalize_report(module, levels):
    """The unitalization tower: level l holds tensors indexed by l digit
    tuples with entries in the module; the transition fans the transpose out
    along a fresh index.  Reports per-level dimensions and transition ranks
    (and their composite), all over F_p."""
    ring = module.ring
    p = ring.field.p
    digits = _digit_tuples(p, ring.d)
    mspace = module.space()
    mdim = mspace.dim()
    nd = len(digits)

    def level_dim(l):
        return (nd**l) * mdim

    def transition_matrix(l):
        """Flat matrix of t_l: level l -> level l+1."""
        _, tau, _ = unit_transpose_map(module)
        rows = level_dim(l + 1)
        cols = level_dim(l)
        mat = np.zeros((rows, cols), dtype=np.int64)
        # basis of level l: (index tuple, module basis vector)
        for it in range(nd**l):
            for mb, m in enumerate(mspace.basis_elems()):
                col = it * mdim + mb
                t = tau(m)
                for last, comp in enumerate(t):
                    c = mspace.coords(comp)
                    base = (it * nd + last) * mdim
                    for tt, ct in enumerate(c):
                        mat[base + tt, col] = ct
        return FpLinearMap(mat % p, p)

    report = {"level_dims": [level_dim(l) for l in range(levels + 1)], "transition_ranks": []}
    comp = None
    for l in range(levels):
        tm = transition_matrix(l)
        report["transition_ranks"].append(tm.rank())
        comp = tm if comp is None else tm.compose(comp)
    report["composite_rank"] = comp.rank() if comp is not None else level_dim(0)
    report["all_transitions_injective"] = all(
        r == report["level_dims"][l] for l, r in enumerate(report["transition_ranks"])
    )
    return report
