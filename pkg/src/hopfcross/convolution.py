"""The convolution algebra Hom_k(C, A) and its distinguished subalgebras.

Convolution inverses are exact: pointwise algebra inversion on grouplike
bases, a terminating geometric series on graded-connected ones.  Maps from
any other kind of coalgebra are refused rather than searched for.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .exact import (Element, KSPACE, LinMap, NotInvertible,
                    TruncationOverflow, apply_at, tensor)
from .actions import (AlgebraData, EntwiningData, ModuleAlgebraData,
                      ModuleCoalgebraData, braid_cross, example_entwining,
                      tensor_power_coalgebra)


class NotConvolutionInvertible(Exception):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


def unit_coalgebra(h) -> ModuleCoalgebraData:
    """The ground field as an H-module coalgebra (domain of 0-cochains)."""
    kk = KSPACE.tensor(KSPACE)
    comul = LinMap(KSPACE, kk, {(): Element.basis_vector(kk, ())})
    counit = LinMap(KSPACE, KSPACE, {(): Element.scalar(1)})
    Hk = h.space.tensor(KSPACE)
    s = LinMap.from_function(Hk, Hk, lambda t: Element.basis_vector(Hk, t))
    rho = LinMap.from_function(Hk, KSPACE,
                               lambda t: Element.scalar(h.counit_value(t[0])))
    varsigma = LinMap(kk, kk, {(): Element.basis_vector(kk, ())})
    return ModuleCoalgebraData(h, KSPACE, comul, counit, s, rho, varsigma,
                               kind="grouplike", name="k")


class ConvMap:
    """A linear map from a coalgebra to an algebra, under convolution."""

    def __init__(self, coalgebra: ModuleCoalgebraData, algebra: AlgebraData,
                 values: LinMap):
        self.coalgebra = coalgebra
        self.algebra = algebra
        self.values = values
        self._inverse = None

    @staticmethod
    def from_function(coalgebra, algebra, fn, partial=False):
        vals = LinMap.from_function(coalgebra.space, algebra.space,
                                    lambda lab: fn(lab), partial=partial)
        return ConvMap(coalgebra, algebra, vals)

    @staticmethod
    def from_table(coalgebra, algebra, table, default_zero=True):
        def fn(lab):
            if lab in table:
                return table[lab]
            if default_zero:
                return Element.zero(algebra.space)
            raise KeyError(lab)
        return ConvMap.from_function(coalgebra, algebra, fn)

    def __call__(self, label):
        col = self.values.columns.get(label)
        if col is None:
            if not self.coalgebra.space.contains(label):
                raise KeyError(label)
            raise TruncationOverflow(
                "cochain value at %r left the budget" % (label,))
        return col

    def apply(self, elt: Element) -> Element:
        return self.values.apply(elt)

    def __eq__(self, other):
        return (isinstance(other, ConvMap) and self.values == other.values)

    def __add__(self, other):
        keys = self.values.columns.keys() & other.values.columns.keys()
        return ConvMap(self.coalgebra, self.algebra, LinMap(
            self.values.domain, self.values.codomain,
            {lab: self.values.columns[lab] + other.values.columns[lab]
             for lab in keys}))

    def __rmul__(self, scalar):
        return ConvMap(self.coalgebra, self.algebra, LinMap(
            self.values.domain, self.values.codomain,
            {lab: scalar * col for lab, col in self.values.columns.items()}))

    def __sub__(self, other):
        return self + (-1) * other

    def is_zero(self):
        return all(col.is_zero() for col in self.values.columns.values())


def conv_equal(f: ConvMap, g: ConvMap):
    """Equality on every label defined on both sides; skips are counted.

    Missing columns mark values whose computation left the degree budget;
    they are reported, never silently treated as zero.
    """
    checked = skipped = 0
    for lab in f.coalgebra.space.basis():
        a = f.values.columns.get(lab)
        b = g.values.columns.get(lab)
        if a is None or b is None:
            skipped += 1
            continue
        checked += 1
        if a != b:
            return False, checked, skipped
    return True, checked, skipped


def conv_unit(coalgebra, algebra) -> ConvMap:
    """eta_A o eps_C, the convolution unit."""
    return ConvMap.from_function(
        coalgebra, algebra,
        lambda lab: coalgebra.counit_value(lab) * algebra.unit)


def convolve(f: ConvMap, g: ConvMap) -> ConvMap:
    if f.coalgebra is not g.coalgebra and f.coalgebra.space != g.coalgebra.space:
        raise ValueError("convolution requires a shared domain coalgebra")
    C = f.coalgebra
    nc = C.space.arity

    def column(lab):
        x = C.comul.columns[lab]
        x = apply_at(f.values, x, 0)
        x = apply_at(g.values, x, 1)
        return f.algebra.mul.apply(x)

    return ConvMap(C, f.algebra,
                   LinMap.from_function(C.space, f.algebra.space, column,
                                        partial=True))


def conv_power(f: ConvMap, n: int) -> ConvMap:
    out = conv_unit(f.coalgebra, f.algebra)
    for _ in range(n):
        out = convolve(out, f)
    return out


def conv_inverse(f: ConvMap) -> ConvMap:
    """Cached two-sided convolution inverse; strategy depends on the domain."""
    if f._inverse is not None:
        return f._inverse
    C, A = f.coalgebra, f.algebra
    if C.kind == "grouplike":
        cols = {}
        for lab in C.space.basis():
            try:
                cols[lab] = A.element_inverse(f(lab))
            except NotInvertible as exc:
                raise NotConvolutionInvertible(
                    "value at %r is not invertible in A" % (lab,), lab) from exc
        inv = ConvMap(C, A, LinMap(C.space, A.space, cols))
    elif C.kind == "graded_connected":
        degree0 = [lab for lab in C.space.basis() if C.space.degree(lab) == 0]
        if len(degree0) != 1:
            raise NotConvolutionInvertible("domain is not connected")
        top = max(C.space.degree(lab) for lab in C.space.basis())
        u = f(degree0[0])
        try:
            u_inv = A.element_inverse(u)
        except NotInvertible as exc:
            raise NotConvolutionInvertible(
                "degree-0 value is not invertible in A", degree0[0]) from exc
        g = ConvMap(C, A, LinMap(C.space, A.space, {
            lab: A.multiply(u_inv, col)
            for lab, col in f.values.columns.items()}))
        e = conv_unit(C, A)
        delta = e - g
        # (e - g) kills degree 0, so the geometric series stops at the budget
        acc, term = e, e
        for _ in range(top):
            term = convolve(term, delta)
            if term.is_zero():
                break
            acc = acc + term
        inv = ConvMap(C, A, LinMap(C.space, A.space, {
            lab: A.multiply(col, u_inv)
            for lab, col in acc.values.columns.items()}))
    else:
        raise NotConvolutionInvertible(
            "no inversion strategy for coalgebra kind %r" % C.kind)

    e = conv_unit(C, A)
    for side in (convolve(f, inv), convolve(inv, f)):
        for lab in C.space.basis():
            try:
                if side(lab) != e(lab):
                    raise NotConvolutionInvertible("inverse check failed", lab)
            except TruncationOverflow:
                continue
    f._inverse = inv
    inv._inverse = f
    return inv


# ---------------------------------------------------------------------------
# psi-compatibility and psi-centrality

def is_psi_compatible(f: ConvMap, ent: EntwiningData, budget=None,
                      witness=False):
    """psi o (C (x) f) = (f (x) C) o varsigma, exactly on every basis label."""
    C = ent.coalgebra
    nc = C.space.arity
    CC = C.space.tensor(C.space)
    for lab in CC.basis():
        if budget is not None and CC.degree(lab) > budget:
            continue
        x = Element.basis_vector(CC, lab)
        try:
            lhs = ent.psi.apply(apply_at(f.values, x, nc))
            rhs = apply_at(f.values, C.varsigma.apply(x), 0)
        except TruncationOverflow:
            continue
        if lhs != rhs:
            return (False, lab) if witness else False
    return (True, None) if witness else True


def is_s_compatible(f: ConvMap, mad: ModuleAlgebraData, budget=None):
    """The one-H form: s o (H (x) f) = (f (x) H) o c^1_n."""
    C = f.coalgebra
    n = C.space.arity
    c1n = braid_cross(1, n, mad.hopf)
    HC = mad.hopf.space.tensor(C.space)
    for lab in HC.basis():
        if budget is not None and HC.degree(lab) > budget:
            continue
        x = Element.basis_vector(HC, lab)
        try:
            lhs = mad.s.apply(apply_at(f.values, x, 1))
            rhs = apply_at(f.values, c1n.apply(x), 0)
        except TruncationOverflow:
            continue
        if lhs != rhs:
            return False
    return True


def is_psi_central(f: ConvMap, ent: EntwiningData, budget=None, witness=False):
    """mu_A o (A (x) f) o psi = mu_A o (f (x) A), exactly on every label."""
    C, A = ent.coalgebra, ent.algebra
    nc = C.space.arity
    CA = C.space.tensor(A.space)
    for lab in CA.basis():
        if budget is not None and CA.degree(lab) > budget:
            continue
        x = Element.basis_vector(CA, lab)
        try:
            lhs = A.mul.apply(apply_at(f.values, ent.psi.apply(x), 1))
            rhs = A.mul.apply(apply_at(f.values, x, 0))
        except TruncationOverflow:
            continue
        if lhs != rhs:
            return (False, lab) if witness else False
    return (True, None) if witness else True


def is_h_linear(f: ConvMap, mad: ModuleAlgebraData, rho_C: LinMap,
                budget=None):
    """f(h . x) = h . f(x) for the first-slot action on the domain."""
    C = f.coalgebra
    HC = mad.hopf.space.tensor(C.space)
    for lab in HC.basis():
        if budget is not None and HC.degree(lab) > budget:
            continue
        x = Element.basis_vector(HC, lab)
        try:
            lhs = f.values.apply(rho_C.apply(x))
            rhs = mad.rho.apply(apply_at(f.values, x, 1))
        except TruncationOverflow:
            continue
        if lhs != rhs:
            return False
    return True


def transfer_TAC(f: ConvMap) -> LinMap:
    """T(g)(c (x) a) = c_(1) (x) g(c_(2)) a; an algebra map to End(C (x) A)."""
    C, A = f.coalgebra, f.algebra
    nc = C.space.arity
    CA = C.space.tensor(A.space)

    def column(lab):
        x = Element.basis_vector(CA, lab)
        x = apply_at(C.comul, x, 0)
        x = apply_at(f.values, x, nc)
        return apply_at(A.mul, x, nc)

    return LinMap.from_function(CA, CA, column)


def transfer_TAC_inverse(G: LinMap, coalgebra, algebra) -> ConvMap:
    """(T^-1)(G)(c) = (eps (x) A)(G(c (x) 1))."""
    C, A = coalgebra, algebra
    nc = C.space.arity

    def fn(lab):
        x = tensor(Element.basis_vector(C.space, lab), A.unit)
        x = G.apply(x)
        return apply_at(C.counit, x, 0)

    return ConvMap.from_function(C, A, fn)


# ---------------------------------------------------------------------------
# Reg membership on tensor powers of H

class RegMembership:
    def __init__(self, compatible, central, h_linear, s_intertwining,
                 invertible):
        self.compatible = compatible
        self.central = central
        self.h_linear = h_linear
        self.s_intertwining = s_intertwining
        self.invertible = invertible

    @property
    def all_flags(self):
        return (self.compatible and self.central and self.h_linear
                and self.s_intertwining and self.invertible)

    def __repr__(self):
        return ("RegMembership(compatible=%s, central=%s, h_linear=%s, "
                "s_intertwining=%s, invertible=%s)"
                % (self.compatible, self.central, self.h_linear,
                   self.s_intertwining, self.invertible))


def reg_membership(f: ConvMap, mad: ModuleAlgebraData, n: int,
                   budget=None) -> RegMembership:
    ent = example_entwining(mad, n)
    compatible = is_psi_compatible(f, ent, budget=budget)
    central = is_psi_central(f, ent, budget=budget)
    s_int = is_s_compatible(f, mad, budget=budget)
    tp = tensor_power_coalgebra(mad.hopf, n)
    h_lin = is_h_linear(f, mad, tp.rho, budget=budget)
    try:
        conv_inverse(f)
        invertible = True
    except NotConvolutionInvertible:
        invertible = False
    return RegMembership(compatible, central, h_lin, s_int, invertible)


def iota(f: ConvMap, mad: ModuleAlgebraData) -> ConvMap:
    """iota_n: Reg^s_H(H^{n+1}, A) -> Reg^s(H^n, A): g(x) = f(1 (x) x)."""
    hopf = mad.hopf
    C_big = f.coalgebra
    n = C_big.space.arity - 1
    unit_atom = hopf.unit_label()
    C = tensor_power_coalgebra(hopf, n) if n >= 1 else unit_coalgebra(hopf)

    def fn(lab):
        return f((unit_atom,) + lab)

    return ConvMap.from_function(C, f.algebra, fn)


def iota_inverse(g: ConvMap, mad: ModuleAlgebraData) -> ConvMap:
    """The H-linear extension f(h0 (x) x) = h0 . g(x)."""
    hopf = mad.hopf
    n = g.coalgebra.space.arity
    C_big = tensor_power_coalgebra(hopf, n + 1)

    def fn(lab):
        return mad.act(Element.basis_vector(hopf.space, lab[:1]), g(lab[1:]))

    return ConvMap.from_function(C_big, g.algebra, fn)


# ---------------------------------------------------------------------------
# exact bases of the compatible / central subspaces (for property sampling)

def hom_psi_subspace(ent: EntwiningData, central=True, budget=None):
    """Basis of {f : C -> A} compatible with psi (and psi-central).

    Both conditions are linear in f, so the subspace is the nullspace of an
    exact rational system; returned as a list of ConvMaps.  f is constrained
    to vanish outside the stated budget window so every equation is exact.
    """
    from .exact import nullspace
    C, A = ent.coalgebra, ent.algebra
    nc = C.space.arity
    c_labels = [lab for lab in C.space.basis()
                if budget is None or C.space.degree(lab) <= budget]
    a_labels = [lab for lab in A.space.basis()
                if budget is None or A.space.degree(lab) <= budget]
    var = {(cl, al): i for i, (cl, al) in
           enumerate(itertools.product(c_labels, a_labels))}
    c_set = set(c_labels)
    rows = []

    def emit(eq):
        rows.extend(r for r in eq.values() if r)

    # compatibility: psi(c1 (x) f(c2)) = sum f(d1) (x) d2 over varsigma(c1,c2)
    CC = C.space.tensor(C.space)
    for lab in CC.basis():
        c1, c2 = lab[:nc], lab[nc:]
        if c1 not in c_set or c2 not in c_set:
            continue
        eq = {}
        ok = True
        for al in a_labels:
            j = var[(c2, al)]
            try:
                img = ent.psi.apply(tensor(Element.basis_vector(C.space, c1),
                                           Element.basis_vector(A.space, al)))
            except TruncationOverflow:
                ok = False
                break
            for out, v in img.coeffs.items():
                eq.setdefault(out, {})[j] = eq.setdefault(out, {}).get(j, Fraction(0)) + v
        if not ok:
            continue
        for pair, w in C.varsigma.columns[lab].coeffs.items():
            d1, d2 = pair[:nc], pair[nc:]
            if d1 not in c_set:
                ok = False
                break
            for al in a_labels:
                j = var[(d1, al)]
                out = al + d2
                eq.setdefault(out, {})[j] = eq.setdefault(out, {}).get(j, Fraction(0)) - w
        if ok:
            emit(eq)

    if central:
        # centrality: sum a' f(c') over psi(c (x) a)  =  f(c) a
        for cl in c_labels:
            for aa in A.space.basis():
                eq = {}
                ok = True
                try:
                    mid = ent.psi.apply(tensor(
                        Element.basis_vector(C.space, cl),
                        Element.basis_vector(A.space, aa)))
                except TruncationOverflow:
                    continue
                for pair, w in mid.coeffs.items():
                    ap, cp = pair[0], pair[1:]
                    if cp not in c_set:
                        ok = False
                        break
                    for al in a_labels:
                        j = var[(cp, al)]
                        try:
                            prod = A.multiply(Element.basis_vector(A.space, (ap,)),
                                              Element.basis_vector(A.space, al))
                        except TruncationOverflow:
                            ok = False
                            break
                        for out, v in prod.coeffs.items():
                            eq.setdefault(out, {})[j] = \
                                eq.setdefault(out, {}).get(j, Fraction(0)) + w * v
                    if not ok:
                        break
                if not ok:
                    continue
                for al in a_labels:
                    j = var[(cl, al)]
                    try:
                        prod = A.multiply(Element.basis_vector(A.space, al),
                                          Element.basis_vector(A.space, aa))
                    except TruncationOverflow:
                        ok = False
                        break
                    for out, v in prod.coeffs.items():
                        eq.setdefault(out, {})[j] = \
                            eq.setdefault(out, {}).get(j, Fraction(0)) - v
                if ok:
                    emit(eq)

    basis = []
    for vec in nullspace(rows, len(var)):
        cols = {c2: Element.zero(A.space) for c2 in C.space.basis()}
        for (cl, al), j in var.items():
            if vec[j]:
                cols[cl] = cols[cl] + vec[j] * Element.basis_vector(A.space, al)
        basis.append(ConvMap(C, A, LinMap(C.space, A.space, cols)))
    return basis


def random_combination(rng, basis, span=4):
    """Random exact-rational combination of a subspace basis."""
    if not basis:
        raise ValueError("empty basis")
    out = Fraction(0) * basis[0]
    for b in basis:
        out = out + Fraction(rng.randint(-span, span),
                             rng.randint(1, span)) * b
    return out
