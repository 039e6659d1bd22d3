"""Transpositions, braided module (co)algebras and entwining structures.

Builds the iterated braids c^m_n and sc_n by their defining recursions, the
module-coalgebra structure on tensor powers of H, the Aut(G)-graded
transposition of the group variant, and the two-variable polynomial action
on k[Y] with its validity analysis.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .exact import (Element, KSPACE, LinMap, NotInvertible, Slot, Space,
                    TruncationOverflow, apply_at, invert_linmap, rat,
                    slot_permutation, tensor)
from .hopf import (CheckResult, HopfData, Report, build_truncated_poly_hopf,
                   check_equal_on, GroupSpec)


class InvalidGradation(Exception):
    pass


class InvalidAction(Exception):
    def __init__(self, equation, msg=""):
        super().__init__("%s violated%s" % (equation, ": " + msg if msg else ""))
        self.equation = equation


class AlgebraData:
    """Plain associative unital algebra by structure constants."""

    def __init__(self, name, space, mul, unit):
        self.name = name
        self.space = space
        self.mul = mul
        self.unit = unit

    @staticmethod
    def from_table(name, labels, table, unit_label, degrees=None, budget=None):
        """table maps (a, b) to {label: coeff}; absent pairs multiply to 0."""
        slot = Slot(name, labels, degrees)
        space = Space((slot,), budget)
        sq = space.tensor(space)
        cols = {}
        for lab in sq.basis():
            a, b = lab
            cols[lab] = Element(space, {(m,): rat(c)
                                        for m, c in table.get((a, b), {}).items()})
        return AlgebraData(name, space, LinMap(sq, space, cols),
                           Element.basis_vector(space, (unit_label,)))

    def multiply(self, a, b):
        return self.mul.apply(tensor(a, b))

    def is_commutative(self):
        sq = self.space.tensor(self.space)
        flip = slot_permutation(sq, (1, 0))
        for lab in sq.basis():
            x = Element.basis_vector(sq, lab)
            if self.mul.apply(x) != self.mul.apply(flip.apply(x)):
                return False
        return True

    def element_inverse(self, a: Element) -> Element:
        """Two-sided inverse via an exact linear solve; loud on one-sided."""
        from .exact import solve
        labels = list(self.space.basis())
        idx = {l: i for i, l in enumerate(labels)}
        n = len(labels)
        unit_vec = {idx[m]: c for m, c in self.unit.coeffs.items()}
        left_cols = [self.multiply(a, Element.basis_vector(self.space, lab))
                     for lab in labels]
        rows_sys = {}
        for j, img in enumerate(left_cols):
            for m, c in img.coeffs.items():
                rows_sys.setdefault(idx[m], {})[j] = c
        all_rows = [rows_sys.get(i, {}) for i in range(n)]
        dense_rhs = [unit_vec.get(i, Fraction(0)) for i in range(n)]
        sol = solve(all_rows, n, dense_rhs)
        if sol is None:
            raise NotInvertible("element has no right inverse")
        cand = Element(self.space,
                       {labels[j]: v for j, v in enumerate(sol) if v},
                       validate=False)
        if self.multiply(cand, a) != self.unit:
            raise NotInvertible("element is only one-sided invertible")
        return cand


def poly_algebra(N, name="kY") -> AlgebraData:
    """k[Y] truncated at degree N; atoms are the exponents 0..N."""
    labels = list(range(N + 1))
    slot = Slot(name, labels, {n: n for n in labels})
    space = Space((slot,), budget=N)
    sq = space.tensor(space)
    cols = {}
    for lab in sq.basis():
        cols[lab] = Element.basis_vector(space, (lab[0] + lab[1],))
    return AlgebraData(name, space, LinMap(sq, space, cols),
                       Element.basis_vector(space, (0,)))


class Transposition:
    """Invertible s: H (x) V -> V (x) H, later subjected to the full suite."""

    def __init__(self, hopf: HopfData, target: AlgebraData, s: LinMap,
                 kind="algebra"):
        self.hopf = hopf
        self.target = target
        self.s = s
        self.kind = kind

    def inverse(self):
        return invert_linmap(self.s)


class ModuleAlgebraData:
    def __init__(self, hopf: HopfData, algebra: AlgebraData, s: LinMap,
                 rho: LinMap, name=""):
        self.hopf = hopf
        self.algebra = algebra
        self.s = s          # H (x) A -> A (x) H
        self.rho = rho      # H (x) A -> A
        self.name = name or "%s-module algebra %s" % (hopf.name, algebra.name)

    def act(self, h: Element, a: Element) -> Element:
        return self.rho.apply(tensor(h, a))

    def __repr__(self):
        return "ModuleAlgebraData(%s)" % self.name


class ModuleCoalgebraData:
    def __init__(self, hopf: HopfData, space, comul, counit, s, rho, varsigma,
                 kind="other", name=""):
        self.hopf = hopf
        self.space = space
        self.comul = comul          # C -> C (x) C
        self.counit = counit        # C -> k
        self.s = s                  # H (x) C -> C (x) H
        self.rho = rho              # H (x) C -> C
        self.varsigma = varsigma    # braid of C (c^n_n on tensor powers)
        self.kind = kind            # grouplike | graded_connected | other
        self.name = name

    def counit_value(self, label) -> Fraction:
        return self.counit.columns[label].scalar_value()


class EntwiningData:
    def __init__(self, coalgebra: ModuleCoalgebraData, algebra: AlgebraData,
                 psi: LinMap):
        self.coalgebra = coalgebra
        self.algebra = algebra
        self.psi = psi              # C (x) A -> A (x) C


# ---------------------------------------------------------------------------
# iterated braids (Notations 1.9)

def braid_cross(m: int, n: int, h: HopfData) -> LinMap:
    """c^m_n: H^m (x) H^n -> H^n (x) H^m by the defining recursion."""
    if m < 1 or n < 1:
        raise ValueError("arities must be >= 1")
    c = h.braid
    if m == 1 and n == 1:
        return c
    dom = h.power(m + n)
    cod = dom
    if m == 1:
        inner = braid_cross(1, n - 1, h)

        def col(lab):
            x = Element.basis_vector(dom, lab)
            x = apply_at(c, x, 0)
            return apply_at(inner, x, 1)
    else:
        tail = braid_cross(1, n, h)
        head = braid_cross(m - 1, n, h)

        def col(lab):
            x = Element.basis_vector(dom, lab)
            x = apply_at(tail, x, m - 1)
            return apply_at(head, x, 0)

    return LinMap.from_function(dom, cod, col)


def braid_shuffle(n: int, h: HopfData) -> LinMap:
    """sc_n: H^2n -> H^2n; carries the odd-position entries to the right."""
    if n < 1:
        raise ValueError("arity must be >= 1")
    if n == 1:
        return h.braid
    inner = braid_shuffle(n - 1, h)
    dom = h.power(2 * n)

    def col(lab):
        x = Element.basis_vector(dom, lab)
        for i in range(n):
            x = apply_at(h.braid, x, 2 * i)
        return apply_at(inner, x, 1)

    return LinMap.from_function(dom, dom, col)


def tensor_power_coalgebra(h: HopfData, n: int) -> ModuleCoalgebraData:
    """H^n as a left H-braided module coalgebra (Example-style structure)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    C = h.power(n)
    CC = C.tensor(C)

    if n == 1:
        comul = h.comul
    else:
        shuffle = braid_shuffle(n - 1, h)

        def comul_col(lab):
            x = Element.basis_vector(C, lab)
            for i in range(n - 1, -1, -1):
                x = apply_at(h.comul, x, i)
            return apply_at(shuffle, x, 1)

        comul = LinMap.from_function(C, CC, comul_col)

    def counit_col(lab):
        v = Fraction(1)
        for atom in lab:
            v *= h.counit_value(atom)
        return Element.scalar(v)

    counit = LinMap.from_function(C, KSPACE, counit_col)

    s = braid_cross(1, n, h)

    HC = h.space.tensor(C)

    def rho_col(lab):
        x = Element.basis_vector(HC, lab)
        return apply_at(h.mul, x, 0)

    rho = LinMap.from_function(HC, C, rho_col)
    varsigma = braid_cross(n, n, h)

    graded = any(s_.degrees for s_ in h.space.slots)
    kind = "graded_connected" if graded else "grouplike"
    if not graded:
        # grouplike only when every basis atom really is grouplike
        for atom in h.space.slots[0].labels:
            x = Element.basis_vector(h.space, (atom,))
            if h.comul.apply(x) != tensor(x, x):
                kind = "other"
                break
    return ModuleCoalgebraData(h, C, comul, counit, s, rho, varsigma,
                               kind=kind, name="%s^%d" % (h.name, n))


# ---------------------------------------------------------------------------
# verification suites

def verify_transposition(h: HopfData, target: AlgebraData, s: LinMap,
                         report=None, budget=None, coalgebra=None) -> Report:
    """Braided-space + braid + algebra (or coalgebra) compatibility of s."""
    report = report if report is not None else Report("transposition")
    H, V = h.space, target.space if coalgebra is None else coalgebra.space
    mul, comul, counit, c = h.mul, h.comul, h.counit, h.braid
    nc = V.arity
    HV = H.tensor(V)
    HHV = H.tensor(HV)

    def within(space):
        if budget is None:
            return space.basis()
        return (t for t in space.basis() if space.degree(t) <= budget)

    def e(space, lab):
        return Element.basis_vector(space, lab)

    check_equal_on(report, "transposition.hopf_mul_compat", within(HHV),
                   lambda t: s.apply(apply_at(mul, e(HHV, t), 0)),
                   lambda t: apply_at(mul, apply_at(s, apply_at(s, e(HHV, t), 1), 0), nc))
    check_equal_on(report, "transposition.hopf_unit_compat", within(V),
                   lambda t: s.apply(tensor(h.unit, e(V, t))),
                   lambda t: tensor(e(V, t), h.unit))
    check_equal_on(report, "transposition.hopf_comul_compat", within(HV),
                   lambda t: apply_at(comul, s.apply(e(HV, t)), nc),
                   lambda t: apply_at(s, apply_at(s, apply_at(comul, e(HV, t), 0), 1), 0))
    check_equal_on(report, "transposition.hopf_counit_compat", within(HV),
                   lambda t: apply_at(counit, s.apply(e(HV, t)), nc),
                   lambda t: h.counit_value(t[0]) * e(V, t[1:]))
    check_equal_on(report, "transposition.braid_hexagon", within(HHV),
                   lambda t: apply_at(s, apply_at(s, apply_at(c, e(HHV, t), 0), 1), 0),
                   lambda t: apply_at(c, apply_at(s, apply_at(s, e(HHV, t), 1), 0), nc))

    if coalgebra is None:
        amul, aunit = target.mul, target.unit
        HVV = HV.tensor(V)
        check_equal_on(report, "transposition.target_mul_compat", within(HVV),
                       lambda t: s.apply(apply_at(amul, e(HVV, t), 1)),
                       lambda t: apply_at(amul, apply_at(s, apply_at(s, e(HVV, t), 0), 1), 0))
        check_equal_on(report, "transposition.target_unit_compat", within(H),
                       lambda t: s.apply(tensor(e(H, t), aunit)),
                       lambda t: tensor(aunit, e(H, t)))
    else:
        ccomul, ccounit = coalgebra.comul, coalgebra.counit
        check_equal_on(report, "transposition.target_comul_compat", within(HV),
                       lambda t: apply_at(ccomul, s.apply(e(HV, t)), 0),
                       lambda t: apply_at(s, apply_at(s, apply_at(ccomul, e(HV, t), 1), 0),
                                          V.arity))
        check_equal_on(report, "transposition.target_counit_compat", within(HV),
                       lambda t: apply_at(ccounit, s.apply(e(HV, t)), 0),
                       lambda t: coalgebra.counit_value(t[1:]) * e(H, t[:1]))

    res = CheckResult("transposition.bijective", checked=1)
    try:
        invert_linmap(s)
    except NotInvertible as exc:
        res.failures.append(str(exc))
    report.add(res)
    return report


def verify_module_algebra(d: ModuleAlgebraData, budget=None) -> Report:
    """Items (1)-(5) of the module-algebra characterization, plus the
    transposition suite for s."""
    report = Report("module algebra: %s" % d.name)
    h, A = d.hopf, d.algebra
    H, V = h.space, A.space
    rho, s = d.rho, d.s
    HV = H.tensor(V)
    HHV = H.tensor(HV)
    HVV = HV.tensor(V)

    def within(space):
        if budget is None:
            return space.basis()
        return (t for t in space.basis() if space.degree(t) <= budget)

    def e(space, lab):
        return Element.basis_vector(space, lab)

    check_equal_on(report, "module.unit_acts_trivially", within(V),
                   lambda t: rho.apply(tensor(h.unit, e(V, t))),
                   lambda t: e(V, t))
    check_equal_on(report, "module.action_associative", within(HHV),
                   lambda t: rho.apply(apply_at(rho, e(HHV, t), 1)),
                   lambda t: rho.apply(apply_at(h.mul, e(HHV, t), 0)))
    verify_transposition(h, A, s, report=report, budget=budget)
    check_equal_on(report, "module.item3_rho_transposition", within(HHV),
                   lambda t: s.apply(apply_at(rho, e(HHV, t), 1)),
                   lambda t: apply_at(rho, apply_at(s, apply_at(h.braid, e(HHV, t), 0), 1), 0))
    check_equal_on(report, "module.item4_braided_leibniz", within(HVV),
                   lambda t: rho.apply(apply_at(A.mul, e(HVV, t), 1)),
                   lambda t: _item4_rhs(d, e(HVV, t)))
    check_equal_on(report, "module.item5_unit_of_A", within(H),
                   lambda t: rho.apply(tensor(e(H, t), A.unit)),
                   lambda t: h.counit_value(t[0]) * A.unit)
    return report


def _item4_rhs(d: ModuleAlgebraData, x: Element) -> Element:
    # mu_A o (rho (x) rho) o (H (x) s (x) A) o (Delta (x) A (x) A)
    x = apply_at(d.hopf.comul, x, 0)
    x = apply_at(d.s, x, 1)
    x = apply_at(d.rho, x, 0)
    x = apply_at(d.rho, x, 1)
    return d.algebra.mul.apply(x)


def verify_module_coalgebra(d: ModuleCoalgebraData, budget=None,
                            sample=None) -> Report:
    """Items (1)-(5) of the module-coalgebra characterization."""
    report = Report("module coalgebra: %s" % d.name)
    h = d.hopf
    H, C = h.space, d.space
    rho, s = d.rho, d.s
    HC = H.tensor(C)
    HHC = H.tensor(HC)

    def within(space):
        labels = space.basis()
        if budget is not None:
            labels = (t for t in labels if space.degree(t) <= budget)
        if sample is not None:
            labels = itertools.islice(labels, sample)
        return labels

    def e(space, lab):
        return Element.basis_vector(space, lab)

    check_equal_on(report, "comodule.coassociativity", within(C),
                   lambda t: apply_at(d.comul, d.comul.apply(e(C, t)), 0),
                   lambda t: apply_at(d.comul, d.comul.apply(e(C, t)), C.arity))
    check_equal_on(report, "comodule.counit", within(C),
                   lambda t: apply_at(d.counit, d.comul.apply(e(C, t)), 0),
                   lambda t: e(C, t))
    check_equal_on(report, "module.unit_acts_trivially", within(C),
                   lambda t: rho.apply(tensor(h.unit, e(C, t))),
                   lambda t: e(C, t))
    check_equal_on(report, "module.action_associative", within(HHC),
                   lambda t: rho.apply(apply_at(rho, e(HHC, t), 1)),
                   lambda t: rho.apply(apply_at(h.mul, e(HHC, t), 0)))
    cop = type("CoalgView", (), {"space": C, "comul": d.comul,
                                 "counit": d.counit,
                                 "counit_value": d.counit_value})()
    verify_transposition(h, None, s, report=report, budget=budget,
                         coalgebra=cop)
    check_equal_on(report, "module.item3_rho_transposition", within(HHC),
                   lambda t: s.apply(apply_at(rho, e(HHC, t), 1)),
                   lambda t: apply_at(rho, apply_at(s, apply_at(h.braid, e(HHC, t), 0), 1), 0))
    check_equal_on(report, "module.item4_delta_of_action", within(HC),
                   lambda t: d.comul.apply(rho.apply(e(HC, t))),
                   lambda t: _coalg_item4_rhs(d, e(HC, t)))
    check_equal_on(report, "module.item5_counit_of_action", within(HC),
                   lambda t: d.counit.apply(rho.apply(e(HC, t))),
                   lambda t: Element.scalar(h.counit_value(t[0])
                                            * d.counit_value(t[1:])))
    return report


def _coalg_item4_rhs(d: ModuleCoalgebraData, x: Element) -> Element:
    # (rho (x) rho) o (H (x) s (x) C) o (Delta_H (x) Delta_C)
    nc = d.space.arity
    x = apply_at(d.comul, x, 1)
    x = apply_at(d.hopf.comul, x, 0)
    x = apply_at(d.s, x, 1)
    x = apply_at(d.rho, x, 0)
    return apply_at(d.rho, x, nc)


def verify_entwining(e_data: EntwiningData, budget=None, sample=None) -> Report:
    """Mixed compatibilities of psi and the braid hexagon with varsigma."""
    report = Report("entwining structure")
    C, A = e_data.coalgebra, e_data.algebra
    psi = e_data.psi
    CA = C.space.tensor(A.space)
    CCA = C.space.tensor(CA)
    CAA = CA.tensor(A.space)
    nc = C.space.arity

    def within(space):
        labels = space.basis()
        if budget is not None:
            labels = (t for t in labels if space.degree(t) <= budget)
        if sample is not None:
            labels = itertools.islice(labels, sample)
        return labels

    def e(space, lab):
        return Element.basis_vector(space, lab)

    check_equal_on(report, "entwining.counit_compat", within(CA),
                   lambda t: apply_at(C.counit, psi.apply(e(CA, t)), 1),
                   lambda t: C.counit_value(t[:nc]) * e(A.space, t[nc:]))
    check_equal_on(report, "entwining.comul_compat", within(CA),
                   lambda t: apply_at(C.comul, psi.apply(e(CA, t)), 1),
                   lambda t: apply_at(psi, apply_at(psi, apply_at(
                       C.comul, e(CA, t), 0), nc), 0))
    check_equal_on(report, "entwining.mul_compat", within(CAA),
                   lambda t: psi.apply(apply_at(A.mul, e(CAA, t), nc)),
                   lambda t: apply_at(A.mul, apply_at(psi, apply_at(
                       psi, e(CAA, t), 0), 1), 0))
    check_equal_on(report, "entwining.unit_compat", within(C.space),
                   lambda t: psi.apply(tensor(e(C.space, t), A.unit)),
                   lambda t: tensor(A.unit, e(C.space, t)))
    check_equal_on(report, "entwining.varsigma_hexagon", within(CCA),
                   lambda t: apply_at(C.varsigma, apply_at(psi, apply_at(
                       psi, e(CCA, t), nc), 0), 1),
                   lambda t: apply_at(psi, apply_at(psi, apply_at(
                       C.varsigma, e(CCA, t), 0), nc), 0))
    res = CheckResult("entwining.bijective", checked=1)
    try:
        invert_linmap(psi)
    except NotInvertible as exc:
        res.failures.append(str(exc))
    report.add(res)
    return report


def power_transposition(mad: ModuleAlgebraData, n: int) -> LinMap:
    """s^n: H^n (x) A -> A (x) H^n, s^n = (s^{n-1} (x) H) o (H^{n-1} (x) s)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n == 1:
        return mad.s
    prev = power_transposition(mad, n - 1)
    dom = mad.hopf.power(n).tensor(mad.algebra.space)

    def col(lab):
        x = Element.basis_vector(dom, lab)
        x = apply_at(mad.s, x, n - 1)
        return apply_at(prev, x, 0)

    return LinMap.from_function(dom, dom.permuted(
        (n,) + tuple(range(n))), col)


def example_entwining(mad: ModuleAlgebraData, n: int) -> EntwiningData:
    """(H^n, c^n_n, A, s^n): the canonical entwining of a module algebra."""
    coalg = tensor_power_coalgebra(mad.hopf, n)
    return EntwiningData(coalg, mad.algebra, power_transposition(mad, n))


# ---------------------------------------------------------------------------
# instance builders

def trivial_module_algebra(h: HopfData, algebra: AlgebraData,
                           name="") -> ModuleAlgebraData:
    """Flip transposition and the counit action h.a = eps(h)a."""
    H, V = h.space, algebra.space
    HV = H.tensor(V)

    s = slot_permutation(HV, (1, 0))
    rho = LinMap.from_function(
        HV, V, lambda t: h.counit_value(t[0]) * Element.basis_vector(V, t[1:]))
    return ModuleAlgebraData(h, algebra, s, rho,
                             name=name or "trivial %s on %s" % (h.name, algebra.name))


def action_module_algebra(h: HopfData, algebra: AlgebraData, action_table,
                          s: LinMap = None, name="") -> ModuleAlgebraData:
    """Action from a table (h_atom, a_atom) -> {a_label: coeff}; flip s by default."""
    H, V = h.space, algebra.space
    HV = H.tensor(V)
    if s is None:
        s = slot_permutation(HV, (1, 0))

    def rho_col(t):
        vals = action_table.get((t[0], t[1]))
        if vals is None:
            raise KeyError("action table missing (%r, %r)" % (t[0], t[1]))
        return Element(V, {(m,): rat(c) for m, c in vals.items()})

    rho = LinMap.from_function(HV, V, rho_col)
    return ModuleAlgebraData(h, algebra, s, rho, name=name)


def _auto_compose(f, g):
    return {x: f[g[x]] for x in g}


def build_graded_transposition(g: GroupSpec, algebra: AlgebraData,
                               grading, autos, hopf=None):
    """s(g (x) a) = a (x) zeta(g) for a homogeneous of degree zeta.

    grading maps each basis label of A to an automorphism name; autos maps
    names to permutation tables of G.  The gradation must be multiplicative
    for the opposite composition, or InvalidGradation is raised.
    """
    from .hopf import build_group_algebra
    h = hopf if hopf is not None else build_group_algebra(g)

    for name, table in autos.items():
        if set(table) != set(g.elements) or set(table.values()) != set(g.elements):
            raise InvalidGradation("table %s is not a bijection of G" % name)
        for a, b in itertools.product(g.elements, repeat=2):
            if table[g.mul(a, b)] != g.mul(table[a], table[b]):
                raise InvalidGradation("table %s is not an automorphism" % name)

    alabels = list(algebra.space.basis())
    for la in alabels:
        if grading.get(la[0]) not in autos:
            raise InvalidGradation("label %r has no automorphism assigned" % (la[0],))

    # A_zeta . A_xi must land in the component acting as xi o zeta
    for la, lb in itertools.product(alabels, repeat=2):
        za, zb = autos[grading[la[0]]], autos[grading[lb[0]]]
        want = _auto_compose(zb, za)
        prod = algebra.multiply(Element.basis_vector(algebra.space, la),
                                Element.basis_vector(algebra.space, lb))
        for m in prod.coeffs:
            if autos[grading[m[0]]] != want:
                raise InvalidGradation(
                    "product %r * %r leaves its gradation component"
                    % (la[0], lb[0]))

    HV = h.space.tensor(algebra.space)

    def s_col(t):
        zeta = autos[grading[t[1]]]
        return Element.basis_vector(HV.permuted((1, 0)), (t[1], zeta[t[0]]))

    s = LinMap.from_function(HV, HV.permuted((1, 0)), s_col)
    return Transposition(h, algebra, s)


def graded_module_algebra(g: GroupSpec, algebra: AlgebraData, grading, autos,
                          action_table=None, name="") -> ModuleAlgebraData:
    """Module algebra over k[G] with an Aut(G)-graded transposition."""
    trans = build_graded_transposition(g, algebra, grading, autos)
    h, s = trans.hopf, trans.s
    if action_table is None:
        action_table = {(ga, la): {la: 1} for ga in g.elements
                        for la in [l[0] for l in algebra.space.basis()]}
    mad = action_module_algebra(h, algebra, action_table, s=s, name=name)
    mad.grading = dict(grading)
    mad.autos = {k: dict(v) for k, v in autos.items()}
    mad.group = g
    return mad


# ---------------------------------------------------------------------------
# the two-variable polynomial action on k[Y]   (validity per the eq-analysis)

def _mat_mul(P, R):
    return [[sum(P[i][k] * R[k][j] for k in range(2)) for j in range(2)]
            for i in range(2)]

def _mat_pow(Qm, n):
    out = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]
    for _ in range(n):
        out = _mat_mul(out, Qm)
    return out

def _mat_eq(P, R):
    return all(P[i][j] == R[i][j] for i in range(2) for j in range(2))

IDENT2 = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)]]


def matrix_order(Qm, bound=6):
    """Order of a rational 2x2 matrix, or None if infinite.

    Rational 2x2 matrices of finite order have order in {1,2,3,4,6} (their
    eigenvalues are roots of degree <= 2 cyclotomic polynomials).
    """
    for n in (1, 2, 3, 4, 6):
        if n <= bound and _mat_eq(_mat_pow(Qm, n), IDENT2):
            return n
    return None


class PolyActionSpec:
    """Q and the beta coefficient lists defining the action on k[Y]."""

    def __init__(self, Qm, beta1, beta2):
        self.Q = [[rat(x) for x in row] for row in Qm]
        det = self.Q[0][0] * self.Q[1][1] - self.Q[0][1] * self.Q[1][0]
        if det == 0:
            raise InvalidAction("Q", "Q is not invertible")
        self.beta = [[rat(x) for x in beta1], [rat(x) for x in beta2]]

    def beta_support(self, l):
        return [u for u, c in enumerate(self.beta[l]) if c != 0]

    def qpartial(self, n):
        """Q^(n) = ide + Q + ... + Q^{n-1}."""
        out = [[Fraction(0), Fraction(0)], [Fraction(0), Fraction(0)]]
        P = IDENT2
        for _ in range(n):
            out = [[out[i][j] + P[i][j] for j in range(2)] for i in range(2)]
            P = _mat_mul(P, self.Q)
        return out


def check_poly_action_validity(spec: PolyActionSpec, n_check=8):
    """Raise InvalidAction with the violated equation identifier."""
    Qm = spec.Q
    is_ident = _mat_eq(Qm, IDENT2)
    support = sorted(set(spec.beta_support(0)) | set(spec.beta_support(1)))
    maxu = max(support, default=0)

    # the n = 1 reduction of the alpha/beta commutation: for every u >= -1,
    # Q^u = ide or both coefficient lists vanish at u+1
    for u in range(-1, maxu):
        qu_is_ident = is_ident if u == -1 else _mat_eq(_mat_pow(Qm, u), IDENT2)
        if not qu_is_ident:
            b1 = spec.beta[0][u + 1] if u + 1 < len(spec.beta[0]) else Fraction(0)
            b2 = spec.beta[1][u + 1] if u + 1 < len(spec.beta[1]) else Fraction(0)
            if b1 != 0 or b2 != 0:
                raise InvalidAction("eq11",
                                    "Q^%d != ide but beta coefficient %d nonzero"
                                    % (u, u + 1))

    # direct re-check of the full commutation family on small n (safety net)
    for n in range(1, n_check + 1):
        Qn = _mat_pow(Qm, n)
        Qp = spec.qpartial(n)
        for l in range(2):
            for u in range(-1, maxu):
                b1 = spec.beta[0][u + 1] if u + 1 < len(spec.beta[0]) else Fraction(0)
                b2 = spec.beta[1][u + 1] if u + 1 < len(spec.beta[1]) else Fraction(0)
                coeff = Qp[l][0] * b1 + Qp[l][1] * b2
                if coeff == 0:
                    continue
                Qu = _mat_pow(Qm, u) if u >= 0 else None
                qu_is_ident = is_ident if u == -1 else _mat_eq(Qu, IDENT2)
                if not qu_is_ident:
                    raise InvalidAction("eq10",
                                        "commutation fails at n=%d l=%d u=%d"
                                        % (n, l, u))

    # commutativity of the two beta operators
    if is_ident:
        rmax = len(spec.beta[0]) + len(spec.beta[1])
        for r in range(rmax + 1):
            total = Fraction(0)
            for u in range(r + 1):
                v = r - u
                b1 = spec.beta[0][u] if u < len(spec.beta[0]) else Fraction(0)
                b2 = spec.beta[1][v] if v < len(spec.beta[1]) else Fraction(0)
                total += (u - v) * b1 * b2
            if total != 0:
                raise InvalidAction("eq12", "beta operators do not commute (r=%d)" % r)
    else:
        m = matrix_order(Qm)
        if m is not None and m > 1:
            # diagonal of finite order: membership in Y k[Y^m] is syntactic
            for l in range(2):
                for u in spec.beta_support(l):
                    if (u - 1) % m != 0:
                        raise InvalidAction("eq11",
                                            "beta_%d support %d not 1 mod %d"
                                            % (l + 1, u, m))
            q1, q2 = Qm[0][0], Qm[1][1]
            if Qm[0][1] == 0 and Qm[1][0] == 0 and (q1 == 1) != (q2 == 1):
                # exactly one diagonal entry is 1: beta_other = 0 or beta_one linear
                lin, free = (0, 1) if q2 == 1 else (1, 0)
                if spec.beta_support(free) and \
                        any(u > 1 for u in spec.beta_support(lin)):
                    raise InvalidAction("eq13",
                                        "beta_%d nonlinear while beta_%d nonzero"
                                        % (lin + 1, free + 1))


def build_poly_action(Qm, beta1, beta2, N, validate=True,
                      name="") -> ModuleAlgebraData:
    """Module-algebra structure of truncated k[X1,X2] on truncated k[Y].

    The transposition is the multiplicative extension of the matrix action
    alpha(Y^n) = Q^n Y^n and the action extends beta on Y by the braided
    Leibniz rule; validity of the defining constraints is checked first.
    """
    spec = PolyActionSpec(Qm, beta1, beta2)
    if validate:
        check_poly_action_validity(spec, n_check=min(N, 8))

    h = build_truncated_poly_hopf(2, N)
    A = poly_algebra(N)
    H, V = h.space, A.space
    HV = H.tensor(V)
    VH = HV.permuted((1, 0))

    qn_cache = {0: IDENT2}

    def qpow(n):
        if n not in qn_cache:
            qn_cache[n] = _mat_mul(qn_cache[n - 1], spec.Q)
        return qn_cache[n]

    def s_col(t):
        (a, b), yn = t
        Qn = qpow(yn)
        out = {}
        # X1^a X2^b crosses Y^n: substitute X_i -> sum_j (Q^n)_{ij} X_j
        from math import comb
        for i in range(a + 1):
            for j in range(b + 1):
                coeff = (comb(a, i) * Qn[0][0] ** i * Qn[0][1] ** (a - i)
                         * comb(b, j) * Qn[1][0] ** j * Qn[1][1] ** (b - j))
                if coeff == 0:
                    continue
                mono = (i + j, a - i + b - j)
                key = (yn, mono)
                out[key] = out.get(key, Fraction(0)) + coeff
        return Element(VH, out, validate=False)

    s = LinMap.from_function(HV, VH, s_col)

    def beta_of_power(l, n):
        """beta_l(Y^n) as {exponent: coeff}; may leave the budget."""
        if n == 0:
            return {}
        Qp = spec.qpartial(n)
        out = {}
        for src in range(2):
            for u, c in enumerate(spec.beta[src]):
                coeff = Qp[l][src] * c
                if coeff == 0:
                    continue
                e_ = n - 1 + u
                out[e_] = out.get(e_, Fraction(0)) + coeff
        return {e_: c for e_, c in out.items() if c != 0}

    def rho_col(t):
        (a, b), yn = t
        vec = {yn: Fraction(1)}
        for l, times in ((1, b), (0, a)):
            for _ in range(times):
                nxt = {}
                for e_, c in vec.items():
                    for e2, c2 in beta_of_power(l, e_).items():
                        nxt[e2] = nxt.get(e2, Fraction(0)) + c * c2
                vec = {e_: c for e_, c in nxt.items() if c != 0}
        if any(e_ > N for e_ in vec):
            raise TruncationOverflow("action leaves the budget")
        return Element(V, {(e_,): c for e_, c in vec.items()}, validate=False)

    cols = {}
    for t in HV.basis():
        try:
            cols[t] = rho_col(t)
        except TruncationOverflow:
            continue    # partial column: using it raises, callers skip
    rho = LinMap(HV, V, cols)

    mad = ModuleAlgebraData(h, A, s, rho,
                            name=name or "k[X1,X2] on k[Y] (Q=%r)" % (Qm,))
    mad.poly_spec = spec
    mad.budget = N
    return mad
