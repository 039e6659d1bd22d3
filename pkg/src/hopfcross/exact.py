"""Exact rational linear algebra over indexed tensor bases.

Every vector space in the engine is a tensor product of named "slots",
each slot carrying an ordered atomic basis and an optional degree per
atom.  Labels of a space are tuples of atoms, one per slot, so tensor
products flatten to concatenation and associativity is definitional.
All coefficients are `fractions.Fraction`; nothing here ever rounds.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

Q = Fraction


def rat(x) -> Fraction:
    """Coerce ints, 'p/q' strings and Fractions to an exact rational."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError("not an exact rational: %r" % (x,))


def rat_str(x: Fraction) -> str:
    return str(Fraction(x))


class SpaceMismatch(Exception):
    pass


class TruncationOverflow(Exception):
    """A graded computation left the degree budget; never truncated silently."""


class NotInvertible(Exception):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class Slot:
    """One tensor factor: a named ordered atomic basis, optionally graded."""

    def __init__(self, name, labels, degrees=None):
        self.name = name
        self.labels = tuple(labels)
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate labels in slot %s" % name)
        self._set = set(self.labels)
        self.degrees = dict(degrees) if degrees is not None else None

    def degree(self, label):
        if self.degrees is None:
            return 0
        return self.degrees[label]

    def labels_by_degree(self):
        table = {}
        for lab in self.labels:
            table.setdefault(self.degree(lab), []).append(lab)
        return table

    def __contains__(self, label):
        return label in self._set

    def __eq__(self, other):
        return (isinstance(other, Slot) and self.name == other.name
                and self.labels == other.labels)

    def __hash__(self):
        return hash((self.name, self.labels))

    def __repr__(self):
        return "Slot(%s, dim=%d)" % (self.name, len(self.labels))


def _merge_budget(a, b):
    if a is None:
        return b
    if b is None:
        return a
    if a != b:
        raise SpaceMismatch("incompatible budgets %s vs %s" % (a, b))
    return a


class Space:
    """Tensor product of slots with a shared total-degree budget."""

    def __init__(self, slots, budget=None):
        self.slots = tuple(slots)
        self.budget = budget
        self.arity = len(self.slots)

    def degree(self, label):
        return sum(s.degree(p) for s, p in zip(self.slots, label))

    def contains(self, label):
        if len(label) != self.arity:
            return False
        if not all(p in s for s, p in zip(self.slots, label)):
            return False
        return self.budget is None or self.degree(label) <= self.budget

    def basis(self):
        """Iterate all labels within budget, degree-aware (no blind product)."""
        if self.budget is None:
            yield from itertools.product(*[s.labels for s in self.slots])
            return

        tables = [s.labels_by_degree() for s in self.slots]

        def rec(i, remaining, prefix):
            if i == self.arity:
                yield tuple(prefix)
                return
            for d, labs in tables[i].items():
                if d > remaining:
                    continue
                for lab in labs:
                    prefix.append(lab)
                    yield from rec(i + 1, remaining - d, prefix)
                    prefix.pop()

        yield from rec(0, self.budget, [])

    def dim(self):
        return sum(1 for _ in self.basis())

    def tensor(self, other):
        return Space(self.slots + other.slots,
                     _merge_budget(self.budget, other.budget))

    def permuted(self, perm):
        """Space with slots reordered; perm[i] = index of the source slot."""
        return Space(tuple(self.slots[p] for p in perm), self.budget)

    def __eq__(self, other):
        return (isinstance(other, Space) and self.slots == other.slots
                and self.budget == other.budget)

    def __hash__(self):
        return hash((self.slots, self.budget))

    def __repr__(self):
        return "Space(%s, budget=%s)" % ("*".join(s.name for s in self.slots) or "k",
                                         self.budget)


#: the ground field as a 0-slot space; its single label is the empty tuple
KSPACE = Space(())


class Element:
    """Sparse vector: finite mapping label -> nonzero Fraction."""

    __slots__ = ("space", "coeffs")

    def __init__(self, space, coeffs, validate=True):
        self.space = space
        clean = {}
        for lab, c in coeffs.items():
            c = Fraction(c)
            if c == 0:
                continue
            if validate and not space.contains(lab):
                if space.budget is not None and len(lab) == space.arity \
                        and all(p in s for s, p in zip(space.slots, lab)) \
                        and space.degree(lab) > space.budget:
                    raise TruncationOverflow(
                        "label %r exceeds budget %s" % (lab, space.budget))
                raise SpaceMismatch("label %r not in %r" % (lab, space))
            clean[lab] = c
        self.coeffs = clean

    @staticmethod
    def zero(space):
        return Element(space, {}, validate=False)

    @staticmethod
    def basis_vector(space, label, coeff=1):
        return Element(space, {label: Fraction(coeff)})

    @staticmethod
    def scalar(value):
        return Element(KSPACE, {(): Fraction(value)})

    def is_zero(self):
        return not self.coeffs

    def items(self):
        return sorted(self.coeffs.items(), key=lambda kv: _label_key(kv[0]))

    def scalar_value(self):
        if self.space.arity != 0:
            raise SpaceMismatch("not a scalar element")
        return self.coeffs.get((), Fraction(0))

    def __add__(self, other):
        if self.space != other.space:
            raise SpaceMismatch("adding elements of different spaces")
        out = dict(self.coeffs)
        for lab, c in other.coeffs.items():
            s = out.get(lab, Fraction(0)) + c
            if s == 0:
                out.pop(lab, None)
            else:
                out[lab] = s
        return Element(self.space, out, validate=False)

    def __sub__(self, other):
        return self + (-1) * other

    def __rmul__(self, scalar):
        scalar = Fraction(scalar)
        if scalar == 0:
            return Element.zero(self.space)
        return Element(self.space,
                       {lab: scalar * c for lab, c in self.coeffs.items()},
                       validate=False)

    def __neg__(self):
        return (-1) * self

    def __eq__(self, other):
        return (isinstance(other, Element) and self.space == other.space
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.space, tuple(sorted(self.coeffs.items(),
                                              key=lambda kv: _label_key(kv[0])))))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        bits = []
        for lab, c in self.items():
            bits.append("%s*%s" % (c, "(" + ",".join(map(str, lab)) + ")"))
        return " + ".join(bits)


def _label_key(label):
    return tuple(repr(p) for p in label)


def tensor(a: Element, b: Element) -> Element:
    """Tensor of elements; raises TruncationOverflow past the budget."""
    space = a.space.tensor(b.space)
    out = {}
    budget = space.budget
    for la, ca in a.coeffs.items():
        for lb, cb in b.coeffs.items():
            lab = la + lb
            if budget is not None and space.degree(lab) > budget:
                raise TruncationOverflow(
                    "tensor label %r exceeds budget %s" % (lab, budget))
            out[lab] = out.get(lab, Fraction(0)) + ca * cb
    return Element(space, out, validate=False)


class LinMap:
    """Total linear map given by its columns on every basis label."""

    __slots__ = ("domain", "codomain", "columns")

    def __init__(self, domain, codomain, columns):
        self.domain = domain
        self.codomain = codomain
        self.columns = columns

    @staticmethod
    def from_function(domain, codomain, fn, partial=False):
        """Materialize columns eagerly.  With partial=True, columns whose
        computation leaves the budget are omitted; using them later raises
        TruncationOverflow (truncation is loud, never silent)."""
        cols = {}
        for lab in domain.basis():
            try:
                img = fn(lab)
            except TruncationOverflow:
                if partial:
                    continue
                raise
            if img.space != codomain:
                raise SpaceMismatch("column for %r lands in %r, expected %r"
                                    % (lab, img.space, codomain))
            cols[lab] = img
        return LinMap(domain, codomain, cols)

    @staticmethod
    def identity(space):
        return LinMap.from_function(space, space,
                                    lambda lab: Element.basis_vector(space, lab))

    def apply(self, elt: Element) -> Element:
        if elt.space != self.domain:
            raise SpaceMismatch("element not in domain")
        out = Element.zero(self.codomain)
        for lab, c in elt.coeffs.items():
            col = self.columns.get(lab)
            if col is None:
                raise TruncationOverflow("no column for label %r" % (lab,))
            out = out + c * col
        return out

    def __call__(self, elt):
        return self.apply(elt)

    def __eq__(self, other):
        return (isinstance(other, LinMap) and self.domain == other.domain
                and self.codomain == other.codomain
                and all(self.columns[l] == other.columns[l]
                        for l in self.columns)
                and self.columns.keys() == other.columns.keys())

    def __repr__(self):
        return "LinMap(%r -> %r)" % (self.domain, self.codomain)


def compose(f: LinMap, g: LinMap) -> LinMap:
    """f after g."""
    if g.codomain != f.domain:
        raise SpaceMismatch("compose: domain of f != codomain of g")
    cols = {lab: f.apply(col) for lab, col in g.columns.items()}
    return LinMap(g.domain, f.codomain, cols)


def tensor_maps(f: LinMap, g: LinMap) -> LinMap:
    dom = f.domain.tensor(g.domain)
    cod = f.codomain.tensor(g.codomain)

    def column(lab):
        la, lb = lab[:f.domain.arity], lab[f.domain.arity:]
        return tensor(f.columns[la], g.columns[lb])

    return LinMap.from_function(dom, cod, column)


def slot_permutation(space: Space, perm) -> LinMap:
    """The map sending slot perm[i] of the input to slot i of the output."""
    cod = space.permuted(perm)

    def column(lab):
        return Element.basis_vector(cod, tuple(lab[p] for p in perm))

    return LinMap.from_function(space, cod, column)


def apply_at(f: LinMap, elt: Element, at: int, codomain=None) -> Element:
    """Apply f to the slot range [at, at + f.domain.arity) of elt."""
    n = f.domain.arity
    sp = elt.space
    if codomain is None:
        codomain = Space(sp.slots[:at] + f.codomain.slots + sp.slots[at + n:],
                         sp.budget)
    out = {}
    for lab, c in elt.coeffs.items():
        pre, mid, post = lab[:at], lab[at:at + n], lab[at + n:]
        col = f.columns.get(mid)
        if col is None:
            raise TruncationOverflow("no column for %r" % (mid,))
        for img, ci in col.coeffs.items():
            new = pre + img + post
            if codomain.budget is not None and codomain.degree(new) > codomain.budget:
                raise TruncationOverflow("label %r exceeds budget" % (new,))
            v = out.get(new, Fraction(0)) + c * ci
            if v == 0:
                out.pop(new, None)
            else:
                out[new] = v
    return Element(codomain, out, validate=False)


# ---------------------------------------------------------------------------
# sparse exact row reduction

def rref(rows, ncols=None):
    """Reduced row echelon form of sparse rows (dicts col -> Fraction).

    Returns (reduced_rows, pivots) with pivots[i] the pivot column of row i.
    Input rows are not modified.
    """
    work = []
    for r in rows:
        clean = {c: v for c, v in r.items() if v != 0}
        if clean:
            work.append(clean)
    reduced = []
    pivots = []
    while work:
        piv = min(min(r) for r in work)
        keep = []
        lead = None
        for r in work:
            if min(r) == piv:
                if lead is None:
                    lead = r
                else:
                    factor = r[piv] / lead[piv]
                    _row_submul(r, lead, factor)
                    if r:
                        keep.append(r)
            else:
                keep.append(r)
        inv = 1 / lead[piv]
        lead = {c: v * inv for c, v in lead.items()}
        for r in reduced:
            if piv in r:
                _row_submul(r, lead, r[piv])
        reduced.append(lead)
        pivots.append(piv)
        work = keep
    order = sorted(range(len(pivots)), key=lambda i: pivots[i])
    return [reduced[i] for i in order], [pivots[i] for i in order]


def _row_submul(r, lead, factor):
    if factor == 0:
        return
    for c, v in lead.items():
        nv = r.get(c, Fraction(0)) - factor * v
        if nv == 0:
            r.pop(c, None)
        else:
            r[c] = nv


def nullspace(rows, ncols):
    """Basis of solutions x (dense lists) of the homogeneous system rows@x=0."""
    red, pivots = rref(rows)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * ncols
        vec[fc] = Fraction(1)
        for row, piv in zip(red, pivots):
            vec[piv] = -row.get(fc, Fraction(0))
        basis.append(vec)
    return basis


def solve(rows, ncols, rhs):
    """One solution of rows @ x = rhs, or None if inconsistent.

    rows are sparse dicts; rhs is a dense list aligned with rows.
    """
    aug = []
    for r, b in zip(rows, rhs):
        nr = dict(r)
        if b != 0:
            nr[ncols] = Fraction(b)
        aug.append(nr)
    red, pivots = rref(aug)
    sol = [Fraction(0)] * ncols
    for row, piv in zip(red, pivots):
        if piv == ncols:
            return None
        sol[piv] = row.get(ncols, Fraction(0))
    return sol


def kernel_image_quotient(f: LinMap):
    """Exact (kernel basis, image basis, cokernel representative labels)."""
    dom_labels = list(f.domain.basis())
    cod_labels = list(f.codomain.basis())
    cod_index = {lab: i for i, lab in enumerate(cod_labels)}

    # rows of the "equation" view: one row per codomain coordinate
    rows_by_cod = {}
    for j, dl in enumerate(dom_labels):
        for cl, v in f.columns[dl].coeffs.items():
            rows_by_cod.setdefault(cod_index[cl], {})[j] = v
    eq_rows = list(rows_by_cod.values())

    kernel = []
    for vec in nullspace(eq_rows, len(dom_labels)):
        kernel.append(Element(f.domain,
                              {dom_labels[j]: v for j, v in enumerate(vec) if v},
                              validate=False))

    # image: row-reduce the transposed columns
    img_rows = []
    for dl in dom_labels:
        col = f.columns[dl]
        if col.coeffs:
            img_rows.append({cod_index[cl]: v for cl, v in col.coeffs.items()})
    red, pivots = rref(img_rows)
    image = [Element(f.codomain,
                     {cod_labels[c]: v for c, v in row.items()},
                     validate=False)
             for row in red]
    pivot_set = set(pivots)
    coker = [cod_labels[i] for i in range(len(cod_labels)) if i not in pivot_set]

    assert len(kernel) + len(image) == len(dom_labels)
    return kernel, image, coker


def invert_linmap(f: LinMap) -> LinMap:
    """Inverse of a bijective map, solved exactly per degree block."""
    dom_labels = list(f.domain.basis())
    cod_labels = list(f.codomain.basis())
    if len(dom_labels) != len(cod_labels):
        raise NotInvertible("dimension mismatch %d vs %d"
                            % (len(dom_labels), len(cod_labels)))

    blocks = {}
    for lab in dom_labels:
        blocks.setdefault(f.domain.degree(lab), [[], []])[0].append(lab)
    for lab in cod_labels:
        blocks.setdefault(f.codomain.degree(lab), [[], []])[1].append(lab)

    inv_cols = {}
    for deg, (dls, cls) in sorted(blocks.items()):
        if len(dls) != len(cls):
            raise NotInvertible("degree-%s block is not square" % deg)
        n = len(dls)
        cidx = {lab: i for i, lab in enumerate(cls)}
        # Gauss-Jordan on the block, augmented with the identity
        mat = [[Fraction(0)] * (2 * n) for _ in range(n)]
        for j, dl in enumerate(dls):
            for cl, v in f.columns[dl].coeffs.items():
                if f.codomain.degree(cl) != deg:
                    raise NotInvertible("map does not preserve degree blocks")
                mat[cidx[cl]][j] = v
        for i in range(n):
            mat[i][n + i] = Fraction(1)
        for col in range(n):
            piv = next((r for r in range(col, n) if mat[r][col] != 0), None)
            if piv is None:
                wit = _kernel_witness(f, dls, cls)
                raise NotInvertible("singular block at degree %s" % deg, wit)
            mat[col], mat[piv] = mat[piv], mat[col]
            pv = mat[col][col]
            mat[col] = [x / pv for x in mat[col]]
            for r in range(n):
                if r != col and mat[r][col] != 0:
                    fac = mat[r][col]
                    mat[r] = [a - fac * b for a, b in zip(mat[r], mat[col])]
        for i, cl in enumerate(cls):
            inv_cols[cl] = Element(f.domain,
                                   {dls[j]: mat[j][n + i] for j in range(n)
                                    if mat[j][n + i] != 0},
                                   validate=False)
    return LinMap(f.codomain, f.domain, inv_cols)


def _kernel_witness(f, dls, cls):
    cidx = {lab: i for i, lab in enumerate(cls)}
    rows_by_cod = {}
    for j, dl in enumerate(dls):
        for cl, v in f.columns[dl].coeffs.items():
            rows_by_cod.setdefault(cidx[cl], {})[j] = v
    null = nullspace(list(rows_by_cod.values()), len(dls))
    if not null:
        return None
    vec = null[0]
    return Element(f.domain, {dls[j]: v for j, v in enumerate(vec) if v},
                   validate=False)
