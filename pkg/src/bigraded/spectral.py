"""Spectral sequence of the column filtration of the total complex.

For a bicomplex or twisted complex X over a field, the total complex is
filtered by the column index, F_m Tot_n = sum of the blocks with p <= m.
Approximate cycles

    Z^r_{p,q} = { x in F_p Tot_{p+q} : dx in F_{p-r} }

give the pages E^r_{p,q} = Z^r_{p,q} / (Z^{r-1}_{p-1,q+1} + d Z^{r-1}_{p+r-1,q-r+2})
with the differential induced by d.  Since the support is bounded and
concentrated in non-negative columns, the pages stabilize no later than
r = pmax + 1 and the stable page computes the homology of the total
complex degreewise.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .rings import RingSpec, UnsupportedRing
from .matrices import ExactMatrix
from .linalg import QuotientModule, coordinates_in, kernel_basis
from .chain import homology
from .twisted import TwistedComplex, embed, tot_layout, tot_twisted


@dataclass
class SpectralData:
    ring: RingSpec
    pages: dict  # r -> {(p, q): dimension}
    differentials: dict  # r -> {(p, q): ExactMatrix to (p-r, q+r-1)}
    stable_page: int
    einf: dict  # {(p, q): dimension}

    def page(self, r: int) -> dict:
        return self.pages[min(r, self.stable_page)]


def _layout_positions(layout):
    """Flat coordinate index ranges of each block of a total degree."""
    out = {}
    off = 0
    for (p, q, r) in layout:
        out[(p, q)] = (off, off + r)
        off += r
    return out, off


def _filtration_inclusion(ring, layout, level):
    """Columns: the standard basis vectors of the blocks with p <= level."""
    _, total = _layout_positions(layout)
    keep = []
    off = 0
    for (p, q, r) in layout:
        if p <= level:
            keep.extend(range(off, off + r))
        off += r
    z, o = ring.zero(), ring.one()
    rows = tuple(
        tuple(o if keep[j] == i else z for j in range(len(keep)))
        for i in range(total)
    )
    return ExactMatrix(ring, total, len(keep), rows)


def _quotient_projection(ring, layout, level):
    """Rows: the coordinates of the blocks with p > level."""
    return _filtration_inclusion(
        ring, [(-p, q, r) for (p, q, r) in layout], -(level + 1)
    ).transpose()


class _PageWorker:
    def __init__(self, xt: TwistedComplex):
        self.x = xt
        self.ring = xt.ring
        self.tot = tot_twisted(xt)
        self.layouts = {}
        self.z_cache = {}

    def layout(self, n):
        if n not in self.layouts:
            self.layouts[n] = tot_layout(self.x, n)
        return self.layouts[n]

    def z_basis(self, r, p, n) -> ExactMatrix:
        """Basis (in full total-degree-n coordinates) of the elements of
        filtration <= p whose boundary has filtration <= p - r."""
        key = (r, p, n)
        if key in self.z_cache:
            return self.z_cache[key]
        ring = self.ring
        layout = self.layout(n)
        total = sum(rr for _, _, rr in layout)
        if total == 0 or p < min((pp for pp, _, _ in layout), default=0):
            out = ExactMatrix.zero(ring, total, 0)
        else:
            incl = _filtration_inclusion(ring, layout, p)
            d = self.tot.diff(n)
            constraint = _quotient_projection(ring, self.layout(n - 1), p - r) @ (
                d @ incl
            )
            out = incl @ kernel_basis(constraint)
        self.z_cache[key] = out
        return out

    def e_term(self, r, p, q):
        """(basis of Z^r in full coordinates, quotient structure)."""
        n = p + q
        znum = self.z_basis(r, p, n)
        den = ExactMatrix.hstack(
            self.ring,
            [
                self.z_basis(r - 1, p - 1, n),
                self.tot.diff(n + 1) @ self.z_basis(r - 1, p + r - 1, n + 1),
            ],
            rows=znum.rows,
        )
        qm = QuotientModule(self.ring, znum.cols, coordinates_in(znum, den))
        return znum, qm


def pages(x, r_max: int | None = None) -> SpectralData:
    """All pages and differentials up to r_max (default: the stable
    page) for a bicomplex or twisted complex over a field."""
    xt = embed(x)
    if not xt.ring.is_field:
        raise UnsupportedRing("spectral pages need field coefficients")
    ring = xt.ring
    stable = xt.pmax + 1
    if r_max is None:
        r_max = stable
    worker = _PageWorker(xt)
    support = sorted(xt.ranks)
    page_tables = {}
    diff_tables = {}
    for r in range(1, max(r_max, stable) + 1):
        terms = {}
        for (p, q) in support:
            znum, qm = worker.e_term(r, p, q)
            if qm.rank:
                terms[(p, q)] = (znum, qm)
        page_tables[r] = {pq: t[1].rank for pq, t in terms.items()}
        diffs = {}
        for (p, q), (znum, qm) in terms.items():
            tgt = (p - r, q + r - 1)
            if tgt not in terms:
                continue
            reps = znum @ qm.reps
            img = worker.tot.diff(p + q) @ reps
            z_t, qm_t = terms[tgt]
            m = qm_t.project(coordinates_in(z_t, img))
            if not m.is_zero:
                diffs[(p, q)] = m
        diff_tables[r] = diffs
    einf = dict(page_tables[stable])
    keep = max(r_max, 1)
    return SpectralData(
        ring,
        {r: page_tables[r] for r in page_tables if r <= max(keep, stable)},
        {r: diff_tables[r] for r in diff_tables if r <= max(keep, stable)},
        stable,
        einf,
    )


def convergence_check(x) -> dict:
    """Compare the stable page with the homology of the total complex:
    for every total degree n the stable dimensions summed over p + q = n
    must equal dim H_n.  Returns {'ok': bool, 'table': {n: (sum, dim)}}."""
    xt = embed(x)
    if not xt.ring.is_field:
        raise UnsupportedRing("convergence check needs field coefficients")
    data = pages(xt)
    h = homology(tot_twisted(xt))
    degs = sorted(
        set(n for n, cls in h.items() if not cls.is_zero)
        | set(p + q for p, q in data.einf)
    )
    table = {}
    ok = True
    for n in degs:
        lhs = sum(d for (p, q), d in data.einf.items() if p + q == n)
        rhs = h[n].free_rank if n in h else 0
        table[n] = (lhs, rhs)
        ok = ok and lhs == rhs
    return {"ok": ok, "table": table}
