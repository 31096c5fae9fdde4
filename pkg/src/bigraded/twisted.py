"""Twisted complexes: bigraded modules with a family of structure maps
d_i of bidegree (-i, i-1) satisfying the quadratic relations

    sum_{i+j=n} d_i d_j = 0   for every n >= 0.

Bicomplexes are the special case d_i = 0 for i >= 2 and chain complexes
the special case of a single column.  The module also builds the free
cell objects on one generator (the disc and its vertical boundary) from
a word basis with an explicit rewriting algorithm, identifies boundary
columns with simplicial cochain complexes, and provides totalisation,
tensor and Hom, vertical homology, and the quotient down to bicomplexes.
"""

from __future__ import annotations

from math import comb

from .rings import RingSpec, ZZ, BadParameter, UnsupportedRing
from .matrices import ExactMatrix
from .linalg import (
    QuotientModule,
    NoSolution,
    kernel_basis,
    image_basis,
    coordinates_in,
    rank as matrix_rank,
)
from .chain import ChainComplex


class NonSplitConstraint(Exception):
    """An equivariance constraint over Z does not split off freely."""


class TorsionQuotient(Exception):
    """A quotient over Z acquired torsion and cannot stay free."""


class TorsionCokernel(Exception):
    """A cokernel over Z acquired torsion and cannot stay free."""


class MismatchAt(Exception):
    """A claimed basis identification failed at a specific element."""

    def __init__(self, bidegree, element, detail=""):
        self.bidegree = bidegree
        self.element = element
        super().__init__(f"mismatch at {bidegree} on {element}: {detail}")


class TwistedComplex:
    """ranks maps bidegrees (p, q) with p >= 0 to positive ranks; ds maps
    each index i to a family of matrices d_i indexed by source bidegree."""

    def __init__(self, ring: RingSpec, ranks: dict, ds: dict, labels=None, check=True):
        self.ring = ring
        self.ranks = {pq: r for pq, r in ranks.items() if r}
        clean = {}
        for i, fam in ds.items():
            fam = {pq: m for pq, m in fam.items() if m is not None and not m.is_zero}
            if fam:
                clean[i] = fam
        self.ds = clean
        self.labels = labels
        if check:
            bad = validate_twisted(self)
            if bad:
                raise BadParameter("invalid twisted complex: " + "; ".join(bad))

    # -- access --------------------------------------------------------

    def rank(self, p: int, q: int) -> int:
        return self.ranks.get((p, q), 0)

    def d(self, i: int, p: int, q: int) -> ExactMatrix:
        m = self.ds.get(i, {}).get((p, q))
        if m is None:
            return ExactMatrix.zero(
                self.ring, self.rank(p - i, q + i - 1), self.rank(p, q)
            )
        return m

    def bidegrees(self):
        return sorted(self.ranks)

    @property
    def pmax(self) -> int:
        return max((p for p, _ in self.ranks), default=0)

    @property
    def is_zero(self) -> bool:
        return not self.ranks

    def total_rank(self) -> int:
        return sum(self.ranks.values())

    def indices(self):
        return sorted(self.ds)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TwistedComplex)
            and self.ring == other.ring
            and self.ranks == other.ranks
            and self.ds == other.ds
        )

    def __repr__(self) -> str:
        return "TwistedComplex(%s, %d bidegrees)" % (self.ring, len(self.ranks))

    def to_ring(self, ring: RingSpec) -> "TwistedComplex":
        return TwistedComplex(
            ring,
            dict(self.ranks),
            {i: {pq: m.to_ring(ring) for pq, m in fam.items()} for i, fam in self.ds.items()},
            labels=self.labels,
        )


def validate_twisted(x: TwistedComplex) -> list:
    """Empty list when valid, else a description of each violation."""
    bad = []
    for (p, q), r in x.ranks.items():
        if p < 0:
            bad.append(f"support at negative column ({p},{q})")
        if r < 0:
            bad.append(f"negative rank at ({p},{q})")
    for i, fam in x.ds.items():
        if i < 0:
            bad.append(f"negative structure index {i}")
            continue
        for (p, q), m in fam.items():
            if m.cols != x.rank(p, q) or m.rows != x.rank(p - i, q + i - 1):
                bad.append(f"d_{i} at ({p},{q}) has shape {m.rows}x{m.cols}")
    if bad:
        return bad
    nmax = x.pmax + 1
    for n in range(nmax + 1):
        for (p, q) in x.ranks:
            acc = None
            for j in range(n + 1):
                i = n - j
                term = x.d(i, p - j, q + j - 1) @ x.d(j, p, q)
                acc = term if acc is None else acc + term
            if acc is not None and not acc.is_zero:
                bad.append(f"relation n={n} fails at ({p},{q})")
    return bad


class TwistedMap:
    """Strict morphism: bidegree (0,0) components commuting with every d_i."""

    def __init__(self, source: TwistedComplex, target: TwistedComplex, f: dict, check=True):
        self.source = source
        self.target = target
        self.f = {pq: m for pq, m in f.items() if m is not None and not m.is_zero}
        if check:
            self._validate()

    def _validate(self):
        if self.source.ring != self.target.ring:
            raise BadParameter("map between different rings")
        for (p, q), m in self.f.items():
            if m.cols != self.source.rank(p, q) or m.rows != self.target.rank(p, q):
                raise BadParameter(f"component at ({p},{q}) has wrong shape")
        imax = max(self.source.pmax, self.target.pmax)
        for (p, q) in set(self.source.ranks) | set(self.target.ranks):
            for i in range(imax + 1):
                lhs = self.target.d(i, p, q) @ self.component(p, q)
                rhs = self.component(p - i, q + i - 1) @ self.source.d(i, p, q)
                if lhs != rhs:
                    raise BadParameter(f"map does not commute with d_{i} at ({p},{q})")

    def component(self, p: int, q: int) -> ExactMatrix:
        m = self.f.get((p, q))
        if m is None:
            return ExactMatrix.zero(
                self.source.ring, self.target.rank(p, q), self.source.rank(p, q)
            )
        return m

    @staticmethod
    def identity(x: TwistedComplex) -> "TwistedMap":
        return TwistedMap(
            x, x, {pq: ExactMatrix.identity(x.ring, r) for pq, r in x.ranks.items()}
        )

    @staticmethod
    def zero(source: TwistedComplex, target: TwistedComplex) -> "TwistedMap":
        return TwistedMap(source, target, {})

    def compose(self, other: "TwistedMap") -> "TwistedMap":
        """self after other."""
        return TwistedMap(
            other.source,
            self.target,
            {
                pq: self.component(*pq) @ other.component(*pq)
                for pq in other.source.ranks
            },
            check=False,
        )


# ---------------------------------------------------------------------------
# Words and rewriting
# ---------------------------------------------------------------------------

def normal_form(word: tuple) -> dict:
    """Rewrite a word of structure-map subscripts applied to the disc
    generator into the canonical basis.

    Returns a dict from basis words to integer coefficients.  The
    leftmost zero not in the last position is pushed right one step at a
    time via d_0 d_m = -sum_{a+b=m} d_a d_b (a >= 1); adjacent zeros kill
    the word (the m = 0 sum is empty)."""
    k = next((k for k, i in enumerate(word[:-1]) if i == 0), None)
    if k is None:
        return {word: 1}
    m = word[k + 1]
    out = {}
    for a in range(1, m + 1):
        sub = word[:k] + (a, m - a) + word[k + 2:]
        for w, c in normal_form(sub).items():
            out[w] = out.get(w, 0) - c
            if out[w] == 0:
                del out[w]
    return out


def _compositions(s: int, n: int):
    """Length-n sequences of positive integers summing to s, in
    lexicographic order."""
    if n < 0:
        return []
    if n == 0:
        return [()] if s == 0 else []
    if n == 1:
        return [(s,)] if s >= 1 else []
    out = []
    for first in range(1, s - n + 2):
        for rest in _compositions(s - first, n - 1):
            out.append((first,) + rest)
    return out


def disc_words(p: int, q: int) -> dict:
    """Canonical basis words of the free twisted cell on one generator in
    bidegree (p, q): per bidegree, all-positive words first, then the
    single-trailing-zero words, each block in lexicographic order."""
    table = {}
    for s in range(p + 1):
        for n in range(s + 2):
            words = _compositions(s, n) + [c + (0,) for c in _compositions(s, n - 1)]
            if words:
                table[(p - s, q + s - n)] = words
    return table


def boundary_words(p: int, q: int) -> dict:
    """All-positive basis words of the vertical boundary of the cell at
    (p, q); the generator y sits at (p, q-1)."""
    table = {}
    for s in range(p + 1):
        for n in range(s + 1):
            words = _compositions(s, n)
            if words:
                table[(p - s, q - 1 + s - n)] = words
    return table


def _matrix_from_action(ring, src_words, tgt_words, action):
    """Matrix of a linear map given by `action` on basis words (a dict
    word -> int coefficient per source word)."""
    index = {w: k for k, w in enumerate(tgt_words)}
    m = [[ring.zero()] * len(src_words) for _ in range(len(tgt_words))]
    for j, w in enumerate(src_words):
        for w2, c in action(w).items():
            m[index[w2]][j] = ring.from_int(c)
    return ExactMatrix.from_rows(ring, m) if tgt_words else ExactMatrix.zero(
        ring, 0, len(src_words)
    )


def twisted_disc(p: int, q: int, ring: RingSpec = ZZ) -> TwistedComplex:
    """Free twisted cell on one generator x in bidegree (p, q)."""
    if p < 0:
        raise BadParameter("column of the generator must be >= 0")
    words = disc_words(p, q)
    ranks = {pq: len(ws) for pq, ws in words.items()}
    ds = {}
    for i in range(p + 1):
        fam = {}
        for (pp, qq), ws in words.items():
            tgt = words.get((pp - i, qq + i - 1))
            if pp - i < 0 or tgt is None:
                continue
            fam[(pp, qq)] = _matrix_from_action(
                ring, ws, tgt, lambda w, i=i: normal_form((i,) + w)
            )
        if fam:
            ds[i] = fam
    return TwistedComplex(ring, ranks, ds, labels=words)


def twisted_boundary(p: int, q: int, ring: RingSpec = ZZ) -> TwistedComplex:
    """Subobject of the cell at (p, q) generated by d_0 of the generator;
    free on the all-positive words applied to y = d_0 x."""
    if p < 0:
        raise BadParameter("column of the generator must be >= 0")
    words = boundary_words(p, q)
    ranks = {pq: len(ws) for pq, ws in words.items()}

    def act(w, i):
        out = {}
        for w2, c in normal_form((i,) + w + (0,)).items():
            if w2[-1] != 0:
                raise AssertionError("boundary left its own span")
            out[w2[:-1]] = c
        return out

    ds = {}
    for i in range(p + 1):
        fam = {}
        for (pp, qq), ws in words.items():
            tgt = words.get((pp - i, qq + i - 1))
            if pp - i < 0 or tgt is None:
                continue
            fam[(pp, qq)] = _matrix_from_action(ring, ws, tgt, lambda w, i=i: act(w, i))
        if fam:
            ds[i] = fam
    return TwistedComplex(ring, ranks, ds, labels=words)


def boundary_inclusion(p: int, q: int, ring: RingSpec = ZZ) -> TwistedMap:
    """The map sending each boundary word w(y) to w d_0 (x) in the cell."""
    src = twisted_boundary(p, q, ring)
    tgt = twisted_disc(p, q, ring)
    f = {}
    for pq, ws in src.labels.items():
        tws = tgt.labels[pq]
        f[pq] = _matrix_from_action(ring, ws, tws, lambda w: {w + (0,): 1})
    return TwistedMap(src, tgt, f)


def truncated_boundary(p: int, q: int, s: int, ring: RingSpec = ZZ) -> TwistedComplex:
    """Sub-bigraded-module of the vertical boundary spanned by y and the
    words with first subscript at most s, with only d_0 retained."""
    if p < 0 or s < 0:
        raise BadParameter("need p >= 0 and s >= 0")
    full = boundary_words(p, q)
    words = {}
    for pq, ws in full.items():
        keep = [w for w in ws if not w or w[0] <= s]
        if keep:
            words[pq] = keep
    ranks = {pq: len(ws) for pq, ws in words.items()}

    def act(w):
        out = {}
        for w2, c in normal_form((0,) + w + (0,)).items():
            inner = w2[:-1]
            if w2[-1] != 0 or (inner and inner[0] > s):
                raise AssertionError("truncation is not d_0-closed")
            out[inner] = c
        return out

    fam = {}
    for (pp, qq), ws in words.items():
        tgt = words.get((pp, qq - 1))
        if tgt is None:
            continue
        fam[(pp, qq)] = _matrix_from_action(ring, ws, tgt, act)
    return TwistedComplex(ring, ranks, {0: fam}, labels=words)


# ---------------------------------------------------------------------------
# Simplicial cochain identification of boundary columns
# ---------------------------------------------------------------------------

def word_to_simplex(w: tuple) -> tuple:
    """Partial-sum bijection from an all-positive word to a simplex: the
    word (i1,...,in) goes to the vertices i_n - 1, i_n + i_{n-1} - 1, ...,
    i_2 + ... + i_n - 1 (cumulative sums from the right, dropping the
    first subscript)."""
    out = []
    acc = 0
    for i in reversed(w[1:]):
        acc += i
        out.append(acc - 1)
    return tuple(out)


def compare_to_simplex_cochain(p: int, q: int, s: int | None, u: int, ring: RingSpec = ZZ):
    """Match column u of the (possibly truncated) vertical boundary with a
    simplicial cochain complex and verify the differentials agree up to
    sign: d_0 corresponds to (-1)^t times the cochain differential on
    cochain degree t, which becomes the uniform global sign -1 after
    rescaling degree t by (-1)^{t(t+1)/2}.

    With s None (or s >= p) column u of the full boundary, for p - u >= 2,
    is matched with the coaugmented cochains of the (p-u-2)-simplex; with
    a truncation s and 0 <= u < p-s-1 it is matched with the relative
    cochains modulo the front face spanned by 0..p-u-s-2.  Returns the
    basis bijection; raises MismatchAt on any disagreement."""
    from .chain import simplex_cochain_data

    sprime = p - u
    if s is None or s >= p:
        if sprime < 2:
            raise BadParameter("absolute comparison needs p - u >= 2")
        obj = twisted_boundary(p, q, ring)
        bases, delta = simplex_cochain_data(sprime - 2, ring)
    else:
        if not (0 <= u < p - s - 1):
            raise BadParameter("relative comparison needs 0 <= u < p - s - 1")
        obj = truncated_boundary(p, q, s, ring)
        bases, delta = simplex_cochain_data(
            sprime - 2, ring, min_vertex_above=sprime - s - 2
        )

    bijection = {}
    # words at column u have subscript sum s' = p - u; a word with n
    # letters corresponds to a cochain of degree n - 2
    by_n = {}
    for (pp, qq), ws in obj.labels.items():
        if pp != u:
            continue
        for w in ws:
            by_n.setdefault(len(w), []).append((qq, w))
    for n, items in sorted(by_n.items()):
        t = n - 2
        simps = list(bases.get(t, []))
        words = [w for _, w in sorted(items, key=lambda x: items.index(x))]
        if len(words) != len(simps):
            raise MismatchAt((u, items[0][0]), None, "rank disagreement at degree %d" % t)
        for qq, w in items:
            sx = word_to_simplex(w)
            if sx not in simps:
                raise MismatchAt((u, qq), w, "image simplex not in cochain basis")
            bijection[w] = sx

    # the raw bijection satisfies d_0 = (-1)^t * delta on cochain degree
    # t = n - 2; rescaling each degree by (-1)^{t(t+1)/2} turns this into
    # the uniform global sign -1, so that is what the certificate records
    for (pp, qq), ws in obj.labels.items():
        if pp != u:
            continue
        tgt_ws = obj.labels.get((u, qq - 1), [])
        d0 = obj.d(0, u, qq)
        n = len(ws[0])
        t = n - 2
        simps = bases.get(t, [])
        tgt_simps = bases.get(t + 1, [])
        dl = delta.get(t)
        for j, w in enumerate(ws):
            got = {tgt_ws[i]: d0[(i, j)] for i in range(len(tgt_ws)) if d0[(i, j)] != 0}
            jc = simps.index(bijection[w])
            want = {}
            for ic in range(len(tgt_simps)):
                c = dl[(ic, jc)]
                if c != 0:
                    want[tgt_simps[ic]] = ring.neg(c) if t % 2 else c
            got_s = {bijection[w2]: c for w2, c in got.items()}
            if got_s != want:
                raise MismatchAt((u, qq), w, f"{got_s} != {want}")
    return bijection


# ---------------------------------------------------------------------------
# Totalisation
# ---------------------------------------------------------------------------

def tot_layout(x: TwistedComplex, n: int):
    """Summands (p, q, rank) of total degree n, by increasing column."""
    return sorted(
        [(p, q, r) for (p, q), r in x.ranks.items() if p + q == n]
    )


def tot_twisted(x: TwistedComplex) -> ChainComplex:
    """Total complex: degree n is the sum of the bidegrees with p+q = n
    (columns in increasing order) and the differential is sum_i d_i."""
    ring = x.ring
    degs = sorted({p + q for p, q in x.ranks})
    ranks = {n: sum(r for _, _, r in tot_layout(x, n)) for n in degs}
    d = {}
    for n in degs:
        src = tot_layout(x, n)
        tgt = tot_layout(x, n - 1)
        if not tgt:
            continue
        tpos = {(p, q): k for k, (p, q, _) in enumerate(tgt)}
        grid = [
            [ExactMatrix.zero(ring, rt, rs) for _, _, rs in src]
            for _, _, rt, in tgt
        ]
        for j, (p, q, rs) in enumerate(src):
            for i in x.indices():
                key = (p - i, q + i - 1)
                if key in tpos:
                    blk = x.d(i, p, q)
                    if not blk.is_zero:
                        grid[tpos[key]][j] = grid[tpos[key]][j] + blk
        d[n] = ExactMatrix.block(ring, grid)
    return ChainComplex(ring, ranks, d)


# ---------------------------------------------------------------------------
# Tensor product
# ---------------------------------------------------------------------------

def tensor_layout(x: TwistedComplex, y: TwistedComplex, p: int, q: int):
    """Summands (a, b, a2, b2, ra, rb) of bidegree (p, q) of the tensor
    product, ordered lexicographically by the first-factor bidegree."""
    out = []
    for (a, b) in x.bidegrees():
        a2, b2 = p - a, q - b
        rb = y.rank(a2, b2)
        if rb:
            out.append((a, b, a2, b2, x.rank(a, b), rb))
    return out


def tensor_twisted(x: TwistedComplex, y: TwistedComplex) -> TwistedComplex:
    """Tensor product with d_i(a (x) b) = d_i(a) (x) b + (-1)^{|a|} a (x) d_i(b),
    the sign using the total degree of the first factor."""
    if x.ring != y.ring:
        raise BadParameter("tensor over different rings")
    ring = x.ring
    support = set()
    for (a, b) in x.ranks:
        for (a2, b2) in y.ranks:
            support.add((a + a2, b + b2))
    ranks = {}
    layouts = {}
    for pq in support:
        lay = tensor_layout(x, y, *pq)
        layouts[pq] = lay
        r = sum(ra * rb for *_, ra, rb in lay)
        if r:
            ranks[pq] = r
    imax = max(x.pmax, y.pmax)
    ds = {}
    for i in range(imax + 1):
        fam = {}
        for (p, q), src in layouts.items():
            key = (p - i, q + i - 1)
            tgt = layouts.get(key)
            if not tgt or not src:
                continue
            tpos = {(a, b, a2, b2): k for k, (a, b, a2, b2, _, _) in enumerate(tgt)}
            grid = [
                [ExactMatrix.zero(ring, ta * tb, ra * rb) for *_, ra, rb in src]
                for *_, ta, tb in tgt
            ]
            hit = False
            for j, (a, b, a2, b2, ra, rb) in enumerate(src):
                k1 = (a - i, b + i - 1, a2, b2)
                if k1 in tpos:
                    blk = x.d(i, a, b).kron(ExactMatrix.identity(ring, rb))
                    if not blk.is_zero:
                        grid[tpos[k1]][j] = blk
                        hit = True
                k2 = (a, b, a2 - i, b2 + i - 1)
                if k2 in tpos:
                    blk = ExactMatrix.identity(ring, ra).kron(y.d(i, a2, b2))
                    if (a + b) % 2:
                        blk = -blk
                    if not blk.is_zero:
                        grid[tpos[k2]][j] = blk
                        hit = True
            if hit:
                fam[(p, q)] = ExactMatrix.block(ring, grid)
        if fam:
            ds[i] = fam
    return TwistedComplex(ring, ranks, ds)


def tensor_twisted_map(f: TwistedMap, g: TwistedMap) -> TwistedMap:
    """Tensor of strict morphisms (no signs in bidegree (0,0))."""
    sx, sy = f.source, g.source
    tx, ty = f.target, g.target
    ring = sx.ring
    src_obj = tensor_twisted(sx, sy)
    tgt_obj = tensor_twisted(tx, ty)
    comps = {}
    for pq in src_obj.ranks:
        src = tensor_layout(sx, sy, *pq)
        tgt = tensor_layout(tx, ty, *pq)
        if not tgt:
            continue
        tpos = {(a, b): k for k, (a, b, _, _, _, _) in enumerate(tgt)}
        grid = [
            [ExactMatrix.zero(ring, ta * tb, ra * rb) for *_, ra, rb in src]
            for *_, ta, tb in tgt
        ]
        for j, (a, b, a2, b2, ra, rb) in enumerate(src):
            if (a, b) in tpos:
                blk = f.component(a, b).kron(g.component(a2, b2))
                if not blk.is_zero:
                    grid[tpos[(a, b)]][j] = blk
        comps[pq] = ExactMatrix.block(ring, grid)
    return TwistedMap(src_obj, tgt_obj, comps)


# ---------------------------------------------------------------------------
# Hom
# ---------------------------------------------------------------------------

def _hom_summands(x: TwistedComplex, y: TwistedComplex, p: int, q: int):
    """Summands (s, t, rx, ry) of the ambient space of degree-(p,q)
    families X_{s,t} -> Y_{s+p,t+q}."""
    out = []
    for (s, t) in x.bidegrees():
        ry = y.rank(s + p, t + q)
        if ry:
            out.append((s, t, x.rank(s, t), ry))
    return out


def _hom_dim(summands) -> int:
    return sum(rx * ry for _, _, rx, ry in summands)


def _hom_operator(x, y, p, q, i, sign):
    """Matrix of f |-> d_i f - sign * f d_i from the ambient space at
    (p, q) to the ambient space at (p-i, q+i-1); entries of each f_{s,t}
    are flattened row-major, summands concatenated in order."""
    ring = x.ring
    src = _hom_summands(x, y, p, q)
    tgt = _hom_summands(x, y, p - i, q + i - 1)
    spos = {}
    off = 0
    for (s, t, rx, ry) in src:
        spos[(s, t)] = (off, rx, ry)
        off += rx * ry
    grid = []
    for (s, t, rx, ry2) in tgt:
        row = [ExactMatrix.zero(ring, rx * ry2, rxs * rys) for _, _, rxs, rys in src]
        if (s, t) in spos:
            k = next(k for k, (ss, tt, _, _) in enumerate(src) if (ss, tt) == (s, t))
            row[k] = y.d(i, s + p, t + q).kron(ExactMatrix.identity(ring, rx))
        key = (s - i, t + i - 1)
        if key in spos:
            k = next(k for k, (ss, tt, _, _) in enumerate(src) if (ss, tt) == key)
            blk = ExactMatrix.identity(ring, ry2).kron(x.d(i, s, t).transpose())
            row[k] = row[k] - blk.scale(ring.from_int(sign))
        grid.append(ExactMatrix.hstack(ring, row))
    if not grid:
        return ExactMatrix.zero(ring, 0, _hom_dim(src))
    return ExactMatrix.vstack(ring, grid)


def morphism_space_basis(x: TwistedComplex, y: TwistedComplex) -> ExactMatrix:
    """Basis of the module of strict morphisms x -> y, as columns of
    flattened component families (summands of bidegree (0,0) in order,
    each component row-major)."""
    ring = x.ring
    imax = max(x.pmax, y.pmax)
    src = _hom_summands(x, y, 0, 0)
    n = _hom_dim(src)
    rows = [_hom_operator(x, y, 0, 0, i, 1) for i in range(imax + 1)]
    rows = [m for m in rows if m.rows]
    if not rows:
        return ExactMatrix.identity(ring, n)
    return kernel_basis(ExactMatrix.vstack(ring, rows, cols=n))


def morphism_from_vector(x: TwistedComplex, y: TwistedComplex, vec, check=True) -> TwistedMap:
    """Inverse of the flattening used by morphism_space_basis."""
    ring = x.ring
    comps = {}
    off = 0
    for (s, t, rx, ry) in _hom_summands(x, y, 0, 0):
        block = [vec[off + k * rx : off + (k + 1) * rx] for k in range(ry)]
        off += rx * ry
        comps[(s, t)] = ExactMatrix.from_rows(ring, [list(r) for r in block])
    return TwistedMap(x, y, comps, check=check)


def morphism_to_vector(f: TwistedMap) -> tuple:
    out = []
    for (s, t, rx, ry) in _hom_summands(f.source, f.target, 0, 0):
        m = f.component(s, t)
        for row in m.entries:
            out.extend(row)
    return tuple(out)


def hom_twisted(x: TwistedComplex, y: TwistedComplex) -> TwistedComplex:
    """Internal Hom: degree (p, q) is the subspace of families
    X_{s,t} -> Y_{s+p,t+q} with d_i f = (-1)^{p+q} f d_i for all i > p,
    with structure maps d_i(f) = d_i f - (-1)^{p+q} f d_i for i <= p."""
    if x.ring != y.ring:
        raise BadParameter("hom over different rings")
    ring = x.ring
    if x.is_zero or y.is_zero:
        return TwistedComplex(ring, {}, {})
    imax = max(x.pmax, y.pmax)
    ps = [sp for sp, _ in x.ranks]
    ts = [t for _, t in x.ranks]
    yps = [sp for sp, _ in y.ranks]
    yts = [t for _, t in y.ranks]
    pmin, pmax = 0, max(yps)
    qmin, qmax = min(yts) - max(ts), max(yts) - min(ts)
    bases = {}
    for p in range(pmin, pmax + 1):
        for q in range(qmin, qmax + 1):
            src = _hom_summands(x, y, p, q)
            n = _hom_dim(src)
            if n == 0:
                continue
            sign = -1 if (p + q) % 2 else 1
            cons = [
                _hom_operator(x, y, p, q, i, sign) for i in range(p + 1, imax + 1)
            ]
            cons = [m for m in cons if m.rows]
            if cons:
                basis = kernel_basis(ExactMatrix.vstack(ring, cons, cols=n))
            else:
                basis = ExactMatrix.identity(ring, n)
            if basis.cols:
                bases[(p, q)] = basis
    ranks = {pq: b.cols for pq, b in bases.items()}
    ds = {}
    for i in range(imax + 1):
        fam = {}
        for (p, q), basis in bases.items():
            if i > p:
                continue
            key = (p - i, q + i - 1)
            tb = bases.get(key)
            if tb is None:
                continue
            sign = -1 if (p + q) % 2 else 1
            op = _hom_operator(x, y, p, q, i, sign)
            try:
                fam[(p, q)] = coordinates_in(tb, op @ basis)
            except NoSolution:
                raise NonSplitConstraint(
                    f"structure map d_{i} at ({p},{q}) leaves the chosen basis"
                )
        if fam:
            ds[i] = fam
    return TwistedComplex(ring, ranks, ds)


# ---------------------------------------------------------------------------
# Vertical homology, quotient, embedding
# ---------------------------------------------------------------------------

def vertical_homology_twisted(x: TwistedComplex):
    """Columnwise homology with respect to d_0, with the differential
    induced by d_1, as a bicomplex with zero vertical differential."""
    from .bicomplex import Bicomplex

    if not x.ring.is_field:
        raise UnsupportedRing("vertical homology needs a field")
    ring = x.ring
    kers = {}
    quots = {}
    reps = {}
    for (p, q) in x.bidegrees():
        k = kernel_basis(x.d(0, p, q))
        b = image_basis(x.d(0, p, q + 1))
        qm = QuotientModule(ring, k.cols, coordinates_in(k, b))
        kers[(p, q)] = k
        quots[(p, q)] = qm
        reps[(p, q)] = k @ qm.reps
    ranks = {pq: qm.rank for pq, qm in quots.items() if qm.rank}
    dh = {}
    for (p, q), r in ranks.items():
        key = (p - 1, q)
        if key not in ranks:
            continue
        img = x.d(1, p, q) @ reps[(p, q)]
        coords = coordinates_in(kers[key], img)
        m = quots[key].project(coords)
        if not m.is_zero:
            dh[(p, q)] = m
    return Bicomplex(ring, ranks, dh, {})


def quotient_to_bicomplex(x: TwistedComplex):
    """Quotient by the d_0,d_1-closure of the images of all d_i with
    i >= 2; the universal bicomplex receiving x."""
    from .bicomplex import Bicomplex

    ring = x.ring
    spans = {}

    def add(pq, mat):
        if mat.is_zero or mat.cols == 0:
            return False
        cur = spans.get(pq)
        new = mat if cur is None else ExactMatrix.hstack(ring, [cur, mat])
        if cur is not None and matrix_rank(new) == matrix_rank(cur):
            return False
        spans[pq] = new
        return True

    for i in x.indices():
        if i < 2:
            continue
        for (p, q), m in x.ds[i].items():
            add((p - i, q + i - 1), m)
    changed = True
    while changed:
        changed = False
        for pq in list(spans):
            p, q = pq
            for i in (0, 1):
                img = x.d(i, p, q) @ spans[pq]
                if img.rows and add((p - i, q + i - 1), img):
                    changed = True
    quots = {}
    for (p, q) in x.bidegrees():
        qm = QuotientModule(ring, x.rank(p, q), spans.get((p, q)))
        if qm.torsion:
            raise TorsionQuotient(f"quotient at ({p},{q}) has torsion {qm.torsion}")
        quots[(p, q)] = qm
    ranks = {pq: qm.rank for pq, qm in quots.items() if qm.rank}
    induced = {0: {}, 1: {}}
    for i in (0, 1):
        for (p, q) in ranks:
            key = (p - i, q + i - 1)
            if key not in ranks:
                continue
            m = quots[key].project(x.d(i, p, q) @ quots[(p, q)].reps)
            if not m.is_zero:
                induced[i][(p, q)] = m
    return Bicomplex(ring, ranks, induced[1], induced[0])


def to_bicomplex(x: TwistedComplex):
    """Reinterpret a twisted complex with d_i = 0 for i >= 2."""
    from .bicomplex import Bicomplex

    if any(i >= 2 for i in x.indices()):
        raise BadParameter("structure maps above d_1 present")
    return Bicomplex(ring=x.ring, ranks=dict(x.ranks),
                     d_h=dict(x.ds.get(1, {})), d_v=dict(x.ds.get(0, {})))


def embed(obj) -> TwistedComplex:
    """View a chain complex (column 0) or a bicomplex as a twisted
    complex with vanishing higher structure maps."""
    if isinstance(obj, TwistedComplex):
        return obj
    if isinstance(obj, ChainComplex):
        ranks = {(0, n): r for n, r in obj.ranks.items()}
        d0 = {(0, n): m for n, m in obj.d.items()}
        return TwistedComplex(obj.ring, ranks, {0: d0}, check=False)
    from .bicomplex import Bicomplex

    if isinstance(obj, Bicomplex):
        if obj.convention != "anticommute":
            raise BadParameter("embed needs the anticommuting convention")
        return TwistedComplex(
            obj.ring, dict(obj.ranks), {0: dict(obj.d_v), 1: dict(obj.d_h)},
            check=False,
        )
    raise BadParameter(f"cannot embed {type(obj).__name__}")


def embed_map(f) -> TwistedMap:
    from .chain import ChainMap
    from .bicomplex import BicomplexMap

    if isinstance(f, TwistedMap):
        return f
    if isinstance(f, ChainMap):
        return TwistedMap(
            embed(f.source), embed(f.target),
            {(0, n): m for n, m in f.f.items()}, check=False,
        )
    if isinstance(f, BicomplexMap):
        return TwistedMap(embed(f.source), embed(f.target), dict(f.f), check=False)
    raise BadParameter(f"cannot embed {type(f).__name__}")


def cokernel_twisted(f: TwistedMap):
    """Quotient of the target by the image of f, with induced structure
    maps; over Z raises TorsionCokernel when the quotient is not free.
    Returns (object, projection map)."""
    y = f.target
    ring = y.ring
    quots = {}
    for (p, q) in y.bidegrees():
        qm = QuotientModule(ring, y.rank(p, q), image_basis_of(f, p, q))
        if qm.torsion:
            raise TorsionCokernel(f"cokernel at ({p},{q}) has torsion {qm.torsion}")
        quots[(p, q)] = qm
    ranks = {pq: qm.rank for pq, qm in quots.items() if qm.rank}
    ds = {}
    for i in y.indices():
        fam = {}
        for (p, q) in ranks:
            key = (p - i, q + i - 1)
            if key not in quots or quots[key].rank == 0:
                continue
            m = quots[key].project(y.d(i, p, q) @ quots[(p, q)].reps)
            if not m.is_zero:
                fam[(p, q)] = m
        if fam:
            ds[i] = fam
    coker = TwistedComplex(ring, ranks, ds)
    proj = TwistedMap(
        y,
        coker,
        {
            pq: quots[pq].project(ExactMatrix.identity(ring, y.rank(*pq)))
            for pq in ranks
        },
    )
    return coker, proj


def image_basis_of(f: TwistedMap, p: int, q: int) -> ExactMatrix:
    return image_basis(f.component(p, q))


def tot_twisted_map(f: TwistedMap):
    """Totalisation of a strict map, blockwise over the column layout."""
    from .chain import ChainMap

    ring = f.source.ring
    tx, ty = tot_twisted(f.source), tot_twisted(f.target)
    comps = {}
    for n in set(tx.ranks) | set(ty.ranks):
        src = tot_layout(f.source, n)
        tgt = tot_layout(f.target, n)
        if not src or not tgt:
            continue
        grid = [
            [
                f.component(p, q) if (p, q) == (p2, q2)
                else ExactMatrix.zero(ring, rt, rs)
                for (p, q, rs) in src
            ]
            for (p2, q2, rt) in tgt
        ]
        comps[n] = ExactMatrix.block(ring, grid)
    return ChainMap(tx, ty, comps)


def column_twisted(x: TwistedComplex, p: int):
    """Column p with the degree-(0,-1) structure map as differential."""
    from .chain import ChainComplex

    ranks = {q: r for (pp, q), r in x.ranks.items() if pp == p}
    d = {q: m for (pp, q), m in x.ds.get(0, {}).items() if pp == p}
    return ChainComplex(x.ring, ranks, d)


def column_twisted_map(f: TwistedMap, p: int):
    from .chain import ChainMap

    comps = {q: m for (pp, q), m in f.f.items() if pp == p}
    return ChainMap(
        column_twisted(f.source, p), column_twisted(f.target, p), comps
    )


def alternative_disc_words(p: int, q: int) -> dict:
    """Alternative basis of the free cell on one generator: all-positive
    words plus the words with a single leading zero."""
    table = {}
    for s in range(p + 1):
        for n in range(s + 2):
            words = _compositions(s, n) + [(0,) + c for c in _compositions(s, n - 1)]
            if words:
                table[(p - s, q + s - n)] = words
    return table


def alternative_basis_change(p: int, q: int, ring: RingSpec = ZZ) -> dict:
    """Per-bidegree matrix expressing the alternative basis in the
    canonical one (columns indexed by the alternative words)."""
    canon = disc_words(p, q)
    alt = alternative_disc_words(p, q)
    return {
        pq: _matrix_from_action(ring, words, canon[pq], normal_form)
        for pq, words in alt.items()
    }
