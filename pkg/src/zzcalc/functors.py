"""Cohomological functors of a bicomplex, computed exactly.

Everything here is derived from first-principles subspace formulas on
the total complex (or on single bidegrees for the bigraded functors),
never from a decomposition into indecomposables.  That independence is
what lets the decomposition module be checked against this one.

Total-degree functors and their defining formulas, all in degree k:

    deRham          Ker d / Im d
    ker_dc          (Ker d ∩ Ker dc) / d(Ker dc)
    coim_dc         d^{-1}(Im dc) / (Im d + Im dc)
    purity_upper    d(Ker dc) / Im ddc
    purity_lower    Ker ddc / d^{-1}(Im dc)

Bigraded functors at (p,q):

    dolbeault       Ker delbar / Im delbar
    conj_dolbeault  Ker del / Im del
    bott_chern      (Ker del ∩ Ker delbar) / Im del*delbar
    aeppli          Ker del*delbar / (Im del + Im delbar)

Here dc = i(delbar - del), so d dc = 2i del delbar and the total-degree
descriptions of Bott-Chern and Aeppli used elsewhere agree with the
bigraded ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .bicomplex import (
    Bicomplex,
    dc as _dc_matrix,
    degree_blocks,
    total_d,
    transpose_bicomplex,
)
from .errors import Inconsistent, InvalidInput
from .linalg import (
    apply_matrix,
    coordinate_subspace,
    image_basis,
    kernel_basis,
    preimage,
    subspace_intersect,
    subspace_sum,
)

__all__ = [
    "BIGRADED_FUNCTORS",
    "TOTAL_FUNCTORS",
    "FUNCTORS",
    "CohomologyTable",
    "FiltrationTable",
    "SpectralPage",
    "TotalComplex",
    "cohomology",
    "betti",
    "hodge_filtration",
    "refined_betti",
    "spectral_page",
    "purity_defect",
    "star_condition",
]

BIGRADED_FUNCTORS = ("dolbeault", "conj_dolbeault", "bott_chern", "aeppli")
TOTAL_FUNCTORS = ("deRham", "ker_dc", "coim_dc", "purity_upper", "purity_lower")
FUNCTORS = TOTAL_FUNCTORS + BIGRADED_FUNCTORS


class TotalComplex:
    """Cached total-degree view of a bicomplex.

    Blocks in degree k are ordered by increasing p, so the column
    filtration F^p is a coordinate suffix.  All subspaces live in the
    block-coordinate ambient of their total degree.
    """

    def __init__(self, A):
        if not isinstance(A, Bicomplex):
            raise InvalidInput("expected a Bicomplex")
        self.A = A
        degs = A.degrees()
        self.min_deg = degs[0] if degs else 0
        self.max_deg = degs[-1] if degs else -1
        self._blocks = {}
        self._cache = {}

    def degrees(self):
        return range(self.min_deg, self.max_deg + 1)

    def blocks(self, k):
        if k not in self._blocks:
            self._blocks[k] = degree_blocks(self.A, k)
        return self._blocks[k]

    def dim(self, k):
        return sum(d for _, _, d in self.blocks(k))

    def _get(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    # -- matrices ----------------------------------------------------

    def d(self, k):
        return self._get(("d", k), lambda: total_d(self.A, k))

    def dc(self, k):
        return self._get(("dc", k), lambda: _dc_matrix(self.A, k))

    def ddc(self, k):
        return self._get(("ddc", k), lambda: self.d(k + 1) * self.dc(k))

    # -- basic subspaces in degree k ----------------------------------

    def ker_d(self, k):
        return self._get(("ker_d", k), lambda: kernel_basis(self.d(k)))

    def im_d(self, k):
        return self._get(("im_d", k), lambda: image_basis(self.d(k - 1)))

    def ker_dc(self, k):
        return self._get(("ker_dc", k), lambda: kernel_basis(self.dc(k)))

    def im_dc(self, k):
        return self._get(("im_dc", k), lambda: image_basis(self.dc(k - 1)))

    def ker_ddc(self, k):
        return self._get(("ker_ddc", k), lambda: kernel_basis(self.ddc(k)))

    def im_ddc(self, k):
        return self._get(("im_ddc", k), lambda: image_basis(self.ddc(k - 2)))

    # -- derived subspaces ---------------------------------------------

    def d_ker_dc(self, k):
        """d(Ker dc) landing in degree k."""
        return self._get(
            ("d_ker_dc", k),
            lambda: apply_matrix(self.d(k - 1), self.ker_dc(k - 1)),
        )

    def dinv_im_dc(self, k):
        """Preimage d^{-1}(Im dc) in degree k."""
        return self._get(
            ("dinv_im_dc", k),
            lambda: preimage(self.d(k), self.im_dc(k + 1)),
        )

    def kerd_cap_kerdc(self, k):
        return self._get(
            ("kk", k),
            lambda: subspace_intersect(self.ker_d(k), self.ker_dc(k)),
        )

    def imd_plus_imdc(self, k):
        return self._get(
            ("ii_sum", k),
            lambda: subspace_sum(self.im_d(k), self.im_dc(k)),
        )

    def imd_cap_imdc(self, k):
        return self._get(
            ("ii_cap", k),
            lambda: subspace_intersect(self.im_d(k), self.im_dc(k)),
        )

    # -- dimension shortcuts -------------------------------------------

    def betti(self, k):
        return self.ker_d(k).dim - self.im_d(k).dim

    def h_dc(self, k):
        return self.ker_dc(k).dim - self.im_dc(k).dim

    def column_filtration(self, k, p):
        """F^p in degree k: the blocks with first index >= p."""
        blocks = self.blocks(k)
        n = self.dim(k)
        start = n
        for (bp, _), off, _ in blocks:
            if bp >= p:
                start = off
                break
        return coordinate_subspace(n, range(start, n))

    def filtration(self):
        return self._get(("filtration",), lambda: _compute_filtration(self))

    def transposed(self):
        """The transposed bicomplex's cached total view (for row pages)."""
        return self._get(
            ("transpose",),
            lambda: TotalComplex(transpose_bicomplex(self.A)),
        )


def _tc(A):
    return A if isinstance(A, TotalComplex) else TotalComplex(A)


# ---------------------------------------------------------------------------
# Cohomology tables


@dataclass
class CohomologyTable:
    """Dimensions of one functor; only nonzero entries are stored.

    Keys are total degrees k for the total-graded functors and (p, q)
    pairs for the bigraded ones.
    """

    functor: str
    dims: dict
    bases: dict = None

    def sum_dims(self):
        return sum(self.dims.values())

    def __eq__(self, other):
        if not isinstance(other, CohomologyTable):
            return NotImplemented
        return self.functor == other.functor and self.dims == other.dims

    def to_json(self):
        dims = {}
        for key in sorted(self.dims):
            name = f"{key[0]},{key[1]}" if isinstance(key, tuple) else str(key)
            dims[name] = self.dims[key]
        return {"functor": self.functor, "dims": dims}


def _bigraded_dims(A, functor):
    dims = {}
    for (p, q) in A.support():
        if functor == "dolbeault":
            ker = kernel_basis(A.delbar_at(p, q)).dim
            im = image_basis(A.delbar_at(p, q - 1)).dim
            d = ker - im
        elif functor == "conj_dolbeault":
            ker = kernel_basis(A.del_at(p, q)).dim
            im = image_basis(A.del_at(p - 1, q)).dim
            d = ker - im
        elif functor == "bott_chern":
            ker = subspace_intersect(
                kernel_basis(A.del_at(p, q)), kernel_basis(A.delbar_at(p, q))
            )
            im = image_basis(A.del_at(p - 1, q) * A.delbar_at(p - 1, q - 1))
            d = ker.dim - im.dim
        else:  # aeppli
            ker = kernel_basis(A.del_at(p, q + 1) * A.delbar_at(p, q))
            im = subspace_sum(
                image_basis(A.del_at(p - 1, q)), image_basis(A.delbar_at(p, q - 1))
            )
            d = ker.dim - im.dim
        if d:
            dims[(p, q)] = d
    return dims


def _total_dims(tc, functor):
    dims = {}
    for k in tc.degrees():
        if functor == "deRham":
            d = tc.betti(k)
        elif functor == "ker_dc":
            d = tc.kerd_cap_kerdc(k).dim - tc.d_ker_dc(k).dim
        elif functor == "coim_dc":
            d = tc.dinv_im_dc(k).dim - tc.imd_plus_imdc(k).dim
        elif functor == "purity_upper":
            d = tc.d_ker_dc(k).dim - tc.im_ddc(k).dim
        else:  # purity_lower
            d = tc.ker_ddc(k).dim - tc.dinv_im_dc(k).dim
        if d:
            dims[k] = d
    return dims


def cohomology(A, functor):
    """Dimension table of one cohomological functor of A."""
    if functor in BIGRADED_FUNCTORS:
        B = A.A if isinstance(A, TotalComplex) else A
        return CohomologyTable(functor, _bigraded_dims(B, functor))
    if functor in TOTAL_FUNCTORS:
        return CohomologyTable(functor, _total_dims(_tc(A), functor))
    raise InvalidInput(
        f"unknown functor {functor!r}; expected one of {', '.join(FUNCTORS)}"
    )


def betti(A):
    """Nonzero de Rham dimensions by total degree."""
    return cohomology(A, "deRham").dims


# ---------------------------------------------------------------------------
# Hodge filtrations and refined Betti numbers


@dataclass
class FiltrationTable:
    """Both Hodge filtrations on de Rham cohomology and what they cut out.

    F[(p, k)] is dim F^p H^k, Fbar[(q, k)] the conjugate filtration,
    FcapFbar[(p, q, k)] their intersection, Ftot[(r, k)] the total
    filtration, refined[(p, q, k)] the refined Betti numbers.  Zero
    entries inside the reported window are kept so that descent to 0 is
    visible; nothing outside the window is stored.
    """

    F: dict = field(default_factory=dict)
    Fbar: dict = field(default_factory=dict)
    FcapFbar: dict = field(default_factory=dict)
    Ftot: dict = field(default_factory=dict)
    refined: dict = field(default_factory=dict)

    def refined_at(self, p, q, k):
        return self.refined.get((p, q, k), 0)

    def graded_total(self, k):
        """dim gr^r_{Ftot} H^k for each r, nonzero entries only."""
        out = {}
        rs = sorted(r for (r, kk) in self.Ftot if kk == k)
        for r in rs:
            g = self.Ftot[(r, k)] - self.Ftot.get((r + 1, k), 0)
            if g:
                out[r] = g
        return out

    def to_json(self):
        def enc(d):
            return {",".join(map(str, key)): val for key, val in sorted(d.items())}

        return {
            "F": enc(self.F),
            "Fbar": enc(self.Fbar),
            "FcapFbar": enc(self.FcapFbar),
            "Ftot": enc(self.Ftot),
            "refined": enc(self.refined),
        }


def _row_filtration(tc, k, q):
    """Fbar^q in degree k (blocks with second index >= q)."""
    blocks = tc.blocks(k)
    n = tc.dim(k)
    idx = []
    for (_, bq), off, d in blocks:
        if bq >= q:
            idx.extend(range(off, off + d))
    return coordinate_subspace(n, idx)


def hodge_filtration(A):
    """Filtration data of the de Rham cohomology of A.

    F^p H^k is the space of classes representable by elements of
    column-filtration level >= p; in subspace terms the image of
    (Ker d ∩ F^p) + Im d in Ker d / Im d.
    """
    return _tc(A).filtration()


def _compute_filtration(tc):
    table = FiltrationTable()
    for k in tc.degrees():
        bk = tc.betti(k)
        blocks = tc.blocks(k)
        if not blocks:
            continue
        ps = sorted({pq[0] for pq, _, _ in blocks})
        qs = sorted({pq[1] for pq, _, _ in blocks})
        im = tc.im_d(k)
        kerd = tc.ker_d(k)

        V = {}
        for p in range(ps[0], ps[-1] + 2):
            V[p] = subspace_sum(
                subspace_intersect(kerd, tc.column_filtration(k, p)), im
            )
        W = {}
        for q in range(qs[0], qs[-1] + 2):
            W[q] = subspace_sum(
                subspace_intersect(kerd, _row_filtration(tc, k, q)), im
            )
        for p in range(ps[0], ps[-1] + 2):
            table.F[(p, k)] = V[p].dim - im.dim
        for q in range(qs[0], qs[-1] + 2):
            table.Fbar[(q, k)] = W[q].dim - im.dim

        VW = {}
        for p in V:
            for q in W:
                VW[(p, q)] = subspace_intersect(V[p], W[q])
        for p in range(ps[0], ps[-1] + 1):
            for q in range(qs[0], qs[-1] + 1):
                table.FcapFbar[(p, q, k)] = VW[(p, q)].dim - im.dim
                upper = subspace_sum(VW[(p + 1, q)], VW[(p, q + 1)])
                r = VW[(p, q)].dim - upper.dim
                if r:
                    table.refined[(p, q, k)] = r

        # total filtration, descending in r = p + q
        rs = range(ps[0] + qs[0], ps[-1] + qs[-1] + 2)
        prev = im  # Ftot^r for r beyond the top is just Im d
        for r in reversed(rs):
            cur = prev
            for p in V:
                q = r - p
                if q in W:
                    cur = subspace_sum(cur, VW[(p, q)])
            table.Ftot[(r, k)] = cur.dim - im.dim
            prev = cur
        if bk:
            refined_sum = sum(
                v for (_, _, kk), v in table.refined.items() if kk == k
            )
            if table.Ftot[(rs[0], k)] != bk or refined_sum != bk:
                raise Inconsistent(
                    f"filtration of degree {k} does not exhaust H^{k}"
                )
    return table


def refined_betti(A):
    """Map (p, q, k) -> b_k^{p,q}, nonzero entries only."""
    return hodge_filtration(A).refined


# ---------------------------------------------------------------------------
# Spectral sequences


@dataclass
class SpectralPage:
    which: str
    r: int
    dims: dict
    d_ranks: dict

    def sum_dims(self):
        return sum(self.dims.values())

    def to_json(self):
        return {
            "which": self.which,
            "r": self.r,
            "dims": {f"{p},{q}": v for (p, q), v in sorted(self.dims.items())},
            "d_ranks": {
                f"{p},{q}": v for (p, q), v in sorted(self.d_ranks.items())
            },
        }


def _dinv_F(tc, k, p):
    """d^{-1}(F^p A^{k+1}) in degree k."""
    return tc._get(
        ("dinvF", k, p),
        lambda: preimage(tc.d(k), tc.column_filtration(k + 1, p)),
    )


def _column_Z(tc, r, p, q):
    """Z_r^{p,q} = F^p A^k ∩ d^{-1}(F^{p+r} A^{k+1})."""
    return tc._get(
        ("Z", r, p, q),
        lambda: subspace_intersect(
            tc.column_filtration(p + q, p), _dinv_F(tc, p + q, p + r)
        ),
    )


def _column_B(tc, r, p, q):
    """The subspace divided out of Z_r at position (p,q)."""

    def build():
        zz = _column_Z(tc, r - 1, p + 1, q - 1)
        img = apply_matrix(
            tc.d(p + q - 1), _column_Z(tc, r - 1, p - r + 1, q + r - 2)
        )
        return subspace_sum(zz, img)

    return tc._get(("pageB", r, p, q), build)


def _column_page(tc, r):
    dims = {}
    ranks = {}
    for (p, q) in tc.A.spaces:
        d = _column_Z(tc, r, p, q).dim - _column_B(tc, r, p, q).dim
        if d:
            dims[(p, q)] = d
    for (p, q) in dims:
        if (p + r, q - r + 1) not in dims:
            continue
        tgt_b = _column_B(tc, r, p + r, q - r + 1)
        out = subspace_sum(
            apply_matrix(tc.d(p + q), _column_Z(tc, r, p, q)), tgt_b
        )
        rank = out.dim - tgt_b.dim
        if rank:
            ranks[(p, q)] = rank
    return dims, ranks


def spectral_page(A, which, r):
    """Page r of the column or row spectral sequence.

    The row sequence of A is the column sequence of the transposed
    bicomplex; positions are mapped back by swapping the indices, so
    the row page at (p,q) has its d_r pointing to (p-r+1, q+r).
    """
    if r < 1:
        raise InvalidInput("page index must be >= 1")
    if which == "column":
        dims, ranks = _column_page(_tc(A), r)
    elif which == "row":
        tdims, tranks = _column_page(_tc(A).transposed(), r)
        dims = {(p, q): v for (q, p), v in tdims.items()}
        ranks = {(p, q): v for (q, p), v in tranks.items()}
    else:
        raise InvalidInput(f"unknown spectral sequence {which!r}")
    return SpectralPage(which, r, dims, ranks)


# ---------------------------------------------------------------------------
# Purity


def purity_defect(A):
    """Per-degree purity defects and their maximum.

    pdef_k is the largest |r - k| over r with gr^r_{Ftot} H^k nonzero,
    and 0 when H^k vanishes; the total defect is the maximum over all
    degrees (0 for the empty complex).
    """
    tc = _tc(A)
    table = hodge_filtration(tc)
    per_degree = {}
    for k in tc.degrees():
        graded = table.graded_total(k)
        per_degree[k] = max((abs(r - k) for r in graded), default=0)
    total = max(per_degree.values(), default=0)
    return per_degree, total


def star_condition(A):
    """True when each H^k lives in at most two adjacent graded pieces
    of the total filtration."""
    tc = _tc(A)
    table = hodge_filtration(tc)
    for k in tc.degrees():
        rs = sorted(table.graded_total(k))
        if rs and rs[-1] - rs[0] > 1:
            return False
    return True
