"""Finite cdga presentations and the real-homotopy obstruction.

A presentation is a free graded-commutative algebra over Q on named
generators, with the differential given per generator and extended as
a degree +1 derivation.  Monomials are tuples of generator indices in
ascending order; reordering picks up a Koszul sign, and a repeated odd
index kills the term.  Linear algebra runs on sparse column-dict rows
over Fraction, so every rank here is exact.

The obstruction pipeline is one fixed recipe.  For a presentation P of
formal dimension 2n and a level j:

  * check Poincare duality of H(P) (b_2n = 1 and a nondegenerate cup
    pairing in complementary degrees), else the criterion does not
    apply;
  * check the cup hypothesis that the subalgebra generated by classes
    of degree <= j misses H^{j+1};
  * compare r_j^k, the rank of H^k of the j-minimal model map, with
    d_j^k, the dimension of the degree-k piece of that subalgebra.

Always 0 <= d_j^k <= r_j^k.  A strict excess in the duality window
[2n-j, 2n] blocks every j-controlled complex structure on anything
with this real homotopy type; compatibility() additionally bounds the
excess by the zigzag counts ell_k of a candidate bicomplex and reports
the degrees where the candidate is excluded.
"""

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction

from .conditions import ell
from .errors import (
    InfiniteDimensional,
    Inconsistent,
    InvalidInput,
    NoPoincareDuality,
    NotStabilized,
    UnknownPreset,
)

__all__ = [
    "CdgaPresentation",
    "CohomologyRing",
    "ObstructionReport",
    "ObstructionRow",
    "CompatibilityReport",
    "CompatibilityRow",
    "cdga_cohomology",
    "cdga_from_json",
    "cdga_to_json",
    "compatibility",
    "d_jk",
    "format_poly",
    "j_minimal_model",
    "obstruction",
    "parse_poly",
    "preset",
    "r_jk",
]

_F0 = Fraction(0)
_F1 = Fraction(1)

# Truncation guard: a single graded piece never needs more monomials
# than this in any computation the package performs.
PIECE_CAP = 4096

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


# ---------------------------------------------------------------------------
# Monomials and polynomials.
#
# A monomial is a tuple of generator indices sorted ascending; a
# polynomial is a dict monomial -> Fraction with no zero values.


def _sort_indices(indices, degrees):
    """Canonical order with Koszul sign; (0, ()) when an odd repeats."""
    sign = 1
    lst = list(indices)
    for i in range(1, len(lst)):
        j = i
        while j > 0 and lst[j - 1] > lst[j]:
            if degrees[lst[j - 1]] % 2 and degrees[lst[j]] % 2:
                sign = -sign
            lst[j - 1], lst[j] = lst[j], lst[j - 1]
            j -= 1
    for a, b in zip(lst, lst[1:]):
        if a == b and degrees[a] % 2:
            return 0, ()
    return sign, tuple(lst)


def _mono_degree(mono, degrees):
    return sum(degrees[i] for i in mono)


def _poly_add_into(acc, poly, coef):
    for m, c in poly.items():
        nc = acc.get(m, _F0) + coef * c
        if nc:
            acc[m] = nc
        else:
            acc.pop(m, None)


def _poly_mul(p1, p2, degrees):
    out = {}
    for m1, c1 in p1.items():
        for m2, c2 in p2.items():
            sign, m = _sort_indices(m1 + m2, degrees)
            if not sign:
                continue
            nc = out.get(m, _F0) + sign * c1 * c2
            if nc:
                out[m] = nc
            else:
                out.pop(m, None)
    return out


def _d_monomial(mono, dpolys, degrees):
    """Leibniz expansion of d on one monomial."""
    out = {}
    parity = 0
    for t, g in enumerate(mono):
        dg = dpolys[g]
        if dg:
            lead = -1 if parity % 2 else 1
            head = mono[:t]
            tail = mono[t + 1:]
            for m, c in dg.items():
                sign, mm = _sort_indices(head + m + tail, degrees)
                if not sign:
                    continue
                nc = out.get(mm, _F0) + lead * sign * c
                if nc:
                    out[mm] = nc
                else:
                    out.pop(mm, None)
        parity += degrees[g]
    return out


def _d_poly(poly, dpolys, degrees):
    out = {}
    for m, c in poly.items():
        _poly_add_into(out, _d_monomial(m, dpolys, degrees), c)
    return out


# ---------------------------------------------------------------------------
# Polynomial text grammar: Q-linear combinations of '*'-joined
# generator names, with '^' powers.  "e1*e2-1/2*e3^2" parses; there
# are no parentheses.


def _tokenize(text):
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+-*^":
            tokens.append(ch)
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == "/":
                k = j + 1
                while k < n and text[k].isdigit():
                    k += 1
                if k == j + 1:
                    raise InvalidInput(
                        f"bad rational at position {i} in {text!r}")
                tokens.append(Fraction(int(text[i:j]), int(text[j + 1:k])))
                i = k
            else:
                tokens.append(Fraction(int(text[i:j])))
                i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(text[i:j])
            i = j
            continue
        raise InvalidInput(f"unexpected character {ch!r} at position {i}")
    return tokens


def parse_poly(text, index, degrees):
    """Parse a polynomial string against a name -> generator-index map."""
    tokens = _tokenize(text)
    if not tokens:
        raise InvalidInput("empty polynomial (omit the entry instead)")
    poly = {}
    pos = 0
    total = len(tokens)
    while pos < total:
        coef = _F1
        if tokens[pos] == "+":
            pos += 1
        elif tokens[pos] == "-":
            coef = -coef
            pos += 1
        indices = []
        expect_factor = True
        while expect_factor:
            if pos >= total:
                raise InvalidInput(f"dangling operator in {text!r}")
            tok = tokens[pos]
            if isinstance(tok, Fraction):
                coef *= tok
                pos += 1
            elif isinstance(tok, str) and tok not in "+-*^":
                g = index.get(tok)
                if g is None:
                    raise InvalidInput(f"unknown generator {tok!r}")
                power = 1
                pos += 1
                if pos < total and tokens[pos] == "^":
                    pos += 1
                    if pos >= total or not isinstance(tokens[pos], Fraction):
                        raise InvalidInput(f"bad exponent in {text!r}")
                    e = tokens[pos]
                    if e.denominator != 1 or e < 0:
                        raise InvalidInput(f"exponent must be a natural: {e}")
                    power = int(e)
                    pos += 1
                indices.extend([g] * power)
            else:
                raise InvalidInput(f"expected a factor in {text!r}")
            if pos < total and tokens[pos] == "*":
                pos += 1
            else:
                expect_factor = False
        sign, mono = _sort_indices(indices, degrees)
        if sign and coef:
            nc = poly.get(mono, _F0) + sign * coef
            if nc:
                poly[mono] = nc
            else:
                poly.pop(mono, None)
    return poly


def format_poly(poly, names):
    """Canonical text for a polynomial, inverse to parse_poly."""
    if not poly:
        return "0"
    out = []
    for mono, coef in sorted(poly.items(), key=lambda kv: (len(kv[0]), kv[0])):
        parts = []
        t = 0
        while t < len(mono):
            g = mono[t]
            cnt = 1
            while t + cnt < len(mono) and mono[t + cnt] == g:
                cnt += 1
            parts.append(names[g] if cnt == 1 else f"{names[g]}^{cnt}")
            t += cnt
        if not parts:
            term = str(coef)
        elif coef == 1:
            term = "*".join(parts)
        elif coef == -1:
            term = "-" + "*".join(parts)
        else:
            term = f"{coef}*" + "*".join(parts)
        out.append(term)
    text = out[0]
    for term in out[1:]:
        text += term if term.startswith("-") else "+" + term
    return text


# ---------------------------------------------------------------------------
# Presentations.


class CdgaPresentation:
    """Free graded-commutative algebra over Q with a differential.

    generators is a sequence of (name, degree >= 1); differential maps
    a generator name to a polynomial (text in the grammar above, or an
    already-canonical monomial dict).  The constructor checks that d
    is homogeneous of degree +1 and that d squared vanishes on
    generators, which by the Leibniz rule makes it vanish everywhere.
    """

    def __init__(self, generators, differential=None, formal_dimension=0):
        gens = []
        for name, degree in generators:
            if not isinstance(name, str) or not _NAME_RE.match(name):
                raise InvalidInput(f"bad generator name {name!r}")
            if not isinstance(degree, int) or degree < 1:
                raise InvalidInput(
                    f"generator {name!r} needs integer degree >= 1")
            gens.append((name, degree))
        self.generators = tuple(gens)
        self.names = tuple(n for n, _ in gens)
        self.degrees = tuple(d for _, d in gens)
        if len(set(self.names)) != len(self.names):
            raise InvalidInput("duplicate generator names")
        self.index = {n: i for i, n in enumerate(self.names)}
        if not isinstance(formal_dimension, int) or formal_dimension < 0:
            raise InvalidInput("formal_dimension must be a natural number")
        self.formal_dimension = formal_dimension

        diff = {}
        for name, value in (differential or {}).items():
            g = self.index.get(name)
            if g is None:
                raise InvalidInput(f"differential on unknown name {name!r}")
            if isinstance(value, str):
                poly = parse_poly(value, self.index, self.degrees)
            else:
                poly = {}
                for mono, coef in dict(value).items():
                    sign, m = _sort_indices(tuple(mono), self.degrees)
                    if sign:
                        _poly_add_into(poly, {m: Fraction(coef)}, sign)
            target = self.degrees[g] + 1
            for mono in poly:
                if _mono_degree(mono, self.degrees) != target:
                    raise InvalidInput(
                        f"d({name}) is not homogeneous of degree {target}")
            if poly:
                diff[name] = poly
        self.differential = diff

        dpolys = [diff.get(n) for n in self.names]
        for name in self.names:
            dg = diff.get(name)
            if dg and _d_poly(dg, dpolys, self.degrees):
                raise InvalidInput(f"d squared is nonzero on {name!r}")
        self._engine = None

    def differential_text(self):
        return {
            name: format_poly(poly, self.names)
            for name, poly in sorted(self.differential.items())
        }

    def __eq__(self, other):
        if not isinstance(other, CdgaPresentation):
            return NotImplemented
        return (
            self.generators == other.generators
            and self.differential == other.differential
            and self.formal_dimension == other.formal_dimension
        )

    def __repr__(self):
        return (
            f"CdgaPresentation({len(self.generators)} generators, "
            f"formal dimension {self.formal_dimension})"
        )


def cdga_to_json(P):
    return {
        "dim": P.formal_dimension,
        "generators": [
            {"name": n, "degree": d} for n, d in P.generators
        ],
        "d": P.differential_text(),
    }


def cdga_from_json(obj):
    if not isinstance(obj, dict) or "generators" not in obj:
        raise InvalidInput("cdga JSON must be an object with 'generators'")
    if not isinstance(obj.get("dim", 0), int):
        raise InvalidInput("'dim' must be an integer")
    gens = []
    for row in obj["generators"]:
        if not isinstance(row, dict) or "name" not in row or "degree" not in row:
            raise InvalidInput(f"bad generator entry {row!r}")
        gens.append((row["name"], row["degree"]))
    d = obj.get("d") or {}
    if not isinstance(d, dict) or not all(
        isinstance(v, str) for v in d.values()
    ):
        raise InvalidInput("'d' must map generator names to polynomial text")
    return CdgaPresentation(gens, d, obj.get("dim", 0))


# ---------------------------------------------------------------------------
# Sparse elimination working on dict rows {column: Fraction}.


def _submul(z, prow, coef, skip):
    for cc, v in prow.items():
        if cc == skip:
            continue
        nv = z.get(cc, _F0) - coef * v
        if nv:
            z[cc] = nv
        else:
            z.pop(cc, None)


class _Echelon:
    """Row space kept in (non-reduced) echelon form."""

    __slots__ = ("pivots",)

    def __init__(self):
        self.pivots = {}

    def reduce(self, row):
        z = dict(row)
        while z:
            c = min(z)
            p = self.pivots.get(c)
            if p is None:
                return z
            _submul(z, p, z.pop(c), c)
        return z

    def insert(self, row):
        z = self.reduce(row)
        if not z:
            return False
        lead = min(z)
        inv = _F1 / z[lead]
        self.pivots[lead] = {c: v * inv for c, v in z.items()}
        return True

    @property
    def rank(self):
        return len(self.pivots)


class _CohData:
    __slots__ = ("im_pivots", "h_rows", "h_pivots")

    def __init__(self, im_pivots, h_rows, h_pivots):
        self.im_pivots = im_pivots
        self.h_rows = h_rows
        self.h_pivots = h_pivots


class _Engine:
    """Per-presentation caches: bases, differentials, cohomology."""

    def __init__(self, P):
        self.P = P
        self.degrees = P.degrees
        self.dpolys = [P.differential.get(n) for n in P.names]
        self._basis = {}
        self._bindex = {}
        self._drow = {}
        self._coh = {}
        self._spans = {}
        self._models = {}

    def basis(self, k):
        got = self._basis.get(k)
        if got is not None:
            return got
        out = []
        if k == 0:
            out.append(())
        elif k > 0:
            degs = self.degrees
            n = len(degs)
            acc = []

            def rec(i, rem):
                if rem == 0:
                    out.append(tuple(acc))
                    if len(out) > PIECE_CAP:
                        raise InfiniteDimensional(
                            f"degree-{k} piece exceeds {PIECE_CAP} monomials")
                    return
                if i >= n:
                    return
                rec(i + 1, rem)
                d = degs[i]
                if d % 2:
                    if d <= rem:
                        acc.append(i)
                        rec(i + 1, rem - d)
                        acc.pop()
                else:
                    cnt = 1
                    while cnt * d <= rem:
                        acc.extend([i] * cnt)
                        rec(i + 1, rem - cnt * d)
                        del acc[len(acc) - cnt:]
                        cnt += 1

            rec(0, k)
            out.sort()
        self._basis[k] = out
        self._bindex[k] = {m: i for i, m in enumerate(out)}
        return out

    def bindex(self, k):
        self.basis(k)
        return self._bindex[k]

    def d_row(self, mono, k):
        """Image of a degree-k basis monomial as a row over basis(k+1)."""
        got = self._drow.get(mono)
        if got is None:
            poly = _d_monomial(mono, self.dpolys, self.degrees)
            idx = self.bindex(k + 1)
            got = {idx[m]: c for m, c in poly.items()}
            self._drow[mono] = got
        return got

    def coh(self, k):
        got = self._coh.get(k)
        if got is not None:
            return got
        im_pivots = {}
        if k > 0:
            for i, m in enumerate(self.basis(k - 1)):
                row = dict(self.d_row(m, k - 1))
                wit = {i: _F1}
                while row:
                    c = min(row)
                    entry = im_pivots.get(c)
                    if entry is None:
                        inv = _F1 / row[c]
                        im_pivots[c] = (
                            {cc: v * inv for cc, v in row.items()},
                            {cc: v * inv for cc, v in wit.items()},
                        )
                        break
                    coef = row.pop(c)
                    _submul(row, entry[0], coef, c)
                    _submul(wit, entry[1], coef, None)

        kernel = []
        pivots = {}
        for i, m in enumerate(self.basis(k)):
            row = dict(self.d_row(m, k))
            wit = {i: _F1}
            while row:
                c = min(row)
                entry = pivots.get(c)
                if entry is None:
                    inv = _F1 / row[c]
                    pivots[c] = (
                        {cc: v * inv for cc, v in row.items()},
                        {cc: v * inv for cc, v in wit.items()},
                    )
                    break
                coef = row.pop(c)
                _submul(row, entry[0], coef, c)
                _submul(wit, entry[1], coef, None)
            else:
                kernel.append(wit)

        h_rows = []
        h_pivots = {}
        for v in kernel:
            z = dict(v)
            while z:
                c = min(z)
                if c in im_pivots:
                    _submul(z, im_pivots[c][0], z.pop(c), c)
                elif c in h_pivots:
                    _submul(z, h_rows[h_pivots[c]], z.pop(c), c)
                else:
                    inv = _F1 / z[c]
                    h_pivots[c] = len(h_rows)
                    h_rows.append({cc: val * inv for cc, val in z.items()})
                    break
        got = _CohData(im_pivots, h_rows, h_pivots)
        self._coh[k] = got
        return got

    def betti(self, k):
        return len(self.coh(k).h_rows)

    def h_rep_poly(self, k, i):
        basis = self.basis(k)
        return {basis[c]: v for c, v in self.coh(k).h_rows[i].items()}

    def project(self, row, k):
        """Coordinates of a cocycle row in the H^k representative basis."""
        data = self.coh(k)
        z = dict(row)
        coords = {}
        while z:
            c = min(z)
            if c in data.im_pivots:
                _submul(z, data.im_pivots[c][0], z.pop(c), c)
            elif c in data.h_pivots:
                idx = data.h_pivots[c]
                coef = z.pop(c)
                coords[idx] = coords.get(idx, _F0) + coef
                _submul(z, data.h_rows[idx], coef, c)
            else:
                raise Inconsistent(
                    f"degree-{k} class escaped the computed decomposition")
        return {i: v for i, v in coords.items() if v}

    def project_poly(self, poly, k):
        idx = self.bindex(k)
        return self.project({idx[m]: c for m, c in poly.items()}, k)

    def solve_d(self, poly, k):
        """A primitive w with d(w) = poly, as a degree k-1 polynomial."""
        data = self.coh(k)
        idx = self.bindex(k)
        z = {idx[m]: c for m, c in poly.items()}
        wit = {}
        while z:
            c = min(z)
            entry = data.im_pivots.get(c)
            if entry is None:
                raise Inconsistent(f"degree-{k} cochain is not exact")
            coef = z.pop(c)
            _submul(z, entry[0], coef, c)
            for cc, v in entry[1].items():
                nv = wit.get(cc, _F0) + coef * v
                if nv:
                    wit[cc] = nv
                else:
                    wit.pop(cc, None)
        basis = self.basis(k - 1)
        return {basis[c]: v for c, v in wit.items()}

    def cup_coords(self, k1, i1, k2, i2):
        prod = _poly_mul(
            self.h_rep_poly(k1, i1), self.h_rep_poly(k2, i2), self.degrees)
        return self.project_poly(prod, k1 + k2)

    def subalgebra_span(self, j, up_to):
        """Echelon spans of <H^{<=j}> per degree, in H coordinates."""
        spans = self._spans.setdefault(j, {0: None})
        for m in range(1, up_to + 1):
            if m in spans:
                continue
            ech = _Echelon()
            if m <= j:
                for i in range(self.betti(m)):
                    ech.insert({i: _F1})
            else:
                lifted = {}

                def lift(b, vec):
                    poly = {}
                    for c, v in vec.items():
                        _poly_add_into(poly, self.h_rep_poly(b, c), v)
                    return poly

                for a in range(1, min(j, m - 1) + 1):
                    b = m - a
                    sub = spans.get(b)
                    if sub is None or not sub.pivots:
                        continue
                    vecs = lifted.setdefault(
                        b, [lift(b, vec) for vec in sub.pivots.values()])
                    for i in range(self.betti(a)):
                        pa = self.h_rep_poly(a, i)
                        for pb in vecs:
                            prod = _poly_mul(pa, pb, self.degrees)
                            if prod:
                                ech.insert(self.project_poly(prod, m))
            spans[m] = ech
        return spans


def _engine(P):
    if P._engine is None:
        P._engine = _Engine(P)
    return P._engine


# ---------------------------------------------------------------------------
# Public computations.


class CohomologyRing:
    """Betti numbers, representatives, and cup products up to max_deg."""

    def __init__(self, P, max_deg):
        if max_deg < 0:
            raise InvalidInput("max_deg must be >= 0")
        self.presentation = P
        self.max_deg = max_deg
        eng = _engine(P)
        self._eng = eng
        self.dims = {}
        for k in range(max_deg + 1):
            b = eng.betti(k)
            if b:
                self.dims[k] = b

    def betti(self, k):
        return self._eng.betti(k)

    def representatives(self, k):
        eng = self._eng
        return [
            format_poly(eng.h_rep_poly(k, i), self.presentation.names)
            for i in range(eng.betti(k))
        ]

    def cup(self, k1, i1, k2, i2):
        """Coordinates of [rep_{i1}][rep_{i2}] in the H^{k1+k2} basis."""
        return self._eng.cup_coords(k1, i1, k2, i2)

    def structure_constants(self):
        out = {}
        for k1 in sorted(self.dims):
            if k1 == 0:
                continue
            for k2 in sorted(self.dims):
                if k2 < k1 or k2 == 0 or k1 + k2 > self.max_deg:
                    continue
                for i1 in range(self.dims[k1]):
                    for i2 in range(self.dims.get(k2, 0)):
                        coords = self.cup(k1, i1, k2, i2)
                        if coords:
                            out[(k1, i1, k2, i2)] = coords
        return out


def cdga_cohomology(P, max_deg):
    return CohomologyRing(P, max_deg)


def d_jk(P, j, k):
    """dim of the degree-k piece of the subalgebra generated by H^{<=j}."""
    if j < 0 or k < 0:
        raise InvalidInput("j and k must be naturals")
    eng = _engine(P)
    if k <= j:
        return eng.betti(k)
    spans = eng.subalgebra_span(j, k)
    return spans[k].rank


def _is_minimal(P):
    return all(
        all(len(m) >= 2 for m in poly)
        for poly in P.differential.values()
    )


def _identity_map(P):
    return {name: {(P.index[name],): _F1} for name in P.names}


def _psi_poly(poly, model, psi_polys, ambient_degrees):
    """Push a model polynomial through the generator images psi."""
    out = {}
    for mono, coef in poly.items():
        term = {(): _F1}
        for g in mono:
            term = _poly_mul(term, psi_polys[g], ambient_degrees)
            if not term:
                break
        _poly_add_into(out, term, coef)
    return out


def _tower_stage(P, model, psi, j):
    """One Sullivan stage; returns the generators it would adjoin.

    psi maps each model generator name to its image polynomial in P.
    Each returned entry is (name, degree, d_poly over the model's
    generator indices, image polynomial over P's generator indices).
    """
    A = _engine(P)
    M = _Engine(model)
    psi_polys = [psi[n] for n in model.names]
    adds = []
    fresh = itertools.count(len(model.names) + 1)

    def image_coords(deg, i):
        rep = M.h_rep_poly(deg, i)
        return A.project_poly(
            _psi_poly(rep, model, psi_polys, P.degrees), deg)

    for deg in range(1, j + 1):
        span = _Echelon()
        for i in range(M.betti(deg)):
            span.insert(image_coords(deg, i))
        for i in range(A.betti(deg)):
            if span.insert({i: _F1}):
                adds.append((
                    f"v{next(fresh)}", deg, {}, A.h_rep_poly(deg, i),
                ))

    for deg in range(2, j + 2):
        pivots = {}
        kernel = []
        for i in range(M.betti(deg)):
            row = image_coords(deg, i)
            wit = {i: _F1}
            while row:
                c = min(row)
                entry = pivots.get(c)
                if entry is None:
                    inv = _F1 / row[c]
                    pivots[c] = (
                        {cc: v * inv for cc, v in row.items()},
                        {cc: v * inv for cc, v in wit.items()},
                    )
                    break
                coef = row.pop(c)
                _submul(row, entry[0], coef, c)
                _submul(wit, entry[1], coef, None)
            else:
                kernel.append(wit)
        for combo in kernel:
            z_poly = {}
            for i, c in combo.items():
                _poly_add_into(z_poly, M.h_rep_poly(deg, i), c)
            image = _psi_poly(z_poly, model, psi_polys, P.degrees)
            w = A.solve_d(image, deg) if image else {}
            adds.append((f"v{next(fresh)}", deg - 1, z_poly, w))

    return adds


def _tower(P, j, degree_cap, stage_cap):
    if j < 1:
        raise InvalidInput("j must be >= 1")
    if degree_cap is None:
        degree_cap = max(P.formal_dimension, j)
    if _is_minimal(P) and all(d <= j for d in P.degrees):
        return P, _identity_map(P), True

    gens = []
    diffs = {}
    psi = {}
    model = CdgaPresentation(gens, diffs, P.formal_dimension)
    for _ in range(stage_cap):
        adds = _tower_stage(P, model, psi, j)
        if not adds:
            _check_chain_map(P, model, psi)
            return model, psi, True
        for name, degree, dpoly, image in adds:
            if degree > degree_cap:
                raise NotStabilized(
                    f"tower needs a degree-{degree} generator beyond the "
                    f"cap {degree_cap}",
                    partial=(model, psi),
                )
            gens.append((name, degree))
            if dpoly:
                diffs[name] = dpoly
            psi[name] = image
        model = CdgaPresentation(gens, diffs, P.formal_dimension)
    raise NotStabilized(
        f"tower did not stabilize within {stage_cap} stages",
        partial=(model, psi),
    )


def _check_chain_map(P, model, psi):
    psi_polys = [psi[n] for n in model.names]
    A = _engine(P)
    for g, name in enumerate(model.names):
        dg = model.differential.get(name, {})
        lhs = _psi_poly(dg, model, psi_polys, P.degrees)
        rhs = _d_poly(psi_polys[g], A.dpolys, P.degrees)
        diff = dict(lhs)
        _poly_add_into(diff, rhs, -_F1)
        if diff:
            raise Inconsistent(f"tower map fails to commute with d on {name}")


def _model(P, j, degree_cap=None, stage_cap=32):
    eng = _engine(P)
    got = eng._models.get(j)
    if got is None:
        got = _tower(P, j, degree_cap, stage_cap)
        eng._models[j] = got
    return got


def j_minimal_model(P, j, degree_cap=None, stage_cap=32):
    """Free model with H^{<=j} matched and H^{j+1} injectively mapped.

    Returns (model presentation, generator image map as polynomial
    text, stabilized).  When the input is already minimal and
    generated in degrees <= j the input itself is returned.
    """
    model, psi, stabilized = _model(P, j, degree_cap, stage_cap)
    text = {
        name: format_poly(poly, P.names) for name, poly in psi.items()
    }
    return model, text, stabilized


def r_jk(P, j, k):
    """Rank of the map H^k(model) -> H^k(P) for the j-minimal model."""
    if k < 0:
        raise InvalidInput("k must be a natural")
    model, psi, _ = _model(P, j)
    A = _engine(P)
    if model is P:
        return A.betti(k)
    M = _Engine(model)
    psi_polys = [psi[n] for n in model.names]
    span = _Echelon()
    for i in range(M.betti(k)):
        rep = M.h_rep_poly(k, i)
        span.insert(A.project_poly(
            _psi_poly(rep, model, psi_polys, P.degrees), k))
    return span.rank


@dataclass
class ObstructionRow:
    r_jk: int
    d_jk: int

    @property
    def slack(self):
        return self.r_jk - self.d_jk


@dataclass
class ObstructionReport:
    j: int
    cup_hypothesis: bool
    rows: dict
    verdict: str
    blocked_at: tuple = ()


def _check_poincare_duality(P):
    eng = _engine(P)
    n2 = P.formal_dimension
    if eng.betti(n2) != 1:
        raise NoPoincareDuality(
            f"b_{n2} = {eng.betti(n2)}, expected 1")
    for k in range(n2 // 2 + 1):
        bk = eng.betti(k)
        bo = eng.betti(n2 - k)
        if bk != bo:
            raise NoPoincareDuality(
                f"b_{k} = {bk} but b_{n2 - k} = {bo}")
        ech = _Echelon()
        for i in range(bk):
            row = {}
            for l in range(bo):
                coords = eng.cup_coords(k, i, n2 - k, l)
                if coords:
                    row[l] = coords[0]
            if row:
                ech.insert(row)
        if ech.rank != bk:
            raise NoPoincareDuality(
                f"cup pairing degenerate in degrees ({k}, {n2 - k})")


def obstruction(P, j):
    """Decide whether a j-controlled structure is homotopically blocked."""
    if j < 1:
        raise InvalidInput("j must be >= 1")
    n2 = P.formal_dimension
    if n2 < 2 or n2 % 2:
        raise InvalidInput(
            f"formal dimension must be even and >= 2, got {n2}")
    _check_poincare_duality(P)
    cup_ok = d_jk(P, j, j + 1) == 0
    rows = {}
    for k in range(j + 1, n2 + 1):
        r = r_jk(P, j, k)
        d = d_jk(P, j, k)
        if d > r:
            raise Inconsistent(
                f"d_j^k = {d} exceeds r_j^k = {r} at k = {k}")
        rows[k] = ObstructionRow(r, d)
    if not cup_ok:
        return ObstructionReport(j, False, rows, "hypothesis_failed")
    window = range(max(j + 1, n2 - j), n2 + 1)
    blocked = tuple(k for k in window if rows[k].slack > 0)
    verdict = "blocked" if blocked else "inconclusive"
    return ObstructionReport(j, True, rows, verdict, blocked)


@dataclass
class CompatibilityRow:
    r_jk: int
    d_jk: int
    ell: int

    @property
    def slack(self):
        return self.r_jk - self.d_jk

    @property
    def exceeded(self):
        return self.slack > self.ell


@dataclass
class CompatibilityReport:
    j: int
    cup_hypothesis: bool
    rows: dict
    verdict: str
    excluded_at: tuple = ()


def compatibility(P, j, A):
    """Test a candidate bicomplex against the bound slack <= ell_k.

    A j-controlled structure with the E1-isotype of A forces
    r_j^k - d_j^k <= ell_k(A) in every degree k > j; any violation
    excludes the candidate.
    """
    base = obstruction(P, j)
    ell_table = ell(A)
    rows = {}
    for k, row in base.rows.items():
        rows[k] = CompatibilityRow(row.r_jk, row.d_jk, ell_table.get(k, 0))
    if not base.cup_hypothesis:
        return CompatibilityReport(j, False, rows, "hypothesis_failed")
    excluded = tuple(k for k in sorted(rows) if rows[k].exceeded)
    verdict = "excluded" if excluded else "not_excluded"
    return CompatibilityReport(j, True, rows, verdict, excluded)


# ---------------------------------------------------------------------------
# Presets.

_FILIFORM_RE = re.compile(r"filiform\((\d+)\)\Z")


def preset(name):
    """Named example presentations; filiform takes its dimension inline."""
    m = _FILIFORM_RE.match(name)
    if m:
        n2 = int(m.group(1))
        if n2 < 4 or n2 % 2:
            raise UnknownPreset(
                f"filiform dimension must be an even number >= 4, got {n2}")
        gens = [(f"e{i}", 1) for i in range(1, n2 + 1)]
        d = {f"e{k}": f"e1*e{k - 1}" for k in range(3, n2 + 1)}
        return CdgaPresentation(gens, d, n2)
    six = [(f"e{i}", 1) for i in range(1, 7)]
    if name == "iwasawa":
        return CdgaPresentation(
            six, {"e5": "e1*e3-e2*e4", "e6": "e2*e3+e1*e4"}, 6)
    if name == "nil_m1":
        return CdgaPresentation(
            six,
            {"e3": "e1*e2", "e4": "e1*e3", "e5": "e2*e3",
             "e6": "e1*e4+e2*e5"},
            6)
    if name == "ex_k2_M":
        return CdgaPresentation(
            six,
            {"e3": "e1*e2", "e4": "e2*e3", "e5": "e2*e4",
             "e6": "e1*e5+e3*e4"},
            6)
    if name == "ex_k2_M_variant":
        return CdgaPresentation(
            six,
            {"e3": "e1*e2", "e4": "e2*e3", "e5": "e2*e4-e1*e3",
             "e6": "e1*e5+e3*e4"},
            6)
    raise UnknownPreset(
        f"unknown preset {name!r}; available: filiform(2n), iwasawa, "
        "nil_m1, ex_k2_M, ex_k2_M_variant")
