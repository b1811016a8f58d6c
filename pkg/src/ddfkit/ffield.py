"""Prime fields F_q and dense univariate polynomials over them.

FieldPoly is immutable: a tuple of int coefficients, lowest degree first,
in canonical form (no trailing zeros; the zero polynomial is the empty
tuple).  Arithmetic routes through the packed kernels in _coeffs.

Also provides the two composition primitives everything else leans on:
modular composition f(g(X)) mod h(X) via the classical square-root
blocking scheme, and fast multipoint evaluation over a quotient ring via
a subproduct tree.
"""

import math

import numpy as np

from . import _coeffs as k
from .numutil import is_prime

_MAX_Q = 1 << 62  # keeps int64 sums exact in the kernels


class PrimeField:
    """The field F_q for a machine-word-sized prime q."""

    __slots__ = ("q",)

    def __init__(self, q):
        q = int(q)
        if q < 2 or q >= _MAX_Q:
            raise ValueError(f"field modulus must satisfy 2 <= q < 2**62, got {q}")
        if not is_prime(q):
            raise ValueError(f"field modulus {q} is not prime")
        object.__setattr__(self, "q", q)

    def __setattr__(self, *_):
        raise AttributeError("PrimeField is immutable")

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.q == self.q

    def __hash__(self):
        return hash(("PrimeField", self.q))

    def __repr__(self):
        return f"PrimeField({self.q})"

    def inv(self, a):
        a %= self.q
        if a == 0:
            raise ZeroDivisionError("inverse of zero field element")
        return pow(a, self.q - 2, self.q)


class FieldPoly:
    """Dense univariate polynomial over a PrimeField, canonical form."""

    __slots__ = ("field", "coeffs", "_arr")

    def __init__(self, field, coeffs=()):
        q = field.q
        c = [int(x) % q for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", tuple(c))
        object.__setattr__(self, "_arr", None)

    def __setattr__(self, *_):
        raise AttributeError("FieldPoly is immutable")

    @classmethod
    def _raw(cls, field, canonical):
        """Build from an already-canonical list/tuple (no re-reduction)."""
        self = object.__new__(cls)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", tuple(canonical))
        object.__setattr__(self, "_arr", None)
        return self

    @classmethod
    def from_arr(cls, field, arr):
        return cls._raw(field, [int(x) for x in arr])

    @classmethod
    def zero(cls, field):
        return cls._raw(field, ())

    @classmethod
    def one(cls, field):
        return cls._raw(field, (1,))

    @classmethod
    def x(cls, field):
        return cls._raw(field, (0, 1))

    @classmethod
    def constant(cls, field, c):
        c = int(c) % field.q
        return cls._raw(field, (c,) if c else ())

    def arr(self):
        """numpy int64 view of the coefficients (cached; do not mutate)."""
        if self._arr is None:
            object.__setattr__(self, "_arr", np.array(self.coeffs, dtype=np.int64))
        return self._arr

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def is_one(self):
        return self.coeffs == (1,)

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def lead(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def monic(self):
        if self.is_zero():
            raise ValueError("cannot normalize the zero polynomial")
        if self.coeffs[-1] == 1:
            return self
        return FieldPoly.from_arr(self.field, k.scale(self.arr(), self.field.inv(self.coeffs[-1]), self.field.q))

    def _check(self, other):
        if not isinstance(other, FieldPoly):
            raise TypeError(f"expected FieldPoly, got {type(other).__name__}")
        if other.field != self.field:
            raise ValueError(f"field mismatch: F_{self.field.q} vs F_{other.field.q}")

    def __add__(self, other):
        self._check(other)
        return FieldPoly.from_arr(self.field, k.add(self.arr(), other.arr(), self.field.q))

    def __sub__(self, other):
        self._check(other)
        return FieldPoly.from_arr(self.field, k.sub(self.arr(), other.arr(), self.field.q))

    def __neg__(self):
        return FieldPoly.from_arr(self.field, k.scale(self.arr(), self.field.q - 1, self.field.q))

    def __mul__(self, other):
        self._check(other)
        return FieldPoly.from_arr(self.field, k.mul(self.arr(), other.arr(), self.field.q))

    def __divmod__(self, other):
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        quo, rem = k.divrem(self.arr(), other.arr(), self.field.q)
        return FieldPoly.from_arr(self.field, quo), FieldPoly.from_arr(self.field, rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other):
        return (
            isinstance(other, FieldPoly)
            and other.field == self.field
            and other.coeffs == self.coeffs
        )

    def __hash__(self):
        return hash((self.field.q, self.coeffs))

    def __repr__(self):
        return f"FieldPoly(q={self.field.q}, coeffs={list(self.coeffs)})"

    def evaluate(self, x):
        """Value at the field element x (Horner)."""
        q = self.field.q
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % q
        return acc

    def derivative(self):
        q = self.field.q
        return FieldPoly(self.field, [i * c % q for i, c in enumerate(self.coeffs)][1:])


# ---------------------------------------------------------------------------
# named operations


def poly_mul(a, b):
    """Product; inputs must share a field."""
    return a * b


def poly_divrem(a, b):
    """(quotient, remainder) with deg r < deg b; b nonzero."""
    return divmod(a, b)


def poly_gcd_monic(a, b):
    """Monic gcd; gcd(a, 0) = monic(a); raises for gcd(0, 0)."""
    a._check(b)
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    return FieldPoly.from_arr(a.field, k.gcd_monic(a.arr(), b.arr(), a.field.q))


_HORNER_COMP_CUTOFF = 24


def modcomp(f, g, h):
    """f(g(X)) mod h(X); h monic of degree >= 1.

    Square-root blocking: baby powers g^0..g^(m-1), one vectorized
    coefficient-combination pass per block, then a Horner sweep over g^m.
    """
    f._check(g)
    f._check(h)
    _require_modulus(h)
    ctx = k.ModContext(h.arr(), h.field.q)
    return FieldPoly.from_arr(f.field, _modcomp_arr(f.arr(), g.arr(), ctx))


def _require_modulus(h):
    if h.degree < 1:
        raise ValueError("modulus must have degree >= 1")
    if not h.is_monic():
        raise ValueError("modulus must be monic")


def _modcomp_arr(f, g, ctx):
    """Kernel-level modular composition; f, g raw arrays, g any length."""
    q, d = ctx.q, ctx.d
    g = ctx.rem(g)
    n = f.shape[0] - 1
    if n < 0:
        return f[:0]
    if n == 0:
        return f.copy()
    if n < _HORNER_COMP_CUTOFF:
        return _horner_comp_arr(f, g, ctx)
    m = math.isqrt(n) + 1
    nblocks = (n + 1 + m - 1) // m
    powers = [np.array([1], dtype=np.int64), g]
    for _ in range(m - 2):
        powers.append(ctx.mulmod(powers[-1], g))
    giant = ctx.mulmod(powers[-1], g) if m >= 2 else g
    pad = np.zeros(nblocks * m, dtype=np.int64)
    pad[: n + 1] = f
    fmat = pad.reshape(nblocks, m)
    if q <= 1 << 26:
        pmat = np.zeros((m, d), dtype=np.int64)
        for j, p in enumerate(powers):
            pmat[j, : p.shape[0]] = p
        blocks = fmat @ pmat % q  # (nblocks, d)
        block_list = [k.strip(row) for row in blocks]
    else:
        block_list = []
        for i in range(nblocks):
            acc = np.zeros(d, dtype=np.int64)
            for j in range(m):
                c = int(fmat[i, j])
                if c:
                    p = k.scale(powers[j], c, q)
                    acc[: p.shape[0]] = (acc[: p.shape[0]] + p) % q
            block_list.append(k.strip(acc))
    acc = block_list[-1].copy()
    for i in range(nblocks - 2, -1, -1):
        acc = ctx.mulmod(acc, giant)
        acc = k.add(acc, block_list[i], q)
    return acc


def _horner_comp_arr(f, g, ctx):
    acc = np.array([int(f[-1])], dtype=np.int64)
    for c in f[-2::-1]:
        acc = ctx.mulmod(acc, g)
        c = int(c)
        if c:
            acc = k.add(acc, np.array([c], dtype=np.int64), ctx.q)
    return k.strip(acc)


# ---------------------------------------------------------------------------
# quotient-ring polynomials and multipoint evaluation


class QuotientRingPoly:
    """Polynomial in Z with coefficients in F_q[X]/h; h monic, deg >= 1."""

    __slots__ = ("modulus", "coeffs")

    def __init__(self, modulus, coeffs):
        _require_modulus(modulus)
        reduced = []
        for c in coeffs:
            modulus._check(c)
            reduced.append(c % modulus if c.degree >= modulus.degree else c)
        while reduced and reduced[-1].is_zero():
            reduced.pop()
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "coeffs", tuple(reduced))

    def __setattr__(self, *_):
        raise AttributeError("QuotientRingPoly is immutable")

    @property
    def z_degree(self):
        return len(self.coeffs) - 1

    def __eq__(self, other):
        return (
            isinstance(other, QuotientRingPoly)
            and other.modulus == self.modulus
            and other.coeffs == self.coeffs
        )

    def __repr__(self):
        return f"QuotientRingPoly(mod={self.modulus!r}, z_degree={self.z_degree})"

    def matrix(self):
        d = self.modulus.degree
        out = np.zeros((len(self.coeffs), d), dtype=np.int64)
        for i, c in enumerate(self.coeffs):
            out[i, : len(c.coeffs)] = c.arr()
        return out

    def evaluate(self, point):
        """Horner evaluation at an element of the quotient ring."""
        self.modulus._check(point)
        ctx = k.ModContext(self.modulus.arr(), self.modulus.field.q)
        rows = self.matrix()
        u = ctx.rem(point.arr())
        val = _horner_rows(rows, u, ctx)
        return FieldPoly.from_arr(self.modulus.field, val)


def _horner_rows(rows, u, ctx):
    if rows.shape[0] == 0:
        return rows[:0].reshape(0)
    acc = k.strip(rows[-1])
    for i in range(rows.shape[0] - 2, -1, -1):
        acc = ctx.mulmod(acc, u)
        acc = k.add(acc, k.strip(rows[i]), ctx.q)
    return acc


def multipoint_eval_quotient(p, points):
    """Evaluate p(Z) at each point (elements of F_q[X]/h) via a subproduct
    tree over the quotient ring; agrees with per-point Horner evaluation."""
    points = list(points)
    for pt in points:
        p.modulus._check(pt)
    if not points:
        return []
    ctx = k.ModContext(p.modulus.arr(), p.modulus.field.q)
    pts = [ctx.rem(pt.arr()) for pt in points]
    vals = _multipoint_eval_rows(p.matrix(), pts, ctx)
    field = p.modulus.field
    return [FieldPoly.from_arr(field, v) for v in vals]


_TREE_LEAF_SIZE = 8  # switch to Horner below this many points


def _multipoint_eval_rows(P, pts, ctx):
    """Kernel-level multipoint evaluation.

    P: (rows, d) matrix for p(Z); pts: list of reduced coefficient arrays.
    Returns a list of coefficient arrays, one per point.  When there are
    many more points than deg(p), points are processed in blocks of about
    deg(p) so no subproduct-tree node exceeds the useful size.
    """
    n = len(pts)
    P = k.rz_strip(P)
    if P.shape[0] == 0:
        return [np.zeros(0, dtype=np.int64)] * n
    if n <= _TREE_LEAF_SIZE or P.shape[0] <= 2:
        return [_horner_rows(P, u, ctx) for u in pts]
    block = max(P.shape[0], 2 * _TREE_LEAF_SIZE)
    if n > 2 * block:
        out = []
        for i in range(0, n, block):
            out.extend(_multipoint_eval_rows(P, pts[i : i + block], ctx))
        return out
    tree = _build_tree(pts, ctx)
    return _descend(_rem_node(P, tree, ctx), tree, ctx)


def linear_root_product(pts, ctx):
    """Monic product of (Z - u) over pts as an (n+1, d) matrix."""
    q = ctx.q
    rows = [np.array([1], dtype=np.int64)]
    for u in pts:
        nxt = []
        for i in range(len(rows) + 1):
            shifted = rows[i - 1] if i >= 1 else None
            scaled = ctx.mulmod(rows[i], u) if i < len(rows) else None
            if shifted is None:
                v = k.scale(scaled, q - 1, q)
            elif scaled is None:
                v = shifted.copy()
            else:
                v = k.sub(shifted, scaled, q)
            nxt.append(v)
        rows = nxt
    M = np.zeros((len(rows), ctx.d), dtype=np.int64)
    for i, r in enumerate(rows):
        M[i, : r.shape[0]] = r
    return M


def _build_tree(pts, ctx, is_root=True):
    """Subproduct tree node with the series inverse of the reversed modulus
    precomputed to the node's own length.

    Inverses chain multiplicatively: rev(M) = rev(M_left) * rev(M_right),
    so a node inverse is one truncated product of the child inverses plus
    a single Newton doubling, instead of a full Newton ladder per node.
    The root inverse is skipped (the incoming polynomial is shorter).
    """
    n = len(pts)
    if n <= _TREE_LEAF_SIZE:
        M = linear_root_product(pts, ctx)
        node = {"M": M, "inv": None, "children": None, "pts": pts}
        if not is_root:
            node["inv"] = _series_inv_rows(M[::-1].copy(), n + 1, ctx)
        return node
    mid = n // 2
    left = _build_tree(pts[:mid], ctx, is_root=False)
    right = _build_tree(pts[mid:], ctx, is_root=False)
    M = k.rz_mul(left["M"], right["M"], ctx)
    node = {"M": M, "inv": None, "children": (left, right), "pts": pts}
    if not is_root:
        prec0 = min(left["inv"].shape[0], right["inv"].shape[0])
        v = k.rz_mul_trunc(left["inv"], right["inv"], prec0, ctx)
        node["inv"] = _newton_step_rows(M[::-1].copy(), v, n + 1, ctx)
    return node


def _series_inv_rows(F, kneed, ctx):
    """Schoolbook series inverse over the quotient ring for short inputs;
    F[0] must be 1 (reversed monic modulus)."""
    q, d = ctx.q, ctx.d
    out = np.zeros((kneed, d), dtype=np.int64)
    out[0, 0] = 1
    nf = F.shape[0]
    for i in range(1, kneed):
        acc = np.zeros(0, dtype=np.int64)
        for j in range(max(0, i - nf + 1), i):
            fi = k.strip(F[i - j])
            if fi.shape[0] == 0:
                continue
            acc = k.add(acc, ctx.mulmod(k.strip(out[j]), fi), q)
        neg = k.scale(acc, q - 1, q)
        out[i, : neg.shape[0]] = neg
    return out


def _newton_step_rows(F, v, kneed, ctx):
    """One Newton refinement of a series inverse v of F, to precision kneed."""
    while v.shape[0] < kneed:
        prec = min(2 * v.shape[0], kneed)
        t = k.rz_mul_trunc(F[:prec], v, prec, ctx)
        t = -t % ctx.q
        t[0, 0] = (t[0, 0] + 2) % ctx.q
        v = k.rz_mul_trunc(v, t, prec, ctx)
    return v[:kneed]


def _rem_node(P, node, ctx):
    zm = node["M"].shape[0]
    if P.shape[0] < zm:
        return P
    kneed = P.shape[0] - zm + 1
    if node["inv"] is None or node["inv"].shape[0] < kneed:
        node["inv"] = _newton_step_rows(
            node["M"][::-1].copy(),
            node["inv"] if node["inv"] is not None else k.rz_series_inv(node["M"][::-1].copy(), 1, ctx),
            kneed,
            ctx,
        )
    return k.rz_rem(P, node["M"], node["inv"][:kneed], ctx)


def _descend(P, node, ctx):
    if node["children"] is None:
        Ps = k.rz_strip(P)
        return [_horner_rows(Ps, u, ctx) for u in node["pts"]]
    left, right = node["children"]
    return _descend(_rem_node(P, left, ctx), left, ctx) + _descend(
        _rem_node(P, right, ctx), right, ctx
    )


# ---------------------------------------------------------------------------
# polynomial text format: one line "q=<prime>; <c0>,<c1>,...,<cd>"


def parse_poly_text(line):
    """Parse the CLI polynomial format; rejects trailing zeros and
    out-of-range coefficients."""
    text = line.strip()
    if ";" not in text:
        raise ValueError("polynomial text must look like 'q=<prime>; c0,c1,...'")
    head, _, body = text.partition(";")
    head = head.strip()
    if not head.startswith("q="):
        raise ValueError("polynomial text must start with 'q='")
    q = int(head[2:].strip())
    field = PrimeField(q)
    body = body.strip()
    if not body:
        return FieldPoly.zero(field)
    coeffs = []
    for tok in body.split(","):
        c = int(tok.strip())
        if not 0 <= c < q:
            raise ValueError(f"coefficient {c} out of range [0, {q})")
        coeffs.append(c)
    if coeffs[-1] == 0:
        raise ValueError("trailing zero coefficient (polynomial not canonical)")
    return FieldPoly._raw(field, coeffs)


def format_poly_text(p):
    body = ",".join(str(c) for c in p.coeffs)
    return f"q={p.field.q}; {body}" if body else f"q={p.field.q};"
