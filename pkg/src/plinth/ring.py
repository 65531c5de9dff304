"""Exact sparse multivariate polynomial arithmetic over prime fields F_p.

Representation: a polynomial is a dict mapping exponent tuples to nonzero
coefficients in [1, p).  Exponent tuples have one entry per variable of the
ambient VarTable, in table order.  Polynomials are immutable after
construction; every operation returns a fresh object.  Two polynomials are
equal iff their tables agree (same p, same variable names in the same order)
and their term dicts are identical, so canonical form is automatic.

Characteristic-p structure is exploited throughout: (f+g)^p = f^p + g^p means
f^(p^k) is just an exponent scaling, and pow() splits exponents in base p so
only digits below p ever cost multiplications.  Large products switch from
dict convolution to Kronecker-substitution packing: scatter coefficients into
a mixed-radix integer, multiply (GMP does this with FFT), unpack mod p with
numpy.  Both paths are exact.
"""

from __future__ import annotations

import heapq
from itertools import chain
from math import comb, prod
from operator import add as _addop

import numpy as np

try:
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    _mpz = int


class AmbientMismatch(ValueError):
    """Operands live over different variable tables."""


class NotDivisible(ArithmeticError):
    """Exact division failed; .remainder holds the nonzero remainder."""

    def __init__(self, remainder):
        super().__init__("not divisible; remainder %s" % (remainder,))
        self.remainder = remainder


def _is_prime(n):
    # deterministic Miller-Rabin, valid for n < 3,215,031,751 (covers p < 2^31)
    if n < 2:
        return False
    for q in (2, 3, 5, 7):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def fresh_name(table, stem):
    """A variable name based on stem that does not collide with table names."""
    nm = stem
    k = 0
    while nm in table.index:
        k += 1
        nm = "%s%d" % (stem, k)
    return nm


def grevlex_key(exps):
    """Sort key for graded reverse lexicographic order (ascending)."""
    return (sum(exps), tuple(-e for e in reversed(exps)))


def _grevlex_negkey(exps):
    # elementwise negation of grevlex_key, for min-heap max extraction
    return (-sum(exps), tuple(reversed(exps)))


class VarTable:
    """An ordered set of variable names over F_p.  Value semantics."""

    __slots__ = ("p", "names", "index", "_zero_mono")

    def __init__(self, p, names):
        p = int(p)
        if not (2 <= p < 2**31) or not _is_prime(p):
            raise ValueError("p must be a prime with 2 <= p < 2^31, got %r" % (p,))
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names: %r" % (names,))
        for nm in names:
            if not nm or not nm[0].isalpha() or not nm.replace("_", "").isalnum():
                raise ValueError("bad variable name %r" % (nm,))
        self.p = p
        self.names = names
        self.index = {nm: i for i, nm in enumerate(names)}
        self._zero_mono = (0,) * len(names)

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, VarTable) and self.p == other.p and self.names == other.names

    def __hash__(self):
        return hash((self.p, self.names))

    def __repr__(self):
        return "VarTable(p=%d, %s)" % (self.p, ",".join(self.names))

    def __len__(self):
        return len(self.names)

    def extend(self, extra):
        return VarTable(self.p, self.names + tuple(extra))

    def zero(self):
        return MultiPoly(self, {})

    def one(self):
        return self.const(1)

    def const(self, c):
        c = int(c) % self.p
        if c == 0:
            return MultiPoly(self, {})
        return MultiPoly(self, {self._zero_mono: c})

    def var(self, name):
        i = self.index.get(name)
        if i is None:
            raise KeyError("no variable %r in %r" % (name, self))
        mono = tuple(1 if j == i else 0 for j in range(len(self.names)))
        return MultiPoly(self, {mono: 1})

    def gens(self):
        return tuple(self.var(nm) for nm in self.names)

    def monomial(self, exps, coeff=1):
        if isinstance(exps, dict):
            mono = [0] * len(self.names)
            for nm, e in exps.items():
                mono[self.index[nm]] = int(e)
            exps = tuple(mono)
        else:
            exps = tuple(int(e) for e in exps)
        if len(exps) != len(self.names) or any(e < 0 for e in exps):
            raise ValueError("bad exponent vector %r" % (exps,))
        c = int(coeff) % self.p
        if c == 0:
            return self.zero()
        return MultiPoly(self, {exps: c})

    def from_terms(self, terms):
        p = self.p
        n = len(self.names)
        out = {}
        for mono, c in terms.items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != n or any(e < 0 for e in mono):
                raise ValueError("bad exponent vector %r" % (mono,))
            c = (out.get(mono, 0) + int(c)) % p
            if c:
                out[mono] = c
            else:
                out.pop(mono, None)
        return MultiPoly(self, out)


# ---------------------------------------------------------------------------
# low-level term-dict kernels


def _mul_dict(A, B, p):
    if len(A) > len(B):
        A, B = B, A
    out = {}
    get = out.get
    for ma, ca in A.items():
        for mb, cb in B.items():
            m = tuple(map(_addop, ma, mb))
            v = get(m)
            out[m] = ca * cb if v is None else v + ca * cb
    return {m: r for m, v in out.items() if (r := v % p)}


_KRON_PAIR_CUTOFF = 2_000_000
_KRON_FIELD_BYTES_CAP = 300_000_000


def _kron_mul(A, B, p, nvars):
    """Kronecker-substitution product of two term dicts, or None if unsuitable.

    Packs each operand into a mixed-radix big integer sized to the product's
    per-variable degree box, multiplies the integers, and unpacks fields mod p.
    Field width is chosen so convolution sums cannot overflow a field.
    """
    amax = [0] * nvars
    bmax = [0] * nvars
    for m in A:
        for i, e in enumerate(m):
            if e > amax[i]:
                amax[i] = e
    for m in B:
        for i, e in enumerate(m):
            if e > bmax[i]:
                bmax[i] = e
    box = [amax[i] + bmax[i] + 1 for i in range(nvars)]
    bound = min(len(A), len(B)) * (p - 1) * (p - 1)
    if bound < 2**31:
        width, dtype = 4, np.uint32
    elif bound < 2**63:
        width, dtype = 8, np.uint64
    else:
        return None
    strides = [1] * nvars
    for i in range(1, nvars):
        strides[i] = strides[i - 1] * box[i - 1]
    lp = sum((box[i] - 1) * strides[i] for i in range(nvars)) + 1
    if lp * width > _KRON_FIELD_BYTES_CAP:
        return None

    sv = np.array(strides, dtype=np.int64)

    def pack(T, tmax):
        n = len(T)
        exps = np.fromiter(chain.from_iterable(T.keys()), dtype=np.int64, count=n * nvars)
        exps = exps.reshape(n, nvars)
        idx = exps @ sv
        length = int(sum((tmax[i]) * strides[i] for i in range(nvars))) + 1
        buf = np.zeros(length, dtype=dtype)
        buf[idx] = np.fromiter(T.values(), dtype=dtype, count=n)
        return int.from_bytes(buf.tobytes(), "little")

    pa = _mpz(pack(A, amax))
    pb = _mpz(pack(B, bmax))
    prod_int = int(pa * pb)
    buf = prod_int.to_bytes(lp * width, "little")
    arr = np.frombuffer(buf, dtype=dtype)
    vals = (arr % p).astype(np.int64)
    nz = np.flatnonzero(vals)
    if nz.size == 0:
        return {}
    coeffs = vals[nz]
    rem = nz.astype(np.int64)
    cols = []
    for i in range(nvars - 1, -1, -1):
        cols.append(rem // strides[i])
        rem = rem % strides[i]
    cols.reverse()
    expmat = np.stack(cols, axis=1).tolist()
    cl = coeffs.tolist()
    return {tuple(m): c for m, c in zip(expmat, cl)}


def _mul_terms(A, B, p, nvars):
    if not A or not B:
        return {}
    if len(A) * len(B) > _KRON_PAIR_CUTOFF:
        out = _kron_mul(A, B, p, nvars)
        if out is not None:
            return out
    return _mul_dict(A, B, p)


def _frob_terms(T, q):
    if q == 1:
        return dict(T)
    return {tuple(e * q for e in m): c for m, c in T.items()}


def _scale_terms(T, c, p):
    c %= p
    if c == 0:
        return {}
    if c == 1:
        return dict(T)
    return {m: c * v % p for m, v in T.items()}


def _add_terms(A, B, p):
    out = dict(A)
    for m, c in B.items():
        v = (out.get(m, 0) + c) % p
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


class MultiPoly:
    """Immutable sparse polynomial over a VarTable."""

    __slots__ = ("table", "terms", "_hash", "_sorted")

    def __init__(self, table, terms):
        self.table = table
        self.terms = terms
        self._hash = None
        self._sorted = None

    # -- basic queries ------------------------------------------------------

    @property
    def p(self):
        return self.table.p

    def is_zero(self):
        return not self.terms

    def is_one(self):
        return self.terms == {self.table._zero_mono: 1}

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and self.table._zero_mono in self.terms)

    def constant_coeff(self):
        return self.terms.get(self.table._zero_mono, 0)

    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def degree_in(self, name):
        if not self.terms:
            return -1
        i = self.table.index[name]
        return max(m[i] for m in self.terms)

    def uses(self, name):
        i = self.table.index[name]
        return any(m[i] for m in self.terms)

    def sorted_terms(self):
        """Terms as ((exps, coeff), ...) ascending under grevlex."""
        if self._sorted is None:
            items = sorted(self.terms.items(), key=lambda t: grevlex_key(t[0]))
            self._sorted = tuple(items)
        return self._sorted

    def lead(self):
        """Leading (monomial, coeff) under grevlex; None for zero."""
        if not self.terms:
            return None
        m = max(self.terms, key=grevlex_key)
        return m, self.terms[m]

    def coeff_of(self, exps):
        return self.terms.get(tuple(exps), 0)

    def term_count(self):
        return len(self.terms)

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if self.table != other.table:
                raise AmbientMismatch("%r vs %r" % (self.table, other.table))
            return other
        if isinstance(other, int):
            return self.table.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return MultiPoly(self.table, _add_terms(self.terms, other.terms, self.p))

    __radd__ = __add__

    def __neg__(self):
        p = self.p
        return MultiPoly(self.table, {m: p - c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.terms, other.terms
        if len(a) == 1:
            (m, c), = a.items()
            if m == self.table._zero_mono:
                return MultiPoly(self.table, _scale_terms(b, c, self.p))
        if len(b) == 1:
            (m, c), = b.items()
            if m == self.table._zero_mono:
                return MultiPoly(self.table, _scale_terms(a, c, self.p))
        return MultiPoly(self.table, _mul_terms(a, b, self.p, len(self.table)))

    __rmul__ = __mul__

    def __pow__(self, e):
        e = int(e)
        if e < 0:
            raise ValueError("negative exponent %d" % e)
        if e == 0:
            return self.table.one()
        if e == 1:
            return self
        if not self.terms:
            return self
        if len(self.terms) == 1:
            (m, c), = self.terms.items()
            return MultiPoly(self.table, {tuple(v * e for v in m): pow(c, e, self.p)})
        p = self.p
        result = None
        k = 0
        while e:
            e, digit = divmod(e, p)
            if digit:
                base = MultiPoly(self.table, _frob_terms(self.terms, p**k)) if k else self
                part = base._small_pow(digit)
                result = part if result is None else result * part
            k += 1
        return result

    def _small_pow(self, e):
        # binary powering; used for exponents below p
        result = None
        base = self
        while e:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def frobenius(self, k=1):
        """f -> f^(p^k) by exponent scaling."""
        if k < 0:
            raise ValueError("negative Frobenius power")
        return MultiPoly(self.table, _frob_terms(self.terms, self.p**k))

    def __eq__(self, other):
        if isinstance(other, int):
            return self.terms == self.table.const(other).terms
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.table == other.table and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.table, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- calculus and structure ---------------------------------------------

    def diff(self, name):
        """Formal partial derivative with respect to a variable."""
        i = self.table.index[name]
        p = self.p
        out = {}
        for m, c in self.terms.items():
            e = m[i]
            cc = c * e % p
            if cc:
                out[m[:i] + (e - 1,) + m[i + 1:]] = cc
        return MultiPoly(self.table, out)

    def taylor_coeffs(self, name):
        """Coefficients P_0..P_d with P(.., v+U, ..) = sum_j P_j U^j.

        P_0 is P itself and P_1 is the partial derivative, in any
        characteristic.
        """
        i = self.table.index[name]
        p = self.p
        d = self.degree_in(name)
        if d < 0:
            return [self]
        rows = [{} for _ in range(d + 1)]
        for m, c in self.terms.items():
            e = m[i]
            for j in range(e + 1):
                bc = comb(e, j) % p
                if not bc:
                    continue
                mm = m[:i] + (e - j,) + m[i + 1:]
                row = rows[j]
                v = (row.get(mm, 0) + c * bc) % p
                if v:
                    row[mm] = v
                else:
                    row.pop(mm, None)
        while len(rows) > 1 and not rows[-1]:
            rows.pop()
        return [MultiPoly(self.table, r) for r in rows]

    def split_by(self, name):
        """Decompose as sum_e coeff_e * name^e; returns {e: coeff_e}.

        Coefficient polynomials live in the same table with the variable's
        exponent zeroed out.
        """
        i = self.table.index[name]
        out = {}
        for m, c in self.terms.items():
            e = m[i]
            mm = m[:i] + (0,) + m[i + 1:]
            out.setdefault(e, {})[mm] = c
        return {e: MultiPoly(self.table, t) for e, t in sorted(out.items())}

    def evaluate(self, point):
        """Evaluate at a point given as {name: int}; returns an int in [0, p)."""
        p = self.p
        vals = []
        for nm in self.table.names:
            if nm in point:
                vals.append(int(point[nm]) % p)
            elif self.uses(nm):
                raise KeyError("no value for variable %r" % (nm,))
            else:
                vals.append(0)
        total = 0
        for m, c in self.terms.items():
            v = c
            for x, e in zip(vals, m):
                if e:
                    v = v * pow(x, e, p) % p
            total = (total + v) % p
        return total

    def transfer(self, new_table, rename=None):
        """Re-express over another table, matching variables by name.

        Fails if a variable actually used has no image in the new table.
        Optional rename maps old names to new ones first.
        """
        if new_table == self.table and not rename:
            return self
        rename = rename or {}
        n_new = len(new_table)
        colmap = []
        for i, nm in enumerate(self.table.names):
            nm2 = rename.get(nm, nm)
            j = new_table.index.get(nm2)
            if j is None:
                if self.uses(nm):
                    raise AmbientMismatch(
                        "variable %r used but absent from %r" % (nm2, new_table))
                colmap.append(None)
            else:
                colmap.append(j)
        out = {}
        for m, c in self.terms.items():
            mm = [0] * n_new
            for i, e in enumerate(m):
                if e:
                    mm[colmap[i]] = e
            key = tuple(mm)
            v = (out.get(key, 0) + c) % new_table.p
            if v:
                out[key] = v
            else:
                out.pop(key, None)
        return MultiPoly(new_table, out)

    # -- division -----------------------------------------------------------

    def exact_div(self, divisor):
        """Exact quotient self/divisor; raises NotDivisible with remainder."""
        divisor = self._coerce(divisor)
        if divisor is NotImplemented:
            raise TypeError("cannot divide by %r" % (divisor,))
        if divisor.is_zero():
            raise ZeroDivisionError("exact_div by zero")
        if not self.terms:
            return self
        p = self.p
        dlm, dlc = divisor.lead()
        lcinv = pow(dlc, p - 2, p)
        if len(divisor.terms) == 1:
            quot = {}
            rem = {}
            for m, c in self.terms.items():
                q = tuple(map(int.__sub__, m, dlm))
                if all(e >= 0 for e in q):
                    quot[q] = c * lcinv % p
                else:
                    rem[m] = c
            if rem:
                raise NotDivisible(MultiPoly(self.table, rem))
            return MultiPoly(self.table, quot)
        dtail = [(m, c) for m, c in divisor.terms.items() if m != dlm]
        work = dict(self.terms)
        heap = [_grevlex_negkey(m) + (m,) for m in work]
        heapq.heapify(heap)
        push = heapq.heappush
        pop = heapq.heappop
        quot = {}
        rem = {}
        while heap:
            m = pop(heap)[-1]
            c = work.pop(m, 0)
            if not c:
                continue
            qm = tuple(map(int.__sub__, m, dlm))
            if any(e < 0 for e in qm):
                rem[m] = c
                continue
            qc = c * lcinv % p
            quot[qm] = qc
            for tm, tc in dtail:
                mm = tuple(map(_addop, qm, tm))
                old = work.get(mm)
                v = (old if old else 0) - qc * tc
                v %= p
                if v:
                    if old is None:
                        push(heap, _grevlex_negkey(mm) + (mm,))
                    work[mm] = v
                else:
                    work.pop(mm, None)
        if rem:
            raise NotDivisible(MultiPoly(self.table, rem))
        return MultiPoly(self.table, quot)

    def divides(self, other):
        try:
            other.exact_div(self)
            return True
        except NotDivisible:
            return False

    def monic(self):
        """Scale so the grevlex leading coefficient is 1."""
        if not self.terms:
            return self
        _, lc = self.lead()
        if lc == 1:
            return self
        inv = pow(lc, self.p - 2, self.p)
        return MultiPoly(self.table, _scale_terms(self.terms, inv, self.p))

    # -- rendering ----------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        names = self.table.names
        parts = []
        for m, c in self.sorted_terms():
            factors = []
            for nm, e in zip(names, m):
                if e == 1:
                    factors.append(nm)
                elif e > 1:
                    factors.append("%s^%d" % (nm, e))
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append("%d*%s" % (c, "*".join(factors)))
        return " + ".join(parts)

    def __repr__(self):
        s = str(self)
        if len(s) > 120:
            s = s[:117] + "..."
        return "<%s (F_%d, %d terms)>" % (s, self.p, len(self.terms))


# ---------------------------------------------------------------------------
# substitution


def substitute(f, images, target=None):
    """Apply the ring map sending each variable to a given image polynomial.

    images maps variable names to MultiPoly values over a common target
    table; names omitted map to the same-named generator of the target.
    Exponents are split into base-p digits so that high powers ride on
    Frobenius (exponent scaling) rather than repeated multiplication.
    """
    table = f.table
    p = table.p
    for v in images.values():
        if target is None:
            target = v.table
        elif target != v.table:
            raise AmbientMismatch("images over mixed tables")
    if target is None:
        target = table
    imglist = []
    for nm in table.names:
        if nm in images:
            imglist.append(images[nm])
        else:
            if nm not in target.index and f.uses(nm):
                raise AmbientMismatch("no image for variable %r" % (nm,))
            imglist.append(target.var(nm) if nm in target.index else target.zero())

    pow_cache = {}

    def var_power(i, e):
        key = (i, e)
        got = pow_cache.get(key)
        if got is None:
            got = pow_cache[key] = imglist[i] ** e
        return got

    prod_cache = {}

    def eps_product(eps):
        got = prod_cache.get(eps)
        if got is not None:
            return got
        acc = None
        for i, e in enumerate(eps):
            if not e:
                continue
            fac = var_power(i, e)
            acc = fac if acc is None else acc * fac
        if acc is None:
            acc = target.one()
        prod_cache[eps] = acc
        return acc

    def run(terms):
        if not terms:
            return {}
        buckets = {}
        high = False
        for m, c in terms.items():
            eps = tuple(e % p for e in m)
            q = tuple(e // p for e in m)
            if any(q):
                high = True
            buckets.setdefault(eps, {})[q] = c
        acc = {}
        if not high:
            for eps, sub in buckets.items():
                c = sub[(0,) * len(table)]
                acc = _add_terms(acc, _scale_terms(eps_product(eps).terms, c, p), p)
            return acc
        for eps, sub in buckets.items():
            part = _frob_terms(run(sub), p)
            part = _mul_terms(part, eps_product(eps).terms, p, len(target))
            acc = _add_terms(acc, part, p)
        return acc

    return MultiPoly(target, run(f.terms))


# module-level op aliases mirroring the method API


def exact_div(f, g):
    return f.exact_div(g)


def diff(f, name):
    return f.diff(name)


def taylor_coeffs(f, name):
    return f.taylor_coeffs(name)


def evaluate(f, point):
    return f.evaluate(point)
