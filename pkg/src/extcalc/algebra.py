"""Exact combinatorial and metric operations on graded multivectors.

Everything here is built on flat (k, n) space-time: the first ``k`` canonical
axes are time-like (squared norm -1), the remaining ``n`` are space-like
(squared norm +1).  A grade-m multivector is a sparse association from
strictly increasing index lists of length m to real or complex coefficients.
Coefficients keep their Python numeric type, so basis-blade computations done
with integers stay exact; this is what makes the exhaustive identity suite
report residual zero rather than float dust.

All values are immutable after construction and every operation is a pure
function, so the module is safe for unrestricted concurrent use.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterable, Iterator, Mapping

__all__ = [
    "SpacetimeSignature",
    "Multivector",
    "Bitensor",
    "IdentityReport",
    "sort_with_sign",
    "merge_with_sign",
    "dot",
    "wedge",
    "left_interior",
    "right_interior",
    "hodge",
    "inv_hodge",
    "cross",
    "vec_interior_bitensor",
    "odot",
    "owedge",
    "verify_identities",
]

# Relative threshold below which coefficients are dropped after an operation.
PRUNE_REL = 1e-14

# verify_identities refuses to enumerate beyond this many dimensions.
IDENTITY_DIM_CAP = 6


class GradeError(ValueError):
    """Operands have incompatible grades for the requested operation."""


class SignatureError(ValueError):
    """Operands live in different (k, n) space-times."""


@dataclass(frozen=True)
class SpacetimeSignature:
    """Flat metric with k time axes (norm -1) and n space axes (norm +1)."""

    k: int
    n: int

    def __post_init__(self):
        if self.k < 0 or self.n < 0 or self.k + self.n < 1:
            raise ValueError(f"need k >= 0, n >= 0, k + n >= 1, got ({self.k}, {self.n})")

    @property
    def dim(self) -> int:
        return self.k + self.n

    def metric(self, i: int) -> int:
        """Diagonal metric entry for axis i: -1 time-like, +1 space-like."""
        if not 0 <= i < self.dim:
            raise IndexError(f"axis {i} out of range for dimension {self.dim}")
        return -1 if i < self.k else 1

    def metric_list(self, indices: Iterable[int]) -> int:
        """Product of metric entries over an index list (the Delta_II factor)."""
        sign = 1
        for i in indices:
            sign *= self.metric(i)
        return sign

    def axes(self) -> range:
        return range(self.dim)

    def index_lists(self, grade: int) -> Iterator[tuple[int, ...]]:
        """All strictly increasing index lists of the given grade."""
        return combinations(range(self.dim), grade)


def sort_with_sign(indices: Iterable[int], dim: int | None = None) -> tuple[tuple[int, ...], int]:
    """Sort an index sequence, returning the sorted list and the permutation sign.

    The sign is the parity of the sorting permutation, and zero when the
    sequence contains a repeated index.  If ``dim`` is given, indices outside
    [0, dim) raise IndexError.
    """
    seq = list(indices)
    if dim is not None:
        for i in seq:
            if not 0 <= i < dim:
                raise IndexError(f"index {i} out of range for dimension {dim}")
    sign = 1
    repeated = False
    # Insertion sort; swap count parity is the permutation signature.
    for pos in range(1, len(seq)):
        value = seq[pos]
        here = pos
        while here > 0 and seq[here - 1] > value:
            seq[here] = seq[here - 1]
            here -= 1
            sign = -sign
        seq[here] = value
        if here > 0 and seq[here - 1] == value:
            repeated = True
    return tuple(seq), 0 if repeated else sign


def merge_with_sign(first: tuple[int, ...], second: tuple[int, ...]) -> tuple[tuple[int, ...], int]:
    """Merge two strictly increasing lists; sign of the interleaving permutation.

    Equivalent to ``sort_with_sign(first + second)`` but linear time.  Returns
    sign 0 when the lists overlap.
    """
    merged: list[int] = []
    sign = 1
    a, b = 0, 0
    while a < len(first) and b < len(second):
        if first[a] < second[b]:
            merged.append(first[a])
            a += 1
        elif first[a] > second[b]:
            # second[b] jumps over the remaining elements of first
            if (len(first) - a) % 2:
                sign = -sign
            merged.append(second[b])
            b += 1
        else:
            return (), 0
    merged.extend(first[a:])
    merged.extend(second[b:])
    return tuple(merged), sign


def _complement(indices: tuple[int, ...], dim: int) -> tuple[int, ...]:
    inside = set(indices)
    return tuple(i for i in range(dim) if i not in inside)


def _difference(big: tuple[int, ...], small: tuple[int, ...]) -> tuple[int, ...] | None:
    """big minus small, or None when small is not a subset of big."""
    out: list[int] = []
    it = iter(big)
    for s in small:
        for b in it:
            if b == s:
                break
            out.append(b)
        else:
            return None
    out.extend(it)
    return tuple(out)


class Multivector:
    """Fixed-grade element of the exterior algebra over a (k, n) space-time.

    Stored as a sparse map from strictly increasing index tuples to nonzero
    coefficients.  Instances are immutable; arithmetic returns new objects.
    """

    __slots__ = ("signature", "grade", "terms")

    def __init__(self, signature: SpacetimeSignature, grade: int,
                 terms: Mapping[tuple[int, ...], complex] | Iterable[tuple[tuple[int, ...], complex]] = ()):
        if not 0 <= grade <= signature.dim:
            raise GradeError(f"grade {grade} out of range for dimension {signature.dim}")
        items = terms.items() if isinstance(terms, Mapping) else terms
        collected: dict[tuple[int, ...], complex] = {}
        for indices, coeff in items:
            indices = tuple(indices)
            if len(indices) != grade:
                raise GradeError(f"index list {indices} does not match grade {grade}")
            if any(indices[i] >= indices[i + 1] for i in range(len(indices) - 1)):
                raise ValueError(f"index list {indices} is not strictly increasing")
            if indices and not 0 <= indices[0] <= indices[-1] < signature.dim:
                raise IndexError(f"index list {indices} out of range for dimension {signature.dim}")
            if coeff != 0:
                collected[indices] = collected.get(indices, 0) + coeff
        object.__setattr__(self, "signature", signature)
        object.__setattr__(self, "grade", grade)
        object.__setattr__(self, "terms", _prune(collected))

    def __setattr__(self, name, value):
        raise AttributeError("Multivector is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, signature: SpacetimeSignature, grade: int) -> "Multivector":
        return cls(signature, grade)

    @classmethod
    def scalar(cls, signature: SpacetimeSignature, value: complex) -> "Multivector":
        return cls(signature, 0, {(): value})

    @classmethod
    def blade(cls, signature: SpacetimeSignature, indices: Iterable[int], coeff: complex = 1) -> "Multivector":
        indices = tuple(indices)
        return cls(signature, len(indices), {indices: coeff})

    @classmethod
    def vector(cls, signature: SpacetimeSignature, components: Iterable[complex]) -> "Multivector":
        comps = list(components)
        if len(comps) != signature.dim:
            raise ValueError(f"expected {signature.dim} components, got {len(comps)}")
        return cls(signature, 1, {(i,): c for i, c in enumerate(comps) if c != 0})

    # -- basic queries -----------------------------------------------------

    def coeff(self, indices: Iterable[int]) -> complex:
        return self.terms.get(tuple(indices), 0)

    def vector_components(self) -> list[complex]:
        if self.grade != 1:
            raise GradeError("vector_components requires grade 1")
        return [self.terms.get((i,), 0) for i in self.signature.axes()]

    def scalar_value(self) -> complex:
        if self.grade != 0:
            raise GradeError("scalar_value requires grade 0")
        return self.terms.get((), 0)

    def max_abs(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def is_zero(self, tol: float = 0.0) -> bool:
        return self.max_abs() <= tol

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Multivector) and self.signature == other.signature
                and self.grade == other.grade and self.terms == other.terms)

    def __hash__(self):
        return hash((self.signature, self.grade, tuple(sorted(self.terms.items()))))

    def __repr__(self) -> str:
        if not self.terms:
            body = "0"
        else:
            parts = []
            for indices in sorted(self.terms):
                label = "e_" + "".join(map(str, indices)) if indices else "1"
                parts.append(f"{self.terms[indices]!r}*{label}")
            body = " + ".join(parts)
        return f"<Multivector grade={self.grade} ({self.signature.k},{self.signature.n}) {body}>"

    # -- linear structure ----------------------------------------------------

    def _check_same_space(self, other: "Multivector"):
        if self.signature != other.signature:
            raise SignatureError(f"signatures differ: {self.signature} vs {other.signature}")

    def __add__(self, other: "Multivector") -> "Multivector":
        self._check_same_space(other)
        if self.grade != other.grade:
            if not self.terms:
                return other
            if not other.terms:
                return self
            raise GradeError(f"cannot add grades {self.grade} and {other.grade}")
        merged = dict(self.terms)
        for idx, c in other.terms.items():
            merged[idx] = merged.get(idx, 0) + c
        return Multivector(self.signature, self.grade, merged)

    def __sub__(self, other: "Multivector") -> "Multivector":
        return self + (-other)

    def __neg__(self) -> "Multivector":
        return Multivector(self.signature, self.grade, {i: -c for i, c in self.terms.items()})

    def __mul__(self, factor: complex) -> "Multivector":
        if isinstance(factor, Multivector):
            return NotImplemented
        return Multivector(self.signature, self.grade, {i: c * factor for i, c in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, factor: complex) -> "Multivector":
        return self * (1.0 / factor)

    def conjugate(self) -> "Multivector":
        """Complex conjugation of the coefficients (never applied implicitly)."""
        return Multivector(self.signature, self.grade,
                           {i: c.conjugate() if isinstance(c, complex) else c for i, c in self.terms.items()})

    # -- products ------------------------------------------------------------

    def dot(self, other: "Multivector") -> complex:
        return dot(self, other)

    def wedge(self, other: "Multivector") -> "Multivector":
        return wedge(self, other)

    def left_interior(self, other: "Multivector") -> "Multivector":
        return left_interior(self, other)

    def right_interior(self, other: "Multivector") -> "Multivector":
        return right_interior(self, other)

    def hodge(self) -> "Multivector":
        return hodge(self)

    def inv_hodge(self) -> "Multivector":
        return inv_hodge(self)

    def __xor__(self, other: "Multivector") -> "Multivector":
        return wedge(self, other)


def _prune(terms: dict[tuple[int, ...], complex]) -> dict[tuple[int, ...], complex]:
    """Drop exact zeros and coefficients below PRUNE_REL of the largest one."""
    if not terms:
        return {}
    peak = max(abs(c) for c in terms.values())
    if peak == 0:
        return {}
    cut = PRUNE_REL * peak
    return {i: c for i, c in sorted(terms.items()) if abs(c) >= cut and c != 0}


def dot(u: Multivector, v: Multivector) -> complex:
    """Metric dot product of equal-grade multivectors; bilinear, no conjugation."""
    u._check_same_space(v)
    if u.grade != v.grade:
        raise GradeError(f"dot requires equal grades, got {u.grade} and {v.grade}")
    sig = u.signature
    first, second = (u, v) if len(u.terms) <= len(v.terms) else (v, u)
    total: complex = 0
    for indices, c in first.terms.items():
        other = second.terms.get(indices)
        if other is not None:
            total += c * other * sig.metric_list(indices)
    return total


def wedge(u: Multivector, v: Multivector) -> Multivector:
    """Exterior product; grade adds, zero on overlapping index lists."""
    u._check_same_space(v)
    sig = u.signature
    grade = u.grade + v.grade
    if grade > sig.dim:
        return Multivector.zero(sig, 0)
    out: dict[tuple[int, ...], complex] = {}
    for I, a in u.terms.items():
        for J, b in v.terms.items():
            merged, sign = merge_with_sign(I, J)
            if sign:
                out[merged] = out.get(merged, 0) + sign * a * b
    return Multivector(sig, grade, out)


def left_interior(u: Multivector, v: Multivector) -> Multivector:
    """Left interior product u into v; lowers grade to gr(v) - gr(u)."""
    u._check_same_space(v)
    sig = u.signature
    if u.grade > v.grade:
        return Multivector.zero(sig, 0)
    grade = v.grade - u.grade
    out: dict[tuple[int, ...], complex] = {}
    for I, a in u.terms.items():
        delta = sig.metric_list(I)
        for J, b in v.terms.items():
            rest = _difference(J, I)
            if rest is None:
                continue
            _, sign = merge_with_sign(rest, I)
            out[rest] = out.get(rest, 0) + delta * sign * a * b
    return Multivector(sig, grade, out)


def right_interior(u: Multivector, v: Multivector) -> Multivector:
    """Right interior product: e_I with e_J gives Delta_JJ sigma(J, I\\J) e_{I\\J}."""
    u._check_same_space(v)
    sig = u.signature
    if v.grade > u.grade:
        return Multivector.zero(sig, 0)
    grade = u.grade - v.grade
    out: dict[tuple[int, ...], complex] = {}
    for J, b in v.terms.items():
        delta = sig.metric_list(J)
        for I, a in u.terms.items():
            rest = _difference(I, J)
            if rest is None:
                continue
            _, sign = merge_with_sign(J, rest)
            out[rest] = out.get(rest, 0) + delta * sign * a * b
    return Multivector(sig, grade, out)


def hodge(v: Multivector) -> Multivector:
    """Hodge complement: e_I maps to Delta_II sigma(I, I^c) e_{I^c}."""
    sig = v.signature
    out: dict[tuple[int, ...], complex] = {}
    for I, c in v.terms.items():
        comp = _complement(I, sig.dim)
        _, sign = merge_with_sign(I, comp)
        out[comp] = sig.metric_list(I) * sign * c
    return Multivector(sig, sig.dim - v.grade, out)


def inv_hodge(v: Multivector) -> Multivector:
    """Inverse Hodge complement: e_I maps to Delta_{I^c I^c} sigma(I^c, I) e_{I^c}."""
    sig = v.signature
    out: dict[tuple[int, ...], complex] = {}
    for I, c in v.terms.items():
        comp = _complement(I, sig.dim)
        _, sign = merge_with_sign(comp, I)
        out[comp] = sig.metric_list(comp) * sign * c
    return Multivector(sig, sig.dim - v.grade, out)


def cross(u: Multivector, v: Multivector) -> Multivector:
    """Cross product of grade-1 multivectors in three dimensions."""
    if u.signature.dim != 3:
        raise ValueError("cross product requires a three-dimensional space-time")
    return inv_hodge(wedge(u, v))


class Bitensor:
    """Symmetric rank-2 object with components T_ij on the basis u_ij.

    Stored sparsely on ordered pairs i <= j; lookup is symmetric.  Immutable.
    """

    __slots__ = ("signature", "comps")

    def __init__(self, signature: SpacetimeSignature,
                 comps: Mapping[tuple[int, int], complex] | Iterable[tuple[tuple[int, int], complex]] = ()):
        items = comps.items() if isinstance(comps, Mapping) else comps
        collected: dict[tuple[int, int], complex] = {}
        for (i, j), value in items:
            if not (0 <= i < signature.dim and 0 <= j < signature.dim):
                raise IndexError(f"component ({i}, {j}) out of range for dimension {signature.dim}")
            key = (i, j) if i <= j else (j, i)
            if value != 0:
                collected[key] = collected.get(key, 0) + value
        object.__setattr__(self, "signature", signature)
        object.__setattr__(self, "comps", _prune_bitensor(collected))

    def __setattr__(self, name, value):
        raise AttributeError("Bitensor is immutable")

    @classmethod
    def zero(cls, signature: SpacetimeSignature) -> "Bitensor":
        return cls(signature)

    def get(self, i: int, j: int) -> complex:
        key = (i, j) if i <= j else (j, i)
        return self.comps.get(key, 0)

    def max_abs(self) -> float:
        return max((abs(c) for c in self.comps.values()), default=0.0)

    def __add__(self, other: "Bitensor") -> "Bitensor":
        if self.signature != other.signature:
            raise SignatureError("bitensor signatures differ")
        merged = dict(self.comps)
        for key, c in other.comps.items():
            merged[key] = merged.get(key, 0) + c
        return Bitensor(self.signature, merged)

    def __sub__(self, other: "Bitensor") -> "Bitensor":
        return self + (-other)

    def __neg__(self) -> "Bitensor":
        return Bitensor(self.signature, {k: -c for k, c in self.comps.items()})

    def __mul__(self, factor: complex) -> "Bitensor":
        return Bitensor(self.signature, {k: c * factor for k, c in self.comps.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return (isinstance(other, Bitensor) and self.signature == other.signature
                and self.comps == other.comps)

    def __hash__(self):
        return hash((self.signature, tuple(sorted(self.comps.items()))))

    def __repr__(self) -> str:
        body = ", ".join(f"T{i}{j}={c!r}" for (i, j), c in sorted(self.comps.items())) or "0"
        return f"<Bitensor ({self.signature.k},{self.signature.n}) {body}>"


def _prune_bitensor(comps: dict[tuple[int, int], complex]) -> dict[tuple[int, int], complex]:
    if not comps:
        return {}
    peak = max(abs(c) for c in comps.values())
    if peak == 0:
        return {}
    cut = PRUNE_REL * peak
    return {k: c for k, c in sorted(comps.items()) if abs(c) >= cut and c != 0}


def vec_interior_bitensor(a: Multivector, t: Bitensor) -> Multivector:
    """Interior product of a grade-1 multivector with a bitensor.

    Bilinear extension of e_i into u_jk: e_j Delta_ii when i = k, e_k Delta_ii
    when i = j, their common value e_i Delta_ii on the diagonal.
    """
    if a.signature != t.signature:
        raise SignatureError("signatures differ")
    if a.grade != 1:
        raise GradeError("vec_interior_bitensor requires a grade-1 multivector")
    sig = a.signature
    out: dict[tuple[int, ...], complex] = {}
    for (h,), coeff in a.terms.items():
        delta = sig.metric(h)
        for (i, j), value in t.comps.items():
            if h == j:
                out[(i,)] = out.get((i,), 0) + delta * coeff * value
            if h == i and i != j:
                out[(j,)] = out.get((j,), 0) + delta * coeff * value
    return Multivector(sig, 1, out)


def _basis_vector(sig: SpacetimeSignature, i: int) -> Multivector:
    return Multivector.blade(sig, (i,))


def odot(f: Multivector, g: Multivector) -> Bitensor:
    """Interior-product bitensor with ordered components
    (1/2) Delta_ii Delta_jj (e_i interior f) . (g interior e_j), symmetrised.

    The two-argument form is what the Fourier-domain flux derivation consumes;
    with f == g the symmetrisation is the identity.  Complex arguments are not
    conjugated; the caller conjugates explicitly where needed.
    """
    return _quadratic_bitensor(f, g, _odot_entry)


def owedge(f: Multivector, g: Multivector) -> Bitensor:
    """Exterior-product bitensor with ordered components
    (1/2) Delta_ii Delta_jj (e_i wedge f) . (g wedge e_j), symmetrised."""
    return _quadratic_bitensor(f, g, _owedge_entry)


def _odot_entry(sig, ei, ej, f, g):
    return dot(left_interior(ei, f), right_interior(g, ej))


def _owedge_entry(sig, ei, ej, f, g):
    return dot(wedge(ei, f), wedge(g, ej))


def _quadratic_bitensor(f: Multivector, g: Multivector, entry) -> Bitensor:
    f._check_same_space(g)
    if f.grade != g.grade:
        raise GradeError(f"bitensor products require equal grades, got {f.grade} and {g.grade}")
    sig = f.signature
    basis = [_basis_vector(sig, i) for i in sig.axes()]
    out: dict[tuple[int, int], complex] = {}
    for i in sig.axes():
        di = sig.metric(i)
        for j in range(i, sig.dim):
            dj = sig.metric(j)
            tau_ij = entry(sig, basis[i], basis[j], f, g)
            if i == j:
                value = 0.5 * di * dj * tau_ij
            else:
                tau_ji = entry(sig, basis[j], basis[i], f, g)
                value = 0.25 * di * dj * (tau_ij + tau_ji)
            if value != 0:
                out[(i, j)] = value
    return Bitensor(sig, out)


# ---------------------------------------------------------------------------
# Exhaustive identity suite
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IdentityReport:
    """Outcome of the exhaustive basis-blade identity suite for one (k, n)."""

    signature: SpacetimeSignature
    residuals: dict[str, float]
    checks: int
    passed: bool

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)


def _blade_wedge(I, J):
    return merge_with_sign(I, J)


def _blade_dot(metric_list, I, cI, J, cJ):
    if I != J:
        return 0
    return cI * cJ * metric_list(I)


def _blade_lint(metric_list, I, cI, J, cJ):
    rest = _difference(J, I)
    if rest is None:
        return (), 0
    _, sign = merge_with_sign(rest, I)
    return rest, metric_list(I) * sign * cI * cJ


def _blade_rint(metric_list, I, cI, J, cJ):
    rest = _difference(I, J)
    if rest is None:
        return (), 0
    _, sign = merge_with_sign(J, rest)
    return rest, metric_list(J) * sign * cI * cJ


def verify_identities(sig: SpacetimeSignature, tol: float = 0.0, max_dim: int = IDENTITY_DIM_CAP,
                      wedge_sign_fn: Callable[[tuple, tuple], tuple] | None = None) -> IdentityReport:
    """Exhaustively check the product identities over every basis blade.

    Covers skew-commutativity of the wedge, the left/right interior relation,
    the wedge/interior dot expansion, double-interior associativity and
    antisymmetry, the interior-of-wedge expansion, and the triple-product
    equalities.  Blade coefficients are integers, so residuals are exact.

    ``wedge_sign_fn`` replaces the blade wedge rule; it exists so a test
    harness can inject a corrupted product and confirm detection.
    """
    dim = sig.dim
    if dim > max_dim:
        raise ValueError(
            f"identity suite refused: dimension {dim} exceeds cap {max_dim}; raise max_dim explicitly")
    wedge_b = wedge_sign_fn or _blade_wedge
    ml = sig.metric_list
    residuals = {name: 0 for name in (
        "wedge_skew", "interior_transpose", "wedge_dot_expansion",
        "double_interior_assoc", "double_interior_antisym",
        "interior_of_wedge", "triple_product")}
    checks = 0

    blades_by_grade = [list(sig.index_lists(m)) for m in range(dim + 1)]
    vectors = blades_by_grade[1]

    def bump(name, value):
        nonlocal checks
        checks += 1
        value = abs(value)
        if value > residuals[name]:
            residuals[name] = value

    # wedge skew-commutativity and interior transpose, over all blade pairs
    for gu in range(dim + 1):
        for gv in range(dim + 1):
            swap_wedge = (-1) ** (gu * gv)
            swap_int = (-1) ** (gu * (gu + gv))
            for I in blades_by_grade[gu]:
                for J in blades_by_grade[gv]:
                    K1, s1 = wedge_b(I, J)
                    K2, s2 = wedge_b(J, I)
                    if s1 or s2:
                        bump("wedge_skew", (s1 - swap_wedge * s2) if K1 == K2 else max(abs(s1), abs(s2)))
                    else:
                        bump("wedge_skew", 0)
                    L1, c1 = _blade_lint(ml, I, 1, J, 1)
                    L2, c2 = _blade_rint(ml, J, 1, I, 1)
                    if c1 or c2:
                        bump("interior_transpose", (c1 - swap_int * c2) if L1 == L2 else max(abs(c1), abs(c2)))
                    else:
                        bump("interior_transpose", 0)

    def mv(pairs):
        out = {}
        for idx, c in pairs:
            if c:
                out[idx] = out.get(idx, 0) + c
        return {i: c for i, c in out.items() if c}

    # identities with one or two blades of every grade r and basis vectors
    for r in range(dim + 1):
        r_blades = blades_by_grade[r]
        for vi in vectors:
            for W in r_blades:
                # interior of wedge: u . (v ^ w) expansion needs two vectors
                for vj in vectors:
                    K, s = wedge_b(vj, W)
                    lhs_idx, lhs_c = _blade_lint(ml, vi, 1, K, s) if s else ((), 0)
                    lhs = mv([(lhs_idx, lhs_c)])
                    dot_uv = _blade_dot(ml, vi, 1, vj, 1)
                    t1 = mv([(W, (-1) ** r * dot_uv)])
                    Li, ci = _blade_lint(ml, vi, 1, W, 1)
                    K2, s2 = wedge_b(vj, Li)
                    t2 = mv([(K2, s2 * ci)] if ci and s2 else [])
                    rhs = mv(list(t1.items()) + list(t2.items()))
                    diff = {idx: lhs.get(idx, 0) - rhs.get(idx, 0) for idx in set(lhs) | set(rhs)}
                    bump("interior_of_wedge", max((abs(c) for c in diff.values()), default=0))

                    # double interior: u . (w interior-from-right v) forms
                    Ra, ca = _blade_rint(ml, W, 1, vj, 1)
                    lhs2_idx, lhs2_c = _blade_lint(ml, vi, 1, Ra, ca) if ca else ((), 0)
                    Lb, cb = _blade_lint(ml, vi, 1, W, 1)
                    rhs2_idx, rhs2_c = _blade_rint(ml, Lb, cb, vj, 1) if cb else ((), 0)
                    lhs2 = mv([(lhs2_idx, lhs2_c)])
                    rhs2 = mv([(rhs2_idx, rhs2_c)])
                    diff2 = {idx: lhs2.get(idx, 0) - rhs2.get(idx, 0) for idx in set(lhs2) | set(rhs2)}
                    bump("double_interior_assoc", max((abs(c) for c in diff2.values()), default=0))

                    Lc, cc = _blade_lint(ml, vj, 1, W, 1)
                    a_idx, a_c = _blade_lint(ml, vi, 1, Lc, cc) if cc else ((), 0)
                    Ld, cd = _blade_lint(ml, vi, 1, W, 1)
                    b_idx, b_c = _blade_lint(ml, vj, 1, Ld, cd) if cd else ((), 0)
                    A = mv([(a_idx, a_c)])
                    B = mv([(b_idx, -b_c)])
                    diff3 = {idx: A.get(idx, 0) - B.get(idx, 0) for idx in set(A) | set(B)}
                    bump("double_interior_antisym", max((abs(c) for c in diff3.values()), default=0))

        # wedge/interior dot expansion over vector pairs and r-blade pairs
        for vi in vectors:
            for vj in vectors:
                dot_vv = _blade_dot(ml, vi, 1, vj, 1)
                for W in r_blades:
                    Li, ci = _blade_lint(ml, vj, 1, W, 1)
                    K1, s1 = wedge_b(vi, W)
                    for Wp in r_blades:
                        K2, s2 = wedge_b(Wp, vj)
                        lhs = _blade_dot(ml, K1, s1, K2, s2) if s1 and s2 else 0
                        term1 = (-1) ** r * dot_vv * _blade_dot(ml, W, 1, Wp, 1)
                        Rp, cp = _blade_rint(ml, Wp, 1, vi, 1)
                        term2 = _blade_dot(ml, Li, ci, Rp, cp) if ci and cp else 0
                        bump("wedge_dot_expansion", lhs - term1 - term2)

        # triple product: (u ^ v) . w = v . (w rint u) = u . (v lint w)
        if r >= 1:
            for vi in vectors:
                for V in blades_by_grade[r - 1]:
                    K, s = wedge_b(vi, V)
                    for W in r_blades:
                        lhs = _blade_dot(ml, K, s, W, 1) if s else 0
                        Ra, ca = _blade_rint(ml, W, 1, vi, 1)
                        mid = _blade_dot(ml, V, 1, Ra, ca) if ca else 0
                        Lb, cb = _blade_lint(ml, V, 1, W, 1)
                        rhs = _blade_dot(ml, vi, 1, Lb, cb) if cb else 0
                        bump("triple_product", lhs - mid)
                        bump("triple_product", lhs - rhs)

    passed = all(v <= tol for v in residuals.values())
    return IdentityReport(signature=sig, residuals={k: float(v) for k, v in residuals.items()},
                          checks=checks, passed=passed)
