"""Jumped Wenger graphs: construction, exact spectra two ways, and an
exact-integer spectral verification.

The graphs are bipartite point/line incidence graphs on two copies of
F_q^(m+1).  Their eigenvalues are +-sqrt(q*i) for integer levels i, so the
whole spectrum is carried as (level, multiplicity) pairs and never touches a
real number: multiplicities come either from the closed-form root counts
(spectrum_formula) or from enumerating the q^(m+1) coefficient vectors and
counting roots directly (spectrum_oracle), and the adjacency matrix is
checked against a claimed spectrum through integer trace moments alone.
Matching as many even moments as there are distinct nonzero levels pins the
level multiset uniquely (Vandermonde), so moment_check is a complete
verification with zero numerical tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field
from typing import IO, Iterator, Mapping

import numpy as np

from .counting import count_nk_gap2, count_nk_gap3
from .exactcomb import binomial
from .ff import FieldSpec
from .oracle import (
    DEFAULT_BUDGET,
    EnumerationBudget,
    brute_nk,
    field_tables,
    power_row,
    span_root_distribution,
)

DENSE_VERTEX_LIMIT = 4096
_FALLBACK_OP_LIMIT = 2 * 10 ** 9


@dataclass(frozen=True)
class WengerFamily:
    """One jumped Wenger graph: variant (which exponent is skipped), field, m."""

    variant: int
    field: FieldSpec
    m: int

    def __post_init__(self) -> None:
        if self.variant not in (1, 2):
            raise ValueError(f"variant must be 1 or 2, got {self.variant}")
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        q = self.field.q
        if self.variant == 1:
            if self.m + 1 > q - 1:
                raise ValueError(f"variant 1 needs m + 1 <= q - 1, got m={self.m}, q={q}")
        else:
            if self.m + 2 > q - 1:
                raise ValueError(f"variant 2 needs m + 2 <= q - 1, got m={self.m}, q={q}")
            if self.field.p == 2 or self.field.e % 2:
                raise ValueError("variant 2 needs odd characteristic and even extension degree")

    @property
    def top_exponent(self) -> int:
        return self.m + 1 if self.variant == 1 else self.m + 2

    def basis_exponents(self) -> tuple[int, ...]:
        """Monomial exponents weighted by the coefficient vector, low slot first."""
        return tuple(range(self.m)) + (self.top_exponent,)

    def coordinate_exponents(self) -> tuple[int, ...]:
        """Exponent of the first point coordinate in each edge equality."""
        return self.basis_exponents()[1:]


@dataclass(frozen=True)
class BipartiteGraph:
    """Materialized incidence structure.

    Point and line vectors are encoded as base-q integers: coordinate t+1 of
    vector v is digit t, so index = sum(coord[t+1] * q**t).  Vertex numbering
    puts points first, lines shifted by the point count.
    """

    family: WengerFamily
    lines_of_point: np.ndarray  # (q^(m+1), q) line index, column = first line coordinate

    @property
    def n_points(self) -> int:
        return self.lines_of_point.shape[0]

    @property
    def n_lines(self) -> int:
        return self.lines_of_point.shape[0]

    @property
    def vertex_count(self) -> int:
        return 2 * self.n_points

    @property
    def edge_count(self) -> int:
        return self.lines_of_point.size

    def edges(self) -> Iterator[tuple[int, int]]:
        """(point index, line index) pairs, points outer and l1 inner."""
        for point in range(self.n_points):
            for l1 in range(self.family.field.q):
                yield point, int(self.lines_of_point[point, l1])

    def degrees(self) -> tuple[np.ndarray, np.ndarray]:
        q = self.family.field.q
        point_deg = np.full(self.n_points, q, dtype=np.int64)
        line_deg = np.bincount(self.lines_of_point.ravel(), minlength=self.n_lines)
        return point_deg, line_deg

    def point_line_matrix(self) -> np.ndarray:
        """Dense 0/1 incidence block (points x lines), int64."""
        b = np.zeros((self.n_points, self.n_lines), dtype=np.int64)
        rows = np.repeat(np.arange(self.n_points), self.family.field.q)
        b[rows, self.lines_of_point.ravel()] = 1
        return b


def _digit_columns(count: int, q: int, width: int) -> np.ndarray:
    idx = np.arange(count, dtype=np.int64)
    base = q ** np.arange(width, dtype=np.int64)
    return ((idx[:, None] // base[None, :]) % q).astype(np.int64)


def is_edge(family: WengerFamily, point: tuple[int, ...], line: tuple[int, ...]) -> bool:
    """Edge predicate on coordinate tuples of element indices; no size limit."""
    f = family.field
    m = family.m
    if len(point) != m + 1 or len(line) != m + 1:
        raise ValueError(f"coordinate vectors must have length {m + 1}")
    p1 = f.element(point[0])
    l1 = f.element(line[0])
    for slot, expo in enumerate(family.coordinate_exponents(), start=1):
        lhs = f.add(f.element(line[slot]), f.element(point[slot]))
        rhs = f.mul(f.pow_(p1, expo), l1)
        if lhs != rhs:
            return False
    return True


def build_graph(family: WengerFamily, budget: EnumerationBudget = DEFAULT_BUDGET) -> BipartiteGraph:
    """Materialize the incidence lists: for each point and each first line
    coordinate l1 there is exactly one incident line, so the graph is q-regular."""
    f = family.field
    q = f.q
    m = family.m
    n_vec = q ** (m + 1)
    budget.check(n_vec, "point/line materialization")
    tables = field_tables(f)
    mul_t, neg_t, add_t = tables["mul"], tables["neg"], tables["add"]

    digits = _digit_columns(n_vec, q, m + 1)
    p1 = digits[:, 0].astype(np.int32)
    powers = {}
    for expo in set(family.coordinate_exponents()):
        row = np.asarray(power_row(f, expo), dtype=np.int32)
        powers[expo] = row[p1]

    base = q ** np.arange(m + 1, dtype=np.int64)
    lines = np.empty((n_vec, q), dtype=np.int64)
    for l1 in range(q):
        acc = np.full(n_vec, l1, dtype=np.int64)  # digit 0 of the line
        for slot, expo in enumerate(family.coordinate_exponents(), start=1):
            coord = add_t[mul_t[powers[expo], l1], neg_t[digits[:, slot].astype(np.int32)]]
            acc += coord.astype(np.int64) * base[slot]
        lines[:, l1] = acc
    return BipartiteGraph(family=family, lines_of_point=lines)


# ---------------------------------------------------------------------------
# Spectra.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectrumReport:
    """Eigenvalue levels of one family: level i stands for the pair +-sqrt(q*i).

    entries holds (level, multiplicity per sign) with positive multiplicity
    only, descending by level; the two signed eigenvalues coincide at level 0,
    where the total eigenvalue-0 multiplicity is 2 * multiplicity(0).
    """

    entries: tuple[tuple[int, int], ...]
    vertex_count: int
    method: str
    metadata: Mapping[str, object] = dataclass_field(default_factory=dict)

    def multiplicity(self, level: int) -> int:
        for i, mult in self.entries:
            if i == level:
                return mult
        return 0

    def levels(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.entries)

    def nonzero_levels(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.entries if i > 0)

    def eigenvalue_total(self) -> int:
        return 2 * sum(mult for _, mult in self.entries)

    def same_spectrum(self, other: "SpectrumReport") -> bool:
        return self.entries == other.entries

    def to_json_dict(self, verified: bool | None = None) -> dict:
        out = {
            "levels": [{"i": i, "mult": str(mult)} for i, mult in self.entries],
            "vertex_count": str(self.vertex_count),
            "method": self.method,
            "metadata": dict(self.metadata),
        }
        if verified is not None:
            out["verified"] = verified
        return out


def _entries_from_counts(counts: dict[int, int]) -> tuple[tuple[int, int], ...]:
    return tuple(sorted(((i, m) for i, m in counts.items() if m > 0), reverse=True))


def spectrum_oracle(family: WengerFamily, budget: EnumerationBudget = DEFAULT_BUDGET) -> SpectrumReport:
    """Level multiplicities by enumerating all coefficient vectors and counting
    the roots of each induced univariate function."""
    f = family.field
    q = f.q
    basis = [power_row(f, expo) for expo in family.basis_exponents()]
    zero_row = [f.index(f.zero)] * q
    dist = span_root_distribution(f, zero_row, basis, budget)
    counts = {i: dist[i] for i in range(q + 1)}
    report = SpectrumReport(
        entries=_entries_from_counts(counts),
        vertex_count=2 * q ** (family.m + 1),
        method="oracle",
        metadata={"variant": family.variant, "q": q, "m": family.m},
    )
    total = sum(m for _, m in report.entries)
    if total != q ** (family.m + 1):
        raise ArithmeticError(f"level multiplicities sum to {total}, expected {q ** (family.m + 1)}")
    return report


def _completion_count(family: WengerFamily, top_exponent: int, level: int,
                      budget: EnumerationBudget) -> int:
    """Count of monic completions of x^top_exponent (free below degree m) with
    exactly `level` distinct roots; handled by the gap-2 or gap-3 closed form,
    falling back to enumeration where the gap-3 form does not apply."""
    f = family.field
    ell = family.m - 1
    gap = top_exponent - ell
    if gap == 2:
        return count_nk_gap2(f, top_exponent, level, f.zero).value
    if gap != 3:
        raise ValueError(f"unsupported completion gap {gap}")
    if f.p != 2 and f.e % 2 == 0:
        return count_nk_gap3(f, top_exponent, level).value
    return brute_nk(f, [f.zero, f.zero], top_exponent, ell, level, budget).value


def spectrum_formula(
    family: WengerFamily,
    low_level_top_exponent: int | None = None,
    budget: EnumerationBudget = DEFAULT_BUDGET,
) -> SpectrumReport:
    """Level multiplicities assembled from the closed-form root counts.

    Levels below m collect the coefficient vectors whose top slot vanishes
    (degree classes 0..m-1, a geometric inclusion-exclusion sum) plus the
    full-degree completions; levels m..top come from completions alone, and
    level q is the zero vector.

    low_level_top_exponent overrides which completion family feeds the
    below-m levels; the default is the family's own jump exponent, which is
    the reading the enumeration oracle confirms (the alternative is kept for
    diagnostics and is expected to disagree with the oracle).
    """
    f = family.field
    q = f.q
    m = family.m
    top = family.top_exponent
    low_top = family.top_exponent if low_level_top_exponent is None else low_level_top_exponent
    if low_top not in (m + 1, m + 2):
        raise ValueError(f"low-level top exponent must be m+1 or m+2, got {low_top}")

    counts: dict[int, int] = {q: 1}
    for i in range(0, m):
        low_degrees = 0
        for d in range(i, m):
            inner = sum((-1) ** k * binomial(q - i, k) * q ** (d - i - k) for k in range(d - i + 1))
            low_degrees += binomial(q, i) * inner
        counts[i] = (q - 1) * low_degrees + (q - 1) * _completion_count(family, low_top, i, budget)
    for i in range(m, top + 1):
        counts[i] = (q - 1) * _completion_count(family, top, i, budget)

    note = (
        "levels below m use completions of x^%d; default is the family's own jump exponent"
        % low_top
    )
    return SpectrumReport(
        entries=_entries_from_counts(counts),
        vertex_count=2 * q ** (m + 1),
        method="closed-form",
        metadata={
            "variant": family.variant,
            "q": q,
            "m": m,
            "low_level_top_exponent": low_top,
            "note": note,
        },
    )


# ---------------------------------------------------------------------------
# Exact spectral verification through trace moments.
# ---------------------------------------------------------------------------

def _expected_even_moment(report: SpectrumReport, q: int, t: int) -> int:
    return sum(2 * mult * (q * i) ** t for i, mult in report.entries)


def _dense_point_gram_traces(graph: BipartiteGraph, big_t: int,
                             exact_objects: bool = False) -> list[int]:
    b = graph.point_line_matrix()
    gram = b @ b.T
    if exact_objects:
        # Python-int entries: slow, but walk counts past int64 stay exact.
        gram = gram.astype(object)
    traces = []
    power = gram.copy()
    for _ in range(big_t):
        traces.append(int(np.trace(power)))
        power = power.dot(gram)
    return traces


def _matrix_free_point_gram_traces(graph: BipartiteGraph, big_t: int,
                                   batch: int = 128) -> list[int]:
    """Diagonal sums of Gram powers without materializing the Gram matrix.

    Walk-counting route for graphs over the dense vertex limit: batches of
    indicator vectors are pushed through line- and point-incidence gathers.
    """
    lines_of_point = graph.lines_of_point
    n = graph.n_points
    q = graph.family.field.q
    order = np.argsort(lines_of_point.ravel(), kind="stable")
    points_of_line = (order // q).reshape(n, q)
    traces = [0] * big_t
    for start in range(0, n, batch):
        stop = min(start + batch, n)
        x = np.zeros((n, stop - start), dtype=np.int64)
        x[np.arange(start, stop), np.arange(stop - start)] = 1
        for t in range(big_t):
            on_lines = x[points_of_line].sum(axis=1)
            x = on_lines[lines_of_point].sum(axis=1)
            traces[t] += int(np.trace(x[start:stop]))
    return traces


def moment_check(
    graph: BipartiteGraph,
    report: SpectrumReport,
    big_t: int,
    dense_vertex_limit: int = DENSE_VERTEX_LIMIT,
) -> bool:
    """Exact spectral verification: even trace moments of the adjacency matrix
    against the claimed level multiset, t = 1..big_t.

    Bipartiteness collapses tr(A^(2t)) to twice the t-th trace of the point
    Gram matrix, and tr(A) = 0 holds structurally (points and lines are
    disjoint vertex classes).  With big_t at least the number of distinct
    nonzero levels, agreement determines the spectrum exactly.
    """
    q = graph.family.field.q
    needed = max(1, len(report.nonzero_levels()))
    if big_t < needed:
        raise ValueError(
            f"big_t={big_t} is below the {needed} distinct nonzero levels; "
            "fewer moments cannot pin the spectrum")
    if report.vertex_count != graph.vertex_count:
        return False
    int64_safe = graph.vertex_count * q ** (2 * big_t) < 2 ** 62
    if graph.vertex_count <= dense_vertex_limit:
        if not int64_safe and graph.n_points > 256:
            raise ValueError(
                f"moment order {big_t} needs big-int matrices; graph too large for that route")
        traces = _dense_point_gram_traces(graph, big_t, exact_objects=not int64_safe)
    else:
        if not int64_safe:
            raise ValueError(
                f"moment order {big_t} would overflow int64 walk counts for q={q}")
        ops = graph.n_points ** 2 * big_t * q
        if ops > _FALLBACK_OP_LIMIT:
            raise ValueError(
                f"matrix-free moment check would need ~{ops} operations; graph too large")
        traces = _matrix_free_point_gram_traces(graph, big_t)
    for t in range(1, big_t + 1):
        if 2 * traces[t - 1] != _expected_even_moment(report, q, t):
            return False
    return True


def export_edges(graph: BipartiteGraph, fp: IO[str]) -> int:
    """Write one edge per line as `P:<coords> L:<coords>` (element indices,
    comma-separated, coordinate 1 first), points outer and l1 inner.
    Returns the number of edges written."""
    q = graph.family.field.q
    m = graph.family.m
    point_digits = _digit_columns(graph.n_points, q, m + 1)
    line_digits = _digit_columns(graph.n_lines, q, m + 1)
    count = 0
    for point, line in graph.edges():
        p_str = ",".join(str(d) for d in point_digits[point])
        l_str = ",".join(str(d) for d in line_digits[line])
        fp.write(f"P:{p_str} L:{l_str}\n")
        count += 1
    return count
