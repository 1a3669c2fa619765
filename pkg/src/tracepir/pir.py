"""Query generation, server answers, and error-corrected retrieval.

Parameters (k servers, t-collusion, b byzantine, retrieval threshold r)
fix a sub-packetization delta = r - 2b - t and an extension degree
s = (k - 2b - t) / delta.  Files are rows of a m x delta array over
F_{q^s}.  A query hides the wanted row index inside evaluations of a
random degree-(t + delta - 1) curve; each server returns the Frobenius
inner product of its evaluation with the database, either as a full
extension symbol or compressed to one base-field symbol through the
trace map.  Retrieval interpolates (full mode) or runs the base-field
error-corrected reconstruction (trace mode).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

from . import linalg, polyring, rscodes
from .gf import (
    DualBasisPair,
    ExtField,
    FieldTower,
    PrimeField,
    dual_basis,
    find_irreducibles,
    irreducible_count,
    minimal_poly,
    next_prime,
)
from .rand import SeededStream
from .rscodes import DecodeFailure, GrsCode, dual_multipliers, grs_decode

ROOT_SCAN_LIMIT = 2**20  # exhaustive root search guard for setup


class InvalidParameters(ValueError):
    """A scheme constraint is violated; `constraint` names the inequality."""

    def __init__(self, constraint: str, message: str):
        super().__init__(message)
        self.constraint = constraint


class ByzantineBudgetExceeded(RuntimeError):
    """More answers were corrupted than the decoder can tolerate."""


class DatabaseFormatError(ValueError):
    """Database file is malformed; `line` is the 1-based offending line."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class SchemeParams:
    """Public scheme constants; immutable and shareable across sessions."""

    k: int
    t: int
    b: int
    r: int
    delta: int
    s: int
    m: int
    q: int
    tower: FieldTower
    omega_alpha: tuple  # delta extension elements
    omega_chi: tuple  # t extension elements
    omega_beta: tuple  # k base-field ints
    min_polys: tuple  # delta monic base-field polynomials (coeff tuples)
    u: tuple  # delta extension elements
    v: tuple  # k extension elements
    theta: tuple  # basis of F_{q^s} over F_q
    eta: tuple  # its trace-orthogonal dual
    recovery_polys: tuple  # [delta][s] base-field coeff tuples, degree < s

    @property
    def base(self) -> PrimeField:
        return self.tower.base

    @property
    def ext(self) -> ExtField:
        return self.tower.ext

    @property
    def dual_pair(self) -> DualBasisPair:
        return DualBasisPair(theta=self.theta, eta=self.eta)

    @property
    def file_base_symbols(self) -> int:
        """File size counted in base-field symbols: delta * s = k - 2b - t."""
        return self.delta * self.s

    def __repr__(self):
        return (
            f"SchemeParams(k={self.k}, t={self.t}, b={self.b}, r={self.r}, "
            f"delta={self.delta}, s={self.s}, q={self.q}, m={self.m})"
        )


def _require(condition: bool, constraint: str, message: str):
    if not condition:
        raise InvalidParameters(constraint, message)


def _find_root(ext: ExtField, poly) -> tuple:
    """Lexicographically smallest root of a base-field polynomial in ext."""
    if ext.size > ROOT_SCAN_LIMIT:
        raise InvalidParameters(
            "field-size-guard",
            f"field size {ext.size} exceeds the root-scan guard {ROOT_SCAN_LIMIT}",
        )
    for x in ext.elements():
        if ext.eval_base_poly(poly, x) == ext.zero:
            return x
    raise ArithmeticError(f"irreducible {poly} has no root in {ext!r}")


def setup(k: int, t: int, b: int, r: int, q_hint: int | None = None, m: int = 1) -> SchemeParams:
    """Deterministic construction of all public scheme constants.

    The evaluation sets are pairwise disjoint by construction: the beta
    points are the first k base-field elements; for s >= 2 the alpha and
    chi points are canonical roots of the first delta + t monic
    irreducible degree-s polynomials in lexicographic order (roots of
    distinct irreducibles can collide neither with each other nor with
    the base field), while for s = 1 the three sets tile the first
    k + t + delta base elements.
    """
    for name, value in (("k", k), ("t", t), ("b", b), ("r", r), ("m", m)):
        if not isinstance(value, int):
            raise InvalidParameters("integer", f"{name} must be an integer")
    _require(t >= 1, "t >= 1", f"collusion bound t={t} must be at least 1")
    _require(b >= 0, "b >= 0", f"byzantine bound b={b} must be nonnegative")
    _require(m >= 1, "m >= 1", f"file count m={m} must be at least 1")
    delta = r - 2 * b - t
    _require(delta >= 1, "t < r-2b", f"need t < r-2b, got t={t}, r-2b={r - 2 * b}")
    rem = k - 2 * b - t
    _require(rem >= 1, "2b+t < k", f"need 2b+t < k, got 2b+t={2 * b + t}, k={k}")
    _require(
        rem % delta == 0,
        "delta | (k-2b-t)",
        f"delta={delta} does not divide k-2b-t={rem}",
    )
    # divisibility with rem >= 1 forces rem >= delta, i.e. r <= k
    assert r <= k
    s = rem // delta
    q_min = k + delta + t if s == 1 else k
    if q_hint is None:
        q = next_prime(q_min)
    else:
        base_probe = PrimeField(q_hint)  # validates primality and size
        _require(
            q_hint >= q_min,
            "k <= q",
            f"q={q_hint} is below the minimum {q_min} for these parameters",
        )
        q = base_probe.q

    base = PrimeField(q)
    omega_beta = tuple(range(k))
    if s == 1:
        omega_chi_base = tuple(range(k, k + t))
        omega_alpha_base = tuple(range(k + t, k + t + delta))
        min_polys = tuple((-a % q, 1) for a in omega_alpha_base)
        ext = ExtField(base, 1, min_polys[0])
        omega_alpha = tuple((a,) for a in omega_alpha_base)
        omega_chi = tuple((c,) for c in omega_chi_base)
    else:
        available = irreducible_count(q, s)
        _require(
            available >= delta + t,
            "irreducible supply",
            f"only {available} degree-{s} irreducibles over GF({q}); need {delta + t}",
        )
        irreducibles = find_irreducibles(base, s, delta + t)
        min_polys = tuple(irreducibles[:delta])
        ext = ExtField(base, s, irreducibles[0])
        omega_alpha = tuple(_find_root(ext, f) for f in min_polys)
        omega_chi = tuple(_find_root(ext, f) for f in irreducibles[delta:])
    tower = FieldTower(base, ext)

    alphas = omega_alpha
    betas_ext = tuple(ext.embed(x) for x in omega_beta)
    u, v = dual_multipliers(ext, alphas, betas_ext)

    if s >= 2:
        gamma = (0, 1) + (0,) * (s - 2)
    else:
        gamma = ext.one
    theta = tuple(ext.pow(gamma, d) for d in range(s))
    pair = dual_basis(ext, theta)

    recovery_polys = []
    for i, alpha in enumerate(alphas):
        # coordinates of alpha^d in the construction basis are the tuples
        # themselves, so the change-of-basis matrix columns are the powers
        powers = [ext.pow(alpha, d) for d in range(s)]
        matrix = [[powers[col][row] for col in range(s)] for row in range(s)]
        inverse = linalg.invert(base, matrix)
        if inverse is None:
            raise ArithmeticError(f"alpha_{i + 1} does not have degree {s}")
        excl = ext.one
        for l, f in enumerate(min_polys):
            if l != i:
                excl = ext.mul(excl, ext.eval_base_poly(f, alpha))
        target_scale = ext.inv(ext.mul(u[i], excl))
        row_polys = []
        for eta_d in pair.eta:
            target = ext.mul(target_scale, eta_d)
            coeffs = tuple(linalg.mat_vec(base, inverse, list(target)))
            row_polys.append(coeffs)
        recovery_polys.append(tuple(row_polys))

    params = SchemeParams(
        k=k,
        t=t,
        b=b,
        r=r,
        delta=delta,
        s=s,
        m=m,
        q=q,
        tower=tower,
        omega_alpha=omega_alpha,
        omega_chi=omega_chi,
        omega_beta=omega_beta,
        min_polys=min_polys,
        u=u,
        v=v,
        theta=pair.theta,
        eta=pair.eta,
        recovery_polys=tuple(recovery_polys),
    )
    verify_params(params)
    return params


def verify_params(params: SchemeParams):
    """Cross-check every defining identity of the public constants."""
    ext, base = params.ext, params.base
    all_points = list(params.omega_alpha) + list(params.omega_chi) + [
        ext.embed(x) for x in params.omega_beta
    ]
    if len(set(all_points)) != len(all_points):
        raise InvalidParameters("disjoint sets", "evaluation sets intersect")
    if params.delta * params.s != params.k - 2 * params.b - params.t:
        raise InvalidParameters(
            "s*delta = k-2b-t",
            f"s*delta={params.s * params.delta} != k-2b-t={params.k - 2 * params.b - params.t}",
        )
    seen = set()
    for i, (alpha, f) in enumerate(zip(params.omega_alpha, params.min_polys)):
        if polyring.degree(list(f)) != params.s or f[-1] != 1:
            raise InvalidParameters("minimal polys", f"min_poly {i + 1} is not monic degree s")
        if f in seen:
            raise InvalidParameters("minimal polys", "minimal polynomials are not distinct")
        seen.add(f)
        if ext.eval_base_poly(f, alpha) != ext.zero:
            raise InvalidParameters("minimal polys", f"alpha_{i + 1} is not a root of min_poly {i + 1}")
        if tuple(minimal_poly(ext, alpha)) != tuple(f):
            raise InvalidParameters("minimal polys", f"min_poly {i + 1} is not minimal for alpha_{i + 1}")
    for i in range(params.s):
        for j in range(params.s):
            expected = base.one if i == j else base.zero
            if ext.trace(ext.mul(params.theta[i], params.eta[j])) != expected:
                raise InvalidParameters("dual basis", "trace-orthogonality fails")
    for i, alpha in enumerate(params.omega_alpha):
        excl = ext.one
        for l, f in enumerate(params.min_polys):
            if l != i:
                excl = ext.mul(excl, ext.eval_base_poly(f, alpha))
        for d, h in enumerate(params.recovery_polys[i]):
            if polyring.degree(list(h)) >= params.s:
                raise InvalidParameters("recovery polys", "degree of h exceeds s-1")
            lhs = ext.mul(ext.eval_base_poly(h, alpha), ext.mul(params.u[i], excl))
            if lhs != params.eta[d]:
                raise InvalidParameters(
                    "recovery polys",
                    f"h_({i + 1},{d + 1}) fails its defining evaluation constraint",
                )


# --- optimality report ------------------------------------------------------


@dataclass(frozen=True)
class OptimalityReport:
    balanced: bool
    rate_optimal: bool
    file_size_optimal: bool
    divisibility: bool
    size_lower_bound_ok: bool

    def as_dict(self) -> dict:
        return {
            "balanced": self.balanced,
            "rate_optimal": self.rate_optimal,
            "file_size_optimal": self.file_size_optimal,
            "divisibility": self.divisibility,
            "size_lower_bound_ok": self.size_lower_bound_ok,
        }

    @property
    def all_ok(self) -> bool:
        return all(self.as_dict().values())


def validate_optimality(params, delta: int | None = None, s: int | None = None) -> OptimalityReport:
    """File-size optimality flags for scheme parameters.

    `params` is a SchemeParams or a (k, t, b, r) tuple; `delta` and `s`
    override the derived sub-packetization for what-if reports.
    """
    if isinstance(params, SchemeParams):
        k, t, b, r = params.k, params.t, params.b, params.r
        delta = params.delta if delta is None else delta
        s = params.s if s is None else s
    else:
        k, t, b, r = params
    rate_delta = r - 2 * b - t
    rem = k - 2 * b - t
    divisibility = rate_delta >= 1 and rem % rate_delta == 0
    if delta is None:
        delta = rate_delta
    if s is None:
        s = rem // rate_delta if divisibility else 0
    balanced = rate_delta >= 1 and rem >= 1
    rate_optimal = delta == rate_delta
    size_lower_bound_ok = s * delta >= rem
    file_size_optimal = s * delta == rem
    return OptimalityReport(
        balanced=balanced,
        rate_optimal=rate_optimal,
        file_size_optimal=file_size_optimal,
        divisibility=divisibility,
        size_lower_bound_ok=size_lower_bound_ok,
    )


# --- database ---------------------------------------------------------------


@dataclass(frozen=True)
class Database:
    """m x delta array of extension-field symbols; row i is file i."""

    entries: tuple  # m rows, each a delta-tuple of elements

    @property
    def m(self) -> int:
        return len(self.entries)

    @property
    def delta(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def row(self, iota: int) -> tuple:
        """File iota (1-based)."""
        if not 1 <= iota <= self.m:
            raise IndexError(f"file index {iota} outside [1, {self.m}]")
        return self.entries[iota - 1]


def check_dimensions(params: SchemeParams, db: Database):
    if db.m != params.m or any(len(row) != params.delta for row in db.entries):
        raise ValueError(
            f"database is {db.m}x{db.delta}, scheme expects {params.m}x{params.delta}"
        )


def random_database(params: SchemeParams, randomness) -> Database:
    stream = _as_stream(randomness, "db")
    ext = params.ext
    rows = tuple(
        tuple(stream.field_element(ext) for _ in range(params.delta))
        for _ in range(params.m)
    )
    return Database(entries=rows)


def format_database(params: SchemeParams, db: Database) -> str:
    ext = params.ext
    return "\n".join(
        ",".join(ext.format_element(x) for x in row) for row in db.entries
    ) + "\n"


def parse_database(params: SchemeParams, text: str) -> Database:
    ext = params.ext
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        symbols = line.split(",")
        if len(symbols) != params.delta:
            raise DatabaseFormatError(
                f"expected {params.delta} symbols, found {len(symbols)}", lineno
            )
        try:
            rows.append(tuple(ext.parse_element(sym.strip()) for sym in symbols))
        except ValueError as exc:
            raise DatabaseFormatError(str(exc), lineno) from None
    if len(rows) != params.m:
        raise DatabaseFormatError(
            f"expected {params.m} files, found {len(rows)}", len(rows) + 1
        )
    return Database(entries=tuple(rows))


def load_database(params: SchemeParams, path) -> Database:
    with open(path, "r", encoding="ascii") as fh:
        return parse_database(params, fh.read())


def save_database(params: SchemeParams, db: Database, path):
    with open(path, "w", encoding="ascii") as fh:
        fh.write(format_database(params, db))


# --- queries ----------------------------------------------------------------


@dataclass(frozen=True)
class QuerySet:
    """Per-server curve evaluations plus the client-side secrets."""

    per_server: tuple  # k arrays, each m x delta over the extension field
    blinding: tuple  # t random m x delta arrays (never sent to servers)
    iota: int  # requested file (1-based; never sent to servers)


@functools.lru_cache(maxsize=None)
def lagrange_basis_values(params: SchemeParams) -> tuple:
    """Per-server values of the curve's basis polynomials.

    Entry j holds (alpha_vals, chi_vals) at beta_j: alpha_vals[n] is 1 at
    alpha_n and 0 at every other alpha and every chi; chi_vals[h] is the
    matching basis value for the h-th blinding array.
    """
    ext = params.ext
    out = []
    for beta in params.omega_beta:
        point = ext.embed(beta)
        out.append(_basis_values_at(params, point))
    return tuple(out)


def _basis_values_at(params: SchemeParams, point) -> tuple:
    ext = params.ext
    alphas, chis = params.omega_alpha, params.omega_chi
    alpha_vals = []
    for n, alpha_n in enumerate(alphas):
        val = ext.one
        for l, alpha_l in enumerate(alphas):
            if l != n:
                val = ext.mul(val, ext.mul(ext.sub(point, alpha_l), ext.inv(ext.sub(alpha_n, alpha_l))))
        for chi in chis:
            val = ext.mul(val, ext.mul(ext.sub(point, chi), ext.inv(ext.sub(alpha_n, chi))))
        alpha_vals.append(val)
    chi_vals = []
    for h, chi_h in enumerate(chis):
        val = ext.one
        for alpha in alphas:
            val = ext.mul(val, ext.mul(ext.sub(point, alpha), ext.inv(ext.sub(chi_h, alpha))))
        for l, chi_l in enumerate(chis):
            if l != h:
                val = ext.mul(val, ext.mul(ext.sub(point, chi_l), ext.inv(ext.sub(chi_h, chi_l))))
        chi_vals.append(val)
    return tuple(alpha_vals), tuple(chi_vals)


@functools.lru_cache(maxsize=None)
def lagrange_basis_polys(params: SchemeParams) -> tuple:
    """Coefficient form of the curve's basis polynomials (alphas, chis)."""
    ext = params.ext
    alphas, chis = params.omega_alpha, params.omega_chi
    alpha_polys = []
    for n, alpha_n in enumerate(alphas):
        roots = [a for l, a in enumerate(alphas) if l != n] + list(chis)
        poly = polyring.from_roots(ext, roots)
        denom = ext.inv(polyring.poly_eval(ext, poly, alpha_n))
        alpha_polys.append(tuple(polyring.poly_scale(ext, denom, poly)))
    chi_polys = []
    for h, chi_h in enumerate(chis):
        roots = list(alphas) + [c for l, c in enumerate(chis) if l != h]
        poly = polyring.from_roots(ext, roots)
        denom = ext.inv(polyring.poly_eval(ext, poly, chi_h))
        chi_polys.append(tuple(polyring.poly_scale(ext, denom, poly)))
    return tuple(alpha_polys), tuple(chi_polys)


def _as_stream(randomness, default_label: str) -> SeededStream:
    if isinstance(randomness, SeededStream):
        return randomness
    return SeededStream(int(randomness), default_label)


def queries_from_blinding(params: SchemeParams, iota: int, blinding) -> QuerySet:
    """Evaluate the indicator-plus-blinding curve at every server point."""
    if not 1 <= iota <= params.m:
        raise IndexError(f"file index {iota} outside [1, {params.m}]")
    ext = params.ext
    blinding = tuple(
        tuple(tuple(entry for entry in row) for row in array) for array in blinding
    )
    if len(blinding) != params.t or any(
        len(array) != params.m or any(len(row) != params.delta for row in array)
        for array in blinding
    ):
        raise ValueError("blinding must be t arrays of shape m x delta")
    table = lagrange_basis_values(params)
    per_server = []
    for j in range(params.k):
        alpha_vals, chi_vals = table[j]
        rows = []
        for i in range(params.m):
            row = []
            for l in range(params.delta):
                val = alpha_vals[l] if i == iota - 1 else ext.zero
                for h in range(params.t):
                    val = ext.add(val, ext.mul(chi_vals[h], blinding[h][i][l]))
                row.append(val)
            rows.append(tuple(row))
        per_server.append(tuple(rows))
    return QuerySet(per_server=tuple(per_server), blinding=blinding, iota=iota)


def gen_queries(params: SchemeParams, iota: int, randomness) -> QuerySet:
    """Sample the t blinding arrays and evaluate the query curve."""
    stream = _as_stream(randomness, "query")
    ext = params.ext
    blinding = tuple(
        tuple(
            tuple(stream.field_element(ext) for _ in range(params.delta))
            for _ in range(params.m)
        )
        for _ in range(params.t)
    )
    return queries_from_blinding(params, iota, blinding)


# --- answers ----------------------------------------------------------------


@dataclass(frozen=True)
class AnswerSet:
    """Responses from a set of servers, in `server_ids` order (1-based)."""

    mode: str  # "trace" (base-field ints) or "full" (extension tuples)
    server_ids: tuple
    values: tuple


def server_answer(params: SchemeParams, j: int, query_j, db: Database, mode: str = "trace"):
    """Answer of server j: the Frobenius inner product of query and database.

    Full mode returns the extension symbol phi(beta_j); trace mode returns
    Tr(v_j * phi(beta_j)), a single base-field symbol.
    """
    if not 1 <= j <= params.k:
        raise IndexError(f"server id {j} outside [1, {params.k}]")
    check_dimensions(params, db)
    if len(query_j) != params.m or any(len(row) != params.delta for row in query_j):
        raise ValueError("query array shape does not match the database")
    ext = params.ext
    flat_q = [entry for row in query_j for entry in row]
    flat_x = [entry for row in db.entries for entry in row]
    answer = ext.dot(flat_q, flat_x)
    if mode == "full":
        return answer
    if mode == "trace":
        return ext.trace(ext.mul(params.v[j - 1], answer))
    raise ValueError(f"unknown answer mode {mode!r}")


def collect_answers(
    params: SchemeParams, queries: QuerySet, db: Database, mode: str = "trace", server_ids=None
) -> AnswerSet:
    """Honest answers from the given servers (defaults to all k)."""
    if server_ids is None:
        server_ids = tuple(range(1, params.k + 1))
    values = tuple(
        server_answer(params, j, queries.per_server[j - 1], db, mode) for j in server_ids
    )
    return AnswerSet(mode=mode, server_ids=tuple(server_ids), values=values)


# --- retrieval --------------------------------------------------------------


@dataclass(frozen=True)
class Retrieval:
    """Recovered file plus the servers whose answers were corrected."""

    symbols: tuple  # delta extension elements
    error_servers: tuple  # 1-based ids


@functools.lru_cache(maxsize=None)
def _trace_code_tables(params: SchemeParams) -> tuple:
    """Constants of the base-field decoding step.

    Returns (w, P, P_excl) where w are the dual multipliers of the
    beta-point code, P[j] = prod_l f_l(beta_j), and P_excl[i][j] leaves
    factor i out of the product.  All products are nonzero because the
    evaluation sets are disjoint.
    """
    base = params.base
    evals = [
        [polyring.poly_eval(base, list(f), beta) for beta in params.omega_beta]
        for f in params.min_polys
    ]
    P = []
    for j in range(params.k):
        prod = base.one
        for i in range(params.delta):
            prod = base.mul(prod, evals[i][j])
        if prod == base.zero:
            raise ArithmeticError("minimal polynomial vanishes at a beta point")
        P.append(prod)
    P_excl = []
    for i in range(params.delta):
        row = []
        for j in range(params.k):
            prod = base.one
            for l in range(params.delta):
                if l != i:
                    prod = base.mul(prod, evals[l][j])
            row.append(prod)
        P_excl.append(tuple(row))
    _, w = dual_multipliers(base, (), params.omega_beta)
    return tuple(w), tuple(P), tuple(P_excl)


def retrieve_from_r(params: SchemeParams, answers: AnswerSet) -> Retrieval:
    """Decode full-mode answers from exactly r servers, tolerating b errors."""
    if answers.mode != "full":
        raise ValueError("retrieve_from_r needs full-mode answers")
    ids = answers.server_ids
    if len(ids) != params.r or len(set(ids)) != len(ids):
        raise ValueError(f"need answers from exactly {params.r} distinct servers")
    if any(not 1 <= j <= params.k for j in ids):
        raise IndexError("server id outside [1, k]")
    ext = params.ext
    points = tuple(ext.embed(params.omega_beta[j - 1]) for j in ids)
    code = GrsCode(
        field=ext, points=points, multipliers=(ext.one,) * params.r, dim=params.r - 2 * params.b
    )
    try:
        result = grs_decode(code, answers.values)
    except DecodeFailure as exc:
        raise ByzantineBudgetExceeded(str(exc)) from exc
    phi = list(result.message_poly)
    symbols = tuple(polyring.poly_eval(ext, phi, alpha) for alpha in params.omega_alpha)
    return Retrieval(
        symbols=symbols,
        error_servers=tuple(ids[p] for p in result.error_positions),
    )


def retrieve_from_k(params: SchemeParams, answers: AnswerSet) -> Retrieval:
    """Reconstruct the file from all k trace answers, tolerating b errors.

    Step 1 scales answer j by prod_l f_l(beta_j); the scaled word lives in
    a base-field code of dimension k - 2b (its parity checks are the
    power sums of the beta points), which corrects up to b wrong answers.
    Step 2 rebuilds each file symbol from the corrected traces through the
    recovery polynomials and the dual basis.
    """
    if answers.mode != "trace":
        raise ValueError("retrieve_from_k needs trace-mode answers")
    if answers.server_ids != tuple(range(1, params.k + 1)):
        raise ValueError("trace retrieval needs answers from all k servers in order")
    base, ext = params.base, params.ext
    w, P, P_excl = _trace_code_tables(params)
    scaled = tuple(base.mul(P[j], answers.values[j]) for j in range(params.k))
    code = GrsCode(
        field=base,
        points=params.omega_beta,
        multipliers=w,
        dim=params.k - 2 * params.b,
    )
    try:
        result = grs_decode(code, scaled)
    except DecodeFailure as exc:
        raise ByzantineBudgetExceeded(str(exc)) from exc
    traces = tuple(
        base.mul(result.corrected_word[j], base.inv(P[j])) for j in range(params.k)
    )
    symbols = []
    for i in range(params.delta):
        acc = ext.zero
        for d in range(params.s):
            h = params.recovery_polys[i][d]
            total = base.zero
            for j in range(params.k):
                hval = polyring.poly_eval(base, list(h), params.omega_beta[j])
                total = base.add(total, base.mul(base.mul(hval, traces[j]), P_excl[i][j]))
            acc = ext.add(acc, ext.scalar_mul(total, params.theta[d]))
        symbols.append(ext.neg(acc))
    return Retrieval(
        symbols=tuple(symbols),
        error_servers=tuple(p + 1 for p in result.error_positions),
    )


# --- capacity ---------------------------------------------------------------


def capacity(t: int, b: int, k: int, m: int | None = None) -> Fraction:
    """Download capacity; finite-file version when m is given, else the limit.

    C_m = ((k-2b)/k) * (1 - t/(k-2b)) / (1 - (t/(k-2b))^m) and
    C = (k-2b-t)/k.  Exact rational arithmetic throughout.
    """
    if 2 * b + t >= k:
        raise InvalidParameters("2b+t < k", f"need 2b+t < k, got 2b+t={2 * b + t}, k={k}")
    if m is None:
        return Fraction(k - 2 * b, k) * (1 - Fraction(t, k - 2 * b))
    if m < 1:
        raise InvalidParameters("m >= 1", f"file count m={m} must be at least 1")
    ratio = Fraction(t, k - 2 * b)
    return Fraction(k - 2 * b, k) * (1 - ratio) / (1 - ratio**m)


# --- dual-code words (identities used by the audits) -------------------------


def rs_codeword(params: SchemeParams, phi_coeffs) -> tuple:
    """(phi(alpha_1..delta), phi(beta_1..k)) for a degree < r-2b polynomial."""
    ext = params.ext
    if polyring.degree(list(phi_coeffs)) >= params.r - 2 * params.b:
        raise ValueError("phi degree too high for the answer code")
    word = [polyring.poly_eval(ext, phi_coeffs, alpha) for alpha in params.omega_alpha]
    word += [
        polyring.poly_eval(ext, phi_coeffs, ext.embed(beta)) for beta in params.omega_beta
    ]
    return tuple(word)


def _dual_word(params: SchemeParams, h_base_coeffs) -> tuple:
    """(u_i h(alpha_i), ..., v_j h(beta_j), ...) for a base-field h."""
    ext = params.ext
    word = []
    for i, alpha in enumerate(params.omega_alpha):
        word.append(ext.mul(params.u[i], ext.eval_base_poly(h_base_coeffs, alpha)))
    for j, beta in enumerate(params.omega_beta):
        hval = polyring.poly_eval(params.base, list(h_base_coeffs), beta)
        word.append(ext.scalar_mul(hval, params.v[j]))
    return tuple(word)


def recovery_dual_words(params: SchemeParams) -> list:
    """The delta*s dual-code words built from the recovery polynomials.

    Word (i, d) uses h_{i,d} * prod_{l != i} f_l; each is orthogonal to
    every answer codeword, which is what makes reconstruction exact.
    """
    base = params.base
    words = []
    for i in range(params.delta):
        excl = [base.one]
        for l, f in enumerate(params.min_polys):
            if l != i:
                excl = polyring.poly_mul(base, excl, list(f))
        for d in range(params.s):
            h = polyring.poly_mul(base, list(params.recovery_polys[i][d]), excl)
            words.append(((i + 1, d + 1), _dual_word(params, h)))
    return words


def parity_check_words(params: SchemeParams) -> list:
    """The 2b check words xi^e * prod_l f_l (e < 2b); they vanish at every
    alpha, which restricts the scaled trace answers to a decodable code."""
    base = params.base
    full = [base.one]
    for f in params.min_polys:
        full = polyring.poly_mul(base, full, list(f))
    words = []
    for e in range(2 * params.b):
        h = [base.zero] * e + full
        words.append((e, _dual_word(params, h)))
    return words


# --- serialization ----------------------------------------------------------


def params_to_json_dict(params: SchemeParams) -> dict:
    ext, base = params.ext, params.base
    return {
        "k": params.k,
        "t": params.t,
        "b": params.b,
        "r": params.r,
        "delta": params.delta,
        "s": params.s,
        "m": params.m,
        "q": params.q,
        "field": params.tower.describe(),
        "omega_alpha": [ext.format_element(x) for x in params.omega_alpha],
        "omega_chi": [ext.format_element(x) for x in params.omega_chi],
        "omega_beta": list(params.omega_beta),
        "min_polys": [list(f) for f in params.min_polys],
        "u": [ext.format_element(x) for x in params.u],
        "v": [ext.format_element(x) for x in params.v],
        "theta": [ext.format_element(x) for x in params.theta],
        "eta": [ext.format_element(x) for x in params.eta],
        "recovery_polys": [[list(h) for h in row] for row in params.recovery_polys],
    }


def params_from_json_dict(data: dict) -> SchemeParams:
    tower = FieldTower.from_description(data["field"])
    ext = tower.ext
    params = SchemeParams(
        k=int(data["k"]),
        t=int(data["t"]),
        b=int(data["b"]),
        r=int(data["r"]),
        delta=int(data["delta"]),
        s=int(data["s"]),
        m=int(data["m"]),
        q=int(data["q"]),
        tower=tower,
        omega_alpha=tuple(ext.parse_element(x) for x in data["omega_alpha"]),
        omega_chi=tuple(ext.parse_element(x) for x in data["omega_chi"]),
        omega_beta=tuple(int(x) for x in data["omega_beta"]),
        min_polys=tuple(tuple(int(c) for c in f) for f in data["min_polys"]),
        u=tuple(ext.parse_element(x) for x in data["u"]),
        v=tuple(ext.parse_element(x) for x in data["v"]),
        theta=tuple(ext.parse_element(x) for x in data["theta"]),
        eta=tuple(ext.parse_element(x) for x in data["eta"]),
        recovery_polys=tuple(
            tuple(tuple(int(c) for c in h) for h in row) for row in data["recovery_polys"]
        ),
    )
    verify_params(params)
    return params
