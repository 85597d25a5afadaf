"""Checks around the nullcone of 3x3 matrix triples.

Nilpotent classification and Jordan conjugation, the rank-one identity, the
strict-triangularity criterion for a pair ``(J2, B)``, the witness families,
Jacobian independence of parameter systems and a randomized hunt for tuples that
kill a parameter system without killing the whole invariant ring.
"""

from __future__ import annotations

import functools
import itertools

import numpy as np

from .cases import CaseScript, family_numerator, case_ring, shipped_scripts
from .errors import UsageError
from .fields import FieldSpec, get_field
from .invariants import GeneratorSet, ParamSet, build_generators, build_hsop, tr
from .linalg import exact_rank, nullspace
from .matrices import (
    Matrix,
    batch_adjugate,
    batch_det,
    batch_matmul,
    conjugate,
    generic,
    jordan_j1,
    jordan_j2,
    sigma,
    toeplitz_l,
)
from .poly import MultiPoly, PolyRing, parse_poly
from .report import FAIL, INCONCLUSIVE, PASS, VerificationReport, derive_seed, make_report
from .spans import SampleSet

ZERO, RANK_ONE, RANK_TWO, NOT_NILPOTENT = "Zero", "RankOne_J1", "RankTwo_J2", "NotNilpotent"


# nilpotent 3x3 matrices --------------------------------------------------------------------

def classify_nilpotent(A: Matrix) -> str:
    if A.n != 3:
        raise UsageError("classification is for 3x3 matrices")
    F = A.field
    if any(not F.is_zero(sigma(k, A)) for k in (1, 2, 3)):
        return NOT_NILPOTENT
    if A.is_zero():
        return ZERO
    return RANK_ONE if (A @ A).is_zero() else RANK_TWO


def _column(A: Matrix, j: int) -> list:
    return [A.rows[i][j] for i in range(A.n)]


def _apply(A: Matrix, v: list) -> list:
    F = A.field
    out = []
    for row in A.rows:
        acc = F.zero
        for a, x in zip(row, v):
            acc = F.add(acc, F.mul(a, x))
        out.append(acc)
    return out


def _from_columns(F, cols: list[list]) -> Matrix:
    return Matrix(F, [[c[i] for c in cols] for i in range(len(cols[0]))])


def conjugate_to_jordan(A: Matrix) -> tuple[Matrix, Matrix]:
    """``(T, J)`` with ``A = T J T^-1`` and ``J`` one of ``J1``, ``J2``."""
    kind = classify_nilpotent(A)
    F = A.field
    if kind in (ZERO, NOT_NILPOTENT):
        raise UsageError(f"matrix is {kind}; expected a nonzero nilpotent matrix")
    basis = [[F.one if i == j else F.zero for i in range(3)] for j in range(3)]
    if kind == RANK_TWO:
        A2 = A @ A
        v = next(e for e in basis if any(not F.is_zero(x) for x in _apply(A2, e)))
        T = _from_columns(F, [_apply(A2, v), _apply(A, v), v])
        return T, jordan_j2(F)
    # J1 = E12: columns (Av, v, w) with w in the kernel, independent of Av
    v = next(e for e in basis if any(not F.is_zero(x) for x in _apply(A, e)))
    Av = _apply(A, v)
    for w in nullspace(A.rows, F):
        T = _from_columns(F, [Av, v, list(w)])
        if not F.is_zero(T.det()):
            return T, jordan_j1(F)
    raise AssertionError("kernel of a rank-one 3x3 matrix is two-dimensional")


def random_invertible(F, rng: np.random.Generator, n: int = 3) -> Matrix:
    while True:
        g = Matrix(F, F.vrandom(rng, (n, n)).tolist())
        if not F.is_zero(g.det()):
            return g


def _rng(seed: int, task: str) -> np.random.Generator:
    return np.random.default_rng(derive_seed(seed, task))


# identities ------------------------------------------------------------------------------------

def verify_rank1_identity(spec: FieldSpec | None = None, trials: int = 200, seed: int = 20240601) -> VerificationReport:
    """``J1 B J1 = tr(J1 B) J1`` for generic ``B``; ``A B A = tr(A B) A`` for conjugates ``A`` of ``J1``."""
    spec = spec or FieldSpec.surrogate()
    F = get_field(spec)
    B = generic(1, 3, 1, spec)
    J1 = jordan_j1(B.ring)
    residual = J1 @ B @ J1 - J1.scale((J1 @ B).trace())
    items = [{"id": "generic", "status": PASS if residual.is_zero() else FAIL,
              "residual": "0" if residual.is_zero() else str(residual)}]
    rng = _rng(seed, "rank1")
    bad = 0
    for _ in range(trials):
        g = random_invertible(F, rng)
        A = conjugate(g, jordan_j1(F))
        Bn = Matrix(F, F.vrandom(rng, (3, 3)).tolist())
        if A @ Bn @ A != A.scale((A @ Bn).trace()):
            bad += 1
    items.append({"id": "conjugated samples", "samples": trials, "violations": bad,
                  "status": PASS if bad == 0 else FAIL})
    return make_report("rank1-identity", spec, items, seeds=[seed])


@functools.lru_cache(maxsize=None)
def _b_ring(spec: FieldSpec) -> PolyRing:
    return PolyRing(get_field(spec), [f"b{i}{j}" for i in (1, 2, 3) for j in (1, 2, 3)] + ["x"])


def _b_matrix(R: PolyRing) -> Matrix:
    return Matrix(R, [[R.var(f"b{i}{j}") for j in (1, 2, 3)] for i in (1, 2, 3)])


def verify_teranishi(spec: FieldSpec | None = None) -> VerificationReport:
    """Replay: ``A = J2``, the listed trace conditions force ``B`` strictly upper triangular."""
    spec = spec or FieldSpec.surrogate()
    R = _b_ring(spec)
    A, B = jordan_j2(R), _b_matrix(R)
    A2 = A @ A
    v = {name: R.var(name) for name in R.names}
    items = []

    def step(name, ok, residual):
        items.append({"id": name, "status": PASS if ok else FAIL, "residual": str(residual)})
        return ok

    t = (A2 @ B).trace()
    step("tr(A^2 B) = b31", t == v["b31"], t)
    B1 = B.subs({"b31": R.zero})
    t = (A @ B1).trace()
    step("tr(A B) = b21 + b32", t == v["b21"] + v["b32"], t)
    B2 = B1.subs({"b32": -v["b21"]})
    t = (A2 @ B2 @ B2).trace()
    # a nonzero constant times b21^2 forces b21 = 0 (no nilpotents in a field)
    q = t.divide_exact(v["b21"] ** 2)
    step("tr(A^2 B^2) = c * b21^2, c != 0", q is not None and q.is_constant() and not q.is_zero(), t)
    B3 = B2.subs({"b21": R.zero})
    d1, d2, d3 = v["b11"], v["b22"], v["b33"]
    elementary = [d1 + d2 + d3, d1 * d2 + d1 * d3 + d2 * d3, d1 * d2 * d3]
    ok = all(sigma(k, B3) == e for k, e in zip((1, 2, 3), elementary))
    # sigma_k = e_k(diagonal) = 0 means the characteristic polynomial is lambda^3: diagonal zero
    step("sigma_k(B) = e_k(b11, b22, b33)", ok, "; ".join(str(sigma(k, B3)) for k in (1, 2, 3)))
    B4 = B3.subs({"b11": R.zero, "b22": R.zero, "b33": R.zero})
    strict = all(B4.rows[i][j].is_zero() for i in range(3) for j in range(3) if i >= j)
    step("strictly upper triangular", strict, B4)
    t = (A @ B4 @ B4).trace()
    step("tr(A B^2) = 0", t.is_zero(), t)

    # control: without tr(A^2 B^2) = 0 the conclusion fails
    x = v["x"]
    z, one = R.zero, R.one
    C = Matrix(R, [[z, x, z], [one, z, x], [z, -one, z]])
    others = [(A2 @ C).trace(), (A @ C).trace()] + [sigma(k, C) for k in (1, 2, 3)]
    dropped = (A2 @ C @ C).trace()
    control_ok = all(o.is_zero() for o in others) and not dropped.is_zero() and not C.rows[1][0].is_zero()
    items.append({"id": "control: drop tr(A^2 B^2) = 0", "status": PASS if control_ok else FAIL,
                  "residual": f"B = [[0,x,0],[1,0,x],[0,-1,0]] keeps the other constraints, tr(A^2 B^2) = {dropped}"})
    return make_report("teranishi", spec, items)


def lemma2_families(R: PolyRing) -> list[tuple[str, Matrix, dict]]:
    """The three printed families, family 1 and 2 multiplied through by their denominators."""
    b1, b2, b3 = R.var("b11"), R.var("b12"), R.var("b13")
    z = R.zero
    f1 = Matrix(R, [[b3 * b1, b2 * b3, -b3 * b3], [z, z, z], [b1 * b1, b2 * b1, -b3 * b1]])
    f2 = Matrix(R, [[z, b1 * b3, b1 * b2], [z, b3 * b2, b2 * b2], [z, -b3 * b3, -b3 * b2]])
    f3 = Matrix(R, [[z, b1, b2], [z, z, z], [z, b3, z]])
    return [
        ("family 1", f1, {}),
        ("family 2", f2, {}),
        ("family 3, b2 = 0", f3.subs({"b12": R.zero}), {}),
        ("family 3, b3 = 0", f3.subs({"b13": R.zero}), {}),
    ]


def _rank_at_most_one(M: Matrix) -> bool:
    for r in itertools.combinations(range(3), 2):
        for c in itertools.combinations(range(3), 2):
            if not M.submatrix(r, c).det().is_zero():
                return False
    return True


def _lemma2_sample(F, rng, branch: str) -> Matrix:
    """Random rank-one ``B = u v^T`` with ``v.u = 0`` and ``b21 = u2 v1 = 0`` in the given branch."""
    r = lambda: F.random_nonzero(rng)
    z = F.zero
    if branch == "b23=0, b31!=0":
        u1, u3, v1, v2 = r(), r(), r(), F.random(rng)
        u = [u1, z, u3]
        v = [v1, v2, F.neg(F.div(F.mul(u1, v1), u3))]
    elif branch == "b23!=0, b31=0":
        u2, v2, v3, u1 = r(), F.random(rng), r(), F.random(rng)
        u = [u1, u2, F.neg(F.div(F.mul(u2, v2), v3))]
        v = [z, v2, v3]
    else:  # b23 = b31 = 0
        if rng.integers(2):
            u = [r(), z, z]
            v = [z, F.random(rng), F.random(rng)]
            if all(F.is_zero(x) for x in v):
                v[1] = F.one
        else:
            u1, u3, v2 = r(), r(), F.random(rng)
            u = [u1, z, u3]
            v = [z, v2, z] if not F.is_zero(v2) else [z, F.one, z]
    return Matrix(F, [[F.mul(a, b) for b in v] for a in u])


def verify_lemmaII(spec: FieldSpec | None = None, trials: int = 500, seed: int = 20240601) -> VerificationReport:
    spec = spec or FieldSpec.surrogate()
    F = get_field(spec)
    R = _b_ring(spec)
    J1 = jordan_j1(R)
    items = []
    for name, B, _ in lemma2_families(R):
        hyp = [sigma(k, B) for k in (1, 2, 3)] + [(J1 @ B).trace()]
        ok_h = all(h.is_zero() for h in hyp) and _rank_at_most_one(B)
        concl = (J1 @ B).is_zero() or (B @ J1).is_zero()
        items.append({"id": name, "status": PASS if ok_h and concl else FAIL,
                      "hypotheses": ok_h, "conclusion": concl})
    J1n = jordan_j1(F)
    for branch in ("b23=0, b31!=0", "b23!=0, b31=0", "b23=b31=0"):
        rng = _rng(seed, f"lemma2:{branch}")
        bad = 0
        for _ in range(trials):
            B = _lemma2_sample(F, rng, branch)
            hyp_ok = all(F.is_zero(sigma(k, B)) for k in (1, 2, 3)) and F.is_zero((J1n @ B).trace()) \
                and B.rank() == 1 and (B @ B).is_zero()
            if not hyp_ok or not ((J1n @ B).is_zero() or (B @ J1n).is_zero()):
                bad += 1
        items.append({"id": f"random {branch}", "samples": trials, "violations": bad,
                      "status": PASS if bad == 0 else FAIL})
    return make_report("lemma2-identities", spec, items, seeds=[seed], parameters={"trials": trials})


def verify_lemmaI_families(spec: FieldSpec | None = None, seed: int = 20240601,
                           completeness: tuple[int, ...] = (2, 3)) -> VerificationReport:
    """Each witness family satisfies the constraints; every admissible ``B`` lands in one.

    Membership is checked symbolically with ``B det(T) = T J2 adj(T)``.  Completeness
    is checked by brute force over the prime fields listed in ``completeness``: every
    conjugate ``B = g J2 g^-1`` with ``tr(J2 B) = tr(J2^2 B^2) = 0`` must be strictly
    upper triangular or admit a stabiliser ``L`` with ``g L`` in family 2 or 3.
    """
    spec = spec or FieldSpec.surrogate()
    R = case_ring(spec)
    A = jordan_j2(R)
    items = []
    for fam in (1, 2, 3):
        N, D = family_numerator(R, fam, "b")
        res = {
            "tr(J2 B)": (A @ N).trace(),
            "tr(J2^2 B^2)": (A @ A @ N @ N).trace(),
            **{f"sigma{k}(B)": sigma(k, N) for k in (1, 2, 3)},
        }
        bad = {k: str(v) for k, v in res.items() if not v.is_zero()}
        items.append({"id": f"family {fam}", "status": PASS if not bad else FAIL,
                      "det": str(D), "residuals": bad or "all zero"})
    # L commutes with J2
    F = get_field(spec)
    rng = _rng(seed, "stabiliser")
    ok = True
    for _ in range(50):
        L = toeplitz_l(F, F.random_nonzero(rng), F.random(rng), F.random(rng))
        ok &= conjugate(L, jordan_j2(F)) == jordan_j2(F)
    items.append({"id": "stabiliser L J2 L^-1 = J2", "status": PASS if ok else FAIL})
    for p in completeness:
        items.append(lemmaI_completeness(p))
    return make_report("lemmaI-families", spec, items, seeds=[seed])


def lemmaI_completeness(p: int) -> dict:
    """Exhaustive family matching over GF(p)."""
    spec = FieldSpec.small_char(p, 1)
    F = get_field(spec)
    G = np.array(list(itertools.product(range(p), repeat=9)), dtype=np.int64).reshape(-1, 3, 3)
    det = batch_det(F, G)
    G, det = G[det != 0], det[det != 0]
    J2 = F.asarray(jordan_j2(F).rows)
    adj = batch_adjugate(F, G)
    B = batch_matmul(F, batch_matmul(F, G, np.broadcast_to(J2, G.shape)), adj)
    B = F.vmul(B, F.vinv(det)[:, None, None])
    JB = batch_matmul(F, np.broadcast_to(J2, B.shape), B)
    t1 = F.vadd(JB[:, 0, 0], F.vadd(JB[:, 1, 1], JB[:, 2, 2]))
    J22 = batch_matmul(F, np.broadcast_to(J2, B.shape), np.broadcast_to(J2, B.shape))
    M = batch_matmul(F, batch_matmul(F, J22, B), B)
    t2 = F.vadd(M[:, 0, 0], F.vadd(M[:, 1, 1], M[:, 2, 2]))
    keep = (t1 == 0) & (t2 == 0)
    G, B = G[keep], B[keep]
    counts = {"family 1": 0, "family 2": 0, "family 3": 0, "unmatched": 0}
    inv = lambda a: F.inv(int(a))
    for g, b in zip(G, B):
        if all(b[i, j] == 0 for i in range(3) for j in range(3) if i >= j):
            counts["family 1"] += 1
            continue
        g = [[int(x) for x in r] for r in g]
        if g[2][0]:
            a = inv(g[2][0])
            bb = F.neg(F.mul(a, F.mul(g[2][1], inv(g[2][0]))))
            c = F.neg(F.mul(F.add(F.mul(bb, g[2][1]), F.mul(a, g[2][2])), inv(g[2][0])))
            T = _times_l(F, g, a, bb, c)
            if T[1][1] == 0 and T[0][2] == F.mul(T[1][0], T[1][2]):
                counts["family 3"] += 1
                continue
        elif g[2][1]:
            a = inv(g[2][1])
            bb = F.neg(F.mul(a, F.mul(g[2][2], inv(g[2][1]))))
            T = _times_l(F, g, a, bb, 0)
            if T[0][0] == F.mul(T[1][0], T[1][1]):
                counts["family 2"] += 1
                continue
        counts["unmatched"] += 1
    return {"id": f"completeness GF({p})", "admissible": int(len(B)), "counts": counts,
            "status": PASS if counts["unmatched"] == 0 else FAIL}


def _times_l(F, g, a, b, c):
    L = [[a, b, c], [0, a, b], [0, 0, a]]
    return [[functools.reduce(F.add, (F.mul(g[i][k], L[k][j]) for k in range(3)), 0) for j in range(3)]
            for i in range(3)]


# independence --------------------------------------------------------------------------------------

def jacobian_ranks(gens: GeneratorSet, points: int, seed: int) -> list[int]:
    """Rank of the Jacobian of ``gens`` at ``points`` random points."""
    F = get_field(gens.spec)
    polys = [e.to_poly(gens.n, gens.d) for e in gens.elements]
    ring = polys[0].ring
    rng = _rng(seed, f"jacobian:{gens.label}")
    point = {name: F.vrandom(rng, (points,)) for name in ring.names}
    J = np.stack([np.stack([p.diff(v).evaluate_batch(point, (points,)) for v in ring.names]) for p in polys])
    return [exact_rank(J[:, :, t], F) for t in range(points)]


def jacobian_independence(gens: GeneratorSet, trials: int = 10, seed: int = 20240601) -> VerificationReport:
    ranks = jacobian_ranks(gens, trials, seed)
    target = len(gens.elements)
    status = PASS if max(ranks) == target else INCONCLUSIVE
    items = [{"id": gens.label, "target_rank": target, "ranks": ranks, "status": status}]
    return make_report("hsop-independence", gens.spec, items, seeds=[seed],
                       parameters={"set": gens.label, "points": trials})


def planted_dependence(spec: FieldSpec, params: ParamSet | None = None) -> GeneratorSet:
    """The 19-element system with ``tr(X1^2 X2^2)`` swapped for ``tr(X1 X2)^2``."""
    P = build_hsop("R33", params, spec)
    F = get_field(spec)
    target = tr(F, 1, 1, 2, 2)
    index = P.elements.index(target)
    return P.replace(index, tr(F, 1, 2) * tr(F, 1, 2), "P-planted")


def planted_dependence_control(spec: FieldSpec, points: int = 100, seed: int = 20240601) -> VerificationReport:
    gens = planted_dependence(spec)
    ranks = jacobian_ranks(gens, points, seed)
    full = sum(r == len(gens.elements) for r in ranks)
    items = [{"id": "planted dependence", "points": points, "max_rank": max(ranks), "full_rank_points": full,
              "status": PASS if full == 0 else FAIL}]
    return make_report("hsop-independence-control", spec, items, seeds=[seed])


# nullcone ------------------------------------------------------------------------------------------

def _random_strict_upper(F, rng, shape) -> np.ndarray:
    X = F.vrandom(rng, shape + (3, 3))
    mask = np.triu(np.ones((3, 3), dtype=bool), 1)
    return np.where(mask, X, F.vzeros(X.shape))


def _random_conjugate(F, rng, X: np.ndarray) -> np.ndarray:
    """Conjugate each tuple ``X[:, s]`` by its own random invertible matrix."""
    N = X.shape[1]
    g = F.vrandom(rng, (N, 3, 3))
    det = batch_det(F, g)
    while F.vis_zero(det).any():
        bad = F.vis_zero(det)
        g[bad] = F.vrandom(rng, (int(bad.sum()), 3, 3))
        det = batch_det(F, g)
    ginv = F.vmul(batch_adjugate(F, g), F.vinv(det)[:, None, None])
    return np.stack([batch_matmul(F, batch_matmul(F, g, X[r]), ginv) for r in range(X.shape[0])])


def _nonzero_rows(S: SampleSet, gens: GeneratorSet) -> np.ndarray:
    V = S.matrix(gens.elements)
    return ~S.field.vis_zero(V)


def script_paths(script: CaseScript, ring: PolyRing) -> list[tuple[str, list[tuple[str, MultiPoly, MultiPoly]]]]:
    """Every branch of a script as an ordered list of substitutions ``var = expr / den``."""
    def subs_of(steps):
        return [(s.var, parse_poly(s.expr, ring), parse_poly(s.den, ring) if s.den else ring.one)
                for s in steps if s.kind == "solve"]

    head = subs_of(script.steps)
    if not script.branches:
        return [(script.case_id, head)]
    return [(f"{script.case_id}{b.name}",
             head + [(b.var, parse_poly(b.expr, ring), parse_poly(b.den, ring) if b.den else ring.one)]
             + subs_of(b.steps)) for b in script.branches]


@functools.lru_cache(maxsize=None)
def _family_polys(spec: FieldSpec, family: int, prefix: str):
    R = case_ring(spec)
    N, D = family_numerator(R, family, prefix)
    return N, D


def witness_samples(script: CaseScript, spec: FieldSpec, params: ParamSet, N: int, rng) -> dict:
    """Numeric replay of a script's substitutions on random free values.

    Returns the admissible ``(J2, A2, A3)`` triples for each branch; samples where a
    denominator or ``det(T)`` vanishes are counted as degenerate.
    """
    R = case_ring(spec)
    F = R.field
    out = {}
    pv = params.in_field(F)
    for path_id, subs in script_paths(script, R):
        point = {name: F.vrandom(rng, (N,)) for name in R.names if name.startswith(("b", "c"))}
        point.update({k: F.vconst(v, (N,)) for k, v in pv.items()})
        ok = np.ones(N, dtype=bool)
        for var, expr, den in subs:
            dv = den.evaluate_batch(point, (N,))
            ok &= ~F.vis_zero(dv)
            safe = np.where(F.vis_zero(dv), F.vones((N,)), dv)
            point[var] = F.vmul(expr.evaluate_batch(point, (N,)), F.vinv(safe))
        mats = []
        for letter, fam in ((2, script.case[0]), (3, script.case[1])):
            Nm, D = _family_polys(spec, fam, "b" if letter == 2 else "c")
            dv = D.evaluate_batch(point, (N,))
            ok &= ~F.vis_zero(dv)
            safe = np.where(F.vis_zero(dv), F.vones((N,)), dv)
            M = np.stack([np.stack([Nm.rows[i][j].evaluate_batch(point, (N,)) for j in range(3)], -1)
                          for i in range(3)], -2)
            mats.append(F.vmul(M, F.vinv(safe)[:, None, None]))
        J2 = np.broadcast_to(F.asarray(jordan_j2(F).rows), (N, 3, 3))
        X = np.stack([np.array(J2), mats[0], mats[1]])[:, ok]
        out[path_id] = {"X": X, "degenerate": int(N - ok.sum())}
    return out


def nullcone_vanishing(spec: FieldSpec | None = None, trials: int = 1000, hunt: int = 10_000,
                       seed: int = 20240601, params: ParamSet | None = None) -> VerificationReport:
    spec = spec or FieldSpec.surrogate()
    F = get_field(spec)
    params = params or ParamSet.default(spec)
    P = build_hsop("R33", params, spec)
    G = build_generators(spec)
    items = []

    rng = _rng(seed, "nullcone:upper")
    X = _random_strict_upper(F, rng, (3, trials))
    for label, arr in (("strictly upper triangular", X), ("random conjugates", _random_conjugate(F, rng, X))):
        S = SampleSet.from_array(spec, arr)
        nz_p = int(_nonzero_rows(S, P).sum())
        nz_g = int(_nonzero_rows(S, G).sum())
        items.append({"id": label, "samples": trials, "nonzero_P": nz_p, f"nonzero_{G.label}": nz_g,
                      "status": PASS if nz_p == nz_g == 0 else FAIL})

    scripts = shipped_scripts()
    per_path = max(1, -(-hunt // sum(len(script_paths(s, case_ring(spec))) for s in scripts)))
    total = feasible = violations = 0
    for sc in scripts:
        rng = _rng(seed, f"nullcone:hunt:{sc.case_id}")
        for path_id, got in witness_samples(sc, spec, params, per_path, rng).items():
            Xs = got["X"]
            n_ok = Xs.shape[1]
            fz = nv = 0
            if n_ok:
                Xs = _random_conjugate(F, rng, Xs)
                S = SampleSet.from_array(spec, Xs)
                p_zero = ~_nonzero_rows(S, P).any(axis=0)
                g_nonzero = _nonzero_rows(S, G).any(axis=0)
                fz = int(p_zero.sum())
                nv = int((p_zero & g_nonzero).sum())
            total += per_path
            feasible += fz
            violations += nv
            items.append({"id": f"hunt {path_id}", "samples": per_path, "degenerate": got["degenerate"],
                          "P_vanishes": fz, "violations": nv, "status": PASS if nv == 0 else FAIL})
    return make_report("nullcone", spec, items, seeds=[seed],
                       parameters={"trials": trials, "hunt_samples": total, "hunt_feasible": feasible,
                                   "hunt_violations": violations, "params": list(params.as_tuple()),
                                   "verdict": "consistent" if violations == 0 else "counterexample"})
