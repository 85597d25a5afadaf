"""Replay of the nine-case nullcone argument from plain-text case scripts.

Setting: ``A1 = J2`` and ``A2``, ``A3`` are drawn from the three witness families
(``b1..b5`` parametrise ``A2``, ``c1..c5`` parametrise ``A3``).  For families 2 and 3
the matrix is ``T J2 adj(T) / det(T)``, so every equation is a fraction whose
denominator is a product of *atoms*: irreducible factors of the two determinants and
the nonzero coefficients ``alpha1, alpha2, beta1, beta2, gamma``.

An equation is kept as ``num / (const * prod atom^e)`` in lowest terms with respect
to the atoms.  A substitution ``v = expr / den`` (``den`` a product of atoms) is
applied to numerators and atoms alike; atoms that change are split again into
monomial content and a monic primitive part.

Script statements (one per line, ``#`` starts a comment)::

    case J K                                   A2 from family J, A3 from family K
    solve VAR = EXPR [over DEN] using EQ        EQ must be linear in VAR with an atom
                                                coefficient and vanish after the step
    split EQ = F1 * F2^k ...                    numerator = const * factors * atoms
    branch NAME: VAR = EXPR [over DEN]          one branch per vanishing factor
    expect unit using EQ
    expect factor EXPR using EQ
    expect det_vanishing [using EQ]
    expect upper_triangular

Equation names: tr23, mixa, mixb1, mixb2, tr123, tr2233 (in that order:
``tr(A2A3)``, ``tr(A1²A2)+α1tr(A2²A3)+α2tr(A3²A1)``, ``tr(A1²A3)-β1tr(A3²A2)``,
``tr(A1²A3)-β2tr(A2²A1)``, ``tr(A1A2A3)+γtr(A1A3A2)``, ``tr(A2²A3²)``).
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import UsageError
from .fields import FieldSpec, get_field
from .invariants import InvariantExpr, ParamSet, build_generators
from .matrices import Matrix, jordan_j2, sigma, word_product
from .poly import MultiPoly, PolyRing, parse_poly
from .report import FAIL, PASS, VerificationReport, make_report

PARAMS = ("alpha1", "alpha2", "beta1", "beta2", "gamma")
CASE_VARS = tuple(f"b{i}" for i in range(1, 6)) + tuple(f"c{i}" for i in range(1, 6)) + PARAMS

# (coefficient name or None, word over {1: A1, 2: A2, 3: A3})
EQUATIONS: dict[str, list[tuple[str | None, int, str]]] = {
    "tr23": [(None, 1, "23")],
    "mixa": [(None, 1, "112"), ("alpha1", 1, "223"), ("alpha2", 1, "331")],
    "mixb1": [(None, 1, "113"), ("beta1", -1, "332")],
    "mixb2": [(None, 1, "113"), ("beta2", -1, "221")],
    "tr123": [(None, 1, "123"), ("gamma", 1, "132")],
    "tr2233": [(None, 1, "2233")],
}


@functools.lru_cache(maxsize=None)
def case_ring(spec: FieldSpec) -> PolyRing:
    return PolyRing(get_field(spec), CASE_VARS)


def family_t(ring: PolyRing, family: int, prefix: str) -> Matrix | None:
    """The normalised conjugating matrix ``T`` of a witness family (None for family 1)."""
    t = [None] + [ring.var(f"{prefix}{i}") for i in range(1, 6)]
    z, one = ring.zero, ring.one
    if family == 1:
        return None
    if family == 2:
        return Matrix(ring, [[t[3] * t[4], t[1], t[2]], [t[3], t[4], t[5]], [z, one, z]])
    if family == 3:
        return Matrix(ring, [[t[1], t[2], t[3] * t[4]], [t[3], z, t[4]], [one, z, z]])
    raise UsageError(f"family must be 1, 2 or 3, got {family}")


def family_numerator(ring: PolyRing, family: int, prefix: str) -> tuple[Matrix, MultiPoly]:
    """``(N, D)`` with ``B = N / D``: ``N = T J2 adj(T)``, ``D = det(T)``; family 1 has ``D = 1``."""
    if family == 1:
        t = [None] + [ring.var(f"{prefix}{i}") for i in range(1, 4)]
        z = ring.zero
        return Matrix(ring, [[z, t[1], t[2]], [z, z, t[3]], [z, z, z]]), ring.one
    T = family_t(ring, family, prefix)
    return T @ jordan_j2(ring) @ T.adjugate(), T.det()


# atoms and fractions ------------------------------------------------------------------------

def _monic(p: MultiPoly) -> tuple[object, MultiPoly]:
    F = p.ring.field
    lead = max(p.terms)
    c = p.terms[lead]
    return c, p.scale(F.inv(c))


def split_factors(p: MultiPoly) -> tuple[object, list[MultiPoly]]:
    """``p = const * prod(factors)``: single variables of the monomial content and the monic primitive part."""
    if p.is_zero():
        raise ZeroDivisionError("zero has no factorisation")
    ring = p.ring
    content = [min(e[k] for e in p.terms) for k in range(ring.nvars)]
    factors = []
    for k, a in enumerate(content):
        factors += [ring.var(ring.names[k])] * a
    if any(content):
        shift = tuple(content)
        p = MultiPoly(ring, {tuple(a - b for a, b in zip(e, shift)): c for e, c in p.terms.items()})
    c, prim = _monic(p)
    if not prim.is_constant():
        factors.append(prim)
    return c, factors


def _clear(p: MultiPoly, var: str, expr: MultiPoly, den: MultiPoly) -> tuple[MultiPoly, int]:
    """``p(var = expr/den) * den^k`` and ``k = deg_var(p)``."""
    ring = p.ring
    k = ring.index(var)
    deg = max((e[k] for e in p.terms), default=0)
    if deg == 0:
        return p, 0
    by_power: dict[int, dict] = {}
    for e, c in p.terms.items():
        ne = list(e)
        ne[k] = 0
        by_power.setdefault(e[k], {})[tuple(ne)] = c
    total = ring.zero
    for a, terms in by_power.items():
        total = total + MultiPoly(ring, terms) * expr**a * den ** (deg - a)
    return total, deg


@dataclass
class Fraction:
    num: MultiPoly
    const: object
    den: dict  # atom -> exponent

    def copy(self) -> Fraction:
        return Fraction(self.num, self.const, dict(self.den))


class CaseState:
    """Equations, registered atoms, and the substitutions applied so far."""

    def __init__(self, spec: FieldSpec, j: int, k: int):
        self.spec = spec
        self.ring = R = case_ring(spec)
        self.F = R.field
        self.families = (j, k)
        self.log: list[str] = []
        self.killed: list[str] = []
        self.atoms: dict[MultiPoly, str] = {}
        for name in PARAMS:
            self.atoms[R.var(name)] = "param"
        N2, D2 = family_numerator(R, j, "b")
        N3, D3 = family_numerator(R, k, "c")
        self.N = {1: jordan_j2(R), 2: N2, 3: N3}
        dens = {1: (self.F.one, []), 2: self._register(D2, "det"), 3: self._register(D3, "det")}
        self.eqs: dict[str, Fraction] = {}
        for name, terms in EQUATIONS.items():
            a = max(w.count("2") for _, _, w in terms)
            b = max(w.count("3") for _, _, w in terms)
            num = R.zero
            for coef, sign, w in terms:
                prod = word_product([int(ch) for ch in w], self.N)
                val = prod.trace() * D2 ** (a - w.count("2")) * D3 ** (b - w.count("3"))
                if coef:
                    val = val * R.var(coef)
                num = num + (val if sign > 0 else -val)
            const = self.F.mul(self.F.power(dens[2][0], a), self.F.power(dens[3][0], b))
            den: dict = {}
            for f in dens[2][1]:
                den[f] = den.get(f, 0) + a
            for f in dens[3][1]:
                den[f] = den.get(f, 0) + b
            self.eqs[name] = self._cancel(Fraction(num, const, den))

    def _register(self, p: MultiPoly, kind: str) -> tuple[object, list[MultiPoly]]:
        c, factors = split_factors(p)
        for f in factors:
            if f not in self.atoms or kind == "det":
                self.atoms[f] = "det" if self.atoms.get(f) == "det" or kind == "det" else kind
        return c, factors

    def _cancel(self, fr: Fraction) -> Fraction:
        num = fr.num
        den = {a: e for a, e in fr.den.items() if e}
        for a in list(den):
            while den[a] and not num.is_zero():
                q = num.divide_exact(a)
                if q is None:
                    break
                num, den[a] = q, den[a] - 1
        return Fraction(num, fr.const, {a: e for a, e in den.items() if e})

    def copy(self) -> CaseState:
        new = CaseState.__new__(CaseState)
        new.__dict__.update(self.__dict__)
        new.log = list(self.log)
        new.killed = list(self.killed)
        new.atoms = dict(self.atoms)
        new.eqs = {k: v.copy() for k, v in self.eqs.items()}
        return new

    def atom_product(self, p: MultiPoly) -> bool:
        _, factors = split_factors(p)
        return all(f in self.atoms for f in factors)

    def strip(self, p: MultiPoly) -> tuple[MultiPoly, list[MultiPoly]]:
        """Divide out registered atoms as often as possible."""
        removed = []
        changed = True
        while changed and not p.is_zero():
            changed = False
            for a in self.atoms:
                q = p.divide_exact(a)
                if q is not None:
                    p, changed = q, True
                    removed.append(a)
                    break
        return p, removed

    def substitute(self, var: str, expr: MultiPoly, den: MultiPoly, allow_kill: bool = False) -> None:
        F = self.F
        if den.is_zero() or not self.atom_product(den):
            raise CaseScriptError(f"denominator {den} is not a product of nonvanishing factors")
        dc, dfactors = split_factors(den)
        # atoms first: old atom a becomes a_new / den^k
        image: dict[MultiPoly, tuple[object, list[MultiPoly], int]] = {}
        new_atoms: dict[MultiPoly, str] = {}
        for a, kind in self.atoms.items():
            a_new, k = _clear(a, var, expr, den)
            if a_new.is_zero():
                if not allow_kill:
                    raise CaseScriptError(f"substitution {var} = ({expr})/({den}) makes {a} vanish")
                self.killed.append(f"{a} ({kind})")
                continue
            c, fs = split_factors(a_new)
            image[a] = (c, fs, k)
            for f in fs:
                if new_atoms.get(f) != "det":
                    new_atoms[f] = kind if f not in new_atoms else ("det" if "det" in (kind, new_atoms[f]) else kind)
        for f in dfactors:
            new_atoms.setdefault(f, self.atoms.get(f, "det"))
        if self.killed:
            self.atoms = new_atoms
            self.log.append(f"{var} = {expr}" + (f" / ({den})" if not den.is_constant() else ""))
            return
        eqs = {}
        for name, fr in self.eqs.items():
            num, k = _clear(fr.num, var, expr, den)
            const = fr.const
            den_exp: dict = {}
            shift = -k  # net power of den in the numerator
            for a, e in fr.den.items():
                c, fs, ka = image[a]
                const = F.mul(const, F.power(c, e))
                for f in fs:
                    den_exp[f] = den_exp.get(f, 0) + e
                shift += e * ka
            if shift > 0:
                num = num * den**shift
            elif shift < 0:
                const = F.mul(const, F.power(dc, -shift))
                for f in dfactors:
                    den_exp[f] = den_exp.get(f, 0) - shift
            eqs[name] = self._cancel(Fraction(num, const, den_exp))
        self.eqs = eqs
        self.atoms = new_atoms
        self.log.append(f"{var} = {expr}" + (f" / ({den})" if not den.is_constant() else ""))

    def describe(self, name: str) -> str:
        fr = self.eqs[name]
        if not fr.den:
            return str(fr.num)
        den = " * ".join(f"({a})^{e}" if e > 1 else f"({a})" for a, e in sorted(fr.den.items(), key=lambda t: str(t[0])))
        return f"({fr.num}) / ({den})"


class CaseScriptError(RuntimeError):
    pass


# script parsing ----------------------------------------------------------------------------

@dataclass
class Step:
    kind: str  # solve | split | expect
    line: int
    text: str
    var: str | None = None
    expr: str | None = None
    den: str | None = None
    eq: str | None = None
    factors: list[tuple[str, int]] = field(default_factory=list)
    expectation: str | None = None


@dataclass
class Branch:
    name: str
    var: str
    expr: str
    den: str | None
    line: int
    steps: list[Step] = field(default_factory=list)


@dataclass
class CaseScript:
    case: tuple[int, int]
    steps: list[Step]
    branches: list[Branch]
    source: str = ""

    @property
    def case_id(self) -> str:
        return f"({self.case[0]},{self.case[1]})"


_SOLVE = re.compile(r"^solve\s+(\w+)\s*=\s*(.+?)(?:\s+over\s+(.+?))?\s+using\s+(\w+)$")
_SPLIT = re.compile(r"^split\s+(\w+)\s*=\s*(.+)$")
_BRANCH = re.compile(r"^branch\s+(\w+)\s*:\s*(\w+)\s*=\s*(.+?)(?:\s+over\s+(.+))?$")
_EXPECT = re.compile(r"^expect\s+(unit|factor|det_vanishing|upper_triangular)(?:\s+(?!using\b)(.+?))?(?:\s+using\s+(\w+))?$")


def _top_level_factors(text: str) -> list[tuple[str, int]]:
    """Split ``F1 * (F2)^2 * ...`` at top-level ``*`` signs."""
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "*" and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    out = []
    for p in parts:
        p = p.strip()
        m = re.match(r"^(.*)\^\s*(\d+)$", p)
        if m and (m.group(1).strip().endswith(")") or re.fullmatch(r"\w+", m.group(1).strip())):
            out.append((m.group(1).strip(), int(m.group(2))))
        else:
            out.append((p, 1))
    return out


def parse_case_script(text: str) -> CaseScript:
    case = None
    top: list[Step] = []
    branches: list[Branch] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        target = branches[-1].steps if branches else top
        if line.startswith("case"):
            m = re.match(r"^case\s+([123])\s+([123])$", line)
            if not m or case is not None:
                raise UsageError(f"line {lineno}: bad or repeated case header {line!r}")
            case = (int(m.group(1)), int(m.group(2)))
        elif m := _SOLVE.match(line):
            target.append(Step("solve", lineno, line, var=m.group(1), expr=m.group(2), den=m.group(3), eq=m.group(4)))
        elif m := _SPLIT.match(line):
            if branches:
                raise UsageError(f"line {lineno}: split inside a branch is not supported")
            target.append(Step("split", lineno, line, eq=m.group(1), factors=_top_level_factors(m.group(2))))
        elif m := _BRANCH.match(line):
            branches.append(Branch(m.group(1), m.group(2), m.group(3), m.group(4), lineno))
        elif m := _EXPECT.match(line):
            target.append(Step("expect", lineno, line, expectation=m.group(1), expr=m.group(2), eq=m.group(3)))
        else:
            raise UsageError(f"line {lineno}: cannot parse {line!r}")
    if case is None:
        raise UsageError("missing 'case J K' header")
    for eqname in [s.eq for s in top] + [s.eq for b in branches for s in b.steps]:
        if eqname is not None and eqname not in EQUATIONS:
            raise UsageError(f"unknown equation {eqname!r}")
    return CaseScript(case, top, branches, text)


def shipped_scripts() -> list[CaseScript]:
    folder = resources.files("trinv") / "case_scripts"
    names = sorted(p.name for p in folder.iterdir() if p.name.endswith(".case"))
    return [parse_case_script((folder / n).read_text()) for n in names]


def load_case_script(path: str | Path) -> CaseScript:
    return parse_case_script(Path(path).read_text())


# replay --------------------------------------------------------------------------------------

def _eval_on(expr: InvariantExpr, mats: list[Matrix], ring: PolyRing) -> MultiPoly:
    total = ring.zero
    values = {a: sigma(a.k, word_product(a.word, mats)) for a in expr.monomials()}
    for key, c in expr.terms.items():
        term = ring.const(c)
        for a in key:
            term = term * values[a]
        total = total + term
    return total


def _param_point(F, params: ParamSet) -> dict:
    return params.in_field(F)


def _run_steps(state: CaseState, steps: list[Step], params: ParamSet, item: dict) -> None:
    R = state.ring
    for st in steps:
        if st.kind == "solve":
            fr = state.eqs[st.eq]
            k = R.index(st.var)
            if max((e[k] for e in fr.num.terms), default=0) != 1:
                raise CaseScriptError(f"line {st.line}: {st.eq} is not linear in {st.var}")
            coeff = fr.num.diff(st.var)
            rest, _ = state.strip(coeff)
            if not rest.is_constant() or rest.is_zero():
                raise CaseScriptError(f"line {st.line}: coefficient of {st.var} in {st.eq} may vanish: {coeff}")
            expr = parse_poly(st.expr, R)
            den = parse_poly(st.den, R) if st.den else R.one
            state.substitute(st.var, expr, den)
            if not state.eqs[st.eq].num.is_zero():
                raise CaseScriptError(f"line {st.line}: {st.eq} does not vanish after {st.var} = {st.expr}: "
                                      f"{state.describe(st.eq)}")
            item["steps"].append(st.text)
        elif st.kind == "split":
            num = state.eqs[st.eq].num
            q = num
            for text, k in st.factors:
                f = parse_poly(text, R) ** k
                nq = q.divide_exact(f)
                if nq is None:
                    raise CaseScriptError(f"line {st.line}: ({text})^{k} does not divide {st.eq}")
                q = nq
            rest, _ = state.strip(q)
            if not rest.is_constant() or rest.is_zero():
                raise CaseScriptError(f"line {st.line}: {st.eq} has an unlisted factor {rest}")
            item["steps"].append(st.text)
        elif st.kind == "expect":
            _check_expectation(state, st, params, item)
            return
    raise CaseScriptError("script path ends without an expectation")


def _check_expectation(state: CaseState, st: Step, params: ParamSet, item: dict) -> None:
    R, F = state.ring, state.F
    kind = st.expectation
    item["expected"] = kind + (f" {st.expr}" if st.expr else "")
    if kind == "upper_triangular":
        if state.families != (1, 1):
            raise CaseScriptError("upper_triangular applies to family (1,1) only")
        nonzero = [n for n, fr in state.eqs.items() if not fr.num.is_zero()]
        gens = build_generators(state.spec)
        mats = [state.N[1], state.N[2], state.N[3]]
        alive = [str(e) for e in gens if not _eval_on(e, mats, R).is_zero()]
        item["residual"] = "all equations and generators vanish identically" if not (nonzero or alive) else \
            f"nonzero: {nonzero + alive}"
        item["status"] = PASS if not (nonzero or alive) else FAIL
        return
    if kind == "det_vanishing" and st.eq is None:
        dets = [k for k in state.killed if k.endswith("(det)")]
        item["residual"] = f"determinant factor set to zero: {', '.join(state.killed) or 'none'}"
        item["status"] = PASS if dets else FAIL
        return
    if state.killed:
        raise CaseScriptError(f"line {st.line}: equations are undefined after a determinant factor vanished")
    fr = state.eqs[st.eq]
    item["residual"] = state.describe(st.eq)
    num = fr.num
    if num.is_zero():
        item["status"] = FAIL
        item["reason"] = f"{st.eq} vanishes identically"
        return
    if kind == "unit":
        rest, removed = state.strip(num)
        ok = rest.is_constant()
    elif kind == "factor":
        f = parse_poly(st.expr, R)
        q = num.divide_exact(f)
        rest, removed = state.strip(q) if q is not None else (num, [])
        ok = q is not None and rest.is_constant()
        bad_vars = f.variables() - set(PARAMS)
        value = f.evaluate(_param_point(F, params)) if not bad_vars else None
        item["factor_value"] = F.format(value) if value is not None else None
        ok = ok and value is not None and not F.is_zero(value)
    else:  # det_vanishing using EQ
        rest, removed = state.strip(num)
        ok = rest.is_constant() and any(state.atoms.get(a) == "det" for a in removed)
    item["stripped_factors"] = sorted(str(a) for a in removed)
    item["status"] = PASS if ok else FAIL


def run_case_script(script: CaseScript, spec: FieldSpec, params: ParamSet | None = None) -> list[dict]:
    """Replay one script; returns one item per terminal branch."""
    params = params or ParamSet.default(spec)
    params.validate(get_field(spec))
    results = []
    base = CaseState(spec, *script.case)
    item = {"id": script.case_id, "families": list(script.case), "steps": []}
    try:
        if not script.branches:
            _run_steps(base, script.steps, params, item)
            return [item]
        _run_steps_until_split(base, script.steps, params, item)
        split = next((s for s in script.steps if s.kind == "split"), None)
        covered = set()
        for br in script.branches:
            st = base.copy()
            sub = {"id": f"{script.case_id}{br.name}", "families": list(script.case), "steps": list(item["steps"])}
            R = st.ring
            expr = parse_poly(br.expr, R)
            den = parse_poly(br.den, R) if br.den else R.one
            if split is not None:
                hit = None
                for text, _ in split.factors:
                    f = parse_poly(text, R)
                    img, _ = _clear(f, br.var, expr, den)
                    if img.is_zero() and f.diff(br.var) and _linear_with_atom_coeff(st, f, br.var):
                        hit = text
                if hit is None:
                    raise CaseScriptError(f"line {br.line}: branch {br.name} does not solve any split factor")
                covered.add(hit)
            st.substitute(br.var, expr, den, allow_kill=True)
            sub["steps"].append(f"branch {br.name}: {br.var} = {br.expr}" + (f" over {br.den}" if br.den else ""))
            try:
                _run_steps(st, br.steps, params, sub)
            except CaseScriptError as exc:
                sub["status"], sub["reason"] = FAIL, str(exc)
            results.append(sub)
        if split is not None:
            missing = [t for t, _ in split.factors if t not in covered and parse_poly(t, base.ring) not in base.atoms]
            if missing:
                results.append({"id": f"{script.case_id}*", "status": FAIL,
                                "reason": f"factors without a branch: {missing}"})
        return results
    except CaseScriptError as exc:
        item["status"], item["reason"] = FAIL, str(exc)
        return [item] + results


def _linear_with_atom_coeff(state: CaseState, f: MultiPoly, var: str) -> bool:
    k = f.ring.index(var)
    if max((e[k] for e in f.terms), default=0) != 1:
        return False
    rest, _ = state.strip(f.diff(var))
    return rest.is_constant() and not rest.is_zero()


def _run_steps_until_split(state: CaseState, steps: list[Step], params: ParamSet, item: dict) -> None:
    for st in steps:
        if st.kind == "expect":
            raise CaseScriptError(f"line {st.line}: expectation before branches")
        try:
            _run_steps(state, [st], params, item)
        except CaseScriptError as exc:
            if str(exc) != "script path ends without an expectation":
                raise


def run_all_cases(spec: FieldSpec, params: ParamSet | None = None, scripts: list[CaseScript] | None = None) -> VerificationReport:
    params = params or ParamSet.default(spec)
    scripts = scripts if scripts is not None else shipped_scripts()
    items = []
    for sc in scripts:
        items += run_case_script(sc, spec, params)
    ids = sorted({sc.case for sc in scripts})
    status = None
    if len(ids) != 9 and scripts is None:
        status = FAIL
    return make_report("hsop-cases", spec, items, status=status,
                       parameters={"params": list(params.as_tuple()), "cases": [f"({a},{b})" for a, b in ids]})
