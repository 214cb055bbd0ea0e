"""Exact feasibility of mixed strict / non-strict / equality linear systems.

Fourier-Motzkin elimination over the rationals.  Each derived row remembers
which input rows (and with which multipliers) it came from, so an infeasible
system yields a certificate: a combination of input rows whose variable part
cancels and whose constant contradicts the combined relation.  A feasible
system yields a witness by back-substitution.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence

from .errors import ResourceLimit

LT = "<"
LE = "<="
EQ = "="
RELATIONS = (LT, LE, EQ)

MAX_VARIABLES = 32
MAX_CONSTRAINTS = 10_000
MAX_ROWS = 400_000
MAX_PAIRS = 3_000_000


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class LinearForm:
    """``sum coeffs[v] * v + const`` with exact rational coefficients."""

    __slots__ = ("coeffs", "const")

    def __init__(self, coeffs: Mapping[str, object] | None = None, const=0):
        cleaned = {}
        for v, c in (coeffs or {}).items():
            c = _frac(c)
            if c:
                cleaned[str(v)] = c
        self.coeffs = dict(sorted(cleaned.items()))
        self.const = _frac(const)

    @classmethod
    def var(cls, name: str, coeff=1) -> "LinearForm":
        return cls({name: coeff})

    @classmethod
    def constant(cls, value) -> "LinearForm":
        return cls({}, value)

    def __add__(self, other) -> "LinearForm":
        if not isinstance(other, LinearForm):
            return LinearForm(self.coeffs, self.const + _frac(other))
        merged = dict(self.coeffs)
        for v, c in other.coeffs.items():
            merged[v] = merged.get(v, 0) + c
        return LinearForm(merged, self.const + other.const)

    __radd__ = __add__

    def __neg__(self) -> "LinearForm":
        return LinearForm({v: -c for v, c in self.coeffs.items()}, -self.const)

    def __sub__(self, other) -> "LinearForm":
        return self + (-other if isinstance(other, LinearForm) else -_frac(other))

    def __rsub__(self, other) -> "LinearForm":
        return (-self) + other

    def __mul__(self, k) -> "LinearForm":
        k = _frac(k)
        return LinearForm({v: c * k for v, c in self.coeffs.items()}, self.const * k)

    __rmul__ = __mul__

    def __truediv__(self, k) -> "LinearForm":
        return self * (1 / _frac(k))

    def __eq__(self, other) -> bool:
        return isinstance(other, LinearForm) and self.coeffs == other.coeffs and self.const == other.const

    def __hash__(self) -> int:
        return hash((tuple(self.coeffs.items()), self.const))

    def __repr__(self) -> str:
        terms = [f"{c}*{v}" for v, c in self.coeffs.items()]
        if self.const or not terms:
            terms.append(str(self.const))
        return " + ".join(terms)

    def evaluate(self, point: Mapping[str, object]) -> Fraction:
        return self.const + sum((c * _frac(point.get(v, 0)) for v, c in self.coeffs.items()), Fraction(0))

    def is_constant(self) -> bool:
        return not self.coeffs


@dataclass(frozen=True)
class Constraint:
    """``form <relation> 0``, stored with integer content-1 scaling.

    Equalities are additionally oriented so that their leading coefficient is
    positive; inequalities can only be scaled by positive factors.
    """

    form: LinearForm
    relation: str

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise ValueError(f"unknown relation {self.relation!r}")
        object.__setattr__(self, "form", _canonical_scale(self.form, self.relation == EQ))

    def holds_at(self, point: Mapping[str, object]) -> bool:
        val = self.form.evaluate(point)
        if self.relation == LT:
            return val < 0
        if self.relation == LE:
            return val <= 0
        return val == 0

    def __repr__(self) -> str:
        return f"{self.form} {self.relation} 0"

    def to_json(self) -> dict:
        return {
            "coefficients": {v: rational_to_json(c) for v, c in self.form.coeffs.items()},
            "constant": rational_to_json(self.form.const),
            "relation": self.relation,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Constraint":
        coeffs = {v: rational_from_json(c) for v, c in data["coefficients"].items()}
        return cls(LinearForm(coeffs, rational_from_json(data["constant"])), data["relation"])


def _canonical_scale(form: LinearForm, orient: bool) -> LinearForm:
    nums = list(form.coeffs.values()) + [form.const]
    den = 1
    for x in nums:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in nums]
    content = 0
    for x in ints:
        content = gcd(content, abs(x))
    if content == 0:
        return form
    scale = Fraction(den, content)
    if orient and form.coeffs and next(iter(form.coeffs.values())) < 0:
        scale = -scale
    return form * scale


def lt(a, b) -> Constraint:
    """``a < b``"""
    return Constraint(_as_form(a) - _as_form(b), LT)


def le(a, b) -> Constraint:
    return Constraint(_as_form(a) - _as_form(b), LE)


def gt(a, b) -> Constraint:
    return Constraint(_as_form(b) - _as_form(a), LT)


def ge(a, b) -> Constraint:
    return Constraint(_as_form(b) - _as_form(a), LE)


def eq(a, b) -> Constraint:
    return Constraint(_as_form(a) - _as_form(b), EQ)


def _as_form(x) -> LinearForm:
    return x if isinstance(x, LinearForm) else LinearForm.constant(x)


@dataclass(frozen=True)
class LinearSystem:
    constraints: tuple
    variables: tuple = ()
    labels: tuple = ()

    def __post_init__(self):
        cons = tuple(self.constraints)
        object.__setattr__(self, "constraints", cons)
        names = list(self.variables)
        seen = set(names)
        for c in cons:
            for v in c.form.coeffs:
                if v not in seen:
                    seen.add(v)
                    names.append(v)
        object.__setattr__(self, "variables", tuple(names))
        labels = tuple(self.labels) if self.labels else tuple("" for _ in cons)
        if len(labels) != len(cons):
            raise ValueError("one label per constraint")
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return len(self.constraints)

    def extend(self, constraints: Iterable[Constraint], labels: Iterable[str] | None = None) -> "LinearSystem":
        constraints = tuple(constraints)
        labels = tuple(labels) if labels is not None else tuple("" for _ in constraints)
        return LinearSystem(self.constraints + constraints, self.variables, self.labels + labels)

    def to_json(self) -> dict:
        return {
            "variables": list(self.variables),
            "constraints": [dict(c.to_json(), label=lab) for c, lab in zip(self.constraints, self.labels)],
        }

    @classmethod
    def from_json(cls, data: dict) -> "LinearSystem":
        cons = [Constraint.from_json(c) for c in data["constraints"]]
        labels = [c.get("label", "") for c in data["constraints"]]
        return cls(tuple(cons), tuple(data.get("variables", ())), tuple(labels))


@dataclass(frozen=True)
class Witness:
    values: Mapping

    def to_json(self) -> dict:
        return {"feasible": True, "witness": {v: rational_to_json(x) for v, x in self.values.items()}}


@dataclass(frozen=True)
class Certificate:
    """Multipliers on input rows; nonnegative on inequalities, any sign on equalities."""

    multipliers: tuple

    def to_json(self) -> dict:
        return {"feasible": False, "certificate": [[i, rational_to_json(m)] for i, m in self.multipliers]}


def rational_to_json(x) -> dict:
    x = _frac(x)
    return {"num": str(x.numerator), "den": str(x.denominator)}


def rational_from_json(data) -> Fraction:
    if isinstance(data, dict):
        return Fraction(int(data["num"]), int(data["den"]))
    return Fraction(data)


# internal row representation ------------------------------------------------------
#
# A row is (coefs, const, strict, node): integer coefs/const of content 1
# meaning  coefs . x + const  (< if strict else <=)  0.  ``node`` records how
# the row was built, so multipliers over the input rows can be rebuilt for the
# one row that ends up contradictory.


def _int_row(c: Constraint, index: Sequence[str]):
    den = 1
    for x in list(c.form.coeffs.values()) + [c.form.const]:
        den = den * x.denominator // gcd(den, x.denominator)
    coefs = [0] * len(index)
    pos = {v: i for i, v in enumerate(index)}
    for v, x in c.form.coeffs.items():
        coefs[pos[v]] = int(x * den)
    return coefs, int(c.form.const * den), den


def _normalize(coefs, const):
    g = abs(const)
    for x in coefs:
        g = gcd(g, abs(x))
    if g > 1:
        return tuple(x // g for x in coefs), const // g, g
    return tuple(coefs), const, 1


def _combine(p, q, var):
    """Positive combination cancelling ``var`` (p has a positive, q a negative coefficient)."""
    a = p[0][var]
    b = -q[0][var]
    k = gcd(a, b)
    ma, mb = b // k, a // k
    coefs, const, g = _normalize([ma * x + mb * y for x, y in zip(p[0], q[0])], ma * p[1] + mb * q[1])
    return (coefs, const, p[2] or q[2], ((p[3], ma), (q[3], mb), g))


def _provenance(node) -> dict:
    """Expand a row's build record into multipliers on input rows."""
    memo: dict = {}

    def rec(nd):
        key = id(nd)
        if key in memo:
            return memo[key]
        if nd[0] == "in":
            out = {nd[1]: Fraction(nd[2])}
        else:
            (left, ml), (right, mr), g = nd
            out = {}
            for i, m in rec(left).items():
                out[i] = out.get(i, 0) + m * ml / g
            for i, m in rec(right).items():
                out[i] = out.get(i, 0) + m * mr / g
        memo[key] = out
        return out

    return {i: m for i, m in rec(node).items() if m}


def _is_contradiction(const, strict) -> bool:
    return const >= 0 if strict else const > 0


def _dedupe(rows):
    """Among rows with parallel variable parts keep only the tightest."""
    best: dict = {}
    for r in rows:
        coefs = r[0]
        g = 0
        for x in coefs:
            g = gcd(g, abs(x))
        if g == 0:
            # constant row: a tautology carries nothing, a contradiction ends the run
            if _is_contradiction(r[1], r[2]):
                return [r]
            continue
        direction = tuple(x // g for x in coefs) if g > 1 else coefs
        cur = best.get(direction)
        if cur is None:
            best[direction] = (g, r)
            continue
        cg, cr = cur
        # larger constant per unit of direction is the tighter upper bound
        lhs, rhs = r[1] * cg, cr[1] * g
        if lhs > rhs or (lhs == rhs and r[2] and not cr[2]):
            best[direction] = (g, r)
    return [r for _, r in best.values()]


@dataclass
class _Trace:
    """What back-substitution needs: eliminated variables in order with their rows."""

    variables: Sequence[str]
    substitutions: list  # (var index, equality row) in elimination order
    stages: list  # (var index, rows mentioning it) in elimination order
    free: list


class _Infeasible(Exception):
    def __init__(self, node):
        self.node = node


def _run(system: LinearSystem):
    names = list(system.variables)
    nv = len(names)
    if nv > MAX_VARIABLES:
        raise ResourceLimit(f"{nv} variables exceeds {MAX_VARIABLES}")
    if len(system.constraints) > MAX_CONSTRAINTS:
        raise ResourceLimit(f"{len(system.constraints)} constraints exceeds {MAX_CONSTRAINTS}")
    eqs = []
    ineqs = []
    for idx, c in enumerate(system.constraints):
        coefs, const, den = _int_row(c, names)
        coefs, const, g = _normalize(coefs, const)
        node = ("in", idx, Fraction(den, g))
        if c.relation == EQ:
            eqs.append((coefs, const, node))
        else:
            ineqs.append((coefs, const, c.relation == LT, node))
    trace = _Trace(names, [], [], [])
    alive = set(range(nv))

    # equalities: substitute away one variable each
    pending = eqs
    while pending:
        coefs, const, node = pending.pop()
        piv = next((j for j in range(nv) if coefs[j]), None)
        if piv is None:
            if const != 0:
                raise _Infeasible(node)
            continue
        a = coefs[piv]

        def subst(oc, ok, onode):
            b = oc[piv]
            if not b:
                return oc, ok, onode
            # |a| * other - sign(a) * b * row cancels piv and keeps the other row's orientation
            ka = abs(a)
            kb = b if a > 0 else -b
            nc, nk, g = _normalize([ka * x - kb * y for x, y in zip(oc, coefs)], ka * ok - kb * const)
            return nc, nk, ((onode, ka), (node, -kb), g)

        pending = [subst(*r) for r in pending]
        new_ineqs = []
        for r in ineqs:
            c2, k2, n2 = subst(r[0], r[1], r[3])
            new_ineqs.append((c2, k2, r[2], n2))
        ineqs = new_ineqs
        trace.substitutions.append((piv, (tuple(coefs), const)))
        alive.discard(piv)

    rows = _dedupe(ineqs)
    while True:
        live_rows = []
        for r in rows:
            if any(r[0][j] for j in alive):
                live_rows.append(r)
            elif _is_contradiction(r[1], r[2]):
                raise _Infeasible(r[3])
        rows = live_rows
        used = [j for j in sorted(alive) if any(r[0][j] for r in rows)]
        trace.free.extend(j for j in sorted(alive) if j not in used)
        alive = set(used)
        if not alive:
            break
        best = None
        for j in used:
            pos = sum(1 for r in rows if r[0][j] > 0)
            neg = sum(1 for r in rows if r[0][j] < 0)
            cost = pos * neg - pos - neg
            if best is None or cost < best[0]:
                best = (cost, j)
        var = best[1]
        involved = [r for r in rows if r[0][var]]
        rest = [r for r in rows if not r[0][var]]
        trace.stages.append((var, involved))
        pos = [r for r in involved if r[0][var] > 0]
        neg = [r for r in involved if r[0][var] < 0]
        if len(pos) * len(neg) > MAX_PAIRS:
            raise ResourceLimit(f"eliminating {names[var]} would combine {len(pos) * len(neg)} row pairs")
        new_rows = [_combine(p, q, var) for p in pos for q in neg]
        rows = _dedupe(rest + new_rows)
        if len(rows) > MAX_ROWS:
            raise ResourceLimit(f"elimination produced {len(rows)} rows")
        alive.discard(var)
    return trace


def _pick(lower, lower_strict, upper, upper_strict) -> Fraction:
    if lower is None and upper is None:
        return Fraction(0)
    if lower is None:
        return upper - 1
    if upper is None:
        return lower + 1
    if lower == upper:
        return lower
    return (lower + upper) / 2


def _back_substitute(trace: _Trace) -> dict:
    names = trace.variables
    value = [Fraction(0)] * len(names)
    for var, involved in reversed(trace.stages):
        lower = upper = None
        ls = us = False
        for coefs, const, strict, _ in involved:
            a = coefs[var]
            rest = const + sum(c * value[j] for j, c in enumerate(coefs) if j != var and c)
            bound = Fraction(-rest, a)
            if a > 0:
                if upper is None or bound < upper or (bound == upper and strict):
                    upper, us = bound, strict
            else:
                if lower is None or bound > lower or (bound == lower and strict):
                    lower, ls = bound, strict
        value[var] = _pick(lower, ls, upper, us)
    for var, (coefs, const) in reversed(trace.substitutions):
        rest = const + sum(c * value[j] for j, c in enumerate(coefs) if j != var and c)
        value[var] = Fraction(-rest, coefs[var])
    return {names[i]: value[i] for i in range(len(names))}


def eliminate(system: LinearSystem, var: str) -> LinearSystem:
    """Project ``system`` onto the variables other than ``var`` (one elimination step).

    Equalities mentioning ``var`` are used for substitution; otherwise every
    (positive, negative) pair of rows is combined.  Each output row is labelled
    with the input rows it derives from.
    """
    if var not in system.variables:
        raise KeyError(var)
    cons = list(system.constraints)
    with_var = [i for i, c in enumerate(cons) if var in c.form.coeffs]
    without = [i for i, c in enumerate(cons) if var not in c.form.coeffs]
    out, labels = [], []
    for i in without:
        out.append(cons[i])
        labels.append(f"r{i}")
    eq_idx = next((i for i in with_var if cons[i].relation == EQ), None)
    if eq_idx is not None:
        e = cons[eq_idx].form
        a = e.coeffs[var]
        for i in with_var:
            if i == eq_idx:
                continue
            f = cons[i].form
            new = f - e * (f.coeffs[var] / a)
            out.append(Constraint(new, cons[i].relation))
            labels.append(f"r{i}+r{eq_idx}")
    else:
        pos = [i for i in with_var if cons[i].form.coeffs[var] > 0]
        neg = [i for i in with_var if cons[i].form.coeffs[var] < 0]
        for i in pos:
            for j in neg:
                fi, fj = cons[i].form, cons[j].form
                new = fi * (-fj.coeffs[var]) + fj * fi.coeffs[var]
                rel = LT if LT in (cons[i].relation, cons[j].relation) else LE
                out.append(Constraint(new, rel))
                labels.append(f"r{i}+r{j}")
    # constant rows that are tautologies carry no information
    kept = [(c, l) for c, l in zip(out, labels) if not (c.form.is_constant() and c.holds_at({}))]
    variables = tuple(v for v in system.variables if v != var)
    return LinearSystem(tuple(c for c, _ in kept), variables, tuple(l for _, l in kept))


def solve(system: LinearSystem):
    """Return a verified :class:`Witness` or :class:`Certificate`."""
    try:
        trace = _run(system)
    except _Infeasible as exc:
        cert = Certificate(tuple(sorted(_provenance(exc.node).items())))
        if not verify(cert, system):
            raise AssertionError("internal error: certificate failed verification")
        return cert
    wit = Witness(_back_substitute(trace))
    if not verify(wit, system):
        raise AssertionError("internal error: witness failed verification")
    return wit


def is_feasible(system: LinearSystem) -> bool:
    return isinstance(solve(system), Witness)


def combine_certificate(cert: Certificate, system: LinearSystem):
    """The combined row ``(coeffs, const, relation)`` of a certificate."""
    coeffs: dict = {}
    const = Fraction(0)
    strict = nonstrict = False
    for i, m in cert.multipliers:
        c = system.constraints[i]
        for v, a in c.form.coeffs.items():
            coeffs[v] = coeffs.get(v, 0) + m * a
        const += m * c.form.const
        if m:
            if c.relation == LT:
                strict = True
            elif c.relation == LE:
                nonstrict = True
    coeffs = {v: a for v, a in coeffs.items() if a}
    relation = LT if strict else (LE if nonstrict else EQ)
    return coeffs, const, relation


def verify(outcome, system: LinearSystem) -> bool:
    """Check a witness by substitution or a certificate by summing rows."""
    if isinstance(outcome, Witness):
        return all(c.holds_at(outcome.values) for c in system.constraints)
    if isinstance(outcome, Certificate):
        for i, m in outcome.multipliers:
            if not 0 <= i < len(system.constraints):
                return False
            if system.constraints[i].relation != EQ and m < 0:
                return False
        coeffs, const, relation = combine_certificate(outcome, system)
        if coeffs:
            return False
        if relation == LT:
            return const >= 0
        if relation == LE:
            return const > 0
        return const != 0
    return False
