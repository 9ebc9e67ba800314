"""Independent cross-checks for the reduction pipeline.

Everything here deliberately avoids the code paths it is checking: the SAT
solver enumerates or branches on the CNF directly, and the layout
materializer places gadget copies with its own inline arithmetic instead of
going through the compiled circuit or the reference successor relation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations

from .errors import NotValidated, TooLargeToMaterialize
from .graph import Digraph, graph_equal
from .mso import CompiledFormula, parse
from .reduce import CnfInstance, GadgetQuadruple, compile_reduction, toy_quadruple
from .sgr import materialize

# -- SAT -----------------------------------------------------------------

_ENUM_LIMIT = 20


def sat_solve(S: CnfInstance):
    """Return (satisfiable, model) where model maps variable -> bool.

    Small instances are enumerated; larger ones go through unit-propagating
    DPLL.
    """
    if S.s <= _ENUM_LIMIT:
        for q in range(1 << S.s):
            if S.value(q):
                return True, {v: bool((q >> (v - 1)) & 1) for v in range(1, S.s + 1)}
        return False, None
    return _dpll([list(c) for c in S.clauses], {}, S.s)


def _dpll(clauses, assignment, s):
    while True:
        unit = None
        simplified = []
        for clause in clauses:
            live = []
            satisfied = False
            for lit in clause:
                val = assignment.get(abs(lit))
                if val is None:
                    live.append(lit)
                elif (lit > 0) == val:
                    satisfied = True
                    break
            if satisfied:
                continue
            if not live:
                return False, None
            if len(live) == 1 and unit is None:
                unit = live[0]
            simplified.append(live)
        clauses = simplified
        if unit is None:
            break
        assignment = dict(assignment)
        assignment[abs(unit)] = unit > 0
    if not clauses:
        model = {v: assignment.get(v, False) for v in range(1, s + 1)}
        return True, model
    branch = abs(clauses[0][0])
    for value in (True, False):
        trial = dict(assignment)
        trial[branch] = value
        ok, model = _dpll(clauses, trial, s)
        if ok:
            return True, model
    return False, None


# -- independent layout materialization ----------------------------------


def delta_layout(quad: GadgetQuadruple, S: CnfInstance) -> Digraph:
    """Materialize the glued chain by placing gadget copies directly.

    Labels follow the compiled layout, but the placement arithmetic below
    is local to this function: each copy's edges are dropped onto the label
    line, and the gluing identifications fall out of the slot numbering.
    """
    if not isinstance(quad, GadgetQuadruple):
        raise NotValidated("expected a normalized GadgetQuadruple")
    s = S.s
    ell_hat = (1 << s) - 1
    n1, n2 = quad.n1, quad.n2
    size1 = quad.g1.n
    kpp = quad.k_dprime
    big_n = quad.big_n(s)

    def pre(r):  # prefix gadget slot
        if r < quad.g2.n - kpp:
            return r
        return n2 + ell_hat * n1 + r + size1 - quad.g2.n

    def mid(q, r):  # copy-q slot; shared tails collapse onto the last copy
        if r < size1 - kpp:
            return n2 + q * n1 + r
        return n2 + ell_hat * n1 + r

    def post(r):  # suffix gadget slot
        return n2 + (1 << s) * n1 + r

    edges = set()
    for u, v in quad.g2.graph.edges:
        edges.add((pre(u), pre(v)))
    for q in range(1 << s):
        body = quad.g0 if S.value(q) else quad.g1
        for u, v in body.graph.edges:
            edges.add((mid(q, u), mid(q, v)))
    for u, v in quad.g3.graph.edges:
        edges.add((post(u), post(v)))
    return Digraph(big_n, edges)


# -- end-to-end reports --------------------------------------------------

LOOP_SENTENCE = "ex x. E(x,x)"
DEFAULT_SEED = 2024


@dataclass(frozen=True)
class InstanceRecord:
    instance: CnfInstance
    satisfiable: bool
    models_sentence: bool
    routes_agree: bool
    succ_ref_agrees: bool
    n_vertices: int
    gate_count: int

    @property
    def ok(self):
        return (
            self.routes_agree
            and self.succ_ref_agrees
            and self.satisfiable == self.models_sentence
        )

    def to_json_obj(self):
        return {
            "s": self.instance.s,
            "clauses": [list(c) for c in self.instance.clauses],
            "satisfiable": self.satisfiable,
            "models_sentence": self.models_sentence,
            "routes_agree": self.routes_agree,
            "succ_ref_agrees": self.succ_ref_agrees,
            "n_vertices": self.n_vertices,
            "gate_count": self.gate_count,
            "ok": self.ok,
        }


@dataclass(frozen=True)
class EndToEndReport:
    records: tuple

    @property
    def ok(self):
        return all(r.ok for r in self.records)

    def to_json_obj(self):
        return {"ok": self.ok, "records": [r.to_json_obj() for r in self.records]}


def check_instance(S: CnfInstance, quad=None, sentence=LOOP_SENTENCE, limit=100000) -> InstanceRecord:
    """Compile S, materialize along every route, evaluate the sentence, and
    compare the verdict with a direct SAT decision."""
    if quad is None:
        quad = toy_quadruple()
    sgr = compile_reduction(quad, S)
    if sgr.n_vertices > limit:
        raise TooLargeToMaterialize(f"N={sgr.n_vertices} exceeds limit {limit}")
    g = materialize(sgr, limit)
    agree = graph_equal(g, delta_layout(quad, S))
    from .reduce import succ_ref

    ref = Digraph(
        sgr.n_vertices,
        ((x, y) for x in range(sgr.n_vertices) for y in succ_ref(quad, S, x)),
    )
    models = CompiledFormula(parse(sentence)).eval(g)
    sat, _ = sat_solve(S)
    return InstanceRecord(
        S, sat, models, agree, graph_equal(g, ref), sgr.n_vertices, sgr.circuit.gate_count()
    )


def end_to_end(quad=None, sentence=LOOP_SENTENCE, instances=None, limit=100000) -> EndToEndReport:
    """Run check_instance across a battery (the built-in one by default)."""
    if instances is None:
        instances = small_cnf_battery() + seeded_cnf_battery(3, 10, DEFAULT_SEED)
    return EndToEndReport(
        tuple(check_instance(S, quad, sentence, limit) for S in instances)
    )


# -- instance batteries --------------------------------------------------


def small_cnf_battery():
    """Every CNF on one or two variables with at most two clauses, clauses
    drawn from the distinct-variable clauses of length one or two."""
    out = []
    for s in (1, 2):
        lits = [l for v in range(1, s + 1) for l in (v, -v)]
        clauses = [(l,) for l in lits]
        clauses += [
            c
            for c in combinations(lits, 2)
            if len({abs(l) for l in c}) == 2
        ]
        for count in (0, 1, 2):
            for chosen in combinations(clauses, count):
                out.append(CnfInstance(s, chosen))
    return out


def seeded_cnf_battery(s: int, count: int, seed: int):
    """Reproducible random instances: clause counts and widths drawn
    uniformly from small ranges."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n_clauses = rng.randint(1, 2 * s)
        clauses = []
        for _ in range(n_clauses):
            width = rng.randint(1, min(3, s))
            variables = rng.sample(range(1, s + 1), width)
            clauses.append(tuple(v if rng.random() < 0.5 else -v for v in variables))
        out.append(CnfInstance(s, clauses))
    return out
