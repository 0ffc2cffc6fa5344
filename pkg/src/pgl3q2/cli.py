"""Command-line verification suites.

Each suite runs a batch of exact checks (expected value versus computed
value) and emits a report as text or JSON.  The process exits 0 exactly
when every check in the requested suites passed.

    verify all
    verify lattice-counts --json --out report.json
    verify quotient-gm --radius 3 --format dot --out quotient.dot
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import building, elimination, hermitian
from .building import (
    ProjElement,
    act,
    alpha_m,
    base_vertex,
    beta_l,
    beta_m,
    canonicalize,
    covolume,
    gamma_m,
    generating_pair,
    neighbors,
    orbit_bfs,
    projective_equal,
    reference_vertices,
    relative_index,
    s4_vertex_type,
    sigma,
    signed_perm_s4,
    stabilizer_in_finite,
    tau,
    vertex_of_lattice,
)
from .elimination import (
    BivarPoly,
    alpha_candidate,
    build_projectors,
    eliminate_centralizing,
    eliminate_inverting,
    evaluate_poly_matrix,
    integral_odd_det,
    scalar_cube_conditions,
)
from .hermitian import (
    index7_sublattices,
    lattice_L,
    lattice_M,
    lattice_equal,
    frames,
    m_copies_in_L,
    recognize_isometry_group,
    superlattices,
)
from .linalg import from_columns, identity, inv3, mat_mul, mat_pow, mat_scale, mat_eq
from .qlambda import LAM, LBAR, QuadRat

SUITE_NAMES = (
    "lattice-counts",
    "isometry-groups",
    "superlattices",
    "index-eight",
    "building-gm",
    "building-gl",
    "covolume",
    "elimination",
)


@dataclass
class Check:
    id: str
    statement: str
    expected: str
    computed: str

    @property
    def passed(self) -> bool:
        return self.expected == self.computed

    def to_dict(self):
        return {
            "id": self.id,
            "statement": self.statement,
            "expected": self.expected,
            "computed": self.computed,
            "pass": self.passed,
        }


@dataclass
class Report:
    suite: str
    checks: list
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self):
        return {
            "suite": self.suite,
            "checks": [c.to_dict() for c in self.checks],
            "wall_time": self.wall_time,
            "pass": self.passed,
        }

    def text(self) -> str:
        lines = [f"suite {self.suite}"]
        for c in self.checks:
            mark = "PASS" if c.passed else "FAIL"
            line = f"  [{mark}] {c.id}: {c.statement}"
            if not c.passed:
                line += f" (expected {c.expected}, computed {c.computed})"
            lines.append(line)
        lines.append(f"  {'ok' if self.passed else 'FAILED'}"
                     f" ({self.wall_time:.2f}s)")
        return "\n".join(lines)


class _Context:
    """Shared expensive objects, built once per process."""

    def __init__(self, radius=3, precision=64):
        self.radius = radius
        self.precision = precision
        self._cache = {}

    def get(self, key, builder):
        if key not in self._cache:
            self._cache[key] = builder()
        return self._cache[key]

    @property
    def L(self):
        return lattice_L()

    @property
    def M(self):
        return lattice_M()

    @property
    def isom_L(self):
        return self.get("isom_L", lambda: self.L.isometry_group())

    @property
    def isom_M(self):
        return self.get("isom_M", lambda: self.M.isometry_group())

    @property
    def proj_isom_L(self):
        def build():
            out, seen = [], set()
            for T in self.isom_L:
                g = ProjElement(T)
                if g.key() not in seen:
                    seen.add(g.key())
                    out.append(g)
            return out
        return self.get("proj_isom_L", build)

    @property
    def proj_isom_M_model(self):
        def build():
            E = from_columns(self.M.basis)
            Einv = inv3(E)
            out, seen = [], set()
            for T in self.isom_M:
                g = ProjElement(mat_mul(Einv, mat_mul(T, E)))
                if g.key() not in seen:
                    seen.add(g.key())
                    out.append(g)
            return out
        return self.get("proj_isom_M_model", build)

    @property
    def gm_table(self):
        return self.get("gm_table", lambda: orbit_bfs(
            [sigma(), tau(), beta_m()], base_vertex(), self.radius))

    @property
    def gl_table(self):
        def build():
            g1, g2 = generating_pair(self.proj_isom_L)
            return orbit_bfs([g1, g2, beta_l()],
                             reference_vertices()["C"], self.radius)
        return self.get("gl_table", build)


def _chk(checks, cid, statement, expected, computed):
    checks.append(Check(cid, statement, str(expected), str(computed)))


# -- suites ------------------------------------------------------------------


def suite_lattice_counts(ctx: _Context) -> list:
    checks = []
    expected = {2: 42, 3: 56, 4: 84, 5: 168, 6: 112, 7: 336}
    for n, want in expected.items():
        got = len(ctx.L.enumerate_norm(n))
        _chk(checks, f"L-norm-{n}", f"L has {want} vectors of norm {n}",
             want, got)
    for n, want in {2: 0, 3: 14, 7: 42}.items():
        got = len(ctx.M.enumerate_norm(n))
        _chk(checks, f"M-norm-{n}", f"M has {want} vectors of norm {n}",
             want, got)
    _chk(checks, "det-L", "L is unimodular", 1, ctx.L.det())
    _chk(checks, "det-M", "M has determinant 7", 7, ctx.M.det())
    return checks


def suite_isometry_groups(ctx: _Context) -> list:
    checks = []
    _chk(checks, "isom-L-order", "the isometry group of L has order 336",
         336, len(ctx.isom_L))
    _chk(checks, "isom-L-type", "it is L3(2) x 2",
         "L3(2) x 2", recognize_isometry_group(ctx.isom_L))
    _chk(checks, "isom-M-order", "the isometry group of M has order 42",
         42, len(ctx.isom_M))
    _chk(checks, "isom-M-type", "it is F21 x 2",
         "F21 x 2", recognize_isometry_group(ctx.isom_M))
    _chk(checks, "isom-M-in-L", "Isom M is a subset of Isom L",
         True, set(ctx.isom_M) <= set(ctx.isom_L))
    fs = frames(ctx.L)
    _chk(checks, "frame-count", "the 42 roots fall into 7 frames of 6",
         [6] * 7, [len(f.roots) for f in fs])
    index = {frozenset(f.roots): i for i, f in enumerate(fs)}
    reached = set()
    from .linalg import mat_vec
    for T in ctx.isom_L:
        img = frozenset(tuple(mat_vec(T, r)) for r in fs[0].roots)
        reached.add(index[img])
    _chk(checks, "frame-transitive", "Isom L is transitive on frames",
         sorted(range(7)), sorted(reached))
    return checks


def suite_superlattices(ctx: _Context) -> list:
    checks = []
    sup = superlattices(ctx.M)
    _chk(checks, "count", "M has 8 integral unimodular superlattices",
         8, len(sup))
    minimal = [s for s in sup if not s.enumerate_norm(1)]
    _chk(checks, "unique-min2", "exactly one has minimal norm 2",
         1, len(minimal))
    _chk(checks, "the-min2-is-L", "and it equals L",
         True, bool(minimal) and lattice_equal(minimal[0], ctx.L))
    others = sorted(len(s.enumerate_norm(1)) for s in sup
                    if s.enumerate_norm(1))
    _chk(checks, "others-norm1", "the other 7 contain 6 norm-1 vectors each",
         [6] * 7, others)
    return checks


def suite_index_eight(ctx: _Context) -> list:
    checks = []
    hp = index7_sublattices(ctx.L)
    kinds = {"isotropic": 0, "plus": 0, "minus": 0}
    for h in hp:
        kinds[h.kind] += 1
    _chk(checks, "census",
         "P(L/theta L) has 8 isotropic, 28 plus and 21 minus points",
         {"isotropic": 8, "plus": 28, "minus": 21}, kinds)
    copies = m_copies_in_L(ctx.L)
    _chk(checks, "copies", "the 8 isotropic hyperplanes are copies of M",
         8, len(copies))
    from .hermitian import theta_residue_vec, _normalize_point
    p = _normalize_point(theta_residue_vec(ctx.L, hermitian.S_VEC))
    h_s = next(h for h in hp if h.point == p)
    _chk(checks, "s-hyperplane", "the hyperplane of the norm-7 vector s is M",
         True, lattice_equal(h_s.lattice, ctx.M))
    lats = [h.lattice for h in copies]
    from .linalg import mat_vec
    reached = {0}
    frontier = [0]
    g1, g2 = generating_pair(ctx.proj_isom_L)
    gens = [g1.mat, g2.mat]
    while frontier:
        i = frontier.pop()
        for T in gens:
            img = hermitian.HermLattice(
                [mat_vec(T, b) for b in lats[i].basis], lats[i].form_scale)
            j = next(k for k, cand in enumerate(lats)
                     if lattice_equal(cand, img))
            if j not in reached:
                reached.add(j)
                frontier.append(j)
    _chk(checks, "transitive", "Isom L is transitive on the 8 copies",
         sorted(range(8)), sorted(reached))
    return checks


def suite_building_gm(ctx: _Context) -> list:
    checks = []
    table = ctx.gm_table
    _chk(checks, "vertex-orbits",
         f"one vertex orbit in the trusted radius-{table.trusted_radius} ball",
         1, table.vertex_orbit_count)
    _chk(checks, "edge-orbits", "one edge orbit", 1, table.edge_orbit_count)
    _chk(checks, "triangle-orbits", "one triangle orbit",
         1, table.triangle_orbit_count)
    d = stabilizer_in_finite(ctx.proj_isom_M_model, base_vertex())
    _chk(checks, "stab-v", "the vertex stabilizer has order 21 and is F21",
         (21, "F21"), (d.order, d.recognized_name))
    table.stabilizer_orders = [d.order]
    _chk(checks, "covolume", "covolume 1/21",
         Fraction(1, 21), covolume(table.stabilizer_orders))
    cube = mat_pow(beta_m().mat, 3)
    _chk(checks, "beta-m-cube", "the cube of the basis rotation is l/lbar",
         True, mat_eq(cube, mat_scale(LAM / LBAR, identity())))
    _chk(checks, "sigma-order", "sigma has projective order 3",
         3, sigma().projective_order())
    _chk(checks, "tau-order", "tau has projective order 7",
         7, tau().projective_order())
    v = base_vertex()
    fixed = [w for w in neighbors(v) if act(sigma(), w) == w]
    l_vert = next(w for w in fixed if relative_index(v, w) == 2)
    p_vert = next(w for w in fixed if relative_index(v, w) == 4)
    t3l = act(tau() ** 3, l_vert)
    _chk(checks, "tau3l-neighbor",
         "tau^3 of the sigma-fixed line neighbor touches the point neighbor",
         True, t3l in neighbors(p_vert))
    am = alpha_m()
    _chk(checks, "alpha-m-rotates",
         "alpha_m rotates the triangle v, p, tau^3(l)",
         True, (act(am, v), act(am, p_vert), act(am, t3l)) == (p_vert, t3l, v))
    return checks


def suite_building_gl(ctx: _Context) -> list:
    checks = []
    refs = reference_vertices()
    table = ctx.gl_table
    _chk(checks, "vertex-orbits",
         f"two vertex orbits in the trusted radius-{table.trusted_radius} ball",
         2, table.vertex_orbit_count)
    _chk(checks, "C-D-split", "C and D lie in different orbits",
         True, table.orbit_index[refs["C"]] != table.orbit_index[refs["D"]])
    dC = stabilizer_in_finite(ctx.proj_isom_L, refs["C"])
    dD = stabilizer_in_finite(ctx.proj_isom_L, refs["D"])
    _chk(checks, "stab-C", "the stabilizer of C has order 168 and is L3(2)",
         (168, "L3(2)"), (dC.order, dC.recognized_name))
    _chk(checks, "stab-D", "the stabilizer of D has order 24 and is S4",
         (24, "S4"), (dD.order, dD.recognized_name))
    table.stabilizer_orders = [dC.order, dD.order]
    _chk(checks, "covolume", "covolume 1/168 + 1/24 = 1/21",
         Fraction(1, 21), covolume(table.stabilizer_orders))
    _chk(checks, "beta-l-D", "beta_l carries D to B",
         refs["B"].rows, act(beta_l(), refs["D"]).rows)
    _chk(checks, "beta-l-E", "beta_l carries E to C",
         refs["C"].rows, act(beta_l(), refs["E"]).rows)
    gens = signed_perm_s4()
    _chk(checks, "type-D", "D has type 0 under the frame S4",
         "0", s4_vertex_type(gens, refs["D"]))
    invariant = [w for w in neighbors(refs["D"])
                 if all(act(g, w) == w for g in gens)]
    _chk(checks, "invariant-neighbors", "D has 2 S4-invariant neighbors",
         2, len(invariant))
    _chk(checks, "neighbor-types", "of types l and p",
         ["l", "p"], sorted(s4_vertex_type(gens, w) for w in invariant))
    v_l = canonicalize(((2, 1, 1), (0, 1, 0), (0, 0, 1)))
    v_p = canonicalize(((1, 0, 0), (1, 2, 0), (1, 0, 2)))
    _chk(checks, "model-types",
         "the three model lattices classify as 0, l, p",
         ["0", "l", "p"],
         [s4_vertex_type(gens, w) for w in (base_vertex(), v_l, v_p)])
    return checks


def suite_covolume(ctx: _Context) -> list:
    checks = []
    _chk(checks, "two-orbit", "1/168 + 1/24 = 1/21",
         Fraction(1, 21), covolume([168, 24]))
    _chk(checks, "one-orbit", "1/21 = 1/21",
         Fraction(1, 21), covolume([21]))
    _chk(checks, "mass-one", "a full stabilizer has mass 1",
         Fraction(1), covolume([1]))
    return checks


def suite_elimination(ctx: _Context) -> list:
    checks = []
    projectors = build_projectors(sigma().mat)
    t_mat = tau().mat
    conds = scalar_cube_conditions(
        alpha_candidate("centralizing", projectors, t_mat))
    rep = eliminate_centralizing(conds)
    b = BivarPoly.var_b()
    _chk(checks, "cube-relation",
         "a reduced residual relation is proportional to b^3 - b",
         True, rep.residuals[rep.cube_relation_index] == b * b * b - b)
    _chk(checks, "roots", "only b = 1 and b = -1 survive",
         [QuadRat(1), QuadRat(-1)], rep.satisfying)
    v = base_vertex()
    pm = alpha_candidate("centralizing", projectors, t_mat)
    verdicts = []
    s = sigma()
    for a0, b0 in rep.solutions:
        alpha = ProjElement(evaluate_poly_matrix(pm, a0, b0))
        gamma = alpha * tau() ** 3
        is_sigma_power = (projective_equal(gamma, s)
                          or projective_equal(gamma, s.inverse()))
        verdicts.append(is_sigma_power and act(alpha, v) == v)
    _chk(checks, "trivial-solutions",
         "they give gamma = sigma^(+-1), fixing the base vertex",
         [True, True], verdicts)

    conds2 = scalar_cube_conditions(
        alpha_candidate("inverting", projectors, t_mat, gamma_m().mat))
    rep2 = eliminate_inverting(conds2)
    _chk(checks, "f-degree", "the relation f(b) a + g(b) = 0 has deg f = 1",
         1, rep2.f.degree_b())
    _chk(checks, "b0-gives-one", "the b = 0 branch forces a = 1",
         QuadRat(1), rep2.a_at_b_zero)
    pm2 = alpha_candidate("inverting", projectors, t_mat, gamma_m().mat)
    alpha0 = ProjElement(evaluate_poly_matrix(pm2, rep2.a_at_b_zero, 0))
    _chk(checks, "alpha-m", "and alpha = alpha_m",
         True, projective_equal(alpha0, alpha_m()))
    _chk(checks, "gcd-degree", "the b-stripped gcd has degree 1",
         1, rep2.gcd_poly.degree_b())
    alpha_sp = evaluate_poly_matrix(pm2, rep2.spurious_a, rep2.spurious_b)
    _chk(checks, "spurious",
         "the nonzero root is spurious: integral, odd determinant, fixes v",
         True, integral_odd_det(alpha_sp)
         and act(ProjElement(alpha_sp), v) == v)
    return checks


_SUITES = {
    "lattice-counts": suite_lattice_counts,
    "isometry-groups": suite_isometry_groups,
    "superlattices": suite_superlattices,
    "index-eight": suite_index_eight,
    "building-gm": suite_building_gm,
    "building-gl": suite_building_gl,
    "covolume": suite_covolume,
    "elimination": suite_elimination,
}

_context = None


def get_context(radius=3, precision=64) -> _Context:
    global _context
    if (_context is None or _context.radius != radius
            or _context.precision != precision):
        _context = _Context(radius, precision)
    return _context


def run_suite(name: str, radius: int = 3, precision: int = 64) -> Report:
    if name not in _SUITES:
        raise ValueError(f"unknown suite {name!r}")
    ctx = get_context(radius, precision)
    t0 = time.perf_counter()
    checks = _SUITES[name](ctx)
    return Report(name, checks, time.perf_counter() - t0)


def emit_quotient_graph(group: str, radius: int = 3, fmt: str = "dot") -> str:
    """Orbit-collapsed adjacency of the trusted ball, as DOT or JSON."""
    if group not in ("gl", "gm"):
        raise ValueError(f"unknown group {group!r}")
    if radius < 2:
        raise ValueError("need radius >= 2 for a trusted ball with edges")
    if fmt not in ("dot", "json"):
        raise ValueError(f"unknown format {fmt!r}")
    ctx = get_context(radius=radius)
    table = ctx.gm_table if group == "gm" else ctx.gl_table
    if fmt == "json":
        return json.dumps({
            "group": group,
            "trusted_radius": table.trusted_radius,
            "vertices": [{"orbit": i, "representative": list(map(list, rep.rows))}
                         for i, rep in enumerate(table.orbit_reps)],
            "edges": [list(e) for e in table.quotient_edges],
        }, indent=2, sort_keys=True)
    lines = [f"graph quotient_{group} {{"]
    for i in range(len(table.orbit_reps)):
        lines.append(f'  o{i} [label="orbit {i}"];')
    for a, b, m in table.quotient_edges:
        lines.append(f'  o{a} -- o{b} [label="{m}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="verify",
        description="Exact verification suites for the two densest lattices "
                    "in PGL3(Q2).")
    parser.add_argument("suite",
                        choices=list(SUITE_NAMES) + ["all", "quotient-gl",
                                                     "quotient-gm"],
                        help="suite to run, or a quotient graph to emit")
    parser.add_argument("--radius", type=int, default=3,
                        help="exploration radius for the building suites")
    parser.add_argument("--precision", type=int, default=64,
                        help="2-adic working precision floor")
    parser.add_argument("--json", action="store_true",
                        help="emit the report as JSON")
    parser.add_argument("--format", choices=["dot", "json"], default="dot",
                        help="quotient graph format")
    parser.add_argument("--out", default=None,
                        help="write the report to this path")
    args = parser.parse_args(argv)

    def write(text: str):
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        else:
            print(text)

    if args.suite.startswith("quotient-"):
        try:
            content = emit_quotient_graph(args.suite.split("-", 1)[1],
                                          args.radius, args.format)
        except ValueError as e:
            parser.error(str(e))
        write(content)
        return 0

    names = list(SUITE_NAMES) if args.suite == "all" else [args.suite]
    reports = [run_suite(n, args.radius, args.precision) for n in names]
    if args.json:
        payload = {
            "reports": [r.to_dict() for r in reports],
            "pass": all(r.passed for r in reports),
        }
        write(json.dumps(payload, indent=2, sort_keys=True))
    else:
        write("\n".join(r.text() for r in reports))
    return 0 if all(r.passed for r in reports) else 1


if __name__ == "__main__":
    sys.exit(main())
