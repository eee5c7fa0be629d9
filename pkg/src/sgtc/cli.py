"""Batch command line interface.

Subcommands: ``table`` reproduces the ten-row theory table with computed
dimension blocks, ``report`` analyzes one model (builtin or from a JSON
config), ``check`` runs the assertion suites.  Markdown goes to stdout with
timings on stderr so identical inputs give byte-identical output; JSON
output carries a ``timing_ms`` field that comparisons should ignore.

Exit codes: 0 success, 1 assertion failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import sgtc
from sgtc import models as _models
from sgtc import spencer as _spencer
from sgtc.clifford import (
    UnsupportedSignatureError,
    build_clifford,
    check_spin_pair,
    spin_embedded_generators,
    t0_tensor,
)
from sgtc.exact import Matrix, backend_name
from sgtc.superlie import (
    build_superconformal_3d,
    gl_group_data,
    osp_group_data,
    validate,
    validate_group_data,
)
from sgtc.superlin import SuperVectorSpace

_ACTION_LIMIT = 200


@dataclass
class Report:
    """Computed dimension block and flags for one model."""

    name: str
    p: int
    q: int
    dim_g: int
    hom_w_g: int
    hom_l2w_w: int
    g1: int
    im_delta: int
    h02: int
    stabilizer: int
    h12: int = None
    h22: int = None
    action_trivial: bool = None
    flat_test: str = None
    preset_k: bool = False
    notes: tuple = ()
    timing_ms: int = 0
    engine: str = sgtc.__version__

    def validate_counts(self):
        if min(self.dim_g, self.g1, self.im_delta, self.h02) < 0:
            raise AssertionError("negative count in report")
        if self.hom_w_g != self.g1 + self.im_delta:
            raise AssertionError("rank-nullity fails in report")
        if self.h02 != self.hom_l2w_w - self.im_delta:
            raise AssertionError("quotient count fails in report")


def analyze_model(model, higher=False, with_action=None) -> Report:
    """Run the obstruction machinery on a model and collect the counts."""
    start = time.monotonic()
    sc = _spencer.spencer_complex(
        model.W, model.gens, model.parities, model.gen_names, check_closed=False
    )
    stab = _spencer.stabilizer(sc, model.flat_torsion)
    if with_action is None:
        with_action = sc.hom_l2w.dim <= _ACTION_LIMIT
    action_trivial = None
    flat_test = None
    if with_action:
        action = _spencer.induced_h02_action(sc)
        action_trivial = action.trivial
        flat_test = _spencer.first_order_flat(
            sc, model.flat_torsion, model.flat_torsion
        ).test
    h12 = h22 = None
    if higher:
        h12 = _spencer.spencer_cohomology(sc, 1).dim
        h22 = _spencer.spencer_cohomology(sc, 2).dim
    rep = Report(
        name=model.name,
        p=model.W.p,
        q=model.W.q,
        dim_g=model.g_dim,
        hom_w_g=sc.delta.cols,
        hom_l2w_w=sc.delta.rows,
        g1=sc.g1.dim,
        im_delta=sc.rank,
        h02=sc.h02_dim,
        stabilizer=stab.dim,
        h12=h12,
        h22=h22,
        action_trivial=action_trivial,
        flat_test=flat_test,
        preset_k=getattr(model, "preset_k", False),
        notes=tuple(getattr(model, "notes", ())),
        timing_ms=int((time.monotonic() - start) * 1000),
    )
    rep.validate_counts()
    return rep


def report_to_dict(rep: Report):
    out = {
        "name": rep.name,
        "dims": {
            "w": [rep.p, rep.q],
            "g": rep.dim_g,
            "hom_w_g": rep.hom_w_g,
            "hom_l2w_w": rep.hom_l2w_w,
            "g1": rep.g1,
            "im_delta": rep.im_delta,
            "h02": rep.h02,
            "stabilizer": rep.stabilizer,
        },
        "flags": {
            "action_trivial": rep.action_trivial,
            "first_order_test": rep.flat_test,
            "preset_k": rep.preset_k,
        },
        "notes": list(rep.notes),
        "engine": rep.engine,
        "timing_ms": rep.timing_ms,
    }
    if rep.h12 is not None:
        out["dims"]["h12"] = rep.h12
    if rep.h22 is not None:
        out["dims"]["h22"] = rep.h22
    return out


def report_to_markdown(rep: Report):
    lines = [f"# {rep.name}", ""]
    lines.append("| quantity | value |")
    lines.append("| --- | --- |")
    lines.append(f"| dim W | {rep.p}\\|{rep.q} |")
    rows = [
        ("dim g", rep.dim_g),
        ("dim Hom(W, g)", rep.hom_w_g),
        ("dim Hom(L2W, W)", rep.hom_l2w_w),
        ("dim g^(1)", rep.g1),
        ("dim im(delta)", rep.im_delta),
        ("dim H^{0,2}", rep.h02),
        ("stabilizer dim", rep.stabilizer),
    ]
    if rep.h12 is not None:
        rows.append(("dim H^{1,2}", rep.h12))
    if rep.h22 is not None:
        rows.append(("dim H^{2,2}", rep.h22))
    for k, v in rows:
        lines.append(f"| {k} | {v} |")
    lines.append("")
    if rep.action_trivial is not None:
        lines.append(f"- induced action on H^{{0,2}} trivial: {rep.action_trivial}")
        lines.append(f"- first-order flatness test used: {rep.flat_test}")
    else:
        lines.append("- induced action: not computed (space too large; see report --help)")
    if rep.preset_k:
        lines.append("- internal symmetry algebra is a preset")
    for n in rep.notes:
        lines.append(f"- note: {n}")
    lines.append(f"- engine {rep.engine}")
    return "\n".join(lines) + "\n"


def _threads():
    raw = os.environ.get("SGTC_THREADS", "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def cmd_table(fmt="md", higher=False, out=sys.stdout, err=sys.stderr):
    rows = _models.catalog()
    start = time.monotonic()

    def work(row):
        model = _models.build_model(row)
        return analyze_model(model, higher=higher)

    nthreads = _threads()
    if nthreads > 1:
        with ThreadPoolExecutor(max_workers=nthreads) as pool:
            reports = list(pool.map(work, rows))
    else:
        reports = [work(r) for r in rows]
    elapsed = time.monotonic() - start

    if fmt == "json":
        payload = []
        for row, rep in zip(rows, reports):
            entry = {
                "p": row.p,
                "p_plus": row.p_plus,
                "p_minus": row.p_minus,
                "q": row.q,
                "N": row.n_label,
                "computed": report_to_dict(rep),
            }
            payload.append(entry)
        out.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        head = [
            "| p | p+ | p- | q | N | dim g | Hom(W,g) | Hom(L2W,W) |"
            " g^(1) | im(delta) | H^{0,2} | stab |"
        ]
        head.append("|" + " --- |" * 12)
        body = []
        for row, rep in zip(rows, reports):
            mark = "*" if rep.preset_k else ""
            body.append(
                f"| {row.p} | {row.p_plus} | {row.p_minus} | {row.q} |"
                f" {row.n_label}{mark} | {rep.dim_g} | {rep.hom_w_g} |"
                f" {rep.hom_l2w_w} | {rep.g1} | {rep.im_delta} | {rep.h02} |"
                f" {rep.stabilizer} |"
            )
        out.write("\n".join(head + body) + "\n")
        if any(r.preset_k for r in reports):
            out.write("\n`*` row uses a preset internal symmetry algebra\n")
    err.write(f"table computed in {elapsed:.2f}s ({backend_name()} backend)\n")
    return 0


def _builtin_model(name, n=None, s="full"):
    rows = _models.catalog()
    builtins = {"d1n1": rows[0], "d3n1": rows[6], "d4n1": rows[7], "d6n1": rows[9]}
    if name in builtins:
        return _models.build_model(builtins[name], s_choice=s)
    if name == "on":
        return _models.classical_models(n or 3)["orthogonal"]
    if name == "un":
        return _models.classical_models(n or 1)["unitary"]
    if name == "sk1":
        return _models.superkahler_model_n1("full" if s == "full" else s)
    raise _models.ModelConfigError(
        f"unknown builtin {name!r}; choose from d1n1, d3n1, d4n1, d6n1, on, un, sk1"
    )


def cmd_report(args, out=sys.stdout, err=sys.stderr):
    if args.config:
        model = _models.load_model_config(args.config)
    elif args.row:
        rows = _models.catalog()
        if not 1 <= args.row <= len(rows):
            raise _models.ModelConfigError(f"--row must be 1..{len(rows)}")
        model = _models.build_model(rows[args.row - 1], s_choice=args.s)
    elif args.builtin:
        model = _builtin_model(args.builtin, n=args.n, s=args.s)
    else:
        raise _models.ModelConfigError("one of --builtin, --config, --row is required")
    rep = analyze_model(model, higher=args.higher)
    if args.format == "json":
        out.write(json.dumps(report_to_dict(rep), indent=2, sort_keys=True) + "\n")
    else:
        out.write(report_to_markdown(rep))
    err.write(f"report computed in {rep.timing_ms / 1000:.2f}s\n")
    return 0


# ---------------------------------------------------------------------------
# Assertion suites
# ---------------------------------------------------------------------------


class _Checks:
    def __init__(self, out):
        self.out = out
        self.failures = 0
        self.count = 0

    def run(self, suite, ident, fn, detail=""):
        self.count += 1
        try:
            ok, info = fn()
        except Exception as exc:  # a crash is a failure with a witness
            ok, info = False, f"{type(exc).__name__}: {exc}"
        tag = "ok  " if ok else "FAIL"
        if not ok:
            self.failures += 1
        msg = f"{tag} {suite}.{ident}"
        if detail:
            msg += f" {detail}"
        if info and not ok:
            msg += f" [{info}]"
        self.out.write(msg + "\n")


def naive_delta_matrix(W, gens, parities):
    """Brute-force differential, no flattening machinery.

    Triple loop over basis pairs, output index and generator columns; kept
    deliberately independent of the WedgeSpace/HomSpace code paths.
    """
    n = W.dim
    m = len(gens)
    pairs = []
    for i in range(n):
        for j in range(i, n):
            if i == j and W.parity(i) == 0:
                continue
            pairs.append((i, j))
    rows = []
    for (i, j) in pairs:
        for b in range(n):
            row = []
            for a in range(n):
                for k in range(m):
                    val = Fraction(0)
                    if i == a:
                        val += gens[k].data[b][j]
                    if j == a:
                        sgn = -1 if not (W.parity(i) and W.parity(j)) else 1
                        val += sgn * gens[k].data[b][i]
                    row.append(val)
            rows.append(row)
    return Matrix(rows, len(pairs) * n, n * m)


def _suite_jacobi(ch: _Checks):
    ga = build_superconformal_3d()
    ch.run("jacobi", "superconformal", lambda: (not validate(ga.algebra), ""))
    ch.run("jacobi", "superconformal-grading", lambda: (not ga.validate_grading(), ""))
    for row in _models.catalog():
        model = _models.build_model(row)
        alg = model.structure_algebra().algebra
        ch.run(
            "jacobi",
            f"row-{model.name}",
            lambda alg=alg: (not validate(alg), "violations"),
        )
    for (p, q) in ((1, 1), (2, 1)):
        gd = gl_group_data(p, q)
        ch.run(
            "jacobi",
            f"gl({p}|{q})",
            lambda gd=gd: (not validate_group_data(gd), ""),
        )
        gd2 = osp_group_data(p, q)
        ch.run(
            "jacobi",
            f"osp({p}|{2*q})",
            lambda gd2=gd2: (not validate_group_data(gd2), ""),
        )
    for row in _models.catalog():
        if row.n_label != "1":
            continue
        model = _models.build_model(row)
        gd = _models.super_poincare_data(model)
        ch.run(
            "jacobi",
            f"poincare-{model.name}",
            lambda gd=gd: (not validate_group_data(gd), ""),
        )


_SIGNATURES = ((1, 0), (1, 1), (2, 0), (2, 1), (3, 1), (4, 0), (5, 1))


def _suite_clifford(ch: _Checks):
    for (pp, pm) in _SIGNATURES:
        def probe(pp=pp, pm=pm):
            cd = build_clifford(pp, pm)  # relations verified on build
            bad = check_spin_pair(cd)
            return not bad, f"{len(bad)} violations"

        ch.run("clifford", f"sig({pp},{pm})", probe)

        def annihilate(pp=pp, pm=pm):
            cd = build_clifford(pp, pm)
            W = SuperVectorSpace.make(cd.p, cd.module_dim)
            T0 = t0_tensor(cd, W)
            sc = _spencer.spencer_complex(
                W,
                spin_embedded_generators(cd, W),
                [0] * (cd.p * (cd.p - 1) // 2),
                check_closed=False,
            )
            for j in range(sc.g_dim):
                if not _spencer.gen_action_on_t(sc, j, T0).is_zero():
                    return False, f"generator {j} moves the pairing"
            return True, ""

        ch.run("clifford", f"t0-invariance({pp},{pm})", annihilate)


def _suite_spencer(ch: _Checks):
    import random

    rows = _models.catalog()
    small = [rows[0], rows[1], rows[2], rows[3], rows[4], rows[6]]
    for row in small:
        model = _models.build_model(row)
        sc = _spencer.spencer_complex(
            model.W, model.gens, model.parities, model.gen_names, check_closed=False
        )
        naive = naive_delta_matrix(model.W, model.gens, model.parities)
        ch.run(
            "spencer",
            f"oracle-{model.name}",
            lambda sc=sc, naive=naive: (sc.delta == naive, "delta mismatch"),
        )
        ch.run(
            "spencer",
            f"rank-nullity-{model.name}",
            lambda sc=sc: (sc.delta.cols == sc.g1.dim + sc.rank, ""),
        )
    for n in (2, 3, 4, 5):
        cm = _models.classical_models(n)["orthogonal"]
        sc = _spencer.spencer_complex(cm.W, cm.gens, cm.parities, check_closed=False)
        ch.run(
            "spencer",
            f"o({n})",
            lambda sc=sc: (sc.g1.dim == 0 and sc.h02_dim == 0, f"{sc.g1.dim}/{sc.h02_dim}"),
        )
    for n in (1, 2):
        cm = _models.classical_models(n)["unitary"]
        sc = _spencer.spencer_complex(cm.W, cm.gens, cm.parities, check_closed=False)
        want_h = 0 if n == 1 else 8
        ch.run(
            "spencer",
            f"u({n})",
            lambda sc=sc, want_h=want_h: (
                sc.g1.dim == 0 and sc.h02_dim == want_h,
                f"{sc.g1.dim}/{sc.h02_dim}",
            ),
        )
    # quotient soundness with randomized connection changes (3d model)
    model = _models.build_model(rows[6])
    sc = _spencer.spencer_complex(
        model.W, model.gens, model.parities, model.gen_names, check_closed=False
    )
    rng = random.Random(20240214)

    def quotient_sound():
        t0 = model.flat_torsion
        base = _spencer.torsion_class(sc, t0).coords
        for _ in range(25):
            phi = [Fraction(rng.randint(-4, 4)) for _ in range(sc.delta.cols)]
            shifted = _spencer.hom2_unflat(
                sc,
                [
                    a + b
                    for a, b in zip(_spencer.hom2_flat(sc, t0), sc.delta.matvec(phi))
                ],
            )
            if _spencer.torsion_class(sc, shifted).coords != base:
                return False, "class moved under a delta shift"
        return True, ""

    ch.run("spencer", "quotient-soundness", quotient_sound)

    def equivariance():
        # x . delta(phi) stays inside im(delta) for every generator
        for j in range(sc.g_dim):
            for col in range(0, sc.delta.cols, 7):
                vec = list(sc.delta.col(col))
                if not any(vec):
                    continue
                moved = _spencer.hom2_flat(
                    sc,
                    _spencer.gen_action_on_t(sc, j, _spencer.hom2_unflat(sc, vec)),
                )
                if any(sc.h02_projection.matvec(moved)):
                    return False, f"generator {model.gen_names[j]}"
        return True, ""

    ch.run("spencer", "delta-equivariance", equivariance)

    def higher_vanishing():
        h1 = _spencer.spencer_cohomology(sc, 1)
        h2 = _spencer.spencer_cohomology(sc, 2)
        return (h1.dim, h2.dim) == (6, 0), f"h12={h1.dim}, h22={h2.dim}"

    ch.run("spencer", "higher-3d", higher_vanishing)


def _suite_ambiguity(ch: _Checks):
    import random

    model = _models.build_model(_models.catalog()[6])
    sc = _spencer.spencer_complex(
        model.W, model.gens, model.parities, model.gen_names, check_closed=False
    )
    amb = _spencer.connection_ambiguity_check_3d(sc, model.s_units)
    ch.run(
        "ambiguity",
        "symmetric-dimension",
        lambda: (amb.symmetric_dim == 12, f"dim {amb.symmetric_dim}"),
    )
    ch.run(
        "ambiguity",
        "bijective-onto-g1",
        lambda: (amb.bijective and amb.g1_dim == 12, f"g1 {amb.g1_dim}"),
    )
    rng = random.Random(777)

    def draws():
        for _ in range(100):
            u = {}
            for b in range(3):
                for c in range(b, 3):
                    for alpha in range(2):
                        v = Fraction(rng.randint(-9, 9))
                        u[(b, c, alpha)] = v
                        u[(c, b, alpha)] = v
            if any(_spencer.torsion_change_from_u(sc, model.s_units, u)):
                return False, "symmetric draw moved the torsion"
            u[(0, 1, 0)] += 1
            if not any(_spencer.torsion_change_from_u(sc, model.s_units, u)):
                return False, "asymmetric draw left the torsion fixed"
        return True, ""

    ch.run("ambiguity", "randomized-draws", draws)


def _suite_cartan(ch: _Checks):
    ga = build_superconformal_3d()
    data = _spencer.cartan_adjustment_map(ga)
    ch.run(
        "cartan",
        "unique-adjustment",
        lambda: (
            data.kernel_dim == 0 and data.domain_dim == 25 and data.codomain_dim == 72,
            f"ker {data.kernel_dim}, dom {data.domain_dim}, cod {data.codomain_dim}",
        ),
    )


_SUITES = {
    "jacobi": _suite_jacobi,
    "clifford": _suite_clifford,
    "spencer": _suite_spencer,
    "ambiguity": _suite_ambiguity,
    "cartan": _suite_cartan,
}


def cmd_check(suite, out=sys.stdout):
    ch = _Checks(out)
    names = list(_SUITES) if suite == "all" else [suite]
    for name in names:
        _SUITES[name](ch)
    out.write(f"{ch.count - ch.failures}/{ch.count} assertions passed\n")
    return 0 if ch.failures == 0 else 1


def build_parser():
    ap = argparse.ArgumentParser(
        prog="sgtc",
        description="exact torsion-obstruction engine for super G-structures",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    t = sub.add_parser("table", help="the ten-row theory table with computed blocks")
    t.add_argument("--format", choices=("md", "json"), default="md")

    r = sub.add_parser("report", help="dimension report for one model")
    r.add_argument("--builtin", help="d1n1, d3n1, d4n1, d6n1, on, un, sk1")
    r.add_argument("--config", help="path to a model config JSON file")
    r.add_argument("--row", type=int, help="catalog row number (1-10)")
    r.add_argument("--n", type=int, help="size parameter for on/un")
    r.add_argument(
        "--s",
        default="full",
        help="S choice: full, zero, z_type, traceless, clinear",
    )
    r.add_argument("--higher", action="store_true", help="include H^{1,2}, H^{2,2}")
    r.add_argument("--format", choices=("md", "json"), default="md")

    c = sub.add_parser("check", help="run an assertion suite")
    c.add_argument("suite", choices=tuple(_SUITES) + ("all",))
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        if args.command == "table":
            return cmd_table(fmt=args.format)
        if args.command == "report":
            return cmd_report(args)
        if args.command == "check":
            return cmd_check(args.suite)
    except (_models.ModelConfigError, UnsupportedSignatureError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except FileNotFoundError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
