"""Command-line front end.  JSON on stdout is the canonical output; csv and pretty are projections."""
from __future__ import annotations

import argparse
import cmath
import csv
import io
import json
import math
import sys
from fractions import Fraction

import numpy as np

from . import __version__

SAMPLED = {"nerve"}


# --- serialization -------------------------------------------------------------

def jsonable(x):
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = [jsonable(v) for v in x]
        return sorted(items, key=repr) if isinstance(x, (set, frozenset)) else items
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, np.ndarray):
        return jsonable(x.tolist())
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    if hasattr(x, "as_dict"):
        return jsonable(x.as_dict())
    if type(x).__module__.startswith(("mpmath", "sympy")):
        return str(x)
    return x


def _rows(result):
    """A list of flat dicts for csv output, when the result has a natural table."""
    if isinstance(result, list) and result and all(isinstance(r, dict) for r in result):
        return result
    if isinstance(result, dict):
        for key in ("rows", "ledger", "reports", "histogram"):
            if isinstance(result.get(key), list) and result[key] and isinstance(result[key][0], dict):
                return result[key]
    return [result] if isinstance(result, dict) else [{"value": result}]


def emit(report, fmt, out=None):
    out = out or sys.stdout
    report = jsonable(report)
    if fmt == "json":
        out.write(json.dumps(report, sort_keys=True, separators=(",", ":")) + "\n")
    elif fmt == "csv":
        rows = _rows(report["result"])
        cols = sorted({k for r in rows for k in r})
        buf = io.StringIO()
        w = csv.DictWriter(buf, cols, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: json.dumps(v) if isinstance(v, (dict, list)) else v for k, v in r.items()})
        out.write(buf.getvalue())
    else:
        out.write(json.dumps(report, sort_keys=True, indent=2) + "\n")


# --- handlers ------------------------------------------------------------------
# each returns (result, ref) where ref names the statement the operation evaluates

def _field_arg(a):
    from . import numfield as nf

    if a.field:
        return nf.preset(a.field)
    if a.poly:
        return nf.NumberField(nf.parse_poly(a.poly), a.poly, frozenset())
    raise ValueError("give --field or --poly")


def h_nf(a):
    from . import numfield as nf

    if a.action == "disc":
        f = nf.parse_poly(a.poly)
        return dict(poly=str(f), discriminant=nf.poly_discriminant(f)), "discriminant of the defining polynomial"
    if a.action == "signature":
        f = nf.parse_poly(a.poly)
        return dict(poly=str(f), signature=list(nf.signature(f))), "real and complex places"
    if a.action == "splitting":
        K = _field_arg(a)
        s = nf.prime_splitting(K, a.p)
        return dict(field=K.name, p=a.p, factors=[dict(f=f, e=e) for f, e in s.factors], norms=s.norms), "prime decomposition via Dedekind-Kummer"
    if a.action == "primes":
        K = _field_arg(a)
        return dict(field=K.name, x=a.x, count=nf.prime_count(K, a.x)), "prime ideal counting function"
    if a.action == "zeta":
        K = _field_arg(a)
        v, tail = nf.dedekind_zeta(K, a.s, a.X)
        return dict(field=K.name, s=a.s, X=a.X, value=float(v), tail=float(tail)), "truncated Euler product of the Dedekind zeta function"
    raise ValueError(a.action)


def h_mahler(a):
    from . import mahler as mh

    f = mh.parse_poly(a.poly)
    if a.action == "measure":
        return dict(poly=str(f), mahler=mh.mahler_measure(f), type=mh.classify(f)), "logarithmic Mahler measure"
    if a.action == "classify":
        return dict(poly=str(f), type=mh.classify(f)), "Kronecker / Salem classification"
    raise ValueError(a.action)


def h_bilu(a):
    from . import mahler as mh

    ns = []
    n = a.nmin
    while n <= a.nmax:
        ns.append(n)
        n *= 2
    rows = mh.family_sweep(ns, lambda n: mh.pure_power(n, a.a))
    return dict(rows=rows), "equidistribution of conjugates of bounded height"


def h_tree(a):
    from . import btree as bt

    if a.action == "check":
        return bt.check_fixed_geometry(a.type, a.p, a.v, a.radius), "fixed points of a semisimple element on the tree"
    if a.action == "grid":
        reps = [bt.check_fixed_geometry(t, p, v, a.radius) for t, p, v in bt.ACCEPTANCE_GRID]
        return dict(reports=reps, ok=all(r["shape_ok"] and r["counts_ok"] for r in reps)), "fixed points of a semisimple element on the tree"
    if a.action == "weights":
        s = bt.tree_weight_partial_sum(a.p, a.n)
        return dict(p=a.p, n=a.n, partial=s, limit=bt.tree_weight_limit(a.p)), "vertex weight series on the tree"
    raise ValueError(a.action)


def h_repzeta(a):
    from . import repzeta as rz

    if a.action == "check":
        ok, ledger = rz.sum_of_squares_check(a.q, a.levels)
        ledger.append(dict(status="OK" if ok else "MISMATCH"))
        return dict(q=a.q, levels=a.levels, ok=ok, ledger=ledger), "character degrees of SL(2, Z/q^n)"
    if a.action == "degrees":
        return rz.jz_level_multiset(a.q, a.level).as_dict(), "character degrees of SL(2, Z/q^n)"
    raise ValueError(a.action)


def h_volume(a):
    from . import volume as vol

    if a.action == "ratios":
        rows = [r.as_dict() for r in vol.ratio_reports()]
        if not a.all:
            rows = rows[:2]
        return dict(rows=rows), "local Tamagawa measures against the standard measure"
    if a.action == "covolume":
        text = a.spec if a.spec.lstrip().startswith("{") else open(a.spec).read()
        spec = vol.LatticeSpec.from_json(text)
        return vol.covolume(spec).as_dict(), "volume formula for congruence lattices"
    if a.action == "torus":
        return vol.torus_volume_quadratic(a.d), "volume of norm-one tori"
    raise ValueError(a.action)


def h_geom(a):
    from . import geom

    if a.action == "orbital":
        bump = geom.RadialBump(a.bump, a.plateau)
        if a.type == "split":
            lam = complex(a.ratio) * (cmath.exp(1j * a.angle) if a.angle else 1)
            field = "complex" if a.complex or lam.imag != 0 else "real"
            g = geom.MobiusElement((lam if field == "complex" else lam.real, 0, 0, 1), field)
            closed = geom.orbital_split(g, bump, a.tol)
        else:
            g = geom.MobiusElement.rotation(a.theta)
            closed = geom.orbital_elliptic(g, bump, a.tol)
        out = dict(type=a.type, closed=closed, bump=[a.bump, a.plateau])
        if a.brute:
            brute = geom.orbital_bruteforce(g, bump, max(a.tol, 1e-6))
            out.update(brute=brute, rel_diff=abs(closed - brute) / abs(brute) if brute else None)
        return out, "archimedean orbital integral bounds"
    if a.action == "grid":
        rows = [geom.compare_preset(p) for p in geom.preset_grid()]
        return dict(rows=rows), "archimedean orbital integral bounds"
    if a.action == "invariants":
        vals = [complex(x.replace("i", "j")) for x in a.matrix.split(",")]
        if all(v.imag == 0 for v in vals):
            ents = tuple(Fraction(x.strip()) for x in a.matrix.split(","))
            g = geom.MobiusElement(ents, "real")
        else:
            g = geom.MobiusElement(tuple(vals), "complex")
        inv = geom.class_invariants(g, a.min_poly)
        return dict(invariants=inv.as_dict(), meets_ball=geom.meets_ball(g, a.R) if a.R is not None and inv.type != "parabolic" else None), "eigenvalue ratio and Weyl discriminant"
    raise ValueError(a.action)


def h_nerve(a):
    from . import nerve

    kw = dict(seed=a.seed)
    if a.samples:
        kw["samples"] = a.samples
    space = nerve.space_preset(a.space, **kw)
    res = nerve.run(space, a.dim_cap)
    res["histogram"] = [dict(degree=d, count=c) for d, c in enumerate(res.pop("degree_histogram"))]
    return res, "triangulation by the nerve of a ball cover"


def h_conjcount(a):
    from . import conjcount as cc

    if a.action == "trace":
        fam = {"cyclotomic": cc.cyclotomic_prime_family, "pure": cc.pure_family}[a.family]()
        rows, ledger = cc.trace_decay_sweep(fam)
        return dict(rows=rows, measured=ledger), "trace of algebraic integers of small height"
    if a.action == "gram":
        if a.family_file:
            from .numfield import NumberField, parse_poly

            data = json.load(open(a.family_file))
            polys = [parse_poly(p) for p in data["polys"]]
            K = NumberField(parse_poly(data["field"]), data["field"], True)
        else:
            polys, K = cc.salem_presets()
        return cc.gram_diagnostics(polys, K).as_dict(), "almost orthogonality of traces"
    if a.action == "kl":
        out = dict(n=a.n, A=a.A, C=a.C, bound=cc.kl_packing_bound(a.n, a.A, a.C))
        return out, "packing bound for almost orthogonal unit vectors"
    raise ValueError(a.action)


def h_suite(a):
    from .acceptance import run_all

    results = run_all(a.profile)
    for r in results:
        print(r.line(), file=sys.stderr)
    return dict(profile=a.profile, criteria=[r.as_dict(a.timings) for r in results],
                all_passed=all(r.passed for r in results)), "acceptance battery"


# --- parser --------------------------------------------------------------------

def build_parser():
    p = argparse.ArgumentParser(prog="artifact", description=__doc__)
    p.add_argument("--output", choices=("json", "csv", "pretty"), default="json")
    p.add_argument("--config", help="key=value file whose keys mirror long options")
    p.add_argument("--version", action="version", version=__version__)
    # the same options after the subcommand; SUPPRESS keeps a missing one from clobbering the top level
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("json", "csv", "pretty"), default=argparse.SUPPRESS)
    common.add_argument("--config", default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True)
    p.commands = sub.choices
    _add = sub.add_parser
    sub.add_parser = lambda *a, **k: _add(*a, parents=[common], **k)

    s = sub.add_parser("nf", help="number fields")
    s.add_argument("action", choices=("disc", "signature", "splitting", "primes", "zeta"))
    s.add_argument("--poly")
    s.add_argument("--field")
    s.add_argument("--p", type=int, default=2)
    s.add_argument("--x", type=float, default=100)
    s.add_argument("--s", type=int, default=2)
    s.add_argument("--X", type=int, default=10_000)
    s.set_defaults(handler=h_nf)

    s = sub.add_parser("mahler", help="Mahler measure")
    s.add_argument("action", choices=("measure", "classify"))
    s.add_argument("--poly", required=True)
    s.set_defaults(handler=h_mahler)

    s = sub.add_parser("bilu", help="equidistribution sweep along x^n - a")
    s.add_argument("--nmin", type=int, default=8)
    s.add_argument("--nmax", type=int, default=256)
    s.add_argument("--a", type=int, default=2)
    s.set_defaults(handler=h_bilu)

    s = sub.add_parser("tree", help="Bruhat-Tits tree")
    s.add_argument("action", choices=("check", "grid", "weights"))
    s.add_argument("--type", choices=("split", "unramified", "tamely_ramified"), default="split")
    s.add_argument("--p", type=int, default=3)
    s.add_argument("--v", type=int, default=2)
    s.add_argument("--n", type=int, default=20)
    s.add_argument("--radius", type=int, default=8)
    s.set_defaults(handler=h_tree)

    s = sub.add_parser("repzeta", help="representation degrees")
    s.add_argument("action", choices=("check", "degrees"))
    s.add_argument("--q", type=int, default=5)
    s.add_argument("--levels", type=int, default=4)
    s.add_argument("--level", type=int, default=1)
    s.set_defaults(handler=h_repzeta)

    s = sub.add_parser("volume", help="measure ratios, covolumes, tori")
    s.add_argument("action", choices=("ratios", "covolume", "torus"))
    s.add_argument("--all", action="store_true")
    s.add_argument("--spec", help="JSON text or path")
    s.add_argument("--d", type=int, default=-4)
    s.set_defaults(handler=h_volume)

    s = sub.add_parser("geom", help="archimedean geometry")
    s.add_argument("action", choices=("orbital", "grid", "invariants"))
    s.add_argument("--type", choices=("split", "elliptic"), default="split")
    s.add_argument("--ratio", type=float, default=2.0)
    s.add_argument("--angle", type=float, default=0.0, help="argument of the complex eigenvalue ratio")
    s.add_argument("--complex", action="store_true")
    s.add_argument("--theta", type=float, default=math.pi / 4)
    s.add_argument("--bump", type=float, default=3.0)
    s.add_argument("--plateau", type=float, default=0.5)
    s.add_argument("--tol", type=float, default=1e-7)
    s.add_argument("--brute", action="store_true")
    s.add_argument("--matrix", default="2,0,0,1", help="a,b,c,d")
    s.add_argument("--min-poly", dest="min_poly")
    s.add_argument("--R", type=float)
    s.set_defaults(handler=h_geom)

    s = sub.add_parser("nerve", help="ball packing and nerve")
    s.add_argument("action", choices=("run",))
    s.add_argument("--space", default="torus2")
    s.add_argument("--samples", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--dim-cap", dest="dim_cap", type=int, default=2)
    s.set_defaults(handler=h_nerve)

    s = sub.add_parser("conjcount", help="trace decay, Gram matrices, packing bound")
    s.add_argument("action", choices=("trace", "gram", "kl"))
    s.add_argument("--family", choices=("cyclotomic", "pure"), default="cyclotomic")
    s.add_argument("--family-file", dest="family_file")
    s.add_argument("--n", type=int, default=100)
    s.add_argument("--A", type=float, default=1.0)
    s.add_argument("--C", type=float, default=1.0)
    s.set_defaults(handler=h_conjcount)

    s = sub.add_parser("suite", help="acceptance battery")
    s.add_argument("--profile", choices=("quick", "full"), default="quick")
    s.add_argument("--timings", action="store_true", help="include run times (breaks byte-identical output)")
    s.set_defaults(handler=h_suite)
    return p


def read_config(path):
    """key=value lines; blank lines and # comments ignored."""
    out = []
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"config line without '=': {raw.strip()!r}")
            k, v = (t.strip() for t in line.split("=", 1))
            out.append((k, v))
    return out


def _apply_config(parser, argv):
    args = parser.parse_args(argv)
    if not args.config:
        return args
    sub_actions = {a.dest: a for a in parser.commands[args.command]._actions}
    given = {t.lstrip("-").split("=")[0].replace("-", "_") for t in argv if t.startswith("--")}
    for key, val in read_config(args.config):
        dest = key.replace("-", "_")
        if dest not in sub_actions or dest in ("help", "handler", "output", "config"):
            raise ValueError(f"unknown config key {key!r} for {args.command}")
        if dest in given:
            continue  # command line wins
        act = sub_actions[dest]
        if act.nargs == 0:
            setattr(args, dest, val.lower() in ("1", "true", "yes"))
        else:
            setattr(args, dest, act.type(val) if act.type else val)
    return args


def main(argv=None):
    from .numfield import PolynomialParseError

    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    fmt = "json"
    try:
        args = _apply_config(parser, argv)
        fmt = args.output
        if args.command in SAMPLED and getattr(args, "seed", None) is None:
            raise ValueError(f"{args.command} needs --seed")
        result, ref = args.handler(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    except (PolynomialParseError, ValueError, KeyError, FileNotFoundError) as exc:
        code = 2
        emit(dict(version=__version__, error=type(exc).__name__, message=str(exc)), "json")
        return code
    except Exception as exc:  # module failure
        emit(dict(version=__version__, error=type(exc).__name__, message=str(exc)), "json")
        return 1
    report = dict(version=__version__, command=args.command, action=getattr(args, "action", None), ref=ref, result=result)
    emit(report, fmt)
    if args.command == "suite" and not result["all_passed"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
