"""Command-line front end.

Every command writes one JSON report (keys sorted, resolved config and
package version embedded) and, with ``--csv``, a plot-ready curve file.
Parameters come from flags or from a ``key=value`` config file; flags win.

Exit status: 0 on success, 1 when ``--expect`` does not match the verdict,
2 on invalid input.
"""

import argparse
import csv
import io
import itertools
import json
import math
import sys

import numpy as np

from . import __version__
from .errors import DegenerateError, DivergenceError, DomainError, InadmissibleParameters
from .besov import BesovParams, make_phi, phi_for, verify_theorem3
from .inequalities import (
    _num, theorem1_necessity_probe, verify_hlp, verify_pitt, verify_theorem1,
)
from .measure import DunklIndex, PowerProfile, make_family, read_profile_csv
from .rearrange import decreasing_rearrangement, reciprocal_profile
from .transform import default_grid as transform_grid, dunkl_transform_radial
from .weights import (
    bp_check, bp_equivalent_condition, hardy_condition_A, hardy_condition_B,
    parse_weight, pitt_index_check, profile_of, theorem1_condition_power,
)

COMMANDS = (
    "transform", "rearrange", "bp-check", "hardy-check", "thm1-verify", "pitt-verify",
    "hlp-verify", "besov-verify", "necessity-probe", "sweep",
)

# value parsers for every config key; also the set of accepted keys
TYPES = {
    "d": int, "gamma": float, "seed": int,
    "p": float, "q": float, "alpha": float, "beta": float, "r": float,
    "family": str, "sigma": float, "radius": float, "a": float, "profile_csv": str,
    "grid": str, "weight": str, "weight_exponent": float, "reciprocal": "bool", "mu": str, "theta": str,
    "condition": str, "corner": "bool", "phi_order": int, "points": int,
    "strict": "bool", "target": str, "vary": "list", "solve": str,
}

DEFAULTS = {"d": 1, "gamma": 0.0, "seed": 0, "family": "gaussian", "sigma": 1.0,
            "radius": 1.0, "a": 2.0, "strict": True}

COMMAND_DEFAULTS = {
    "bp-check": {"p": 2.0},
    "hardy-check": {"condition": "both"},
    "necessity-probe": {"r": 1.0, "points": 50},
    "hlp-verify": {"p": 2.0},
}


class InputError(Exception):
    """Invalid command-line or config input (exit status 2)."""


def _bool(text):
    if isinstance(text, bool):
        return text
    low = str(text).strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise InputError(f"not a boolean: {text!r}")


def _convert(key, value):
    kind = TYPES.get(key)
    if kind is None:
        raise InputError(f"unknown parameter {key!r}")
    try:
        if kind == "bool":
            return _bool(value)
        if kind == "list":
            if isinstance(value, list):
                return value
            return [v.strip() for v in str(value).split(";") if v.strip()]
        return kind(value)
    except ValueError as err:
        raise InputError(f"bad value for {key}: {value!r} ({err})") from None


def read_config(path):
    """Parse a ``key=value`` file; ``#`` starts a comment, dashes in keys become underscores."""
    out = {}
    try:
        fh = open(path, encoding="utf-8")
    except OSError as err:
        raise InputError(f"cannot read config {path}: {err}") from None
    with fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise InputError(f"{path}:{n}: expected key=value")
            key = key.strip().replace("-", "_")
            out[key] = _convert(key, value.strip())
    return out


def resolve(command, flags, config_path=None):
    """Defaults, then the config file, then explicit flags."""
    cfg = dict(DEFAULTS)
    cfg.update(COMMAND_DEFAULTS.get(command, {}))
    if config_path:
        cfg.update(read_config(config_path))
    for key, value in flags.items():
        if value is not None:
            cfg[key] = _convert(key, value)
    return cfg


# -- parsing helpers --------------------------------------------------------

def _need(cfg, *keys):
    missing = [k for k in keys if cfg.get(k) is None]
    if missing:
        raise InputError("missing required parameter(s): " + ", ".join(missing))
    return [cfg[k] for k in keys]


def parse_grid(text, default):
    """Geometric grid from ``lo:hi:n``; ``None`` gives ``default``."""
    if text is None:
        return default
    parts = text.split(":")
    if len(parts) != 3:
        raise InputError(f"grid must be lo:hi:n, got {text!r}")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise InputError(f"grid must be lo:hi:n, got {text!r}") from None
    if not 0 < lo < hi or n < 2:
        raise InputError("grid needs 0 < lo < hi and n >= 2")
    return np.geomspace(lo, hi, n)


def parse_range(text):
    """Values from ``name=lo:hi:n`` (linear) or ``name=v1,v2,...``."""
    name, sep, spec = text.partition("=")
    name = name.strip().replace("-", "_")
    if not sep or not name:
        raise InputError(f"sweep range must be name=lo:hi:n or name=v1,v2, got {text!r}")
    if TYPES.get(name) not in (float, int):
        raise InputError(f"cannot sweep non-numeric parameter {name!r}")
    spec = spec.strip()
    try:
        if not spec:
            values = []
        elif ":" in spec:
            lo, hi, n = spec.split(":")
            values = np.linspace(float(lo), float(hi), int(n)).tolist()
        else:
            values = [float(v) for v in spec.split(",") if v.strip()]
    except ValueError:
        raise InputError(f"bad sweep range {text!r}") from None
    return name, [TYPES[name](v) for v in values]


def make_index(cfg):
    try:
        return DunklIndex(cfg["d"], cfg["gamma"])
    except (ValueError, TypeError) as err:
        raise InputError(str(err)) from None


def make_profile(cfg):
    if cfg.get("profile_csv"):
        return read_profile_csv(cfg["profile_csv"])
    return make_family(cfg["family"], sigma=cfg["sigma"], R=cfg["radius"], a=cfg["a"])


def _weight(text):
    try:
        return parse_weight(text)
    except (ValueError, OSError) as err:
        raise InputError(f"bad weight {text!r}: {err}") from None


def _divergent(err):
    return {"status": "divergent", "side": getattr(err, "side", None), "message": str(err)}


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in row])
    return buf.getvalue()


def _curve(header, *columns):
    return _csv_text(header, zip(*[np.asarray(c, dtype=float) for c in columns]))


# -- commands ---------------------------------------------------------------
# Each returns (result dict, verdict string, csv text or None).

def cmd_transform(cfg):
    idx = make_index(cfg)
    f = make_profile(cfg)
    s = parse_grid(cfg.get("grid"), transform_grid())
    try:
        res = dunkl_transform_radial(idx, f, s)
    except DivergenceError as err:
        return _divergent(err), "divergent", None
    out = res.as_dict()
    out["index"] = idx.as_dict()
    return out, "ok", _curve(["s", "value", "error_estimate"], res.grid, res.values, res.errors)


def cmd_rearrange(cfg):
    idx = make_index(cfg)
    if cfg.get("weight"):
        try:
            f = profile_of(_weight(cfg["weight"]))
        except ValueError as err:
            raise InputError(str(err)) from None
    else:
        f = make_profile(cfg)
    if cfg.get("reciprocal"):
        f = reciprocal_profile(f)
    t = parse_grid(cfg.get("grid"), np.geomspace(1e-3, 1e3, 61))
    try:
        re = decreasing_rearrangement(idx, f)
    except DivergenceError as err:
        return _divergent(err), "divergent", None
    values = np.asarray(re.f_star(t), dtype=float)
    out = {"function": f.describe(), "t": t, "f_star": values, "exact": re.exact,
           "domain_measure": re.domain_measure, "source": re.source,
           "index": idx.as_dict()}
    if isinstance(f, PowerProfile) and f.a < 0:
        closed = (idx.N / idx.d_k) ** (f.a / idx.N) * t ** (f.a / idx.N)
        out["closed_form_max_rel_error"] = float(np.max(np.abs(values / closed - 1.0)))
    return out, "ok", _curve(["t", "f_star"], t, values)


def cmd_bp_check(cfg):
    if cfg.get("weight") is None and cfg.get("weight_exponent") is not None:
        cfg = dict(cfg, weight=f"power:{cfg['weight_exponent']!r}")
    weight, p = _need(cfg, "weight", "p")
    if not p > 1:
        raise InputError(f"bp-check needs p > 1, got p={p}")
    mu = _weight(weight)
    grid = parse_grid(cfg.get("grid"), None)
    rep = bp_check(mu, p, grid)
    eq = bp_equivalent_condition(mu, p, grid)
    out = {"bp": rep.as_dict(), "equivalent": eq.as_dict(), "sup": rep.as_dict()["sup"],
           "verdicts_agree": rep.verdict == eq.verdict}
    return out, rep.verdict, _curve(["s", "ratio", "equivalent_ratio"], rep.grid, rep.ratios,
                                    eq.ratios)


def cmd_hardy_check(cfg):
    mu, th, p, q = _need(cfg, "mu", "theta", "p", "q")
    which = cfg["condition"].upper()
    if which not in ("A", "B", "BOTH"):
        raise InputError("condition must be A, B or both")
    grid = parse_grid(cfg.get("grid"), None)
    mu, th = _weight(mu), _weight(th)
    try:
        reps = {}
        if which in ("A", "BOTH"):
            reps["A"] = hardy_condition_A(mu, th, p, q, grid)
        if which in ("B", "BOTH"):
            reps["B"] = hardy_condition_B(mu, th, p, q, grid)
    except ValueError as err:
        raise InputError(str(err)) from None
    verdicts = {r.verdict for r in reps.values()}
    verdict = ("finite" if verdicts == {"finite"} else
               "infinite" if "infinite" in verdicts else "inconclusive")
    first = next(iter(reps.values()))
    cols = [first.grid] + [reps[k].ratios for k in sorted(reps)]
    out = {k: r.as_dict() for k, r in reps.items()}
    return out, verdict, _curve(["s"] + [f"ratio_{k}" for k in sorted(reps)], *cols)


def _pqab(cfg):
    return _need(cfg, "p", "q", "alpha", "beta")


def cmd_thm1_verify(cfg):
    idx = make_index(cfg)
    p, q, alpha, beta = _pqab(cfg)
    if not (1 < p <= q and q >= 2):
        raise InputError(f"thm1-verify needs 1 < p <= q and q >= 2, got p={p}, q={q}")
    grid = parse_grid(cfg.get("grid"), None)
    cond = theorem1_condition_power(idx, alpha, beta, p, q, grid)
    out = {"condition": cond.as_dict(), "sup": cond.as_dict()["sup"], "admissibility": pitt_index_check(idx, alpha, beta, p, q)}
    f = make_profile(cfg)
    try:
        rep = verify_theorem1(idx, f, PowerProfile(alpha), PowerProfile(beta), p, q)
        out.update(rep.as_dict())
        out["status"] = "ok"
    except (DivergenceError, DegenerateError) as err:
        out.update(_divergent(err))
    return out, cond.verdict, _curve(["s", "ratio"], cond.grid, cond.ratios)


def _ratio_verdict(rep):
    return "finite" if math.isfinite(rep.ratio) else "infinite"


def cmd_pitt_verify(cfg):
    idx = make_index(cfg)
    p, q, alpha, beta = _pqab(cfg)
    f = make_profile(cfg)
    try:
        rep = verify_pitt(idx, f, alpha, beta, p, q, strict=cfg["strict"])
    except InadmissibleParameters as err:
        raise InputError(f"inadmissible Pitt index: violates {err}") from None
    except DivergenceError as err:
        check = pitt_index_check(idx, alpha, beta, p, q)
        out = _divergent(err)
        out.update(admissible=check["admissible"], violations=check["violations"],
                   constraint_residual=check["constraint_residual"])
        return out, "infinite", None
    out = rep.as_dict()
    out["admissible"] = rep.diagnostics["admissible"]
    out["status"] = "ok"
    return out, _ratio_verdict(rep), None


def cmd_hlp_verify(cfg):
    idx = make_index(cfg)
    (p,) = _need(cfg, "p")
    f = make_profile(cfg)
    try:
        rep = verify_hlp(idx, f, p)
    except InadmissibleParameters as err:
        raise InputError(str(err)) from None
    except DivergenceError as err:
        return _divergent(err), "infinite", None
    out = rep.as_dict()
    out["status"] = "ok"
    return out, _ratio_verdict(rep), None


def cmd_besov_verify(cfg):
    idx = make_index(cfg)
    corner = bool(cfg.get("corner"))
    if corner and cfg.get("alpha") is None and cfg.get("beta") is None:
        (p,) = _need(cfg, "p")
        q, alpha, beta = cfg.get("q") or p, idx.N * (p - 2.0), 0.0
    else:
        p, q, alpha, beta = _pqab(cfg)
    try:
        params = BesovParams(idx, p, q, alpha, beta, corner=corner)
    except InadmissibleParameters as err:
        raise InputError(f"inadmissible Besov parameters: violates {err}") from None
    phi = phi_for(params) if cfg.get("phi_order") is None else make_phi(idx, cfg["phi_order"])
    t = parse_grid(cfg.get("grid"), None)
    f = make_profile(cfg)
    res = verify_theorem3(params, f, phi, t)
    bes = res["besov"]
    conv = bes["convergence_flags"]["converged"]
    verdict = ("divergent" if not conv else
               "converged" if math.isfinite(res["transform_l1_norm"]) else "fails")
    out = {k: v for k, v in res.items() if k != "besov"}
    out["convergence_flags"] = bes["convergence_flags"]
    out["delta"] = params.delta
    return out, verdict, _curve(["t", "norm", "integrand"], bes["t"], bes["norms"],
                                bes["integrand"])


def cmd_necessity_probe(cfg):
    idx = make_index(cfg)
    p, q, alpha, beta = _pqab(cfg)
    if not 1 < p <= q:
        raise InputError(f"necessity-probe needs 1 < p <= q, got p={p}, q={q}")
    if cfg["r"] <= 0 or cfg["points"] < 1:
        raise InputError("necessity-probe needs r > 0 and points >= 1")
    try:
        out = theorem1_necessity_probe(idx, cfg["r"], PowerProfile(alpha), PowerProfile(beta),
                                       p, q, n=cfg["points"])
    except DivergenceError as err:
        return _divergent(err), "divergent", None
    return out, "holds" if out["chain_holds"] else "fails", None


def _solve_exponent(cfg):
    """Fill alpha or beta from the index constraint ``(alpha/q + beta/p)/N = 1 - 1/p - 1/q``."""
    idx = make_index(cfg)
    p, q = _need(cfg, "p", "q")
    target = 1.0 - 1.0 / p - 1.0 / q
    if cfg["solve"] == "alpha":
        (beta,) = _need(cfg, "beta")
        cfg["alpha"] = q * (idx.N * target - beta / p)
    elif cfg["solve"] == "beta":
        (alpha,) = _need(cfg, "alpha")
        cfg["beta"] = p * (idx.N * target - alpha / q)
    else:
        raise InputError("solve must be alpha or beta")


SWEEP_TARGETS = ("pitt-verify", "thm1-verify", "hlp-verify", "bp-check", "necessity-probe")
SWEEP_FIELDS = ["verdict", "status", "lhs", "rhs", "ratio", "sup"]


def _sweep_row(target, cfg):
    """One sweep row; inadmissible and divergent tuples are flagged, never dropped."""
    row = {}
    status = "ok"
    if target == "pitt-verify":
        cfg = dict(cfg, strict=False)
        idx = make_index(cfg)
        if not pitt_index_check(idx, cfg["alpha"], cfg["beta"], cfg["p"], cfg["q"])["admissible"]:
            status = "inadmissible"
    try:
        out, verdict, _ = RUNNERS[target](cfg)
    except InputError as err:
        return {"verdict": "", "status": "inadmissible"}
    for key in ("lhs", "rhs", "ratio", "sup"):
        value = out.get(key, "")
        ok = isinstance(value, (int, float)) or value in ("inf", "-inf", "nan")
        row[key] = value if ok else ""
    if out.get("status") == "divergent":
        status = "divergent" if status == "ok" else status
    row.update(verdict=verdict, status=status)
    return row


def cmd_sweep(cfg):
    target = cfg.get("target")
    if target not in SWEEP_TARGETS:
        raise InputError(f"sweep target must be one of {', '.join(SWEEP_TARGETS)}")
    ranges = [parse_range(v) for v in cfg.get("vary") or []]
    if not 1 <= len(ranges) <= 2:
        raise InputError("sweep needs one or two --vary ranges")
    names = [n for n, _ in ranges]
    if len(set(names)) != len(names):
        raise InputError("swept parameters must be distinct")
    solve = cfg.get("solve")
    if solve and solve in names:
        raise InputError(f"cannot both sweep and solve for {solve}")
    header = ["index"] + names + ([solve] if solve else []) + SWEEP_FIELDS
    rows, statuses = [], []
    for i, values in enumerate(itertools.product(*[v for _, v in ranges])):
        tuple_cfg = dict(cfg, **dict(zip(names, values)))
        if solve:
            _solve_exponent(tuple_cfg)
        row = _sweep_row(target, tuple_cfg)
        statuses.append(row["status"])
        rows.append([i] + list(values) + ([tuple_cfg[solve]] if solve else [])
                    + [row.get(k, "") for k in SWEEP_FIELDS])
    text = _csv_text(header, rows)
    out = {"target": target, "swept": names, "solved": solve, "n_rows": len(rows),
           "status_counts": {s: statuses.count(s) for s in sorted(set(statuses))},
           "header": header, "rows": rows}
    return out, "complete", text


RUNNERS = {
    "transform": cmd_transform, "rearrange": cmd_rearrange, "bp-check": cmd_bp_check,
    "hardy-check": cmd_hardy_check, "thm1-verify": cmd_thm1_verify,
    "pitt-verify": cmd_pitt_verify, "hlp-verify": cmd_hlp_verify,
    "besov-verify": cmd_besov_verify, "necessity-probe": cmd_necessity_probe,
    "sweep": cmd_sweep,
}


# -- argument parsing -------------------------------------------------------

def _common(parser):
    g = parser.add_argument_group("common")
    g.add_argument("--config", help="key=value config file (flags override it)")
    g.add_argument("--output", "-o", help="JSON report path (default: stdout)")
    g.add_argument("--csv", help="write plot-ready curve data here")
    g.add_argument("--expect", help="expected verdict; exit 1 on mismatch")
    g.add_argument("--seed", type=int, help="recorded in the report (all grids are fixed)")
    g.add_argument("--d", type=int, help="Euclidean dimension")
    g.add_argument("--gamma", type=float, help="multiplicity sum (>= 0)")
    g.add_argument("--grid", help="geometric grid override lo:hi:n")


def _family(parser):
    g = parser.add_argument_group("input profile")
    g.add_argument("--family", help="gaussian, indicator, power_gaussian or zero")
    g.add_argument("--sigma", type=float, help="gaussian width")
    g.add_argument("--radius", type=float, help="indicator radius")
    g.add_argument("--a", type=float, help="power_gaussian exponent")
    g.add_argument("--profile-csv", dest="profile_csv", help="headerless radius,value CSV")


def _exponents(parser, pq=True):
    if pq:
        parser.add_argument("--p", type=float)
        parser.add_argument("--q", type=float)
    parser.add_argument("--alpha", type=float, help="transform-side weight exponent")
    parser.add_argument("--beta", type=float, help="space-side weight exponent")


def build_parser():
    ap = argparse.ArgumentParser(prog="dunklrad", description=__doc__.split("\n")[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("transform", help="radial transform on a frequency grid")
    _common(sp), _family(sp)

    sp = sub.add_parser("rearrange", help="decreasing rearrangement of a profile")
    _common(sp), _family(sp)
    sp.add_argument("--weight", help="power:<a> instead of a family")
    sp.add_argument("--reciprocal", action="store_const", const=True,
                    help="rearrange 1/profile")

    sp = sub.add_parser("bp-check", help="B_p membership of a weight")
    _common(sp)
    sp.add_argument("--weight", help="power:<a> or tabulated:<csv>")
    sp.add_argument("--weight-exponent", dest="weight_exponent", type=float,
                    help="shorthand for --weight power:<a>")
    sp.add_argument("--p", type=float)

    sp = sub.add_parser("hardy-check", help="Hardy operator boundedness conditions")
    _common(sp)
    sp.add_argument("--mu", help="weight on the output side")
    sp.add_argument("--theta", help="weight on the input side")
    sp.add_argument("--p", type=float)
    sp.add_argument("--q", type=float)
    sp.add_argument("--condition", help="A, B or both")

    sp = sub.add_parser("thm1-verify", help="rearranged transform inequality, power weights")
    _common(sp), _family(sp), _exponents(sp)

    sp = sub.add_parser("pitt-verify", help="power-weighted transform inequality")
    _common(sp), _family(sp), _exponents(sp)

    sp = sub.add_parser("hlp-verify", help="Hardy-Littlewood-Paley inequality")
    _common(sp), _family(sp)
    sp.add_argument("--p", type=float)

    sp = sub.add_parser("besov-verify", help="Besov seminorm and transform integrability")
    _common(sp), _family(sp), _exponents(sp)
    sp.add_argument("--corner", action="store_const", const=True,
                    help="allow beta = 0 with alpha = N(p-2), q = p")
    sp.add_argument("--phi-order", dest="phi_order", type=int,
                    help="power 2m of the test function's transform is 2*order")

    sp = sub.add_parser("necessity-probe", help="chain inequalities of the necessity argument")
    _common(sp), _exponents(sp)
    sp.add_argument("--r", type=float, help="probe scale")
    sp.add_argument("--points", type=int, help="samples per chain link")

    sp = sub.add_parser("sweep", help="run a command over one or two parameter ranges")
    _common(sp), _family(sp), _exponents(sp)
    sp.add_argument("--target", help="command to sweep: " + ", ".join(SWEEP_TARGETS))
    sp.add_argument("--vary", action="append",
                    help="name=lo:hi:n (linear) or name=v1,v2; at most twice")
    sp.add_argument("--solve", help="fill alpha or beta from the index constraint")
    sp.add_argument("--weight", help="weight for bp-check sweeps")
    sp.add_argument("--weight-exponent", dest="weight_exponent", type=float,
                    help="power weight exponent for bp-check sweeps")
    sp.add_argument("--r", type=float, help="probe scale for necessity-probe sweeps")
    return ap


META = ("command", "config", "output", "csv", "expect")


def render(command, cfg, result, verdict):
    report = {"command": command, "config": _num(cfg), "version": __version__,
              "verdict": verdict, "result": _num(result)}
    return json.dumps(report, sort_keys=True, indent=2, allow_nan=False) + "\n"


def _write(path, text):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def run(argv=None):
    """Parse ``argv``, run the command and return the exit status."""
    parser = build_parser()
    args = parser.parse_args(argv)
    flags = {k: v for k, v in vars(args).items() if k not in META}
    try:
        cfg = resolve(args.command, flags, args.config)
        if cfg.get("solve") and args.command != "sweep":
            _solve_exponent(cfg)
        result, verdict, curve = RUNNERS[args.command](cfg)
    except (InputError, DomainError, InadmissibleParameters) as err:
        print(f"dunklrad {args.command}: error: {err}", file=sys.stderr)
        return 2
    text = render(args.command, cfg, result, verdict)
    if args.output:
        _write(args.output, text)
    else:
        sys.stdout.write(text)
    if args.csv and curve is not None:
        _write(args.csv, curve)
    if args.expect is not None and args.expect != verdict:
        print(f"dunklrad {args.command}: verdict {verdict!r}, expected {args.expect!r}",
              file=sys.stderr)
        return 1
    return 0


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
