"""Command line front end.

One experiment per invocation.  Options may come from a JSON config file
(``--config``; keys are the option names with underscores) and are
overridden by flags.  With ``--out DIR`` the command writes CSV tables and a
``manifest.json`` recording the resolved configuration, its hash, library
versions, every default that was filled in, and summary statistics.

Exit codes: 0 success, 2 configuration error, 3 numeric error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import json
import platform
import sys
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .asymptotics import (
    cesaro_bound_check,
    cesaro_moment,
    laurent_ratio,
    relative_cesaro_moments,
    relative_h_profile,
    relative_weak_moments,
    weak_moment,
)
from .coefficients import (
    DiscretePlanarMeasure,
    DistributionSpec,
    JacobiSequence,
    VerblunskySequence,
    alexandrov,
    constant_verblunsky,
    decaying_verblunsky,
    degenerate_pair,
    from_spec,
    parse_complex,
    periodic_jacobi,
    roots_of_unity_measure,
    sample_iid,
    strip,
    universal_circle_sequence,
    universal_jacobi_pair,
)
from .errors import BergshiftError, BoundsError, InvalidParameterError, NumericError
from .hessenberg import arnoldi_truncation, ggt_truncation, jacobi_truncation
from .io import batch_request_rows, config_hash, fmt, sequence_rows, truncation_rows, write_csv, write_json, zero_rows
from .polynomials import ratio
from .rightlimits import SubsequenceSpec, best_match, detect_right_limit, normalized_ratio_difference, right_limit_difference
from .zeros import zero_moments, zeros

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4

GRID_DEFAULT = 64
EPSILON_DEFAULT = 1e-3


class ConfigError(InvalidParameterError):
    pass


# -- model parsing -----------------------------------------------------


def _split_list(text: str) -> list[str]:
    sep = ";" if ";" in text else ","
    return [t for t in (s.strip() for s in text.split(sep)) if t]


def _parse_kv(body: str) -> dict:
    out = {}
    for part in body.split(","):
        if not part.strip():
            continue
        if "=" not in part:
            raise ConfigError(f"expected key=value in model description, got {part!r}")
        k, v = part.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def parse_model(value):
    """Build a coefficient sequence or discrete measure from a CLI/config value.

    Accepted forms: a spec dict; a JSON string; ``@file.json``;
    ``jacobi:a=..,b=..`` (``;``-separated lists give periodic parameters);
    ``verblunsky:alpha=..``, ``verblunsky:decay=..[,offset=..]``,
    ``verblunsky:values=..;..``; ``measure:roots=K`` or
    ``measure:points=..;..[,weights=..;..]``.
    """
    if isinstance(value, dict):
        return from_spec(value)
    if not isinstance(value, str):
        raise ConfigError(f"cannot interpret model {value!r}")
    text = value.strip()
    if text.startswith("@"):
        try:
            return parse_model(json.loads(Path(text[1:]).read_text()))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"model file {text[1:]} is not valid JSON: {exc}") from None
    if text.startswith("{"):
        return from_spec(json.loads(text))
    model, _, body = text.partition(":")
    kv = _parse_kv(body)
    length = int(kv.pop("length")) if "length" in kv else None
    if model == "jacobi":
        a = [float(x) for x in _split_list(kv.pop("a", "0.5"))]
        b = [float(x) for x in _split_list(kv.pop("b", "0"))]
        _reject_leftovers(kv, model)
        return periodic_jacobi(a, b, length=length)
    if model == "verblunsky":
        if "alpha" in kv:
            seq = constant_verblunsky(parse_complex(kv.pop("alpha")), length=length)
        elif "decay" in kv:
            seq = decaying_verblunsky(parse_complex(kv.pop("decay")), float(kv.pop("offset", 2.0)), length=length)
        elif "values" in kv:
            seq = VerblunskySequence(values=[parse_complex(v) for v in _split_list(kv.pop("values"))])
        else:
            raise ConfigError("verblunsky model needs alpha=, decay= or values=")
        _reject_leftovers(kv, model)
        return seq
    if model == "measure":
        if "roots" in kv:
            mu = roots_of_unity_measure(int(kv.pop("roots")))
        else:
            points = [parse_complex(v) for v in _split_list(kv.pop("points", ""))]
            weights = [float(w) for w in _split_list(kv.pop("weights"))] if "weights" in kv else None
            mu = DiscretePlanarMeasure(points, weights)
        _reject_leftovers(kv, model)
        return mu
    raise ConfigError(f"unknown model kind {model!r}; expected jacobi, verblunsky or measure")


def _reject_leftovers(kv, model):
    if kv:
        raise ConfigError(f"unknown keys for {model} model: {sorted(kv)}")


def truncate(model, N: int):
    """Hessenberg truncation of size ``N`` for any supported model."""
    if isinstance(model, VerblunskySequence):
        return ggt_truncation(model, N)
    if isinstance(model, JacobiSequence):
        return jacobi_truncation(model, N)
    if isinstance(model, DiscretePlanarMeasure):
        return arnoldi_truncation(model, N)
    raise ConfigError(f"cannot build a matrix from {model!r}")


def _model_size(model) -> int | None:
    if isinstance(model, DiscretePlanarMeasure):
        return model.count - 1
    return model.length


def _fit_size(model, wanted: int) -> int:
    limit = _model_size(model)
    if limit is not None and limit < wanted:
        raise BoundsError(f"the model provides only {limit} rows; this experiment needs N = {wanted}")
    return wanted


def _parse_dist(value, target: str) -> DistributionSpec:
    if isinstance(value, dict):
        data = dict(value)
        data.setdefault("target", target)
        return DistributionSpec.from_json(data)
    text = str(value).strip()
    if text.startswith("{"):
        return _parse_dist(json.loads(text), target)
    kind, _, body = text.partition(":")
    if kind == "atomic":
        atoms = _split_list(body)
        parsed = [parse_complex(a) for a in atoms]
        if target == "line":
            parsed = [a.real for a in parsed]
        return DistributionSpec("atomic", {"atoms": parsed, "probs": [1.0 / len(atoms)] * len(atoms)}, target)
    if kind == "disk":
        return DistributionSpec("disk", {"radius": float(body)}, target)
    if kind == "interval":
        low, high = (float(x) for x in _split_list(body))
        return DistributionSpec("interval", {"low": low, "high": high}, target)
    raise ConfigError(f"cannot parse distribution {value!r}")


def _int_list(value) -> list[int]:
    if isinstance(value, (list, tuple)):
        return [int(v) for v in value]
    return [int(v) for v in _split_list(str(value))]


# -- command table -----------------------------------------------------

# option -> (type, help); type "flag" is a boolean switch
OPTIONS = {
    "model": (str, "measure model, e.g. jacobi:a=0.5,b=0 or @spec.json"),
    "model_b": (str, "second measure model for comparisons"),
    "paper_example": (str, "degenerate | alexandrov | stripping | decay-vs-free"),
    "N": (int, "truncation size"),
    "n": (int, "polynomial degree / matrix index"),
    "z": (str, "evaluation point, e.g. 2+0i"),
    "normalized": ("flag", "use orthonormal instead of monic polynomials"),
    "request": (str, "batch evaluation request (JSON file)"),
    "terms": (int, "highest Laurent coefficient index"),
    "j": (int, "largest moment order"),
    "kind": (str, "moment kind (weak | cesaro | both) or universal kind (circle | jacobi)"),
    "sub": (str, "subsequence: comma list or offset:stride:stop"),
    "sub_b": (str, "paired subsequence for the second measure"),
    "m": (int, "window half-width"),
    "epsilon": (float, "convergence tolerance for right-limit detection"),
    "q": (int, "index shift between the two measures"),
    "j_max": (int, "largest h index / moment order in comparisons"),
    "n_grid": (str, "comma list of n values for h profiles"),
    "r": (float, "evaluation radius"),
    "G": (int, "grid points on |z| = r"),
    "lam": (str, "Alexandrov rotation (unit modulus)"),
    "quantity": (str, "h | weak | cesaro | ratio | all"),
    "dist": (str, "coefficient distribution, e.g. atomic:0.3;-0.3"),
    "dist_b": (str, "diagonal distribution for Jacobi ensembles"),
    "k": (int, "lower bound of the search range"),
    "H": (int, "search horizon"),
    "seed": (int, "64-bit seed"),
    "ensemble": (int, "number of consecutive seeds"),
    "base": (str, "base list for universal sequences"),
    "base_b": (str, "diagonal base list (jacobi universal sequences)"),
    "length": (int, "sequence length"),
}

COMMANDS = {
    "build-matrix": ("materialize a Hessenberg truncation", ["model", "N"]),
    "ratio": ("evaluate P_{n-1}/P_n (or p_{n-1}/p_n)", ["model", "N", "n", "z", "normalized", "request"]),
    "laurent": ("Laurent coefficients of the ratio at infinity", ["model", "N", "n", "terms", "z"]),
    "moments": ("weak and Cesaro moments", ["model", "N", "n", "j", "kind"]),
    "zeros": ("zeros of P_n", ["model", "N", "n"]),
    "right-limit": ("detect an approximate right limit", ["model", "N", "sub", "m", "epsilon"]),
    "compare": (
        "relative asymptotics of two measures",
        ["model", "model_b", "paper_example", "N", "n", "n_grid", "q", "j_max", "r", "G", "m", "lam", "quantity", "sub", "sub_b"],
    ),
    "random": ("best-match distances for i.i.d. coefficient ensembles", ["model", "dist", "dist_b", "n", "k", "r", "G", "H", "seed", "ensemble"]),
    "universal": ("emit universal coefficient sequences", ["kind", "base", "base_b", "length"]),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bergshift", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"bergshift {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    runp = sub.add_parser("run", help="run the experiment described by a config file")
    runp.add_argument("config")
    runp.add_argument("--out")
    for name, (help_text, opts) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--config", help="JSON config file; flags override its values")
        sp.add_argument("--out", help="output directory for CSV and manifest files")
        for opt in opts:
            typ, help_opt = OPTIONS[opt]
            flag = "--" + opt.replace("_", "-")
            if typ == "flag":
                sp.add_argument(flag, dest=opt, action="store_const", const=True, default=None, help=help_opt)
            else:
                sp.add_argument(flag, dest=opt, type=typ, default=None, help=help_opt)
    return parser


def resolve_config(command: str, flags: dict, config: dict | None) -> dict:
    allowed = set(COMMANDS[command][1])
    resolved = {}
    if config:
        unknown = set(config) - allowed - {"command", "out"}
        if unknown:
            raise ConfigError(f"unknown config keys for {command}: {sorted(unknown)}")
        resolved.update({k: v for k, v in config.items() if k != "command"})
    resolved.update({k: v for k, v in flags.items() if v is not None and k in allowed | {"out"}})
    return resolved


class Run:
    """Resolved options plus record keeping for defaults and outputs."""

    def __init__(self, command: str, options: dict):
        self.command = command
        self.options = options
        self.defaults: dict = {}
        self.tables: list = []
        self.documents: list = []
        self.summary: dict = {}
        self.lines: list[str] = []

    def get(self, key, default=None, required=False):
        if key in self.options and self.options[key] is not None:
            return self.options[key]
        if required:
            raise ConfigError(f"--{key.replace('_', '-')} is required for {self.command}")
        self.defaults[key] = default
        return default

    def table(self, name, header, rows):
        self.tables.append((name, header, rows))

    def say(self, text):
        self.lines.append(text)


# -- handlers ----------------------------------------------------------


def cmd_build_matrix(run: Run):
    model = parse_model(run.get("model", required=True))
    N = _fit_size(model, int(run.get("N", 8)))
    trunc = truncate(model, N)
    run.table("matrix.csv", *truncation_rows(trunc))
    run.documents.append(("matrix.json", trunc.to_json()))
    run.summary.update({"N": N, "source": trunc.source, "R_est": trunc.R_est})
    run.say(f"N={N} source={trunc.source} R_est={trunc.R_est!r}")
    with np.printoptions(precision=6, suppress=True, linewidth=120):
        run.say(str(trunc.entries if N <= 12 else trunc.corner(12)))


def cmd_ratio(run: Run):
    model = parse_model(run.get("model", required=True))
    request = run.get("request")
    normalized = bool(run.get("normalized", False))
    if request is not None:
        try:
            req = json.loads(Path(request).read_text()) if not isinstance(request, dict) else request
        except json.JSONDecodeError as exc:
            raise ConfigError(f"request {request} is not valid JSON: {exc}") from None
        req.setdefault("normalized", normalized)
        ns = req.get("n")
        top = ns["stop"] if isinstance(ns, dict) else max(ns)
        trunc = truncate(model, _fit_size(model, int(run.get("N", top))))
        header, rows = batch_request_rows(trunc, req)
        run.table("batch.csv", header, rows)
        run.summary.update({"rows": len(rows)})
        run.say(f"evaluated {len(rows)} points")
        return
    n = int(run.get("n", required=True))
    trunc = truncate(model, _fit_size(model, int(run.get("N", n))))
    z = parse_complex(run.get("z", f"{2 * trunc.R_est}"))
    value = ratio(trunc, n, z, normalized=normalized)
    run.table("ratio.csv", ("n", "re_z", "im_z", "re_value", "im_value"), [(n, z.real, z.imag, value.real, value.imag)])
    run.summary.update({"value": value, "R_est": trunc.R_est})
    shown = value.real if value.imag == 0 else value
    run.say(f"{'p' if normalized else 'P'}_{n - 1}/{'p' if normalized else 'P'}_{n} at z={z}: {fmt(shown)}")


def cmd_laurent(run: Run):
    model = parse_model(run.get("model", required=True))
    n = int(run.get("n", required=True))
    trunc = truncate(model, _fit_size(model, int(run.get("N", n))))
    lc = laurent_ratio(trunc, n, int(run.get("terms", 30)))
    run.table("laurent.csv", ("m", "re", "im"), [(m, c.real, c.imag) for m, c in enumerate(lc.coefficients)])
    z = parse_complex(run.get("z", f"{2 * trunc.R_est}"))
    partial = lc.partial_sum(z)
    exact = ratio(trunc, n, z)
    run.summary.update({"z": z, "partial_sum": partial, "ratio": exact, "error": abs(partial - exact), "tail_bound": lc.tail_bound(z)})
    for m, c in enumerate(lc.coefficients):
        run.say(f"c_{m} = {fmt(c.real)}" + (f" {c.imag:+.17g}i" if c.imag else ""))
    run.say(f"|partial sum - ratio| at z={z}: {abs(partial - exact):.3e} (tail bound {lc.tail_bound(z):.3e})")


def cmd_moments(run: Run):
    model = parse_model(run.get("model", required=True))
    n = int(run.get("n", required=True))
    j_max = int(run.get("j", 4))
    kind = run.get("kind", "both")
    if kind not in ("weak", "cesaro", "both"):
        raise ConfigError(f"unknown moment kind {kind!r}")
    trunc = truncate(model, _fit_size(model, int(run.get("N", n + 1 + j_max))))
    rows = []
    zs = zeros(trunc, n) if kind != "weak" and n >= 1 else None
    for j in range(j_max + 1):
        if kind in ("weak", "both"):
            v = weak_moment(trunc, j, n)
            rows.append(("weak", j, n, v.real, v.imag))
        if zs is not None:
            v = cesaro_moment(trunc, j, n)
            rows.append(("cesaro", j, n, v.real, v.imag))
            w = zero_moments(zs, j)
            rows.append(("zeros", j, n, w.real, w.imag))
    run.table("moments.csv", ("kind", "j", "n", "re", "im"), rows)
    if zs is not None:
        gap = max(abs(complex(a[3], a[4]) - complex(b[3], b[4])) for a, b in zip(rows, rows[1:]) if a[0] == "cesaro" and b[0] == "zeros")
        run.summary["trace_zero_gap"] = gap
    for row in rows:
        run.say(f"{row[0]:7s} j={row[1]} n={row[2]}: {complex(row[3], row[4])}")


def cmd_zeros(run: Run):
    model = parse_model(run.get("model", required=True))
    n = int(run.get("n", required=True))
    trunc = truncate(model, _fit_size(model, int(run.get("N", n))))
    zs = zeros(trunc, n)
    run.table("zeros.csv", *zero_rows(zs))
    stats = {"degree": n, "residual": zs.residual, "max_modulus": float(np.max(np.abs(zs.zeros))) if n else 0.0}
    run.documents.append(("zeros.json", stats))
    run.summary.update(stats)
    for z in zs.zeros:
        run.say(f"{fmt(z.real)} {z.imag:+.17g}i")
    run.say(f"residual {zs.residual:.3e}")


def cmd_right_limit(run: Run):
    model = parse_model(run.get("model", required=True))
    sub = SubsequenceSpec.parse(str(run.get("sub", required=True)))
    m = int(run.get("m", 2))
    eps = float(run.get("epsilon", EPSILON_DEFAULT))
    trunc = truncate(model, _fit_size(model, int(run.get("N", int(sub.indices[-1]) + m))))
    est = detect_right_limit(trunc, sub, m, eps)
    W = est.window.entries
    run.table(
        "window.csv",
        ("row", "col", "re", "im"),
        [(r - m, c - m, complex(W[r, c]).real, complex(W[r, c]).imag) for r in range(2 * m + 1) for c in range(2 * m + 1)],
    )
    run.summary.update({"dispersion": est.dispersion, "converged": est.converged, "epsilon": eps, "m": m})
    run.say(f"dispersion {est.dispersion:.6e} -> {'converged' if est.converged else 'not converged'} (epsilon {eps})")
    with np.printoptions(precision=6, suppress=True, linewidth=120):
        run.say(str(W))


def _paper_pair(run: Run, name: str, N: int):
    if name == "degenerate":
        mu, nu = degenerate_pair(N)
        return mu, nu, 0
    if name == "alexandrov":
        lam = parse_complex(run.get("lam", "1j"))
        mu = decaying_verblunsky()
        return mu, alexandrov(mu, lam), 0
    if name == "stripping":
        k = int(run.get("q", 1))
        mu = decaying_verblunsky()
        return mu, strip(mu, k), k
    if name == "decay-vs-free":
        return decaying_verblunsky(), constant_verblunsky(0.0), 0
    raise ConfigError(f"unknown built-in example {name!r}")


def cmd_compare(run: Run):
    n = int(run.get("n", 200))
    j_max = int(run.get("j_max", 3))
    N = int(run.get("N", n + j_max + 2))
    example = run.options.get("paper_example")
    if example:
        mu, nu, q = _paper_pair(run, example, N)
        run.options.setdefault("q", q)
    else:
        mu = parse_model(run.get("model", required=True))
        nu = parse_model(run.get("model_b", required=True))
    q = int(run.get("q", 0))
    A = truncate(mu, _fit_size(mu, N))
    B = truncate(nu, _fit_size(nu, N))
    r = float(run.get("r", 2 * max(A.R_est, B.R_est)))
    G = int(run.get("G", GRID_DEFAULT))
    m = int(run.get("m", 1))
    quantity = run.get("quantity", "all")
    wanted = {"h", "weak", "cesaro", "ratio", "window"} if quantity == "all" else {quantity}
    grid_default = [max(n // 8, j_max + 1 + q), max(n // 4, j_max + 1 + q), max(n // 2, j_max + 1 + q), n]
    n_grid = sorted(set(_int_list(run.get("n_grid", grid_default))))
    rows = []
    summary = {"q": q, "grid": n_grid, "r": r, "G": G}
    if "h" in wanted:
        prof = relative_h_profile(A, B, q, j_max, n_grid)
        rows += [(qty, j, nn, v.real, v.imag, "") for qty, j, nn, v in prof.to_rows()]
        summary["max_last_quartile"] = {f"h_{j}": float(s) for j, s in enumerate(prof.summary)}
    if "weak" in wanted:
        vals = []
        for j in range(1, j_max + 1):
            for nn in n_grid:
                v = relative_weak_moments(A, B, q, j, nn)
                vals.append(v)
                rows.append(("weak", j, nn, v.real, v.imag, ""))
        summary["weak_last"] = float(np.max(np.abs(vals[-len(n_grid):]))) if vals else 0.0
    if "cesaro" in wanted:
        for j in range(1, j_max + 1):
            for nn in n_grid:
                v = relative_cesaro_moments(A, B, j, nn, q)
                lhs, rhs = cesaro_bound_check(A, B, j, nn)
                rows.append(("cesaro", j, nn, v.real, v.imag, rhs))
                rows.append(("cesaro_bound_lhs", j, nn, lhs, 0.0, rhs))
    if "ratio" in wanted:
        z = np.array([r + 0j])
        ra = ratio(A, n, z[0], normalized=True)
        rb = ratio(B, n - q, z[0], normalized=True)
        subA = SubsequenceSpec.explicit(n_grid)
        prof = normalized_ratio_difference(A, B, subA, subA.shifted(q), [0], r, G)
        for _, nk, _, j, d in prof.to_rows():
            rows.append(("ratio_sup_diff", j, nk, d, 0.0, ""))
        summary.update({"ratio_A_at_r": abs(ra), "ratio_B_at_r": abs(rb), "ratio_sup_diff_tail": prof.tail_max})
        run.say(f"|p_{n - 1}/p_{n}| at z={r}: A {abs(ra):.6f}, B {abs(rb):.6f}; grid sup difference {prof.sup_diff[-1, 0]:.6f}")
    if "window" in wanted:
        lo = max(m + 1 + q, n // 2)
        subA = SubsequenceSpec.explicit(range(lo, n + 1))
        gap = right_limit_difference(A, B, subA, subA.shifted(q), m)
        diag = abs(A.entry(n, n) - B.entry(n - q, n - q))
        rows.append(("diagonal_gap", 0, n, diag, 0.0, ""))
        summary.update({"window_tail_difference": gap, "diagonal_gap": diag})
        run.say(f"window difference over n in [{lo}, {n}] (m={m}): {gap:.6f}; |M_A(n,n) - M_B(n,n)| = {diag:.6f}")
    run.table("compare.csv", ("quantity", "j", "n", "re", "im", "bound"), rows)
    run.documents.append(("summary.json", summary))
    run.summary.update(summary)
    if "max_last_quartile" in summary:
        run.say("h differences (last-quartile max): " + ", ".join(f"{k}={v:.3e}" for k, v in summary["max_last_quartile"].items()))


def cmd_random(run: Run):
    seed = run.get("seed", required=True)
    target = parse_model(run.get("model", required=True))
    n = int(run.get("n", 40))
    k = int(run.get("k", 0))
    H = int(run.get("H", 100_000))
    G = int(run.get("G", GRID_DEFAULT))
    ensemble = int(run.get("ensemble", 1))
    if isinstance(target, VerblunskySequence):
        dist = _parse_dist(run.get("dist", required=True), "circle")
    elif isinstance(target, JacobiSequence):
        dist = (_parse_dist(run.get("dist", required=True), "line"), _parse_dist(run.get("dist_b", required=True), "line"))
    else:
        raise ConfigError("the random target must be a Verblunsky or Jacobi model")
    B = truncate(target, _fit_size(target, n))
    rows = []
    r_default = None
    for s in range(int(seed), int(seed) + ensemble):
        A = truncate(sample_iid(dist, H, s), H)
        if r_default is None:
            r_default = float(run.get("r", 2 * max(A.R_est, B.R_est)))
        d, m_best = best_match(A, B, n, k, r_default, G, H)
        rows.append((s, d, m_best))
        run.say(f"seed {s}: distance {d:.6e} at m = {m_best}")
    run.table("random.csv", ("seed", "distance", "m"), rows)
    run.summary.update({"max_distance": max(r[1] for r in rows), "r": r_default})


def cmd_universal(run: Run):
    kind = run.get("kind", "circle")
    length = int(run.get("length", required=True))
    base = run.get("base", required=True)
    base = base if isinstance(base, list) else _split_list(str(base))
    if kind == "circle":
        seq = universal_circle_sequence(base, length)
    elif kind == "jacobi":
        base_b = run.get("base_b", required=True)
        base_b = base_b if isinstance(base_b, list) else _split_list(str(base_b))
        seq = universal_jacobi_pair([float(x) for x in base], [float(x) for x in base_b], length)
    else:
        raise ConfigError(f"unknown universal kind {kind!r}")
    header, rows = sequence_rows(seq, length)
    run.table("sequence.csv", header, rows)
    run.summary.update({"length": length, "kind": kind})
    for row in rows:
        run.say(",".join(fmt(v) for v in row))


HANDLERS = {
    "build-matrix": cmd_build_matrix,
    "ratio": cmd_ratio,
    "laurent": cmd_laurent,
    "moments": cmd_moments,
    "zeros": cmd_zeros,
    "right-limit": cmd_right_limit,
    "compare": cmd_compare,
    "random": cmd_random,
    "universal": cmd_universal,
}


def _load_config(path) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    return data


def execute(command: str, options: dict, out: str | None = None) -> Run:
    """Run one experiment; writes outputs when ``out`` is given."""
    run = Run(command, dict(options))
    HANDLERS[command](run)
    if out:
        outdir = Path(out)
        written = []
        for name, header, rows in run.tables:
            written.append(str(write_csv(outdir / name, header, rows).name))
        for name, data in run.documents:
            written.append(str(write_json(outdir / name, data).name))
        resolved = {"command": command, **{k: v for k, v in options.items() if k != "out"}}
        manifest = {
            "command": command,
            "config": resolved,
            "config_hash": config_hash(resolved),
            "defaults": run.defaults,
            "versions": {
                "bergshift": __version__,
                "numpy": np.__version__,
                "scipy": scipy.__version__,
                "python": platform.python_version(),
            },
            "summary": run.summary,
            "outputs": written,
        }
        write_json(outdir / "manifest.json", manifest)
    return run


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    flags = vars(args)
    command = flags.pop("command")
    try:
        if command == "run":
            config = _load_config(flags["config"])
            command = config.get("command")
            if command not in COMMANDS:
                raise ConfigError(f"config names unknown command {command!r}")
            options = resolve_config(command, {"out": flags.get("out")}, config)
        else:
            config = _load_config(flags.pop("config")) if flags.get("config") else None
            flags.pop("config", None)
            options = resolve_config(command, flags, config)
        out = options.pop("out", None)
        run = execute(command, options, out)
    except (InvalidParameterError, BoundsError, KeyError, ValueError, TypeError) as exc:
        print(f"bergshift: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericError as exc:
        print(f"bergshift: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"bergshift: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except BergshiftError as exc:
        print(f"bergshift: error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    for line in run.lines:
        print(line)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
