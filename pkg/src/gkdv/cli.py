"""``gkdv`` command line: series evaluation, tables, dataset, training, export.

Exit status: 0 success, 1 usage error, 2 numeric or acceptance failure.
Every file is written atomically under the output directory (``--out``,
default ``$GKDV_OUT`` or ``./gkdv_out``).
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import analysis, surrogate
from .adm import DEFAULT_TERMS, eval_partial_sum, residual
from .exact import exact_eval
from .params import DEFAULT_U, GkdvParams
from .surrogate import SplitMix64, TrainConfig, TrainingDiverged

log = logging.getLogger("gkdv")

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- argument types ---------------------------------------------------------------

def _float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not np.isfinite(v):
        raise argparse.ArgumentTypeError(f"not finite: {text!r}")
    return v


def _positive(text):
    v = _float(text)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"must be > 0: {text!r}")
    return v


def _nonneg(text):
    v = _float(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0: {text!r}")
    return v


def _pos_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text!r}")
    return v


def _float_list(text):
    try:
        return tuple(_float(t) for t in text.split(",") if t.strip())
    except argparse.ArgumentTypeError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers: {text!r}") from None


def _int_list(text):
    return tuple(_pos_int(t) for t in text.split(",") if t.strip())


def _grid(text):
    """``start:stop:count`` -> evenly spaced values (endpoints included)."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"grid must be start:stop:count, got {text!r}")
    return np.linspace(_float(parts[0]), _float(parts[1]), _pos_int(parts[2]))


# -- output -----------------------------------------------------------------------

def write_atomic(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    os.replace(tmp, path)
    return path


def csv_text(header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(v if isinstance(v, str) else (str(v) if isinstance(v, (int, np.integer))
                                                            else analysis.fmt(v)) for v in row))
    return "\n".join(lines) + "\n"


def _outdir(args) -> Path:
    return Path(args.out or os.environ.get("GKDV_OUT") or "gkdv_out")


# -- subcommands ---------------------------------------------------------------------

def cmd_adm(args) -> int:
    params = GkdvParams(args.u, args.w)
    sol = analysis.cached_solve(params, args.terms)
    if args.x_grid is None and args.tau_grid is None:
        if args.x is None or args.tau is None:
            raise UsageError("adm needs --x and --tau, or --x-grid/--tau-grid")
        if args.residual:
            print(f"{residual(sol, args.terms, args.x, args.tau):.{args.digits}e}")
        else:
            print(f"{eval_partial_sum(sol, args.terms, args.x, args.tau):.{args.digits}f}")
        return EXIT_OK
    xs = args.x_grid if args.x_grid is not None else np.array([args.x if args.x is not None else 0.0])
    taus = args.tau_grid if args.tau_grid is not None else np.array([args.tau if args.tau is not None else 0.0])
    rows = []
    for x in xs:
        for tau in taus:
            rows.append((x, tau, args.w, args.terms, eval_partial_sum(sol, args.terms, x, tau),
                         residual(sol, args.terms, x, tau), exact_eval(params, x, tau)))
    path = write_atomic(_outdir(args) / "adm_grid.csv",
                        csv_text(("x", "tau", "w", "n_terms", "value", "residual", "exact"), rows))
    print(path)
    return EXIT_OK


def cmd_exact(args) -> int:
    params = GkdvParams(args.u, args.w)
    if args.x_grid is None and args.tau_grid is None:
        if args.x is None or args.tau is None:
            raise UsageError("exact needs --x and --tau, or --x-grid/--tau-grid")
        print(f"{exact_eval(params, args.x, args.tau):.{args.digits}f}")
        return EXIT_OK
    xs = args.x_grid if args.x_grid is not None else np.array([args.x or 0.0])
    taus = args.tau_grid if args.tau_grid is not None else np.array([args.tau or 0.0])
    rows = [(x, t, args.w, exact_eval(params, x, t)) for x in xs for t in taus]
    print(write_atomic(_outdir(args) / "exact_grid.csv", csv_text(("x", "tau", "w", "exact"), rows)))
    return EXIT_OK


def cmd_tables(args) -> int:
    ids = analysis.TABLE_IDS if args.id == "all" else (int(args.id),)
    ok = True
    for i in ids:
        res = analysis.reproduce_table(i)
        write_atomic(_outdir(args) / f"table{i}.csv", res.to_csv())
        n_pass = sum(c.passed for c in res.cells)
        status = "PASS" if res.passed else "FAIL"
        print(f"table {i}: {status} {n_pass}/{len(res.cells)} cells within tolerance"
              + (f", {len(res.advisory_failures)} advisory" if res.advisory_failures else ""))
        for note in res.notes:
            print(f"  note: {note}")
        for c in res.gating_failures:
            print(f"  n={c.n_terms} x={c.x:g} tau={c.tau:g} w={c.w:g}: computed {c.computed:.6e}, "
                  f"printed {c.printed} (diff {c.abs_diff:.2e} > tol {c.tolerance:.1e})")
        ok = ok and res.passed
    return EXIT_OK if ok else EXIT_FAIL


def _dataset_csv(ds) -> str:
    return csv_text(("x", "tau", "w", "eta"), [(*row, t) for row, t in zip(ds.inputs, ds.targets)])


def _read_dataset(path) -> surrogate.Dataset:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.shape[1] != 4:
        raise UsageError(f"{path}: expected columns x,tau,w,eta")
    return surrogate.Dataset(data[:, :3], data[:, 3], "adm")


def cmd_dataset(args) -> int:
    ds = analysis.build_dataset(args.u, args.w_values, args.pairs, args.terms)
    print(write_atomic(_outdir(args) / "dataset.csv", _dataset_csv(ds)))
    return EXIT_OK


def cmd_train(args) -> int:
    ds = (_read_dataset(args.dataset) if args.dataset
          else analysis.build_dataset(args.u, args.w_values, args.pairs, args.terms))
    cfg = TrainConfig(args.lr, args.epochs, args.l2, args.seed, tuple(args.layers))
    try:
        model, history = surrogate.train(cfg, ds)
    except TrainingDiverged as exc:
        print(f"training failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    out = _outdir(args)
    model_path = Path(args.model) if args.model else out / "model.json"
    model_path.parent.mkdir(parents=True, exist_ok=True)
    surrogate.save_model(model, model_path)
    write_atomic(out / "loss_history.csv", csv_text(("epoch", "loss"), enumerate(history, start=1)))
    print(f"model: {model_path}")
    print(f"final loss {history[-1]:.6e}, training mse {surrogate.mse(model, ds):.6e}")
    return EXIT_OK


def _truth(kind: str, u: float, w: float, terms: int):
    params = GkdvParams(u, w)
    if kind == "exact":
        return lambda x, t: exact_eval(params, x, t)
    sol = analysis.cached_solve(params, terms)
    return lambda x, t: eval_partial_sum(sol, terms, x, t)


def cmd_eval(args) -> int:
    model = surrogate.load_model(args.model)
    xs, taus = analysis.test_grid(args.nx, args.ntau)
    X, T = np.meshgrid(xs, taus, indexing="ij")
    rows, preds, truths = [], [], []
    for w in args.w_values:
        pred = surrogate.predict_grid(model, xs, taus, w)
        truth = _truth(args.truth, args.u, w, args.terms)(X, T)
        preds.append(pred)
        truths.append(truth)
        rows += [(x, t, w, p, q, abs(p - q)) for x, t, p, q in zip(X.ravel(), T.ravel(), pred.ravel(), truth.ravel())]
    err = analysis.mae(np.concatenate([p.ravel() for p in preds]), np.concatenate([t.ravel() for t in truths]))
    write_atomic(_outdir(args) / f"eval_{args.truth}.csv",
                 csv_text(("x", "tau", "w", "prediction", "truth", "abs_error"), rows))
    print(f"mae vs {args.truth}: {err:.6e}")
    if args.max_mae is not None and err > args.max_mae:
        return EXIT_FAIL
    return EXIT_OK


# -- plot data -------------------------------------------------------------------------

PLOT_FIGURES = ("2", "3", "4", "5", "6", "7", "9", "10", "12", "13")
MODEL_FIGURES = {"9", "10", "12", "13"}


def _surface(u, ws, terms, xs, taus, with_exact=True):
    rows = []
    for w in ws:
        params = GkdvParams(u, w)
        sol = analysis.cached_solve(params, terms)
        for x in xs:
            for t in taus:
                row = (x, t, w, eval_partial_sum(sol, terms, x, t))
                rows.append(row + ((exact_eval(params, x, t),) if with_exact else ()))
    return rows


def _random_points(seed, n, w=None, tau=None):
    rng = SplitMix64(seed)
    pts = []
    for _ in range(n):
        x = rng.uniform(*analysis.X_RANGE)
        t = rng.uniform(*analysis.TAU_RANGE) if tau is None else tau
        ww = rng.uniform(0.0, 1.0) if w is None else w
        pts.append((x, t, ww))
    return pts


def _point_errors(model, u, terms, pts):
    rows = []
    for x, t, w in pts:
        params = GkdvParams(u, w)
        adm = eval_partial_sum(analysis.cached_solve(params, terms), terms, x, t)
        ex = exact_eval(params, x, t)
        pred = surrogate.forward(model, (x, t, w))
        rows.append((x, t, w, pred, adm, ex, abs(pred - adm), abs(pred - ex)))
    return rows


_POINT_HEADER = ("x", "tau", "w", "prediction", "adm", "exact", "abs_error_adm", "abs_error_exact")


def plot_data(fig: str, u: float, terms: int, model=None, seed: int = 42):
    """Header and rows of the plot data behind one published figure."""
    xs = np.linspace(-6.0, 6.0, 121)
    taus = np.linspace(0.0, 1.0, 11)
    if fig == "2":
        return ("x", "tau", "w", "adm", "exact"), _surface(u, [0.0], terms, xs, taus)
    if fig in ("3", "4"):
        params = GkdvParams(u, 0.0)
        sol = analysis.cached_solve(params, terms)
        rows = []
        for n in range(1, terms + 1):
            for x in xs:
                v = eval_partial_sum(sol, n, x, 1.0)
                ex = exact_eval(params, x, 1.0)
                rows.append((x, 1.0, 0.0, n, v, ex) if fig == "3" else (x, 1.0, 0.0, n, abs(v - ex)))
        header = ("x", "tau", "w", "n_terms", "adm", "exact") if fig == "3" else ("x", "tau", "w", "n_terms", "abs_error")
        return header, rows
    if fig in ("5", "6"):
        tau = 1.0 if fig == "5" else 0.5
        return ("x", "tau", "w", "adm", "exact"), _surface(u, [0.0, 0.5, 1.0], terms, xs, [tau])
    if fig == "7":
        return ("x", "tau", "w", "adm"), _surface(u, [0.5, 1.0, 1.5], terms, xs, taus, with_exact=False)
    if model is None:
        raise UsageError(f"figure {fig} needs --model")
    if fig == "9":
        return _POINT_HEADER, _point_errors(model, u, terms, _random_points(seed, 20))
    if fig == "10":
        gx, gt = analysis.test_grid()
        rows = []
        for w in analysis.DEFAULT_W_VALUES:
            sol = analysis.cached_solve(GkdvParams(u, w), terms)
            pred = surrogate.predict_grid(model, gx, gt, w)
            for i, x in enumerate(gx):
                for j, t in enumerate(gt):
                    rows.append((x, t, w, pred[i, j], eval_partial_sum(sol, terms, x, t)))
        return ("x", "tau", "w", "prediction", "adm"), rows
    if fig == "12":
        return _POINT_HEADER, _point_errors(model, u, terms, _random_points(seed + 1, 10))
    if fig == "13":
        return _POINT_HEADER, _point_errors(model, u, terms, _random_points(seed + 2, 10, w=1.0, tau=0.5))
    raise UsageError(f"unknown figure {fig!r}")


def cmd_export_plot(args) -> int:
    figs = [f for f in PLOT_FIGURES if args.model or f not in MODEL_FIGURES] if args.figure == "all" else [args.figure]
    model = surrogate.load_model(args.model) if args.model else None
    for fig in figs:
        header, rows = plot_data(fig, args.u, args.terms, model, args.seed)
        print(write_atomic(_outdir(args) / f"figure{fig}.csv", csv_text(header, rows)))
    return EXIT_OK


# -- parser ------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gkdv", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, physics=True):
        p.add_argument("--config", help="file of 'key = value' lines mirroring the flags")
        p.add_argument("--out", help="output directory (default $GKDV_OUT or ./gkdv_out)")
        if physics:
            p.add_argument("--u", type=_positive, default=DEFAULT_U, help="wave speed")
            p.add_argument("--terms", type=_pos_int, default=DEFAULT_TERMS, help="ADM term count")

    def point(p):
        p.add_argument("--w", type=_nonneg, default=0.0, help="Coriolis constant")
        p.add_argument("--x", type=_float)
        p.add_argument("--tau", type=_float)
        p.add_argument("--x-grid", type=_grid, help="start:stop:count")
        p.add_argument("--tau-grid", type=_grid, help="start:stop:count")
        p.add_argument("--digits", type=_pos_int, default=4)

    p = sub.add_parser("adm", help="evaluate ADM partial sums and residuals")
    common(p)
    point(p)
    p.add_argument("--residual", action="store_true", help="print the PDE residual instead")
    p.set_defaults(func=cmd_adm)

    p = sub.add_parser("exact", help="evaluate the closed-form soliton")
    common(p)
    point(p)
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("tables", help="reproduce reference Tables 1-6")
    common(p, physics=False)
    p.add_argument("--id", choices=[str(i) for i in analysis.TABLE_IDS] + ["all"], default="all")
    p.set_defaults(func=cmd_tables)

    def data_opts(p):
        p.add_argument("--w-values", type=_float_list, default=analysis.DEFAULT_W_VALUES)
        p.add_argument("--pairs", type=_pos_int, default=analysis.DEFAULT_XT_PAIRS)

    p = sub.add_parser("dataset", help="write the ADM training set")
    common(p)
    data_opts(p)
    p.set_defaults(func=cmd_dataset)

    defaults = TrainConfig()
    p = sub.add_parser("train", help="train G-KdVNet")
    common(p)
    data_opts(p)
    p.add_argument("--dataset", help="CSV from 'gkdv dataset' (default: build it)")
    p.add_argument("--seed", type=int, default=defaults.seed)
    p.add_argument("--epochs", type=_pos_int, default=defaults.epochs)
    p.add_argument("--lr", type=_positive, default=defaults.learning_rate)
    p.add_argument("--l2", type=_nonneg, default=defaults.l2_lambda)
    p.add_argument("--layers", type=_int_list, default=defaults.layer_sizes)
    p.add_argument("--model", help="model file (default OUT/model.json)")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="MAE of a trained model on the test grid")
    common(p)
    p.add_argument("--model", required=True)
    p.add_argument("--truth", choices=("exact", "adm"), default="exact")
    p.add_argument("--w-values", type=_float_list, default=analysis.DEFAULT_W_VALUES)
    p.add_argument("--nx", type=_pos_int, default=21)
    p.add_argument("--ntau", type=_pos_int, default=6)
    p.add_argument("--max-mae", type=_positive, help="exit 2 when the MAE exceeds this")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("export-plot", help="write CSV data behind the figures")
    common(p)
    p.add_argument("--figure", choices=PLOT_FIGURES + ("all",), default="all")
    p.add_argument("--model", help="trained model, needed for figures 9, 10, 12, 13")
    p.add_argument("--seed", type=int, default=42, help="seed for the random test points")
    p.set_defaults(func=cmd_export_plot)
    return parser


def read_config(path) -> dict[str, str]:
    values = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        values[key.strip().lstrip("-").replace("-", "_")] = value.strip()
    return values


def _apply_config(parser, argv, args):
    """Re-parse with config-file values as defaults so flags still win."""
    sub = parser._subparsers._group_actions[0].choices[args.command]
    actions = {a.dest: a for a in sub._actions if a.dest not in ("help", "config")}
    cfg = read_config(args.config)
    unknown = sorted(set(cfg) - set(actions))
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(unknown)}")
    converted = {}
    for key, raw in cfg.items():
        action = actions[key]
        if action.nargs == 0:
            converted[key] = raw.lower() in ("1", "true", "yes", "on")
            continue
        try:
            converted[key] = action.type(raw) if action.type else raw
        except argparse.ArgumentTypeError as exc:
            raise UsageError(f"config key {key}: {exc}") from None
        if action.choices is not None and converted[key] not in action.choices:
            raise UsageError(f"config key {key}: invalid choice {raw!r}")
    sub.set_defaults(**converted)
    return parser.parse_args(argv)


def run(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.config:
            args = _apply_config(parser, argv, args)
        return args.func(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"gkdv: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, FloatingPointError, OSError) as exc:
        print(f"gkdv: {exc}", file=sys.stderr)
        return EXIT_FAIL


def main():
    sys.exit(run())
