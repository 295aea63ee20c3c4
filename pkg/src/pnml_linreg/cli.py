"""Command-line entry point: ``fit`` (score CSVs), ``fig1`` and ``fig2`` sweeps.

Exit codes: 0 success, 1 configuration error, 2 data error.

A ``--config`` file holds ``key=value`` lines (``#`` starts a comment); keys
are the long flag names with or without the leading dashes.  Flags given on
the command line override the file.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .errors import DataFormatError
from .experiments import ExperimentConfig, run_degree_sweep, run_reg_sweep, run_score

log = logging.getLogger("pnml_linreg")

EXIT_OK, EXIT_CONFIG, EXIT_DATA = 0, 1, 2

_COMMANDS = {"fit": "score", "fig1": "reg-sweep", "fig2": "degree-sweep"}


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _floats(s):
    try:
        return tuple(float(v) for v in str(s).split(",") if v.strip())
    except ValueError:
        raise ConfigError(f"expected comma-separated numbers, got {s!r}") from None


def _ints(s):
    try:
        return tuple(int(v) for v in str(s).split(",") if v.strip())
    except ValueError:
        raise ConfigError(f"expected comma-separated integers, got {s!r}") from None


def _grid(s):
    parts = str(s).split(":")
    if len(parts) != 3:
        raise ConfigError(f"grid must be lo:hi:count, got {s!r}")
    try:
        return float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ConfigError(f"grid must be lo:hi:count, got {s!r}") from None


def _int(s):
    try:
        return int(s)
    except ValueError:
        raise ConfigError(f"expected an integer, got {s!r}") from None


def _float(s):
    try:
        return float(s)
    except ValueError:
        raise ConfigError(f"expected a number, got {s!r}") from None


_CONVERT = {
    "n-train": ("n_train", _int),
    "degrees": ("degrees", _ints),
    "lambdas": ("lambdas", _floats),
    "sigma2": ("sigma2", _float),
    "seed": ("seed", _int),
    "grid": ("grid", _grid),
    "out-dir": ("out_dir", str),
    "train": ("train_path", str),
    "test": ("test_path", str),
    "coeffs": ("coeffs", _floats),
    "noise-std": ("noise_std", _float),
}


def read_config_file(path) -> dict:
    """Parse ``key=value`` lines into raw string settings."""
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as e:
        raise ConfigError(f"cannot read config file: {e}") from None
    for lineno, line in enumerate(lines, start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        key, value = (p.strip() for p in line.split("=", 1))
        key = key.lstrip("-").replace("_", "-")
        if key not in _CONVERT:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value
    return out


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="pnml-linreg", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "fit": "score a test CSV against a training CSV",
        "fig1": "regularization sweep (fixed degree, several lambdas)",
        "fig2": "degree sweep (several degrees, one lambda)",
    }
    for name, text in helps.items():
        s = sub.add_parser(name, help=text)
        s.add_argument("--config", help="key=value settings file")
        s.add_argument("--n-train", help="number of training points")
        s.add_argument("--degrees", help="comma-separated polynomial degrees")
        s.add_argument("--lambdas", help="comma-separated ridge regularizers")
        s.add_argument("--sigma2", help="noise variance (default 1.0)")
        s.add_argument("--seed", help="RNG seed")
        s.add_argument("--grid", help="test sweep lo:hi:count")
        s.add_argument("--out-dir", help="output directory")
        s.add_argument("--train", help="training CSV")
        s.add_argument("--test", help="test CSV (fit only)")
        s.add_argument("--coeffs", help="ascending label-polynomial coefficients")
        s.add_argument("--noise-std", help="label noise standard deviation")
        s.add_argument("-v", "--verbose", action="store_true")
    return p


def config_from_args(args) -> ExperimentConfig:
    raw = read_config_file(args.config) if args.config else {}
    for key in _CONVERT:
        value = getattr(args, key.replace("-", "_"))
        if value is not None:
            raw[key] = value
    fields = {}
    for key, value in raw.items():
        name, conv = _CONVERT[key]
        fields[name] = conv(value)
    experiment = _COMMANDS[args.command]
    if experiment != "score" and "train_path" in fields:
        fields["label_source"] = "file"
    if experiment == "score" and len(fields.get("lambdas", (0.0,))) != 1:
        raise ConfigError("fit takes a single --lambdas value")
    try:
        return ExperimentConfig.defaults(experiment, **fields)
    except ValueError as e:
        raise ConfigError(str(e)) from None


def _attach_negative_values(argv):
    """Rewrite ``--grid -1:1:5`` as ``--grid=-1:1:5`` so argparse keeps it a value."""
    out = list(argv)
    valued = {f"--{k}" for k in _CONVERT}
    i = 0
    while i < len(out) - 1:
        nxt = out[i + 1]
        if out[i] in valued and len(nxt) > 1 and nxt[0] == "-" and (nxt[1].isdigit() or nxt[1] == "."):
            out[i : i + 2] = [f"{out[i]}={nxt}"]
        i += 1
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    args = build_parser().parse_args(_attach_negative_values(argv))
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
    )
    try:
        cfg = config_from_args(args)
        if cfg.experiment == "score" and not (cfg.train_path and cfg.test_path):
            raise ConfigError("fit needs --train and --test")
    except ConfigError as e:
        print(f"pnml-linreg: config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if cfg.experiment == "score":
            path = run_score(cfg)
            log.info("wrote %s", path)
        else:
            run = run_reg_sweep if cfg.experiment == "reg-sweep" else run_degree_sweep
            res = run(cfg)
            for p in res.paths.values():
                log.info("wrote %s", p)
    except (DataFormatError, OSError, ValueError, ArithmeticError, RuntimeError) as e:
        print(f"pnml-linreg: data error: {e}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
