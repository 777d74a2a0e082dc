"""Command-line driver.

    esavnls run|converge|conserve --config FILE [--key value ...]
    esavnls check-tableau [--stages S]
"""
from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from . import config as cfgmod
from .experiments import run_conservation, run_convergence, run_single
from .integrator import NonConvergence
from .tableau import check_symplectic, row_sum_defect, tableau_by_name

log = logging.getLogger("esavnls")


def _overrides(extra: list[str]) -> dict[str, str]:
    pairs = {}
    it = iter(extra)
    for token in it:
        if not token.startswith("--"):
            raise SystemExit(f"unexpected argument {token!r}; overrides are --key value")
        key = token[2:]
        if "=" in key:
            key, value = key.split("=", 1)
        else:
            try:
                value = next(it)
            except StopIteration:
                raise SystemExit(f"missing value for --{key}") from None
        pairs[key.replace("-", "_")] = value
    return pairs


def _load(args, extra) -> cfgmod.RunConfig:
    pairs = _overrides(extra)
    if args.config:
        return cfgmod.load(args.config, pairs)
    return cfgmod.parse_pairs(pairs)


def cmd_run(cfg, args):
    res = run_single(cfg)
    print(f"t_final,{res.state.time:.17g}")
    print(f"max_RM,{res.series.rel_mass.max():.3e}")
    print(f"max_RE,{res.series.rel_energy.max():.3e}")
    print(f"max_RH,{res.series.rel_hamiltonian.max():.3e}")
    if res.linf_error is not None:
        print(f"linf_error,{res.linf_error:.3e}")


def cmd_converge(cfg, args):
    table = run_convergence(cfg, jobs=args.jobs)
    print("tau,linf_error,rate")
    for tau, err, rate in table.rows():
        print(f"{float(tau):g},{float(err):.3e},{rate if rate in ('*', 'floor') else format(float(rate), '.2f')}")


def cmd_conserve(cfg, args):
    series = run_conservation(cfg)
    print("quantity,max_relative_error")
    print(f"RM,{series.rel_mass.max():.3e}")
    print(f"RE,{series.rel_energy.max():.3e}")
    print(f"RH,{series.rel_hamiltonian.max():.3e}")


def cmd_check_tableau(cfg, args):
    tab = tableau_by_name(cfg.stages)
    np.set_printoptions(precision=17)
    print(f"tableau,{tab.name}")
    print(f"stages,{tab.s}")
    for i in range(tab.s):
        print("A[%d]," % i + ",".join(f"{x:.17g}" for x in tab.A[i]))
    print("b," + ",".join(f"{x:.17g}" for x in tab.b))
    print("c," + ",".join(f"{x:.17g}" for x in tab.c))
    print(f"row_sum_defect,{row_sum_defect(tab):.3e}")
    print(f"weight_sum_defect,{abs(tab.b.sum() - 1):.3e}")
    sym = check_symplectic(tab)
    print(f"symplectic_defect,{sym:.3e}")
    print(f"symplectic,{'yes' if sym <= 1e-14 else 'no'}")


COMMANDS = {
    "run": cmd_run,
    "converge": cmd_converge,
    "conserve": cmd_conserve,
    "check-tableau": cmd_check_tableau,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="esavnls", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="key = value configuration file")
    parser.add_argument("--jobs", type=int, default=1, help="parallel ladder entries (converge)")
    parser.add_argument("-v", "--verbose", action="store_true")
    args, extra = parser.parse_known_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = _load(args, extra)
        COMMANDS[args.command](cfg, args)
    except NonConvergence as exc:
        log.error("%s (residual %.3e)", exc, exc.residual)
        return 2
    except (KeyError, ValueError, OSError) as exc:
        log.error("%s", exc)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
