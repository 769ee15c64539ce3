"""Python bindings for the rigidseq C++ library."""

import json

from ._rigidseq import (
    BudgetExceeded,
    DivisionByZero,
    Laurent,
    ParseError,
    Poly,
    PrecisionError,
    approximation_certificate,
    blowup_lower_bound,
    cf_quotients,
    cf_rational,
    convergents,
    cube_check,
    fibonacci_alpha,
    is_pv,
    mcdiarmid_bound,
    newton_slopes,
    poly_pair,
    pv_floors,
    pv_norm_exponents,
    pv_root,
    pv_traces,
    real_pv_table,
    recurrence_check,
    run_cli,
    tile_density,
)

__all__ = [
    "BudgetExceeded",
    "CommandError",
    "DivisionByZero",
    "Laurent",
    "ParseError",
    "Poly",
    "PrecisionError",
    "approximation_certificate",
    "blowup_lower_bound",
    "cf_quotients",
    "cf_rational",
    "convergents",
    "cube_check",
    "fibonacci_alpha",
    "is_pv",
    "mcdiarmid_bound",
    "newton_slopes",
    "poly_pair",
    "pv_floors",
    "pv_norm_exponents",
    "pv_root",
    "pv_traces",
    "real_pv_table",
    "recurrence_check",
    "rigidity",
    "run_cli",
    "tile_density",
]


class CommandError(RuntimeError):
    def __init__(self, code, payload):
        super().__init__(payload.get("error", {}).get("message", "command failed"))
        self.code = code
        self.payload = payload


def rigidity(example="geometric", p=2, depth=3, horizon=100, reverify=False, **extra):
    """Run the measure construction and return its JSON report as a dict."""
    args = ["rigidity", "--example", example, "--p", str(p), "--depth", str(depth), "--horizon", str(horizon)]
    for key, value in extra.items():
        args += ["--" + key.replace("_", "-"), str(value)]
    if reverify:
        args.append("--reverify")
    code, out, err = run_cli(args)
    if code != 0 and not out:
        raise CommandError(code, json.loads(err))
    return json.loads(out)
