"""Command-line interface: ``cosetforge <subcommand> [flags]``.

Exit codes: 0 success, 1 precondition violation, 2 cap or budget exceeded,
64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
from typing import Sequence

from . import counting, verify
from .abelian import GroupSpec
from .cosetring import SignedCosetCombination, extract, minimal_representation
from .errors import CapExceeded, ExtractionFailure, PreconditionError
from .partition import Partition
from .spectral import (SURVEY_COLUMNS, CoefficientVector, InjectionTable, a_norm,
                       default_witnesses, distortion_witness, idempotent_survey, survey_csv)
from .sunit import DEFAULT_BUDGET, PrimeSet, count_vs_evertse, power_sums, zero_sums

EXIT_OK, EXIT_PRECONDITION, EXIT_CAP, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


# output -----------------------------------------------------------------------

def _jsonable(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return obj
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return str(obj)


def _text(obj) -> str:
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, dict):
        if "value" in obj and len(obj) <= 2 and not isinstance(obj["value"], (dict, list)):
            return _text(obj["value"])
        return "\n".join(f"{k}: {_text(v) if not isinstance(v, (dict, list)) else json.dumps(_jsonable(v), sort_keys=True)}"
                         for k, v in obj.items())
    if isinstance(obj, (list, tuple)):
        return "\n".join(_text(v) for v in obj)
    return str(obj)


def _csv(obj) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if isinstance(obj, dict) and "rows" in obj and obj["rows"] and isinstance(obj["rows"][0], dict):
        cols = list(obj["rows"][0])
        w.writerow(cols)
        for row in obj["rows"]:
            w.writerow([row[c] for c in cols])
    elif isinstance(obj, dict):
        w.writerow(["key", "value"])
        for k, v in obj.items():
            w.writerow([k, v if not isinstance(v, (dict, list)) else json.dumps(_jsonable(v), sort_keys=True)])
    else:
        w.writerow(["value"])
        w.writerow([_text(obj)])
    return buf.getvalue()


def emit(obj, fmt: str, out=None, text: str | None = None) -> None:
    if fmt == "json":
        s = json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"
    elif fmt == "csv":
        s = _csv(obj)
    else:
        s = (text if text is not None else _text(obj)).rstrip("\n") + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(s)
    else:
        sys.stdout.write(s)


# argument helpers ----------------------------------------------------------------

def _partition(text: str) -> Partition:
    try:
        return Partition.parse(text)
    except ValueError as e:
        raise PreconditionError(str(e)) from None


def _group(text: str) -> GroupSpec:
    if os.path.exists(text):
        with open(text, encoding="utf-8") as fh:
            text = fh.read()
    try:
        return GroupSpec.from_json(json.loads(text))
    except (ValueError, KeyError, TypeError) as e:
        raise PreconditionError(f"bad group description: {e}") from None


def _load_json(path: str):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _subset(G: GroupSpec, text: str) -> list:
    """Comma separated element indices, or a JSON list of coordinate lists."""
    text = text.strip()
    if text.startswith("["):
        return [G.check(x) for x in json.loads(text)]
    elems = list(G.elements())
    out = []
    for tok in filter(None, (t.strip() for t in text.split(","))):
        i = int(tok)
        if not 0 <= i < len(elems):
            raise PreconditionError(f"element index {i} out of range")
        out.append(elems[i])
    return out


# subcommands -----------------------------------------------------------------------

def cmd_count(a):
    alpha = _partition(a.type)
    v = counting.count_subgroups(a.p, alpha, a.r)
    return {"exact": v, "constants": {"p": a.p, "type": list(alpha.parts), "r": a.r}}, str(v)


def cmd_cosets(a):
    alpha = _partition(a.type)
    v = counting.count_cosets(a.p, alpha, a.r)
    return {"exact": v, "constants": {"p": a.p, "type": list(alpha.parts), "r": a.r}}, str(v)


def cmd_bounds(a):
    p, N, A = a.p, a.N, a.a
    lower_c, upper_c = counting.coset_count_bounds(p, N, A, a.r, b1=a.b1,
                                                   slack_coeff=a.slack, R=a.R)
    r = upper_c.constants["r"]
    rect = Partition((A,) * N)
    out = {"exact": counting.count_subgroups(p, rect, r),
           "upper": counting.subgroup_count_upper_bound(p, N, A, r).text()}
    consts = {"p": p, "N": N, "a": A, "r": r, "b1": a.b1 if a.b1 is not None else r,
              "slack_coeff": a.slack}
    if A >= 2:
        out["lower"] = counting.subgroup_count_lower_bound(
            p, N, A, r, a.b1 if a.b1 is not None else r).text()
    out["cosets"] = {"exact": counting.count_cosets(p, rect, r),
                     "upper": upper_c.text(), "lower": lower_c.text()}
    out["constants"] = consts
    return out, None


def _bound(b: counting.BoundValue):
    return b.to_json(), b.text()


def cmd_lambda(a):
    return _bound(counting.lambda_constant(a.L, a.p))


def cmd_gs(a):
    return _bound(counting.green_sanders_L(a.C_norm, a.D))


def cmd_evertse(a):
    return _bound(counting.evertse_bound(a.n, a.C1, a.C2))


def cmd_phi(a):
    return _bound(counting.distortion_floor(a.n, a.mode, a.c))


def cmd_represent(a):
    s = counting.GroupClassSpec.parse(a.source)
    t = counting.GroupClassSpec.parse(a.target)
    v = counting.representable(s, t)
    return {"value": v, "source": str(s), "target": str(t)}, "true" if v else "false"


def cmd_extract(a):
    comb = SignedCosetCombination.from_json(_load_json(a.input))
    try:
        res = extract(comb, a.cap)
    except ExtractionFailure as e:
        return {"error": "extraction failure", "detail": str(e),
                "combination": comb.to_json()}, None
    return {"coset": res.coset.to_json(), "ledger": res.ledger()}, None


def cmd_minrep(a):
    G = _group(a.group)
    U = _subset(G, a.subset)
    rep = minimal_representation(G, U, a.max_l, cap=a.cap or 2 ** 5)
    if rep is None:
        return {"length": None, "max_l": a.max_l}, "none"
    n = rep.l1 + rep.l2
    return {"length": n, "representation": rep.to_json()}, str(n)


def cmd_norm(a):
    if a.input:
        v = CoefficientVector.from_json(_load_json(a.input))
    else:
        G = _group(a.group)
        v = CoefficientVector.indicator(G, _subset(G, a.subset or ""))
    val = a_norm(v, a.cap)
    return {"norm": val}, repr(val)


def cmd_survey(a):
    G = _group(a.group)
    rows = idempotent_survey(G, a.norm_cap, a.max_l, cap=a.max_order)
    text = survey_csv(rows)
    if a.format == "csv" or a.out:
        if a.out:
            with open(a.out, "w", encoding="utf-8") as fh:
                fh.write(text)
            return {"rows": len(rows), "out": a.out}, f"{len(rows)} rows written to {a.out}"
        return None, text
    return {"columns": list(SURVEY_COLUMNS),
            "rows": [{"subset_bitmask": r.subset_bitmask, "norm": r.norm,
                      "min_coset_length": r.min_coset_length,
                      "distinct_subgroups": r.distinct_subgroups} for r in rows]}, text


def cmd_witness(a):
    sigma = InjectionTable.from_json(_load_json(a.sigma))
    if a.witnesses:
        ws = [CoefficientVector.from_json(w) for w in _load_json(a.witnesses)]
    else:
        ws = default_witnesses(sigma.source, a.cap)
    rep = distortion_witness(sigma, ws, a.cap)
    return rep.to_json(), repr(rep.distortion_lower_bound)


def cmd_sunit(a):
    M = PrimeSet.parse(a.primes)
    if a.equation == "zero":
        en = zero_sums(M, a.l, a.exp_bound, a.budget)
    elif a.equation == "power":
        if a.p is None or a.R is None:
            raise PreconditionError("sunit power needs --p and --R")
        en = power_sums(M, a.l, a.p, a.R, a.exp_bound, a.budget)
    else:
        rep = count_vs_evertse(M, a.l, a.exp_bound, a.C1, a.C2, a.budget)
        return rep, None
    obj = en.to_json()
    text = "\n".join(" ".join(str(x) for x in t.entries) for t in en.tuples)
    if a.out:
        emit(obj, "json", a.out)
        return {"count": len(en.tuples), "out": a.out}, str(len(en.tuples))
    return obj, text


def cmd_verify(a):
    results = verify.run_all(a.max_order, a.samples, a.seed)
    text = verify.report(results, a.max_order, a.samples, a.seed)
    obj = {"parameters": {"max_order": a.max_order, "samples": a.samples, "seed": a.seed},
           "checks": [r.to_json() for r in results],
           "passed": all(r.passed for r in results)}
    return obj, text, (EXIT_OK if obj["passed"] else EXIT_PRECONDITION)


# parser ----------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    g = p.add_argument_group("run configuration")
    g.add_argument("--seed", type=int, default=d(verify.DEFAULT_SEED))
    g.add_argument("--format", choices=("json", "csv", "text"), default=d("json"))
    g.add_argument("--threads", type=int, default=d(1),
                   help="accepted for compatibility; work is single threaded")
    g.add_argument("--cap", type=int, default=d(None), help="enumeration cap override")
    g.add_argument("--budget", type=int, default=d(DEFAULT_BUDGET))
    g.add_argument("--D", type=float, default=d(1.0))
    g.add_argument("--C1", type=float, default=d(1.0))
    g.add_argument("--C2", type=float, default=d(1.0))
    g.add_argument("--c", type=float, default=d(1.0))


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="cosetforge", description=__doc__.splitlines()[0])
    _common(top, suppress=False)
    sub = top.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        _common(sp, suppress=True)
        sp.set_defaults(func=func)
        return sp

    for name, func, what in (("count", cmd_count, "subgroups"), ("cosets", cmd_cosets, "cosets")):
        sp = add(name, func, f"exact number of {what} of order p^r")
        sp.add_argument("--p", type=int, required=True)
        sp.add_argument("--type", required=True, help="comma separated partition, e.g. 2,1")
        sp.add_argument("--r", type=int, required=True)

    sp = add("bounds", cmd_bounds, "subgroup and coset count bounds")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--r", type=int)
    sp.add_argument("--R", type=int)
    sp.add_argument("--b1", type=int)
    sp.add_argument("--slack", type=int, default=2, help="linear slack coefficient")

    sp = add("lambda", cmd_lambda, "loss exponent L + log_p L")
    sp.add_argument("--L", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)

    sp = add("gs-bound", cmd_gs, "exp(exp(D C^4))")
    sp.add_argument("--C-norm", dest="C_norm", type=float, required=True)

    sp = add("evertse-bound", cmd_evertse, "C1 exp(C2 n^3 ln n)")
    sp.add_argument("--n", type=int, required=True)

    sp = add("phi", cmd_phi, "distortion floor")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--mode", choices=sorted(counting.PHI_THRESHOLDS), default="p_group")

    sp = add("represent", cmd_represent, "local representability predicate")
    sp.add_argument("--source", required=True)
    sp.add_argument("--target", required=True)

    sp = add("extract", cmd_extract, "large coset inside a signed coset combination")
    sp.add_argument("--input", "--in", dest="input", required=True)

    sp = add("minrep", cmd_minrep, "shortest signed coset representation")
    sp.add_argument("--group", required=True)
    sp.add_argument("--subset", required=True)
    sp.add_argument("--max-l", dest="max_l", type=int, default=4)

    sp = add("norm", cmd_norm, "Fourier algebra norm")
    sp.add_argument("--group")
    sp.add_argument("--subset")
    sp.add_argument("--input", "--in", dest="input")

    sp = add("survey", cmd_survey, "norms and coset lengths of all subsets")
    sp.add_argument("--group", required=True)
    sp.add_argument("--max-order", dest="max_order", type=int, default=16)
    sp.add_argument("--norm-cap", dest="norm_cap", type=float, default=float("inf"))
    sp.add_argument("--max-l", dest="max_l", type=int, default=4)
    sp.add_argument("--out")

    sp = add("witness", cmd_witness, "distortion lower bound from witnesses")
    sp.add_argument("--sigma", required=True)
    sp.add_argument("--witnesses")

    sp = add("sunit", cmd_sunit, "bounded-height S-unit solutions")
    sp.add_argument("equation", choices=("zero", "power", "evertse"))
    sp.add_argument("--primes", required=True)
    sp.add_argument("--l", type=int, required=True)
    sp.add_argument("--exp-bound", dest="exp_bound", type=int, required=True)
    sp.add_argument("--p", type=int)
    sp.add_argument("--R", type=int)
    sp.add_argument("--out")

    sp = add("verify", cmd_verify, "formula-versus-oracle pass/fail ledger")
    sp.add_argument("--max-order", dest="max_order", type=int, default=verify.GRID_ORDER)
    sp.add_argument("--samples", type=int, default=verify.DEFAULT_SAMPLES)
    sp.add_argument("--out")
    return top


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        sys.stderr.write(str(e) + "\n")
        return EXIT_USAGE
    random.seed(args.seed)
    if args.cap is not None:
        os.environ["COSETFORGE_CAP"] = str(args.cap)
    try:
        got = args.func(args)
    except PreconditionError as e:
        sys.stderr.write(f"precondition violated: {e}\n")
        return EXIT_PRECONDITION
    except CapExceeded as e:
        sys.stderr.write(f"cap exceeded: {e}\n")
        return EXIT_CAP
    code = EXIT_OK
    if len(got) == 3:
        obj, text, code = got
    else:
        obj, text = got
    if obj is None:
        sys.stdout.write(text)
        return code
    if isinstance(obj, dict) and obj.get("error") == "extraction failure":
        code = EXIT_PRECONDITION
    emit(obj, args.format, getattr(args, "out", None) if args.command == "verify" else None,
         text)
    return code


if __name__ == "__main__":
    sys.exit(main())
