"""Command-line front end: a small polynomial-expression parser, solver
dispatch, and JSON/CSV emission.

Commands: numbers, eval, derive, integrate, solve, verify, identities.
JSON is the canonical output (rationals as exact "p/q" strings, floats as
decimal strings at the declared precision); CSV is limited to
(x, y(x), residual(x)) sample grids.  Exit codes: 0 success, 1 input
error, 2 convergence failure, 3 violated theorem hypothesis.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from ._stable import DEFAULT_TOL
from .errors import (
    DegreeOverflow,
    ExpressionSyntaxError,
    StError,
    StInputError,
)
from .stnum import Params, golden_pair, st_number_range
from .stseries import DEFAULT_ORDER, Series, st_derive
from .stfun import PantographSpec, deformed_exp, pantograph, partial_theta_series
from .stquad import QInterval, st_integral
from . import identities as identity_suite
from .stsolve import (
    LinearProblem,
    SolutionReport,
    bernoulli_transform,
    residual,
    solve_integration_factor,
    solve_operator,
    solve_series_linear,
    solve_special_rhs,
)

SCHEMA_VERSION = 1


# -- expression parser --------------------------------------------------------

_DIGITS = set("0123456789")


def _tokenize(text: str):
    """Yield (kind, value, 1-based offset) tokens."""
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        start = i
        if ch in _DIGITS or (ch == "." and i + 1 < n and text[i + 1] in _DIGITS):
            j = i
            seen_dot = False
            while j < n and (text[j] in _DIGITS or (text[j] == "." and not seen_dot)):
                if text[j] == ".":
                    seen_dot = True
                j += 1
            tokens.append(("number", text[i:j], start + 1))
            i = j
        elif ch in "xX":
            tokens.append(("x", ch, start + 1))
            i += 1
        elif ch in "+-*/^()":
            kinds = {"+": "plus", "-": "minus", "*": "star", "/": "slash",
                     "^": "caret", "(": "lparen", ")": "rparen"}
            tokens.append((kinds[ch], ch, start + 1))
            i += 1
        else:
            raise ExpressionSyntaxError(f"unexpected character {ch!r}", start + 1)
    tokens.append(("end", "", n + 1))
    return tokens


class _Parser:
    """Recursive descent over: expr := [sign] term ((+|-) term)*;
    term := factor ('*'? factor)*; factor := number ['/' number]
    | 'x' ['^' nat] | '(' expr ')'.  Values are {degree: Fraction} maps."""

    def __init__(self, text: str, max_degree: int):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.max_degree = max_degree

    def peek(self):
        return self.tokens[self.pos]

    def take(self, kind=None):
        tok = self.tokens[self.pos]
        if kind is not None and tok[0] != kind:
            raise ExpressionSyntaxError(f"expected {kind}, found {tok[1] or 'end'!r}", tok[2])
        self.pos += 1
        return tok

    def parse(self) -> dict[int, Fraction]:
        value = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ExpressionSyntaxError(f"unexpected {tok[1]!r}", tok[2])
        return value

    def expr(self):
        sign = 1
        if self.peek()[0] in ("plus", "minus"):
            sign = -1 if self.take()[0] == "minus" else 1
        acc = _poly_scale(self.term(), sign)
        while self.peek()[0] in ("plus", "minus"):
            op = self.take()[0]
            rhs = self.term()
            acc = _poly_add(acc, _poly_scale(rhs, -1 if op == "minus" else 1))
        return acc

    def term(self):
        acc = self.factor()
        while True:
            kind = self.peek()[0]
            if kind == "star":
                self.take()
                acc = self._mul(acc, self.factor())
            elif kind in ("number", "x", "lparen"):
                acc = self._mul(acc, self.factor())
            else:
                return acc

    def _mul(self, a, b):
        out = {}
        for i, ca in a.items():
            for j, cb in b.items():
                d = i + j
                if d > self.max_degree:
                    if ca * cb != 0:
                        raise DegreeOverflow(
                            f"degree {d} exceeds the configured order {self.max_degree}")
                    continue
                out[d] = out.get(d, Fraction(0)) + ca * cb
        return out

    def factor(self):
        tok = self.peek()
        if tok[0] == "number":
            self.take()
            value = Fraction(tok[1])
            if self.peek()[0] == "slash":
                self.take()
                den_tok = self.take("number")
                den = Fraction(den_tok[1])
                if den == 0:
                    raise ExpressionSyntaxError("division by zero", den_tok[2])
                value /= den
            return {0: value}
        if tok[0] == "x":
            self.take()
            degree = 1
            if self.peek()[0] == "caret":
                self.take()
                exp_tok = self.peek()
                if exp_tok[0] != "number" or "." in exp_tok[1]:
                    raise ExpressionSyntaxError(
                        "expected a nonnegative integer exponent", exp_tok[2])
                self.take()
                degree = int(exp_tok[1])
            if degree > self.max_degree:
                raise DegreeOverflow(
                    f"degree {degree} exceeds the configured order {self.max_degree}")
            return {degree: Fraction(1)}
        if tok[0] == "lparen":
            self.take()
            inner = self.expr()
            self.take("rparen")
            return inner
        raise ExpressionSyntaxError(f"expected a term, found {tok[1] or 'end'!r}", tok[2])


def _poly_add(a, b):
    out = dict(a)
    for d, c in b.items():
        out[d] = out.get(d, Fraction(0)) + c
    return out


def _poly_scale(a, s):
    return {d: c * s for d, c in a.items()}


def parse_expression(text: str, params: Params, max_degree: int = DEFAULT_ORDER) -> Series:
    """Parse a polynomial expression ('1 + 2x - 3/4*x^2') into a Series."""
    poly = _Parser(text, max_degree).parse()
    top = max(poly) if poly else 0
    coeffs = [poly.get(d, Fraction(0)) for d in range(top + 1)]
    return Series(params, coeffs)


def format_series(series: Series) -> str:
    """Canonical printable form; parse_expression round-trips it exactly
    in the rational backend."""
    parts = []
    for d, c in enumerate(series.coeffs):
        if c == 0:
            continue
        mag = series.params.to_str(abs(c))
        if d == 0:
            body = mag
        else:
            xpow = "x" if d == 1 else f"x^{d}"
            body = xpow if abs(c) == 1 else f"{mag}*{xpow}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    if not parts:
        return "0"
    first_sign, first_body = parts[0]
    out = ("-" if first_sign == "-" else "") + first_body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# -- result documents ---------------------------------------------------------


def _params_block(p: Params) -> dict:
    return {"s": p.to_str(p.s), "t": p.to_str(p.t), "phi": p.to_str(p.phi),
            "phi_prime": p.to_str(p.phi_prime), "q": p.to_str(p.q),
            "backend": p.backend, "precision": p.precision}


def _coeff_strings(series: Series) -> list[str]:
    return [series.params.to_str(c) for c in series.coeffs]


def result_document(command: str, input_echo: dict, params: Params | None = None,
                    **blocks) -> dict:
    doc = {"schema": SCHEMA_VERSION, "command": command, "input": input_echo}
    if params is not None:
        doc["params"] = _params_block(params)
    doc.update({k: v for k, v in blocks.items() if v is not None})
    return doc


def _emit(doc: dict, args) -> None:
    if args.format == "csv":
        lines = _to_csv(doc)
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps(doc, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _to_csv(doc: dict) -> list[str]:
    if "identities" in doc:
        lines = ["name,defect,tolerance,pass"]
        for row in doc["identities"]:
            lines.append(f"{row['name']},{row['defect']},{row['tolerance']},{row['pass']}")
        return lines
    if "values" in doc and doc.get("command") == "numbers":
        lines = ["n,value"]
        lines.extend(f"{i},{v}" for i, v in enumerate(doc["values"]))
        return lines
    grid = doc.get("grid")
    if grid is None:
        raise StInputError("csv output needs a sample grid; pass --points")
    lines = ["x,y,residual"]
    for row in grid:
        lines.append(",".join(str(c) for c in row))
    return lines


# -- command implementations ---------------------------------------------------


def _build_params(args) -> Params:
    return golden_pair(args.s, args.t, backend=args.backend, precision=args.precision)


def _cmd_numbers(args) -> dict:
    p = _build_params(args)
    values = st_number_range(p, args.upto)
    echo = {"s": args.s, "t": args.t, "upto": args.upto}
    return result_document("numbers", echo, p, values=[p.to_str(v) for v in values])


def _eval_grid(series: Series, points, problem=None) -> list:
    p = series.params
    grid = []
    for x in points:
        xv = p.wrap(x)
        row = [p.to_str(xv), p.to_str(series.eval(xv))]
        if problem is not None:
            info = residual(problem, series, sample_points=[xv])
            row.append(p.to_str(info.points[0][1]))
        else:
            row.append("")
        grid.append(row)
    return grid


def _parse_points(text: str | None) -> list[str]:
    if not text:
        return []
    return [chunk.strip() for chunk in text.split(",") if chunk.strip()]


def _cmd_eval(args) -> dict:
    p = _build_params(args)
    if args.fn == "polynomial":
        series = parse_expression(args.expr, p, args.order)
    elif args.fn == "exp":
        series = deformed_exp(p, p.wrap(args.u), args.order)
    elif args.fn == "pantograph":
        series = pantograph(p, PantographSpec(args.a, args.b, args.u), args.order)
    elif args.fn == "theta":
        series = Series(p, partial_theta_series(p.wrap(args.y), args.order))
    else:
        raise StInputError(f"unknown function {args.fn!r}")
    points = _parse_points(args.at)
    echo = {"s": args.s, "t": args.t, "fn": args.fn, "expr": args.expr,
            "order": args.order, "at": points}
    return result_document("eval", echo, p,
                           solution={"coeffs": _coeff_strings(series),
                                     "closed_form": None,
                                     "text": format_series(series)},
                           grid=_eval_grid(series, points) if points else None)


def _cmd_derive(args) -> dict:
    p = _build_params(args)
    series = st_derive(parse_expression(args.expr, p, args.order))
    points = _parse_points(args.at)
    echo = {"s": args.s, "t": args.t, "expr": args.expr, "order": args.order}
    return result_document("derive", echo, p,
                           solution={"coeffs": _coeff_strings(series),
                                     "closed_form": None,
                                     "text": format_series(series)},
                           grid=_eval_grid(series, points) if points else None)


def _cmd_integrate(args) -> dict:
    p = _build_params(args)
    series = parse_expression(args.expr, p, args.order)
    interval = QInterval(p.wrap(args.frm), p.wrap(args.to), p)
    value = st_integral(series, interval, tol=args.tol)
    echo = {"s": args.s, "t": args.t, "expr": args.expr,
            "from": args.frm, "to": args.to, "tol": args.tol}
    return result_document("integrate", echo, p, value=p.to_str(value),
                           value_decimal=repr(float(value)),
                           diagnostics={"converged": True})


def _solve_problem(args, p: Params) -> tuple[LinearProblem, SolutionReport]:
    spec = PantographSpec(p.wrap(args.a), p.wrap(args.b), p.wrap(args.u))
    beta = parse_expression(args.beta, p, args.order) if args.beta else Series.zero(p)
    if args.family == "series-linear":
        alpha = parse_expression(args.alpha, p, args.order)
        if alpha.order > 0 and any(c != 0 for c in alpha.coeffs[1:]):
            raise StInputError("series-linear needs a scalar alpha")
        prob = LinearProblem.series_linear(p, spec, alpha.coeffs[0], beta, p.wrap(args.y0))
        return prob, solve_series_linear(prob, args.order)
    if args.family == "integration-factor":
        alpha = parse_expression(args.alpha, p, args.order)
        prob = LinearProblem.integration_factor(
            p, spec, alpha, beta, initial=p.wrap(args.y0), eta=p.wrap(args.eta),
            delay_side=args.delay_side)
        points = [p.wrap(x) for x in _parse_points(args.points)]
        return prob, solve_integration_factor(prob, args.order, points=points,
                                              tol=args.tol)
    if args.family == "special-rhs":
        rep = solve_special_rhs(p, spec, p.wrap(args.beta_amplitude), p.wrap(args.y0),
                                args.order)
        from .stseries import scale as _scale
        e = pantograph(p, spec, args.order)
        forcing = (_scale(e, p.phi) * spec.a + _scale(e, p.phi * spec.u) * spec.b) \
            * p.wrap(args.beta_amplitude)
        prob = LinearProblem.series_linear(p, spec, p.phi_prime, forcing, p.wrap(args.y0))
        return prob, rep
    if args.family == "operator":
        rep = solve_operator(p, spec, p.wrap(args.alpha_coef), p.wrap(args.beta_coef),
                             p.wrap(args.gamma), p.wrap(args.delta), p.wrap(args.c),
                             args.order)
        prob = LinearProblem.operator_form(p, spec, p.wrap(args.alpha_coef),
                                           p.wrap(args.beta_coef), p.wrap(args.gamma),
                                           p.wrap(args.delta), p.wrap(args.c))
        return prob, rep
    if args.family == "bernoulli":
        alpha = parse_expression(args.alpha, p, args.order)
        prob = LinearProblem.bernoulli(p, spec, alpha, beta, args.n,
                                       delay_side=args.delay_side)
        z_prob = bernoulli_transform(prob)
        z_prob.initial = p.wrap(args.y0)
        rep = solve_integration_factor(z_prob, args.order)
        rep.diagnostics["transformed_family"] = z_prob.family
        rep.diagnostics["solution_is_z"] = True
        return z_prob, rep
    raise StInputError(f"unknown family {args.family!r}")


def _cmd_solve(args) -> dict:
    p = _build_params(args)
    prob, rep = _solve_problem(args, p)
    echo = {key: getattr(args, key, None)
            for key in ("family", "s", "t", "a", "b", "u", "alpha", "beta", "y0",
                        "eta", "delay_side", "order", "backend", "precision",
                        "alpha_coef", "beta_coef", "gamma", "delta", "c", "n",
                        "beta_amplitude", "tol")}
    points = _parse_points(args.points)
    blocks = {}
    if rep.solution is not None:
        blocks["solution"] = {"coeffs": _coeff_strings(rep.solution),
                              "closed_form": rep.closed_form,
                              "text": format_series(rep.solution)}
        res_points = residual(prob, rep.solution,
                              sample_points=[p.wrap(x) for x in points]).points
        blocks["residual"] = {
            "coeff_max": p.to_str(rep.residual_coeff_max),
            "points": [[p.to_str(x), p.to_str(r)] for x, r in res_points]}
        if points:
            blocks["grid"] = _eval_grid(rep.solution, points, prob)
    else:
        blocks["residual"] = {
            "coeff_max": None,
            "points": [[p.to_str(x), p.to_str(r)] for x, r in rep.residual_points]}
        blocks["values"] = [[p.to_str(x), p.to_str(v)]
                            for x, v in rep.diagnostics.get("values", [])]
    diags = {"order": rep.order, "backend": p.backend}
    for k, v in rep.diagnostics.items():
        if isinstance(v, (str, int, bool)):
            diags[k] = v
        elif isinstance(v, Fraction):
            diags[k] = str(v)
    blocks["diagnostics"] = diags
    return result_document("solve", echo, p, **blocks)


_SOLVE_DEFAULTS = {
    "family": None, "s": None, "t": None, "a": "0", "b": "1", "u": "1",
    "alpha": "1", "beta": "0", "y0": "0", "eta": "0",
    "delay_side": "phi-prime-delay", "points": None, "beta_amplitude": "0",
    "alpha_coef": "1", "beta_coef": "1", "gamma": "0", "delta": "0", "c": "0",
    "n": 2, "order": DEFAULT_ORDER, "backend": None, "precision": None,
    "tol": DEFAULT_TOL,
}


def _cmd_verify(args) -> dict:
    with open(args.doc) as fh:
        doc = json.load(fh)
    if doc.get("command") != "solve":
        raise StInputError("verify expects a solve result document")
    echo = doc["input"]
    fields = dict(_SOLVE_DEFAULTS)
    fields.update({k: v for k, v in echo.items() if v is not None})
    ns = argparse.Namespace(**fields)
    p = golden_pair(ns.s, ns.t, backend=ns.backend, precision=ns.precision)
    prob, _ = _solve_problem(ns, p)
    coeffs = doc["solution"]["coeffs"]
    y = Series(p, [p.wrap(c) for c in coeffs])
    point_strs = [row[0] for row in doc.get("residual", {}).get("points", [])]
    info = residual(prob, y, sample_points=[p.wrap(x) for x in point_strs])
    new_residual = {"coeff_max": p.to_str(info.coeff_max),
                    "points": [[p.to_str(x), p.to_str(r)] for x, r in info.points]}
    matches = new_residual == doc.get("residual")
    return result_document("verify", {"doc": args.doc}, p,
                           residual=new_residual, matches_document=matches)


def _cmd_identities(args) -> dict:
    results = identity_suite.run_all()
    rows = [{"name": r.name, "defect": r.defect, "tolerance": r.tolerance,
             "pass": r.passed} for r in results]
    doc = result_document("identities", {}, None, identities=rows,
                          all_pass=all(r.passed for r in results))
    if not doc["all_pass"]:
        doc["exit_hint"] = "at least one identity failed"
    return doc


# -- argument plumbing ----------------------------------------------------------


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise StInputError(message)


def _add_common(sub):
    sub.add_argument("--s", required=True)
    sub.add_argument("--t", required=True)
    sub.add_argument("--backend", choices=["rational", "float"], default=None)
    sub.add_argument("--precision", type=int, default=None)
    sub.add_argument("--order", type=int, default=DEFAULT_ORDER)
    sub.add_argument("--tol", type=float, default=DEFAULT_TOL)
    _add_output(sub)


def _add_output(sub):
    sub.add_argument("--format", choices=["json", "csv"], default="json")
    sub.add_argument("--out", default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="stpanto",
                      description="Calculus on generalized Fibonacci polynomials: "
                                  "series, special functions, Jackson integration, "
                                  "and proportional difference equation solvers.")
    subs = parser.add_subparsers(dest="command", required=True)

    p_num = subs.add_parser("numbers", help="print the sequence {0}..{upto}")
    _add_common(p_num)
    p_num.add_argument("--upto", type=int, required=True)

    p_eval = subs.add_parser("eval", help="coefficients/values of an expression "
                                          "or a named special function")
    _add_common(p_eval)
    p_eval.add_argument("--fn", choices=["polynomial", "exp", "pantograph", "theta"],
                        default="polynomial")
    p_eval.add_argument("--expr", default="0")
    p_eval.add_argument("--a", default="0")
    p_eval.add_argument("--b", default="1")
    p_eval.add_argument("--u", default="1")
    p_eval.add_argument("--y", default="1/2")
    p_eval.add_argument("--at", default=None, help="comma-separated points")

    p_der = subs.add_parser("derive", help="the divided-difference derivative "
                                           "of a polynomial expression")
    _add_common(p_der)
    p_der.add_argument("--expr", required=True)
    p_der.add_argument("--at", default=None)

    p_int = subs.add_parser("integrate", help="Jackson-type integral of an "
                                              "expression over [a, b]_q")
    _add_common(p_int)
    p_int.add_argument("--expr", required=True)
    p_int.add_argument("--from", dest="frm", required=True)
    p_int.add_argument("--to", required=True)

    p_solve = subs.add_parser("solve", help="solve a proportional difference equation")
    _add_common(p_solve)
    p_solve.add_argument("--family", required=True,
                         choices=["series-linear", "integration-factor",
                                  "special-rhs", "operator", "bernoulli"])
    p_solve.add_argument("--a", default="0")
    p_solve.add_argument("--b", default="1")
    p_solve.add_argument("--u", default="1")
    p_solve.add_argument("--alpha", default="1")
    p_solve.add_argument("--beta", default="0")
    p_solve.add_argument("--y0", default="0")
    p_solve.add_argument("--eta", default="0")
    p_solve.add_argument("--delay-side", dest="delay_side",
                         choices=["phi-prime-delay", "phi-delay"],
                         default="phi-prime-delay")
    p_solve.add_argument("--points", default=None)
    p_solve.add_argument("--beta-amplitude", dest="beta_amplitude", default="0")
    p_solve.add_argument("--alpha-coef", dest="alpha_coef", default="1")
    p_solve.add_argument("--beta-coef", dest="beta_coef", default="1")
    p_solve.add_argument("--gamma", default="0")
    p_solve.add_argument("--delta", default="0")
    p_solve.add_argument("--c", default="0")
    p_solve.add_argument("--n", type=int, default=2)

    p_ver = subs.add_parser("verify", help="recompute residuals for a stored "
                                           "solve document")
    p_ver.add_argument("--doc", required=True)
    _add_output(p_ver)

    p_id = subs.add_parser("identities", help="run the identity suite")
    _add_output(p_id)

    return parser


COMMANDS = {
    "numbers": _cmd_numbers,
    "eval": _cmd_eval,
    "derive": _cmd_derive,
    "integrate": _cmd_integrate,
    "solve": _cmd_solve,
    "verify": _cmd_verify,
    "identities": _cmd_identities,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        doc = COMMANDS[args.command](args)
        _emit(doc, args)
    except StError as err:
        sys.stderr.write(f"error: {err}\n")
        return err.exit_code
    if doc.get("command") == "identities" and not doc.get("all_pass", True):
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
