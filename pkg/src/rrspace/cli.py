"""Command-line front end: file formats, job dispatch and the benchmark sweep.

Files are line oriented with bracketed section headers. A curve file has
[field] (a line "p=<prime>"), [curve] (one "i j c" term per line) and
optionally [nodal] (lambda/chi/u/v/T_E lines; empty means "no nodes",
absent means "compute them"). A divisor file holds one block of
lambda/chi/u/v lines, optionally under [divisor+], [divisor-] or [divisor].
"""
from __future__ import annotations

import argparse
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .bipoly import BiPoly
from .divisor import Curve, NodalDivisor, SmoothDivisor, validate, validate_nodal
from .errors import AssumptionViolated, InvalidInput, RetriesExhausted, RRError
from .ff_linalg import check_prime
from .jacobian import Jacobian, jac_add
from .randomness import DEFAULT_RETRY_BUDGET, RngConfig
from .riemann_roch import (nodal_precompute, node_incidence_report, random_smooth_divisor,
                           riemann_roch_basis)
from .upoly import UPoly

EXIT_OK = 0
EXIT_RETRIES = 2
EXIT_INVALID = 3
EXIT_ASSUMPTION = 4
EXIT_CHECK_FALSE = 5

DEBUG_ENV = "RRSPACE_DEBUG_INTERMEDIATES"


class ParseError(InvalidInput):
    def __init__(self, path, line_no: int | None, message: str):
        where = f"{path}:{line_no}" if line_no is not None else str(path)
        super().__init__(f"{where}: {message}")


@dataclass
class JobSpec:
    command: str
    curve: Path | None = None
    dplus: Path | None = None
    dminus: Path | None = None
    base: Path | None = None
    p1: Path | None = None
    p2: Path | None = None
    seed: int = 0
    sample_set_size: int | None = None
    retry_budget: int = DEFAULT_RETRY_BUDGET
    extra_degree: int = 0
    out: Path | None = None
    degree: int | None = None
    degrees: list[int] | None = None

    def rng(self, offset: int = 0) -> RngConfig:
        return RngConfig(self.seed ^ offset, self.sample_set_size, self.retry_budget)


# parsing


def _sections(path: Path) -> dict[str, list[tuple[int, str]]]:
    """Section name -> list of (line number, stripped line); lines before any header go to ''."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(path, None, f"cannot read file ({exc.strerror})") from exc
    out: dict[str, list[tuple[int, str]]] = {}
    current = ""
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line.startswith("["):
            if not line.endswith("]"):
                raise ParseError(path, no, f"malformed section header {raw!r}")
            current = line[1:-1].strip()
            if current in out:
                raise ParseError(path, no, f"duplicate section [{current}]")
            out[current] = []
        elif line:
            out.setdefault(current, []).append((no, line))
    return out


def _key_values(path, lines, keys: Sequence[str]) -> dict[str, tuple[int, str]]:
    found: dict[str, tuple[int, str]] = {}
    for no, line in lines:
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or key not in keys:
            raise ParseError(path, no, f"expected one of {', '.join(k + '=' for k in keys)}")
        if key in found:
            raise ParseError(path, no, f"duplicate key {key}")
        found[key] = (no, value.strip())
    for key in keys:
        if key not in found:
            raise ParseError(path, None, f"missing {key}=")
    return found


def _upoly(path, entry: tuple[int, str], p: int) -> UPoly:
    no, text = entry
    try:
        return UPoly.from_text(text, p)
    except (InvalidInput, ValueError) as exc:
        raise ParseError(path, no, f"bad coefficient list {text!r}") from exc


def _int(path, entry: tuple[int, str]) -> int:
    no, text = entry
    try:
        return int(text)
    except ValueError as exc:
        raise ParseError(path, no, f"expected an integer, got {text!r}") from exc


def parse_divisor_block(path, lines, p: int) -> SmoothDivisor:
    kv = _key_values(path, lines, ("lambda", "chi", "u", "v"))
    return SmoothDivisor(_int(path, kv["lambda"]) % p, _upoly(path, kv["chi"], p),
                         _upoly(path, kv["u"], p), _upoly(path, kv["v"], p))


def parse_nodal_block(path, lines, p: int) -> NodalDivisor:
    if not lines:
        return NodalDivisor.empty(p)
    kv = _key_values(path, lines, ("lambda", "chi", "u", "v", "T_E"))
    return NodalDivisor(_int(path, kv["lambda"]) % p, _upoly(path, kv["chi"], p),
                        _upoly(path, kv["u"], p), _upoly(path, kv["v"], p), _upoly(path, kv["T_E"], p))


def parse_curve_file(path, rng: RngConfig | None = None) -> Curve:
    """Read and fully validate a curve; an absent [nodal] section is computed with ``rng``."""
    rng = rng or RngConfig()
    sec = _sections(path)
    if "field" not in sec or "curve" not in sec:
        raise ParseError(path, None, "a curve file needs [field] and [curve] sections")
    kv = _key_values(path, sec["field"], ("p",))
    p = _int(path, kv["p"])
    try:
        check_prime(p)
    except InvalidInput as exc:
        raise ParseError(path, kv["p"][0], str(exc)) from exc
    for no, line in sec["curve"]:
        try:
            BiPoly.from_text_lines([line], p)
        except InvalidInput as exc:
            raise ParseError(path, no, str(exc)) from exc
    q = BiPoly.from_text_lines((line for _, line in sec["curve"]), p)
    if "nodal" in sec:
        E = parse_nodal_block(path, sec["nodal"], p)
        try:
            C = Curve(q, E)
        except InvalidInput as exc:
            raise ParseError(path, None, f"curve: {exc}") from exc
        ok, why = validate_nodal(E, q)
        if not ok:
            raise ParseError(path, None, f"nodal data: {why}")
        if E.r == 0:
            found = nodal_precompute(q, rng)
            if found.r:
                raise ParseError(path, None, f"[nodal] is empty but the curve has {found.r} singular point(s)")
        return C
    try:
        return Curve(q, nodal_precompute(q, rng))
    except InvalidInput as exc:
        raise ParseError(path, None, f"curve: {exc}") from exc


def parse_divisor_file(path, C: Curve) -> SmoothDivisor:
    sec = _sections(path)
    blocks = [lines for lines in sec.values() if lines]
    if len(blocks) != 1:
        raise ParseError(path, None, "a divisor file holds exactly one lambda/chi/u/v block")
    D = parse_divisor_block(path, blocks[0], C.p)
    ok, why = validate(D, C)
    if not ok:
        raise ParseError(path, None, f"divisor: {why}")
    return D


# output


def divisor_text(D: SmoothDivisor, header: str = "divisor") -> str:
    return f"[{header}]\n" + "\n".join(D.lines()) + "\n"


def basis_text(result, rng: RngConfig, debug: bool) -> str:
    parts = [f"# rrspace basis {rng.describe()}", f"# dimension={result.dimension}", ""]
    if result.numerators:
        parts += ["[h]", result.h.to_text(), ""]
        for k, b in enumerate(result.numerators, 1):
            parts += [f"[numerator {k}]", b.to_text(), ""]
    if debug:
        for name in ("D_h", "D_res", "D_num"):
            if name in result.intermediates:
                parts.append(divisor_text(result.intermediates[name], name))
    return "\n".join(parts).rstrip("\n") + "\n"


def _write(job: JobSpec, text: str) -> None:
    if job.out is None:
        sys.stdout.write(text)
    else:
        Path(job.out).write_text(text, encoding="utf-8")


# commands


def run_basis(job: JobSpec) -> int:
    C = parse_curve_file(job.curve, job.rng(1))
    D_plus = parse_divisor_file(job.dplus, C)
    D_minus = parse_divisor_file(job.dminus, C) if job.dminus else SmoothDivisor.zero(C.p)
    rng = job.rng()
    result = riemann_roch_basis(C, D_plus, D_minus, rng, job.extra_degree)
    debug = os.environ.get(DEBUG_ENV, "") not in ("", "0")
    _write(job, basis_text(result, job.rng(), debug))
    if job.out is not None:
        print(f"dimension={result.dimension}")
    return EXIT_OK


def run_check(job: JobSpec) -> int:
    C = parse_curve_file(job.curve, job.rng(1))
    D_plus = parse_divisor_file(job.dplus, C)
    report = node_incidence_report(C, D_plus, job.rng(), job.extra_degree)
    print(f"nodes={C.r} kernel_size={report.kernel_size} common_incidences={report.common}")
    for k, count in enumerate(report.incidences, 1):
        print(f"h_{k}: meets {count} node(s) along a branch")
    if report.ok:
        print("assumptions hold")
        return EXIT_OK
    print("assumptions violated")
    return EXIT_CHECK_FALSE


def run_jacobian_add(job: JobSpec) -> int:
    C = parse_curve_file(job.curve, job.rng(1))
    O = parse_divisor_file(job.base, C)
    J = Jacobian(C, O)
    P1 = J.element(parse_divisor_file(job.p1, C))
    P2 = J.element(parse_divisor_file(job.p2, C))
    rng = job.rng()
    result = jac_add(P1, P2, rng)
    _write(job, f"# rrspace jacobian-add {rng.describe()}\n" + divisor_text(result.D))
    return EXIT_OK


def run_gen_divisor(job: JobSpec) -> int:
    C = parse_curve_file(job.curve, job.rng(1))
    if job.degree is None:
        raise InvalidInput("gen-divisor needs --degree")
    rng = job.rng()
    D = random_smooth_divisor(C, job.degree, rng)
    _write(job, f"# rrspace gen-divisor {rng.describe()} degree={D.degree}\n" + divisor_text(D, "divisor+"))
    return EXIT_OK


def bench_rows(C: Curve, degrees: Sequence[int], job: JobSpec) -> list[tuple[int, int, int]]:
    rows = []
    zero = SmoothDivisor.zero(C.p)
    for index, hint in enumerate(degrees):
        if hint < 1:
            raise InvalidInput("bench degrees must be at least 1")
        rng = job.rng(index)
        D = random_smooth_divisor(C, hint, rng)
        start = time.perf_counter()
        result = riemann_roch_basis(C, D, zero, rng, job.extra_degree)
        millis = round((time.perf_counter() - start) * 1000)
        rows.append((D.degree, result.dimension, millis))
    return rows


def run_bench(job: JobSpec) -> int:
    C = parse_curve_file(job.curve, job.rng(1))
    degrees = job.degrees or list(range(20, 201, 20))
    if any(d < 1 for d in degrees):
        raise InvalidInput("bench degrees must be at least 1")
    print(f"# {job.rng().describe()} genus={C.genus}", file=sys.stderr)
    rows = bench_rows(C, degrees, job)
    _write(job, "degree\tdim\tmillis\n" + "".join(f"{a}\t{b}\t{c}\n" for a, b, c in rows))
    return EXIT_OK


COMMANDS = {
    "basis": run_basis,
    "check": run_check,
    "jacobian-add": run_jacobian_add,
    "gen-divisor": run_gen_divisor,
    "bench": run_bench,
}


def _degree_list(text: str) -> list[int]:
    """Either "a,b,c" or "start:stop:step" (stop inclusive)."""
    try:
        if ":" in text:
            start, stop, step = (int(t) for t in text.split(":"))
            if step < 1:
                raise ValueError
            return list(range(start, stop + 1, step))
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad degree list {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rrspace", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--curve", type=Path, required=True)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--sample-set-size", type=int, default=None)
        p.add_argument("--retries", type=int, default=DEFAULT_RETRY_BUDGET)
        p.add_argument("--extra-degree", type=int, default=0)
        p.add_argument("--out", type=Path, default=None)

    p = sub.add_parser("basis", help="basis of L(D+ - D-)")
    common(p)
    p.add_argument("--dplus", type=Path, required=True)
    p.add_argument("--dminus", type=Path, default=None)
    p = sub.add_parser("check", help="verify the node assumption for D+")
    common(p)
    p.add_argument("--dplus", type=Path, required=True)
    p = sub.add_parser("jacobian-add", help="sum of two Jacobian classes D - g*O")
    common(p)
    p.add_argument("--base", type=Path, required=True, help="divisor file with the base point O")
    p.add_argument("--p1", type=Path, required=True)
    p.add_argument("--p2", type=Path, required=True)
    p = sub.add_parser("gen-divisor", help="random smooth divisor of about the given degree")
    common(p)
    p.add_argument("--degree", type=int, required=True)
    p = sub.add_parser("bench", help="timing sweep over divisor degrees, TSV output")
    common(p)
    p.add_argument("--degrees", type=_degree_list, default=None,
                   help='"a,b,c" or "start:stop:step"; default 20:200:20')
    return parser


def job_from_args(args: argparse.Namespace) -> JobSpec:
    if args.retries < 1:
        raise InvalidInput("--retries must be at least 1")
    if args.extra_degree < 0:
        raise InvalidInput("--extra-degree must be nonnegative")
    return JobSpec(
        command=args.command, curve=args.curve, dplus=getattr(args, "dplus", None),
        dminus=getattr(args, "dminus", None), base=getattr(args, "base", None),
        p1=getattr(args, "p1", None), p2=getattr(args, "p2", None), seed=args.seed,
        sample_set_size=args.sample_set_size, retry_budget=args.retries,
        extra_degree=args.extra_degree, out=args.out, degree=getattr(args, "degree", None),
        degrees=getattr(args, "degrees", None))


def run(job: JobSpec) -> int:
    """Dispatch a job and map the outcome to an exit code."""
    try:
        return COMMANDS[job.command](job)
    except AssumptionViolated as exc:
        print(f"error: assumption violated: {exc}", file=sys.stderr)
        print("hint: rerun with --extra-degree 1 or run the check command", file=sys.stderr)
        return EXIT_ASSUMPTION
    except InvalidInput as exc:
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except RetriesExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RETRIES
    except RRError as exc:
        print(f"error: computation failed: {exc}", file=sys.stderr)
        return EXIT_RETRIES


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    try:
        job = job_from_args(args)
    except InvalidInput as exc:
        print(f"error: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return run(job)


if __name__ == "__main__":
    sys.exit(main())
