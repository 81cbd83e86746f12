"""Command-line front end.

Exit codes: 0 success, 1 verification failed, 2 invalid input or a violated
precondition.
"""

from __future__ import annotations

import argparse
import random
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import __version__
from .covers import auxiliary_graph, biclique_colouring, bipartite_complement, complement_components
from .csp import DEFAULT_MAX_BRUTEFORCE
from .errors import CspError, FormatError
from .hardness import (
    cube_instance,
    exhaustive_family,
    grid_instance,
    hitting_lower_bound,
    unused_label_bound,
)
from .predicates import (
    classify,
    find_singleton_lcube,
    find_singleton_subpredicate,
    find_unused_label,
)
from .serialize import (
    certificate_to_dict,
    dumps,
    instance_to_dict,
    load_json,
    predicate_to_dict,
    read_instance,
    read_predicate,
    write_json,
)
from .sparsifier import EXHAUSTIVE_FAIL, check_epsilon, sparsify_csp, verify_sparsifier

COMMANDS = ("classify", "sparsify", "verify", "cover", "gen", "lowerbound")


@dataclass
class RunConfig:
    command: str
    inputs: list[str] = field(default_factory=list)
    output: Optional[str] = None
    epsilon: Optional[float] = None
    seed: int = 0
    max_bruteforce: int = DEFAULT_MAX_BRUTEFORCE
    jobs: int = 1
    verify: bool = False
    generator: Optional[str] = None
    predicate: Optional[str] = None
    size: Optional[int] = None
    ell: Optional[int] = None
    weights: str = "unit"
    family: str = "auto"

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise CspError(f"unknown command {self.command!r}")
        if self.command in ("sparsify", "verify"):
            if self.epsilon is None:
                raise CspError("--epsilon is required")
            check_epsilon(self.epsilon)
        if self.max_bruteforce < 1 or self.jobs < 1:
            raise CspError("--max-bruteforce and --jobs must be positive")


def _emit(obj, output: Optional[str]) -> None:
    if output:
        write_json(output, obj)
    else:
        sys.stdout.write(dumps(obj))


def _fmt_pair(pair) -> str:
    return "{" + ",".join(str(x) for x in pair) + "}"


def cmd_classify(cfg: RunConfig) -> int:
    pred = read_predicate(cfg.inputs[0])
    result: dict = {"predicate": predicate_to_dict(pred)}
    if pred.arity == 2:
        verdict = classify(pred)
        if verdict.sparsifiable:
            ell = biclique_colouring(pred).colour_count
            print(f"SPARSIFIABLE, ell={ell}")
            result.update(sparsifiable=True, ell=ell)
        else:
            w = verdict.witness
            print(f"NOT SPARSIFIABLE, witness B={_fmt_pair(w.left_pair)} C={_fmt_pair(w.right_pair)} "
                  f"cell=({w.supported_cell[0]},{w.supported_cell[1]})")
            result.update(sparsifiable=False, witness={"left_pair": list(w.left_pair),
                                                       "right_pair": list(w.right_pair),
                                                       "supported_cell": list(w.supported_cell)})
    else:
        cubes = {}
        for ell in range(2, pred.arity + 1):
            cube = find_singleton_lcube(pred, ell)
            if cube is not None:
                cubes[ell] = cube
        unused = find_unused_label(pred) if pred.support and pred.is_uniform else None
        if cubes:
            ell = max(cubes)
            print(f"NOT SPARSIFIABLE, singleton {ell}-cube on positions {list(cubes[ell].positions)}")
        else:
            print("UNDECIDED, no singleton cube found")
        result.update(singleton_cubes=sorted(cubes), unused_label=unused)
    if cfg.output:
        write_json(cfg.output, result)
    return 0


def cmd_sparsify(cfg: RunConfig) -> int:
    inst, _ = read_instance(cfg.inputs[0])
    sparse, report = sparsify_csp(inst, cfg.epsilon, cfg.seed, cfg.max_bruteforce)
    status = 0 if report.verified != EXHAUSTIVE_FAIL else 1
    line = (f"kept {len(report.retained)} of {len(inst.constraints)} constraints, "
            f"{report.verified} after {report.oversampling_rounds} round(s)")
    if cfg.verify:
        check = verify_sparsifier(inst, sparse, cfg.epsilon, cfg.max_bruteforce, cfg.jobs)
        line += ", assignment check " + ("passed" if check.passed else f"FAILED at {list(check.witness)}")
        if not check.passed:
            status = 1
    if cfg.output:
        write_json(cfg.output, instance_to_dict(sparse, report))
    else:
        sys.stdout.write(dumps(instance_to_dict(sparse, report)))
    print(line, file=sys.stdout if cfg.output else sys.stderr)
    return status


def cmd_verify(cfg: RunConfig) -> int:
    if len(cfg.inputs) != 2:
        raise CspError("verify needs the original and the sparsified instance")
    inst, _ = read_instance(cfg.inputs[0])
    sparse, _ = read_instance(cfg.inputs[1])
    result = verify_sparsifier(inst, sparse, cfg.epsilon, cfg.max_bruteforce, cfg.jobs)
    if result.passed:
        print(f"PASS: {result.checked} assignments within (1 +- {cfg.epsilon})")
        return 0
    named = ", ".join(f"{v}={x}" for v, x in zip(inst.variables, result.witness))
    print(f"FAIL: assignment {named}")
    return 1


def cmd_cover(cfg: RunConfig) -> int:
    pred = read_predicate(cfg.inputs[0])
    witness = find_singleton_subpredicate(pred)
    if witness is not None:
        raise CspError(f"predicate is not sparsifiable (singleton restriction {witness}); no colouring exists")
    r = pred.domains[0]
    g = auxiliary_graph(pred)
    comp = bipartite_complement(g)
    colouring = biclique_colouring(pred)

    def side(edges):
        return [[u, v - r] for u, v, _ in edges]

    out = {
        "predicate": predicate_to_dict(pred),
        "support_graph": side(g.edges),
        "complement": side(comp.edges),
        "components": [{"left": ls, "right": rs} for ls, rs in complement_components(pred)],
        "ell": colouring.colour_count,
        "colouring": {"left": list(colouring.left_colours), "right": list(colouring.right_colours)},
    }
    _emit(out, cfg.output)
    if cfg.output:
        print(f"ell={colouring.colour_count}, {len(out['components'])} components")
    return 0


def cmd_gen(cfg: RunConfig) -> int:
    pred = read_predicate(cfg.predicate)
    if cfg.size is None or cfg.size < 1:
        raise CspError("the instance size must be a positive integer")
    if cfg.generator == "grid":
        witness = find_singleton_subpredicate(pred)
        if witness is None:
            raise CspError("predicate has no singleton 2x2 restriction; no grid instance")
        weights = None
        if cfg.weights == "random":
            rng = random.Random(cfg.seed)
            weights = [float(rng.randint(1, 10)) for _ in range(cfg.size ** 2)]
        inst, _ = grid_instance(pred, witness, cfg.size, weights)
    elif cfg.generator == "cube":
        ells = [cfg.ell] if cfg.ell is not None else range(pred.arity, 1, -1)
        cube = next((c for c in (find_singleton_lcube(pred, l) for l in ells) if c is not None), None)
        if cube is None:
            raise CspError("predicate contains no singleton cube of the requested dimension")
        inst, _ = cube_instance(pred, cube, cfg.size)
    else:
        raise CspError(f"unknown generator {cfg.generator!r}")
    _emit(instance_to_dict(inst), cfg.output)
    if cfg.output:
        print(f"{cfg.generator}: {inst.n} variables, {len(inst.constraints)} constraints")
    return 0


def cmd_lowerbound(cfg: RunConfig) -> int:
    inst, _ = read_instance(cfg.inputs[0])
    if cfg.family == "auto":
        cert = hitting_lower_bound(inst, exhaustive_family(inst, cfg.max_bruteforce))
    elif cfg.family == "unused":
        cert = unused_label_bound(inst)
    else:
        family = load_json(cfg.family)
        if not isinstance(family, list):
            raise FormatError("a family file must hold a list of assignments")
        cert = hitting_lower_bound(inst, family)
    _emit(certificate_to_dict(cert), cfg.output)
    return 0


HANDLERS = {
    "classify": cmd_classify,
    "sparsify": cmd_sparsify,
    "verify": cmd_verify,
    "cover": cmd_cover,
    "gen": cmd_gen,
    "lowerbound": cmd_lowerbound,
}


def run(cfg: RunConfig) -> int:
    try:
        cfg.validate()
        return HANDLERS[cfg.command](cfg)
    except (CspError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="csparsify", description="Sparsification of binary CSPs.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, eps=False):
        p.add_argument("-o", "--output")
        p.add_argument("--max-bruteforce", type=int, default=DEFAULT_MAX_BRUTEFORCE)
        p.add_argument("--jobs", type=int, default=1)
        if eps:
            p.add_argument("--epsilon", type=float, required=True)

    p = sub.add_parser("classify", help="classify a predicate")
    p.add_argument("predicate")
    common(p)

    p = sub.add_parser("sparsify", help="sparsify an instance")
    p.add_argument("instance")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--verify", action="store_true", help="also check every assignment of the result")
    common(p, eps=True)

    p = sub.add_parser("verify", help="check a sparsifier against its instance")
    p.add_argument("instance")
    p.add_argument("sparsifier")
    common(p, eps=True)

    p = sub.add_parser("cover", help="show the support graph, its complement and the colouring")
    p.add_argument("predicate")
    common(p)

    p = sub.add_parser("gen", help="generate a hard instance")
    p.add_argument("generator", choices=("grid", "cube"))
    p.add_argument("--pred", required=True)
    p.add_argument("--n", type=int, help="grid side")
    p.add_argument("--q", type=int, help="cube part size")
    p.add_argument("--ell", type=int, help="cube dimension (default: largest available)")
    p.add_argument("--weights", choices=("unit", "random"), default="unit")
    p.add_argument("--seed", type=int, default=0)
    common(p)

    p = sub.add_parser("lowerbound", help="certify a lower bound on sparsifier size")
    p.add_argument("instance")
    p.add_argument("--family", default="auto", help="'auto', 'unused' or a JSON file of assignments")
    common(p)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(args.command, output=args.output, max_bruteforce=args.max_bruteforce, jobs=args.jobs)
    if args.command in ("classify", "cover"):
        cfg.inputs = [args.predicate]
    elif args.command == "sparsify":
        cfg.inputs, cfg.epsilon, cfg.seed, cfg.verify = [args.instance], args.epsilon, args.seed, args.verify
    elif args.command == "verify":
        cfg.inputs, cfg.epsilon = [args.instance, args.sparsifier], args.epsilon
    elif args.command == "gen":
        cfg.generator, cfg.predicate, cfg.ell = args.generator, args.pred, args.ell
        cfg.size = args.n if args.generator == "grid" else args.q
        cfg.weights, cfg.seed = args.weights, args.seed
    elif args.command == "lowerbound":
        cfg.inputs, cfg.family = [args.instance], args.family
    return cfg


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return run(config_from_args(args))


if __name__ == "__main__":
    sys.exit(main())
