"""
Command line interface: ``kuiper <command> ...``.

Exit codes: 0 success, 1 invalid input, 2 usage error, 3 a verification suite found a property violation.
"""
import argparse
import json
import logging
import sys
from typing import List, Optional

import numpy as np

from kuiper_isometry import __version__
from kuiper_isometry.kuiper import Kuiper
from kuiper_isometry.kuiper_exception import DiracInputError, KuiperException, UnknownSuiteError
from kuiper_isometry.kuiper_profiles import KuiperProfiles
from kuiper_isometry.kuiper_services import KuiperServices
from kuiper_isometry.resources.scalars import format_number, is_exact
from kuiper_isometry.resources.support import closed_support, co_interval_support, quantize
from kuiper_isometry.services.metric_service import METRICS
from kuiper_isometry.services.verify_service import SUITES
from kuiper_isometry.utils.generators import random_distribution, random_map
from kuiper_isometry.utils.json_io import dumps, load_distribution, load_map, map_from_json, to_json, write_file

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2
EXIT_VIOLATION = 3


def _number(value) -> str:
    return f"{format_number(value)} {'exact' if is_exact(value) else 'approx'}"


def _emit(args, document, text: str):
    if args.format == "json":
        print(json.dumps(document, indent=2))
    else:
        print(text)


def _write_or_print(path: Optional[str], document):
    if path:
        write_file(path, document)
        logger.info("wrote %s", path)
    else:
        sys.stdout.write(dumps(document))


def cmd_dist(kuiper: Kuiper, args) -> int:
    mu, nu = load_distribution(args.file_a), load_distribution(args.file_b)
    metrics = kuiper.client(KuiperServices.METRIC_SERVICE)
    value = metrics.distance(args.metric, mu, nu)
    document = {"metric": args.metric, "value": format_number(value), "exact": is_exact(value)}
    text = _number(value)
    if args.witness:
        if args.metric != "kuiper":
            raise KuiperException("witnesses are only computed for the kuiper metric")
        witness, _ = metrics.kuiper_witness(mu, nu)
        document["witness"] = {"interval": str(witness.interval), "signed": format_number(witness.signed_value)}
        text += f"\nwitness {witness}"
    _emit(args, document, text)
    return EXIT_OK


def cmd_transform(kuiper: Kuiper, args) -> int:
    mu = load_distribution(args.input)
    g = map_from_json({"r_pole": args.r_pole}) if args.r_pole is not None else load_map(args.map)
    result = kuiper.client(KuiperServices.TRANSFORM_SERVICE).pullback(mu, g)
    _write_or_print(args.output, to_json(result))
    return EXIT_OK


def cmd_support(kuiper: Kuiper, args) -> int:
    mu = load_distribution(args.file)
    support = co_interval_support(mu)
    closed = closed_support(mu)
    document = {
        "closed_support": [str(i) for i in closed],
        "co_interval_support": [str(i) for i in support.components],
        "convex_hull": str(support.conv_hull),
        "bounded_gaps": [str(i) for i in support.bounded_gaps],
    }
    text = "\n".join([
        "closed support: " + " u ".join(document["closed_support"]),
        "co-interval support: " + " u ".join(document["co_interval_support"]),
        "convex hull: " + document["convex_hull"],
        "bounded gaps: " + (", ".join(document["bounded_gaps"]) or "none"),
    ])
    _emit(args, document, text)
    return EXIT_OK


def cmd_characterize(kuiper: Kuiper, args) -> int:
    mu = load_distribution(args.file)
    service = kuiper.client(KuiperServices.CHARACTERIZE_SERVICE)
    try:
        regions = service.unit_distance_regions(mu)
        document = {
            "outer": [str(i) for i in regions.outer],
            "gaps": [str(i) for i in regions.gaps],
            "dirac_excluded_points": [str(t) for t in regions.dirac_excluded_points],
        }
        text = str(regions)
    except DiracInputError:
        x = mu.dirac_point
        document = {"dirac": str(x), "unit_distance_set": f"nu({{{x}}}) = 0"}
        text = f"Dirac measure at {x}: unit distance iff nu({{{x}}}) = 0"
    if args.other:
        nu = load_distribution(args.other)
        document["unit_distant"] = service.is_unit_distant(mu, nu)
        text += f"\nunit distant: {str(document['unit_distant']).lower()}"
    _emit(args, document, text)
    return EXIT_OK


def cmd_quantize(kuiper: Kuiper, args) -> int:
    mu = load_distribution(args.file)
    atomic = quantize(mu, args.n)
    _write_or_print(args.output, to_json(atomic))
    distance = kuiper.client(KuiperServices.METRIC_SERVICE).kuiper_distance(mu, atomic)
    logger.info("kuiper distance to the quantization: %s", _number(distance))
    return EXIT_OK


def cmd_gen(kuiper: Kuiper, args) -> int:
    session = kuiper.session
    complexity = args.complexity or session.get_profile_setting("complexity")
    rng = np.random.default_rng(np.random.SeedSequence(args.seed))
    if args.kind == "distribution":
        value = random_distribution(rng, session.get_int(f"{complexity}_max_nodes"))
    else:
        value = random_map(rng, session.get_int("max_map_pieces"))
    _write_or_print(args.output, to_json(value))
    return EXIT_OK


def cmd_verify(kuiper: Kuiper, args) -> int:
    service = kuiper.client(KuiperServices.VERIFY_SERVICE)
    if args.suite == "all":
        reports = service.run_all(args.seed, args.trials, args.complexity)
    else:
        reports = [service.run(args.suite, args.seed, args.trials, args.complexity)]
    documents = [report.to_json() for report in reports]
    if args.report:
        write_file(args.report, documents[0] if len(documents) == 1 else documents)
    _emit(args, documents, "\n".join(str(report) for report in reports))
    return EXIT_OK if all(report.passed for report in reports) else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kuiper", description="Exact Kuiper distances and isometries.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--config", help="configuration file overriding the bundled profiles")
    parser.add_argument("--profile", choices=[p.name for p in KuiperProfiles], default=KuiperProfiles.STANDARD.name)
    parser.add_argument("-v", "--verbose", action="count", default=0)
    commands = parser.add_subparsers(dest="command", required=True)

    dist = commands.add_parser("dist", help="distance between two distributions")
    dist.add_argument("metric", choices=sorted(METRICS))
    dist.add_argument("file_a")
    dist.add_argument("file_b")
    dist.add_argument("--witness", action="store_true", help="also print a maximising interval")
    dist.set_defaults(handler=cmd_dist)

    transform = commands.add_parser("transform", help="pull a distribution back along a monotone map")
    source = transform.add_mutually_exclusive_group(required=True)
    source.add_argument("--map", help="map JSON file")
    source.add_argument("--r-pole", dest="r_pole", help="use t -> 1/(t - x); 'inf' is the identity")
    transform.add_argument("input")
    transform.add_argument("-o", "--output")
    transform.set_defaults(handler=cmd_transform)

    support = commands.add_parser("support", help="closed and co-interval supports")
    support.add_argument("file")
    support.set_defaults(handler=cmd_support)

    characterize = commands.add_parser("characterize", help="regions of the measures at distance 1")
    characterize.add_argument("file")
    characterize.add_argument("--other", help="decide whether this distribution is at distance 1")
    characterize.set_defaults(handler=cmd_characterize)

    quantize_cmd = commands.add_parser("quantize", help="purely atomic approximation with n atoms")
    quantize_cmd.add_argument("file")
    quantize_cmd.add_argument("n", type=int)
    quantize_cmd.add_argument("-o", "--output")
    quantize_cmd.set_defaults(handler=cmd_quantize)

    gen = commands.add_parser("gen", help="seeded random distribution or map")
    gen.add_argument("kind", choices=("distribution", "map"))
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--complexity", choices=("small", "medium", "large"))
    gen.add_argument("-o", "--output")
    gen.set_defaults(handler=cmd_gen)

    verify = commands.add_parser("verify", help="run property suites")
    verify.add_argument("suite", choices=list(SUITES) + ["all"])
    verify.add_argument("--seed", type=int)
    verify.add_argument("--trials", type=int)
    verify.add_argument("--complexity", choices=("small", "medium", "large"))
    verify.add_argument("--report", help="write the report JSON here")
    verify.set_defaults(handler=cmd_verify)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = [logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose, 2)]
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    if args.command == "quantize" and args.n < 1:
        parser.error("n must be at least 1")
    try:
        kuiper = Kuiper(KuiperProfiles[args.profile], args.config)
        return args.handler(kuiper, args)
    except UnknownSuiteError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (KuiperException, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
