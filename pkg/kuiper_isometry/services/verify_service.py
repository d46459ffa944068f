"""
Seeded property suites for the metric, transform, circle and characterisation code.

Each suite is a trial function ``(rng, params) -> TrialOutcome``. Trial ``i`` of a run draws from the ``i``-th child
of ``SeedSequence(seed)``, so a report only depends on the seed and the trial count, also when trials run in a
process pool.
"""
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from functools import partial
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from kuiper_isometry.kuiper_exception import KuiperException, MassDeficiencyError, UnknownSuiteError
from kuiper_isometry.kuiper_session import KuiperSession
from kuiper_isometry.resources.circle_distribution import (
    Arc, CircleDistribution, arc_uniform, mix_circles, uniform_circle,
)
from kuiper_isometry.resources.distribution import Distribution, make_dirac, make_uniform, mix
from kuiper_isometry.resources.interval import Interval, complement_intervals
from kuiper_isometry.resources.moebius import Moebius
from kuiper_isometry.resources.monotone_map import MonotoneMap, compose, r_map
from kuiper_isometry.resources.scalars import NEG_INF, POS_INF, format_number, is_exact, is_finite
from kuiper_isometry.resources.support import condition_on_interval, is_absolutely_continuous_wrt, quantize
from kuiper_isometry.resources.verify_report import TrialOutcome, VerifyReport
from kuiper_isometry.services.characterize_service import (
    absolute_continuity_polar_check, is_unit_distant, polar, polar_by_distance, unit_distance_probes,
)
from kuiper_isometry.services.circle_service import (
    arc_mass, circle_kuiper, circle_null_arcs, circle_unit_distance_by_components, rotate, tau_transport,
)
from kuiper_isometry.services.metric_service import (
    bounded_interval_sup, brute_force_interval_sup, dirac_distance, ks_distance, kuiper_distance, kuiper_witness,
    tv_distance,
)
from kuiper_isometry.services.transform_service import continuous_isometry, general_isometry, pullback
from kuiper_isometry.utils.generators import (
    random_circle_distribution, random_distribution, random_moebius_map, random_pwl_distribution, random_pwl_map,
    random_rational,
)
from kuiper_isometry.utils.json_io import to_json

logger = logging.getLogger(__name__)

Params = Dict[str, Any]


def _serialise(value):
    if isinstance(value, (Distribution, MonotoneMap, CircleDistribution)):
        return to_json(value)
    if isinstance(value, bool):
        return value
    if isinstance(value, (Fraction, int, float)):
        return format_number(value) if is_finite(value) else str(value)
    if isinstance(value, (list, tuple)):
        return [_serialise(v) for v in value]
    return str(value)


class _Checks(object):
    """Collects failed checks of one trial and whether every compared value was exact."""

    def __init__(self, params: Params):
        self._tolerance = params["approx_tolerance"]
        self.exact = True
        self.failures: List[Dict[str, Any]] = []

    def _record(self, check, expected, actual, inputs):
        self.failures.append({
            "check": check,
            "inputs": {name: _serialise(value) for name, value in inputs.items()},
            "expected": _serialise(expected),
            "actual": _serialise(actual),
        })

    def _track(self, *values):
        if not all(is_exact(v) for v in values):
            self.exact = False

    def equal(self, check, actual, expected, **inputs):
        """Exact equality of exact values, agreement within the approximate tolerance otherwise."""
        self._track(actual, expected)
        if is_exact(actual) and is_exact(expected):
            ok = actual == expected
        else:
            ok = abs(float(actual) - float(expected)) <= self._tolerance
        if not ok:
            self._record(check, expected, actual, inputs)

    def at_most(self, check, actual, bound, **inputs):
        self._track(actual, bound)
        slack = 0 if is_exact(actual) and is_exact(bound) else self._tolerance
        if not actual <= bound + slack:
            self._record(check, f"<= {_serialise(bound)}", actual, inputs)

    def holds(self, check, condition, **inputs):
        if not condition:
            self._record(check, True, False, inputs)

    def outcome(self) -> TrialOutcome:
        return TrialOutcome(self.exact, self.failures)


def _random_closed_interval(rng: np.random.Generator, mu: Distribution, attempts: int = 20) -> Interval:
    """A closed, possibly unbounded interval of positive mu-mass."""
    for _ in range(attempts):
        a, b = sorted((random_rational(rng), random_rational(rng)))
        lo = NEG_INF if rng.integers(0, 4) == 0 else a
        hi = POS_INF if rng.integers(0, 4) == 0 else b
        interval = Interval.closed(lo, hi)
        if mu.interval_mass(interval) > 0:
            return interval
    return Interval.real_line()


def _random_point(rng: np.random.Generator, mu: Distribution):
    """An atom location of mu half of the time, a grid point otherwise."""
    atoms = mu.atoms
    if atoms and rng.integers(0, 2):
        return atoms[int(rng.integers(0, len(atoms)))][0]
    return random_rational(rng)


def _non_dirac(rng: np.random.Generator, mu: Distribution) -> Distribution:
    if not mu.is_dirac:
        return mu
    x = mu.dirac_point
    return mix([(Fraction(1, 2), mu), (Fraction(1, 2), make_uniform(x + 1, x + 1 + random_rational(rng, 1, 4)))])


# -- suites --------------------------------------------------------------------------------------------------------

def _fixtures(rng: np.random.Generator, params: Params) -> TrialOutcome:
    checks = _Checks(params)
    u01, u02, u03 = make_uniform(0, 1), make_uniform(0, 2), make_uniform(0, 3)
    u12, u13 = make_uniform(1, 2), make_uniform(1, 3)
    witness, value = kuiper_witness(u03, u12)
    checks.equal("kuiper(U[0,3], U[1,2])", value, Fraction(2, 3))
    checks.holds("witness of kuiper(U[0,3], U[1,2]) is [1,2]", witness.interval == Interval.closed(1, 2),
                 witness=witness)
    checks.equal("ks(U[0,3], U[1,2])", ks_distance(u03, u12), Fraction(1, 3))
    checks.equal("tv(U[0,2], U[1,3])", tv_distance(u02, u13), Fraction(1, 2))
    checks.equal("kuiper(U[0,1], U[0,2])", kuiper_distance(u01, u02), Fraction(1, 2))
    checks.equal("kuiper(U[0,1], quantize(U[0,1], 4))", kuiper_distance(u01, quantize(u01, 4)), Fraction(1, 4))
    pulled = pullback(u12, r_map(0))
    checks.holds("U[1,2] o r_0 has CDF 2 - 1/t on [1/2, 1]", pulled.piece_at(Fraction(3, 4)) == Moebius(2, -1, 1, 0),
                 pulled=pulled)
    return checks.outcome()


def _lemma1(rng: np.random.Generator, params: Params) -> TrialOutcome:
    checks = _Checks(params)
    mu = random_pwl_distribution(rng, params["max_nodes"])
    nu = random_pwl_distribution(rng, params["max_nodes"])
    witness, distance = kuiper_witness(mu, nu)
    checks.equal("kuiper equals the brute-force interval maximum", distance, brute_force_interval_sup(mu, nu),
                 mu=mu, nu=nu)
    checks.equal("kuiper equals the bounded-interval maximum", distance, bounded_interval_sup(mu, nu), mu=mu, nu=nu)
    signed = mu.interval_mass(witness.interval) - nu.interval_mass(witness.interval)
    checks.equal("witness attains the distance", abs(signed), distance, mu=mu, nu=nu, witness=witness)
    checks.equal("witness signed value", signed, witness.signed_value, mu=mu, nu=nu, witness=witness)
    rest = sum((mu.interval_mass(part) - nu.interval_mass(part) for part in complement_intervals(witness.interval)),
               Fraction(0))
    checks.equal("complement of the witness attains the distance", rest, -signed, mu=mu, nu=nu, witness=witness)
    return checks.outcome()


def _mixture_curve(nu1: Distribution, nu2: Distribution, s: Fraction) -> Distribution:
    if s == 0:
        return nu1
    if s == 1:
        return nu2
    return mix([(1 - s, nu1), (s, nu2)])


def _chain(rng: np.random.Generator, params: Params) -> TrialOutcome:
    checks = _Checks(params)
    mu = random_pwl_distribution(rng, params["max_nodes"])
    nu = random_pwl_distribution(rng, params["max_nodes"])
    ks, ku, tv = ks_distance(mu, nu), kuiper_distance(mu, nu), tv_distance(mu, nu)
    checks.holds("0 <= ks <= kuiper", 0 <= ks <= ku, mu=mu, nu=nu, ks=ks, kuiper=ku)
    checks.holds("kuiper <= min(2 ks, tv) <= 1", ku <= min(2 * ks, tv) <= 1, mu=mu, nu=nu, ks=ks, kuiper=ku, tv=tv)
    checks.equal("kuiper symmetry", kuiper_distance(nu, mu), ku, mu=mu, nu=nu)
    checks.equal("ks symmetry", ks_distance(nu, mu), ks, mu=mu, nu=nu)
    checks.equal("tv symmetry", tv_distance(nu, mu), tv, mu=mu, nu=nu)
    checks.equal("kuiper(mu, mu) = 0", kuiper_distance(mu, mu), Fraction(0), mu=mu)
    s, t = (Fraction(int(k), 4) for k in rng.integers(0, 5, size=2))
    checks.equal("kuiper along a mixture segment scales with |s - t|",
                 kuiper_distance(_mixture_curve(mu, nu, s), _mixture_curve(mu, nu, t)), abs(s - t) * ku,
                 mu=mu, nu=nu, s=s, t=t)
    return checks.outcome()


def _triangle(rng: np.random.Generator, params: Params) -> TrialOutcome:
    checks = _Checks(params)
    a, b, c = (random_pwl_distribution(rng, params["max_nodes"]) for _ in range(3))
    for name, metric in (("kuiper", kuiper_distance), ("ks", ks_distance), ("tv", tv_distance)):
        checks.at_most(f"{name} triangle inequality", metric(a, c), metric(a, b) + metric(b, c), a=a, b=b, c=c)
    return checks.outcome()


def _theorem1(rng: np.random.Generator, params: Params) -> TrialOutcome:
    checks = _Checks(params)
    mu = random_distribution(rng, params["max_nodes"], atoms=False)
    nu = random_distribution(rng, params["max_nodes"], atoms=False)
    g = random_moebius_map(rng, params["max_map_pieces"])
    x = POS_INF if rng.integers(0, 2) else random_rational(rng)
    isometry = continuous_isometry(g, x)
    before, after = kuiper_distance(mu, nu), kuiper_distance(isometry(mu), isometry(nu))
    checks.equal("kuiper preserved by mu -> mu o (g o r_x)", after, before, mu=mu, nu=nu, g=g, x=x)
    if mu.is_piecewise_linear and nu.is_piecewise_linear and g.is_piecewise_linear and not is_finite(x):
        checks.holds("linear class stays exact", is_exact(before) and is_exact(after), mu=mu, nu=nu, g=g)
    return checks.outcome()


def _theorem3(rng: np.random.Generator, params: Params) -> TrialOutcome:
    checks = _Checks(params)
    mu = random_pwl_distribution(rng, params["max_nodes"])
    nu = random_pwl_distribution(rng, params["max_nodes"])
    g = random_pwl_map(rng, params["max_map_pieces"])
    isometry = general_isometry(g)
    pulled_mu, pulled_nu = isometry(mu), isometry(nu)
    checks.equal("kuiper preserved by mu -> mu o g", kuiper_distance(pulled_mu, pulled_nu), kuiper_distance(mu, nu),
                 mu=mu, nu=nu, g=g)
    for t in pulled_mu.breakpoints:
        checks.equal(f"atom transport at {t}", pulled_mu.interval_mass(Interval.singleton(t)),
                     mu.interval_mass(Interval.singleton(g(t))), mu=mu, g=g)
    for y, mass in mu.atoms:
        checks.equal(f"atom of mu at {y} reappears", pulled_mu.atom_at(g.preimage(y)), mass, mu=mu, g=g)
    checks.holds("compact support is preserved",
                 pulled_mu.pieces[0].is_constant and pulled_mu.pieces[-1].is_constant, mu=mu, g=g)
    return checks.outcome()


def _mass_deficiency(rng: np.random.Generator, params: Params) -> TrialOutcome:
    checks = _Checks(params)
    g = compose(random_pwl_map(rng, params["max_map_pieces"]), r_map(random_rational(rng)))
    (p,) = g.exceptional_range
    mu = mix([(Fraction(1, 2), random_distribution(rng, params["max_nodes"])), (Fraction(1, 2), make_dirac(p))])
    try:
        pullback(mu, g)
    except MassDeficiencyError as e:
        checks.equal("deficiency reported at the exceptional point", e.point, p, mu=mu, g=g)
    else:
        checks.holds("pullback with an atom at an exceptional point raises", False, mu=mu, g=g)
    return checks.outcome()


def _lemma3(rng: np.random.Generator, params: Params) -> TrialOutcome:
    """Conditioning on a closed interval I puts mu at distance exactly 1 - mu(I).

    The conditioned pieces share their poles with mu, so the identity is always checked in exact arithmetic. The
    lower bound for random theta carried by I compares Moebius pieces with different poles; those comparisons may go
    through irrational critical points and then mark the trial approximate.
    """
    checks = _Checks(params)
    mu = random_distribution(rng, params["max_nodes"])
    interval = _random_closed_interval(rng, mu)
    mass = mu.interval_mass(interval)
    conditioned = condition_on_interval(mu, interval)
    distance = kuiper_distance(mu, conditioned)
    checks.holds("kuiper(mu, mu conditioned on I) is exact", is_exact(distance), mu=mu, interval=interval)
    checks.equal("kuiper(mu, mu conditioned on I) = 1 - mu(I)", distance, 1 - mass, mu=mu, interval=interval)
    if mu.is_continuous:
        checks.holds("conditioning keeps atom-free measures atom-free", conditioned.is_continuous,
                     mu=mu, interval=interval)
    for _ in range(params["conditioning_probes"]):
        theta = random_distribution(rng, params["max_nodes"], within=interval)
        checks.at_most("kuiper(mu, theta) >= 1 - mu(I) for theta carried by I", 1 - mass, kuiper_distance(mu, theta),
                       mu=mu, theta=theta, interval=interval)
    return checks.outcome()


def _dirac(rng: np.random.Generator, params: Params) -> TrialOutcome:
    checks = _Checks(params)
    mu = random_distribution(rng, params["max_nodes"])
    x = _random_point(rng, mu)
    expected = 1 - mu.atom_at(x)
    checks.equal("dirac_distance(mu, x) = 1 - mu({x})", dirac_distance(mu, x), expected, mu=mu, x=x)
    checks.equal("kuiper(mu, delta_x) = 1 - mu({x})", kuiper_distance(mu, make_dirac(x)), expected, mu=mu, x=x)
    return checks.outcome()


def _random_kind(rng: np.random.Generator, max_nodes: int) -> Distribution:
    kind = int(rng.integers(0, 4))
    if kind == 0:
        return make_dirac(random_rational(rng))
    if kind == 1:
        return random_distribution(rng, max_nodes, segments=False, tails=False)
    if kind == 2:
        return random_pwl_distribution(rng, max_nodes, atoms=False)
    return random_pwl_distribution(rng, max_nodes)


def _characterization(rng: np.random.Generator, params: Params) -> TrialOutcome:
    checks = _Checks(params)
    mu = _random_kind(rng, params["max_nodes"])
    partner = int(rng.integers(0, 3))
    if partner == 0:
        nu = _random_kind(rng, params["max_nodes"])
    elif partner == 1:
        probes = unit_distance_probes(mu, rng)
        nu = probes[int(rng.integers(0, len(probes)))]
    else:
        nu = make_dirac(_random_point(rng, mu))
    decided = is_unit_distant(mu, nu)
    distance = kuiper_distance(mu, nu)
    checks.equal("is_unit_distant agrees with kuiper = 1", decided, distance == 1, mu=mu, nu=nu, kuiper=distance)
    checks.equal("is_unit_distant is symmetric", is_unit_distant(nu, mu), decided, mu=mu, nu=nu)
    return checks.outcome()


def _lemma5(rng: np.random.Generator, params: Params) -> TrialOutcome:
    checks = _Checks(params)
    mu = _non_dirac(rng, random_distribution(rng, params["max_nodes"]))
    nu = condition_on_interval(mu, _random_closed_interval(rng, mu))
    checks.holds("conditioning gives nu << mu", is_absolutely_continuous_wrt(nu, mu), mu=mu, nu=nu)
    probes = unit_distance_probes(mu, rng)
    checks.holds("probes lie in {mu}^1", all(is_unit_distant(mu, theta) for theta in probes), mu=mu, probes=probes)
    checks.holds("nu << mu implies {mu}^1 in {nu}^1", absolute_continuity_polar_check(mu, nu, probes),
                 mu=mu, nu=nu, probes=probes)
    x = _random_point(rng, mu)
    universe = probes + [mu, nu, make_dirac(x)]
    checks.holds("polar of delta_x is {theta : theta({x}) = 0}",
                 polar([make_dirac(x)], universe) == [theta for theta in universe if theta.atom_at(x) == 0],
                 x=x, universe=universe)
    checks.holds("polar agrees with the metric", polar([mu], universe) == polar_by_distance([mu], universe),
                 mu=mu, universe=universe)
    return checks.outcome()


def _quantization(rng: np.random.Generator, params: Params) -> TrialOutcome:
    checks = _Checks(params)
    mu = random_distribution(rng, params["max_nodes"])
    for n in params["quantize_levels"]:
        checks.at_most(f"kuiper(mu, quantize(mu, {n})) <= 2/{n}", kuiper_distance(mu, quantize(mu, n)),
                       Fraction(2, n), mu=mu)
    u01 = make_uniform(0, 1)
    checks.equal("kuiper(U[0,1], quantize(U[0,1], 4)) = 1/4", kuiper_distance(u01, quantize(u01, 4)), Fraction(1, 4))
    return checks.outcome()


def _circle(rng: np.random.Generator, params: Params) -> TrialOutcome:
    checks = _Checks(params)
    epsilon = params["circle_epsilon"]
    mu = random_distribution(rng, params["max_nodes"], atoms=False)
    nu = random_distribution(rng, params["max_nodes"], atoms=False)
    line = kuiper_distance(mu, nu)
    on_circle = circle_kuiper(tau_transport(mu, epsilon), tau_transport(nu, epsilon))
    checks.at_most("circle metric of the tau transports matches kuiper", abs(on_circle - float(line)),
                   2 * epsilon + params["approx_tolerance"], mu=mu, nu=nu)
    checks.exact = False
    return checks.outcome()


def _rotation(rng: np.random.Generator, params: Params) -> TrialOutcome:
    checks = _Checks(params)
    c1 = random_circle_distribution(rng, params["max_nodes"])
    c2 = random_circle_distribution(rng, params["max_nodes"])
    theta = float(rng.uniform(-math.pi, math.pi))
    tolerance = params["exact_tolerance"]
    moved = circle_kuiper(rotate(c1, theta), rotate(c2, theta))
    checks.at_most("circle metric is rotation invariant", abs(moved - circle_kuiper(c1, c2)), tolerance,
                   c1=c1, c2=c2, theta=theta)
    arc = Arc(float(rng.uniform(-math.pi, math.pi)), float(rng.uniform(0, math.pi)))
    checks.at_most("arc masses are rotation invariant",
                   abs(arc_mass(rotate(c1, theta), arc.rotated(theta)) - arc_mass(c1, arc)), tolerance,
                   c1=c1, arc=arc, theta=theta)
    checks.exact = False
    return checks.outcome()


def _circle_components(rng: np.random.Generator, params: Params) -> TrialOutcome:
    checks = _Checks(params)
    c = random_circle_distribution(rng, params["max_nodes"], atoms=False)
    gaps = circle_null_arcs(c)
    candidates = [uniform_circle()]
    for gap in gaps:
        candidates.append(arc_uniform(gap.start + gap.extent / 4, gap.extent / 2))
    if len(gaps) >= 2:
        first, second = gaps[0], gaps[1]
        candidates.append(mix_circles([(0.5, arc_uniform(first.start + first.extent / 4, first.extent / 2)),
                                       (0.5, arc_uniform(second.start + second.extent / 4, second.extent / 2))]))
    for other in candidates:
        at_one = circle_kuiper(c, other) >= 1 - params["approx_tolerance"]
        checks.equal("unit circle distance iff carried by one null arc",
                     circle_unit_distance_by_components(c, other), at_one, c=c, other=other)
    checks.exact = False
    return checks.outcome()


SUITES: Dict[str, Callable[[np.random.Generator, Params], TrialOutcome]] = {
    "fixtures": _fixtures,
    "lemma1": _lemma1,
    "chain": _chain,
    "triangle": _triangle,
    "theorem1": _theorem1,
    "theorem3": _theorem3,
    "mass_deficiency": _mass_deficiency,
    "lemma3": _lemma3,
    "dirac": _dirac,
    "characterization": _characterization,
    "quantization": _quantization,
    "circle": _circle,
    "rotation": _rotation,
    "lemma5": _lemma5,
    "circle_components": _circle_components,
}


def run_trial(suite: str, params: Params, index: int, seed_sequence: np.random.SeedSequence) -> TrialOutcome:
    """Run one trial; errors raised by the library count as failures of that trial."""
    rng = np.random.default_rng(seed_sequence)
    try:
        outcome = SUITES[suite](rng, params)
    except KuiperException as e:
        return TrialOutcome(False, [{"trial": index, "check": "no error", "error": f"{type(e).__name__}: {e}"}])
    return TrialOutcome(outcome.exact, [{"trial": index, **failure} for failure in outcome.failures])


def run_suite(suite: str, seed: int, trials: int, params: Params, workers: int = 1) -> VerifyReport:
    """Run ``trials`` trials of ``suite``; the report is ordered by trial index.

    Raises
    ------
    UnknownSuiteError
        ``suite`` is not a known suite name.
    """
    if suite not in SUITES:
        raise UnknownSuiteError(f"unknown suite {suite!r}, expected one of {', '.join(SUITES)}")
    started = time.perf_counter()
    children = np.random.SeedSequence(seed).spawn(trials)
    job = partial(run_trial, suite, params)
    if workers > 1 and trials > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            outcomes = list(executor.map(job, range(trials), children))
    else:
        outcomes = [job(i, child) for i, child in enumerate(children)]
    failures = [failure for outcome in outcomes for failure in outcome.failures]
    for failure in failures:
        logger.warning("%s trial %d failed: %s", suite, failure["trial"], failure["check"])
    report = VerifyReport(
        suite=suite,
        seed=seed,
        trials=trials,
        failures=failures,
        exact_trials=sum(1 for outcome in outcomes if outcome.exact),
        wall_time=time.perf_counter() - started,
    )
    logger.info("%s", report)
    return report


class VerifyService(object):
    """
    The VerifyService class runs the property suites with trial counts, seed, complexity and worker count taken from
    the active profile.
    """

    def __init__(self, session: KuiperSession):
        self._session = session

    def suites(self) -> List[str]:
        return list(SUITES)

    def params(self, complexity: Optional[str] = None) -> Params:
        session = self._session
        complexity = complexity or session.get_profile_setting("complexity")
        return {
            "max_nodes": session.get_int(f"{complexity}_max_nodes"),
            "max_map_pieces": session.get_int("max_map_pieces"),
            "circle_epsilon": session.get_float("circle_epsilon"),
            "conditioning_probes": session.get_int("conditioning_probes"),
            "quantize_levels": session.get_int_list("quantize_levels"),
            "approx_tolerance": session.get_float("approx_tolerance"),
            "exact_tolerance": session.get_float("exact_tolerance"),
        }

    def run(self, suite: str, seed: Optional[int] = None, trials: Optional[int] = None,
            complexity: Optional[str] = None) -> VerifyReport:
        if suite not in SUITES:
            raise UnknownSuiteError(f"unknown suite {suite!r}, expected one of {', '.join(SUITES)}")
        seed = self._session.get_int("seed") if seed is None else seed
        trials = self._session.get_trials(suite) if trials is None else trials
        return run_suite(suite, seed, trials, self.params(complexity), self._session.get_int("workers"))

    def run_all(self, seed: Optional[int] = None, trials: Optional[int] = None,
                complexity: Optional[str] = None) -> List[VerifyReport]:
        return [self.run(suite, seed, trials, complexity) for suite in SUITES]
