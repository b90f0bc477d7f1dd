import sys
import time
from functools import partial
from typing import Sequence

import argh
from joblib import Parallel, delayed
from tqdm.auto import tqdm

from gaussian_maps.utils.base_locus import base_locus
from gaussian_maps.utils.canonical import canonical_basis, canonical_basis_from_adjoints
from gaussian_maps.utils.config import default_prime, get_settings
from gaussian_maps.utils.dispatch import dispatch_report_command
from gaussian_maps.utils.errors import GaussianMapsError
from gaussian_maps.utils.function_field import KForm, PlaneModel, coordinatize
from gaussian_maps.utils.gaussian import multiplication_matrix, mu1, mu1_restricted, mu2, rank_mu2
from gaussian_maps.utils.linalg import RatMatrix, modular_agreements, rank
from gaussian_maps.utils.numerology import dim_i2_expected, h0_kK
from gaussian_maps.utils.parsing import parse_bivariate, render_bivariate
from gaussian_maps.utils.quadrics import adjoint_quadric, factorization_check, psi_pairs, quadric_span_rank
from gaussian_maps.utils.report import CurveSpec, GeneralReport, RankReport, curve_echo, curve_from_spec, load_curve_specs, summarize_verdict

print = partial(tqdm.write, file=sys.stderr)

GENERAL_CAVEAT = "general model: holomorphy of the supplied differentials is not verified; ranks are of the supplied span only"


def _live(images: Sequence[KForm]) -> list[KForm]:
    return [im for im in images if not im.is_zero()]


def run_analyze(spec: CurveSpec, *, timings: bool = False, prime: int | None = None, check_primes: Sequence[int] = ()) -> RankReport:
    """
    Compute every invariant of one superelliptic curve: I2, the ranks of mu1 on K and K - F,
    the rank of mu2, the psi image, the factorization identity and the base locus of mu2(I2).

    With `check_primes`, every matrix whose rank enters the report is also ranked modulo each
    of those primes, and the agreements are reported under `modular_checks`.
    """

    curve, moduli = curve_from_spec(spec)
    prime = prime or default_prime()
    tag = f"[{curve.label or curve}]"

    stamps: dict[str, int] = {}
    clock = time.perf_counter()

    def stage(name: str) -> None:
        nonlocal clock
        now = time.perf_counter()
        stamps[name] = round((now - clock) * 1000)
        clock = now
        print(f"{tag} {name} done")

    basis = canonical_basis(curve)
    g = len(basis)
    stage("canonical_basis")

    mult_rank = rank(multiplication_matrix(basis))
    mu2_image = rank_mu2(basis, prime=prime)
    dim_i2 = len(mu2_image.images)
    hyperelliptic = mult_rank == 2 * g - 1
    stage("mu2")

    mu1K = mu1(basis.forms, prime=prime, source="mu1_K")
    mu1L = mu1_restricted(basis, prime=prime)
    stage("mu1")

    pairs = psi_pairs(basis)
    quadrics = [adjoint_quadric(pair) for pair in pairs]
    psi_rank = quadric_span_rank(quadrics)
    passed = sum(factorization_check(pair) for pair in pairs)
    nonzero = sum(not mu2(Q).is_zero() for Q in quadrics)
    stage("psi")

    verdict = base_locus(mu2_image.images, moduli)
    stage("base_locus")

    report: RankReport = {
        "curve": curve_echo(curve),
        "hyperelliptic": hyperelliptic,
        "dim_i2": dim_i2,
        "dim_i2_expected": dim_i2_expected(g, hyperelliptic),
        "rank_mu1K": mu1K.rank,
        "corank_mu1K": h0_kK(g, 3) - mu1K.rank,
        "rank_mu1L": mu1L.rank,
        "rank_mu2": mu2_image.rank,
        "psi_rank": psi_rank,
        "psi_mu2_nonzero": nonzero,
        "lower_bound_g_minus_3": mu2_image.rank >= g - 3,
        "factorization_checks": len(pairs),
        "factorization_checks_passed": passed,
        "base_locus": summarize_verdict(verdict),
        "prime": prime,
    }

    if timings:
        report["timings"] = stamps

    if check_primes:
        checks = [
            (multiplication_matrix(basis), mult_rank),
            (coordinatize(_live(mu1K.images)), mu1K.rank),
            (coordinatize(_live(mu1L.images)), mu1L.rank),
            (coordinatize(_live(mu2_image.images)), mu2_image.rank),
            (RatMatrix.from_rows([Q.pair_vector() for Q in quadrics]), psi_rank),
        ]
        report["modular_checks"] = {
            "primes": list(check_primes),
            "matrices": len(checks),
            "agreements": modular_agreements(checks, check_primes),
        }

    return report


def run_general(equation: str, numerators: Sequence[str], *, label: str | None = None, prime: int | None = None) -> GeneralReport:
    """Linear-algebra pipeline on a general plane model with a user-supplied differential basis."""

    model = PlaneModel.from_equation(parse_bivariate(equation), label=label)
    basis = canonical_basis_from_adjoints(model, [parse_bivariate(h) for h in numerators])
    prime = prime or default_prime()
    print(f"[{label or equation}] {GENERAL_CAVEAT}")

    mu1K = mu1(basis.forms, prime=prime, source="mu1_K")
    mu2_image = rank_mu2(basis, prime=prime) if len(basis) >= 3 else None

    return {
        "equation": render_bivariate(model.equation),
        "label": label,
        "genus": len(basis),
        "dim_i2": len(mu2_image.images) if mu2_image else 0,
        "rank_mu1K": mu1K.rank,
        "rank_mu2": mu2_image.rank if mu2_image else 0,
        "caveat": GENERAL_CAVEAT,
        "prime": prime,
    }


def analyze_many(
    specs: Sequence[CurveSpec],
    *,
    n_jobs: int = 1,
    timings: bool = False,
    check_primes: Sequence[int] = (),
    desc: str = "Analyzing curves",
) -> list[RankReport]:
    """run_analyze over `specs` with joblib; results keep the input order."""

    prime = default_prime()
    jobs = (delayed(run_analyze)(spec, timings=timings, prime=prime, check_primes=check_primes) for spec in specs)
    results = Parallel(n_jobs=n_jobs, return_as="generator")(jobs)

    return list(tqdm(results, total=len(specs), desc=desc))


@argh.arg("--n", type=int, help="Cover degree n of the curve y^n = f(x).")
@argh.arg("--f", help="Right-hand side f(x), e.g. 'x^9 - 1'.")
@argh.arg("--label", help="Optional label echoed in the report.")
@argh.arg("--moduli", help="Squarefree divisors of f keying the ramification classes.", nargs="*")
@argh.arg("--config", help='JSON file of the form {"curves": [{"n": 3, "f": "x^9 - 1"}, ...]}.')
@argh.arg("--timings", help="Add a `timings` object of per-stage milliseconds to each report. Reports omit it by default and are then byte-reproducible.")
@argh.arg("--general", help="Analyze a general plane model given by --equation and --basis.")
@argh.arg("--equation", help="Equation E(x, y) monic in y, e.g. 'y^4 - x^5 + 1'.")
@argh.arg("--basis", help="Adjoint numerators h(x, y) of the differentials h dx / E_y.", nargs="*")
@argh.arg("--n-jobs", type=int, help="Worker count for --config batches.")
def analyze(
    *,
    n: int | None = None,
    f: str | None = None,
    label: str | None = None,
    moduli: list[str] | None = None,
    config: str | None = None,
    timings: bool = False,
    general: bool = False,
    equation: str | None = None,
    basis: list[str] | None = None,
    n_jobs: int | None = None,
) -> dict:
    """
    Analyze one curve (--n/--f), a batch of curves (--config), or a general plane model (--general).
    Per-stage timings appear in a report only with --timings.

    Returns:
        A RankReport, `{"reports": [RankReport, ...]}` for --config, or a GeneralReport for --general.
    """

    if general:
        if not equation or not basis:
            raise GaussianMapsError("--general needs --equation and at least one --basis numerator")
        return run_general(equation, basis, label=label)

    if config:
        specs = load_curve_specs(config)
        n_jobs = n_jobs or get_settings()["n_jobs"]
        return {"reports": analyze_many(specs, n_jobs=n_jobs, timings=timings)}

    if n is None or f is None:
        raise GaussianMapsError("analyze needs --n and --f, --config, or --general")

    spec: CurveSpec = {"n": n, "f": f}
    if label:
        spec["label"] = label
    if moduli:
        spec["moduli"] = moduli

    return run_analyze(spec, timings=timings)


if __name__ == "__main__":
    dispatch_report_command(fn=analyze)
