import math
import sys
from functools import partial
from typing import Literal

import argh
from tqdm.auto import tqdm

from gaussian_maps.scripts.analyze import analyze_many
from gaussian_maps.utils.config import get_settings
from gaussian_maps.utils.dispatch import dispatch_report_command
from gaussian_maps.utils.errors import GaussianMapsError
from gaussian_maps.utils.report import CurveSpec, write_csv

print = partial(tqdm.write, file=sys.stderr)

CSV_COLUMNS = ["curve.label", "curve.n", "curve.f", "curve.genus", "hyperelliptic", "dim_i2", "rank_mu1K", "corank_mu1K", "rank_mu1L", "rank_mu2", "psi_rank", "base_locus.is_free"]


def family_specs(family: Literal["hyperelliptic", "cyclic"], *, n: int, lo: int, hi: int) -> list[CurveSpec]:
    """
    Curves of a family:

        hyperelliptic  y^2 = x^(2g+2) - 1 for genus g in [lo, hi]
        cyclic         y^n = x^m - 1 for m in [lo, hi] with gcd(n, m) in {1, n} and genus >= 3
    """

    if lo > hi:
        raise GaussianMapsError(f"empty range [{lo}, {hi}]")

    specs: list[CurveSpec] = []
    match family:

        case "hyperelliptic":
            if lo < 3:
                raise GaussianMapsError(f"hyperelliptic sweep needs genus >= 3, got {lo=}")
            for g in range(lo, hi + 1):
                specs += [{"n": 2, "f": f"x^{2 * g + 2} - 1", "label": f"hyperelliptic g={g}"}]

        case "cyclic":
            for m in range(max(lo, 3), hi + 1):
                d = math.gcd(n, m)
                if d not in (1, n):
                    continue
                genus = ((n - 1) * (m - 1) + 1 - d) // 2
                if genus >= 3:
                    specs += [{"n": n, "f": f"x^{m} - 1", "label": f"cyclic n={n} m={m}"}]

        case _:
            raise GaussianMapsError(f"unknown family {family!r}")

    if not specs:
        raise GaussianMapsError(f"no admissible curves in the {family} family for [{lo}, {hi}]")

    return specs


@argh.arg("--family", help="Curve family to sweep.", choices=["hyperelliptic", "cyclic"])
@argh.arg("--n", type=int, help="Cover degree for the cyclic family.")
@argh.arg("--lo", type=int, help="Lower end: genus (hyperelliptic) or deg f (cyclic).")
@argh.arg("--hi", type=int, help="Upper end: genus (hyperelliptic) or deg f (cyclic).")
@argh.arg("--n-jobs", type=int, help="Worker count; defaults to GAUSSIAN_MAPS_N_JOBS.")
@argh.arg("--csv", help="Also write the rank table to this CSV file.")
def sweep(
    *,
    family: Literal["hyperelliptic", "cyclic"] = "hyperelliptic",
    n: int = 3,
    lo: int = 3,
    hi: int = 6,
    n_jobs: int | None = None,
    csv: str | None = None,
) -> dict:
    """
    Analyze every curve of a family.

    Returns:
        `{"reports": [RankReport, ...]}` in family order.
    """

    specs = family_specs(family, n=n, lo=lo, hi=hi)
    n_jobs = n_jobs or get_settings()["n_jobs"]
    print(f"[sweep] {len(specs)} curves, {n_jobs=}")

    reports = analyze_many(specs, n_jobs=n_jobs, desc=f"Sweeping {family}")

    if csv:
        path = write_csv(reports, csv, columns=CSV_COLUMNS)
        print(f"[sweep] wrote {path}")

    return {"reports": reports}


if __name__ == "__main__":
    dispatch_report_command(fn=sweep)
