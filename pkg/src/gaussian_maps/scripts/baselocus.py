import sys
from functools import partial
from typing import Literal

import argh
from tqdm.auto import tqdm

from gaussian_maps.utils.base_locus import base_locus
from gaussian_maps.utils.canonical import canonical_basis
from gaussian_maps.utils.dispatch import dispatch_report_command
from gaussian_maps.utils.errors import GaussianMapsError
from gaussian_maps.utils.function_field import CurveModel, KForm
from gaussian_maps.utils.gaussian import mu1, mu1_restricted, rank_mu2
from gaussian_maps.utils.report import CurveSpec, curve_echo, curve_from_spec, summarize_verdict

print = partial(tqdm.write, file=sys.stderr)

Source = Literal["mu2", "canonical", "mu1K", "mu1L"]


def source_forms(curve: CurveModel, source: Source) -> list[KForm]:
    basis = canonical_basis(curve)

    match source:
        case "mu2":
            return list(rank_mu2(basis).images)
        case "canonical":
            return list(basis.forms)
        case "mu1K":
            return list(mu1(basis.forms, source="mu1_K").images)
        case "mu1L":
            return list(mu1_restricted(basis).images)
        case _:
            raise GaussianMapsError(f"unknown linear system {source!r}")


@argh.arg("--n", type=int, help="Cover degree n of the curve y^n = f(x).")
@argh.arg("--f", help="Right-hand side f(x).")
@argh.arg("--moduli", help="Squarefree divisors of f keying the ramification classes.", nargs="*")
@argh.arg("--source", help="Linear system whose base locus is computed.", choices=["mu2", "canonical", "mu1K", "mu1L"])
def baselocus(
    *,
    n: int | None = None,
    f: str | None = None,
    moduli: list[str] | None = None,
    source: Source = "mu2",
) -> dict:
    """Minimum orders at every place class and certified affine common zeros of a linear system."""

    if n is None or f is None:
        raise GaussianMapsError("baselocus needs --n and --f")

    spec: CurveSpec = {"n": n, "f": f}
    if moduli:
        spec["moduli"] = moduli

    curve, parsed_moduli = curve_from_spec(spec)
    forms = source_forms(curve, source)
    print(f"[{curve}] {len(forms)} forms from {source}")

    verdict = base_locus(forms, parsed_moduli)

    return {
        "curve": curve_echo(curve),
        "source": source,
        **summarize_verdict(verdict),
    }


if __name__ == "__main__":
    dispatch_report_command(fn=baselocus)
