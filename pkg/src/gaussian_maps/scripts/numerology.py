import argh

from gaussian_maps.utils.dispatch import dispatch_report_command
from gaussian_maps.utils.errors import GaussianMapsError
from gaussian_maps.utils.numerology import (
    ProductCurveSpec,
    bel_criterion,
    dim_i2_expected,
    genus_product,
    h0_kK,
    surj_possible,
    surjectivity_threshold,
    wahl_product_hypotheses,
)


def parse_product(text: str) -> ProductCurveSpec:
    """Parse 'g1,g2,d1,d2'."""

    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 4 or not all(p.lstrip("-").isdigit() for p in parts):
        raise GaussianMapsError(f"--product expects four integers 'g1,g2,d1,d2', got {text!r}")

    g1, g2, d1, d2 = map(int, parts)
    return ProductCurveSpec(g1=g1, g2=g2, d1=d1, d2=d2)


@argh.arg("--g", type=int, help="Genus for the dimension counts.")
@argh.arg("--k", type=int, help="Multiple k of the canonical bundle for h0(kK).")
@argh.arg("--product", help="Curve on a product of curves, as 'g1,g2,d1,d2'.")
@argh.arg("--l", type=int, help="Degree l for the surjectivity criterion on genus --g.")
def numerology(
    *,
    g: int | None = None,
    k: int = 4,
    product: str | None = None,
    l: int | None = None,
) -> dict:
    """
    Closed-form counts: the surjectivity threshold, dimension counts for genus --g,
    and the genus and degree hypotheses of a curve on a product of curves.
    """

    result: dict = {"surjectivity_threshold": surjectivity_threshold()}

    if g is not None:
        result["genus"] = {
            "g": g,
            "k": k,
            "h0_kK": h0_kK(g, k),
            "dim_i2_expected": dim_i2_expected(g, hyperelliptic=False),
            "dim_i2_expected_hyperelliptic": dim_i2_expected(g, hyperelliptic=True),
            "surj_possible": surj_possible(g),
        }
        if l is not None:
            result["genus"]["l"] = l
            result["genus"]["bel_criterion"] = bel_criterion(g, l)

    elif l is not None:
        raise GaussianMapsError("--l needs --g")

    if product:
        spec = parse_product(product)
        result["product"] = {
            "g1": spec.g1,
            "g2": spec.g2,
            "d1": spec.d1,
            "d2": spec.d2,
            "genus": genus_product(spec),
            "hypotheses": wahl_product_hypotheses(spec),
        }

    return result


if __name__ == "__main__":
    dispatch_report_command(fn=numerology)
