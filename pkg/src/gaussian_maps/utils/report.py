import json
from pathlib import Path
from typing import Any, Mapping, NotRequired, Sequence, TypedDict

import pandas as pd

from gaussian_maps.utils.base_locus import BaseLocusVerdict
from gaussian_maps.utils.errors import ConfigFileError, GaussianMapsError
from gaussian_maps.utils.function_field import CurveModel
from gaussian_maps.utils.parsing import parse_poly
from gaussian_maps.utils.poly import UniPoly

SCHEMA_DIR = Path(__file__).parent.parent / "schemas"


class CurveSpec(TypedDict):
    n: int
    f: str
    label: NotRequired[str]
    moduli: NotRequired[list[str]]


class CurveEcho(TypedDict):
    n: int
    f: str
    label: str | None
    genus: int
    m: int
    d: int


class PlaceOrder(TypedDict):
    place: str
    min_order: int


class Certificate(TypedDict):
    modulus: str
    y_gcd: list[str]


class BaseLocusSummary(TypedDict):
    is_free: bool
    ram: list[PlaceOrder]
    infinity: list[PlaceOrder]
    affine_unram: list[Certificate]


class ModularChecks(TypedDict):
    primes: list[int]
    matrices: int
    agreements: int


class RankReport(TypedDict):
    curve: CurveEcho
    hyperelliptic: bool
    dim_i2: int
    dim_i2_expected: int
    rank_mu1K: int
    corank_mu1K: int
    rank_mu1L: int
    rank_mu2: int
    psi_rank: int
    psi_mu2_nonzero: int
    lower_bound_g_minus_3: bool
    factorization_checks: int
    factorization_checks_passed: int
    base_locus: BaseLocusSummary
    prime: int
    timings: NotRequired[dict[str, int]]
    modular_checks: NotRequired[ModularChecks]


class GeneralReport(TypedDict):
    equation: str
    label: str | None
    genus: int
    dim_i2: int
    rank_mu1K: int
    rank_mu2: int
    caveat: str
    prime: int


class VerifyRow(TypedDict):
    row: str
    description: str
    expected: str
    observed: str
    passed: bool


class VerifyReport(TypedDict):
    ok: bool
    rows: list[VerifyRow]


def curve_from_spec(spec: Mapping[str, Any]) -> tuple[CurveModel, list[UniPoly] | None]:
    """Validate a CurveSpec mapping and build the curve and its optional ramification moduli."""

    if "n" not in spec or "f" not in spec:
        raise GaussianMapsError(f"curve spec needs keys 'n' and 'f', got {sorted(spec)}")
    if not isinstance(spec["n"], int) or isinstance(spec["n"], bool):
        raise GaussianMapsError(f"curve spec 'n' must be an integer, got {spec['n']!r}")

    curve = CurveModel(n=spec["n"], f=parse_poly(str(spec["f"])), label=spec.get("label"))
    moduli = [parse_poly(p) for p in spec["moduli"]] if spec.get("moduli") else None

    return curve, moduli


def load_curve_specs(path: Path | str) -> list[CurveSpec]:
    """Read `{"curves": [CurveSpec, ...]}` from a JSON config file."""

    path = Path(path)
    if not path.exists():
        raise ConfigFileError(f"config file {path} does not exist", path=str(path))

    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigFileError(f"config file {path} is not valid JSON: {exc}", path=str(path)) from exc

    if not isinstance(data, dict) or not isinstance(data.get("curves"), list):
        raise ConfigFileError(f"config file {path} must hold an object with a 'curves' array", path=str(path))

    return data["curves"]


def curve_echo(curve: CurveModel) -> CurveEcho:
    return {"n": curve.n, "f": str(curve.f), "label": curve.label, "genus": curve.genus, "m": curve.m, "d": curve.d}


def summarize_verdict(verdict: BaseLocusVerdict) -> BaseLocusSummary:
    return {
        "is_free": verdict.is_free,
        "ram": [{"place": str(place), "min_order": order} for place, order in verdict.ram.items()],
        "infinity": [{"place": str(place), "min_order": order} for place, order in verdict.infinity.items()],
        "affine_unram": [{"modulus": str(c.modulus), "y_gcd": [str(p) for p in c.y_gcd]} for c in verdict.affine_unram],
    }


def render_json(obj: Any) -> str:
    """Stable serialisation: sorted keys, two-space indent, no floats."""

    def reject(value):
        raise TypeError(f"value {value!r} of type {type(value).__name__} is not serialisable in a report")

    return json.dumps(obj, sort_keys=True, indent=2, default=reject, allow_nan=False, ensure_ascii=False)


def render_text(obj: Any) -> str:
    """Human rendering: lists of flat records become tables, everything else `key: value` lines."""

    if isinstance(obj, list) and obj and all(isinstance(row, dict) for row in obj):
        return pd.DataFrame(obj).to_string(index=False)

    if not isinstance(obj, Mapping):
        return str(obj)

    lines = []
    for key in sorted(obj):
        value = obj[key]
        if isinstance(value, list) and value and all(isinstance(row, dict) for row in value):
            lines += [f"{key}:", render_text(value)]
        elif isinstance(value, (dict, list)):
            lines += [f"{key}: {json.dumps(value, sort_keys=True, ensure_ascii=False)}"]
        else:
            lines += [f"{key}: {value}"]

    return "\n".join(lines)


def write_csv(rows: Sequence[Mapping[str, Any]], path: Path | str, columns: Sequence[str] | None = None) -> Path:
    """Flatten nested report rows to dotted columns and write them as CSV, optionally keeping only `columns`."""

    path = Path(path)
    df = pd.json_normalize(list(rows))
    if columns is not None:
        df = df.reindex(columns=list(columns))
    df.to_csv(path, index=False)
    return path


def load_schema(name: str) -> dict:
    return json.loads((SCHEMA_DIR / name).read_text(encoding="utf-8"))
