import os
import random
from functools import cache
from typing import TypedDict

from dotenv import load_dotenv

from gaussian_maps.utils.linalg import random_prime


class Settings(TypedDict):
    n_jobs: int
    seed: int
    prime_bits: int


def get_settings() -> Settings:
    """Read settings from the environment (and a `.env` file in the working directory, if any)."""

    load_dotenv(override=True)

    settings = Settings(
        n_jobs=int(os.environ.get("GAUSSIAN_MAPS_N_JOBS", 1)),
        seed=int(os.environ.get("GAUSSIAN_MAPS_SEED", 20071)),
        prime_bits=int(os.environ.get("GAUSSIAN_MAPS_PRIME_BITS", 30)),
    )

    if settings["prime_bits"] < 8:
        raise ValueError(f"GAUSSIAN_MAPS_PRIME_BITS must be at least 8, got {settings['prime_bits']}")

    return settings


@cache
def seeded_prime(seed: int, bits: int) -> int:
    return random_prime(random.Random(seed), bits=bits)


def default_prime() -> int:
    """The modular pre-pass prime for the configured seed and bit size."""
    settings = get_settings()
    return seeded_prime(settings["seed"], settings["prime_bits"])
