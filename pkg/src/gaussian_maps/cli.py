from gaussian_maps.scripts.analyze import analyze
from gaussian_maps.scripts.baselocus import baselocus
from gaussian_maps.scripts.numerology import numerology
from gaussian_maps.scripts.sweep import sweep
from gaussian_maps.scripts.verify import verify
from gaussian_maps.utils.dispatch import dispatch_report_commands


def main(argv: list[str] | None = None):
    """Entry point of `gaussian-maps`: analyze, sweep, numerology, verify, baselocus."""
    dispatch_report_commands([analyze, sweep, numerology, verify, baselocus], argv=argv)


if __name__ == "__main__":
    main()
