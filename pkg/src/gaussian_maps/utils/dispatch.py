import contextlib
import inspect
import sys
from functools import wraps
from typing import Callable, Sequence

import argh

from gaussian_maps.utils.errors import GaussianMapsError
from gaussian_maps.utils.report import render_json, render_text


def report_command(fn: Callable) -> Callable:
    """
    Wrap a command `fn` with an additional `json` argument. With `json=True` stdout is redirected
    to stderr while `fn` runs and the result is printed as a stable JSON document; otherwise the
    result is printed as text.

    Exit status: 2 on a GaussianMapsError (rendered as a structured diagnostic), 1 when the
    result carries `"ok": False`, 0 otherwise.
    """

    json_param = inspect.Parameter(
        name="json",
        kind=inspect.Parameter.KEYWORD_ONLY,
        default=False,
        annotation=bool,
    )

    @wraps(fn)
    @argh.arg(
        "--json",
        help="Print the result as a key-sorted JSON document on stdout.",
        default=json_param.default,
    )
    def wrapped_fn(*args, **kwargs):

        as_json = kwargs.pop("json", json_param.default)

        try:
            if as_json:
                with contextlib.redirect_stdout(new_target=sys.stderr):
                    res = fn(*args, **kwargs)
                out = render_json(res)
            else:
                res = fn(*args, **kwargs)
                out = render_text(res)

        except GaussianMapsError as exc:
            diagnostic = {"error": {"type": type(exc).__name__, "message": str(exc), **exc.details}}
            if as_json:
                print(render_json(diagnostic))
            else:
                print(f"error: {exc}", file=sys.stderr)
            raise SystemExit(2) from exc

        print(out)

        if isinstance(res, dict) and res.get("ok") is False:
            raise SystemExit(1)

    # update the function signature so that argh can parse it correctly
    sig = inspect.signature(fn)
    wrapped_fn.__signature__ = sig.replace(
        parameters=[*sig.parameters.values(), json_param],
    )

    return wrapped_fn


def dispatch_report_command(fn: Callable) -> None:
    """Dispatch a single command with `argh`, as `python -m gaussian_maps.scripts.<name>`."""
    argh.dispatch_command(
        function=report_command(fn),
        old_name_mapping_policy=False,
    )


def dispatch_report_commands(fns: Sequence[Callable], argv: Sequence[str] | None = None) -> None:
    """Dispatch several commands as subcommands of one parser."""

    argh.dispatch_commands(
        functions=[report_command(fn) for fn in fns],
        argv=argv,
        old_name_mapping_policy=False,
    )
