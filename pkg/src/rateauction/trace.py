"""Convergence-trace emission.

One CSV row per (iteration, user) with nine-significant-digit numbers,
followed by a commented summary block.  Output is byte-stable: the same
run always renders the same file.
"""

from __future__ import annotations

from .engine import RunResult

TRACE_HEADER = "iteration,user_id,price,rate,bid,a,b"


def format_number(x: float) -> str:
    """Nine significant digits, no trailing noise."""
    return f"{x:.9g}"


def render_trace(result: RunResult) -> str:
    lines = [TRACE_HEADER]
    for rec in result.trace:
        lines.append(
            ",".join(
                (
                    str(rec.iteration),
                    str(rec.user_id),
                    format_number(rec.price),
                    format_number(rec.rate),
                    format_number(rec.bid),
                    format_number(rec.a) if rec.a is not None else "",
                    format_number(rec.b) if rec.b is not None else "",
                )
            )
        )
    lines.append(f"# stop_reason,{result.stop_reason}")
    lines.append(
        f"# converged_at,{result.converged_at if result.converged_at is not None else ''}"
    )
    lines.append(f"# iterations,{result.iterations}")
    lines.append(f"# final_price,{format_number(result.final_price)}")
    for uid in sorted(result.final_rates):
        lines.append(f"# final_rate,{uid},{format_number(result.final_rates[uid])}")
    return "\n".join(lines) + "\n"


def emit_trace(result: RunResult, path) -> None:
    """Write the trace table; I/O failures carry the destination path."""
    text = render_trace(result)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write trace to {path}: {exc}") from exc
