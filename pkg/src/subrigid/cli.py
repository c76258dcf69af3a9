"""Thin command-line client for the rigidity service.

The CLI only parses arguments and a spec file, hands the request to the same
runner the HTTP service uses (or to a remote service with --server), prints
the JSON report on stdout and a one-line human summary on stderr.

Exit codes: 0 success, 2 rejected input (non-primitive, periodic, malformed
spec), 1 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .errors import RejectedInput
from .service.runner import RunOptions, profile_csv, run
from .service.schemas import Report, SubstitutionSpec, parse_spec


def _read_spec(path: str, fmt: str | None) -> SubstitutionSpec:
    if path == "-":
        text = sys.stdin.read()
        return parse_spec(text, fmt or "json")
    file = Path(path)
    if not file.exists():
        raise RejectedInput(f"spec file not found: {path}")
    if fmt is None:
        fmt = "toml" if file.suffix.lower() == ".toml" else "json"
    return parse_spec(file.read_text(encoding="utf-8"), fmt)


def _post_remote(server: str, command: str, payload: dict) -> Report:
    import httpx

    response = httpx.post(f"{server.rstrip('/')}/{command}", json=payload, timeout=300.0)
    if response.status_code == 422:
        raise RejectedInput(response.json().get("detail", "rejected by server"))
    response.raise_for_status()
    return Report.model_validate(response.json())


def _remote_payload(command: str, spec: SubstitutionSpec | None, options: RunOptions) -> dict:
    if command == "approx":
        return {"delta": options.delta, "eps": options.eps}
    assert spec is not None
    payload: dict = {"spec": spec.echo()}
    if command in ("delta", "profile") and options.max_length is not None:
        payload["max"] = options.max_length
    if command == "measure":
        payload["word"] = options.word
    if command == "diagnose":
        payload["n"] = options.n
    if command == "oracle":
        payload.update({"word": options.word, "depth": options.depth})
    return payload


def _summary(report: Report, elapsed_ms: float) -> str:
    parts = [report.command, f"mode={report.mode}"]
    if report.rate is not None:
        exactness = "exact" if report.rate.exact else "lower bound"
        parts.append(f"delta={report.rate.lower} ({exactness})")
        if report.rate.sequence:
            parts.append(f"sequence={report.rate.sequence}")
    if report.measure is not None:
        parts.append(f"mu([{report.measure.word}])={report.measure.value}")
    if report.diagnostic is not None:
        parts.append(report.diagnostic.verdict)
    if report.approx is not None:
        parts.append(f"achieved={report.approx.achieved} gap={report.approx.gap}")
    if report.oracle is not None:
        parts.append(f"empirical={report.oracle.value:.6f}")
    if report.certificates:
        parts.append(f"certificates={len(report.certificates)}")
    parts.append(f"[{elapsed_ms:.0f} ms]")
    return " ".join(parts)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subrigid",
        description="Exact cylinder measures and partial rigidity rates of substitution subshifts.",
    )
    parser.add_argument("--server", help="base URL of a running service; run remotely instead of in-process")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_spec(p: argparse.ArgumentParser) -> None:
        p.add_argument("spec", help="path to a JSON or TOML substitution spec ('-' for stdin)")
        p.add_argument("--format", choices=["json", "toml"], default=None, help="spec format (default: by extension)")

    p = sub.add_parser("analyze", help="classification, complexity, measures, rate, certificates")
    with_spec(p)
    p = sub.add_parser("measure", help="exact measure of one cylinder")
    with_spec(p)
    p.add_argument("--word", required=True)
    p = sub.add_parser("delta", help="partial rigidity rate report")
    with_spec(p)
    p.add_argument("--max", type=int, default=None, help="profile scan bound (default 4l+8)")
    p = sub.add_parser("profile", help="complete-word mass a_m for m in [2, max]")
    with_spec(p)
    p.add_argument("--max", type=int, default=None)
    p.add_argument("--csv", default=None, help="also write the profile as CSV to this path")
    p = sub.add_parser("certify", help="sufficient-condition certificates")
    with_spec(p)
    p = sub.add_parser("diagnose", help="complete-word ratio table and rigidity verdict")
    with_spec(p)
    p.add_argument("--n", type=int, default=20)
    p = sub.add_parser("approx", help="product construction approximating a target rate")
    p.add_argument("--delta", required=True, help="target rate in (0,1), e.g. 0.3 or 3/10")
    p.add_argument("--eps", default="1e-6", help="stop once the achieved rate is this close")
    p = sub.add_parser("oracle", help="empirical block frequency from an iterated image")
    with_spec(p)
    p.add_argument("--word", required=True)
    p.add_argument("--depth", type=int, required=True)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    command = args.command
    try:
        spec = None
        if command != "approx":
            spec = _read_spec(args.spec, getattr(args, "format", None))
        options = RunOptions(
            word=getattr(args, "word", None),
            max_length=getattr(args, "max", None),
            n=getattr(args, "n", 20),
            delta=getattr(args, "delta", None),
            eps=getattr(args, "eps", "1e-6"),
            depth=getattr(args, "depth", None),
        )
        start = time.perf_counter()
        if args.server:
            report = _post_remote(args.server, command, _remote_payload(command, spec, options))
        else:
            report = run(command, spec, options)
        elapsed_ms = (time.perf_counter() - start) * 1000.0
        csv_path = getattr(args, "csv", None)
        if csv_path:
            Path(csv_path).write_text(profile_csv(report), encoding="utf-8")
        print(report.to_json())
        print(_summary(report, elapsed_ms), file=sys.stderr)
        return 0
    except RejectedInput as exc:
        print(json.dumps({"error": "rejected", "detail": str(exc)}), file=sys.stderr)
        return 2
    except BrokenPipeError:
        return 1
    except Exception as exc:  # internal error
        print(json.dumps({"error": "internal", "detail": f"{type(exc).__name__}: {exc}"}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
