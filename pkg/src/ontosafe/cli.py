"""Command-line front end.

Thin client over the service handlers: requests are built from files and
flags, executed in process by default, or sent to a running service with
--server. Output is byte-deterministic.

Exit codes: 0 success (and safe for `check`), 1 unsafe, 2 usage or parse
error, 3 enumeration cap or oracle envelope exceeded.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Iterable, Optional

from .model import format_weight
from .service.handlers import (
    ServiceError,
    handle_check,
    handle_closure,
    handle_explain,
    handle_sanitize,
)
from .service.schemas import (
    DEFAULT_CAP,
    CheckRequest,
    CheckResponse,
    ClosureRequest,
    ClosureResponse,
    ExplainRequest,
    ExplainResponse,
    SanitizeRequest,
    SanitizeResponse,
)

EXIT_OK = 0
EXIT_UNSAFE = 1
EXIT_USAGE = 2
EXIT_LIMIT = 3


class LocalClient:
    def closure(self, req: ClosureRequest) -> ClosureResponse:
        return handle_closure(req)

    def check(self, req: CheckRequest) -> CheckResponse:
        return handle_check(req)

    def explain(self, req: ExplainRequest) -> ExplainResponse:
        return handle_explain(req)

    def sanitize(self, req: SanitizeRequest) -> SanitizeResponse:
        return handle_sanitize(req)


class HttpClient:
    """Same interface as LocalClient, over HTTP."""

    def __init__(self, base_url: str):
        self.base_url = base_url.rstrip("/")

    def _post(self, path: str, req, response_model):
        import httpx

        try:
            resp = httpx.post(
                f"{self.base_url}{path}", json=req.model_dump(), timeout=120.0
            )
            if resp.status_code == 400:
                detail = resp.json().get("detail")
                if isinstance(detail, dict) and "message" in detail:
                    raise ServiceError(detail.get("kind", "parse"), detail["message"])
                raise ServiceError("parse", str(detail))
            resp.raise_for_status()
        except httpx.HTTPError as exc:
            raise ServiceError("parse", f"server request failed: {exc}") from exc
        return response_model.model_validate(resp.json())

    def closure(self, req: ClosureRequest) -> ClosureResponse:
        return self._post("/closure", req, ClosureResponse)

    def check(self, req: CheckRequest) -> CheckResponse:
        return self._post("/check", req, CheckResponse)

    def explain(self, req: ExplainRequest) -> ExplainResponse:
        return self._post("/explain", req, ExplainResponse)

    def sanitize(self, req: SanitizeRequest) -> SanitizeResponse:
        return self._post("/sanitize", req, SanitizeResponse)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ontosafe",
        description="Safety checking and sanitization for weighted ontologies.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--server",
        metavar="URL",
        default=None,
        help="send the request to a running service instead of computing in process",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser(
        "closure", parents=[common], help="print every derivable fact, sorted"
    )
    p.add_argument("input", help="ontology file")

    p = sub.add_parser(
        "check", parents=[common], help="decide whether a relation subset is safe"
    )
    p.add_argument("input", help="ontology file")
    p.add_argument("--sensitive", required=True, help="sensitive-facts file")
    p.add_argument(
        "--subset",
        default=None,
        help="comma-separated relation ids to check (default: all)",
    )

    p = sub.add_parser(
        "explain",
        parents=[common],
        help="minimal support sets per sensitive fact",
    )
    p.add_argument("input", help="ontology file")
    p.add_argument("--sensitive", required=True, help="sensitive-facts file")
    p.add_argument(
        "--cap",
        type=int,
        default=DEFAULT_CAP,
        help="abort once any fact accumulates this many minimal sets",
    )

    p = sub.add_parser(
        "sanitize",
        parents=[common],
        help="maximum-weight sub-ontology deriving no sensitive fact",
    )
    p.add_argument("input", help="ontology file")
    p.add_argument("--sensitive", default=None, help="sensitive-facts file")
    p.add_argument(
        "--minsets",
        default=None,
        help="precomputed minsets file; wins over --sensitive",
    )
    p.add_argument(
        "--method", choices=("greedy", "augment", "oracle"), default="augment"
    )
    p.add_argument(
        "--cap",
        type=int,
        default=DEFAULT_CAP,
        help="cap for minsets computed from --sensitive",
    )
    p.add_argument(
        "--dump-border",
        action="store_true",
        help="append the reduced instance's border graph (one edge per line)",
    )
    return parser


def _read_file(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ServiceError("parse", f"cannot read {path}: {exc}") from exc


def _parse_subset(value: Optional[str]) -> Optional[list[str]]:
    if value is None:
        return None
    ids = value.split(",")
    if not all(ids):
        raise ServiceError("parse", "--subset must be comma-separated relation ids")
    return ids


def _check_cap(cap: int) -> int:
    if cap <= 0:
        raise ServiceError("parse", "--cap must be positive")
    return cap


def _lines(items: Iterable[str]) -> str:
    return "".join(item + "\n" for item in items)


def _ids_line(tag: str, ids: Iterable[str]) -> str:
    ids = list(ids)
    return f"{tag} {' '.join(ids)}" if ids else tag


def run(args: argparse.Namespace) -> tuple[str, int]:
    client = HttpClient(args.server) if args.server else LocalClient()

    if args.subcommand == "closure":
        resp = client.closure(ClosureRequest(ontology=_read_file(args.input)))
        return _lines(resp.facts), EXIT_OK

    if args.subcommand == "check":
        resp = client.check(
            CheckRequest(
                ontology=_read_file(args.input),
                sensitive=_read_file(args.sensitive),
                subset=_parse_subset(args.subset),
            )
        )
        if resp.safe:
            return "SAFE true\n", EXIT_OK
        witness = f"WITNESS {resp.witness_fact} FROM {' '.join(resp.witness_support)}"
        return _lines(["SAFE false", witness]), EXIT_UNSAFE

    if args.subcommand == "explain":
        resp = client.explain(
            ExplainRequest(
                ontology=_read_file(args.input),
                sensitive=_read_file(args.sensitive),
                cap=_check_cap(args.cap),
            )
        )
        out: list[str] = []
        for entry in resp.facts:
            out.append(f"FACT {entry.fact}")
            out.extend(_ids_line("MINSET", ms) for ms in entry.minsets)
        return _lines(out), EXIT_OK

    resp = client.sanitize(
        SanitizeRequest(
            ontology=_read_file(args.input),
            sensitive=_read_file(args.sensitive) if args.sensitive else None,
            minsets=_read_file(args.minsets) if args.minsets else None,
            method=args.method,
            cap=_check_cap(args.cap),
            dump_border=args.dump_border,
        )
    )
    out = [
        _ids_line("KEEP", resp.kept),
        _ids_line("REMOVE", resp.removed),
        f"WEIGHT {format_weight(resp.weight)}",
        f"METHOD {resp.method}",
        f"OPTIMAL {'true' if resp.optimal else 'false'}",
    ]
    text = _lines(out)
    if resp.border_dump:
        text += resp.border_dump
    return text, EXIT_OK


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        text, code = run(args)
    except ServiceError as exc:
        print(f"ontosafe: error: {exc.message}", file=sys.stderr)
        return EXIT_USAGE if exc.kind == "parse" else EXIT_LIMIT
    sys.stdout.write(text)
    sys.stdout.flush()
    return code


if __name__ == "__main__":
    sys.exit(main())
