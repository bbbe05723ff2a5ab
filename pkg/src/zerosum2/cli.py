"""Command-line front end.

By default every subcommand runs in-process through the same runners the
HTTP service uses.  With --server (or ZEROSUM2_SERVER set) the CLI turns
into a thin client and posts the request to a running service instead.

The certificate goes to stdout (or --output FILE); progress and errors go
to stderr.  Exit codes: 0 verified/ok, 2 counterexample/violations found,
1 usage or execution error.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Any, Optional

from .certificates import Certificate, exit_code_for
from .propb import CheckpointError
from .runners import run_davenport, run_lemma, run_propb, run_triple, run_twomult

SERVER_ENV = "ZEROSUM2_SERVER"

_SERVER_PATHS = {
    "propb": "/verify/propb",
    "triple": "/verify/triple",
    "twomult": "/verify/twomult",
    "davenport": "/davenport",
}


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--server",
        default=argparse.SUPPRESS,
        help="base URL of a zerosum2 service (or ZEROSUM2_SERVER); run remotely",
    )
    common.add_argument(
        "--output",
        "-o",
        default=argparse.SUPPRESS,
        help="write the certificate to this file instead of stdout",
    )
    ap = argparse.ArgumentParser(
        prog="zerosum2",
        parents=[common],
        description="Verification toolkit for zero-sum problems in rank-2 cyclic groups",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("propb", parents=[common], help="exhaustive fixed-n verification")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-mult", type=int, default=None, help="multiplicity cap (default n-3)")
    p.add_argument("--workers", type=int, default=0, help="worker processes (0 = all cores)")
    p.add_argument("--deterministic", action="store_true", help="single sequential worker")
    p.add_argument("--checkpoint", help="shard log file (see also ZEROSUM2_CHECKPOINT_DIR)")
    p.add_argument("--resume", action="store_true", help="skip shards already in the checkpoint")

    p = sub.add_parser(
        "twomult",
        parents=[common],
        help="uniform-prime verification for two large multiplicities",
    )
    p.add_argument("--max-k", type=int, default=14)
    p.add_argument("--k1", type=int)
    p.add_argument("--k2", type=int)
    p.add_argument("--workers", type=int, default=0)
    p.add_argument("--deterministic", action="store_true")

    p = sub.add_parser(
        "triple",
        parents=[common],
        help="three-large-multiplicities verification at fixed prime",
    )
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--m1-cap", type=int, default=None)
    p.add_argument("--workers", type=int, default=0)
    p.add_argument("--deterministic", action="store_true")

    p = sub.add_parser("lemma", parents=[common], help="exhaustive lemma certification")
    p.add_argument(
        "name",
        help="onedim | olson | olson-fmc | olson-size | ksubsets | coset "
        "| cauchy-davenport | compact-cover",
    )
    p.add_argument("--p", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--max-size", type=int)
    p.add_argument("--sizes", type=int, nargs="*")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)

    p = sub.add_parser(
        "davenport", parents=[common], help="brute-force Davenport constant of the rank-2 group"
    )
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("serve", parents=[common], help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return ap


def _workers(args: argparse.Namespace) -> int:
    if getattr(args, "deterministic", False):
        return 1
    w = getattr(args, "workers", 1)
    if w == 0:
        return os.cpu_count() or 1
    return w


def _lemma_params(args: argparse.Namespace) -> dict[str, Any]:
    params: dict[str, Any] = {}
    for key in ("p", "s", "n", "max_size", "trials", "seed"):
        val = getattr(args, key, None)
        if val is not None:
            params[key] = val
    if args.sizes:
        params["sizes"] = args.sizes
    return params


def _run_local(args: argparse.Namespace) -> Certificate:
    if args.command == "propb":
        return run_propb(
            n=args.n,
            max_mult=args.max_mult,
            workers=_workers(args),
            checkpoint=args.checkpoint,
            resume=args.resume,
        )
    if args.command == "twomult":
        return run_twomult(max_k=args.max_k, k1=args.k1, k2=args.k2, workers=_workers(args))
    if args.command == "triple":
        return run_triple(p=args.p, m1_cap=args.m1_cap, workers=_workers(args))
    if args.command == "lemma":
        return run_lemma(args.name, **_lemma_params(args))
    if args.command == "davenport":
        return run_davenport(n=args.n)
    raise ValueError(f"unhandled command {args.command!r}")


def _run_remote(args: argparse.Namespace) -> Certificate:
    import httpx

    base = args.server.rstrip("/")
    if args.command == "lemma":
        path = f"/lemmas/{args.name}"
        payload: dict[str, Any] = {"params": _lemma_params(args)}
    else:
        path = _SERVER_PATHS[args.command]
        if args.command == "propb":
            payload = {
                "n": args.n,
                "max_mult": args.max_mult,
                "workers": _workers(args),
                "checkpoint": args.checkpoint,
                "resume": args.resume,
            }
        elif args.command == "twomult":
            payload = {"max_k": args.max_k, "k1": args.k1, "k2": args.k2, "workers": _workers(args)}
        elif args.command == "triple":
            payload = {"p": args.p, "m1_cap": args.m1_cap, "workers": _workers(args)}
        else:
            payload = {"n": args.n}
    resp = httpx.post(base + path, json=payload, timeout=None)
    if resp.status_code >= 400:
        raise ValueError(f"server returned {resp.status_code}: {resp.text}")
    return Certificate.model_validate(resp.json())


def main(argv: Optional[list[str]] = None) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    args.server = getattr(args, "server", None) or os.environ.get(SERVER_ENV)
    args.output = getattr(args, "output", None)

    if args.command == "serve":
        import uvicorn

        from .service import app as service_app

        uvicorn.run(service_app, host=args.host, port=args.port)
        return 0

    try:
        cert = _run_remote(args) if args.server else _run_local(args)
    except CheckpointError as exc:
        print(f"checkpoint error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    text = cert.to_json()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"certificate written to {args.output}", file=sys.stderr)
    else:
        sys.stdout.write(text)
    print(f"verdict: {cert.verdict}", file=sys.stderr)
    return exit_code_for(cert.verdict)


if __name__ == "__main__":
    sys.exit(main())
