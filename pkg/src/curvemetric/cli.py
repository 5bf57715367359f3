"""Command-line client for the curvemetric service.

Every subcommand (except ``serve``) is a thin HTTP client: it reads local
files, posts JSON to the service, and writes the response back to stdout or
local files. With ``--server URL`` it talks to a running instance; without
it, requests are dispatched to an in-process copy of the app, so the CLI
works standalone while exercising the exact same request path.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path


def build_client(server: str | None):
    if server:
        import httpx

        return httpx.Client(base_url=server, timeout=httpx.Timeout(600.0))
    import warnings

    with warnings.catch_warnings():
        # starlette suggests httpx2, which the platform does not ship yet
        warnings.filterwarnings("ignore", message="Using `httpx`")
        from fastapi.testclient import TestClient

    from .service.app import app

    return TestClient(app)


def _post(client, path: str, payload: dict) -> dict:
    response = client.post(path, json=payload)
    if response.status_code != 200:
        try:
            detail = response.json()
        except ValueError:
            detail = {"error": "HTTPError", "detail": response.text}
        print(json.dumps(detail), file=sys.stderr)
        raise SystemExit(1)
    return response.json()


def _load_trajectory_file(path) -> dict:
    return json.loads(Path(path).read_text())


def _learner_options(args) -> dict:
    options = {}
    if args.a_init is not None:
        options["a_init"] = args.a_init
    if args.step is not None:
        options["step_size"] = args.step
    if args.max_iters is not None:
        options["max_iters"] = args.max_iters
    if args.no_scan:
        options["use_coarse_scan"] = False
    return options


def _add_learner_flags(parser) -> None:
    parser.add_argument("--a-init", type=float, default=None, help="initial a value")
    parser.add_argument("--step", type=float, default=None, help="ascent step size")
    parser.add_argument("--max-iters", type=int, default=None, help="iteration cap")
    parser.add_argument("--no-scan", action="store_true", help="skip the coarse grid scan")


def cmd_synthesize(client, args) -> int:
    body = {"a_true": args.a_true, "T": args.T, "ns": args.ns,
            "sigma": args.sigma, "seed": args.seed}
    data = _post(client, "/synthesize", body)
    Path(args.out).write_text(json.dumps(data))
    print(json.dumps({"out": str(args.out), "T": len(data["times"]),
                      "n_s": len(data["curves"][0]), "split": data["split"]}))
    return 0


def cmd_fit(client, args) -> int:
    body = {
        "trajectory": _load_trajectory_file(args.trajectory),
        "options": _learner_options(args),
        "dump_fspace": args.dump_fspace is not None,
        "dump_model": args.dump_model is not None,
    }
    data = _post(client, "/fit", body)
    if args.dump_fspace is not None:
        Path(args.dump_fspace).write_text(json.dumps(data.pop("fspace")))
    if args.dump_model is not None:
        Path(args.dump_model).write_text(json.dumps(data.pop("model")))
    if args.history is not None:
        lines = ["a,r2"] + [f"{a!r},{r2!r}" for a, r2 in data["r2_val_history"]]
        Path(args.history).write_text("\n".join(lines) + "\n")
    print(json.dumps(data))
    return 0


def cmd_gradcheck(client, args) -> int:
    body = {"trajectory": _load_trajectory_file(args.trajectory),
            "a": args.a, "eps": args.eps}
    print(json.dumps(_post(client, "/gradcheck", body)))
    return 0


def cmd_compare(client, args) -> int:
    body = {"trajectory": _load_trajectory_file(args.trajectory),
            "options": _learner_options(args),
            "scan_dump": args.scan_dump is not None}
    data = _post(client, "/compare", body)
    if args.scan_dump is not None:
        rows = data.pop("scan")
        lines = ["a,r2_val,r2_test"] + [f"{a!r},{rv!r},{rt!r}" for a, rv, rt in rows]
        Path(args.scan_dump).write_text("\n".join(lines) + "\n")
    print(json.dumps(data))
    return 0


def cmd_sweep(client, args) -> int:
    grid = json.loads(Path(args.grid).read_text())
    data = _post(client, "/sweep", {"grid": grid, "jobs": args.jobs})
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "runs.csv").write_text(data["runs_csv"])
    (out / "summary.csv").write_text(data["summary_csv"])
    (out / "config.json").write_text(json.dumps(data["config"], indent=2))
    n_failed = sum(1 for r in data["records"] if r["error"])
    print(json.dumps({"out": str(out), "runs": len(data["records"]),
                      "failed": n_failed}))
    return 0


def cmd_summarize(client, args) -> int:
    runs_csv = (Path(args.in_dir) / "runs.csv").read_text()
    data = _post(client, "/summarize", {"runs_csv": runs_csv})
    Path(args.out).write_text(data["summary_csv"])
    print(json.dumps({"out": str(args.out), "rows": len(data["rows"])}))
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("curvemetric.service.app:app", host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="curvemetric",
        description="Learn the elastic-metric stretching parameter of a curve trajectory",
    )
    parser.add_argument("--server", default=None,
                        help="base URL of a running service (default: in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synthesize", help="generate a synthetic trajectory file")
    p.add_argument("--a-true", type=float, required=True)
    p.add_argument("--T", type=int, required=True)
    p.add_argument("--ns", type=int, required=True)
    p.add_argument("--sigma", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)

    p = sub.add_parser("fit", help="learn a* on a trajectory file")
    p.add_argument("--trajectory", required=True)
    _add_learner_flags(p)
    p.add_argument("--history", default=None, help="write (a, R2) iterates as CSV")
    p.add_argument("--dump-fspace", default=None,
                   help="write the trajectory's transform points at a* as JSON")
    p.add_argument("--dump-model", default=None,
                   help="write the fitted regression model at a* as JSON")

    p = sub.add_parser("gradcheck", help="analytic vs finite-difference gradient")
    p.add_argument("--trajectory", required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--eps", type=float, default=1e-6)

    p = sub.add_parser("compare", help="a* vs the a=1 baseline on one trajectory")
    p.add_argument("--trajectory", required=True)
    _add_learner_flags(p)
    p.add_argument("--scan-dump", default=None,
                   help="write a dense R2(a) scan of both splits as CSV")

    p = sub.add_parser("sweep", help="run a parameter grid")
    p.add_argument("--grid", required=True, help="JSON file with parameter lists and seeds")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("summarize", help="aggregate a sweep output directory")
    p.add_argument("--in", dest="in_dir", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        return cmd_serve(args)
    handlers = {
        "synthesize": cmd_synthesize,
        "fit": cmd_fit,
        "gradcheck": cmd_gradcheck,
        "compare": cmd_compare,
        "sweep": cmd_sweep,
        "summarize": cmd_summarize,
    }
    with build_client(args.server) as client:
        return handlers[args.command](client, args)


if __name__ == "__main__":
    sys.exit(main())
