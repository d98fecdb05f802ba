"""Command-line entry point: configure and serve the simulator.

Flags (each overridable by environment variable):
  --port     SWAPSIM_PORT      listen port, default 8080
  --host     SWAPSIM_HOST      bind address, default 127.0.0.1
  --data-dir SWAPSIM_DATA_DIR  directory for the event log and party file
  --seed     SWAPSIM_SEED      simulation seed, default 42
  --storage  SWAPSIM_STORAGE   memory | file (file requires --data-dir)

--export-openapi PATH writes the generated endpoint reference and exits
without starting a server.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .app import DEFAULT_SEED, SimulatorApp
from .api import create_api


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swapsim-server",
        description="Event-sourced interest rate swap lifecycle simulator.",
    )
    parser.add_argument(
        "--port",
        type=int,
        default=int(os.environ.get("SWAPSIM_PORT", "8080")),
        help="listen port (default 8080)",
    )
    parser.add_argument(
        "--host",
        default=os.environ.get("SWAPSIM_HOST", "127.0.0.1"),
        help="bind address (default 127.0.0.1)",
    )
    parser.add_argument(
        "--data-dir",
        default=os.environ.get("SWAPSIM_DATA_DIR"),
        help="directory for the event log and party registry file",
    )
    parser.add_argument(
        "--seed",
        type=int,
        default=int(os.environ.get("SWAPSIM_SEED", str(DEFAULT_SEED))),
        help="simulation seed for rate fixings (default 42)",
    )
    parser.add_argument(
        "--storage",
        choices=("memory", "file"),
        default=os.environ.get("SWAPSIM_STORAGE", "memory"),
        help="event store backend (file requires --data-dir)",
    )
    parser.add_argument(
        "--export-openapi",
        metavar="PATH",
        help="write the OpenAPI document to PATH and exit",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)

    if args.export_openapi:
        app = create_api(SimulatorApp(seed=args.seed))
        path = Path(args.export_openapi)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(app.openapi(), indent=2, sort_keys=True) + "\n")
        print(f"wrote {path}")
        return 0

    sim = SimulatorApp(storage=args.storage, data_dir=args.data_dir, seed=args.seed)
    app = create_api(sim)

    import uvicorn

    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


if __name__ == "__main__":
    sys.exit(main())
