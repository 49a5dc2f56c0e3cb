#!/usr/bin/env python3
"""Serve the review API (and UI, when built) over a demo working directory.

Expects the layout produced by run_demo.py; creates it first when missing.

    python3 scripts/serve_demo.py --workdir /tmp/dataref-demo --port 8000
"""
import argparse
import logging
import sys
from pathlib import Path

import uvicorn

from dataref.api import create_app
from dataref.pipeline import PipelineConfig

log = logging.getLogger("serve_demo")

UI_DIST = Path(__file__).resolve().parent.parent / "frontend" / "dist"


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--workdir", default="demo-workdir")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8000)
    parser.add_argument("--workflow", choices=["per_reference", "per_feature"],
                        default="per_reference")
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")

    workdir = Path(args.workdir)
    if not (workdir / "out" / "sessions").is_dir():
        log.info("no sessions in %s yet, running the demo pipeline first", workdir)
        from run_demo import main as run_demo_main

        rc = run_demo_main(["--workdir", str(workdir), "--workflow", args.workflow])
        if rc != 0:
            return rc

    ui_dir = str(UI_DIST) if UI_DIST.is_dir() else None
    if ui_dir:
        log.info("serving UI from %s", ui_dir)
    else:
        log.info("frontend/dist not found; API only (build it with: cd frontend && npm run build)")
    config = PipelineConfig(
        records_path=str(workdir / "corpus" / "records.txt"),
        dictionary_path=str(workdir / "dictionary.tsv"),
        output_dir=str(workdir / "out"),
        ui_dir=ui_dir,
    )
    uvicorn.run(create_app(config), host=args.host, port=args.port, log_level="info")
    return 0


if __name__ == "__main__":
    sys.exit(main())
