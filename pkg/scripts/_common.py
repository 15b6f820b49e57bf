"""Shared helpers for the experiment scripts."""

import argparse
from pathlib import Path

from household_alloc.config import load_config

ROOT = Path(__file__).resolve().parent.parent


def parser(description, default_config="all_ones.cfg"):
    p = argparse.ArgumentParser(description=description)
    p.add_argument("--config", default=str(ROOT / "configs" / default_config))
    p.add_argument("--out-dir", default=str(ROOT / "results"))
    return p


def setup(args):
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return load_config(args.config), out


def print_verdicts(result):
    for d, verdict in result.verdicts.items():
        want = result.expected.get(d)
        mark = "" if want is None else (" ok" if want == verdict else f" MISMATCH (expected {want})")
        print(f"  {d}: {verdict}{mark}")
