"""Write the hand-checked fixtures D1-D4 (and a few parameter files) to data/."""

from __future__ import annotations

import argparse
from pathlib import Path

from nevpick import jsonio
from nevpick.datasets import serialize_dataset
from nevpick.fixtures import d1, d1_simple, d2, d3, d4_simple


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dir", default=str(Path(__file__).resolve().parent.parent / "data"))
    out = Path(ap.parse_args().dir)
    out.mkdir(parents=True, exist_ok=True)
    files = {
        "d1.json": serialize_dataset(d1()),
        "d1_simple.json": serialize_dataset(d1_simple()),
        "d2.json": serialize_dataset(d2()),
        "d3.json": serialize_dataset(d3()),
        "d4.json": serialize_dataset(d4_simple(0.0)),
        "d4_rho1.json": serialize_dataset(d4_simple(1.0)),
        "g_half.json": jsonio.dumps({"kind": "constant", "value": jsonio.encode_matrix([[0.5]])}),
        "s_one.json": jsonio.dumps({"kind": "constant", "value": jsonio.encode_matrix([[1.0]])}),
    }
    for name, text in files.items():
        (out / name).write_text(text + "\n")
        print(out / name)


if __name__ == "__main__":
    main()
