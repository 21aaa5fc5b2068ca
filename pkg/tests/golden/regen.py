"""Regenerate the golden CLI outputs in this directory.

The golden files pin the exact bytes the command line produces for three
fixed problems. Rerun after an intentional output-format change:

    python3 tests/golden/regen.py
"""

import pathlib

from tristeiner.cli import main

HERE = pathlib.Path(__file__).parent

PROBLEMS = {
    "eq.json": '{"terminals": [[0.0, 0.0], [1.0, 0.0], [0.5, 0.8660254037844386]]}\n',
    "sc.json": '{"terminals": [[0.0, 0.0], [4.0, 0.0], [1.0, 3.0]], "budget": 8.0}\n',
    "wd.json": '{"terminals": [[0.0, 0.0], [1.0, 0.0], [-1.0, 0.2]]}\n',
}


def run() -> None:
    for name, text in PROBLEMS.items():
        (HERE / name).write_text(text, encoding="utf-8")
    jobs = [
        ["solve", "--spec", str(HERE / "eq.json"), "--budget", "2",
         "--out", str(HERE / "eq_solve.json"),
         "--image", str(HERE / "eq_network.svg")],
        ["solve", "--spec", str(HERE / "sc.json"),
         "--out", str(HERE / "sc_solve.json")],
        ["solve", "--spec", str(HERE / "wd.json"), "--budget", "2.5",
         "--out", str(HERE / "wd_solve.json")],
        ["sweep", "--spec", str(HERE / "eq.json"),
         "--from", "1.7320508075688772", "--to", "3.0", "--samples", "9",
         "--out", str(HERE / "eq_sweep.csv"),
         "--curve-image", str(HERE / "eq_curve.svg")],
    ]
    for argv in jobs:
        rc = main(argv)
        if rc != 0:
            raise SystemExit(f"golden job failed with exit {rc}: {argv}")


if __name__ == "__main__":
    run()
