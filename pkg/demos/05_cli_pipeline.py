#!/usr/bin/env python3
"""End-to-end command-line pipeline.

Drives the installed ``toeplitz-spectra`` command: tabulate a spectral
function, verify an operator identity, classify the table, and show the
deterministic CSV format.  Output files land in ./cli_demo_output.
"""

import pathlib
import subprocess
import sys

OUT = pathlib.Path("cli_demo_output")
OUT.mkdir(exist_ok=True)


def run(*argv):
    print("$", " ".join(argv))
    proc = subprocess.run(argv, capture_output=True, text=True)
    sys.stdout.write(proc.stdout)
    sys.stderr.write(proc.stderr)
    print(f"  (exit code {proc.returncode})\n")
    return proc.returncode


gamma_csv = str(OUT / "delta_gamma.csv")
run("toeplitz-spectra", "gamma", "--geometry", "parabolic", "--lambda", "0",
    "--symbol", "delta:loc=1", "--grid", "log:0.001:10000:200", "--out", gamma_csv)

run("toeplitz-spectra", "classify", "--in", gamma_csv, "--metric", "log",
    "--out", str(OUT / "delta_classify.json"))

run("toeplitz-spectra", "classify", "--builtin", "hmv", "--metric", "log",
    "--out", str(OUT / "hmv_classify.json"))

run("toeplitz-spectra", "verify", "elliptic-diag", "--lambda", "0",
    "--symbol", "indicator:0,0.5", "--N", "16", "--out", str(OUT / "diag_report.json"))

run("toeplitz-spectra", "verify", "normalization", "--lambda", "2.5",
    "--out", str(OUT / "normalization.json"))

print("first lines of the CSV table:")
with open(gamma_csv, "r", encoding="utf-8") as fh:
    for _ in range(6):
        print(" ", fh.readline().rstrip())
