#!/usr/bin/env python3
"""Summarize the calibration bands for a profile via the CLI.

Usage: calibration_report.py <hetnet-binary> <profile.json>
"""

import csv
import io
import statistics
import subprocess
import sys


def run(binary, *args):
    out = subprocess.run([binary, *args], check=True, capture_output=True, text=True)
    return list(csv.DictReader(io.StringIO(out.stdout)))


def main():
    if len(sys.argv) != 3:
        sys.exit(__doc__)
    binary, profile = sys.argv[1], sys.argv[2]

    rows = run(binary, "sweep", "--config", profile, "--param", "users",
               "--from", "300", "--to", "300", "--step", "1", "--reps", "5",
               "--method", "dsm", "--method", "rhm_direct")
    dsm = [r for r in rows if r["method"] == "dsm"]
    rhm = [r for r in rows if r["method"] == "rhm_direct"]
    n = 300
    frac = [int(r["offloaded_count"]) / n for r in rhm]
    ratio = [float(a["avg_cost_per_user"]) / float(b["avg_cost_per_user"])
             for a, b in zip(rhm, dsm)]
    print(f"offloaded fraction at n={n}: "
          f"{min(frac):.3f} .. {max(frac):.3f} (band 0.60 .. 0.90)")
    print(f"cost ratio rhm/dsm at n={n}: "
          f"mean {statistics.mean(ratio):.3f} (band <= 0.85)")

    rows = run(binary, "sweep", "--config", profile, "--param", "users",
               "--from", "300", "--to", "700", "--step", "50", "--reps", "1",
               "--method", "dsm", "--method", "rhm_direct")
    crossover = None
    rhm_ok = True
    for r in rows:
        if r["method"] == "dsm" and float(r["service_rate"]) < 1.0 and crossover is None:
            crossover = int(float(r["sweep_value"]))
        if r["method"] == "rhm_direct" and float(r["service_rate"]) < 1.0:
            rhm_ok = False
    print(f"dsm crossover: n={crossover} (band 300 .. 700)")
    print(f"rhm full service through n=700: {rhm_ok}")


if __name__ == "__main__":
    main()
