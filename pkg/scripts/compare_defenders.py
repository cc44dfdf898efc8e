#!/usr/bin/env python3
"""Print headline metrics for the bundled detection profiles.

Ready residence is the long-run fraction of time the attack sits in the
Ready state; unimpeded success is the chance of a straight run to Ready with
no rollback. Mean and median first-passage times are conditional on reaching
Ready within the horizon.
"""

from __future__ import annotations

import argparse

from gpladd import compare_profiles, fixtures, load_bundled_profiles
from gpladd.io import write_csv


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--horizon", type=int, default=500)
    parser.add_argument("--csv", default=None, help="optionally write the table to this CSV path")
    args = parser.parse_args()

    scenario = fixtures.notional_scenario()
    profiles = load_bundled_profiles()
    rows = compare_profiles(scenario, [profiles[name] for name in sorted(profiles)], horizon=args.horizon)

    header = f"{'profile':<14}{'ready_res':>10}{'unimpeded':>11}{'fpt_mean':>10}{'fpt_median':>12}{'reach':>8}"
    print(header)
    print("-" * len(header))
    for row in rows:
        mean = f"{row.fpt_mean:.1f}" if row.fpt_mean is not None else "n/a"
        median = str(row.fpt_median) if row.fpt_median is not None else "n/a"
        print(
            f"{row.name:<14}{row.ready_residence:>10.4f}{row.unimpeded_success:>11.4f}"
            f"{mean:>10}{median:>12}{row.reach_probability:>8.3f}"
        )

    if args.csv:
        write_csv(
            args.csv,
            ["profile", "ready_residence", "unimpeded_success", "fpt_mean", "fpt_median", "reach_probability"],
            [
                (
                    row.name,
                    row.ready_residence,
                    row.unimpeded_success,
                    row.fpt_mean if row.fpt_mean is not None else "",
                    row.fpt_median if row.fpt_median is not None else "",
                    row.reach_probability,
                )
                for row in rows
            ],
        )
        print(f"\nwrote {args.csv}")


if __name__ == "__main__":
    main()
