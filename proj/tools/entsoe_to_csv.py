#!/usr/bin/env python3
"""Convert an ENTSO-E Transparency day-ahead price export to the
`timestamp,price_eur_mwh` CSV read by horizon-probe.

The export must use UTC time (the "MTU (UTC)" column); local-time exports
repeat or skip an hour at daylight-saving changes and are rejected.

    python3 tools/entsoe_to_csv.py export.csv data/dk1_2024q1.csv \
        --start 2024-01-01T00:00:00Z --end 2024-04-01T00:00:00Z
"""
import argparse
import csv
import sys
from datetime import datetime, timedelta, timezone

START_FORMATS = ("%d.%m.%Y %H:%M", "%d/%m/%Y %H:%M:%S", "%d/%m/%Y %H:%M", "%Y-%m-%d %H:%M:%S", "%Y-%m-%dT%H:%M")


def parse_start(mtu):
    start = mtu.split(" - ")[0].strip()
    start = start.replace(" (UTC)", "")
    for fmt in START_FORMATS:
        try:
            return datetime.strptime(start, fmt).replace(tzinfo=timezone.utc)
        except ValueError:
            pass
    raise ValueError(f"unrecognised MTU '{mtu}'")


def parse_utc(text):
    return datetime.strptime(text, "%Y-%m-%dT%H:%M:%SZ").replace(tzinfo=timezone.utc)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("source")
    ap.add_argument("target")
    ap.add_argument("--start", type=parse_utc, help="first hour kept (inclusive), UTC")
    ap.add_argument("--end", type=parse_utc, help="last hour kept (exclusive), UTC")
    args = ap.parse_args()

    with open(args.source, newline="", encoding="utf-8-sig") as f:
        rows = list(csv.reader(f))
    header = rows[0]
    mtu_col = next((i for i, h in enumerate(header) if h.startswith("MTU")), None)
    price_col = next((i for i, h in enumerate(header) if "Price" in h and "EUR" in h), None)
    if mtu_col is None or price_col is None:
        sys.exit(f"{args.source}: expected MTU and 'Day-ahead Price [EUR/MWh]' columns, got {header}")
    if "UTC" not in header[mtu_col]:
        sys.exit(f"{args.source}: MTU column is '{header[mtu_col]}'; export with UTC time")

    points = []
    for line_no, row in enumerate(rows[1:], start=2):
        ts = parse_start(row[mtu_col])
        if args.start and ts < args.start or args.end and ts >= args.end:
            continue
        price = row[price_col].strip()
        if price in ("", "-", "n/e"):
            sys.exit(f"{args.source}:{line_no}: missing price at {ts:%Y-%m-%dT%H:%MZ}")
        points.append((ts, float(price)))

    points.sort()
    for (a, _), (b, _) in zip(points, points[1:]):
        if b - a != timedelta(hours=1):
            sys.exit(f"{args.source}: gap or duplicate between {a:%Y-%m-%dT%H:%MZ} and {b:%Y-%m-%dT%H:%MZ}")

    with open(args.target, "w", newline="") as f:
        f.write("timestamp,price_eur_mwh\n")
        for ts, price in points:
            f.write(f"{ts:%Y-%m-%dT%H:%M:%SZ},{price!r}\n")
    print(f"wrote {len(points)} hourly prices to {args.target}")


if __name__ == "__main__":
    main()
