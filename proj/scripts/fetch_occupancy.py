#!/usr/bin/env python3
"""Download the UCI Occupancy Detection data and write data/occupancy.csv.

The three published files are concatenated in time order
(datatest, datatraining, datatest2), which is the row numbering used by
configs/occupancy.json.
"""

import argparse
import csv
import io
import pathlib
import sys
import urllib.request
import zipfile

URL = "https://archive.ics.uci.edu/static/public/357/occupancy+detection.zip"
FILES = ["datatest.txt", "datatraining.txt", "datatest2.txt"]
COLUMNS = ["date", "Temperature", "Humidity", "Light", "CO2", "HumidityRatio", "Occupancy"]


def read_member(archive, name):
    for info in archive.infolist():
        if info.filename.rsplit("/", 1)[-1] == name:
            text = archive.read(info).decode("utf-8")
            reader = csv.reader(io.StringIO(text))
            header = next(reader)
            index = [header.index(c) for c in COLUMNS]
            rows = []
            for fields in reader:
                if not fields:
                    continue
                # data rows carry an extra leading row number absent from the header
                if len(fields) == len(header) + 1:
                    fields = fields[1:]
                rows.append([fields[i].strip() for i in index])
            return rows
    sys.exit(f"{name} not found in archive")


def main():
    root = pathlib.Path(__file__).resolve().parent.parent
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--zip", type=pathlib.Path, help="use a local copy of the archive")
    parser.add_argument("--out", type=pathlib.Path, default=root / "data" / "occupancy.csv")
    args = parser.parse_args()

    if args.zip:
        payload = args.zip.read_bytes()
    else:
        print(f"downloading {URL}", file=sys.stderr)
        with urllib.request.urlopen(URL, timeout=120) as response:
            payload = response.read()

    with zipfile.ZipFile(io.BytesIO(payload)) as archive:
        parts = [read_member(archive, name) for name in FILES]

    args.out.parent.mkdir(parents=True, exist_ok=True)
    with args.out.open("w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(COLUMNS)
        offset = 0
        for name, rows in zip(FILES, parts):
            print(f"{name}: rows {offset}..{offset + len(rows)}", file=sys.stderr)
            writer.writerows(rows)
            offset += len(rows)
    print(f"wrote {args.out} ({offset} rows)", file=sys.stderr)


if __name__ == "__main__":
    main()
