#!/usr/bin/env python3
"""Download the UCI AReM data and write data/activity.csv (standing = 0, cycling = 1).

Every recording is cut into blocks of --window rows (a trailing remainder is
dropped). Blocks from both activities are shuffled with a fixed seed and
written back to back, so contiguous row ranges of the output act as the
60:20:20 train/validation/test split of configs/activity.json. The timestamp
column t is the output row index times 0.25 s.
"""

import argparse
import io
import pathlib
import random
import re
import sys
import urllib.request
import zipfile

URL = ("https://archive.ics.uci.edu/static/public/366/"
       "activity+recognition+system+based+on+multisensor+data+fusion+arem.zip")
FEATURES = ["avg_rss12", "var_rss12", "avg_rss13", "var_rss13", "avg_rss23", "var_rss23"]
CLASSES = {"standing": 0, "cycling": 1}


def recordings(archive, activity):
    pattern = re.compile(rf"(^|/){activity}/dataset\d+\.csv$")
    names = sorted((n for n in archive.namelist() if pattern.search(n)),
                   key=lambda n: int(re.search(r"dataset(\d+)", n).group(1)))
    for name in names:
        rows = []
        for line in archive.read(name).decode("utf-8").splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            fields = [x.strip() for x in re.split(r"[,\s]+", line) if x.strip()]
            if len(fields) < 7:
                continue
            rows.append(fields[1:7])
        yield name, rows


def open_archive(payload):
    archive = zipfile.ZipFile(io.BytesIO(payload))
    nested = [n for n in archive.namelist() if n.endswith(".zip")]
    if nested and not any("cycling/" in n for n in archive.namelist()):
        return zipfile.ZipFile(io.BytesIO(archive.read(nested[0])))
    return archive


def main():
    root = pathlib.Path(__file__).resolve().parent.parent
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--zip", type=pathlib.Path, help="use a local copy of the archive")
    parser.add_argument("--out", type=pathlib.Path, default=root / "data" / "activity.csv")
    parser.add_argument("--window", type=int, default=5)
    parser.add_argument("--seed", type=int, default=2020)
    args = parser.parse_args()

    if args.zip:
        payload = args.zip.read_bytes()
    else:
        print(f"downloading {URL}", file=sys.stderr)
        with urllib.request.urlopen(URL, timeout=120) as response:
            payload = response.read()

    blocks = []
    with open_archive(payload) as archive:
        for activity, label in CLASSES.items():
            count = 0
            for name, rows in recordings(archive, activity):
                usable = len(rows) - len(rows) % args.window
                for start in range(0, usable, args.window):
                    blocks.append((label, rows[start:start + args.window]))
                count += usable // args.window
            print(f"{activity}: {count} windows", file=sys.stderr)

    random.Random(args.seed).shuffle(blocks)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    with args.out.open("w") as f:
        f.write("t,activity," + ",".join(FEATURES) + "\n")
        row = 0
        for label, rows in blocks:
            for values in rows:
                f.write(f"{row * 0.25},{label}," + ",".join(values) + "\n")
                row += 1
    print(f"wrote {args.out} ({row} rows, {len(blocks)} windows)", file=sys.stderr)
    if len(blocks) != 2880:
        print("note: configs/activity.json assumes 2880 windows (14400 rows); "
              "adjust its split ranges", file=sys.stderr)


if __name__ == "__main__":
    main()
