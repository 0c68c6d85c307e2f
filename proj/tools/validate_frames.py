#!/usr/bin/env python3
"""Check recorded gateway frames (one JSON object per line) against the protocol schema."""

import argparse
import json
import sys
from collections import Counter

import jsonschema


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("schema")
    ap.add_argument("frames")
    ap.add_argument("--require", nargs="*", default=[], help="frame types that must appear")
    args = ap.parse_args()

    with open(args.schema) as f:
        schema = json.load(f)
    validator = jsonschema.Draft202012Validator(schema)

    seen = Counter()
    bad = 0
    with open(args.frames) as f:
        for lineno, line in enumerate(f, 1):
            if not line.strip():
                continue
            frame = json.loads(line)
            seen[frame.get("type")] += 1
            errors = list(validator.iter_errors(frame))
            if errors:
                bad += 1
                print(f"line {lineno}: {frame.get('type')}: {errors[0].message[:200]}")

    total = sum(seen.values())
    print(f"{total} frames, {bad} invalid; types: {dict(sorted(seen.items()))}")
    missing = [t for t in args.require if seen[t] == 0]
    if missing:
        print("missing frame types:", ", ".join(missing))
    return 0 if total > 0 and bad == 0 and not missing else 1


if __name__ == "__main__":
    sys.exit(main())
