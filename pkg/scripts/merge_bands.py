"""Merge per-band eigenvalue CSVs into one list, deduplicating the band
overlaps (same eigenvalue found twice keeps the higher-order run)."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from hypspec.surface_mps import read_eigenvalue_csv, write_eigenvalue_csv


def merge(outdir, target):
    records = []
    for name in ("band_a.csv", "band_b.csv", "band_c.csv", "band_d.csv"):
        path = Path(outdir) / name
        if path.exists():
            records.extend(read_eigenvalue_csv(path))
    records.sort(key=lambda r: (r.lam, -r.basis_n))
    merged = []
    for r in records:
        if merged and abs(r.lam - merged[-1].lam) < 1e-4:
            if r.basis_n > merged[-1].basis_n:
                merged[-1] = r
            continue
        merged.append(r)
    write_eigenvalue_csv(target, merged)
    n_total = sum(r.multiplicity for r in merged)
    print(f"{len(merged)} distinct eigenvalues, {n_total} with multiplicity")


if __name__ == "__main__":
    merge(sys.argv[1], sys.argv[2])
