"""Regenerate the bundled synthetic two-sample demo dataset (deterministic).

120 genes x 30 samples (15 per group), unit noise. Genes 1-20 are shifted up
moderately (z around 2-4), genes 21-40 down, the rest null; two chromosome
blocks for the spatial workflow. Run from the repo root:

    python scripts/make_demo_data.py
"""

from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parents[1]
M, N1, N2 = 120, 15, 15
SEED = 20240711


def main() -> None:
    rng = np.random.default_rng(SEED)
    baseline = rng.uniform(2.0, 8.0, size=M)
    shift = np.zeros(M)
    shift[:20] = rng.uniform(0.7, 1.6, size=20)
    shift[20:40] = -rng.uniform(0.7, 1.6, size=20)
    data = np.empty((M, N1 + N2))
    data[:, :N1] = baseline[:, None] + rng.standard_normal((M, N1))
    data[:, N1:] = (baseline + shift)[:, None] + rng.standard_normal((M, N2))
    ids = [f"g{i:03d}" for i in range(1, M + 1)]
    chrom = ["chr1"] * 60 + ["chr2"] * 60

    out = ROOT / "data"
    out.mkdir(exist_ok=True)
    with (out / "demo_expression.csv").open("w") as fh:
        samples = [f"s{j:02d}" for j in range(1, N1 + N2 + 1)]
        fh.write("id," + ",".join(samples) + ",chrom\n")
        for i, rid in enumerate(ids):
            cells = ",".join(format(x, ".6f") for x in data[i])
            fh.write(f"{rid},{cells},{chrom[i]}\n")
    with (out / "demo_labels.csv").open("w") as fh:
        fh.write("sample_id,group\n")
        for j in range(1, N1 + N2 + 1):
            fh.write(f"s{j:02d},{1 if j <= N1 else 2}\n")
    print(f"wrote {out / 'demo_expression.csv'} and {out / 'demo_labels.csv'}")


if __name__ == "__main__":
    main()
