"""
Driving the whole pipeline from a YAML config
=============================================

"""

import json
import pathlib
import subprocess
import sys
import tempfile

# every capability is reachable through the lamespectra command; a config
# names the lattice, material, potential and solver knobs, and each
# subcommand writes versioned JSON/CSV artifacts plus a metadata sidecar
CONFIG = """
lattice: {dim: 1, points: 192, period: 30.0}
material: {lambda: -1.0, mu: 1.0}
potential: {family: well, depth: 5.0, half_width: 1.015625}
solver: {tau_filter: 0.5}
norms:
  - {name: lp, p: 1.0}
  - {name: morrey_campanato, alpha: 0.5, p: 1.0}
enclosure: {theorem: T1d, gamma: 0.5}
"""

with tempfile.TemporaryDirectory() as tmp:
    tmp = pathlib.Path(tmp)
    cfg = tmp / "run.yaml"
    cfg.write_text(CONFIG)

    for sub in ("spectrum", "norms", "enclosure"):
        out = tmp / sub
        proc = subprocess.run(
            [sys.executable, "-m", "lamespectra.cli", sub, "-c", str(cfg), "-o", str(out)],
            capture_output=True,
            text=True,
        )
        print(f"$ lamespectra {sub}  ->  exit {proc.returncode}")
        for artifact in sorted(out.iterdir()):
            print("   ", artifact.name)

    spectrum = json.loads((tmp / "spectrum" / "spectrum.json").read_text())
    print("\neigenvalues:", [round(z[0], 4) for z in spectrum["eigenvalues"]])

    enclosure = json.loads((tmp / "enclosure" / "enclosure.json").read_text())
    print("verdicts   :", enclosure["verdicts"])
