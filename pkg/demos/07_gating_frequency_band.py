"""Classify gating frequencies into Vulnerable / Suitable / Noisy.

Slow gating lets trapped carriers decay harmlessly between gates, so the
attack stays invisible (Vulnerable). Fast gating keeps the delayed-detection
alarm alive but eventually poisons normal operation (Noisy). The usable
window sits in between and shifts down in frequency as the detector cools,
because all lifetimes stretch.
"""

from pathlib import Path

import numpy as np

from aftergate import Environment, feasibility_band, load_config
from aftergate.feasibility import suitable_interval
from aftergate.io import write_feasibility_csv
from aftergate.svg import band_chart

OUT = Path(__file__).resolve().parent / "out"
OUT.mkdir(exist_ok=True)

cfg = load_config()
det = cfg.detector
freqs = np.geomspace(1e7, 5e9, 50)

for temp in (293.15, 223.15):
    env = Environment(temperature=temp)
    band = feasibility_band(freqs, env, det)
    interval = suitable_interval(band)
    marks = {"Vulnerable": "v", "Suitable": "S", "Noisy": "n"}
    line = "".join(marks[v.classification] for v in band)
    print(f"T = {temp:6.2f} K: {line}")
    print(f"    suitable {interval[0]:.2e} .. {interval[1]:.2e} Hz")
    i_1g = int(np.argmin(np.abs(freqs - 1e9)))
    print(f"    1 GHz -> {band[i_1g].classification} "
          f"(self-noise {band[i_1g].q_noise:.4f}, "
          f"attack QBER {band[i_1g].q_attack:.4f})")
    tag = f"{temp:g}K"
    write_feasibility_csv(OUT / f"feasibility_{tag}.csv", band)
    band_chart(OUT / f"feasibility_{tag}.svg", freqs,
               [v.q_noise for v in band], [v.q_attack for v in band],
               [v.classification for v in band],
               f"gating-frequency feasibility at {temp:g} K", 0.11)

print(f"\nwrote CSV and SVG pairs into {OUT}")
