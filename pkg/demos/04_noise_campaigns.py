"""Phase noise, linear versus random sets, as a small campaign.

A reduced version of configs/fig4.json and configs/fig5.json: fewer trials
and m values so it finishes in well under a minute. The full campaigns are
run the same way through ``phase-ranger campaign``.

    python3 demos/04_noise_campaigns.py
"""

import json
from pathlib import Path

from phase_ranger.experiments import (
    CampaignConfig,
    lobe_histograms,
    mc_lobe_histogram,
    mc_unambiguous,
    normalized_entropy,
)

configs = Path(__file__).resolve().parent.parent / "configs"

fig4 = json.loads((configs / "fig4.json").read_text())
fig4.update(m_values=[5, 10, 30], sigma_values=[0.5], trials=400, rsf_realizations=100)
rep = mc_unambiguous(CampaignConfig.from_dict(fig4))
print("P(unambiguous estimate), sigma = 0.5 rad")
for r in rep.rows:
    band = ""
    if r["scenario"].startswith("rsf"):
        band = f"  realizations 2.5-97.5%: [{r['rsf_p2_5']:.2f}, {r['rsf_p97_5']:.2f}]"
    print(f"  {r['scenario'][:3]}  m={r['m']:3d}  P={r['probability']:.3f}{band}")

fig5 = json.loads((configs / "fig5.json").read_text())
fig5.update(m_values=[10, 100], trials=400)
hists = lobe_histograms(mc_lobe_histogram(CampaignConfig.from_dict(fig5)))
print("\nwhere the linear-set estimate lands (bin 0 = correct pseudo-range lobe)")
for (_, m, sigma), h in hists.items():
    print(f"  m={m:3d}: {h.size} bins, bin-0 mass {h[0]:.3f}, normalized entropy {normalized_entropy(h):.3f}")
