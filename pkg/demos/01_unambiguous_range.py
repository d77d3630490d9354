"""Unambiguous range of multi-carrier phase ranging.

A set of carriers placed on a synthesizer grid of resolution f0 only
repeats its phase pattern after C / (kappa * f0) meters, where kappa is the
greatest common divisor of the carrier registers. This script walks
through a few sets and shows how one carrier off the common grid restores
the full range.

    python3 demos/01_unambiguous_range.py
"""

from phase_ranger import FrequencySet, unambiguous_range

F0 = 1e6  # 1 MHz synthesizer resolution -> 300 m upper bound

sets = {
    "three harmonics of 6 MHz": (6, 12, 18),
    "10 MHz spaced comb": tuple(range(100, 200, 10)),
    "6 MHz linear set from 133 MHz": tuple(range(133, 133 + 6 * 10, 6)),
    "same comb plus 200 MHz": (100, 110, 120, 200, 201),
}

for label, regs in sets.items():
    fs = FrequencySet(F0, regs)
    print(f"{label:32s} kappa={fs.kappa:3d}  range={unambiguous_range(fs):8.3f} m"
          f"  (bound {fs.range_upper_bound:.0f} m)")

# the linear set reaches the bound even though neighbouring carriers are
# 6 MHz apart: only the gcd matters, not the spacing
