"""Physical constants and default parameters (SI units, frequencies in Hz)."""

HBAR = 1.054571817e-34  # J s
K_B = 1.380649e-23  # J / K
MU0_OVER_4PI = 1e-7  # T m / A

ZERO_FIELD_SPLITTING = 2.8707e9  # Hz
GAMMA_E = 2.8e10  # Hz / T  (2.8 MHz / G)
GAMMA_N15 = 4.316e6  # Hz / T, magnitude for 15N

# Chosen so that a 1.4 MHz mode has a zero-point motion of ~10 fm.
DEFAULT_M_EFF = 6.0e-14  # kg

GAUSS = 1e-4  # T
