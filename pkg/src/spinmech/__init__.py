"""Spin-mechanics toolkit: NV spin model, dipole field maps, resonator fits,
thermal echo decoherence, a transported two-qubit memory and cooperativity."""
from .kernels import BACKEND
from .errors import SpinMechError, InputError, NumericalError
from .spinmodel import (SpinParams, FieldComponents, EsrPair, FieldMap, esr_frequencies,
                        invert_field, map_to_axial_field, interpolate_missing)
from .dipole import (Dipole, NvAxis, dipole_field, axial_field, axial_gradient, fit_dipole,
                     gradient_map)
from .mech import (Resonator, TimeSeries, zero_point_motion, thermal_occupation,
                   sample_thermal_states, fit_lorentzian, fit_ringdown, rms_from_psd)
from .echo import (Coupling, DecoherenceModel, EchoCurve, coherent_contrast, thermal_contrast,
                   mc_contrast, fit_coupling)
from .register import (DetuningProfile, SequenceConfig, nuclear_phase, solve_pi_time,
                       fringe_scan, simulate_memory_sequence, ramsey_vs_tau)
from .coop import CoopInputs, Scenario, cooperativity, n_kappa, project_scenario, table
from .synth import generate_synthetic

__version__ = "0.1.0"
