"""Laser-induced suppression of double-well tunneling in a three-level Lambda system."""
from ._core import BACKEND
from .analysis import (
    AsymptoticLocalization,
    TwoLevelInit,
    asymptotic_right_trapping,
    dark_init_localization,
    free_tunneling,
    general_init_localization,
    left_init_localization,
)
from .darkbright import (
    DarkBrightAmplitudes,
    dark_bright_rhs,
    dark_state_condition_error,
    from_dark_bright,
    to_dark_bright,
)
from .dynamics import Trajectory, integrate, integrate_until_settled, propagator
from .errors import TunnelingError
from .qsys import Amplitudes, SystemParams, build_hamiltonian, initial_state, localization_probabilities
from .wells import PotentialSpec, WellSolution, localized_states, rabi_overlaps, solve_well

__version__ = "0.1.0"
