"""Multi-start Levenberg-Marquardt search for mutually unbiased bases."""
from .haar import GENERATOR_ID, Rng, ginibre, haar_unitary, standard_normal_pair, trial_seed
from .linalg import (HermitianEig, MatrixError, NumericalError, adjoint,
                     hermitian_eig, multiply, qr_decompose)
from .lm import LmOptions, LmResult, Termination, fd_jacobian, lm_minimize
from .objective import (BasisSet, MubCheck, MubResiduals, fourier_matrix,
                        gram_moduli_sq, is_mub_set, objective_value,
                        prime_mub_construction, residuals)
from .search import (SearchConfig, SearchReport, TrialResult, histogram,
                     run_search, run_trial)
from .unitary import exp_i, hermitian_to_params, log_unitary, params_to_hermitian

__version__ = "0.1.0"
