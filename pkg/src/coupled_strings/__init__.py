"""Transfer matrices, Lyapunov spectra and Zariski-density certificates for two
coupled-string random Schroedinger models."""

from .errors import (BranchPointError, DegenerateEnergyError, InvalidInputError,
                     InvalidIntervalError, InvalidSeedError, OutOfRegimeError, RangeError,
                     StrideTooLargeError)
from .exterior import OMEGA_J, lagrangian_seed, wedge2, wedge_inner
from .lyapunov import (Cocycle, CocycleRun, LyapunovEstimate, lyapunov_qr,
                       lyapunov_wedge_sum, symmetry_residual)
from .models import (ModelKind, ModelSpec, ParamDistribution, anderson_eigen,
                     interface_matrix, sample_params, transfer_anderson, transfer_point)
from .symplectic import J, bracket, expm, is_symplectic, sp2_project
from .zariski import (Certificate, LieSubspace, certify, det_certificate_model2,
                      det_certificates_model1, exceptional_roots, factor_gauge, lie_closure,
                      model1_seeds,
                      model2_seeds)

__version__ = "0.1.0"
