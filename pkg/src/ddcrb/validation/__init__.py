from .oracles import fd_derivative, fd_derivative_vectors, numeric_fim, inverse_diagonal
from .montecarlo import (
    McConfig, McReport, MlEstimate,
    ml_estimate, run_mc, crb_search_grid, snr_to_noise_variance, noise_variance_to_snr,
)

__all__ = [
    'fd_derivative', 'fd_derivative_vectors', 'numeric_fim', 'inverse_diagonal',
    'McConfig', 'McReport', 'MlEstimate',
    'ml_estimate', 'run_mc', 'crb_search_grid', 'snr_to_noise_variance', 'noise_variance_to_snr',
]
