from .echo import GainModel, EchoParams, DerivativeBundle, mean_dd_signal, d_nu, d_tau, weighted_phase_sums
from .fim import FimSums, Fim, CrbResult, fim_sums, fim_assemble, fim_diagnostics, crb_from_fim, crb_pipeline

__all__ = [
    'GainModel', 'EchoParams', 'DerivativeBundle', 'mean_dd_signal', 'd_nu', 'd_tau', 'weighted_phase_sums',
    'FimSums', 'Fim', 'CrbResult', 'fim_sums', 'fim_assemble', 'fim_diagnostics', 'crb_from_fim', 'crb_pipeline',
]
