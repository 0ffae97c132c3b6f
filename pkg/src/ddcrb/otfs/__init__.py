from .grid import OtfsGrid, TfSymbols, DdVector
from .transforms import sfft, isfft, sfft_reference, isfft_reference, sfft_fast, isfft_fast, phase, phasor_grid
from .pilots import single_pilot, uniform_unit, random_symbols, load_pilot_csv

__all__ = [
    'OtfsGrid', 'TfSymbols', 'DdVector',
    'sfft', 'isfft', 'sfft_reference', 'isfft_reference', 'sfft_fast', 'isfft_fast', 'phase', 'phasor_grid',
    'single_pilot', 'uniform_unit', 'random_symbols', 'load_pilot_csv',
]
