from .scenario import Scenario, PilotSpec, RsmaSpec, McSpec, parse_scenario, emit_manifest, from_flat, to_flat, with_override
from .commands import run, parse_sweep, SweepSpec, SUBCOMMANDS, EXIT_OK, EXIT_ERROR, EXIT_SINGULAR, EXIT_SCENARIO, EXIT_PARTIAL

__all__ = [
    'Scenario', 'PilotSpec', 'RsmaSpec', 'McSpec',
    'parse_scenario', 'emit_manifest', 'from_flat', 'to_flat', 'with_override',
    'run', 'parse_sweep', 'SweepSpec', 'SUBCOMMANDS',
    'EXIT_OK', 'EXIT_ERROR', 'EXIT_SINGULAR', 'EXIT_SCENARIO', 'EXIT_PARTIAL',
]
