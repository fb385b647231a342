"""Sector-resolved XY-chain quench dynamics and tripartite information."""

from ._core import (
    ArgumentError,
    CapacityError,
    ConfigError,
    ConvergenceError,
    ModelSpec,
    NumericalError,
    all_assignments_count,
    apply_hamiltonian,
    binary_entropy,
    contiguous_quarters,
    coupling_matrix,
    entanglement_entropy,
    entropy_table,
    enumerate_partitions,
    evolve,
    lightcone_onset,
    minmax_tmi,
    monogamy_gap,
    mutual_information,
    neel_mask,
    neel_state,
    onebody_propagator,
    onebody_scan,
    run,
    schmidt_weights,
    sector_dimension,
    sector_states,
    single_excitation_state,
    tau_sign_change,
    thread_count,
    tmi,
    tmi_binary,
)

__all__ = [name for name in dir() if not name.startswith("_")]
