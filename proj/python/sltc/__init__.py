"""Sturm-Liouville spectra, m-functions and 1D scattering with an interior
transfer condition.  Thin wrapper over the compiled _sltc extension."""

from ._sltc import (  # noqa: F401
    ABPair,
    BoundaryAngles,
    MEval,
    MittagLefflerModel,
    NeumannData,
    Problem,
    ScatteringData,
    SpectralDataset,
    TransferMatrix,
    TwoSpectraInput,
    ValueWithError,
    bound_states,
    characteristic,
    constant_C,
    delta_leading,
    eigenvalues,
    extend_spectrum,
    hadamard_ratio,
    load_problem,
    m_asymptote,
    m_from_norming,
    m_from_two_spectra,
    m_prime_at_zero,
    neumann_data_from_scattering,
    norming_constant,
    reflection,
    scattering_coefficients,
    shifted_model,
    weyl_m,
    weyl_m_residue,
)

__version__ = "0.1.0"
