"""Schwarzschild black hole scattering as one-mode bosonic Gaussian channels.

Submodules:

``symplectic``
    isometry parameters, the ladder map ``L`` and its quadrature form ``S``
``channel``
    ``(T, N)`` channels, complete positivity, classification, capacity regions
``blackhole``
    the a, b, c mode channels and the two-branch inverse map
``capacity``
    Gaussian entropies, coherent information, capacity reports
``fock``
    truncated Fock-space oracle
``cli``
    the ``omgbh`` command
"""
from .blackhole import (
    BlackHolePoint,
    ModeTag,
    a_channel,
    a_params,
    b_channel,
    bc_complement_covariance,
    c_channel,
    c_params,
    c_params_from_a,
    extract_mode_channel,
    in_black_hole_region,
    inverse_map,
    output_covariance,
)
from .capacity import (
    CapacityReport,
    capacity_report,
    coherent_info_at,
    coherent_info_limit,
    coherent_info_terms,
    g_entropy,
    gaussian_entropy,
    k_noise,
    optimize_coherent_info,
    pair_coherent_info,
    symplectic_eigenvalues,
)
from .channel import (
    CapacityStatus,
    ChannelClass,
    OneModeChannel,
    canonical_channel,
    capacity_region,
    classify,
    is_entanglement_breaking,
    make_channel,
    point_channel,
)
from .errors import (
    CompletePositivityError,
    InternalInconsistencyError,
    NotInBlackHoleRegionError,
    TruncationSizeError,
    UnsupportedChannelError,
)
from .symplectic import (
    BlackHoleParams,
    bogoliubov_coeffs,
    build_L,
    embed_and_quadrature,
    is_symplectic,
    symplectic_form,
    symplectic_matrix,
)

__version__ = "0.1.0"
