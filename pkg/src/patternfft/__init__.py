"""Fast Fourier and wavelet transforms on patterns of regular integer matrices.

The pattern of a regular integer matrix ``M`` is the finite group
``M^{-1} Z^d / Z^d``.  Its Smith normal form yields bases in which the
group is a product of cycles, so its Fourier transform is a Kronecker
product of one-dimensional DFTs.
"""
__version__ = "0.1.0"

from .exceptions import (
    BadFactorization,
    DegenerateDirections,
    NonInvertibleKernel,
    NotASubpattern,
    NotInLattice,
    NotInPattern,
    PatternError,
    ShapeMismatch,
    SingularMatrix,
    TooLarge,
    Unsupported,
)
from .intlinalg import SmithDecomposition, smith_normal_form
from .lattice import (
    PatternBasis,
    build_basis,
    enumerate_generators,
    enumerate_pattern,
    modulo_pattern,
    point_to_index,
    projection_matrix,
    scaling_case,
    split_point,
)
from .fft import FourierPlan, LatticeArray, dft_naive, fft_1d, fft_pattern, fourier_matrix, ifft_pattern, make_plan
from .wavelet import (
    FilterBank,
    WaveletCoefficients,
    coset_offsets,
    decompose_step,
    full_analysis,
    full_synthesis,
    multilevel,
    multilevel_synthesis,
    reconstruct_step,
)
from .dirichlet import (
    KernelSpectrum,
    boundary_count,
    dirichlet_spectrum,
    filter_bank_from_dirichlet,
    samples_to_translate_coeffs,
    scaling_filter,
    wavelet_spectrum,
)
from .boxspline import PSI, XI, DirectionSet, eval_box_spline, sample_on_pattern
from .estimators import DirichletInterpolator, PatternFFT, PatternWaveletTransform

__all__ = [
    "__version__",
    "BadFactorization",
    "DegenerateDirections",
    "NonInvertibleKernel",
    "NotASubpattern",
    "NotInLattice",
    "NotInPattern",
    "PatternError",
    "ShapeMismatch",
    "SingularMatrix",
    "TooLarge",
    "Unsupported",
    "SmithDecomposition",
    "smith_normal_form",
    "PatternBasis",
    "build_basis",
    "enumerate_generators",
    "enumerate_pattern",
    "modulo_pattern",
    "point_to_index",
    "projection_matrix",
    "scaling_case",
    "split_point",
    "FourierPlan",
    "LatticeArray",
    "dft_naive",
    "fft_1d",
    "fft_pattern",
    "fourier_matrix",
    "ifft_pattern",
    "make_plan",
    "FilterBank",
    "WaveletCoefficients",
    "coset_offsets",
    "decompose_step",
    "full_analysis",
    "full_synthesis",
    "multilevel",
    "multilevel_synthesis",
    "reconstruct_step",
    "KernelSpectrum",
    "boundary_count",
    "dirichlet_spectrum",
    "filter_bank_from_dirichlet",
    "samples_to_translate_coeffs",
    "scaling_filter",
    "wavelet_spectrum",
    "PSI",
    "XI",
    "DirectionSet",
    "eval_box_spline",
    "sample_on_pattern",
    "DirichletInterpolator",
    "PatternFFT",
    "PatternWaveletTransform",
]
