"""Numerical harmonic analysis on rank-1 symmetric spaces.

Jacobi functions and transforms, Plancherel densities, heat kernels on
R^n and on the rank-1 spaces, K-type heat solutions, the SL(2,C)
counterexample family, and a Cowling-Price verdict engine that decides the
convergence of the weighted uncertainty integrals and fits the
Gaussian-times-polynomial transforms the theorems predict.
"""

from .numkernel import (QuadratureSpec, IntegralVerdict, adaptive_quad,
                        semiinfinite_gaussian_quad, convolve_1d, tail_verdict)
from .profiles import DecayModel, RadialProfile, SpectralProfile
from .specfun import log_gamma, pochhammer, gauss_2f1, bessel_j
from .jacobi import (JacobiParams, jacobi_phi, jacobi_assoc_phi, weight_delta,
                     jacobi_c, plancherel_density, jacobi_transform,
                     jacobi_inverse, phi_growth_check)
from .symmspace import (RankOneSpace, KType, preset, preset_names,
                        ktypes_below, kostant_q, eisenstein_phi1, xi_function)
from .heat import (HeatSpec, heat_kernel, log_heat_kernel, kernel_profile,
                   ady_envelope, heat_solution_delta, anker_bound_check)
from .euclidean import (gauss_heat, radial_fourier, sphere_quadrature,
                        fourier_coeff_Fm, dimension_shift_Fm, zonal_harmonic,
                        circular_harmonic, ProductFunction)
from .cpverify import (CPConditionSpec, GaussianPolyFit, evaluate_cp_space,
                       evaluate_cp_spectral, fit_gaussian_poly, degree_bound,
                       characterize_heat, ktype_cutoff_filter)
from .sl2c import (BumpSpec, CounterexampleSpec, construct_g_spectral,
                   construct_g_convolution, verify_sharp_bounds,
                   cp_integral_scenarios)

__version__ = "0.1.0"
