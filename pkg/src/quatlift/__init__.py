"""Whittaker functions, Schmid operators, archimedean theta integrals and lattice lifts on U(2, n)."""

__version__ = "0.1.0"

from .field_space import FieldElement, HermitianSpace, SpaceVector, herm, make_space  # noqa: E402
from .group_lie import GroupElement, VellElement, iwasawa, m_of, n_of, z_of  # noqa: E402
from .special_quadrature import QuadratureSpec, bessel_k  # noqa: E402
from .whittaker_schmid import WhittakerSpec, b_ell, schmid_apply, whittaker  # noqa: E402
from .theta_arch import arch_integral, fourier_A, whittaker_constant  # noqa: E402
from .lattice_lift import (CyclotomicNumber, LatticeSpec, algebraic_coeff, enumerate_norm,  # noqa: E402
                           lift_fourier_coeff, poincare_lift)

__all__ = ["FieldElement", "HermitianSpace", "SpaceVector", "herm", "make_space", "GroupElement",
           "VellElement", "iwasawa", "m_of", "n_of", "z_of", "QuadratureSpec", "bessel_k", "WhittakerSpec",
           "b_ell", "schmid_apply", "whittaker", "arch_integral", "fourier_A", "whittaker_constant",
           "CyclotomicNumber", "LatticeSpec", "algebraic_coeff", "enumerate_norm", "lift_fourier_coeff",
           "poincare_lift"]
