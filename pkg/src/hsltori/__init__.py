"""Hamiltonian stationary Lagrangian tori contained in a hypersphere of C^2.

A library and CLI that build the quaternionic objects attached to such tori
(angle maps, Hopf fields, the flat connection family, holonomy traces on the
unit circle, the Dirac operator with potential, the integer classification
constraint, and the explicit parallel sections) and verify every checkable
identity by residuals on periodic grids.
"""

from .quaternion import (ComplexPair, Quaternion, join_complex, metric,
                         pairings, qherm, qmul, split_complex, symplectic)
from .torus import (AngleMap, ConstantAngle, NonPositiveDelta1, TorusLattice,
                    eval_angle, make_angle_map, make_lattice,
                    make_lattice_exact)
from .grid import (GridField, GridMismatch, GridTooCoarse, QOneForm, QTwoForm,
                   conformal_coords, ext_d, field_from_samples, hodge_star,
                   lattice_coords, max_norm, read_grid_csv, wedge,
                   write_grid_csv)
from .surface import (BadScale, DegenerateDifferential, FundamentalForm,
                      NotLagrangian, SurfaceGrid, ZeroSection,
                      connection_form, fundamental_form, homogeneous_torus,
                      lagrangian_angle, lagrangian_residual, right_normal,
                      sphere_residual, surface_from_values)
from .family import (FamilyPoint, FrameMismatch, GaugedConnection, ZeroEta,
                     associated_family_form, connection_form_at, dbar_residual,
                     dirac_apply, family_matrix_form, frame_convert,
                     gauge_matrix, hopf_from_normal, hopf_one_form,
                     parallel_residual, sphere_family_form,
                     theta_frame_section)
from .holonomy import (HolonomyPair, SpectralSample, SpectralScan,
                       expm_traceless, holonomy_matrices, spectral_scan,
                       trace_closed_form)
from .classify import (ConstructedTorus, SolutionQuad, TrivialEta,
                       ZeroConstants, construct_parallel_section,
                       enumerate_solutions, eta_of_solution, verify_torus)
from .mesh import MeshResult, NotSpherical, project_surface, write_obj

__version__ = "0.1.0"
