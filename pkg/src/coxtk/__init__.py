"""Coxeter planes, Stokes data, soliton diagrams and the radial tt*-Toda connection problem."""

__version__ = "0.1.0"

from .liealg import (  # noqa: E402
    CartanDatum,
    CoxeterElement,
    InvalidTypeError,
    Root,
    RootSystem,
    blackwhite_decomposition,
    build_root_system,
    coxeter_element,
    coxeter_orbits,
)
from .coxplane import (  # noqa: E402
    CoxeterPlaneDiagram,
    fundamental_domain,
    masses,
    plane_general,
    plane_type_a,
    positive_ray_selection,
)
from .connection import (  # noqa: E402
    AsymptoticData,
    UVData,
    build_omega_hat,
    character_crosscheck,
    m_from_k,
    stokes_numbers,
    stokes_sectors,
)
from .polytope import (  # noqa: E402
    compare_w_plane,
    project_weights,
    soliton_graph,
    sym_weights,
    w_plane,
    wedge_weights,
)
from .toda import TodaProblem, extract_ir, extract_uv, solve_connection, verify_correspondence  # noqa: E402

__all__ = [name for name in dir() if not name.startswith("_")]
