"""Walk-on-Moving-Spheres simulation of first hitting times for Bessel
processes, with an application to Cox-Ingersoll-Ross level hitting."""

from .boundaries import (
    BesselParams,
    ConstantLevel,
    DecreasingCurve,
    SquareRoot,
    F_nu,
    image_constant_decreasing,
    image_constant_level,
    image_constant_sqrt,
    psi,
    psi_laplace,
    psi_second,
    psi_sup,
    t_max,
)
from .cir import CirParams, cir_boundary, euler_cir, sample_cir_hitting, time_change_eta
from .engine import (
    HittingSample,
    StepCapExceeded,
    WalkState,
    run_a1,
    run_a2,
    run_a2_batch,
    run_a3,
    run_a3_batch,
    run_a4,
    run_a4_batch,
    step_a2,
)
from .experiment import ExperimentConfig, RunReport, run_experiment
from .hitting_laws import (
    cdf_family1,
    density_family1,
    density_family2,
    density_family3,
    laplace_transform_level,
    p0_density,
    py_density,
)
from .samplers import (
    RngStream,
    next_gaussian,
    next_uniform,
    sample_first_passage_psi,
    sample_gamma_half_integer,
    sample_unit_sphere,
)

__version__ = "0.1.0"
