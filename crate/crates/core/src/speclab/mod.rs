//! Truncated matrix representation of the 3-torus, heat traces of the
//! perturbed operator, and the spectral check of the curvature functional.

mod consistency;
mod heat;
mod hspec;
mod rep;
mod spectral;

pub use consistency::{
    curvature_consistency, default_cases, fit_only, spec_run, spectrum, tau_curvature, Consistency, SpecReport, TauValue,
};
pub use heat::{corrected_trace, curvature_fit, flat_trace, heat_fit, heat_trace, HeatFit, TGrid, CUTOFF_WEIGHT, DEFAULT_POINTS, DEFAULT_TMAX, DEFAULT_TMIN};
pub use hspec::{HSpec, Mode, Wave};
pub use rep::{Block, Theta, TorusRep};
pub use spectral::{p_spectrum, KCalc};
