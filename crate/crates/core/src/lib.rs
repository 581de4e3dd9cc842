//! Desk-scale simulator for splash-singularity formation in 2D free-boundary
//! incompressible viscous MHD.
//!
//! The pipeline works in a conformally desingularized, Lagrangian fixed-domain
//! formulation: a branch-cut-aware square-root map ([`conformal`]) straightens
//! the near-contact geometry, a Picard iteration ([`picard`]) with a
//! Stokes-type slab solver ([`stokes`]) advances velocity, pressure, magnetic
//! field and flux on the fixed reference domain, and the splash experiment
//! ([`splash`]) tracks pulled-back interfaces of an ε-shifted family of
//! initial domains until self-contact.

pub mod conformal;
pub mod geometry;
pub mod initdata;
pub mod mesh;
pub mod norms;
pub mod picard;
pub mod sparse;
pub mod splash;
pub mod stokes;

pub use conformal::{BranchCut, ConformalError, ConformalMap};
pub use geometry::{BoundaryCurve, GeometryError};
pub use initdata::{InitialData, StreamSpec};
pub use mesh::{DiscreteField, FeSpace, MeshError, ReferenceMesh};
pub use norms::{BealeNormConfig, NormError};
pub use picard::{IterationReport, LagrangianState, PicardError};
pub use splash::{SplashReport, SplashScenario};
pub use stokes::{LinearStokesData, StokesError, StokesOperator, StokesSolution};
