//! Exact rational tools for ∨-systems: configurations of weighted covectors,
//! the plane-by-plane ∨-conditions, generalized WDVV identities, subsystems,
//! restrictions, linear equivalence search and a catalog of explicit families.

pub mod catalog;
pub mod config;
pub mod error;
pub mod io;
pub mod linalg;
pub mod report;
pub mod transform;
pub mod vee;
pub mod wdvv;

pub use catalog::{
    coxeter_roots, find_subsystems_anchored, find_subsystems_of_type, make_family, named_restriction,
    CoxeterType, Family, FamilySpec, FoundSubsystem, SubsystemType,
};
pub use config::{Configuration, DualFrame, Fingerprint, Plane, WeightedCovector};
pub use error::{Error, Result};
pub use linalg::{Matrix, Rational, Vector};
pub use transform::{apply_linear, find_equivalence, restrict, subsystem, Equivalence, LinearMap, SubsystemSpec};
pub use vee::{check_plane, check_subsystem_property, check_vee, euclidean_check, PlaneStatus, PlaneVerdict, VeeReport};
pub use wdvv::{check_wdvv, sample_points, SamplePoint};
