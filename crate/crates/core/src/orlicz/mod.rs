//! Orlicz spaces attached to `L log(L+1)` and the model crossed product in
//! which the regularized entropy of a state is evaluated.

pub mod crossed;
pub mod norm;
pub mod young;

pub use crossed::{
    commuting_relative_entropy, dual_density, regular_entropy, remark_identity_terms, BaseTrace,
    EpsGrid, ModelCrossedElement, Profile,
};
pub use norm::{luxemburg_norm, projection_identity_defect};
pub use young::{FundamentalFunction, NormFlavor, YoungFunction};
