//! Local Chern obstructions of collections of polynomial 1-forms on
//! complete intersection germs `(X, 0) ⊂ (C^N, 0)`.
//!
//! The obstruction is computed as the difference of two local colengths:
//! the index of the collection itself and the index of a generic collection
//! of constant forms. The [`oracle`] module checks the result numerically by
//! counting the special points of a small generic deformation.

pub mod fixtures;
pub mod germs;
pub mod obstruction;
pub mod oracle;
pub mod polyring;
pub mod stdbasis;
