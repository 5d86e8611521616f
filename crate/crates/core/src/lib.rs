//! Dense Sidon sets, the Bodmann–Haas construction of weighted projective
//! 2-designs, and upper bounds on the size of the smallest such design.
//!
//! The pipeline runs bottom-up through the modules:
//!
//! * [`finite_field`]: table-driven GF(q) with traces and discrete logs;
//! * [`abelian_group`]: cyclic-product groups, characters, and the maps
//!   that turn field structures into groups;
//! * [`sidon`]: the five dense families, Sidon verification, `m(d)` search;
//! * [`bh_design`]: the design itself and two independent certificates;
//! * [`zauner_bounds`]: bound formulas and the comparison table.

pub mod abelian_group;
pub mod arith;
pub mod bh_design;
pub mod finite_field;
pub mod sidon;
pub mod zauner_bounds;

pub use abelian_group::{AbelianGroup, CharacterIndex, GroupElement, GroupError};
pub use bh_design::{bodmann_haas, DesignError, WeightedDesign};
pub use finite_field::{FieldElement, FieldError, FieldTable, PrimePower};
pub use sidon::{Family, KnownBound, SidonError, SidonSet};
