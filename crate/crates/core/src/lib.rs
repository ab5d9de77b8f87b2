//! Exhaustive subgroup-lattice computations on finite groups: subgroup
//! commutativity degrees, relative degrees, the image of `H ↦ sd(H, G)`,
//! closed-form checks and the density construction for relative degrees.

pub mod analytic;
pub mod arith;
pub mod bitset;
pub mod degrees;
pub mod density;
pub mod error;
pub mod families;
pub mod group;
pub mod lattice;
pub mod rational;
pub mod verify;

pub use error::{Error, Result};
pub use families::FamilySpec;
pub use group::FiniteGroup;
pub use lattice::{Subgroup, SubgroupLattice};
pub use rational::ExactRational;
