//! Finite categories, their sandwich semigroups, and exhaustive checks of the
//! structure that regular sandwich elements induce.
//!
//! Products are diagrammatic throughout: `x·y` means "first `x`, then `y`",
//! and is defined exactly when the target of `x` is the source of `y`.

pub mod category;
pub mod error;
pub mod fiber;
pub mod green;
pub mod rank;
pub mod report;
pub mod sandwich;
pub mod semigroup;

pub use category::{build_category, BuildOptions, Category, CategorySpec, Kind, Morphism, ObjectId, Payload, RawMorphism};
pub use error::{Error, Result};
pub use green::{EggBox, GreenData, Relation};
pub use report::{Checker, Violation};
pub use sandwich::{sandwich, Ambient, PSets, SandwichSemigroup};
pub use semigroup::FiniteSemigroup;
