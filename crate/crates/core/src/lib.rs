//! Finite groupoids, their covering morphisms, and the classification of
//! coverings by subgroups of vertex groups.

pub mod classify;
pub mod construct;
pub mod covering;
pub mod document;
pub mod error;
pub mod fixtures;
pub mod group;
pub mod groupoid;
pub mod morphism;
pub mod selftest;
pub mod topos;
pub mod transform;

pub use covering::{is_covering, Covering};
pub use error::{CoverError, DocumentError, GroupError, GroupoidError, MorphismError};
pub use group::{FiniteGroup, Subgroup};
pub use groupoid::{ArrId, FiniteGroupoid, ObjId};
pub use morphism::GroupoidMorphism;
