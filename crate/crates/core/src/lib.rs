//! Finite simplicial sets with Kan-condition checking, and constructions on
//! finite groupoids, crossed modules, 2-groups and their actions.

pub mod action;
pub mod bundle;
pub mod error;
pub mod group;
pub mod groupoid;
pub mod hom;
pub mod iso;
pub mod kan;
pub mod lambda;
pub mod map;
mod partition;
pub mod reduction;
pub mod report;
pub mod sample;
mod search;
pub mod simplicial;
mod tower;
pub mod two_group;

pub use error::{Error, Result};
pub use group::FiniteGroup;
pub use groupoid::{FiniteGroupoid, Functor};
pub use hom::HornTuple;
pub use map::{MapKind, SimplicialMap};
pub use report::{CheckReport, Verdict, Witness};
pub use simplicial::{CellId, SimplicialSet};
pub use action::{Acting, StrictAction};
pub use bundle::FibrationBundle;
pub use lambda::ActionSpanData;
pub use two_group::{CrossedModule, GroupLikeGroupoid, Transformation, TwoGroup};
