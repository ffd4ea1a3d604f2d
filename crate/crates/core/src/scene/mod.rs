//! Source supports, profiles and reference point sources.

pub mod expr;
pub mod geometry;
pub mod model;
pub mod shape;

pub use expr::{Bindings, Expr, ExprError, Var};
pub use geometry::{arc_directions, Direction, Point2};
pub use model::{Component, ReferenceSource, SourceModel};
pub use shape::{Bounds, Shape};
