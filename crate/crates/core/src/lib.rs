pub mod conformality;
pub mod cvr;
pub mod error;
pub mod formulas;
pub mod fuzz;
pub mod hierarchy;
pub mod linalg;
pub mod mesh;
pub mod oracle;
pub mod rational;
pub mod report;

pub use error::{Error, Result};
pub use mesh::{Axis, Census, LEdge, LEdgeKind, Rect, Segment, TMesh, VertexClass};
pub use rational::{r, Rational};
