//! Planning and simulation toolkit for the snowblower problem.
//!
//! Lines, combs and double-sided combs are cleared by an improved strategy
//! (remainders first, then full passes) and by the baseline it is compared
//! against (full passes first, remainders last). Every plan is checked move by
//! move against the pixel mechanics in [`snowfield`], every closed-form count
//! in [`formulas`] is reproduced by simulation, and [`oracle`] finds true
//! optima for tiny instances.

pub mod error;
pub mod formulas;
pub mod oracle;
pub mod plan;
pub mod planner;
pub mod report;
pub mod shapes;
pub mod snowfield;

pub use error::{Error, Result, StepError};
pub use plan::{Label, Plan, Segment, Step};
pub use planner::Strategy;
pub use shapes::{Instance, Pixel, Rq, ShapeDescriptor};
pub use snowfield::{SnowField, Trace};
