//! Linear differential systems over a dga and the relative lifting decision.

mod decide;
mod relative;
mod system;

pub use decide::{
    decide_dga_lift, decide_dga_lift_general, decide_free_lift, FiberImage, GradedMap,
    LiftConstraint, LiftObstruction, LiftOutcome, LiftProblem, LiftWitness,
};
pub use relative::{LinearForm, RelativeModel};
pub use system::{solve_linear_dga_system, LinearDgaSystem};
