//! Numerical flows: trajectories of the time-rescaled system, first-return
//! maps and limit cycles, Abel-equation shooting, transversal polygons on
//! the saddle-node stratum, and continuation off it.

mod abel_shoot;
mod continuation;
mod cycle;
pub mod dopri;
mod polygon;
mod trajectory;

pub use abel_shoot::{abel_periodic_solutions, abel_shoot, abel_shoot_backward, AbelPeriodicSolution, AbelSolutionKind, ABEL_DIVERGENCE};
pub use continuation::{continue_cycle, continue_cycle_with, perturb_off_stratum, ContinuedCycle};
pub use cycle::{
    default_section_angle, find_limit_cycle, find_limit_cycle_with, find_limit_cycles, find_limit_cycles_with,
    first_return, return_map, scan_brackets, winding_number, CycleOptions, CycleStability, FirstReturn, LimitCycle,
    ReturnOptions,
};
pub use polygon::{
    build_transversal_polygon, build_transversal_polygon_with, PolygonSegment, PolygonVariant, TransversalPolygon,
    SEGMENT_SAMPLES,
};
pub use trajectory::{integrate, integrate_with, FlowOptions, Termination, Trajectory, TrajectorySample};
