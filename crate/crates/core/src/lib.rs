//! Schedules for the traveling tournament problem in which no team plays more
//! than two consecutive home or away games.
//!
//! Teams are paired by a minimum-weight perfect matching; a template over
//! abstract labels is built for the team count, and the labels are bound to
//! real teams either by conditional-expectation derandomization or by random
//! restarts followed by swap local search.

pub mod blossom;
pub mod error;
pub mod even;
pub mod instance;
pub mod matching;
pub mod odd;
pub mod oracle;
pub mod ordering;
pub mod schedule;
pub mod solve;
pub mod template;

pub use error::{Error, Result};
pub use instance::{parse_instance, write_instance, Instance, MetricReport};
pub use matching::{independent_lower_bound, lower_bound, min_weight_perfect_matching, LowerBound, Matching};
pub use schedule::{
    itinerary_of, parse_schedule, render_schedule, total_distance, validate_schedule, DistanceReport,
    FeasibilityReport, Schedule,
};
pub use solve::{build_template, solve, Packing, Solution, SolveOptions};
