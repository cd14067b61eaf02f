//! Independent checks for the closed forms.
//!
//! Nothing in here calls the closed-form energy or spacing expressions it is
//! used to verify: the simulations count packets hop by hop and price them
//! with the bare radio model, the minimizer only sees the objective and its
//! gradient, and the searches evaluate whatever function they are handed.

mod grid;
mod minimize;
mod probe;
mod simulate;

pub use grid::{grid_search_continuous, grid_search_hops};
pub use minimize::{minimize_spacing_numeric, MinimizerSettings, NumericOptimum, StepRule};
pub use probe::{random_spacing, random_spacing_probe, ProbeReport, ProbeTarget};
pub use simulate::{simulate_cycle, simulate_relay};
