//! Characteristic hop distances and energy budgets for linear multi-hop
//! wireless networks.
//!
//! A chain of nodes sits on a line with the sink at one end. Two traffic
//! patterns are modelled:
//!
//! * [`any_to_any`]: the farthest node relays `A` packets to the sink through
//!   every intermediate node (with and without idle-state energy).
//! * [`many_to_one`]: every node originates one packet per data-gathering
//!   cycle and forwards everything from upstream.
//!
//! The [`oracle`] module holds independent checks (explicit packet
//! forwarding, a projected-gradient minimizer, grid and random searches) that
//! the closed forms are tested against. [`cli`] is the command-line front end.

pub mod any_to_any;
pub mod cli;
pub mod error;
pub mod many_to_one;
pub mod oracle;
pub mod radio;
pub mod spacing;

pub use any_to_any::{AnyToAnyScenario, HopPlan, RelayCase};
pub use error::{Error, Result};
pub use many_to_one::{GatheringScenario, NodeEnergyReport};
pub use radio::{IdleEnergy, RadioParams};
pub use spacing::SpacingVector;
