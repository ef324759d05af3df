//! Poisson-weighted pulse sums, Bloch-vector dynamics of repeated pulses in a
//! coherent-state field, photon-number budgets for trapped-ion gates and
//! exponential envelope fitting.
//!
//! ```
//! use pulsetrain::pulse::build_pulse_map;
//! use pulsetrain::series::Strategy;
//! use pulsetrain::{Precision, PulseArea};
//!
//! let p = Precision::new(40).unwrap();
//! let map = build_pulse_map(&p.int(10), PulseArea::integer(2).unwrap(), Strategy::Auto, p).unwrap();
//! assert!(map.k.is_some());
//! ```
//!
//! Runnable examples live in `examples/`:
//!
//! - `table1`: the seven pulse sums at n̄ = 10⁴, k = 2
//! - `cutoff_planner`: truncation points for the direct and Taylor strategies
//! - `channel_evolve`: Bloch-vector trajectory under repeated pulses
//! - `collapse_profile`: inversion between pulses
//! - `discriminant`: where the single-pulse map has real eigenvalues
//! - `envelope_fit`: `A e^{−b N_R}` fits of the collapse envelope
//! - `failure_probability`: Monte Carlo gate failure against the average
//! - `photon_budget`: mean photon number bound for a trapped-ion scenario

pub mod area;
pub mod budget;
pub mod check;
pub mod cli;
pub mod error;
pub mod fit;
pub mod jet;
pub mod moments;
pub mod precision;
pub mod pulse;
pub mod series;

pub use area::PulseArea;
pub use error::{Error, Result};
pub use precision::{format_sci, BigReal, Precision};
