//! A binary genetic algorithm on a discretized search space.
//!
//! Real variables are mapped to a uniform lattice and stored as plain or
//! reflected-Gray bit strings; permutation genomes are supported for ordering
//! problems. The crate bundles the classic operator set (tournament, ranked
//! and roulette selection; one-point, two-point, uniform and OX1 crossover;
//! bit-flip and permutation mutations; elitism), penalty functions for
//! constrained problems, a benchmark suite and an experiment harness that
//! writes per-run convergence traces and summary statistics.
//!
//! ```
//! use gridga::benchmarks::{Problem, ProblemId};
//! use gridga::engine::{run_ga, GaConfig};
//!
//! let problem = Problem::builtin("onemax".parse::<ProblemId>().unwrap(), 30, None).unwrap();
//! let result = run_ga(&problem, &GaConfig::boolean().with_seed(7)).unwrap();
//! assert!(result.solved);
//! ```

pub mod benchmarks;
pub mod encoding;
pub mod engine;
pub mod error;
pub mod fitness;
pub mod harness;
pub mod operators;

pub use error::{Error, Result};
