//! Hashing with random linear maps over GF(2), and a balls-into-bins harness
//! that measures their maximum load.
//!
//! * [`gf2`]: packed vectors and matrices, rank, kernels, complements,
//!   uniform and surjective sampling, and factorizations `T = T1 ∘ T0`.
//! * [`ballsbins`]: ball-set generators, bin histograms, the covering events
//!   used in max-load tail arguments, Monte Carlo tail estimation and exact
//!   enumeration oracles.
//! * [`bounds`]: closed-form tail bound evaluators.
//! * [`hashtable`]: a chained hash table keyed by a random affine map.
//! * [`cli`]: the `gf2hash` command-line front end.
//!
//! ```
//! use gf2hash::ballsbins::{exact_expected_lbin, largest_bin, run_trials, BallSet};
//! use gf2hash::gf2::{sample_uniform_linear, Gf2Vector};
//! use gf2hash::{rng, stats};
//!
//! // Four balls in GF(2)^2 under a uniform map to GF(2)^1: E[lbin] = 5/2.
//! let s = BallSet::universe(2)?;
//! assert_eq!(exact_expected_lbin(2, 1, &s)?, num_rational::Ratio::new(5, 2));
//!
//! // One map, then many: trial i draws from substream (seed, i).
//! let t = sample_uniform_linear(2, 1, &mut rng::master(7))?;
//! assert!(largest_bin(&t, &s)? >= 2);
//! let lbins = run_trials(&s, 1, 10_000, 7, 0)?;
//! assert!((stats::mean(&lbins) - 2.5).abs() < 0.1);
//!
//! let x = Gf2Vector::from_u64(2, 0b11);
//! assert_eq!(t.apply(&x)?.dim(), 1);
//! # Ok::<(), gf2hash::Error>(())
//! ```

pub mod ballsbins;
pub mod bounds;
pub mod cli;
pub mod error;
pub mod gf2;
pub mod hashtable;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
