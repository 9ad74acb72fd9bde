//! Performance analysis of a NOMA-based decode-and-forward cooperative
//! relaying system with receive diversity (SC or MRC) over Nakagami-m fading.
//!
//! The crate provides three independent routes to the same link-level
//! performance metrics, which cross-validate each other:
//!
//! * exact closed-form ergodic rates and outage probability, built from
//!   incomplete-gamma kernels and finite multinomial CCDF expansions
//!   ([`rate`], [`outage`], [`specfun`], [`series`]);
//! * adaptive Gauss–Kronrod quadrature of the defining CCDF integrals
//!   ([`rate::rate_quadrature_oracle`], [`quadrature`]);
//! * a reproducible Monte Carlo link simulator ([`sim`]).
//!
//! On top of those sits a power-allocation optimizer ([`power_opt`]) that
//! searches the feasible power split for minimum outage.
//!
//! All SNRs (`rho`) are linear; conversion from dB happens at the CLI
//! boundary. Everything here is pure and thread-safe except the random
//! streams, which are owned by one worker each.

pub mod channel;
pub mod error;
mod kahan;
pub mod outage;
pub mod power_opt;
pub mod quadrature;
pub mod rate;
pub mod rng;
pub mod series;
pub mod sim;
pub mod specfun;

pub use channel::{CombinerKind, LinkSpec, SystemConfig};
pub use error::{Error, Result};
pub use outage::OutageThresholds;
pub use power_opt::OptResult;
pub use rate::{RateMethod, RateReport};
pub use series::CompositionTerm;
pub use sim::{McEstimate, Metric, Scheme, SweepRow};
