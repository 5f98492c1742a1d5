//! Information capacity of monotonic (write-once) binary media.
//!
//! A cell of tape is blank or holed; holes can be added but never removed.
//! Starting from hole density `p`, punching at density `q` yields hole
//! density `p′ = 1 − (1−p)(1−q)` and conveys `ΔI(p, q)` nats per cell.
//!
//! | module | contents |
//! |--------|----------|
//! | [`specialfn`] | entropy, self-information, dilogarithm, units |
//! | [`channel`] | `ΔI`, capacity `C`, optimal punch `q̂`, shrinkage |
//! | [`equivalence`] | effective capacity `Q = Li₂(1−p)`, stage ledger, `μ_p(σ)` curves |
//! | [`game`] | best-response race between selfish users and its fixed point |
//! | [`mcsim`] | seeded Monte Carlo of the punching process |
//! | [`cli`], [`output`] | command line and CSV/JSON tables |
//!
//! Grid sweeps and simulations run on rayon when the `parallel` feature is
//! enabled (the default); see [`exec::Exec`].
//!
//! ```
//! use womkit::{channel, Probability};
//!
//! let half = Probability::new(0.5).unwrap();
//! assert!((channel::capacity(half).nats() - 1.25f64.ln()).abs() < 1e-15);
//! assert!((channel::optimal_punch(half).get() - 0.6).abs() < 1e-14);
//! ```

pub mod channel;
pub mod cli;
pub mod equivalence;
pub mod error;
pub mod exec;
pub mod game;
pub mod mcsim;
pub mod numeric;
pub mod output;
pub mod specialfn;

pub use error::{Error, Result};
pub use exec::Exec;
pub use specialfn::{InfoQuantity, Probability};
