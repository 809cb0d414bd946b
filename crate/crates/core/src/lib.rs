//! Cumulative prospect theory for Gaussian gambles, in closed form.
//!
//! An agent combines a piecewise exponential value function
//! ([`value::ValueParams`]) with normal distortion weighting functions for
//! losses and gains ([`weighting::WeightingParams`]). Because a normal
//! distortion maps a Gaussian distribution function to another Gaussian
//! distribution function, the valuation of a Gaussian gamble reduces to a
//! handful of normal CDF and exponential evaluations
//! ([`valuation::cpt_value`]), with analytic derivatives in every parameter
//! ([`valuation::cpt_gradient`]).
//!
//! [`oracle`] recomputes the same valuation by adaptive quadrature and Monte
//! Carlo, and [`population`] applies the closed form to adoption, program
//! design and social-equilibrium problems over large populations.
//!
//! ```
//! use gaussian_cpt::prelude::*;
//!
//! let w = WeightingParams::new(0.37, 0.61)?;
//! let v = ValueParams::new(2.25, 2.25, 1.0, 1.0, 1.0, 1.0)?;
//! let agent = CptAgent::new(v, w, w);
//! let gamble = GaussianGamble::new(0.5, 1.0)?;
//! let b = cpt_value(&agent, &gamble);
//! assert!(b.total < 0.0); // loss aversion outweighs a small positive mean
//! # Ok::<(), gaussian_cpt::CptError>(())
//! ```

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod normal;
pub mod oracle;
pub mod population;
pub mod rng;
pub mod sampling;
pub mod valuation;
pub mod value;
pub mod weighting;

pub use error::{CptError, Result};

pub mod prelude {
    pub use crate::error::{CptError, Result};
    pub use crate::normal::Probability;
    pub use crate::oracle::{monte_carlo_value, quadrature_value, McEstimate, OracleConfig};
    pub use crate::valuation::{
        batch_value, certainty_equivalent, cpt_gradient, cpt_value, cpt_value_degenerate, CptAgent, CptGradient,
        ValuationBreakdown,
    };
    pub use crate::value::{GaussianGamble, SideShape, ValueParams};
    pub use crate::weighting::{DistortedGaussian, Orientation, WeightingParams};
}
