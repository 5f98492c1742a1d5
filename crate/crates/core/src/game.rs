//! Selfish concurrent reuse ("tape wars").
//!
//! Two parties punch the same tape independently. Punching commutes, so
//! each sees the other's holes as prior hole density and answers with
//! `q̂` of it. Both parties share the same response map, so the race is
//! the one-dimensional iteration `x ↦ q̂(x)`.

use std::f64::consts::E;

use crate::channel::{mutual_info, optimal_punch, optimal_punch_raw};
use crate::error::{Error, Result};
use crate::numeric::bisect;
use crate::specialfn::{InfoQuantity, Probability};

/// Step for the central-difference slope of `q̂` at the equilibrium.
pub const SLOPE_STEP: f64 = 1e-6;

pub fn best_response(x: Probability) -> Probability {
    optimal_punch(x)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RaceTrajectory {
    /// `x₀, x₁, …` with `x_{n+1} = q̂(x_n)`.
    pub densities: Vec<Probability>,
    pub converged: bool,
    pub equilibrium: Probability,
}

/// Iterates [`best_response`] from `x0`.
///
/// The response to the last recorded density lies within `tol` of it
/// when `converged` is set; that response is not appended.
pub fn race(x0: Probability, max_iters: usize, tol: f64) -> Result<RaceTrajectory> {
    if max_iters == 0 {
        return Err(Error::TooSmall {
            name: "max_iters",
            min: 1,
            value: 0,
        });
    }
    check_tol(tol)?;
    let mut densities = vec![x0];
    let mut x = x0;
    let mut converged = false;
    for _ in 0..max_iters {
        let next = best_response(x);
        if (next.get() - x.get()).abs() <= tol {
            converged = true;
            break;
        }
        densities.push(next);
        x = next;
    }
    Ok(RaceTrajectory {
        densities,
        converged,
        equilibrium: x,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumReport {
    /// `p*` with `q̂(p*) = p*`.
    pub density: Probability,
    pub per_party_rate: InfoQuantity,
    pub total_rate: InfoQuantity,
    /// `|dq̂/dp|` at `p*`.
    pub stability_slope: f64,
}

/// Solves `q̂(p) = p` by bisection on `[1/2, 1 − 1/e]`.
pub fn equilibrium(tol: f64) -> Result<EquilibriumReport> {
    check_tol(tol)?;
    let f = |x: f64| optimal_punch_raw(x) - x;
    let root = bisect(f, 0.5, 1.0 - 1.0 / E, 0.0, tol);
    let density = Probability::saturating(root);
    let per_party = mutual_info(density, density);
    let h = SLOPE_STEP;
    let slope = (optimal_punch_raw(root + h) - optimal_punch_raw(root - h)) / (2.0 * h);
    Ok(EquilibriumReport {
        density,
        per_party_rate: per_party,
        total_rate: per_party * 2.0,
        stability_slope: slope.abs(),
    })
}

fn check_tol(tol: f64) -> Result<()> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(Error::NotPositive {
            name: "tol",
            value: tol,
        })
    }
}
