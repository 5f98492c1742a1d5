//! Effective capacity and the two equivalence principles.
//!
//! `Q(p) = Li₂(1−p)` is the total information a tape at hole density `p`
//! can still carry when used in infinitesimal increments. For finite
//! stages the interesting coordinates are the shrinkage `σ = Q(p′)/Q(p)`
//! and the yield `μ = ΔI/Q(p)`; the family `μ_p(σ)` collapses onto
//! `σ·ln̄σ` as `p → 1`.

use crate::channel::{capacity_pair, mutual_info_raw, optimal_punch_raw};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::numeric::{bisect, golden_max, linspace};
use crate::specialfn::{dilog_pair, neg_ln_pair, xlnbar, InfoQuantity, Probability, PI2_6};

/// Points in the σ grid used by [`departure`].
pub const SIGMA_GRID: usize = 1001;

/// Bisection tolerance in `q` when inverting `σ(q)`.
pub const Q_TOL: f64 = 1e-12;

const WASTE_GUARD: f64 = 1e-12;

#[inline]
fn effective_capacity_pair(p: f64, pbar: f64) -> f64 {
    dilog_pair(pbar, p)
}

/// `Q(p) = Li₂(1 − p)`.
pub fn effective_capacity(p: Probability) -> InfoQuantity {
    InfoQuantity::from_nats(effective_capacity_pair(p.get(), 1.0 - p.get()))
}

/// Information yield per unit increase of hole density, `ln̄p / p̄`.
///
/// The integrand of `Q`; unbounded at `p = 0`, which is rejected.
pub fn marginal_info_density(p: Probability) -> Result<f64> {
    let (p, pbar) = (p.get(), 1.0 - p.get());
    if p <= 0.0 {
        return Err(Error::Singular {
            what: "marginal information density",
            name: "p",
            value: p,
        });
    }
    if pbar <= 0.0 {
        return Ok(1.0);
    }
    Ok(neg_ln_pair(p, pbar) / pbar)
}

/// The limiting strong-equivalence curve `μ = σ·ln̄σ`.
pub fn limiting_curve(sigma: f64) -> f64 {
    xlnbar(sigma)
}

/// Shrinkage at which `μ₀` peaks: `½(1 − (6/π²)·ln²2)`.
pub fn kappa() -> f64 {
    let ln2 = std::f64::consts::LN_2;
    0.5 * (1.0 - ln2 * ln2 / PI2_6)
}

/// A tape together with its effective capacity and effective length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveState {
    pub length: u64,
    pub hole_density: Probability,
    pub effective_capacity: InfoQuantity,
    pub effective_length: InfoQuantity,
}

impl EffectiveState {
    pub fn new(length: u64, hole_density: Probability) -> Result<Self> {
        if length == 0 {
            return Err(Error::TooSmall {
                name: "length",
                min: 1,
                value: 0,
            });
        }
        let q = effective_capacity(hole_density);
        Ok(EffectiveState {
            length,
            hole_density,
            effective_capacity: q,
            effective_length: q * length as f64,
        })
    }

    fn with_density(&self, pbar: f64) -> EffectiveState {
        let p = Probability::saturating(1.0 - pbar);
        let q = InfoQuantity::from_nats(effective_capacity_pair(p.get(), pbar));
        EffectiveState {
            length: self.length,
            hole_density: p,
            effective_capacity: q,
            effective_length: q * self.length as f64,
        }
    }
}

/// Bookkeeping for one usage stage, per cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageRecord {
    pub p_before: Probability,
    pub q: Probability,
    pub p_after: Probability,
    pub info_sent: InfoQuantity,
    pub capacity_consumed: InfoQuantity,
    pub waste: InfoQuantity,
}

/// A sequence of stages applied to one tape.
#[derive(Debug, Clone, PartialEq)]
pub struct Ledger {
    pub initial: EffectiveState,
    pub stages: Vec<StageRecord>,
    pub final_state: EffectiveState,
}

impl Ledger {
    pub fn info_per_cell(&self) -> InfoQuantity {
        self.stages.iter().map(|s| s.info_sent).sum()
    }

    pub fn waste_per_cell(&self) -> InfoQuantity {
        self.stages.iter().map(|s| s.waste).sum()
    }

    /// Total information sent over the whole tape, `S = ℓ·I`.
    pub fn total_info(&self) -> InfoQuantity {
        self.info_per_cell() * self.initial.length as f64
    }

    pub fn total_waste(&self) -> InfoQuantity {
        self.waste_per_cell() * self.initial.length as f64
    }
}

/// Threads `initial` through a stage per punch density.
pub fn run_ledger(initial: EffectiveState, punches: &[Probability]) -> Ledger {
    let mut state = initial;
    // Carry 1 − p separately so heavily used tape keeps its precision.
    let mut pbar = 1.0 - initial.hole_density.get();
    let mut stages = Vec::with_capacity(punches.len());
    for &q in punches {
        let p_before = state.hole_density;
        let pbar_after = pbar * (1.0 - q.get());
        let next = state.with_density(pbar_after);
        let info = InfoQuantity::from_nats(mutual_info_raw(p_before.get(), q.get()));
        let consumed = state.effective_capacity - next.effective_capacity;
        let mut waste = consumed - info;
        if waste.nats() < 0.0 && waste.nats() >= -WASTE_GUARD {
            waste = InfoQuantity::ZERO;
        }
        stages.push(StageRecord {
            p_before,
            q,
            p_after: next.hole_density,
            info_sent: info,
            capacity_consumed: consumed,
            waste,
        });
        state = next;
        pbar = pbar_after;
    }
    Ledger {
        initial,
        stages,
        final_state: state,
    }
}

/// Punch densities that raise the hole density from `from` to `to` in
/// `steps` equal increments of `p`.
pub fn incremental_plan(
    from: Probability,
    to: Probability,
    steps: usize,
) -> Result<Vec<Probability>> {
    if steps == 0 {
        return Err(Error::TooSmall {
            name: "steps",
            min: 1,
            value: 0,
        });
    }
    let (a, b) = (from.get(), to.get());
    if b < a {
        return Err(Error::Singular {
            what: "a plan that lowers the hole density",
            name: "target",
            value: b,
        });
    }
    let dp = (b - a) / steps as f64;
    Ok((0..steps)
        .map(|i| {
            let lo = a + dp * i as f64;
            let hi = if i + 1 == steps {
                b
            } else {
                a + dp * (i + 1) as f64
            };
            let rest = 1.0 - lo;
            Probability::saturating(if rest > 0.0 { (hi - lo) / rest } else { 0.0 })
        })
        .collect())
}

/// One point of a `μ_p(σ)` curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    pub q: Probability,
    pub sigma: f64,
    pub mu: f64,
}

/// `σ(q)` and `μ(q)` for a fixed `p < 1`.
#[derive(Debug, Clone, Copy)]
struct StrongCurve {
    p: f64,
    pbar: f64,
    q_p: f64,
}

impl StrongCurve {
    fn new(p: Probability) -> Result<Self> {
        let pbar = 1.0 - p.get();
        if pbar <= 0.0 {
            return Err(Error::Singular {
                what: "σ/μ (Q(1) = 0; use the limiting curve)",
                name: "p",
                value: p.get(),
            });
        }
        Ok(StrongCurve {
            p: p.get(),
            pbar,
            q_p: effective_capacity_pair(p.get(), pbar),
        })
    }

    fn sigma(&self, q: f64) -> f64 {
        if q <= 0.0 {
            return 1.0;
        }
        let pbar_out = self.pbar * (1.0 - q);
        (effective_capacity_pair(1.0 - pbar_out, pbar_out) / self.q_p).clamp(0.0, 1.0)
    }

    fn mu(&self, q: f64) -> f64 {
        mutual_info_raw(self.p, q) / self.q_p
    }

    fn sample(&self, q: f64) -> CurveSample {
        CurveSample {
            q: Probability::saturating(q),
            sigma: self.sigma(q),
            mu: self.mu(q),
        }
    }

    fn q_of_sigma(&self, sigma: f64) -> f64 {
        if sigma >= 1.0 {
            return 0.0;
        }
        if sigma <= 0.0 {
            return 1.0;
        }
        bisect(|q| self.sigma(q) - sigma, 0.0, 1.0, Q_TOL, 0.0)
    }

    fn mu_of_sigma(&self, sigma: f64) -> f64 {
        if sigma >= 1.0 || sigma <= 0.0 {
            return 0.0;
        }
        self.mu(self.q_of_sigma(sigma))
    }
}

fn check_sigma(sigma: f64) -> Result<()> {
    if (0.0..=1.0).contains(&sigma) {
        Ok(())
    } else {
        Err(Error::NotAProbability {
            name: "sigma",
            value: sigma,
        })
    }
}

/// `(q, σ, μ)` for one stage at `(p, q)`; `p = 1` is rejected.
pub fn sigma_mu(p: Probability, q: Probability) -> Result<CurveSample> {
    Ok(StrongCurve::new(p)?.sample(q.get()))
}

/// Punch density whose stage shrinks `Q` by the factor `sigma`.
pub fn q_of_sigma(p: Probability, sigma: f64) -> Result<Probability> {
    check_sigma(sigma)?;
    Ok(Probability::saturating(
        StrongCurve::new(p)?.q_of_sigma(sigma),
    ))
}

/// `μ_p(σ)`, eliminating `q` by bisection on the monotone `σ(q)`.
pub fn mu_of_sigma(p: Probability, sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    Ok(StrongCurve::new(p)?.mu_of_sigma(sigma))
}

/// The capacity point of `μ_p`: the sample at `q = q̂(p)`.
pub fn mu_peak(p: Probability) -> Result<CurveSample> {
    let curve = StrongCurve::new(p)?;
    Ok(curve.sample(optimal_punch_raw(p.get())))
}

/// The two shrinkages yielding `mu`: `(wasteful, rational)`, with the
/// wasteful one below the peak shrinkage. `None` above the peak.
pub fn sigmas_for_mu(p: Probability, mu: f64) -> Result<Option<(f64, f64)>> {
    let curve = StrongCurve::new(p)?;
    let q_hat = optimal_punch_raw(p.get());
    if mu.is_nan() || mu <= 0.0 || mu >= curve.mu(q_hat) {
        return Ok(None);
    }
    let f = |q: f64| curve.mu(q) - mu;
    let rational = bisect(f, 0.0, q_hat, Q_TOL, 0.0);
    let wasteful = bisect(f, q_hat, 1.0, Q_TOL, 0.0);
    Ok(Some((curve.sigma(wasteful), curve.sigma(rational))))
}

/// Samples of `μ_p(σ)` at the given punch densities.
///
/// At `p = 1` the limiting curve is used, with `σ = 1 − q`.
pub fn mu_family_curve(p: Probability, qs: &[f64], exec: Exec) -> Vec<CurveSample> {
    match StrongCurve::new(p) {
        Ok(curve) => exec.map(qs, |&q| curve.sample(q)),
        Err(_) => exec.map(qs, |&q| {
            let sigma = 1.0 - q;
            CurveSample {
                q: Probability::saturating(q),
                sigma,
                mu: limiting_curve(sigma),
            }
        }),
    }
}

/// Largest gap between `μ_p(σ)` and the limiting curve `σ·ln̄σ`.
pub fn departure(p: Probability) -> Result<f64> {
    departure_with(p, Exec::default())
}

pub fn departure_with(p: Probability, exec: Exec) -> Result<f64> {
    let curve = StrongCurve::new(p)?;
    let gap = |sigma: f64| (curve.mu_of_sigma(sigma) - limiting_curve(sigma)).abs();
    let grid = linspace(0.0, 1.0, SIGMA_GRID);
    let gaps = exec.map(&grid, |&s| gap(s));
    let (best, &best_gap) = gaps
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("grid is non-empty");
    let lo = grid[best.saturating_sub(1)];
    let hi = grid[(best + 1).min(SIGMA_GRID - 1)];
    let (_, refined) = golden_max(gap, lo, hi, 1e-10);
    Ok(best_gap.max(refined))
}

/// `C(p)/Q(p)`: capacity measured in units of effective length.
pub fn capacity_per_effective(p: Probability) -> Result<f64> {
    let curve = StrongCurve::new(p)?;
    Ok(capacity_pair(curve.p, curve.pbar) / curve.q_p)
}
