//! The used-tape channel.
//!
//! A cell is either spared or punched. A spared cell reads back as a hole
//! with probability `p` (the prior hole density) and a punched cell is
//! always a hole, so the channel is a Z-channel with crossover `p` on the
//! spare input. Everything here is per cell; [`TapeState`] scales by length.

use std::f64::consts::E;

use crate::error::{Error, Result};
use crate::specialfn::{
    entropy_raw, mutual_information, neg_ln_pair, xlnbar, InfoQuantity, Probability,
};

/// `H(p)/p̄` from the pair `(p, p̄)`; requires `p̄ > 0`.
#[inline]
pub(crate) fn entropy_over_pbar(p: f64, pbar: f64) -> f64 {
    debug_assert!(pbar > 0.0);
    let p_term = if p > 0.0 {
        p * neg_ln_pair(p, pbar)
    } else {
        0.0
    };
    p_term / pbar + neg_ln_pair(pbar, p)
}

/// `C` from the pair `(p, p̄)`.
pub(crate) fn capacity_pair(p: f64, pbar: f64) -> f64 {
    if pbar <= 0.0 {
        return 0.0;
    }
    (-entropy_over_pbar(p, pbar)).exp().ln_1p()
}

/// `(p̂′, 1 − p̂′)` from the pair `(p, p̄)`.
pub(crate) fn optimal_output_pair(p: f64, pbar: f64) -> (f64, f64) {
    if pbar <= 0.0 {
        return (1.0, 0.0);
    }
    let eps = (-entropy_over_pbar(p, pbar)).exp();
    (1.0 / (1.0 + eps), eps / (1.0 + eps))
}

/// `p′ = 1 − (1−p)(1−q)`, evaluated as `p + q·p̄` so that either
/// argument at zero returns the other exactly.
pub fn compose_density(p: Probability, q: Probability) -> Probability {
    Probability::saturating(p.get() + q.get() * (1.0 - p.get()))
}

/// `ΔI = H(p̄q̄) − q̄·H(p)`, the information one stage conveys.
pub fn mutual_info(p: Probability, q: Probability) -> InfoQuantity {
    InfoQuantity::from_nats(mutual_info_raw(p.get(), q.get()))
}

#[inline]
pub(crate) fn mutual_info_raw(p: f64, q: f64) -> f64 {
    let qbar = 1.0 - q;
    (entropy_raw((1.0 - p) * qbar) - qbar * entropy_raw(p)).max(0.0)
}

/// The output-side form `H(p′) − (p̄′/p̄)·H(p)`. Undefined at `p = 1`.
pub fn mutual_info_via_output(p: Probability, q: Probability) -> Result<InfoQuantity> {
    let pbar = 1.0 - p.get();
    if pbar <= 0.0 {
        return Err(Error::Singular {
            what: "output-side mutual information",
            name: "p",
            value: p.get(),
        });
    }
    let pbar_out = pbar * (1.0 - q.get());
    let h_out = xlnbar(pbar_out) + xlnbar(1.0 - pbar_out);
    Ok(InfoQuantity::from_nats(
        h_out - pbar_out / pbar * entropy_raw(p.get()),
    ))
}

/// Slope of `ΔI` with respect to the output density: `ln̄(p′/p̄′) + H(p)/p̄`.
///
/// Zero at `p′ = p̂′`.
pub fn info_slope_wrt_output(p: Probability, p_out: Probability) -> Result<f64> {
    let pbar = 1.0 - p.get();
    let po = p_out.get();
    if pbar <= 0.0 || po <= 0.0 || po >= 1.0 {
        return Err(Error::Singular {
            what: "dΔI/dp′",
            name: "p′",
            value: po,
        });
    }
    Ok(-(po / (1.0 - po)).ln() + entropy_over_pbar(p.get(), pbar))
}

/// Punch density `q̂` that achieves capacity.
///
/// Rises from 1/2 on virgin tape to `1 − 1/e` on saturated tape.
pub fn optimal_punch(p: Probability) -> Probability {
    Probability::saturating(optimal_punch_raw(p.get()))
}

pub(crate) fn optimal_punch_raw(p: f64) -> f64 {
    let pbar = 1.0 - p;
    if pbar <= 0.0 {
        return 1.0 - 1.0 / E;
    }
    let eps = (-entropy_over_pbar(p, pbar)).exp();
    // q̄̂ = 1/(p̄(e^{H/p̄}+1)) = ε/(p̄(1+ε))
    1.0 - eps / (pbar * (1.0 + eps))
}

/// Channel capacity `C(p) = ln(e^{−H(p)/p̄} + 1)`, with `C(1) = 0`.
pub fn capacity(p: Probability) -> InfoQuantity {
    InfoQuantity::from_nats(capacity_pair(p.get(), 1.0 - p.get()))
}

/// Output density `p̂′` reached when punching at `q̂`.
pub fn optimal_output_density(p: Probability) -> Probability {
    Probability::saturating(optimal_output_pair(p.get(), 1.0 - p.get()).0)
}

/// Dialogue shrinkage `s(p) = C(p̂′)/C(p)`: the capacity left after one
/// full-capacity use, relative to before. Tends to `1/e` as `p → 1`.
pub fn shrinkage(p: Probability) -> f64 {
    let pbar = 1.0 - p.get();
    let before = capacity_pair(p.get(), pbar);
    if before <= 0.0 {
        return 1.0 / E;
    }
    let (po, pobar) = optimal_output_pair(p.get(), pbar);
    capacity_pair(po, pobar) / before
}

/// `lim_{p→1} ΔI(p, q)/C(p) = e·q̄·ln̄q̄`.
pub fn capacity_ratio_limit(q: Probability) -> f64 {
    E * xlnbar(1.0 - q.get())
}

/// One evaluation of the channel at `(p, q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelPoint {
    pub p: Probability,
    pub q: Probability,
    pub p_out: Probability,
    pub info: InfoQuantity,
}

impl ChannelPoint {
    pub fn new(p: Probability, q: Probability) -> Self {
        ChannelPoint {
            p,
            q,
            p_out: compose_density(p, q),
            info: mutual_info(p, q),
        }
    }

    /// The capacity-achieving point at prior density `p`.
    pub fn optimal(p: Probability) -> Self {
        Self::new(p, optimal_punch(p))
    }
}

/// Joint distribution of (action, outcome) for one stage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointTable {
    pub spare_blank: f64,
    pub spare_hole: f64,
    pub punch_blank: f64,
    pub punch_hole: f64,
}

impl JointTable {
    pub fn new(p: Probability, q: Probability) -> Self {
        let (p, q) = (p.get(), q.get());
        JointTable {
            spare_blank: (1.0 - p) * (1.0 - q),
            spare_hole: p * (1.0 - q),
            punch_blank: 0.0,
            punch_hole: q,
        }
    }

    /// As `[action][outcome]`, action 0 = spare, outcome 0 = blank.
    pub fn as_array(&self) -> [[f64; 2]; 2] {
        [
            [self.spare_blank, self.spare_hole],
            [self.punch_blank, self.punch_hole],
        ]
    }

    pub fn mutual_info(&self) -> InfoQuantity {
        InfoQuantity::from_nats(mutual_information(&self.as_array()))
    }
}

/// A piece of tape: `length` cells at hole density `hole_density`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TapeState {
    length: u64,
    hole_density: Probability,
}

impl TapeState {
    pub fn new(length: u64, hole_density: Probability) -> Result<Self> {
        if length == 0 {
            return Err(Error::TooSmall {
                name: "length",
                min: 1,
                value: 0,
            });
        }
        Ok(TapeState {
            length,
            hole_density,
        })
    }

    pub fn virgin(length: u64) -> Result<Self> {
        Self::new(length, Probability::ZERO)
    }

    pub fn length(&self) -> u64 {
        self.length
    }

    pub fn hole_density(&self) -> Probability {
        self.hole_density
    }

    /// One-shot capacity of the whole tape.
    pub fn capacity(&self) -> InfoQuantity {
        capacity(self.hole_density) * self.length as f64
    }

    /// Length of virgin tape with the same one-shot capacity, in cells.
    pub fn reduced_length(&self) -> f64 {
        self.capacity().bits()
    }

    /// State after punching at density `q`.
    pub fn punched(&self, q: Probability) -> TapeState {
        TapeState {
            length: self.length,
            hole_density: compose_density(self.hole_density, q),
        }
    }
}
