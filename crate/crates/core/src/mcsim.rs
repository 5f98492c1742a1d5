//! Seeded Monte Carlo of canonical hole and punch processes.
//!
//! Cells are processed in blocks of [`BLOCK_CELLS`]. Block `b` draws from
//! a ChaCha8 generator seeded with the stage seed and switched to stream
//! `b`, so each cell's draw depends only on `(seed, cell index)` and the
//! result is bit-identical whether blocks run sequentially or in parallel.
//! Stage seeds are derived from a base seed with SplitMix64.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::specialfn::{mutual_information, Probability};

pub const BLOCK_CELLS: usize = 1 << 16;

/// Index into [`StageObservation::counts`].
pub const SPARE: usize = 0;
pub const PUNCH: usize = 1;
pub const BLANK: usize = 0;
pub const HOLE: usize = 1;

fn block_rng(seed: u64, block: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block as u64);
    rng
}

/// SplitMix64 finaliser over `base + (k+1)·γ`: the seed of stage `k`.
pub fn derive_seed(base: u64, k: u64) -> u64 {
    let mut z = base.wrapping_add(k.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimTape {
    /// `true` is a hole.
    pub cells: Vec<bool>,
    /// Seeds of every draw that produced this tape, oldest first.
    pub seeds: Vec<u64>,
}

impl SimTape {
    pub fn virgin(n: usize) -> Result<Self> {
        check_len(n)?;
        Ok(SimTape {
            cells: vec![false; n],
            seeds: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn holes(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    pub fn hole_fraction(&self) -> f64 {
        self.holes() as f64 / self.len() as f64
    }
}

/// Tally of one punching stage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageObservation {
    pub n: u64,
    /// `counts[action][outcome]`, see [`SPARE`], [`PUNCH`], [`BLANK`], [`HOLE`].
    pub counts: [[u64; 2]; 2],
    pub empirical_p_out: f64,
    /// Plug-in mutual information in nats.
    pub empirical_mi: f64,
}

impl StageObservation {
    pub fn from_counts(counts: [[u64; 2]; 2]) -> Result<Self> {
        let n: u64 = counts.iter().flatten().sum();
        if n == 0 {
            return Err(Error::TooSmall {
                name: "n",
                min: 1,
                value: 0,
            });
        }
        let holes = counts[SPARE][HOLE] + counts[PUNCH][HOLE];
        let mut obs = StageObservation {
            n,
            counts,
            empirical_p_out: holes as f64 / n as f64,
            empirical_mi: 0.0,
        };
        obs.empirical_mi = estimate_mi(&obs);
        Ok(obs)
    }

    /// Relative frequencies in the same layout as `counts`.
    pub fn frequencies(&self) -> [[f64; 2]; 2] {
        let n = self.n as f64;
        self.counts.map(|row| row.map(|c| c as f64 / n))
    }
}

/// Plug-in estimate of `I(action; outcome)` in nats.
pub fn estimate_mi(obs: &StageObservation) -> f64 {
    mutual_information(&obs.counts.map(|row| row.map(|c| c as f64)))
}

fn check_len(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::TooSmall {
            name: "n",
            min: 1,
            value: 0,
        })
    } else {
        Ok(())
    }
}

fn block_count(n: usize) -> usize {
    n.div_ceil(BLOCK_CELLS)
}

/// `n` independent Bernoulli(`p`) cells.
pub fn sample_tape(n: usize, p: Probability, seed: u64) -> Result<SimTape> {
    sample_tape_with(n, p, seed, Exec::default())
}

pub fn sample_tape_with(n: usize, p: Probability, seed: u64, exec: Exec) -> Result<SimTape> {
    check_len(n)?;
    let blocks = exec.map_range(block_count(n), |b| {
        let len = BLOCK_CELLS.min(n - b * BLOCK_CELLS);
        let mut rng = block_rng(seed, b);
        (0..len)
            .map(|_| rng.random_bool(p.get()))
            .collect::<Vec<bool>>()
    });
    Ok(SimTape {
        cells: blocks.concat(),
        seeds: vec![seed],
    })
}

/// Sends a punch command to each cell independently with probability `q`,
/// regardless of its state. Holes stay holes.
pub fn blind_punch(tape: &SimTape, q: Probability, seed: u64) -> (SimTape, StageObservation) {
    blind_punch_with(tape, q, seed, Exec::default())
}

pub fn blind_punch_with(
    tape: &SimTape,
    q: Probability,
    seed: u64,
    exec: Exec,
) -> (SimTape, StageObservation) {
    let chunks: Vec<&[bool]> = tape.cells.chunks(BLOCK_CELLS).collect();
    let blocks = exec.map_range(chunks.len(), |b| {
        let mut rng = block_rng(seed, b);
        let mut counts = [[0u64; 2]; 2];
        let cells: Vec<bool> = chunks[b]
            .iter()
            .map(|&hole| {
                let punch = rng.random_bool(q.get());
                let out = hole || punch;
                counts[punch as usize][out as usize] += 1;
                out
            })
            .collect();
        (cells, counts)
    });
    let mut cells = Vec::with_capacity(tape.len());
    let mut counts = [[0u64; 2]; 2];
    for (block, c) in blocks {
        cells.extend_from_slice(&block);
        for a in 0..2 {
            for o in 0..2 {
                counts[a][o] += c[a][o];
            }
        }
    }
    let mut seeds = tape.seeds.clone();
    seeds.push(seed);
    let obs = StageObservation::from_counts(counts).expect("tape is non-empty");
    (SimTape { cells, seeds }, obs)
}

/// Virgin tape of `n` cells punched once per entry of `q_list`.
pub fn run_stages(n: usize, q_list: &[Probability], seed: u64) -> Result<Vec<StageObservation>> {
    let tape = SimTape::virgin(n)?;
    Ok(run_stages_from(tape, q_list, seed, Exec::default()).1)
}

/// Applies `q_list` to `tape`; stage `k` uses `derive_seed(seed, k + 1)`.
pub fn run_stages_from(
    mut tape: SimTape,
    q_list: &[Probability],
    seed: u64,
    exec: Exec,
) -> (SimTape, Vec<StageObservation>) {
    let mut observations = Vec::with_capacity(q_list.len());
    for (k, &q) in q_list.iter().enumerate() {
        let (next, obs) = blind_punch_with(&tape, q, derive_seed(seed, k as u64 + 1), exec);
        observations.push(obs);
        tape = next;
    }
    (tape, observations)
}
