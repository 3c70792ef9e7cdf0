//! State-vector trajectories, used to cross-check the ensemble simulator.
//!
//! Amplitudes are real: every unitary in the gate vocabulary is a
//! permutation matrix, so a real non-negative initial vector stays real.
//! The vector is stored at full length, but gates only visit the entries
//! that can be non-zero.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::circuit::Circuit;
use super::sparse::{compile, Op, SparseState};
use crate::error::{invalid_arg, Error, Result};

pub const DEFAULT_DENSE_LIMIT: usize = 24;

/// Starting point of a trajectory.
#[derive(Clone, Copy, Debug)]
pub enum DenseInit<'a> {
    Basis(u64),
    /// Coherent superposition with amplitudes `sqrt(p)` of the ensemble's
    /// probabilities.
    Superposition(&'a SparseState),
}

#[derive(Clone, Copy, Debug)]
pub struct DenseSimulator {
    limit: usize,
}

impl Default for DenseSimulator {
    fn default() -> Self {
        DenseSimulator { limit: DEFAULT_DENSE_LIMIT }
    }
}

impl DenseSimulator {
    pub fn with_limit(limit: usize) -> Self {
        DenseSimulator { limit }
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    /// One stochastic trajectory ending in a full measurement.
    pub fn trajectory(&self, circuit: &Circuit, init: DenseInit<'_>, seed: u64) -> Result<u64> {
        Ok(self.sample(circuit, init, 1, seed)?[0])
    }

    /// `count` independent trajectories drawn from one seeded stream.
    pub fn sample(
        &self,
        circuit: &Circuit,
        init: DenseInit<'_>,
        count: usize,
        seed: u64,
    ) -> Result<Vec<u64>> {
        let width = circuit.width();
        if width > self.limit {
            return Err(Error::Unsupported(format!(
                "dense simulation of {width} qubits exceeds the limit of {}",
                self.limit
            )));
        }
        let ops = compile(circuit)?;
        let mut state = Amplitudes { amps: vec![0.0; 1 << width], support: Vec::new(), scratch: Vec::new() };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            state.prepare(width, init)?;
            for op in &ops {
                state.apply(op, &mut rng);
            }
            out.push(state.measure_all(&mut rng));
        }
        Ok(out)
    }
}

/// Single trajectory from a basis state with the default qubit limit.
pub fn run_dense_trajectory(circuit: &Circuit, initial: u64, seed: u64) -> Result<u64> {
    DenseSimulator::default().trajectory(circuit, DenseInit::Basis(initial), seed)
}

/// Full-length amplitude vector plus the list of indices that may be
/// non-zero. Every gate is a permutation or a projection, so only those
/// entries need visiting.
struct Amplitudes {
    amps: Vec<f64>,
    support: Vec<usize>,
    scratch: Vec<(usize, f64)>,
}

impl Amplitudes {
    fn prepare(&mut self, width: usize, init: DenseInit<'_>) -> Result<()> {
        for &i in &self.support {
            self.amps[i] = 0.0;
        }
        self.support.clear();
        match init {
            DenseInit::Basis(b) => {
                if width < 64 && b >> width != 0 {
                    return invalid_arg(format!("basis state {b:#x} exceeds {width} wires"));
                }
                self.amps[b as usize] = 1.0;
                self.support.push(b as usize);
            }
            DenseInit::Superposition(state) => {
                if state.width() != width {
                    return invalid_arg(format!(
                        "state has {} wires but the circuit has {width}",
                        state.width()
                    ));
                }
                for (b, p) in state.iter() {
                    self.amps[b as usize] = p.sqrt();
                    self.support.push(b as usize);
                }
            }
        }
        Ok(())
    }

    /// Moves every amplitude to its image under a basis permutation.
    fn permute(&mut self, f: impl Fn(usize) -> usize) {
        self.scratch.clear();
        for &i in &self.support {
            self.scratch.push((f(i), self.amps[i]));
            self.amps[i] = 0.0;
        }
        self.support.clear();
        for &(j, a) in &self.scratch {
            self.amps[j] = a;
            self.support.push(j);
        }
    }

    fn apply(&mut self, op: &Op, rng: &mut ChaCha8Rng) {
        match op {
            Op::Reset { mask } => {
                let m = *mask as usize;
                let p1: f64 = self.support.iter().filter(|&&i| i & m != 0).map(|&i| self.amps[i].powi(2)).sum();
                let total: f64 = self.support.iter().map(|&i| self.amps[i].powi(2)).sum();
                // Born rule for the target, then flip a 1 outcome back to 0.
                let one = p1 > 0.0 && rng.random::<f64>() * total < p1;
                let norm = if one { p1 } else { total - p1 }.sqrt();
                self.scratch.clear();
                for &i in &self.support {
                    if (i & m != 0) == one {
                        self.scratch.push((i & !m, self.amps[i] / norm));
                    }
                    self.amps[i] = 0.0;
                }
                self.support.clear();
                for &(j, a) in &self.scratch {
                    self.amps[j] = a;
                    self.support.push(j);
                }
            }
            _ => self.permute(|i| op.apply(i as u64) as usize),
        }
    }

    fn measure_all(&self, rng: &mut ChaCha8Rng) -> u64 {
        let total: f64 = self.support.iter().map(|&i| self.amps[i].powi(2)).sum();
        let mut u = rng.random::<f64>() * total;
        let mut last = 0;
        for &i in &self.support {
            let p = self.amps[i].powi(2);
            if p == 0.0 {
                continue;
            }
            last = i;
            if u < p {
                return i as u64;
            }
            u -= p;
        }
        last as u64
    }
}
