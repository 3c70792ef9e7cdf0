use std::collections::BTreeMap;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::bits::{format_bits, gather, parse_bits};
use super::sparse::{check_subset, SparseState};
use crate::error::{invalid_arg, Result};

/// Shot counts over a subset of wires. Keys pack the measured wires with
/// `qubits[0]` as bit 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Histogram {
    qubits: Vec<usize>,
    shots: u64,
    counts: BTreeMap<u64, u64>,
}

impl Histogram {
    pub fn new(qubits: Vec<usize>, counts: BTreeMap<u64, u64>) -> Result<Self> {
        if qubits.is_empty() {
            return invalid_arg("empty qubit subset");
        }
        if qubits.len() < 64 {
            if let Some(k) = counts.keys().find(|&&k| k >> qubits.len() != 0) {
                return invalid_arg(format!("outcome {k:#x} wider than {} qubits", qubits.len()));
            }
        }
        let shots = counts.values().sum();
        Ok(Histogram { qubits, shots, counts })
    }

    /// Tallies full-register samples onto `qubits`.
    pub fn from_samples(qubits: Vec<usize>, samples: &[u64]) -> Result<Self> {
        let mut counts = BTreeMap::new();
        for &s in samples {
            *counts.entry(gather(s, &qubits)).or_insert(0) += 1;
        }
        Self::new(qubits, counts)
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.counts
    }

    pub fn get(&self, outcome: u64) -> u64 {
        self.counts.get(&outcome).copied().unwrap_or(0)
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }
}

#[derive(Serialize, Deserialize)]
struct HistogramJson {
    bit_order: String,
    qubits: Vec<usize>,
    shots: u64,
    counts: BTreeMap<String, u64>,
}

impl Serialize for Histogram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        HistogramJson {
            bit_order: "lsb0".into(),
            qubits: self.qubits.clone(),
            shots: self.shots,
            counts: self
                .counts
                .iter()
                .map(|(&k, &v)| (format_bits(k, self.qubits.len()), v))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Histogram {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = HistogramJson::deserialize(d)?;
        if raw.bit_order != "lsb0" {
            return Err(D::Error::custom(format!("unsupported bit order {}", raw.bit_order)));
        }
        let mut counts = BTreeMap::new();
        for (k, v) in raw.counts {
            let (value, n) = parse_bits(&k).map_err(D::Error::custom)?;
            if n != raw.qubits.len() {
                return Err(D::Error::custom(format!("outcome {k} has the wrong length")));
            }
            counts.insert(value, v);
        }
        let h = Histogram::new(raw.qubits, counts).map_err(D::Error::custom)?;
        if h.shots != raw.shots {
            return Err(D::Error::custom("shots does not match the sum of counts"));
        }
        Ok(h)
    }
}

/// Samples `shots` outcomes of the wires in `qubits` from the marginal
/// distribution of `state`. Identical arguments give identical histograms.
pub fn measure(state: &SparseState, qubits: &[usize], shots: u64, seed: u64) -> Result<Histogram> {
    if shots == 0 {
        return invalid_arg("shots must be at least 1");
    }
    check_subset(qubits, state.width())?;
    let marginal = state.marginal(qubits)?;
    let (outcomes, weights): (Vec<u64>, Vec<f64>) = marginal.into_iter().unzip();
    let dist = WeightedIndex::new(&weights)
        .map_err(|e| crate::error::Error::CorruptState(format!("bad distribution: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = BTreeMap::new();
    for _ in 0..shots {
        *counts.entry(outcomes[dist.sample(&mut rng)]).or_insert(0) += 1;
    }
    Histogram::new(qubits.to_vec(), counts)
}

/// Total-variation distance between an empirical histogram and an exact
/// distribution over the same outcome encoding.
pub fn total_variation(h: &Histogram, exact: &BTreeMap<u64, f64>) -> f64 {
    let n = h.shots() as f64;
    let mut keys: Vec<u64> = exact.keys().copied().collect();
    keys.extend(h.counts().keys().copied());
    keys.sort_unstable();
    keys.dedup();
    0.5 * keys
        .iter()
        .map(|k| (h.get(*k) as f64 / n - exact.get(k).copied().unwrap_or(0.0)).abs())
        .sum::<f64>()
}
