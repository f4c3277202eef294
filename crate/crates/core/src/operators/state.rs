use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::C64;

/// Normalized state over `num_sites` qubits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    amps: Vec<C64>,
    num_sites: usize,
}

impl StateVector {
    pub const NORM_TOL: f64 = 1e-12;

    /// Wraps amplitudes, rejecting states whose norm differs from 1.
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        let num_sites = qubit_count(amps.len())?;
        let norm = l2(&amps);
        if (norm - 1.0).abs() > Self::NORM_TOL {
            return Err(Error::domain(format!("state norm {norm} differs from 1")));
        }
        Ok(StateVector { amps, num_sites })
    }

    /// Wraps amplitudes after dividing by their norm.
    pub fn normalized(mut amps: Vec<C64>) -> Result<Self> {
        let num_sites = qubit_count(amps.len())?;
        let norm = l2(&amps);
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::domain("cannot normalize a zero or non-finite vector"));
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        Ok(StateVector { amps, num_sites })
    }

    /// Computational basis state `|index>`.
    pub fn basis(num_sites: usize, index: usize) -> Self {
        let mut amps = vec![C64::new(0.0, 0.0); 1 << num_sites];
        amps[index] = C64::new(1.0, 0.0);
        StateVector { amps, num_sites }
    }

    /// Néel state with spin up (bit 1) on odd sites.
    pub fn neel(num_sites: usize) -> Self {
        let index = (0..num_sites).filter(|k| k % 2 == 1).fold(0usize, |acc, k| acc | (1 << k));
        StateVector::basis(num_sites, index)
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn norm(&self) -> f64 {
        l2(&self.amps)
    }

    pub fn distance(&self, other: &StateVector) -> f64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    }
}

pub(crate) fn l2(v: &[C64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

fn qubit_count(len: usize) -> Result<usize> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::domain(format!("state length {len} is not a power of two")));
    }
    Ok(len.trailing_zeros() as usize)
}
