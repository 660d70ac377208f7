use std::ops::{Add, Index, Mul};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const NORM_TOLERANCE: f64 = 1e-12;

/// Amplitudes over the bare basis `|1>, |2>, |3>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateVector([Complex64; 3]);

impl StateVector {
    /// Builds a state and checks that it has unit norm.
    pub fn new(c1: Complex64, c2: Complex64, c3: Complex64) -> Result<Self> {
        let s = StateVector([c1, c2, c3]);
        let n = s.norm_sqr();
        if (n - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(n));
        }
        Ok(s)
    }

    /// Builds a state without a norm check; used for propagated states whose
    /// norm is a diagnostic rather than an invariant.
    pub const fn from_amplitudes(amplitudes: [Complex64; 3]) -> Self {
        StateVector(amplitudes)
    }

    pub fn from_real(c1: f64, c2: f64, c3: f64) -> Result<Self> {
        Self::new(c1.into(), c2.into(), c3.into())
    }

    /// Bare state `|level>` for `level` in 1..=3.
    pub fn bare(level: usize) -> Self {
        assert!((1..=3).contains(&level), "bare level must be 1, 2 or 3");
        let mut c = [Complex64::new(0.0, 0.0); 3];
        c[level - 1] = Complex64::new(1.0, 0.0);
        StateVector(c)
    }

    /// Transfer target `|-3> = (0, 0, -1)`.
    pub fn target() -> Self {
        StateVector([0.0.into(), 0.0.into(), (-1.0).into()])
    }

    pub fn amplitudes(&self) -> [Complex64; 3] {
        self.0
    }

    /// `<self|other>`
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn populations(&self) -> [f64; 3] {
        [
            self.0[0].norm_sqr(),
            self.0[1].norm_sqr(),
            self.0[2].norm_sqr(),
        ]
    }

    /// Largest amplitude difference `max_k |a_k - b_k|`.
    pub fn max_deviation(&self, other: &StateVector) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<usize> for StateVector {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl Add for StateVector {
    type Output = StateVector;

    fn add(self, rhs: StateVector) -> StateVector {
        StateVector([
            self.0[0] + rhs.0[0],
            self.0[1] + rhs.0[1],
            self.0[2] + rhs.0[2],
        ])
    }
}

impl Mul<StateVector> for Complex64 {
    type Output = StateVector;

    fn mul(self, rhs: StateVector) -> StateVector {
        StateVector(rhs.0.map(|c| self * c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unnormalized() {
        assert!(matches!(
            StateVector::from_real(1.0, 1.0, 0.0),
            Err(Error::NotNormalized(_))
        ));
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!(StateVector::from_real(h, 0.0, h).is_ok());
    }

    #[test]
    fn target_convention() {
        let t = StateVector::target();
        assert_eq!(t.inner(&StateVector::bare(3)), Complex64::new(-1.0, 0.0));
        assert_eq!(t.populations(), [0.0, 0.0, 1.0]);
    }
}
