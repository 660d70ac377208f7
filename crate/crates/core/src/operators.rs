//! Three-level operator algebra: spin-1 generators and the RWA Hamiltonians.
//!
//! All operators are in units of hbar = 1, so Hamiltonians carry angular
//! frequency (rad/us).

use std::ops::{Add, Mul};

use nalgebra::Matrix3;
use num_complex::Complex64;

use crate::state::StateVector;

const HERMITIAN_TOLERANCE: f64 = 1e-14;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// A 3x3 Hermitian matrix over the bare basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianOperator3(Matrix3<Complex64>);

impl HermitianOperator3 {
    /// Wraps `m`, returning `None` if it is not Hermitian to 1e-14.
    pub fn new(m: Matrix3<Complex64>) -> Option<Self> {
        let op = HermitianOperator3(m);
        (op.hermiticity_defect() <= HERMITIAN_TOLERANCE).then_some(op)
    }

    /// Builds a real symmetric operator from its upper triangle.
    pub fn real_symmetric(diag: [f64; 3], h12: f64, h13: f64, h23: f64) -> Self {
        HermitianOperator3(Matrix3::new(
            c(diag[0]),
            c(h12),
            c(h13),
            c(h12),
            c(diag[1]),
            c(h23),
            c(h13),
            c(h23),
            c(diag[2]),
        ))
    }

    pub fn zero() -> Self {
        HermitianOperator3(Matrix3::zeros())
    }

    pub fn matrix(&self) -> &Matrix3<Complex64> {
        &self.0
    }

    /// Entry at 0-based `(row, col)`.
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.0[(row, col)]
    }

    /// Largest entry of `|A - A^dagger|`.
    pub fn hermiticity_defect(&self) -> f64 {
        (self.0 - self.0.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn apply(&self, psi: &StateVector) -> StateVector {
        let a = psi.amplitudes();
        let v = self.0 * nalgebra::Vector3::new(a[0], a[1], a[2]);
        StateVector::from_amplitudes([v[0], v[1], v[2]])
    }

    /// `<psi|A|psi>`
    pub fn expectation(&self, psi: &StateVector) -> f64 {
        psi.inner(&self.apply(psi)).re
    }

    /// `[A, B] = AB - BA` (anti-Hermitian, so returned as a plain matrix).
    pub fn commutator(&self, other: &HermitianOperator3) -> Matrix3<Complex64> {
        self.0 * other.0 - other.0 * self.0
    }

    pub fn scale(&self, s: f64) -> Self {
        HermitianOperator3(self.0.map(|z| z * s))
    }
}

impl Add for HermitianOperator3 {
    type Output = HermitianOperator3;

    fn add(self, rhs: HermitianOperator3) -> HermitianOperator3 {
        HermitianOperator3(self.0 + rhs.0)
    }
}

impl Mul<HermitianOperator3> for f64 {
    type Output = HermitianOperator3;

    fn mul(self, rhs: HermitianOperator3) -> HermitianOperator3 {
        rhs.scale(self)
    }
}

/// Frobenius norm of a complex 3x3 matrix.
pub fn frobenius_norm(m: &Matrix3<Complex64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// The spin-1 generators `(K1, K2, K3)` with `[K1, K2] = i K3` cyclically.
pub fn spin1_operators() -> (HermitianOperator3, HermitianOperator3, HermitianOperator3) {
    let o = c(0.0);
    let one = c(1.0);
    let i = Complex64::i();
    let k1 = Matrix3::new(o, one, o, one, o, o, o, o, o);
    let k2 = Matrix3::new(o, o, o, o, o, one, o, one, o);
    let k3 = Matrix3::new(o, o, -i, o, o, o, i, o, o);
    (
        HermitianOperator3(k1),
        HermitianOperator3(k2),
        HermitianOperator3(k3),
    )
}

/// On-resonance Hamiltonian `H = (Omega_p K1 + Omega_s K2) / 2`.
pub fn hamiltonian_resonant(omega_p: f64, omega_s: f64) -> HermitianOperator3 {
    HermitianOperator3::real_symmetric([0.0; 3], 0.5 * omega_p, 0.0, 0.5 * omega_s)
}

/// RWA Hamiltonian with one-photon detuning `delta_p` and two-photon
/// detuning `delta_3`: diagonal `(0, delta_p, delta_3)`.
pub fn hamiltonian_detuned(
    omega_p: f64,
    omega_s: f64,
    delta_p: f64,
    delta_3: f64,
) -> HermitianOperator3 {
    HermitianOperator3::real_symmetric([0.0, delta_p, delta_3], 0.5 * omega_p, 0.0, 0.5 * omega_s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn max_abs_diff(a: &Matrix3<Complex64>, b: &Matrix3<Complex64>) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn spin1_entries_as_printed() {
        let (k1, k2, k3) = spin1_operators();
        for r in 0..3 {
            for col in 0..3 {
                let e1 = if (r, col) == (0, 1) || (r, col) == (1, 0) {
                    1.0
                } else {
                    0.0
                };
                assert_eq!(k1.entry(r, col), c(e1));
                let e2 = if (r, col) == (1, 2) || (r, col) == (2, 1) {
                    1.0
                } else {
                    0.0
                };
                assert_eq!(k2.entry(r, col), c(e2));
            }
        }
        assert_eq!(k3.entry(0, 2), -Complex64::i());
        assert_eq!(k3.entry(2, 0), Complex64::i());
        assert_eq!(k3.matrix().iter().filter(|z| z.norm() > 0.0).count(), 2);
    }

    #[test]
    fn spin1_commutators() {
        let (k1, k2, k3) = spin1_operators();
        let i = Complex64::i();
        for (a, b, expect) in [(k1, k2, k3), (k2, k3, k1), (k3, k1, k2)] {
            let lhs = a.commutator(&b);
            let rhs = expect.matrix().map(|z| z * i);
            assert!(max_abs_diff(&lhs, &rhs) <= 1e-15);
        }
    }

    #[test]
    fn resonant_examples() {
        assert_eq!(hamiltonian_resonant(0.0, 0.0), HermitianOperator3::zero());
        let h = hamiltonian_resonant(2.0, 0.0);
        assert_eq!(h.entry(0, 1), c(1.0));
        assert_eq!(h.entry(1, 0), c(1.0));
        assert_eq!(h.matrix().iter().filter(|z| z.norm() > 0.0).count(), 2);
    }

    #[test]
    fn detuned_examples() {
        assert_eq!(
            hamiltonian_detuned(1.3, -0.4, 0.0, 0.0),
            hamiltonian_resonant(1.3, -0.4)
        );
        let d = hamiltonian_detuned(0.0, 0.0, 0.7, -0.2);
        assert_eq!(d.entry(1, 1), c(0.7));
        assert_eq!(d.entry(2, 2), c(-0.2));
        assert_eq!(d.entry(0, 0), c(0.0));
        let h = hamiltonian_detuned(1.0, 1.0, 0.5, -0.5);
        assert!(h.hermiticity_defect() <= 1e-14);
        assert!(h.trace().norm() < 1e-15);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn resonant_matches_generator_sum(op in -50.0..50.0f64, os in -50.0..50.0f64) {
            let (k1, k2, _) = spin1_operators();
            let composed = (0.5 * op) * k1 + (0.5 * os) * k2;
            let h = hamiltonian_resonant(op, os);
            prop_assert!(max_abs_diff(h.matrix(), composed.matrix()) <= 1e-15);
            prop_assert!(h.trace().norm() == 0.0);
            prop_assert!(h.entry(0, 2).norm() == 0.0);
        }

        #[test]
        fn builders_are_hermitian(
            op in -1e3..1e3f64, os in -1e3..1e3f64, dp in -1e2..1e2f64, d3 in -1e2..1e2f64
        ) {
            prop_assert!(hamiltonian_resonant(op, os).hermiticity_defect() <= 1e-14);
            prop_assert!(hamiltonian_detuned(op, os, dp, d3).hermiticity_defect() <= 1e-14);
        }
    }
}
