//! Adaptive Gauss-Kronrod (7/15-point) quadrature.
//!
//! Globally adaptive bisection: the interval with the largest error estimate
//! is split until the summed estimate meets the requested tolerance.

#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd Kronrod nodes XGK[1], XGK[3], XGK[5] and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_INTERVALS: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub absolute: f64,
    pub relative: f64,
}

impl Tolerance {
    pub const fn absolute(absolute: f64) -> Self {
        Tolerance {
            absolute,
            relative: 0.0,
        }
    }

    pub const fn new(absolute: f64, relative: f64) -> Self {
        Tolerance { absolute, relative }
    }

    fn target(&self, value: f64) -> f64 {
        self.absolute.max(self.relative * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = f(centre - dx) + f(centre + dx);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).abs();
    Segment { a, b, value, error }
}

/// Integrates `f` over `[a, b]` to the given tolerance.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Integral> {
    if a == b {
        return Ok(Integral {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
        });
    }
    let mut segments = vec![kronrod15(&f, a, b)];
    let mut evaluations = 15;
    loop {
        let value: f64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        if !value.is_finite() {
            return Err(Error::QuadratureFailure {
                error_estimate: f64::INFINITY,
                tolerance: tol.target(0.0),
            });
        }
        if error <= tol.target(value) {
            return Ok(Integral {
                value,
                error_estimate: error,
                evaluations,
            });
        }
        if segments.len() >= MAX_INTERVALS {
            return Err(Error::QuadratureFailure {
                error_estimate: error,
                tolerance: tol.target(value),
            });
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .expect("at least one segment");
        let s = segments.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        if mid <= s.a || mid >= s.b {
            // interval can no longer be split in floating point
            return Err(Error::QuadratureFailure {
                error_estimate: error,
                tolerance: tol.target(value),
            });
        }
        segments.push(kronrod15(&f, s.a, mid));
        segments.push(kronrod15(&f, mid, s.b));
        evaluations += 30;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_exact() {
        let r = integrate(
            |x| x.powi(5) - 2.0 * x,
            0.0,
            2.0,
            Tolerance::absolute(1e-12),
        )
        .unwrap();
        assert!((r.value - (64.0 / 6.0 - 4.0)).abs() < 1e-13);
    }

    #[test]
    fn oscillatory() {
        let r = integrate(
            |x| (20.0 * x).sin().powi(2),
            0.0,
            PI,
            Tolerance::absolute(1e-10),
        )
        .unwrap();
        assert!((r.value - PI / 2.0).abs() < 1e-10);
    }

    #[test]
    fn reversed_bounds_flip_sign() {
        let r = integrate(|x| x.exp(), 1.0, 0.0, Tolerance::absolute(1e-12)).unwrap();
        assert!((r.value + (1f64.exp() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn non_integrable_fails() {
        let r = integrate(
            |x| 1.0 / x.abs().sqrt() / x.abs().sqrt(),
            -1.0,
            1.0,
            Tolerance::absolute(1e-10),
        );
        assert!(matches!(r, Err(Error::QuadratureFailure { .. })));
    }
}
