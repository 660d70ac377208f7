use std::fmt;
use std::io::{self, Write};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::operators::{hamiltonian_detuned, hamiltonian_resonant, HermitianOperator3};

type RabiFn = dyn Fn(f64) -> (f64, f64) + Send + Sync;

/// Pump and Stokes Rabi frequencies on `[0, t_f]` plus constant detunings.
///
/// The shape is stored as a shared closure returning `(Omega_p, Omega_s)` in
/// rad/us, so schedules are cheap to clone across sweep workers.
#[derive(Clone)]
pub struct PulseSchedule {
    rabi: Arc<RabiFn>,
    t_f: f64,
    delta_p: f64,
    delta_3: f64,
}

impl PulseSchedule {
    pub fn new<F>(t_f: f64, rabi: F) -> Result<Self>
    where
        F: Fn(f64) -> (f64, f64) + Send + Sync + 'static,
    {
        if !(t_f.is_finite() && t_f > 0.0) {
            return Err(Error::InvalidDuration(t_f));
        }
        Ok(PulseSchedule {
            rabi: Arc::new(rabi),
            t_f,
            delta_p: 0.0,
            delta_3: 0.0,
        })
    }

    /// Both fields switched off for the whole interval.
    pub fn zero(t_f: f64) -> Result<Self> {
        Self::new(t_f, |_| (0.0, 0.0))
    }

    pub fn with_detunings(mut self, delta_p: f64, delta_3: f64) -> Self {
        self.delta_p = delta_p;
        self.delta_3 = delta_3;
        self
    }

    pub fn t_f(&self) -> f64 {
        self.t_f
    }

    pub fn delta_p(&self) -> f64 {
        self.delta_p
    }

    pub fn delta_3(&self) -> f64 {
        self.delta_3
    }

    pub fn is_resonant(&self) -> bool {
        self.delta_p == 0.0 && self.delta_3 == 0.0
    }

    /// `(Omega_p(t), Omega_s(t))`
    pub fn rabi(&self, t: f64) -> (f64, f64) {
        (self.rabi)(t)
    }

    pub fn omega_p(&self, t: f64) -> f64 {
        self.rabi(t).0
    }

    pub fn omega_s(&self, t: f64) -> f64 {
        self.rabi(t).1
    }

    /// `sqrt(Omega_p^2 + Omega_s^2)`
    pub fn omega_rms(&self, t: f64) -> f64 {
        let (p, s) = self.rabi(t);
        p.hypot(s)
    }

    pub fn hamiltonian(&self, t: f64) -> HermitianOperator3 {
        let (p, s) = self.rabi(t);
        if self.is_resonant() {
            hamiltonian_resonant(p, s)
        } else {
            hamiltonian_detuned(p, s, self.delta_p, self.delta_3)
        }
    }

    /// Same amplitude profile played `factor` times slower.
    pub fn time_stretched(&self, factor: f64) -> Result<Self> {
        if !(factor.is_finite() && factor > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "stretch factor {factor} must be positive"
            )));
        }
        let inner = Arc::clone(&self.rabi);
        let mut out = Self::new(self.t_f * factor, move |t| inner(t / factor))?;
        out.delta_p = self.delta_p;
        out.delta_3 = self.delta_3;
        Ok(out)
    }

    /// Checks that both fields are finite on `samples + 1` evenly spaced points.
    pub fn check_finite(&self, samples: usize) -> Result<()> {
        for k in 0..=samples {
            let t = self.t_f * k as f64 / samples as f64;
            let (p, s) = self.rabi(t);
            if !(p.is_finite() && s.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "non-finite Rabi frequency at t = {t} us"
                )));
            }
        }
        Ok(())
    }

    /// `(t, Omega_p, Omega_s)` on `samples + 1` evenly spaced points.
    pub fn sample(&self, samples: usize) -> Vec<(f64, f64, f64)> {
        let n = samples.max(1);
        (0..=n)
            .map(|k| {
                let t = if k == n {
                    self.t_f
                } else {
                    self.t_f * k as f64 / n as f64
                };
                let (p, s) = self.rabi(t);
                (t, p, s)
            })
            .collect()
    }

    /// Writes the sampled pulses as CSV with header
    /// `t_us,omega_p_rad_per_us,omega_s_rad_per_us`.
    pub fn write_csv<W: Write>(&self, samples: usize, mut out: W) -> io::Result<()> {
        writeln!(out, "t_us,omega_p_rad_per_us,omega_s_rad_per_us")?;
        for (t, p, s) in self.sample(samples) {
            writeln!(out, "{},{},{}", fmt_float(t), fmt_float(p), fmt_float(s))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PulseSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PulseSchedule")
            .field("t_f", &self.t_f)
            .field("delta_p", &self.delta_p)
            .field("delta_3", &self.delta_3)
            .finish_non_exhaustive()
    }
}

/// Fixed 12-significant-digit formatting used by every CSV writer.
pub fn fmt_float(x: f64) -> String {
    if x == 0.0 {
        // avoid "-0.00000000000e0"
        return "0.00000000000e0".to_string();
    }
    format!("{x:.11e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_duration() {
        assert!(matches!(
            PulseSchedule::zero(0.0),
            Err(Error::InvalidDuration(_))
        ));
        assert!(matches!(
            PulseSchedule::zero(f64::NAN),
            Err(Error::InvalidDuration(_))
        ));
    }

    #[test]
    fn stretch_keeps_amplitude() {
        let p = PulseSchedule::new(2.0, |t| (t, 2.0 - t)).unwrap();
        let q = p.time_stretched(10.0).unwrap();
        assert_eq!(q.t_f(), 20.0);
        assert_eq!(q.rabi(5.0), p.rabi(0.5));
    }

    #[test]
    fn csv_layout() {
        let p = PulseSchedule::new(1.0, |t| (t, -t)).unwrap();
        let mut buf = Vec::new();
        p.write_csv(2, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "t_us,omega_p_rad_per_us,omega_s_rad_per_us");
        assert_eq!(lines.len(), 4);
        assert_eq!(
            lines[2],
            "5.00000000000e-1,5.00000000000e-1,-5.00000000000e-1"
        );
        assert_eq!(lines[3], "1.00000000000e0,1.00000000000e0,-1.00000000000e0");
    }

    #[test]
    fn detuned_hamiltonian_diagonal() {
        let p = PulseSchedule::zero(1.0).unwrap().with_detunings(0.3, -0.1);
        let h = p.hamiltonian(0.5);
        assert_eq!(h.entry(1, 1).re, 0.3);
        assert_eq!(h.entry(2, 2).re, -0.1);
    }
}
