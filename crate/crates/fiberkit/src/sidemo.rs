//! Sampled demonstration of shift-invariant spaces on the line: grid
//! fiberization and the Benedetto-Li frame criterion.
//!
//! A band-limited spectrum is sampled on the fibers `xi_j + k` with
//! `xi_j = j / N` and `|k| <= K`; the profile `p(j) = sum_k |fhat(xi_j + k)|^2`
//! decides the frame property of the integer translates of `f` for their
//! span: bounds are the extreme positive profile values. The continuous
//! statement cannot be certified from samples, so reports carry an
//! `approximate` flag that is cleared only for piecewise-constant spectra
//! with breakpoints on the grid.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frames::{FrameReport, Verdict};

/// Point samples `fhat(xi_j + k)` of a band-limited spectrum.
#[derive(Debug, Clone)]
pub struct SampledSpectrum {
    grid: usize,
    band_limit: i64,
    /// `values[j][k + band_limit] = fhat(j / N + k)`
    values: Vec<Vec<Complex64>>,
    exact: bool,
}

/// Frame report with the discretization honesty flag.
#[derive(Debug, Clone, Serialize)]
pub struct SiFrameReport {
    #[serde(flatten)]
    pub report: FrameReport,
    /// False only when the spectrum is piecewise constant with breakpoints
    /// aligned to the grid, in which case the bounds are exact.
    pub approximate: bool,
    pub grid: usize,
}

impl SampledSpectrum {
    /// Raw samples; the report will be flagged approximate.
    pub fn from_samples(grid: usize, band_limit: i64, values: Vec<Vec<Complex64>>) -> Result<Self> {
        if grid == 0 {
            return Err(Error::InvalidInput("grid size must be >= 1".into()));
        }
        if band_limit < 0 {
            return Err(Error::InvalidInput("band limit must be >= 0".into()));
        }
        let width = (2 * band_limit + 1) as usize;
        if values.len() != grid || values.iter().any(|row| row.len() != width) {
            return Err(Error::InvalidInput(format!(
                "expected {grid} rows of {width} fiber samples"
            )));
        }
        Ok(Self {
            grid,
            band_limit,
            values,
            exact: false,
        })
    }

    /// Piecewise-constant spectrum: `fhat = value` on `[from, to)` per
    /// piece, zero elsewhere within the band `[-K, K + 1)`. The report is
    /// exact when every breakpoint lies on the grid.
    pub fn piecewise_constant(
        grid: usize,
        band_limit: i64,
        pieces: &[(f64, f64, Complex64)],
    ) -> Result<Self> {
        if grid == 0 {
            return Err(Error::InvalidInput("grid size must be >= 1".into()));
        }
        let k = band_limit;
        if pieces
            .iter()
            .any(|&(a, b, _)| a < -(k as f64) || b > (k + 1) as f64 || a >= b)
        {
            return Err(Error::InvalidInput(
                "pieces must be nonempty intervals inside the band limit".into(),
            ));
        }
        let n = grid as f64;
        let aligned = pieces.iter().all(|&(a, b, _)| {
            let fa = (a * n).round() / n;
            let fb = (b * n).round() / n;
            (fa - a).abs() < 1e-12 && (fb - b).abs() < 1e-12
        });
        let width = (2 * band_limit + 1) as usize;
        let mut values = vec![vec![Complex64::new(0.0, 0.0); width]; grid];
        for j in 0..grid {
            for idx in 0..width {
                let xi = j as f64 / n + (idx as i64 - band_limit) as f64;
                for &(a, b, v) in pieces {
                    if xi >= a - 1e-12 && xi < b - 1e-12 {
                        values[j][idx] = v;
                    }
                }
            }
        }
        Ok(Self {
            grid,
            band_limit,
            values,
            exact: aligned,
        })
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    pub fn band_limit(&self) -> i64 {
        self.band_limit
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// The Benedetto-Li profile `p(j) = sum_k |fhat(j/N + k)|^2`.
    pub fn bl_profile(&self) -> Vec<f64> {
        self.values
            .iter()
            .map(|row| row.iter().map(|z| z.norm_sqr()).sum())
            .collect()
    }

    /// Frame bounds of the integer translates for their span: extreme
    /// positive profile values, with verdicts as in the discrete case.
    pub fn si_frame_bounds(&self) -> SiFrameReport {
        let profile = self.bl_profile();
        // grid values of a bounded profile; treat anything below the
        // roundoff floor of the largest value as vanishing
        let top = profile.iter().cloned().fold(0.0f64, f64::max);
        let floor = top * 1e-14;
        let mut lower = f64::INFINITY;
        let mut upper = 0.0f64;
        let mut lower_atom = None;
        let mut upper_atom = None;
        let mut support = 0usize;
        for (j, &p) in profile.iter().enumerate() {
            if p <= floor {
                continue;
            }
            support += 1;
            if p < lower {
                lower = p;
                lower_atom = Some(format!("{}/{}", j, self.grid));
            }
            if p > upper {
                upper = p;
                upper_atom = Some(format!("{}/{}", j, self.grid));
            }
        }
        if support == 0 {
            return SiFrameReport {
                report: FrameReport::empty(),
                approximate: !self.exact,
                grid: self.grid,
            };
        }
        let tol = 1e-9;
        let parseval = (lower - 1.0).abs() <= tol && (upper - 1.0).abs() <= tol;
        let tight = (upper - lower).abs() <= tol * upper.max(1.0);
        let riesz = support == self.grid;
        let verdict = if parseval {
            Verdict::Parseval
        } else if tight {
            Verdict::Tight
        } else if riesz {
            Verdict::Riesz
        } else {
            Verdict::Frame
        };
        SiFrameReport {
            report: FrameReport {
                lower,
                upper,
                verdict,
                riesz,
                lower_atom,
                upper_atom,
            },
            approximate: !self.exact,
            grid: self.grid,
        }
    }

    /// Relabel the band index by an integer translation `fhat(. - shift)`.
    /// Errors when mass would fall off the band limit.
    pub fn translate_integer(&self, shift: i64) -> Result<SampledSpectrum> {
        let width = (2 * self.band_limit + 1) as i64;
        let mut values = vec![vec![Complex64::new(0.0, 0.0); width as usize]; self.grid];
        for j in 0..self.grid {
            for idx in 0..width {
                let v = self.values[j][idx as usize];
                let dst = idx + shift;
                if (0..width).contains(&dst) {
                    values[j][dst as usize] = v;
                } else if v.norm_sqr() > 0.0 {
                    return Err(Error::InvalidInput(
                        "translation pushes spectral mass outside the band limit".into(),
                    ));
                }
            }
        }
        Ok(SampledSpectrum {
            grid: self.grid,
            band_limit: self.band_limit,
            values,
            exact: self.exact,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn indicator_unit_interval_is_parseval() {
        let s = SampledSpectrum::piecewise_constant(64, 2, &[(0.0, 1.0, c(1.0))]).unwrap();
        assert!(s.is_exact());
        let profile = s.bl_profile();
        assert!(profile.iter().all(|&p| (p - 1.0).abs() < 1e-14));
        let report = s.si_frame_bounds();
        assert_eq!(report.report.verdict, Verdict::Parseval);
        assert!(!report.approximate);
    }

    #[test]
    fn indicator_double_interval_is_tight_two() {
        let s = SampledSpectrum::piecewise_constant(256, 3, &[(0.0, 2.0, c(1.0))]).unwrap();
        let profile = s.bl_profile();
        // two unit contributions per fiber
        assert!(profile.iter().all(|&p| (p - 2.0).abs() < 1e-12));
        let report = s.si_frame_bounds();
        assert_eq!(report.report.verdict, Verdict::Tight);
        assert!((report.report.lower - 2.0).abs() < 1e-12);
        assert!((report.report.upper - 2.0).abs() < 1e-12);
        assert!(!report.approximate);
    }

    #[test]
    fn sqrt_profile_vanishing_infimum() {
        // fhat(xi) = sqrt(xi) on [0, 1): profile p(j) = j / N, infimum -> 0
        for n in [16usize, 64, 256] {
            let values: Vec<Vec<Complex64>> = (0..n)
                .map(|j| {
                    let xi = j as f64 / n as f64;
                    vec![c(0.0), c(xi.sqrt()), c(0.0)]
                })
                .collect();
            let s = SampledSpectrum::from_samples(n, 1, values).unwrap();
            let profile = s.bl_profile();
            for (j, &p) in profile.iter().enumerate() {
                assert!((p - j as f64 / n as f64).abs() < 1e-14);
            }
            let report = s.si_frame_bounds();
            assert!(report.approximate);
            // smallest positive profile value is 1/N: not a frame in the limit
            assert!((report.report.lower - 1.0 / n as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn profile_invariant_under_integer_translation() {
        let s = SampledSpectrum::piecewise_constant(32, 3, &[(0.25, 1.0, c(2.0)), (1.0, 1.5, c(-1.0))])
            .unwrap();
        let t = s.translate_integer(1).unwrap();
        assert_eq!(s.bl_profile(), t.bl_profile());
        let back = t.translate_integer(-1).unwrap();
        assert_eq!(s.bl_profile(), back.bl_profile());
        // pushing past the band limit errors
        assert!(s.translate_integer(3).is_err());
    }

    #[test]
    fn misaligned_breakpoints_are_approximate() {
        let n = 64;
        let s = SampledSpectrum::piecewise_constant(n, 1, &[(0.0, 0.3, c(1.0))]).unwrap();
        assert!(!s.is_exact());
        assert!(s.si_frame_bounds().approximate);
    }
}
