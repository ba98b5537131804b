//! Fourier multipliers, Riesz velocity, the linear semigroup and the
//! dealiased advection term.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::Fft2;
use crate::field::SpectralField;
use crate::grid::GridSpec;
use crate::math::{abs_pow, exp, sqrt};
use crate::params::DissipParams;

/// Mean coefficients below this (relative to the field's L² size) count
/// as zero.
pub const MEAN_TOLERANCE: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Dissipation symbol `A(k) = μ|k₁|^{2α} + ν|k₂|^{2β}`.
#[inline]
pub fn dissipation_symbol(k: (i64, i64), p: &DissipParams) -> f64 {
    p.mu * abs_pow(k.0 as f64, 2.0 * p.alpha) + p.nu * abs_pow(k.1 as f64, 2.0 * p.beta)
}

/// Gevrey weight symbol `B(k) = 2(|k₁|^α + |k₂|^β)`.
#[inline]
pub fn gevrey_symbol(k: (i64, i64), p: &DissipParams) -> f64 {
    2.0 * (abs_pow(k.0 as f64, p.alpha) + abs_pow(k.1 as f64, p.beta))
}

fn check_mean_zero(f: &SpectralField) -> Result<()> {
    let mean = f.mean().norm();
    let scale = sqrt(f.energy()).max(1.0);
    if mean > MEAN_TOLERANCE * scale {
        Err(Error::NonzeroMean { mean })
    } else {
        Ok(())
    }
}

/// Velocity `u = R^⊥θ`, i.e. multipliers `(-ik₂/|k|, ik₁/|k|)`.
///
/// The k = 0 coefficient and Nyquist rows/columns are set to zero in both
/// components.
pub fn riesz_velocity(theta: &SpectralField) -> Result<(SpectralField, SpectralField)> {
    check_mean_zero(theta)?;
    let grid = theta.grid();
    let multiplier = |(k1, k2): (i64, i64), axis: usize| -> Complex64 {
        if (k1 == 0 && k2 == 0) || grid.is_nyquist(k1, k2) {
            return ZERO;
        }
        let norm = crate::math::hypot(k1 as f64, k2 as f64);
        if axis == 1 {
            Complex64::new(0.0, -(k2 as f64) / norm)
        } else {
            Complex64::new(0.0, k1 as f64 / norm)
        }
    };
    let u1 = theta.map_modes(|k, c| multiplier(k, 1) * c);
    let u2 = theta.map_modes(|k, c| multiplier(k, 2) * c);
    Ok((u1, u2))
}

/// Multiplies every coefficient by `e^{-t A(k)}`.
pub fn apply_semigroup(f: &SpectralField, t: f64, p: &DissipParams) -> Result<SpectralField> {
    if t < 0.0 || t.is_nan() {
        return Err(Error::NegativeTime(t));
    }
    if t == 0.0 {
        return Ok(f.clone());
    }
    Ok(f.map_modes(|k, c| c * exp(-t * dissipation_symbol(k, p))))
}

/// Transform plans and physical-space operations for one grid.
///
/// Plans are immutable after construction, so a context can be shared
/// freely between threads.
#[derive(Debug, Clone)]
pub struct SpectralContext {
    grid: GridSpec,
    fft: Fft2,
}

impl SpectralContext {
    pub fn new(grid: GridSpec) -> Self {
        SpectralContext {
            grid,
            fft: Fft2::new(grid.n1(), grid.n2()),
        }
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    fn check_grid(&self, f: &SpectralField) -> Result<()> {
        if f.grid() == self.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    /// Point values on the grid `x = 2π(j₁/n₁, j₂/n₂)`, row-major in `j₁`.
    pub fn to_physical(&self, f: &SpectralField) -> Result<Vec<f64>> {
        self.check_grid(f)?;
        let mut buf = f.coeffs().to_vec();
        self.fft.inverse(&mut buf);
        Ok(buf.into_iter().map(|z| z.re).collect())
    }

    /// Two real fields with one complex transform: `F + iG` maps to `f + ig`.
    pub fn to_physical_pair(
        &self,
        f: &SpectralField,
        g: &SpectralField,
    ) -> Result<(Vec<f64>, Vec<f64>)> {
        self.check_grid(f)?;
        self.check_grid(g)?;
        let i = Complex64::new(0.0, 1.0);
        let mut buf: Vec<Complex64> = f
            .coeffs()
            .iter()
            .zip(g.coeffs())
            .map(|(a, b)| a + i * b)
            .collect();
        self.fft.inverse(&mut buf);
        Ok(buf.into_iter().map(|z| (z.re, z.im)).unzip())
    }

    /// Fourier coefficients of grid values, projected onto exact Hermitian
    /// symmetry.
    pub fn to_spectral(&self, values: &[f64]) -> Result<SpectralField> {
        if values.len() != self.grid.len() {
            return Err(Error::CoefficientLength {
                expected: self.grid.len(),
                found: values.len(),
            });
        }
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.fft.forward(&mut buf);
        let scale = 1.0 / self.grid.len() as f64;
        for z in &mut buf {
            *z *= scale;
        }
        Ok(SpectralField::from_coeffs(self.grid, buf)?.hermitian_part())
    }

    /// Transforms two real arrays at once; both results are exactly Hermitian.
    pub fn to_spectral_pair(&self, a: &[f64], b: &[f64]) -> Result<(SpectralField, SpectralField)> {
        let n = self.grid.len();
        if a.len() != n || b.len() != n {
            return Err(Error::CoefficientLength {
                expected: n,
                found: a.len().min(b.len()),
            });
        }
        let mut buf: Vec<Complex64> = a
            .iter()
            .zip(b)
            .map(|(&x, &y)| Complex64::new(x, y))
            .collect();
        self.fft.forward(&mut buf);
        let scale = 1.0 / n as f64;
        let mut fa = vec![ZERO; n];
        let mut fb = vec![ZERO; n];
        for idx in 0..n {
            let z = buf[idx];
            let zc = buf[self.grid.conjugate_index(idx)].conj();
            fa[idx] = 0.5 * (z + zc) * scale;
            fb[idx] = Complex64::new(0.0, -0.5) * (z - zc) * scale;
        }
        Ok((
            SpectralField::from_coeffs(self.grid, fa)?,
            SpectralField::from_coeffs(self.grid, fb)?,
        ))
    }

    /// Dealiased `div(a · R^⊥b)`.
    ///
    /// Products are formed on the physical grid, the divergence is applied
    /// as `i k·(·)` and every mode outside `|kᵢ| ≤ nᵢ/3` is dropped. The
    /// result has zero mean and exact Hermitian symmetry.
    pub fn bilinear_term(&self, a: &SpectralField, b: &SpectralField) -> Result<SpectralField> {
        self.check_grid(a)?;
        self.check_grid(b)?;
        check_mean_zero(a)?;
        let (u1, u2) = riesz_velocity(b)?;
        let (ua, ub) = self.to_physical_pair(&u1, &u2)?;
        let av = self.to_physical(a)?;
        let q1: Vec<f64> = av.iter().zip(&ua).map(|(x, y)| x * y).collect();
        let q2: Vec<f64> = av.iter().zip(&ub).map(|(x, y)| x * y).collect();
        let (f1, f2) = self.to_spectral_pair(&q1, &q2)?;
        let grid = self.grid;
        let (c1, c2) = (f1.coeffs(), f2.coeffs());
        let coeffs = (0..grid.len())
            .map(|idx| {
                let (k1, k2) = grid.wavenumber(idx);
                if (k1 == 0 && k2 == 0) || !grid.in_dealiased_band(k1, k2) {
                    ZERO
                } else {
                    Complex64::new(0.0, k1 as f64) * c1[idx]
                        + Complex64::new(0.0, k2 as f64) * c2[idx]
                }
            })
            .collect();
        SpectralField::from_coeffs(grid, coeffs)
    }

    /// Dealiased `div(θ u_θ) = u_θ·∇θ`.
    pub fn nonlinear_term(&self, theta: &SpectralField) -> Result<SpectralField> {
        self.bilinear_term(theta, theta)
    }

    /// Largest pointwise speed `|u|` of the Riesz velocity on the grid.
    pub fn max_velocity(&self, theta: &SpectralField) -> Result<f64> {
        self.check_grid(theta)?;
        let (u1, u2) = riesz_velocity(theta)?;
        let (a, b) = self.to_physical_pair(&u1, &u2)?;
        Ok(a.iter()
            .zip(&b)
            .map(|(x, y)| crate::math::hypot(*x, *y))
            .fold(0.0, f64::max))
    }
}
