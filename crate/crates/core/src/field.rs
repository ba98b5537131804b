use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::GridSpec;

/// Fourier coefficients of a real scalar field on the torus,
/// `f(x) = Σ_k f̂_k e^{ik·x}`.
///
/// Real-valuedness is the Hermitian symmetry `f̂_{-k} = conj(f̂_k)`. The
/// constructors that take wavenumbers maintain it; [`SpectralField::from_coeffs`]
/// takes the coefficients as given.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: GridSpec,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: GridSpec) -> Self {
        SpectralField {
            grid,
            coeffs: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn from_coeffs(grid: GridSpec, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::CoefficientLength {
                expected: grid.len(),
                found: coeffs.len(),
            });
        }
        Ok(SpectralField { grid, coeffs })
    }

    /// Field built from `(k, f̂_k)` pairs; each pair also sets the conjugate
    /// partner at `-k`. Wavenumbers outside the grid are ignored.
    pub fn from_modes(grid: GridSpec, modes: &[((i64, i64), Complex64)]) -> Self {
        let mut field = Self::zeros(grid);
        for &((k1, k2), c) in modes {
            if let Some(idx) = grid.index_of(k1, k2) {
                let conj = grid.conjugate_index(idx);
                if conj == idx {
                    field.coeffs[idx] += Complex64::new(c.re, 0.0);
                } else {
                    field.coeffs[idx] += c;
                    field.coeffs[conj] += c.conj();
                }
            }
        }
        field
    }

    /// `amplitude · sin(k₁x₁ + k₂x₂)`.
    pub fn sine(grid: GridSpec, k1: i64, k2: i64, amplitude: f64) -> Self {
        Self::from_modes(grid, &[((k1, k2), Complex64::new(0.0, -0.5 * amplitude))])
    }

    /// `amplitude · cos(k₁x₁ + k₂x₂)`.
    pub fn cosine(grid: GridSpec, k1: i64, k2: i64, amplitude: f64) -> Self {
        Self::from_modes(grid, &[((k1, k2), Complex64::new(0.5 * amplitude, 0.0))])
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient at `(k1, k2)`; zero for wavenumbers the grid does not carry.
    pub fn coeff(&self, k1: i64, k2: i64) -> Complex64 {
        self.grid
            .index_of(k1, k2)
            .map_or(Complex64::new(0.0, 0.0), |idx| self.coeffs[idx])
    }

    pub fn mean(&self) -> Complex64 {
        self.coeffs[0]
    }

    /// New field with coefficients `f(k, f̂_k)`.
    pub fn map_modes<F>(&self, mut f: F) -> Self
    where
        F: FnMut((i64, i64), Complex64) -> Complex64,
    {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(idx, &c)| f(self.grid.wavenumber(idx), c))
            .collect();
        SpectralField {
            grid: self.grid,
            coeffs,
        }
    }

    /// Sum of `|f̂_k|²`, the squared L² norm in the normalized measure.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Largest `|f̂_{-k} - conj(f̂_k)|` over the grid.
    pub fn hermitian_defect(&self) -> f64 {
        (0..self.coeffs.len())
            .map(|idx| {
                let conj = self.grid.conjugate_index(idx);
                (self.coeffs[conj] - self.coeffs[idx].conj()).norm()
            })
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol
    }

    /// Projection onto Hermitian-symmetric coefficients.
    pub fn hermitian_part(&self) -> Self {
        let coeffs = (0..self.coeffs.len())
            .map(|idx| {
                let conj = self.grid.conjugate_index(idx);
                0.5 * (self.coeffs[idx] + self.coeffs[conj].conj())
            })
            .collect();
        SpectralField {
            grid: self.grid,
            coeffs,
        }
    }

    pub fn without_mean(mut self) -> Self {
        self.coeffs[0] = Complex64::new(0.0, 0.0);
        self
    }

    /// Zeroes every mode outside the 2/3-rule band.
    pub fn dealiased(&self) -> Self {
        let grid = self.grid;
        self.map_modes(|(k1, k2), c| {
            if grid.in_dealiased_band(k1, k2) {
                c
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn scaled(&self, a: f64) -> Self {
        SpectralField {
            grid: self.grid,
            coeffs: self.coeffs.iter().map(|c| c * a).collect(),
        }
    }

    /// `self + a·other`.
    pub fn axpy(&self, a: f64, other: &SpectralField) -> Self {
        assert_eq!(self.grid, other.grid, "fields live on different grids");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(x, y)| x + y * a)
            .collect();
        SpectralField {
            grid: self.grid,
            coeffs,
        }
    }

    /// Copies the coefficients onto another grid, dropping wavenumbers the
    /// target does not carry and zero-filling the rest. Intended for fields
    /// without Nyquist content.
    pub fn resampled(&self, target: GridSpec) -> Self {
        let mut out = SpectralField::zeros(target);
        for (idx, &c) in self.coeffs.iter().enumerate() {
            let (k1, k2) = self.grid.wavenumber(idx);
            if let Some(t) = target.index_of(k1, k2) {
                out.coeffs[t] = c;
            }
        }
        out
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }
}

impl Add for &SpectralField {
    type Output = SpectralField;

    fn add(self, rhs: &SpectralField) -> SpectralField {
        self.axpy(1.0, rhs)
    }
}

impl Sub for &SpectralField {
    type Output = SpectralField;

    fn sub(self, rhs: &SpectralField) -> SpectralField {
        self.axpy(-1.0, rhs)
    }
}

impl Neg for &SpectralField {
    type Output = SpectralField;

    fn neg(self) -> SpectralField {
        self.scaled(-1.0)
    }
}

impl Mul<&SpectralField> for f64 {
    type Output = SpectralField;

    fn mul(self, rhs: &SpectralField) -> SpectralField {
        rhs.scaled(self)
    }
}
