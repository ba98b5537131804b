use core::f64::consts::PI;

use crate::error::{Error, Result};

/// Mode counts of the periodic square `[0, 2π)²`.
///
/// Coefficients are stored `k₁`-major in transform order: index
/// `i1 * n2 + i2`, where `i ↦ k` maps `0..=n/2` to itself and `n/2+1..n` to
/// `-n/2+1..-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridSpec {
    n1: usize,
    n2: usize,
}

impl GridSpec {
    pub const MIN_MODES: usize = 8;

    pub fn new(n1: usize, n2: usize) -> Result<Self> {
        let ok = |n: usize| n >= Self::MIN_MODES && n % 2 == 0;
        if ok(n1) && ok(n2) {
            Ok(GridSpec { n1, n2 })
        } else {
            Err(Error::InvalidGrid { n1, n2 })
        }
    }

    pub fn square(n: usize) -> Result<Self> {
        Self::new(n, n)
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn len(&self) -> usize {
        self.n1 * self.n2
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid spacing `2π/n` along each axis.
    pub fn spacing(&self) -> (f64, f64) {
        (2.0 * PI / self.n1 as f64, 2.0 * PI / self.n2 as f64)
    }

    #[inline]
    pub fn k1(&self, i1: usize) -> i64 {
        signed_wavenumber(i1, self.n1)
    }

    #[inline]
    pub fn k2(&self, i2: usize) -> i64 {
        signed_wavenumber(i2, self.n2)
    }

    /// Wavenumber pair of a flat coefficient index.
    #[inline]
    pub fn wavenumber(&self, idx: usize) -> (i64, i64) {
        (self.k1(idx / self.n2), self.k2(idx % self.n2))
    }

    /// Flat index of `(k1, k2)`, or `None` if the pair is not retained.
    pub fn index_of(&self, k1: i64, k2: i64) -> Option<usize> {
        let i1 = unsigned_index(k1, self.n1)?;
        let i2 = unsigned_index(k2, self.n2)?;
        Some(i1 * self.n2 + i2)
    }

    /// Flat index of `-k`, wrapping the Nyquist row/column onto itself.
    #[inline]
    pub fn conjugate_index(&self, idx: usize) -> usize {
        let (i1, i2) = (idx / self.n2, idx % self.n2);
        ((self.n1 - i1) % self.n1) * self.n2 + (self.n2 - i2) % self.n2
    }

    /// Whether `(k1, k2)` survives the 2/3 truncation `|kᵢ| ≤ nᵢ/3`.
    #[inline]
    pub fn in_dealiased_band(&self, k1: i64, k2: i64) -> bool {
        3 * k1.unsigned_abs() as usize <= self.n1 && 3 * k2.unsigned_abs() as usize <= self.n2
    }

    /// Largest band limit `kmax` that keeps a square band inside the
    /// dealiased set.
    pub fn dealiased_kmax(&self) -> usize {
        self.n1.min(self.n2) / 3
    }

    /// True when `k` sits on a Nyquist row or column (`kᵢ = nᵢ/2`).
    #[inline]
    pub fn is_nyquist(&self, k1: i64, k2: i64) -> bool {
        k1 == (self.n1 / 2) as i64 || k2 == (self.n2 / 2) as i64
    }
}

#[inline]
fn signed_wavenumber(i: usize, n: usize) -> i64 {
    if i <= n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

#[inline]
fn unsigned_index(k: i64, n: usize) -> Option<usize> {
    let half = (n / 2) as i64;
    if k > half || k <= -half {
        None
    } else if k >= 0 {
        Some(k as usize)
    } else {
        Some((k + n as i64) as usize)
    }
}
