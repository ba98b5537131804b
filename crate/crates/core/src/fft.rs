//! Discrete Fourier transforms used by the pseudospectral operations.
//!
//! Power-of-two lengths use an iterative radix-2 Cooley–Tukey kernel; any
//! other length goes through Bluestein's chirp-z reformulation on top of a
//! power-of-two transform. Twiddles are tabulated once per plan from
//! `sin`/`cos` of exact rational angles, which keeps round trips at the
//! 1e-15 level for the sizes used here.
//!
//! Sign conventions: [`Fft::forward`] computes `X_k = Σ_j x_j e^{-2πijk/n}`,
//! [`Fft::inverse`] the same sum with `+i` and no normalization.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::math::{cos, sin};

#[derive(Debug, Clone)]
struct Radix2 {
    n: usize,
    // twiddles[j] = e^{-2πij/n}, j < n/2
    twiddles: Vec<Complex64>,
    bitrev: Vec<u32>,
}

impl Radix2 {
    fn new(n: usize) -> Self {
        debug_assert!(n.is_power_of_two());
        let twiddles = (0..n / 2)
            .map(|j| {
                let angle = -2.0 * PI * j as f64 / n as f64;
                Complex64::new(cos(angle), sin(angle))
            })
            .collect();
        let bits = n.trailing_zeros();
        let bitrev = (0..n as u32)
            .map(|i| {
                if bits == 0 {
                    0
                } else {
                    i.reverse_bits() >> (32 - bits)
                }
            })
            .collect();
        Radix2 {
            n,
            twiddles,
            bitrev,
        }
    }

    fn process(&self, data: &mut [Complex64], inverse: bool) {
        let n = self.n;
        for i in 0..n {
            let j = self.bitrev[i] as usize;
            if j > i {
                data.swap(i, j);
            }
        }
        let mut len = 2;
        while len <= n {
            let half = len / 2;
            let stride = n / len;
            for start in (0..n).step_by(len) {
                for j in 0..half {
                    let mut w = self.twiddles[j * stride];
                    if inverse {
                        w = w.conj();
                    }
                    let a = data[start + j];
                    let b = data[start + j + half] * w;
                    data[start + j] = a + b;
                    data[start + j + half] = a - b;
                }
            }
            len <<= 1;
        }
    }
}

#[derive(Debug, Clone)]
struct Bluestein {
    n: usize,
    // chirp[k] = e^{-iπk²/n}
    chirp: Vec<Complex64>,
    // forward transform of the conjugate-chirp filter, length m
    filter: Vec<Complex64>,
    inner: Radix2,
}

impl Bluestein {
    fn new(n: usize) -> Self {
        let m = (2 * n - 1).next_power_of_two();
        let chirp: Vec<Complex64> = (0..n)
            .map(|k| {
                // k² mod 2n keeps the angle argument small and exact
                let k2 = (k as u128 * k as u128 % (2 * n as u128)) as f64;
                let angle = -PI * k2 / n as f64;
                Complex64::new(cos(angle), sin(angle))
            })
            .collect();
        let inner = Radix2::new(m);
        let mut filter = vec![Complex64::new(0.0, 0.0); m];
        filter[0] = chirp[0].conj();
        for k in 1..n {
            filter[k] = chirp[k].conj();
            filter[m - k] = chirp[k].conj();
        }
        inner.process(&mut filter, false);
        Bluestein {
            n,
            chirp,
            filter,
            inner,
        }
    }

    fn process(&self, data: &mut [Complex64], inverse: bool) {
        let m = self.inner.n;
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        for k in 0..self.n {
            let x = if inverse { data[k].conj() } else { data[k] };
            buf[k] = x * self.chirp[k];
        }
        self.inner.process(&mut buf, false);
        for (b, f) in buf.iter_mut().zip(&self.filter) {
            *b *= f;
        }
        self.inner.process(&mut buf, true);
        let scale = 1.0 / m as f64;
        for k in 0..self.n {
            let y = buf[k] * self.chirp[k] * scale;
            data[k] = if inverse { y.conj() } else { y };
        }
    }
}

#[derive(Debug, Clone)]
enum Kernel {
    Radix2(Radix2),
    Bluestein(Bluestein),
}

/// One-dimensional transform plan of a fixed length.
#[derive(Debug, Clone)]
pub struct Fft {
    len: usize,
    kernel: Kernel,
}

impl Fft {
    pub fn new(len: usize) -> Self {
        assert!(len > 0, "transform length must be positive");
        let kernel = if len.is_power_of_two() {
            Kernel::Radix2(Radix2::new(len))
        } else {
            Kernel::Bluestein(Bluestein::new(len))
        };
        Fft { len, kernel }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        self.run(data, false);
    }

    pub fn inverse(&self, data: &mut [Complex64]) {
        self.run(data, true);
    }

    fn run(&self, data: &mut [Complex64], inverse: bool) {
        assert_eq!(data.len(), self.len, "buffer length does not match plan");
        match &self.kernel {
            Kernel::Radix2(k) => k.process(data, inverse),
            Kernel::Bluestein(k) => k.process(data, inverse),
        }
    }
}

/// Two-dimensional transform on a row-major `n1 × n2` array
/// (index `i1 * n2 + i2`).
#[derive(Debug, Clone)]
pub struct Fft2 {
    n1: usize,
    n2: usize,
    rows: Fft,
    cols: Fft,
}

impl Fft2 {
    pub fn new(n1: usize, n2: usize) -> Self {
        Fft2 {
            n1,
            n2,
            rows: Fft::new(n2),
            cols: Fft::new(n1),
        }
    }

    pub fn forward(&self, data: &mut [Complex64]) {
        self.run(data, false);
    }

    pub fn inverse(&self, data: &mut [Complex64]) {
        self.run(data, true);
    }

    fn run(&self, data: &mut [Complex64], inverse: bool) {
        let (n1, n2) = (self.n1, self.n2);
        assert_eq!(data.len(), n1 * n2, "buffer length does not match plan");
        for row in data.chunks_exact_mut(n2) {
            if inverse {
                self.rows.inverse(row);
            } else {
                self.rows.forward(row);
            }
        }
        let mut column = vec![Complex64::new(0.0, 0.0); n1];
        for i2 in 0..n2 {
            for i1 in 0..n1 {
                column[i1] = data[i1 * n2 + i2];
            }
            if inverse {
                self.cols.inverse(&mut column);
            } else {
                self.cols.forward(&mut column);
            }
            for i1 in 0..n1 {
                data[i1 * n2 + i2] = column[i1];
            }
        }
    }
}
