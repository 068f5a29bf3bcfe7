//! Three-dimensional complex FFT over the cubic lattice, backed by rustfft.
//!
//! Lines along each axis are transformed independently; y- and z-lines are
//! gathered into contiguous scratch before the 1-D pass. All per-line work
//! runs over disjoint slices, so results are bitwise independent of the
//! worker count.

use std::sync::Arc;

use num_complex::Complex;
use rayon::prelude::*;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::scalar::Scalar;

pub struct SpectralEngine<T: Scalar> {
    n: usize,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

impl<T: Scalar> std::fmt::Debug for SpectralEngine<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SpectralEngine(n = {})", self.n)
    }
}

impl<T: Scalar> SpectralEngine<T> {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            forward: planner.plan_fft(n, FftDirection::Forward),
            inverse: planner.plan_fft(n, FftDirection::Inverse),
        }
    }

    /// Unnormalized DFT with kernel `e^{-2πi jk/n}` along all three axes,
    /// then a uniform scale. With `scale = (Δx)³` this realizes the
    /// continuum-normalized forward transform `∫ e^{-ix·ξ} f dx`.
    pub fn forward(&self, data: &mut [Complex<T>], scale: T) {
        self.transform(data, &self.forward);
        rescale(data, scale);
    }

    /// Conjugate-kernel DFT along all three axes, then a uniform scale.
    /// With `scale = 1/L³` this inverts [`Self::forward`] exactly.
    pub fn inverse(&self, data: &mut [Complex<T>], scale: T) {
        self.transform(data, &self.inverse);
        rescale(data, scale);
    }

    fn transform(&self, data: &mut [Complex<T>], fft: &Arc<dyn Fft<T>>) {
        let n = self.n;
        assert_eq!(data.len(), n * n * n);
        let scratch_len = fft.get_inplace_scratch_len();

        // Axis x: contiguous lines.
        data.par_chunks_mut(n).for_each_init(
            || vec![Complex::new(T::zero(), T::zero()); scratch_len],
            |scratch, line| fft.process_with_scratch(line, scratch),
        );

        // Axis y: stride n within each z-plane.
        data.par_chunks_mut(n * n).for_each_init(
            || {
                (
                    vec![Complex::new(T::zero(), T::zero()); n],
                    vec![Complex::new(T::zero(), T::zero()); scratch_len],
                )
            },
            |(line, scratch), plane| {
                for ix in 0..n {
                    for iy in 0..n {
                        line[iy] = plane[iy * n + ix];
                    }
                    fft.process_with_scratch(line, scratch);
                    for iy in 0..n {
                        plane[iy * n + ix] = line[iy];
                    }
                }
            },
        );

        // Axis z: stride n² across planes; parallelize over y-rows.
        let ptr = SendPtr(data.as_mut_ptr());
        (0..n).into_par_iter().for_each_init(
            || {
                (
                    vec![Complex::new(T::zero(), T::zero()); n],
                    vec![Complex::new(T::zero(), T::zero()); scratch_len],
                )
            },
            |(line, scratch), iy| {
                let base = unsafe { std::slice::from_raw_parts_mut(ptr.get(), n * n * n) };
                for ix in 0..n {
                    let off = iy * n + ix;
                    for iz in 0..n {
                        line[iz] = base[iz * n * n + off];
                    }
                    fft.process_with_scratch(line, scratch);
                    for iz in 0..n {
                        base[iz * n * n + off] = line[iz];
                    }
                }
            },
        );
    }
}

// Rows indexed by iy touch disjoint address sets, so sharing the raw
// pointer across workers is race-free.
struct SendPtr<T>(*mut T);
unsafe impl<T> Send for SendPtr<T> {}
unsafe impl<T> Sync for SendPtr<T> {}

impl<T> SendPtr<T> {
    fn get(&self) -> *mut T {
        self.0
    }
}

fn rescale<T: Scalar>(data: &mut [Complex<T>], scale: T) {
    data.par_iter_mut().for_each(|v| {
        *v = Complex::new(v.re * scale, v.im * scale);
    });
}
