//! Periodic-box discretization of ℝ³ and the smooth dyadic frequency bump.
//!
//! The box `[-L/2, L/2)³` is sampled on `n³` nodes. Wavenumbers live on the
//! lattice `(2π/L)·ℤ³` folded to the symmetric Nyquist range
//! `{-n/2, …, n/2-1}·(2π/L)` per axis, with x the fastest-varying index.
//!
//! The bump `ρ` is the classical `exp(-1/s)`-glued cutoff: identically 1 on
//! the unit ball, identically 0 outside radius 2, smooth in between. Dyadic
//! shells `ρ_N(ξ) = ρ(ξ/N) - ρ(2ξ/N)` telescope exactly, so
//! `ρ_{≤N₀} + Σ_{N₀<N≤N_max} ρ_N = ρ(ξ/N_max) = 1` on every node once
//! `N_max` dominates the lattice corner.

use std::sync::{Arc, OnceLock};

use crate::error::Error;
use crate::fft::SpectralEngine;
use crate::scalar::{r, Scalar};
use crate::Result;

#[derive(Debug)]
pub struct FourierGrid<T: Scalar> {
    n: usize,
    box_length: T,
    /// Folded wavenumber per axis index.
    freq: Vec<T>,
    /// Folded coordinate per axis index, centered at 0.
    coord: Vec<T>,
    engine: OnceLock<SpectralEngine<T>>,
}

impl<T: Scalar> FourierGrid<T> {
    /// Build an `n³` grid on a box of side `box_length`.
    pub fn make(n: usize, box_length: T) -> Result<Arc<Self>> {
        if n < 8 {
            return Err(Error::InvalidGrid(format!("n_per_axis = {n} is below 8")));
        }
        if n % 2 != 0 {
            return Err(Error::InvalidGrid(format!("n_per_axis = {n} must be even")));
        }
        if !(box_length > T::zero()) || !box_length.is_finite() {
            return Err(Error::InvalidGrid("box_length must be positive".into()));
        }
        let dxi = r::<T>(2.0) * T::PI() / box_length;
        let dx = box_length / r(n as f64);
        let half = n / 2;
        let mut freq = Vec::with_capacity(n);
        let mut coord = Vec::with_capacity(n);
        for k in 0..n {
            let m = if k < half { k as i64 } else { k as i64 - n as i64 };
            freq.push(dxi * r(m as f64));
            coord.push(dx * r(m as f64));
        }
        Ok(Arc::new(Self {
            n,
            box_length,
            freq,
            coord,
            engine: OnceLock::new(),
        }))
    }

    pub fn n_per_axis(&self) -> usize {
        self.n
    }

    pub fn box_length(&self) -> T {
        self.box_length
    }

    pub fn node_count(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn dx(&self) -> T {
        self.box_length / r(self.n as f64)
    }

    pub fn dxi(&self) -> T {
        r::<T>(2.0) * T::PI() / self.box_length
    }

    /// Cell measure `(Δx)³` of the physical lattice.
    pub fn dx3(&self) -> T {
        self.dx() * self.dx() * self.dx()
    }

    /// Cell measure `(Δξ)³` of the wavenumber lattice.
    pub fn dxi3(&self) -> T {
        self.dxi() * self.dxi() * self.dxi()
    }

    pub fn volume(&self) -> T {
        self.box_length * self.box_length * self.box_length
    }

    /// Largest per-axis wavenumber magnitude, `π n / L`.
    pub fn xi_max_axis(&self) -> T {
        T::PI() * r::<T>(self.n as f64) / self.box_length
    }

    #[inline]
    pub fn flat(&self, ix: usize, iy: usize, iz: usize) -> usize {
        (iz * self.n + iy) * self.n + ix
    }

    #[inline]
    pub fn axes_of(&self, flat: usize) -> [usize; 3] {
        let ix = flat % self.n;
        let iy = (flat / self.n) % self.n;
        let iz = flat / (self.n * self.n);
        [ix, iy, iz]
    }

    /// Wavenumber of a flat node index.
    #[inline]
    pub fn xi_at(&self, flat: usize) -> [T; 3] {
        let [ix, iy, iz] = self.axes_of(flat);
        [self.freq[ix], self.freq[iy], self.freq[iz]]
    }

    /// Folded physical coordinate of a flat node index.
    #[inline]
    pub fn x_at(&self, flat: usize) -> [T; 3] {
        let [ix, iy, iz] = self.axes_of(flat);
        [self.coord[ix], self.coord[iy], self.coord[iz]]
    }

    /// Flat index of the node carrying `-ξ`. The Nyquist plane maps to
    /// itself (negation folds back onto `-n/2`).
    #[inline]
    pub fn neg_index(&self, flat: usize) -> usize {
        let [ix, iy, iz] = self.axes_of(flat);
        let neg = |k: usize| if k == 0 { 0 } else { self.n - k };
        self.flat(neg(ix), neg(iy), neg(iz))
    }

    /// Flat index of the lattice node with integer mode numbers `m`
    /// (each must lie in `[-n/2, n/2)`).
    pub fn index_of_mode(&self, m: [i64; 3]) -> usize {
        let n = self.n as i64;
        let wrap = |mi: i64| -> usize {
            assert!(mi >= -n / 2 && mi < n / 2, "mode out of Nyquist range");
            ((mi + n) % n) as usize
        };
        self.flat(wrap(m[0]), wrap(m[1]), wrap(m[2]))
    }

    pub(crate) fn engine(&self) -> &SpectralEngine<T> {
        self.engine.get_or_init(|| SpectralEngine::new(self.n))
    }

    /// Dyadic shell scales `2^j` covering the lattice, smallest below the
    /// wavenumber spacing and largest above the corner `√3·ξ_max`.
    pub fn dyadic_scales(&self) -> Vec<T> {
        let lo = self.dxi().to_f64_lossy() * 0.25;
        let hi = self.xi_max_axis().to_f64_lossy() * 3.5;
        let mut out = Vec::new();
        let mut j = lo.log2().floor() as i32;
        while (2f64).powi(j) <= hi {
            out.push(r((2f64).powi(j)));
            j += 1;
        }
        out
    }
}

/// `⟨v⟩ = (1 + |v|²)^{1/2}` for a 3-vector.
#[inline]
pub fn bracket<T: Scalar>(v: [T; 3]) -> T {
    (T::one() + norm_sq(v)).sqrt()
}

#[inline]
pub fn norm_sq<T: Scalar>(v: [T; 3]) -> T {
    v[0] * v[0] + v[1] * v[1] + v[2] * v[2]
}

#[inline]
pub fn norm<T: Scalar>(v: [T; 3]) -> T {
    norm_sq(v).sqrt()
}

/// Smooth radial cutoff: 1 on `|ξ| ≤ 1`, 0 on `|ξ| ≥ 2`.
pub fn bump<T: Scalar>(xi: [T; 3]) -> T {
    bump_radial(norm(xi))
}

pub fn bump_radial<T: Scalar>(rad: T) -> T {
    if rad <= T::one() {
        return T::one();
    }
    if rad >= r(2.0) {
        return T::zero();
    }
    let h = |s: T| (-s.recip()).exp();
    let a = h(r::<T>(2.0) - rad);
    let b = h(rad - T::one());
    a / (a + b)
}

/// Dyadic shell symbol `ρ_N(ξ) = ρ(ξ/N) - ρ(2ξ/N)`.
pub fn rho_shell<T: Scalar>(xi: [T; 3], scale: T) -> T {
    let rad = norm(xi) / scale;
    bump_radial(rad) - bump_radial(rad + rad)
}

/// Low-frequency symbol `ρ_{≤N₀}(ξ) = 1 - Σ_{N>N₀} ρ_N(ξ) = ρ(ξ/N₀)`.
pub fn rho_low<T: Scalar>(xi: [T; 3], scale: T) -> T {
    bump_radial(norm(xi) / scale)
}
