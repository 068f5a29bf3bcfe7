//! Scalar and four-component spinor fields on the periodic grid, with the
//! forward/inverse spectral transforms, Fourier-multiplier application,
//! Littlewood–Paley shells, and the norm family used by the diagnostics.
//!
//! Normalization: the forward transform carries the measure factor `(Δx)³`,
//! so spectral coefficients approximate `∫ e^{-ix·ξ} f dx` nodewise; the
//! inverse carries `1/L³`. Under this convention the spectral L² norm uses
//! the measure `(Δξ)³/(2π)³` and Parseval holds to roundoff.

use std::sync::Arc;

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Error;
use crate::grid::{bracket, rho_low, rho_shell, FourierGrid};
use crate::scalar::{r, Scalar, C};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Representation {
    Physical,
    Spectral,
}

impl Representation {
    fn name(self) -> &'static str {
        match self {
            Representation::Physical => "physical",
            Representation::Spectral => "spectral",
        }
    }
}

/// Direction of [`transform`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

const CHUNK: usize = 8192;

/// Deterministic reduction: fixed-size chunk partials folded in order.
fn ordered_sum<T: Scalar>(parts: Vec<T>) -> T {
    parts.into_iter().fold(T::zero(), |a, b| a + b)
}

fn sum_by_chunks<T: Scalar, F: Fn(usize, &[Complex<T>]) -> T + Sync>(
    values: &[Complex<T>],
    f: F,
) -> T {
    let parts: Vec<T> = values
        .par_chunks(CHUNK)
        .enumerate()
        .map(|(ci, chunk)| f(ci * CHUNK, chunk))
        .collect();
    ordered_sum(parts)
}

// ---------------------------------------------------------------------------
// Scalar fields
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct ScalarField<T: Scalar> {
    pub grid: Arc<FourierGrid<T>>,
    pub values: Vec<C<T>>,
    repr: Representation,
}

impl<T: Scalar> ScalarField<T> {
    pub fn zeros(grid: &Arc<FourierGrid<T>>, repr: Representation) -> Self {
        Self {
            grid: grid.clone(),
            values: vec![C::new(T::zero(), T::zero()); grid.node_count()],
            repr,
        }
    }

    pub fn from_values(grid: &Arc<FourierGrid<T>>, values: Vec<C<T>>, repr: Representation) -> Self {
        assert_eq!(values.len(), grid.node_count());
        Self {
            grid: grid.clone(),
            values,
            repr,
        }
    }

    /// Sample a physical-space function on the folded coordinates.
    pub fn from_fn_physical(grid: &Arc<FourierGrid<T>>, f: impl Fn([T; 3]) -> C<T> + Sync) -> Self {
        let mut out = Self::zeros(grid, Representation::Physical);
        let g = grid.clone();
        out.values
            .par_iter_mut()
            .enumerate()
            .for_each(|(i, v)| *v = f(g.x_at(i)));
        out
    }

    pub fn representation(&self) -> Representation {
        self.repr
    }

    pub fn to_spectral(&mut self) {
        if self.repr == Representation::Physical {
            self.grid.engine().forward(&mut self.values, self.grid.dx3());
            self.repr = Representation::Spectral;
        }
    }

    pub fn to_physical(&mut self) {
        if self.repr == Representation::Spectral {
            self.grid
                .engine()
                .inverse(&mut self.values, self.grid.volume().recip());
            self.repr = Representation::Physical;
        }
    }

    /// Apply a scalar Fourier multiplier `symbol(ξ)`, transforming to the
    /// spectral representation first if needed (the field stays spectral).
    pub fn apply_multiplier(&mut self, symbol: impl Fn([T; 3]) -> C<T> + Sync) -> Result<()> {
        self.to_spectral();
        let g = self.grid.clone();
        let bad: Option<usize> = self
            .values
            .par_iter_mut()
            .enumerate()
            .map(|(i, v)| {
                let s = symbol(g.xi_at(i));
                *v *= s;
                if s.re.is_finite() && s.im.is_finite() {
                    None
                } else {
                    Some(i)
                }
            })
            .reduce(|| None, |a, b| a.or(b));
        match bad {
            Some(node) => Err(Error::NonFiniteSymbol { node }),
            None => Ok(()),
        }
    }

    pub fn l2_norm(&self) -> T {
        let measure = match self.repr {
            Representation::Physical => self.grid.dx3(),
            Representation::Spectral => {
                let two_pi = r::<T>(2.0) * T::PI();
                self.grid.dxi3() / (two_pi * two_pi * two_pi)
            }
        };
        (sum_by_chunks(&self.values, |_, c| {
            c.iter().map(|v| v.norm_sqr()).fold(T::zero(), |a, b| a + b)
        }) * measure)
            .sqrt()
    }

    pub fn linf_norm(&self) -> T {
        assert_eq!(self.repr, Representation::Physical);
        self.values
            .par_chunks(CHUNK)
            .map(|c| c.iter().map(|v| v.norm()).fold(T::zero(), T::max))
            .collect::<Vec<_>>()
            .into_iter()
            .fold(T::zero(), T::max)
    }
}

// ---------------------------------------------------------------------------
// Spinor fields
// ---------------------------------------------------------------------------

/// Four-component complex field; components are stored component-major.
#[derive(Debug, Clone)]
pub struct SpinorField<T: Scalar> {
    pub grid: Arc<FourierGrid<T>>,
    pub comps: [Vec<C<T>>; 4],
    repr: Representation,
}

impl<T: Scalar> SpinorField<T> {
    pub fn zeros(grid: &Arc<FourierGrid<T>>, repr: Representation) -> Self {
        let mk = || vec![C::new(T::zero(), T::zero()); grid.node_count()];
        Self {
            grid: grid.clone(),
            comps: [mk(), mk(), mk(), mk()],
            repr,
        }
    }

    pub fn from_fn_physical(
        grid: &Arc<FourierGrid<T>>,
        f: impl Fn([T; 3]) -> [C<T>; 4] + Sync,
    ) -> Self {
        let mut out = Self::zeros(grid, Representation::Physical);
        let g = grid.clone();
        let (c0, rest) = out.comps.split_at_mut(1);
        let (c1, rest) = rest.split_at_mut(1);
        let (c2, c3) = rest.split_at_mut(1);
        (c0[0].par_iter_mut(), c1[0].par_iter_mut())
            .into_par_iter()
            .zip((c2[0].par_iter_mut(), c3[0].par_iter_mut()).into_par_iter())
            .enumerate()
            .for_each(|(i, ((v0, v1), (v2, v3)))| {
                let s = f(g.x_at(i));
                *v0 = s[0];
                *v1 = s[1];
                *v2 = s[2];
                *v3 = s[3];
            });
        out
    }

    /// Smooth random field for scans and tests: spectral Gaussian envelope
    /// of the given width times seeded unit-amplitude random phases.
    pub fn random_smooth(grid: &Arc<FourierGrid<T>>, seed: u64, width: T) -> Self {
        let mut out = Self::zeros(grid, Representation::Spectral);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for c in 0..4 {
            for i in 0..grid.node_count() {
                let xi = grid.xi_at(i);
                let q = crate::grid::norm_sq(xi) / (width * width);
                let env = (-q * r(0.5)).exp();
                let phase = r::<T>(rng.gen::<f64>()) * r(2.0) * T::PI();
                let amp = r::<T>(rng.gen::<f64>());
                out.comps[c][i] = C::new(phase.cos() * amp, phase.sin() * amp) * env;
            }
        }
        out
    }

    pub fn representation(&self) -> Representation {
        self.repr
    }

    pub fn node_value(&self, i: usize) -> [C<T>; 4] {
        [
            self.comps[0][i],
            self.comps[1][i],
            self.comps[2][i],
            self.comps[3][i],
        ]
    }

    pub fn set_node_value(&mut self, i: usize, v: [C<T>; 4]) {
        for c in 0..4 {
            self.comps[c][i] = v[c];
        }
    }

    pub fn to_spectral(&mut self) {
        if self.repr == Representation::Physical {
            let scale = self.grid.dx3();
            for c in &mut self.comps {
                self.grid.engine().forward(c, scale);
            }
            self.repr = Representation::Spectral;
        }
    }

    pub fn to_physical(&mut self) {
        if self.repr == Representation::Spectral {
            let scale = self.grid.volume().recip();
            for c in &mut self.comps {
                self.grid.engine().inverse(c, scale);
            }
            self.repr = Representation::Physical;
        }
    }

    pub fn spectral(mut self) -> Self {
        self.to_spectral();
        self
    }

    pub fn physical(mut self) -> Self {
        self.to_physical();
        self
    }

    /// Apply a scalar Fourier multiplier to all four components.
    pub fn apply_multiplier(&mut self, symbol: impl Fn([T; 3]) -> C<T> + Sync) -> Result<()> {
        self.to_spectral();
        let g = self.grid.clone();
        let (c0, rest) = self.comps.split_at_mut(1);
        let (c1, rest) = rest.split_at_mut(1);
        let (c2, c3) = rest.split_at_mut(1);
        let bad: Option<usize> = (c0[0].par_iter_mut(), c1[0].par_iter_mut())
            .into_par_iter()
            .zip((c2[0].par_iter_mut(), c3[0].par_iter_mut()).into_par_iter())
            .enumerate()
            .map(|(i, ((v0, v1), (v2, v3)))| {
                let s = symbol(g.xi_at(i));
                *v0 *= s;
                *v1 *= s;
                *v2 *= s;
                *v3 *= s;
                if s.re.is_finite() && s.im.is_finite() {
                    None
                } else {
                    Some(i)
                }
            })
            .reduce(|| None, |a, b| a.or(b));
        match bad {
            Some(node) => Err(Error::NonFiniteSymbol { node }),
            None => Ok(()),
        }
    }

    /// Apply a 4×4 matrix Fourier multiplier `symbol(ξ)` nodewise.
    pub fn apply_matrix_multiplier(
        &mut self,
        symbol: impl Fn([T; 3]) -> [[C<T>; 4]; 4] + Sync,
    ) -> Result<()> {
        self.to_spectral();
        let g = self.grid.clone();
        let (c0, rest) = self.comps.split_at_mut(1);
        let (c1, rest) = rest.split_at_mut(1);
        let (c2, c3) = rest.split_at_mut(1);
        let bad: Option<usize> = (c0[0].par_iter_mut(), c1[0].par_iter_mut())
            .into_par_iter()
            .zip((c2[0].par_iter_mut(), c3[0].par_iter_mut()).into_par_iter())
            .enumerate()
            .map(|(i, ((v0, v1), (v2, v3)))| {
                let m = symbol(g.xi_at(i));
                let v = [*v0, *v1, *v2, *v3];
                let mut out = [C::new(T::zero(), T::zero()); 4];
                let mut finite = true;
                for (row, o) in m.iter().zip(out.iter_mut()) {
                    let mut acc = C::new(T::zero(), T::zero());
                    for (mij, vj) in row.iter().zip(v.iter()) {
                        finite &= mij.re.is_finite() && mij.im.is_finite();
                        acc += *mij * *vj;
                    }
                    *o = acc;
                }
                *v0 = out[0];
                *v1 = out[1];
                *v2 = out[2];
                *v3 = out[3];
                if finite {
                    None
                } else {
                    Some(i)
                }
            })
            .reduce(|| None, |a, b| a.or(b));
        match bad {
            Some(node) => Err(Error::NonFiniteSymbol { node }),
            None => Ok(()),
        }
    }

    fn l2_measure(&self) -> T {
        match self.repr {
            Representation::Physical => self.grid.dx3(),
            Representation::Spectral => {
                let two_pi = r::<T>(2.0) * T::PI();
                self.grid.dxi3() / (two_pi * two_pi * two_pi)
            }
        }
    }

    pub fn l2_norm(&self) -> T {
        let mut total = T::zero();
        for c in &self.comps {
            total = total
                + sum_by_chunks(c, |_, chunk| {
                    chunk.iter().map(|v| v.norm_sqr()).fold(T::zero(), |a, b| a + b)
                });
        }
        (total * self.l2_measure()).sqrt()
    }

    /// `‖⟨D⟩^s ψ‖_{L²}` by spectral weighting.
    pub fn sobolev_norm(&self, s: T) -> T {
        let mut work = self.clone();
        work.to_spectral();
        let g = work.grid.clone();
        let mut total = T::zero();
        for c in &work.comps {
            total = total
                + sum_by_chunks(c, |base, chunk| {
                    let mut acc = T::zero();
                    for (k, v) in chunk.iter().enumerate() {
                        let w = bracket(g.xi_at(base + k)).powf(s + s);
                        acc = acc + v.norm_sqr() * w;
                    }
                    acc
                });
        }
        (total * work.l2_measure()).sqrt()
    }

    /// Weighted Sobolev norm `‖⟨x⟩^a ψ‖_{H^s}` with box-folded coordinates.
    pub fn weighted_norm(&self, weight_power: u32, s: T) -> T {
        let mut work = self.clone();
        work.to_physical();
        let g = work.grid.clone();
        for c in &mut work.comps {
            c.par_iter_mut().enumerate().for_each(|(i, v)| {
                let w = bracket(g.x_at(i)).powi(weight_power as i32);
                *v *= C::new(w, T::zero());
            });
        }
        work.sobolev_norm(s)
    }

    /// Sup over nodes of the ℂ⁴ Euclidean norm (physical representation).
    pub fn linf_norm(&self) -> T {
        assert_eq!(
            self.repr,
            Representation::Physical,
            "sup-norm is a physical-space quantity"
        );
        let n = self.comps[0].len();
        (0..n)
            .into_par_iter()
            .chunks(CHUNK)
            .map(|idx| {
                idx.into_iter()
                    .map(|i| {
                        (self.comps[0][i].norm_sqr()
                            + self.comps[1][i].norm_sqr()
                            + self.comps[2][i].norm_sqr()
                            + self.comps[3][i].norm_sqr())
                        .sqrt()
                    })
                    .fold(T::zero(), T::max)
            })
            .collect::<Vec<_>>()
            .into_iter()
            .fold(T::zero(), T::max)
    }

    /// `sup_ξ ⟨ξ⟩^w |ψ̂(ξ)|` over the lattice (spectral representation).
    pub fn xi_weighted_sup(&self, w: T) -> T {
        assert_eq!(self.repr, Representation::Spectral);
        let g = self.grid.clone();
        let n = self.comps[0].len();
        (0..n)
            .into_par_iter()
            .chunks(CHUNK)
            .map(|idx| {
                idx.into_iter()
                    .map(|i| {
                        let amp = (self.comps[0][i].norm_sqr()
                            + self.comps[1][i].norm_sqr()
                            + self.comps[2][i].norm_sqr()
                            + self.comps[3][i].norm_sqr())
                        .sqrt();
                        bracket(g.xi_at(i)).powf(w) * amp
                    })
                    .fold(T::zero(), T::max)
            })
            .collect::<Vec<_>>()
            .into_iter()
            .fold(T::zero(), T::max)
    }

    /// `L^p` norm of the ℂ⁴ modulus (physical representation).
    pub fn lp_norm(&self, p: T) -> T {
        assert_eq!(self.repr, Representation::Physical);
        let n = self.comps[0].len();
        let parts: Vec<T> = (0..n)
            .into_par_iter()
            .chunks(CHUNK)
            .map(|idx| {
                idx.into_iter()
                    .map(|i| {
                        let m2 = self.comps[0][i].norm_sqr()
                            + self.comps[1][i].norm_sqr()
                            + self.comps[2][i].norm_sqr()
                            + self.comps[3][i].norm_sqr();
                        m2.sqrt().powf(p)
                    })
                    .fold(T::zero(), |a, b| a + b)
            })
            .collect();
        (ordered_sum(parts) * self.grid.dx3()).powf(p.recip())
    }

    pub fn scale(&mut self, factor: C<T>) {
        for c in &mut self.comps {
            c.par_iter_mut().for_each(|v| *v *= factor);
        }
    }

    /// `self += factor · other` (same grid and representation).
    pub fn add_scaled(&mut self, other: &Self, factor: C<T>) -> Result<()> {
        same_grid(&self.grid, &other.grid)?;
        if self.repr != other.repr {
            return Err(Error::RepresentationMismatch {
                expected: self.repr.name(),
                got: other.repr.name(),
            });
        }
        for (a, b) in self.comps.iter_mut().zip(other.comps.iter()) {
            a.par_iter_mut().zip(b.par_iter()).for_each(|(x, y)| *x += *y * factor);
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.comps.iter().all(|c| {
            c.par_chunks(CHUNK)
                .all(|chunk| chunk.iter().all(|v| v.re.is_finite() && v.im.is_finite()))
        })
    }
}

/// Explicit transform with the representation check demanded by the
/// spectral contract: forward requires physical input, inverse spectral.
pub fn transform<T: Scalar>(field: SpinorField<T>, dir: Direction) -> Result<SpinorField<T>> {
    match (dir, field.repr) {
        (Direction::Forward, Representation::Physical) => Ok(field.spectral()),
        (Direction::Inverse, Representation::Spectral) => Ok(field.physical()),
        (_, got) => Err(Error::RepresentationMismatch {
            expected: match dir {
                Direction::Forward => "physical",
                Direction::Inverse => "spectral",
            },
            got: got.name(),
        }),
    }
}

/// Littlewood–Paley shell projection `P_N f` (`N` a dyadic scale).
pub fn littlewood_paley<T: Scalar>(field: &SpinorField<T>, n_scale: T) -> SpinorField<T> {
    let mut out = field.clone();
    out.apply_multiplier(|xi| C::new(rho_shell(xi, n_scale), T::zero()))
        .expect("shell symbol is finite");
    out
}

/// Low-frequency block `P_{≤N₀} f`.
pub fn littlewood_paley_low<T: Scalar>(field: &SpinorField<T>, n0: T) -> SpinorField<T> {
    let mut out = field.clone();
    out.apply_multiplier(|xi| C::new(rho_low(xi, n0), T::zero()))
        .expect("low symbol is finite");
    out
}

pub fn littlewood_paley_scalar<T: Scalar>(field: &ScalarField<T>, n_scale: T) -> ScalarField<T> {
    let mut out = field.clone();
    out.apply_multiplier(|xi| C::new(rho_shell(xi, n_scale), T::zero()))
        .expect("shell symbol is finite");
    out
}

pub fn same_grid<T: Scalar>(a: &Arc<FourierGrid<T>>, b: &Arc<FourierGrid<T>>) -> Result<()> {
    if a.n_per_axis() == b.n_per_axis() && a.box_length() == b.box_length() {
        Ok(())
    } else {
        Err(Error::GridMismatch)
    }
}

/// `‖a - b‖_{L²}` without mutating either field.
pub fn l2_distance<T: Scalar>(a: &SpinorField<T>, b: &SpinorField<T>) -> T {
    assert_eq!(a.repr, b.repr);
    let mut diff = a.clone();
    diff.add_scaled(b, C::new(-T::one(), T::zero())).unwrap();
    diff.l2_norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::norm_sq;

    fn grid(n: usize, l: f64) -> Arc<FourierGrid<f64>> {
        FourierGrid::make(n, l).unwrap()
    }

    #[test]
    fn constant_field_concentrates_at_zero_mode() {
        let g = grid(8, 3.0);
        let mut f = ScalarField::from_fn_physical(&g, |_| Complex::new(1.0, 0.0));
        f.to_spectral();
        for i in 0..g.node_count() {
            let expect = if i == 0 { g.volume() } else { 0.0 };
            assert!((f.values[i] - Complex::new(expect, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn plane_wave_hits_single_coefficient() {
        let g = grid(8, 4.0);
        let xi0 = g.xi_at(g.index_of_mode([2, -1, 3]));
        let mut f = ScalarField::from_fn_physical(&g, |x| {
            let phase = x[0] * xi0[0] + x[1] * xi0[1] + x[2] * xi0[2];
            Complex::new(phase.cos(), phase.sin())
        });
        f.to_spectral();
        let target = g.index_of_mode([2, -1, 3]);
        for i in 0..g.node_count() {
            let expect = if i == target { g.volume() } else { 0.0 };
            assert!((f.values[i] - Complex::new(expect, 0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn random_roundtrip_and_parseval() {
        let g = grid(12, 5.5);
        let f = SpinorField::random_smooth(&g, 3, 2.0);
        let phys = f.clone().physical();
        let l2_phys = phys.l2_norm();
        let l2_spec = f.l2_norm();
        assert!((l2_phys - l2_spec).abs() / l2_spec < 1e-12);
        let back = phys.clone().spectral().physical();
        for c in 0..4 {
            for i in 0..g.node_count() {
                assert!((back.comps[c][i] - phys.comps[c][i]).norm() < 1e-12 * l2_phys);
            }
        }
    }

    #[test]
    fn transform_rejects_wrong_representation() {
        let g = grid(8, 2.0);
        let f = SpinorField::zeros(&g, Representation::Spectral);
        assert!(matches!(
            transform(f, Direction::Forward),
            Err(Error::RepresentationMismatch { .. })
        ));
    }

    #[test]
    fn identity_multiplier_is_identity() {
        let g = grid(8, 2.0);
        let f = SpinorField::random_smooth(&g, 11, 3.0);
        let mut h = f.clone();
        h.apply_multiplier(|_| Complex::new(1.0, 0.0)).unwrap();
        assert!(l2_distance(&h, &f) < 1e-14);
    }

    #[test]
    fn bracket_multiplier_on_plane_wave() {
        let g = grid(8, 4.0);
        let target = g.index_of_mode([1, 2, 0]);
        let xi0 = g.xi_at(target);
        let mut f = SpinorField::zeros(&g, Representation::Spectral);
        f.comps[0][target] = Complex::new(1.0, 0.0);
        f.apply_multiplier(|xi| Complex::new(bracket(xi), 0.0)).unwrap();
        let expect = (1.0 + norm_sq(xi0)).sqrt();
        assert!((f.comps[0][target] - Complex::new(expect, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn non_finite_symbol_is_reported() {
        let g = grid(8, 2.0);
        let mut f = SpinorField::random_smooth(&g, 1, 2.0);
        let err = f.apply_multiplier(|xi| Complex::new(norm_sq(xi).recip(), 0.0));
        assert!(matches!(err, Err(Error::NonFiniteSymbol { node: 0 })));
    }

    #[test]
    fn multiplier_linearity_and_commutation() {
        let g = grid(8, 3.0);
        let a = SpinorField::random_smooth(&g, 5, 2.0);
        let b = SpinorField::random_smooth(&g, 6, 2.0);
        let sym = |xi: [f64; 3]| Complex::new(bracket(xi).recip(), 0.3 * xi[0]);
        let sym2 = |xi: [f64; 3]| Complex::new((-norm_sq(xi)).exp(), 0.0);

        // M(αa + βb) = αMa + βMb
        let alpha = Complex::new(0.7, -0.2);
        let beta = Complex::new(-1.1, 0.4);
        let mut lhs = a.clone();
        lhs.scale(alpha);
        lhs.add_scaled(&{ let mut t = b.clone(); t.scale(beta); t }, Complex::new(1.0, 0.0))
            .unwrap();
        lhs.apply_multiplier(sym).unwrap();
        let mut ma = a.clone();
        ma.apply_multiplier(sym).unwrap();
        let mut mb = b.clone();
        mb.apply_multiplier(sym).unwrap();
        let mut rhs = ma;
        rhs.scale(alpha);
        rhs.add_scaled(&{ let mut t = mb; t.scale(beta); t }, Complex::new(1.0, 0.0))
            .unwrap();
        assert!(l2_distance(&lhs, &rhs) < 1e-12 * rhs.l2_norm().max(1.0));

        // Order of application commutes.
        let mut ab = a.clone();
        ab.apply_multiplier(sym).unwrap();
        ab.apply_multiplier(sym2).unwrap();
        let mut ba = a.clone();
        ba.apply_multiplier(sym2).unwrap();
        ba.apply_multiplier(sym).unwrap();
        assert!(l2_distance(&ab, &ba) < 1e-13 * a.l2_norm());
    }

    #[test]
    fn littlewood_paley_partition_reconstructs() {
        let g = grid(16, 6.0);
        let f = SpinorField::random_smooth(&g, 9, 2.5);
        let scales = g.dyadic_scales();
        let n0 = scales[3];
        let mut sum = littlewood_paley_low(&f, n0);
        for &s in scales.iter().filter(|&&s| s > n0) {
            sum.add_scaled(&littlewood_paley(&f, s), Complex::new(1.0, 0.0))
                .unwrap();
        }
        assert!(l2_distance(&sum, &f) < 1e-12 * f.l2_norm());
    }

    #[test]
    fn littlewood_paley_fattened_shell_reproduces() {
        // P̃_N P_N = P_N with P̃_N the sum of the three neighboring shells.
        let g = grid(16, 6.0);
        let f = SpinorField::random_smooth(&g, 10, 2.5);
        let n = 1.0;
        let pn = littlewood_paley(&f, n);
        let mut fat = littlewood_paley(&pn, n / 2.0);
        fat.add_scaled(&littlewood_paley(&pn, n), Complex::new(1.0, 0.0)).unwrap();
        fat.add_scaled(&littlewood_paley(&pn, 2.0 * n), Complex::new(1.0, 0.0))
            .unwrap();
        assert!(l2_distance(&fat, &pn) < 1e-12 * f.l2_norm());
    }

    #[test]
    fn sobolev_norm_examples() {
        let g = grid(8, 4.0);
        let zero = SpinorField::zeros(&g, Representation::Spectral);
        assert_eq!(zero.sobolev_norm(2.0), 0.0);

        // Single mode e^{ix·ξ₀}: H² norm is ⟨ξ₀⟩²·(box volume)^{1/2}.
        let target = g.index_of_mode([2, 0, -1]);
        let xi0 = g.xi_at(target);
        let f = SpinorField::from_fn_physical(&g, |x| {
            let phase = x[0] * xi0[0] + x[1] * xi0[1] + x[2] * xi0[2];
            [
                Complex::new(phase.cos(), phase.sin()),
                Complex::new(0.0, 0.0),
                Complex::new(0.0, 0.0),
                Complex::new(0.0, 0.0),
            ]
        });
        let expect = (1.0 + norm_sq(xi0)) * g.volume().sqrt();
        let got = f.sobolev_norm(2.0);
        assert!((got - expect).abs() / expect < 1e-12);
    }
}
