//! Dirac matrices, the spectral projection symbols Π_±(ξ), spinor
//! projections, and numeric verification of the projection algebra.
//!
//! The 4×4 symbol `H(ξ) = α·ξ + β` squares to `⟨ξ⟩² I₄`, so
//!
//! ```text
//! Π_±(ξ) = ½ (I ± H(ξ)/⟨ξ⟩)
//! ```
//!
//! are complementary orthogonal projectors of rank two at every wavenumber
//! — there is no singularity since `⟨ξ⟩ ≥ 1`. Products of opposite-sign
//! projectors at nearby frequencies vanish linearly in the separation,
//! which is the smallness the null-product scans quantify.

use serde::Serialize;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::SpinorField;
use crate::grid::{bracket, norm};
use crate::scalar::{r, Scalar, C};

pub type Mat4<T> = [[C<T>; 4]; 4];

/// Branch sign of the dispersion relation `∓⟨ξ⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    #[inline]
    pub fn as_scalar<T: Scalar>(self) -> T {
        match self {
            Sign::Plus => T::one(),
            Sign::Minus => -T::one(),
        }
    }

    #[inline]
    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Sign::Plus => "plus",
            Sign::Minus => "minus",
        }
    }
}

/// Four-sign interaction tuple (θ₀, θ₁, θ₂, θ₃).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SignTuple(pub [Sign; 4]);

// ---------------------------------------------------------------------------
// Matrix helpers (fixed 4×4 complex)
// ---------------------------------------------------------------------------

pub fn mat_zero<T: Scalar>() -> Mat4<T> {
    [[C::new(T::zero(), T::zero()); 4]; 4]
}

pub fn mat_identity<T: Scalar>() -> Mat4<T> {
    let mut m = mat_zero();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = C::new(T::one(), T::zero());
    }
    m
}

pub fn mat_mul<T: Scalar>(a: &Mat4<T>, b: &Mat4<T>) -> Mat4<T> {
    let mut out = mat_zero();
    for i in 0..4 {
        for k in 0..4 {
            let aik = a[i][k];
            for j in 0..4 {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

pub fn mat_sub<T: Scalar>(a: &Mat4<T>, b: &Mat4<T>) -> Mat4<T> {
    let mut out = *a;
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] -= b[i][j];
        }
    }
    out
}

pub fn mat_add<T: Scalar>(a: &Mat4<T>, b: &Mat4<T>) -> Mat4<T> {
    let mut out = *a;
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] += b[i][j];
        }
    }
    out
}

pub fn mat_scale<T: Scalar>(a: &Mat4<T>, s: C<T>) -> Mat4<T> {
    let mut out = *a;
    for row in &mut out {
        for v in row {
            *v *= s;
        }
    }
    out
}

pub fn mat_dagger<T: Scalar>(a: &Mat4<T>) -> Mat4<T> {
    let mut out = mat_zero();
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = a[j][i].conj();
        }
    }
    out
}

pub fn mat_vec<T: Scalar>(a: &Mat4<T>, v: &[C<T>; 4]) -> [C<T>; 4] {
    let mut out = [C::new(T::zero(), T::zero()); 4];
    for (row, o) in a.iter().zip(out.iter_mut()) {
        let mut acc = C::new(T::zero(), T::zero());
        for (m, x) in row.iter().zip(v.iter()) {
            acc += *m * *x;
        }
        *o = acc;
    }
    out
}

/// Eigenvalues of a Hermitian 4×4 matrix by cyclic complex Jacobi sweeps.
pub fn hermitian_eigenvalues<T: Scalar>(m: &Mat4<T>) -> [T; 4] {
    let mut a = *m;
    for _sweep in 0..60 {
        let mut off = T::zero();
        for p in 0..4 {
            for q in (p + 1)..4 {
                off = off + a[p][q].norm_sqr();
            }
        }
        if off < r(1e-60) {
            break;
        }
        for p in 0..4 {
            for q in (p + 1)..4 {
                let apq = a[p][q];
                let mag = apq.norm();
                if mag == T::zero() {
                    continue;
                }
                let phase = apq / C::new(mag, T::zero());
                let app = a[p][p].re;
                let aqq = a[q][q].re;
                // Rotation angle for the real symmetric reduction.
                let theta = (r::<T>(2.0) * mag).atan2(app - aqq) * r(0.5);
                let c = theta.cos();
                let s = theta.sin();
                // Columns of the unitary: (c, s·conj(phase)) and (-s·phase, c).
                let g = [
                    [C::new(c, T::zero()), mat_neg(phase) * s],
                    [phase.conj() * s, C::new(c, T::zero())],
                ];
                // A <- G† A G restricted to rows/cols p,q.
                for k in 0..4 {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = akp * g[0][0] + akq * g[1][0];
                    a[k][q] = akp * g[0][1] + akq * g[1][1];
                }
                for k in 0..4 {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = g[0][0].conj() * apk + g[1][0].conj() * aqk;
                    a[q][k] = g[0][1].conj() * apk + g[1][1].conj() * aqk;
                }
            }
        }
    }
    let mut ev = [a[0][0].re, a[1][1].re, a[2][2].re, a[3][3].re];
    ev.sort_by(|x, y| x.partial_cmp(y).unwrap());
    ev
}

#[inline]
fn mat_neg<T: Scalar>(c: C<T>) -> C<T> {
    C::new(-c.re, -c.im)
}

/// Spectral 2-norm via the largest eigenvalue of `M†M`.
pub fn op_2norm<T: Scalar>(m: &Mat4<T>) -> T {
    let gram = mat_mul(&mat_dagger(m), m);
    let ev = hermitian_eigenvalues(&gram);
    ev[3].max(T::zero()).sqrt()
}

// ---------------------------------------------------------------------------
// Dirac matrices and projections
// ---------------------------------------------------------------------------

/// The constant matrices α¹, α², α³ and β in the standard block/Pauli
/// representation.
pub struct DiracMatrices<T: Scalar> {
    pub alpha: [Mat4<T>; 3],
    pub beta: Mat4<T>,
}

impl<T: Scalar> DiracMatrices<T> {
    pub fn standard() -> Self {
        let z = C::new(T::zero(), T::zero());
        let one = C::new(T::one(), T::zero());
        let neg = C::new(-T::one(), T::zero());
        let i = C::new(T::zero(), T::one());
        let ni = C::new(T::zero(), -T::one());
        let alpha1 = [
            [z, z, z, one],
            [z, z, one, z],
            [z, one, z, z],
            [one, z, z, z],
        ];
        let alpha2 = [[z, z, z, ni], [z, z, i, z], [z, ni, z, z], [i, z, z, z]];
        let alpha3 = [
            [z, z, one, z],
            [z, z, z, neg],
            [one, z, z, z],
            [z, neg, z, z],
        ];
        let beta = [
            [one, z, z, z],
            [z, one, z, z],
            [z, z, neg, z],
            [z, z, z, neg],
        ];
        Self {
            alpha: [alpha1, alpha2, alpha3],
            beta,
        }
    }
}

/// `H(ξ) = α·ξ + β`, written out in block form.
pub fn dirac_symbol<T: Scalar>(xi: [T; 3]) -> Mat4<T> {
    let z = T::zero();
    let c = |re: T, imv: T| C::new(re, imv);
    // σ·ξ = [[ξ₃, ξ₁ - iξ₂], [ξ₁ + iξ₂, -ξ₃]]
    [
        [c(T::one(), z), c(z, z), c(xi[2], z), c(xi[0], -xi[1])],
        [c(z, z), c(T::one(), z), c(xi[0], xi[1]), c(-xi[2], z)],
        [c(xi[2], z), c(xi[0], -xi[1]), c(-T::one(), z), c(z, z)],
        [c(xi[0], xi[1]), c(-xi[2], z), c(z, z), c(-T::one(), z)],
    ]
}

/// `H(ξ) v` without forming the matrix.
#[inline]
pub fn dirac_symbol_apply<T: Scalar>(xi: [T; 3], v: &[C<T>; 4]) -> [C<T>; 4] {
    let sp = C::new(xi[0], xi[1]); // ξ₁ + iξ₂
    let sm = C::new(xi[0], -xi[1]); // ξ₁ - iξ₂
    let x3 = C::new(xi[2], T::zero());
    // σ·ξ acting on the upper and lower 2-spinors.
    let s_lo0 = x3 * v[2] + sm * v[3];
    let s_lo1 = sp * v[2] - x3 * v[3];
    let s_up0 = x3 * v[0] + sm * v[1];
    let s_up1 = sp * v[0] - x3 * v[1];
    [v[0] + s_lo0, v[1] + s_lo1, s_up0 - v[2], s_up1 - v[3]]
}

/// Projection symbol `Π_±(ξ) = ½(I ± H(ξ)/⟨ξ⟩)`.
pub fn projection_symbol<T: Scalar>(xi: [T; 3], sign: Sign) -> Mat4<T> {
    let br = bracket(xi);
    let s = sign.as_scalar::<T>() / br * r(0.5);
    let h = dirac_symbol(xi);
    let mut out = mat_scale(&h, C::new(s, T::zero()));
    for (i, row) in out.iter_mut().enumerate() {
        row[i] += C::new(r(0.5), T::zero());
    }
    out
}

/// `Π_sign(D) ψ`, returned in the representation of the input.
pub fn project<T: Scalar>(field: &SpinorField<T>, sign: Sign) -> SpinorField<T> {
    let started_physical = matches!(
        field.representation(),
        crate::field::Representation::Physical
    );
    let mut out = field.clone();
    out.apply_matrix_multiplier(|xi| projection_symbol(xi, sign))
        .expect("projection symbol is finite");
    if started_physical {
        out.to_physical();
    }
    out
}

/// Operator 2-norm of the opposite-sign projector product
/// `Π_θ(ξ) Π_{-θ}(ξ-η)`; vanishes at η = 0.
pub fn null_product_norm<T: Scalar>(xi: [T; 3], eta: [T; 3], sign: Sign) -> T {
    let shifted = [xi[0] - eta[0], xi[1] - eta[1], xi[2] - eta[2]];
    let prod = mat_mul(
        &projection_symbol(xi, sign),
        &projection_symbol(shifted, sign.flip()),
    );
    op_2norm(&prod)
}

/// Reference scale for the null-product bound: `|η|·max(⟨ξ⟩⁻¹, ⟨ξ-η⟩⁻¹)`.
pub fn null_product_reference<T: Scalar>(xi: [T; 3], eta: [T; 3]) -> T {
    let shifted = [xi[0] - eta[0], xi[1] - eta[1], xi[2] - eta[2]];
    norm(eta) * bracket(xi).recip().max(bracket(shifted).recip())
}

// ---------------------------------------------------------------------------
// Identity scan
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub samples: usize,
    /// max ‖H(ξ)² - ⟨ξ⟩²I‖ / ⟨ξ⟩²
    pub square_identity: f64,
    /// max ‖Π₊ + Π₋ - I‖
    pub completeness: f64,
    /// max ‖Π_±² - Π_±‖
    pub idempotence: f64,
    /// max ‖Π₊Π₋‖, ‖Π₋Π₊‖
    pub cross_product: f64,
    pub max_radius: f64,
}

impl IdentityReport {
    pub fn max_deviation(&self) -> f64 {
        self.square_identity
            .max(self.completeness)
            .max(self.idempotence)
            .max(self.cross_product)
    }
}

/// Sample random wavenumbers and report the worst deviation of the
/// projection algebra from its exact values.
pub fn check_identities<T: Scalar>(sample_count: usize, max_radius: f64, seed: u64) -> IdentityReport {
    assert!(sample_count >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = IdentityReport {
        samples: sample_count,
        square_identity: 0.0,
        completeness: 0.0,
        idempotence: 0.0,
        cross_product: 0.0,
        max_radius,
    };
    for k in 0..sample_count {
        let xi: [T; 3] = if k == 0 {
            [T::zero(); 3] // always include the origin
        } else {
            random_ball_point(&mut rng, max_radius)
        };
        let br2 = bracket(xi) * bracket(xi);
        let h = dirac_symbol(xi);
        let sq = mat_mul(&h, &h);
        let dev_sq = op_2norm(&mat_sub(
            &sq,
            &mat_scale(&mat_identity(), C::new(br2, T::zero())),
        )) / br2;
        let pp = projection_symbol(xi, Sign::Plus);
        let pm = projection_symbol(xi, Sign::Minus);
        let dev_sum = op_2norm(&mat_sub(&mat_add(&pp, &pm), &mat_identity()));
        let dev_idem = op_2norm(&mat_sub(&mat_mul(&pp, &pp), &pp))
            .max(op_2norm(&mat_sub(&mat_mul(&pm, &pm), &pm)));
        let dev_cross = op_2norm(&mat_mul(&pp, &pm)).max(op_2norm(&mat_mul(&pm, &pp)));
        report.square_identity = report.square_identity.max(dev_sq.to_f64_lossy());
        report.completeness = report.completeness.max(dev_sum.to_f64_lossy());
        report.idempotence = report.idempotence.max(dev_idem.to_f64_lossy());
        report.cross_product = report.cross_product.max(dev_cross.to_f64_lossy());
    }
    report
}

pub fn random_ball_point<T: Scalar>(rng: &mut ChaCha8Rng, max_radius: f64) -> [T; 3] {
    loop {
        let p = [
            rng.gen::<f64>() * 2.0 - 1.0,
            rng.gen::<f64>() * 2.0 - 1.0,
            rng.gen::<f64>() * 2.0 - 1.0,
        ];
        let n2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
        if n2 <= 1.0 {
            return [
                r(p[0] * max_radius),
                r(p[1] * max_radius),
                r(p[2] * max_radius),
            ];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{l2_distance, Representation, SpinorField};
    use crate::grid::FourierGrid;

    #[test]
    fn matrices_are_hermitian_and_anticommute() {
        let d = DiracMatrices::<f64>::standard();
        let all = [d.alpha[0], d.alpha[1], d.alpha[2], d.beta];
        for m in &all {
            assert!(op_2norm(&mat_sub(&mat_dagger(m), m)) < 1e-15);
        }
        for j in 0..4 {
            for k in 0..4 {
                let anti = mat_add(&mat_mul(&all[j], &all[k]), &mat_mul(&all[k], &all[j]));
                let expect = if j == k {
                    mat_scale(&mat_identity(), C::new(2.0, 0.0))
                } else {
                    mat_zero()
                };
                assert!(op_2norm(&mat_sub(&anti, &expect)) < 1e-14);
            }
        }
    }

    #[test]
    fn symbol_apply_matches_matrix() {
        let xi = [0.3, -1.2, 2.7];
        let h = dirac_symbol::<f64>(xi);
        let v = [
            C::new(0.1, 0.9),
            C::new(-0.4, 0.2),
            C::new(0.7, -0.3),
            C::new(0.0, 1.1),
        ];
        let a = mat_vec(&h, &v);
        let b = dirac_symbol_apply(xi, &v);
        for c in 0..4 {
            assert!((a[c] - b[c]).norm() < 1e-14);
        }
    }

    #[test]
    fn square_identity_at_axis_points() {
        // ξ = (1,0,0): H² = 2 I₄.
        let h = dirac_symbol::<f64>([1.0, 0.0, 0.0]);
        let sq = mat_mul(&h, &h);
        assert!(op_2norm(&mat_sub(&sq, &mat_scale(&mat_identity(), C::new(2.0, 0.0)))) < 1e-14);
        // ξ = 0: β² = I₄.
        let b = DiracMatrices::<f64>::standard().beta;
        assert!(op_2norm(&mat_sub(&mat_mul(&b, &b), &mat_identity())) < 1e-15);
    }

    #[test]
    fn projector_at_origin_is_upper_block() {
        let p = projection_symbol::<f64>([0.0; 3], Sign::Plus);
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j && i < 2 { 1.0 } else { 0.0 };
                assert!((p[i][j] - C::new(expect, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn projector_spectrum_and_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..50 {
            let xi = random_ball_point::<f64>(&mut rng, 30.0);
            let p = projection_symbol(xi, Sign::Plus);
            assert!(op_2norm(&mat_sub(&mat_dagger(&p), &p)) < 1e-13);
            let ev = hermitian_eigenvalues(&p);
            assert!(ev[0].abs() < 1e-12 && ev[1].abs() < 1e-12);
            assert!((ev[2] - 1.0).abs() < 1e-12 && (ev[3] - 1.0).abs() < 1e-12);
            let trace: f64 = (0..4).map(|i| p[i][i].re).sum();
            assert!((trace - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn identity_scan_is_tight() {
        let report = check_identities::<f64>(1000, 100.0, 1);
        assert!(report.max_deviation() < 1e-12, "{report:?}");
    }

    #[test]
    fn projection_completeness_on_fields() {
        let grid = FourierGrid::<f64>::make(8, 5.0).unwrap();
        let psi = SpinorField::random_smooth(&grid, 17, 2.0);
        let plus = project(&psi, Sign::Plus);
        let minus = project(&psi, Sign::Minus);
        let mut sum = plus.clone();
        sum.add_scaled(&minus, C::new(1.0, 0.0)).unwrap();
        assert!(l2_distance(&sum, &psi) < 1e-12 * psi.l2_norm());

        // Orthogonality of the split: ‖ψ₊‖² + ‖ψ₋‖² = ‖ψ‖².
        let total = psi.l2_norm().powi(2);
        let split = plus.l2_norm().powi(2) + minus.l2_norm().powi(2);
        assert!((total - split).abs() / total < 1e-12);

        // Π₋ Π₊ ψ = 0.
        let cross = project(&plus, Sign::Minus);
        assert!(cross.l2_norm() < 1e-12 * psi.l2_norm());
    }

    #[test]
    fn eigenvector_passes_through_projection() {
        // A plane wave whose spinor value is a +1 eigenvector of H(ξ₀)/⟨ξ₀⟩
        // is untouched by Π₊.
        let grid = FourierGrid::<f64>::make(8, 4.0).unwrap();
        let target = grid.index_of_mode([1, 1, 0]);
        let xi0 = grid.xi_at(target);
        // Build the eigenvector by projecting an arbitrary spinor.
        let p = projection_symbol(xi0, Sign::Plus);
        let seedv = [
            C::new(1.0, 0.0),
            C::new(0.2, -0.1),
            C::new(0.0, 0.3),
            C::new(-0.5, 0.0),
        ];
        let ev = mat_vec(&p, &seedv);
        let mut psi = SpinorField::zeros(&grid, Representation::Spectral);
        psi.set_node_value(target, ev);
        let projected = project(&psi, Sign::Plus);
        assert!(l2_distance(&projected, &psi) < 1e-13 * psi.l2_norm().max(1e-30));
    }

    #[test]
    fn null_product_vanishes_at_zero_separation() {
        assert_eq!(null_product_norm::<f64>([3.0, -1.0, 0.5], [0.0; 3], Sign::Plus), 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let xi = random_ball_point::<f64>(&mut rng, 50.0);
            assert!(null_product_norm(xi, [0.0; 3], Sign::Minus) < 1e-13);
        }
    }

    #[test]
    fn null_product_small_separation_examples() {
        // Frozen first-scan constant for the m = n = 0 bound.
        const NULL_BOUND: f64 = 4.0;
        let xi = [10.0, 0.0, 0.0];
        let eta = [0.1, 0.0, 0.0];
        let val = null_product_norm::<f64>(xi, eta, Sign::Plus);
        assert!(val <= NULL_BOUND * null_product_reference(xi, eta));

        let eta2 = [0.0, 0.05, 0.0];
        let val2 = null_product_norm::<f64>(xi, eta2, Sign::Plus);
        assert!(val2 > 0.0);
        assert!(val2 <= NULL_BOUND * null_product_reference(xi, eta2));
    }

    #[test]
    fn projector_derivatives_decay_with_frequency() {
        // Finite-difference check of ‖∇ⁿΠ‖ ≲ ⟨ξ⟩^{1-n} for n = 1, 2:
        // the ratio against ⟨ξ⟩^{1-n} stays bounded as |ξ| grows.
        let dirs = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        let mut worst = [0.0f64; 2];
        for &radius in &[0.5, 2.0, 8.0, 32.0] {
            let xi = [radius, 0.3 * radius, -0.2 * radius];
            let br = bracket(xi);
            for dir in &dirs {
                let h = 1e-4;
                let shift = |t: f64| {
                    projection_symbol::<f64>(
                        [xi[0] + t * dir[0], xi[1] + t * dir[1], xi[2] + t * dir[2]],
                        Sign::Plus,
                    )
                };
                // Central differences with one Richardson refinement.
                let d1 = |step: f64| {
                    mat_scale(
                        &mat_sub(&shift(step), &shift(-step)),
                        C::new(0.5 / step, 0.0),
                    )
                };
                let fine = d1(h);
                let coarse = d1(2.0 * h);
                let refined = mat_sub(
                    &mat_scale(&fine, C::new(4.0 / 3.0, 0.0)),
                    &mat_scale(&coarse, C::new(1.0 / 3.0, 0.0)),
                );
                worst[0] = worst[0].max(op_2norm(&refined) * br.powi(0)); // ⟨ξ⟩^{1-1} = 1
                let d2 = mat_scale(
                    &mat_add(
                        &mat_sub(&shift(h), &mat_scale(&shift(0.0), C::new(2.0, 0.0))),
                        &shift(-h),
                    ),
                    C::new(1.0 / (h * h), 0.0),
                );
                worst[1] = worst[1].max(op_2norm(&d2) * br.powi(1)); // ⟨ξ⟩^{1-2} = ⟨ξ⟩⁻¹
            }
        }
        // Shape check only: both stay O(1) across two decades of |ξ|.
        assert!(worst[0] < 4.0, "first derivative scan {worst:?}");
        assert!(worst[1] < 8.0, "second derivative scan {worst:?}");
    }
}
