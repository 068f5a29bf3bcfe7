//! The long-range cubic coupling `𝒩(ψ₁,ψ₂,ψ₃) = (|x|⁻¹ ∗ ⟨ψ₃,ψ₂⟩) ψ₁`.
//!
//! On the torus the Coulomb convolution is the Fourier multiplier `4π/|ξ|²`
//! with the zero mode set to zero. Dropping the zero mode shifts the
//! potential by a spatially uniform constant; that constant only rotates ψ
//! by a spatially uniform phase, so every modulus, norm, and relative-phase
//! diagnostic is insensitive to the choice (it is a gauge).

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::Error;
use crate::field::{same_grid, Representation, ScalarField, SpinorField};
use crate::grid::{norm_sq, rho_low, FourierGrid};
use crate::scalar::{r, Scalar, C};
use crate::Result;

/// Zero-mode convention for the torus Coulomb multiplier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZeroModeConvention<T> {
    /// Drop the `ξ = 0` mode (default gauge).
    Drop,
    /// Keep a configured uniform offset `λ·M₀/V₀` (mean-field shift).
    MeanFieldShift { lambda: T },
}

/// The periodized Coulomb symbol `4π/|ξ|²`, zero at the zero mode.
pub struct CoulombKernel<T: Scalar> {
    pub grid: Arc<FourierGrid<T>>,
}

impl<T: Scalar> CoulombKernel<T> {
    pub fn new(grid: &Arc<FourierGrid<T>>) -> Self {
        Self { grid: grid.clone() }
    }

    #[inline]
    pub fn symbol(xi: [T; 3]) -> T {
        let q = norm_sq(xi);
        if q == T::zero() {
            T::zero()
        } else {
            r::<T>(4.0) * T::PI() / q
        }
    }
}

/// Nodewise sesquilinear density `⟨ψ_a, ψ_b⟩ = ψ_a† ψ_b` (physical fields).
pub fn inner_density<T: Scalar>(
    a: &SpinorField<T>,
    b: &SpinorField<T>,
) -> Result<ScalarField<T>> {
    same_grid(&a.grid, &b.grid)?;
    for f in [a, b] {
        if f.representation() != Representation::Physical {
            return Err(Error::RepresentationMismatch {
                expected: "physical",
                got: "spectral",
            });
        }
    }
    let mut out = ScalarField::zeros(&a.grid, Representation::Physical);
    out.values.par_iter_mut().enumerate().for_each(|(i, v)| {
        let mut acc = C::new(T::zero(), T::zero());
        for c in 0..4 {
            acc += a.comps[c][i].conj() * b.comps[c][i];
        }
        *v = acc;
    });
    Ok(out)
}

/// `|ψ|²` as an exactly real scalar field.
pub fn density_of<T: Scalar>(psi: &SpinorField<T>) -> ScalarField<T> {
    assert_eq!(psi.representation(), Representation::Physical);
    let mut out = ScalarField::zeros(&psi.grid, Representation::Physical);
    out.values.par_iter_mut().enumerate().for_each(|(i, v)| {
        let mut acc = T::zero();
        for c in 0..4 {
            acc += psi.comps[c][i].norm_sqr();
        }
        *v = C::new(acc, T::zero());
    });
    out
}

/// `|x|⁻¹ ∗ density` through the spectral Coulomb multiplier. A real input
/// produces a real output (the roundoff imaginary part is symmetrized away).
pub fn coulomb_potential<T: Scalar>(density: &ScalarField<T>) -> Result<ScalarField<T>> {
    let input_real = density.representation() == Representation::Physical
        && density.values.iter().all(|v| v.im == T::zero());
    let mut pot = density.clone();
    pot.to_spectral();
    if !pot.values.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::NonFiniteField {
            context: "coulomb_potential input".into(),
        });
    }
    pot.apply_multiplier(|xi| C::new(CoulombKernel::<T>::symbol(xi), T::zero()))?;
    pot.to_physical();
    if input_real {
        pot.values
            .par_iter_mut()
            .for_each(|v| *v = C::new(v.re, T::zero()));
    }
    Ok(pot)
}

/// `(|x|⁻¹ ∗ ⟨ψ₃,ψ₂⟩) ψ₁` nodewise; all fields physical, same grid.
pub fn hartree_term<T: Scalar>(
    psi1: &SpinorField<T>,
    psi2: &SpinorField<T>,
    psi3: &SpinorField<T>,
) -> Result<SpinorField<T>> {
    same_grid(&psi1.grid, &psi2.grid)?;
    same_grid(&psi1.grid, &psi3.grid)?;
    let density = inner_density(psi3, psi2)?;
    let potential = coulomb_potential(&density)?;
    let mut out = psi1.clone();
    for c in &mut out.comps {
        c.par_iter_mut()
            .zip(potential.values.par_iter())
            .for_each(|(v, p)| *v *= *p);
    }
    Ok(out)
}

/// Uniform phase rate dropped (or kept) by the zero-mode convention.
/// Under [`ZeroModeConvention::Drop`] this is 0 by definition; under the
/// mean-field shift it is `c₁·λ·M₀/V₀` for total mass `M₀` on box volume
/// `V₀`.
pub fn gauge_phase_rate<T: Scalar>(
    density: &ScalarField<T>,
    c1: T,
    convention: ZeroModeConvention<T>,
) -> T {
    match convention {
        ZeroModeConvention::Drop => T::zero(),
        ZeroModeConvention::MeanFieldShift { lambda } => {
            assert_eq!(density.representation(), Representation::Physical);
            let mass = density
                .values
                .iter()
                .map(|v| v.re)
                .fold(T::zero(), |a, b| a + b)
                * density.grid.dx3();
            c1 * lambda * mass / density.grid.volume()
        }
    }
}

/// 2/3-rule truncation of a scalar field's spectrum (used by the dealias
/// option for convergence studies).
pub fn truncate_two_thirds<T: Scalar>(field: &mut ScalarField<T>) {
    let cut = field.grid.xi_max_axis() * r(2.0 / 3.0);
    field
        .apply_multiplier(|xi| {
            let keep = xi.iter().all(|c| c.abs() <= cut);
            C::new(if keep { T::one() } else { T::zero() }, T::zero())
        })
        .expect("truncation symbol is finite");
    field.to_physical();
}

/// Low-pass diagnostic used by the null-gain scans: `P_{≤N₀}` applied to a
/// scalar density.
pub fn lowpass_scalar<T: Scalar>(field: &ScalarField<T>, n0: T) -> ScalarField<T> {
    let mut out = field.clone();
    out.apply_multiplier(|xi| C::new(rho_low(xi, n0), T::zero()))
        .expect("low symbol is finite");
    out
}
