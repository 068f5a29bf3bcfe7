//! Exact linear evolution: the half-dispersion flows `e^{∓it⟨D⟩}`, the free
//! Dirac group `U(t)`, and sup-norm decay measurement.
//!
//! `U(t) = e^{-it⟨D⟩}Π₊(D) + e^{+it⟨D⟩}Π₋(D)` evaluates nodewise through the
//! closed form `cos(t⟨ξ⟩) I - i sin(t⟨ξ⟩) H(ξ)/⟨ξ⟩`, which is unitary up to
//! roundoff and needs no matrix construction.

use crate::dirac::{dirac_symbol_apply, Sign};
use crate::error::Error;
use crate::field::SpinorField;
use crate::grid::bracket;
use crate::scalar::{cis, r, Scalar, C};
use crate::Result;

/// Multiply spectral coefficients by the unimodular symbol `e^{-θit⟨ξ⟩}`.
pub fn half_kg_propagate<T: Scalar>(
    field: &SpinorField<T>,
    t: T,
    sign: Sign,
) -> Result<SpinorField<T>> {
    if !t.is_finite() {
        return Err(Error::NonFiniteField {
            context: "propagation time".into(),
        });
    }
    let mut out = field.clone();
    out.to_spectral();
    let th: T = sign.as_scalar();
    out.apply_multiplier(|xi| cis(-th * t * bracket(xi)))?;
    Ok(out)
}

/// Free Dirac flow `U(t)ψ₀`; input in any representation, output spectral.
pub fn free_dirac<T: Scalar>(field: &SpinorField<T>, t: T) -> SpinorField<T> {
    let mut out = field.clone();
    out.to_spectral();
    apply_free_dirac_spectral(&mut out, t);
    out
}

/// In-place `U(t)` on a spectral field.
pub fn apply_free_dirac_spectral<T: Scalar>(field: &mut SpinorField<T>, t: T) {
    use rayon::prelude::*;
    let g = field.grid.clone();
    let (c0, rest) = field.comps.split_at_mut(1);
    let (c1, rest) = rest.split_at_mut(1);
    let (c2, c3) = rest.split_at_mut(1);
    (c0[0].par_iter_mut(), c1[0].par_iter_mut())
        .into_par_iter()
        .zip((c2[0].par_iter_mut(), c3[0].par_iter_mut()).into_par_iter())
        .enumerate()
        .for_each(|(i, ((v0, v1), (v2, v3)))| {
            let xi = g.xi_at(i);
            let br = bracket(xi);
            let (s, c) = (t * br).sin_cos();
            let v = [*v0, *v1, *v2, *v3];
            let hv = dirac_symbol_apply(xi, &v);
            let cz = C::new(c, T::zero());
            let msob = C::new(T::zero(), -s / br); // -i sin(t⟨ξ⟩)/⟨ξ⟩
            *v0 = v[0] * cz + hv[0] * msob;
            *v1 = v[1] * cz + hv[1] * msob;
            *v2 = v[2] * cz + hv[2] * msob;
            *v3 = v[3] * cz + hv[3] * msob;
        });
}

/// Sup-norm trace `(t, ‖U(t)ψ₀‖_{L^∞})`; the sup is the max over nodes of
/// the ℂ⁴ Euclidean norm. Times beyond the wrap-around horizon `L/2` are
/// rejected because re-entrant waves contaminate decay.
pub fn decay_scan<T: Scalar>(psi0: &SpinorField<T>, times: &[T]) -> Result<Vec<(T, T)>> {
    let horizon = psi0.grid.box_length() * r(0.5);
    let mut out = Vec::with_capacity(times.len());
    let spectral = psi0.clone().spectral();
    for &t in times {
        if t > horizon {
            return Err(Error::BeyondHorizon {
                time: t.to_f64_lossy(),
                horizon: horizon.to_f64_lossy(),
            });
        }
        let sup = free_dirac(&spectral, t).physical().linf_norm();
        out.push((t, sup));
    }
    Ok(out)
}
