//! Quantum Fisher information for pure and mixed states.
//!
//! For a pure state and Hermitian generator `A` the QFI is four times the
//! variance, `F_Q = 4(⟨A²⟩ - ⟨A⟩²)`. For a mixed state written in an
//! eigendecomposition `ρ = Σ_μ λ_μ |λ_μ⟩⟨λ_μ|`,
//!
//! ```text
//! F_Q = 2 Σ_{λ_μ + λ_ν ≠ 0} (λ_μ - λ_ν)² / (λ_μ + λ_ν) · |⟨λ_μ|A|λ_ν⟩|²,
//! ```
//!
//! and it is upper-bounded by the weighted per-component correlation sum
//! `4 Σ_μ λ_μ C_μ` with `C_μ = ⟨A²⟩_μ - ⟨A⟩_μ²` (see
//! [`fvc_upper_bound`]). The squeezing trajectories only ever need the
//! transverse second moments, which [`optimal_qfi`] turns into the QFI
//! maximized over the measurement axis in the y-z plane.

use num_complex::Complex64;

use crate::collective::{build_collective, expectation, Axis, CollectiveOperator, DickeState};
use crate::error::{Error, Result};

/// Weights below this are treated as exactly zero in mixed-state sums;
/// the `(λ_μ - λ_ν)²/(λ_μ + λ_ν)` terms are unstable for near-zero sums.
pub const WEIGHT_CUTOFF: f64 = 1e-12;

const ORTHONORMALITY_TOLERANCE: f64 = 1e-9;

/// Second moments of the collective spin transverse to the initial
/// polarization axis: `⟨S_y²⟩`, `⟨S_z²⟩`, and `⟨S_yS_z + S_zS_y⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransverseCovariance {
    pub syy: f64,
    pub szz: f64,
    pub cross: f64,
}

impl TransverseCovariance {
    /// Extremal variances of `S_θ = S_y cosθ + S_z sinθ` over θ, returned
    /// as `(smallest, largest)`.
    pub fn extremal_variances(&self) -> (f64, f64) {
        let mean = 0.5 * (self.syy + self.szz);
        let radius = 0.5 * ((self.syy - self.szz).powi(2) + self.cross * self.cross).sqrt();
        (mean - radius, mean + radius)
    }
}

/// The θ-maximized QFI together with the maximizing angle in `[0, π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QfiAtAngle {
    pub theta_opt: f64,
    pub f_q: f64,
}

/// Transverse second moments of a state, via banded matrix-vector products.
pub fn transverse_covariance(state: &DickeState) -> Result<TransverseCovariance> {
    let n = state.n_spins();
    let sy = build_collective(Axis::Y, n)?;
    let sz = build_collective(Axis::Z, n)?;
    let wy = sy.apply(state)?;
    let wz = sz.apply(state)?;
    let syy: f64 = wy.iter().map(|z| z.norm_sqr()).sum();
    let szz: f64 = wz.iter().map(|z| z.norm_sqr()).sum();
    let cross: Complex64 = wy.iter().zip(&wz).map(|(a, b)| a.conj() * b).sum();
    Ok(TransverseCovariance {
        syy,
        szz,
        cross: 2.0 * cross.re,
    })
}

/// Like [`transverse_covariance`], but additionally checks that the first
/// moments `⟨S_y⟩`, `⟨S_z⟩` vanish within `tolerance`, as they must for
/// states descending from a protocol that preserves the y/z sign-flip
/// symmetry.
pub fn transverse_covariance_with_symmetry_check(
    state: &DickeState,
    tolerance: f64,
) -> Result<TransverseCovariance> {
    let n = state.n_spins();
    for axis in [Axis::Y, Axis::Z] {
        let mean = expectation(state, &build_collective(axis, n)?)?;
        if mean.abs() > tolerance {
            return Err(Error::InvariantViolation(format!(
                "first moment along {axis:?} is {mean:.3e}, beyond tolerance {tolerance:.3e}"
            )));
        }
    }
    transverse_covariance(state)
}

/// Maximizes `F_Q(θ) = 4[cos²θ ⟨S_y²⟩ + sin²θ ⟨S_z²⟩ + sinθ cosθ ⟨{S_y,S_z}⟩]`
/// in closed form.
///
/// The maximum is `2[(syy + szz) + √((syy − szz)² + cross²)]` at
/// `θ = ½ atan2(cross, syy − szz)`, reported in `[0, π)`; the isotropic
/// tie resolves to `θ = 0`.
pub fn optimal_qfi(cov: &TransverseCovariance) -> QfiAtAngle {
    let diff = cov.syy - cov.szz;
    let radius = (diff * diff + cov.cross * cov.cross).sqrt();
    let f_q = 2.0 * ((cov.syy + cov.szz) + radius);
    // isotropic within rounding: every angle is optimal, report 0
    let tie = radius <= 1e-12 * (cov.syy + cov.szz);
    let mut theta = if tie { 0.0 } else { 0.5 * cov.cross.atan2(diff) };
    if theta < 0.0 {
        theta += std::f64::consts::PI;
    }
    if theta >= std::f64::consts::PI {
        theta -= std::f64::consts::PI;
    }
    QfiAtAngle { theta_opt: theta, f_q }
}

/// Pure-state QFI `4(⟨A²⟩ − ⟨A⟩²)` for a Hermitian generator.
pub fn qfi_pure(state: &DickeState, generator: &CollectiveOperator) -> Result<f64> {
    let image = generator.apply(state)?;
    let second: f64 = image.iter().map(|z| z.norm_sqr()).sum();
    let first: Complex64 = state
        .amplitudes()
        .iter()
        .zip(&image)
        .map(|(a, w)| a.conj() * w)
        .sum();
    Ok(4.0 * (second - first.re * first.re))
}

/// A mixed state as a weighted set of pure component vectors.
///
/// Component vectors may live on any space (Dicke or full Hilbert space);
/// the QFI routines require them mutually orthonormal, as produced by an
/// eigendecomposition. Weights must be a probability vector.
#[derive(Debug, Clone)]
pub struct MixedState {
    weights: Vec<f64>,
    components: Vec<Vec<Complex64>>,
}

impl MixedState {
    pub fn new(weights: Vec<f64>, components: Vec<Vec<Complex64>>) -> Result<Self> {
        if weights.is_empty() || weights.len() != components.len() {
            return Err(Error::invalid(
                "weights and components must be non-empty and of equal length",
            ));
        }
        let dim = components[0].len();
        if dim == 0 || components.iter().any(|c| c.len() != dim) {
            return Err(Error::invalid("components must share a nonzero dimension"));
        }
        if weights.iter().any(|&w| !w.is_finite() || w < 0.0) {
            return Err(Error::invalid("weights must be finite and non-negative"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::invalid(format!(
                "weights must sum to 1 (got {total:.15})"
            )));
        }
        Ok(Self { weights, components })
    }

    /// A single pure state as a rank-1 mixture.
    pub fn pure(component: Vec<Complex64>) -> Result<Self> {
        Self::new(vec![1.0], vec![component])
    }

    /// A random mixture with orthonormal components, for property checks:
    /// Gram-Schmidt on seeded complex vectors plus a normalized random
    /// weight vector.
    pub fn random_orthonormal(
        dim: usize,
        components: usize,
        rng: &mut impl rand::Rng,
    ) -> Result<Self> {
        if components == 0 || components > dim {
            return Err(Error::invalid(
                "component count must lie in 1..=dim for an orthonormal set",
            ));
        }
        let mut basis: Vec<Vec<Complex64>> = Vec::new();
        while basis.len() < components {
            let mut v: Vec<Complex64> = (0..dim)
                .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
                .collect();
            for b in &basis {
                let overlap: Complex64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= overlap * bi;
                }
            }
            let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-6 {
                continue;
            }
            for vi in &mut v {
                *vi /= norm;
            }
            basis.push(v);
        }
        let raw: Vec<f64> = (0..components).map(|_| rng.random::<f64>() + 1e-3).collect();
        let total: f64 = raw.iter().sum();
        let mut weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
        let correction: f64 = 1.0 - weights.iter().sum::<f64>();
        weights[0] += correction;
        Self::new(weights, basis)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn components(&self) -> &[Vec<Complex64>] {
        &self.components
    }

    pub fn dim(&self) -> usize {
        self.components[0].len()
    }

    fn check_orthonormal(&self) -> Result<()> {
        for (i, a) in self.components.iter().enumerate() {
            for (j, b) in self.components.iter().enumerate().skip(i) {
                let overlap: Complex64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                if (overlap - expected).norm() > ORTHONORMALITY_TOLERANCE {
                    return Err(Error::invalid(format!(
                        "components {i} and {j} are not orthonormal \
                         (⟨{i}|{j}⟩ = {overlap:.3e})"
                    )));
                }
            }
        }
        Ok(())
    }

    fn generator_data(
        &self,
        generator: &CollectiveOperator,
    ) -> Result<(Vec<Vec<Complex64>>, Vec<Vec<Complex64>>)> {
        if self.dim() != generator.dim() {
            return Err(Error::DimensionMismatch {
                expected: generator.dim(),
                got: self.dim(),
            });
        }
        self.check_orthonormal()?;
        let images: Vec<Vec<Complex64>> = self
            .components
            .iter()
            .map(|c| generator.apply_slice(c))
            .collect::<Result<_>>()?;
        // overlaps[mu][nu] = ⟨λ_μ|A|λ_ν⟩
        let overlaps: Vec<Vec<Complex64>> = self
            .components
            .iter()
            .map(|c| {
                images
                    .iter()
                    .map(|img| c.iter().zip(img).map(|(x, y)| x.conj() * y).sum())
                    .collect()
            })
            .collect();
        Ok((images, overlaps))
    }
}

/// Mixed-state QFI for a Hermitian generator on the component space.
///
/// Cross terms between listed components and the (never materialized) null
/// space of ρ are folded in through the closed-form completion
/// `4 Σ_μ λ_μ (⟨A²⟩_μ - Σ_{ν: λ_ν>0} |⟨λ_μ|A|λ_ν⟩|²)`.
pub fn qfi_mixed(rho: &MixedState, generator: &CollectiveOperator) -> Result<f64> {
    let (images, overlaps) = rho.generator_data(generator)?;
    let k = rho.weights.len();
    let live = |w: f64| w > WEIGHT_CUTOFF;

    let mut listed = 0.0;
    for mu in 0..k {
        for nu in 0..k {
            if mu != nu && (live(rho.weights[mu]) || live(rho.weights[nu])) {
                let sum = rho.weights[mu] + rho.weights[nu];
                let diff = rho.weights[mu] - rho.weights[nu];
                listed += diff * diff / sum * overlaps[mu][nu].norm_sqr();
            }
        }
    }

    let mut null_completion = 0.0;
    for mu in 0..k {
        if !live(rho.weights[mu]) {
            continue;
        }
        let second: f64 = images[mu].iter().map(|z| z.norm_sqr()).sum();
        let within: f64 = (0..k)
            .filter(|&nu| live(rho.weights[nu]) || nu == mu)
            .map(|nu| overlaps[mu][nu].norm_sqr())
            .sum();
        null_completion += rho.weights[mu] * (second - within);
    }

    Ok(2.0 * listed + 4.0 * null_completion)
}

/// The correlation upper bound `4 Σ_μ λ_μ C_μ` on the mixed-state QFI,
/// with `C_μ = ⟨λ_μ|A²|λ_μ⟩ − ⟨λ_μ|A|λ_μ⟩²`.
pub fn fvc_upper_bound(rho: &MixedState, generator: &CollectiveOperator) -> Result<f64> {
    let (images, overlaps) = rho.generator_data(generator)?;
    let mut bound = 0.0;
    for (mu, weight) in rho.weights.iter().enumerate() {
        let second: f64 = images[mu].iter().map(|z| z.norm_sqr()).sum();
        let mean = overlaps[mu][mu].re;
        bound += weight * (second - mean * mean);
    }
    Ok(4.0 * bound)
}

/// The non-negative coefficient `λ_μ + λ_ν − (λ_μ − λ_ν)²/(λ_μ + λ_ν)`
/// that measures how far the QFI sits below the correlation bound.
pub fn zeta_coefficient(lambda_mu: f64, lambda_nu: f64) -> Result<f64> {
    if lambda_mu < 0.0 || lambda_nu < 0.0 {
        return Err(Error::invalid("weights must be non-negative"));
    }
    let sum = lambda_mu + lambda_nu;
    if sum <= 0.0 {
        return Err(Error::invalid("weights must not both vanish"));
    }
    let diff = lambda_mu - lambda_nu;
    Ok(sum - diff * diff / sum)
}

/// The phase-estimation error floor `Δθ = 1/√(M F_Q)` for `M` repetitions.
pub fn cramer_rao(f_q: f64, m_repetitions: u64) -> Result<f64> {
    if !(f_q > 0.0) {
        return Err(Error::invalid("QFI must be positive"));
    }
    if m_repetitions == 0 {
        return Err(Error::invalid("repetition count must be at least 1"));
    }
    Ok(1.0 / (m_repetitions as f64 * f_q).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collective::{coherent_state, Direction};
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn ghz_like(n: usize) -> DickeState {
        let mut amps = vec![Complex64::ZERO; n + 1];
        let r = Complex64::new(1.0 / 2.0_f64.sqrt(), 0.0);
        amps[0] = r;
        amps[n] = r;
        DickeState::new(n, amps).unwrap()
    }

    fn random_mixture(n: usize, k: usize, rng: &mut ChaCha8Rng) -> MixedState {
        MixedState::random_orthonormal(n + 1, k, rng).unwrap()
    }

    #[test]
    fn coherent_covariance_is_isotropic() {
        let state = coherent_state(4, Direction::PlusX).unwrap();
        let cov = transverse_covariance(&state).unwrap();
        assert_abs_diff_eq!(cov.syy, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(cov.szz, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(cov.cross, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn ghz_covariance() {
        let cov = transverse_covariance(&ghz_like(4)).unwrap();
        assert_abs_diff_eq!(cov.szz, 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(cov.cross, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn symmetry_check_rejects_polarized_state() {
        // |m = N/2⟩ has ⟨S_z⟩ = N/2 ≠ 0.
        let state = DickeState::basis_state(4, 4).unwrap();
        assert!(transverse_covariance_with_symmetry_check(&state, 1e-8).is_err());
        let coherent = coherent_state(4, Direction::MinusX).unwrap();
        assert!(transverse_covariance_with_symmetry_check(&coherent, 1e-8).is_ok());
    }

    #[test]
    fn optimal_qfi_axis_aligned() {
        let q = optimal_qfi(&TransverseCovariance {
            syy: 3.0,
            szz: 1.0,
            cross: 0.0,
        });
        assert_abs_diff_eq!(q.theta_opt, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(q.f_q, 12.0, epsilon = 1e-12);
    }

    #[test]
    fn optimal_qfi_diagonal_cross() {
        let q = optimal_qfi(&TransverseCovariance {
            syy: 1.0,
            szz: 1.0,
            cross: 2.0,
        });
        assert_abs_diff_eq!(q.theta_opt, std::f64::consts::FRAC_PI_4, epsilon = 1e-12);
        assert_abs_diff_eq!(q.f_q, 8.0, epsilon = 1e-12);
    }

    #[test]
    fn optimal_qfi_coherent_reaches_standard_quantum_limit() {
        for n in [4.0, 100.0] {
            let q = optimal_qfi(&TransverseCovariance {
                syy: n / 4.0,
                szz: n / 4.0,
                cross: 0.0,
            });
            assert_abs_diff_eq!(q.f_q, n, epsilon = 1e-12);
            assert_abs_diff_eq!(q.theta_opt, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn qfi_pure_cases() {
        let n = 8;
        let sz = build_collective(Axis::Z, n).unwrap();
        let coherent = coherent_state(n, Direction::PlusX).unwrap();
        assert_relative_eq!(
            qfi_pure(&coherent, &sz).unwrap(),
            n as f64,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            qfi_pure(&ghz_like(n), &sz).unwrap(),
            (n * n) as f64,
            max_relative = 1e-12
        );
        let eigenstate = DickeState::basis_state(n, 3).unwrap();
        assert_abs_diff_eq!(qfi_pure(&eigenstate, &sz).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn qfi_mixed_reduces_to_pure_for_rank_one() {
        let n = 6;
        let sz = build_collective(Axis::Z, n).unwrap();
        let state = coherent_state(n, Direction::MinusX).unwrap();
        let rho = MixedState::pure(state.amplitudes().to_vec()).unwrap();
        let mixed = qfi_mixed(&rho, &sz).unwrap();
        let pure = qfi_pure(&state, &sz).unwrap();
        assert_abs_diff_eq!(mixed, pure, epsilon = 1e-10);
    }

    #[test]
    fn qfi_mixed_vanishes_for_maximally_mixed() {
        let n = 5;
        let dim = n + 1;
        let sz = build_collective(Axis::Z, n).unwrap();
        let components: Vec<Vec<Complex64>> = (0..dim)
            .map(|k| {
                let mut v = vec![Complex64::ZERO; dim];
                v[k] = Complex64::ONE;
                v
            })
            .collect();
        let rho = MixedState::new(vec![1.0 / dim as f64; dim], components).unwrap();
        assert_abs_diff_eq!(qfi_mixed(&rho, &sz).unwrap(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn qfi_mixed_rejects_non_orthonormal_components() {
        let n = 3;
        let sz = build_collective(Axis::Z, n).unwrap();
        let v = coherent_state(n, Direction::PlusX).unwrap().amplitudes().to_vec();
        let rho = MixedState::new(vec![0.5, 0.5], vec![v.clone(), v]).unwrap();
        assert!(qfi_mixed(&rho, &sz).is_err());
    }

    #[test]
    fn fvc_bound_equals_pure_qfi_for_pure_states() {
        let n = 7;
        let sz = build_collective(Axis::Z, n).unwrap();
        let state = coherent_state(n, Direction::PlusX).unwrap();
        let rho = MixedState::pure(state.amplitudes().to_vec()).unwrap();
        assert_relative_eq!(
            fvc_upper_bound(&rho, &sz).unwrap(),
            qfi_pure(&state, &sz).unwrap(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn fvc_bound_for_polarization_mixture() {
        // Equal mixture of ±x product states; each component has
        // Var(S_z) = N/4, so the bound is N while the mixture's QFI is
        // below it.
        let n = 6;
        let sz = build_collective(Axis::Z, n).unwrap();
        let plus = coherent_state(n, Direction::PlusX).unwrap();
        let minus = coherent_state(n, Direction::MinusX).unwrap();
        let rho = MixedState::new(
            vec![0.5, 0.5],
            vec![plus.amplitudes().to_vec(), minus.amplitudes().to_vec()],
        )
        .unwrap();
        let bound = fvc_upper_bound(&rho, &sz).unwrap();
        assert_relative_eq!(bound, n as f64, max_relative = 1e-12);
        assert!(qfi_mixed(&rho, &sz).unwrap() <= bound + 1e-9);
    }

    #[test]
    fn zeta_examples() {
        assert_abs_diff_eq!(zeta_coefficient(0.5, 0.5).unwrap(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(zeta_coefficient(1.0, 0.0).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(zeta_coefficient(0.7, 0.3).unwrap(), 0.84, epsilon = 1e-15);
        assert!(zeta_coefficient(0.0, 0.0).is_err());
        assert!(zeta_coefficient(-0.1, 0.5).is_err());
    }

    #[test]
    fn cramer_rao_examples() {
        assert_abs_diff_eq!(cramer_rao(100.0, 1).unwrap(), 0.1, epsilon = 1e-15);
        assert_abs_diff_eq!(cramer_rao(1e4, 1).unwrap(), 0.01, epsilon = 1e-15);
        assert_abs_diff_eq!(cramer_rao(4.0, 4).unwrap(), 0.25, epsilon = 1e-15);
        assert!(cramer_rao(0.0, 1).is_err());
        assert!(cramer_rao(-1.0, 3).is_err());
        assert!(cramer_rao(1.0, 0).is_err());
    }

    #[test]
    fn bound_dominates_qfi_and_zeta_closes_gap_on_random_mixtures() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..100 {
            let n = rng.random_range(2..=8);
            let k = rng.random_range(1..=4.min(n + 1));
            let rho = random_mixture(n, k, &mut rng);
            let sz = build_collective(Axis::Z, n).unwrap();
            let qfi = qfi_mixed(&rho, &sz).unwrap();
            let bound = fvc_upper_bound(&rho, &sz).unwrap();
            let scale = bound.abs().max(1.0);
            assert!(
                bound - qfi >= -1e-9 * scale,
                "trial {trial}: bound {bound} < qfi {qfi}"
            );

            // ζ identity: F_Q + 2 Σ_{μ≠ν} ζ_{μν} |⟨λ_μ|A|λ_ν⟩|² equals the
            // correlation bound.
            let (_, overlaps) = rho.generator_data(&sz).unwrap();
            let mut gap = 0.0;
            for mu in 0..k {
                for nu in 0..k {
                    if mu != nu
                        && rho.weights()[mu] > WEIGHT_CUTOFF
                        && rho.weights()[nu] > WEIGHT_CUTOFF
                    {
                        gap += zeta_coefficient(rho.weights()[mu], rho.weights()[nu]).unwrap()
                            * overlaps[mu][nu].norm_sqr();
                    }
                }
            }
            assert_relative_eq!(qfi + 2.0 * gap, bound, max_relative = 1e-9, epsilon = 1e-9);

            // Convexity: mixture QFI never exceeds the weighted average of
            // component pure-state QFIs.
            let avg: f64 = rho
                .weights()
                .iter()
                .zip(rho.components())
                .map(|(w, comp)| {
                    let state = DickeState::new(n, comp.clone()).unwrap();
                    w * qfi_pure(&state, &sz).unwrap()
                })
                .sum();
            assert!(qfi <= avg + 1e-9 * scale);
        }
    }

    proptest! {
        #[test]
        fn optimal_qfi_dominates_sampled_angles(
            syy in 0.0..50.0f64,
            szz in 0.0..50.0f64,
            frac in -1.0..1.0f64,
        ) {
            let cross = frac * 2.0 * (syy * szz).sqrt();
            let cov = TransverseCovariance { syy, szz, cross };
            let q = optimal_qfi(&cov);
            for k in 0..64 {
                let theta = k as f64 / 64.0 * std::f64::consts::PI;
                let f = 4.0
                    * (theta.cos().powi(2) * syy
                        + theta.sin().powi(2) * szz
                        + theta.sin() * theta.cos() * cross);
                prop_assert!(q.f_q >= f - 1e-9 * (1.0 + f.abs()));
            }
            let at_opt = 4.0
                * (q.theta_opt.cos().powi(2) * syy
                    + q.theta_opt.sin().powi(2) * szz
                    + q.theta_opt.sin() * q.theta_opt.cos() * cross);
            prop_assert!((at_opt - q.f_q).abs() <= 1e-9 * (1.0 + q.f_q));
            prop_assert!(q.f_q >= 4.0 * syy.max(szz) - 1e-9);
            prop_assert!((0.0..std::f64::consts::PI).contains(&q.theta_opt));
        }
    }
}
