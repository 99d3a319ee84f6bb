//! SU(2) group operations on 2×2 matrices: rotation-axis form, exponential,
//! principal logarithm and N-th roots, polar unitarization, and fidelities.
//!
//! Holonomies extracted from the dynamics carry no meaningful global phase
//! (the dynamical phase is stripped separately), so [`su2_log`] first divides
//! its input by the principal square root of the determinant to land in SU(2).

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::mat::{sigma_dot, Mat2, C_ONE};

/// Numerical tolerances shared by the SU(2) operations.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Allowed ‖UU† − I‖_F for a matrix to count as unitary.
    pub unitarity: f64,
    /// Allowed ‖axis‖ − 1 for a rotation axis.
    pub axis_norm: f64,
    /// Allowed |det − 1| after global-phase stripping.
    pub special_det: f64,
    /// Allowed recomposition error for N-th roots, root^N vs input.
    pub root_recomposition: f64,
    /// Allowed |‖ψ‖ − 1| for state-fidelity inputs.
    pub state_norm: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            unitarity: 1e-10,
            axis_norm: 1e-12,
            special_det: 1e-8,
            root_recomposition: 1e-9,
            state_norm: 1e-9,
        }
    }
}

#[derive(Debug, Error)]
pub enum Su2Error {
    #[error("matrix is not unitary (defect {defect:.3e})")]
    NotUnitary { defect: f64 },
    #[error("rotation axis is not a unit vector (norm {norm:.6})")]
    NonUnitAxis { norm: f64 },
    #[error("determinant {det:.6} too far from the unit circle")]
    BadDeterminant { det: f64 },
    #[error("matrix is singular")]
    Singular,
    #[error("root order must be at least 1")]
    ZeroRootOrder,
    #[error("state vector is not normalized (norm {norm:.6})")]
    NotNormalized { norm: f64 },
}

/// 2×2 unitary, validated on construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary2(Mat2);

impl Unitary2 {
    pub fn try_new(m: Mat2, tol: &Tolerances) -> Result<Self, Su2Error> {
        let defect = m.unitarity_defect();
        if defect > tol.unitarity {
            return Err(Su2Error::NotUnitary { defect });
        }
        Ok(Self(m))
    }

    /// Wrap a matrix already known to be unitary (e.g. built from a closed
    /// form). Debug builds still assert the invariant.
    pub fn new_unchecked(m: Mat2) -> Self {
        debug_assert!(m.unitarity_defect() < 1e-8, "new_unchecked on non-unitary");
        Self(m)
    }

    pub fn identity() -> Self {
        Self(Mat2::identity())
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.0
    }

    pub fn into_matrix(self) -> Mat2 {
        self.0
    }

    pub fn dagger(&self) -> Self {
        Self(self.0.dagger())
    }

    /// Group product. Closed on unitaries, so no re-validation.
    pub fn compose(&self, rhs: &Self) -> Self {
        Self(self.0 * rhs.0)
    }

    /// U^n by repeated squaring.
    pub fn power(&self, n: u32) -> Self {
        let mut acc = Mat2::identity();
        let mut base = self.0;
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            k >>= 1;
        }
        Self(acc)
    }
}

/// Rotation-axis parameterization U = exp(iη ĥ·σ).
///
/// `axis_ambiguous` is set when the source matrix was ±I to working
/// precision, where every axis reproduces it; the stored axis is then one
/// valid representative rather than a measured direction.
#[derive(Debug, Clone, Copy)]
pub struct RotationAxisForm {
    /// Rotation angle η ∈ [0, π].
    pub eta: f64,
    /// Unit axis ĥ.
    pub axis: [f64; 3],
    pub axis_ambiguous: bool,
}

impl RotationAxisForm {
    pub fn new(eta: f64, axis: [f64; 3]) -> Self {
        Self {
            eta,
            axis,
            axis_ambiguous: false,
        }
    }
}

/// exp(iη ĥ·σ) = cos(η)·I + i·sin(η)·(ĥ·σ).
pub fn su2_exp(form: &RotationAxisForm) -> Result<Unitary2, Su2Error> {
    let tol = Tolerances::default();
    let n = (form.axis[0] * form.axis[0]
        + form.axis[1] * form.axis[1]
        + form.axis[2] * form.axis[2])
        .sqrt();
    if (n - 1.0).abs() > tol.axis_norm {
        return Err(Su2Error::NonUnitAxis { norm: n });
    }
    let (s, c) = form.eta.sin_cos();
    let m = Mat2::identity().scale(C64::new(c, 0.0))
        + sigma_dot(form.axis).scale(C64::new(0.0, s));
    Ok(Unitary2::new_unchecked(m))
}

/// Principal square root of a unit-modulus complex number.
fn principal_sqrt_phase(z: C64) -> C64 {
    C64::from_polar(z.norm().sqrt(), 0.5 * z.arg())
}

/// Principal logarithm of a 2×2 unitary in rotation-axis form.
///
/// A global phase is stripped by dividing by √det (principal branch); the
/// remaining special-unitary part is decomposed as exp(iη ĥ·σ) with
/// η ∈ [0, π]. At η = 0 or η = π the axis is ambiguous and flagged.
pub fn su2_log(u: &Unitary2) -> Result<RotationAxisForm, Su2Error> {
    su2_log_with(u, &Tolerances::default())
}

pub fn su2_log_with(u: &Unitary2, tol: &Tolerances) -> Result<RotationAxisForm, Su2Error> {
    let det = u.matrix().det();
    if (det.norm() - 1.0).abs() > tol.special_det {
        return Err(Su2Error::BadDeterminant { det: det.norm() });
    }
    let m = u.matrix().scale(C_ONE / principal_sqrt_phase(det));

    // m = cos η + i sin η (ĥ·σ); read the quaternion components off the entries.
    let cos_eta = 0.5 * (m.e[0][0] + m.e[1][1]).re;
    let vx = 0.5 * (m.e[0][1].im + m.e[1][0].im);
    let vy = 0.5 * (m.e[0][1].re - m.e[1][0].re);
    let vz = 0.5 * (m.e[0][0].im - m.e[1][1].im);
    let sin_eta = (vx * vx + vy * vy + vz * vz).sqrt();
    let eta = sin_eta.atan2(cos_eta);

    if sin_eta < 1e-13 {
        // ±I: any axis works.
        return Ok(RotationAxisForm {
            eta: if cos_eta >= 0.0 { 0.0 } else { std::f64::consts::PI },
            axis: [0.0, 0.0, 1.0],
            axis_ambiguous: true,
        });
    }
    Ok(RotationAxisForm {
        eta,
        axis: [vx / sin_eta, vy / sin_eta, vz / sin_eta],
        axis_ambiguous: false,
    })
}

/// Principal N-th root: exp(iη ĥ·σ) ↦ exp(i(η/N) ĥ·σ).
///
/// Valid as the inverse of U ↦ U^N only while Nη < π; winding detection for
/// multi-loop data lives with the protocol layer, which has per-loop records.
pub fn nth_root_su2(u: &Unitary2, n: u32) -> Result<Unitary2, Su2Error> {
    if n == 0 {
        return Err(Su2Error::ZeroRootOrder);
    }
    let form = su2_log(u)?;
    su2_exp(&RotationAxisForm {
        eta: form.eta / n as f64,
        axis: form.axis,
        axis_ambiguous: form.axis_ambiguous,
    })
}

/// Nearest unitary in Frobenius norm: the polar factor of M, via the Newton
/// iteration X ← (X + X^{-†})/2, quadratically convergent for nonsingular M.
pub fn unitarize(m: &Mat2) -> Result<Unitary2, Su2Error> {
    if m.det().norm() < 1e-14 {
        return Err(Su2Error::Singular);
    }
    let mut x = *m;
    for _ in 0..64 {
        let inv_dag = x.inverse().ok_or(Su2Error::Singular)?.dagger();
        let next = (x + inv_dag).scale(C64::new(0.5, 0.0));
        let delta = (next - x).frobenius_norm();
        x = next;
        if delta < 1e-15 {
            break;
        }
    }
    Ok(Unitary2::new_unchecked(x))
}

/// F = |⟨ψ_act|ψ_ideal⟩| for normalized state vectors of equal dimension.
pub fn state_fidelity(psi_act: &[C64], psi_ideal: &[C64]) -> Result<f64, Su2Error> {
    let tol = Tolerances::default();
    assert_eq!(psi_act.len(), psi_ideal.len());
    for psi in [psi_act, psi_ideal] {
        let n = psi.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if (n - 1.0).abs() > tol.state_norm {
            return Err(Su2Error::NotNormalized { norm: n });
        }
    }
    Ok(psi_act
        .iter()
        .zip(psi_ideal.iter())
        .map(|(a, b)| a.conj() * b)
        .sum::<C64>()
        .norm())
}

/// Global-phase-insensitive gate fidelity |Tr(A†B)| / 2 for 2×2 unitaries.
pub fn gate_fidelity(a: &Mat2, b: &Mat2) -> f64 {
    0.5 * (a.dagger() * *b).trace().norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::{C_I, C_ZERO};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn diag(a: C64, b: C64) -> Mat2 {
        Mat2::new([[a, C_ZERO], [C_ZERO, b]])
    }

    #[test]
    fn exp_zero_angle_is_identity() {
        let u = su2_exp(&RotationAxisForm::new(0.0, [0.0, 1.0, 0.0])).unwrap();
        assert!((*u.matrix() - Mat2::identity()).frobenius_norm() < 1e-15);
    }

    #[test]
    fn exp_half_pi_about_z() {
        let u = su2_exp(&RotationAxisForm::new(PI / 2.0, [0.0, 0.0, 1.0])).unwrap();
        assert!((*u.matrix() - diag(C_I, -C_I)).frobenius_norm() < 1e-15);
    }

    #[test]
    fn exp_matches_truncated_series() {
        // exp(i·0.3·σx) summed term by term.
        let gen = sigma_dot([1.0, 0.0, 0.0]).scale(C64::new(0.0, 0.3));
        let mut series = Mat2::identity();
        let mut term = Mat2::identity();
        for k in 1..25 {
            term = term * gen.scale(C64::new(1.0 / k as f64, 0.0));
            series = series + term;
        }
        let u = su2_exp(&RotationAxisForm::new(0.3, [1.0, 0.0, 0.0])).unwrap();
        assert!((*u.matrix() - series).frobenius_norm() < 1e-12);
    }

    #[test]
    fn exp_rejects_non_unit_axis() {
        assert!(matches!(
            su2_exp(&RotationAxisForm::new(0.2, [1.0, 1.0, 0.0])),
            Err(Su2Error::NonUnitAxis { .. })
        ));
    }

    #[test]
    fn log_of_identity_is_flagged() {
        let form = su2_log(&Unitary2::identity()).unwrap();
        assert_eq!(form.eta, 0.0);
        assert!(form.axis_ambiguous);
    }

    #[test]
    fn log_of_minus_identity_is_flagged_pi() {
        let u = Unitary2::new_unchecked(Mat2::identity().scale(-C_ONE));
        let form = su2_log(&u).unwrap();
        assert!((form.eta - PI).abs() < 1e-12);
        assert!(form.axis_ambiguous);
    }

    #[test]
    fn log_of_z_rotation() {
        let u = Unitary2::new_unchecked(diag(C_I, -C_I));
        let form = su2_log(&u).unwrap();
        assert!((form.eta - PI / 2.0).abs() < 1e-12);
        assert!((form.axis[2] - 1.0).abs() < 1e-12);
        assert!(!form.axis_ambiguous);
    }

    #[test]
    fn log_strips_global_phase() {
        let u = su2_exp(&RotationAxisForm::new(0.7, [0.0, 0.6, 0.8])).unwrap();
        let phased = Unitary2::new_unchecked(u.matrix().scale(C64::from_polar(1.0, 1.3)));
        let a = su2_log(&u).unwrap();
        let b = su2_log(&phased).unwrap();
        assert!((a.eta - b.eta).abs() < 1e-10);
        for k in 0..3 {
            assert!((a.axis[k] - b.axis[k]).abs() < 1e-10);
        }
    }

    #[test]
    fn nth_root_divides_angle() {
        let u = su2_exp(&RotationAxisForm::new(0.30, [0.0, 0.0, 1.0])).unwrap();
        let r = nth_root_su2(&u, 5).unwrap();
        let expect = su2_exp(&RotationAxisForm::new(0.06, [0.0, 0.0, 1.0])).unwrap();
        assert!((*r.matrix() - *expect.matrix()).frobenius_norm() < 1e-12);
    }

    #[test]
    fn nth_root_identity_and_first_root() {
        let id = Unitary2::identity();
        assert!(
            (*nth_root_su2(&id, 7).unwrap().matrix() - Mat2::identity()).frobenius_norm() < 1e-12
        );
        let u = su2_exp(&RotationAxisForm::new(1.1, [1.0, 0.0, 0.0])).unwrap();
        let r = nth_root_su2(&u, 1).unwrap();
        assert!(gate_fidelity(r.matrix(), u.matrix()) > 1.0 - 1e-12);
    }

    #[test]
    fn nth_root_rejects_zero_order() {
        assert!(matches!(
            nth_root_su2(&Unitary2::identity(), 0),
            Err(Su2Error::ZeroRootOrder)
        ));
    }

    #[test]
    fn unitarize_is_identity_on_unitary() {
        let u = su2_exp(&RotationAxisForm::new(0.9, [0.6, 0.0, 0.8])).unwrap();
        let w = unitarize(u.matrix()).unwrap();
        assert!((*w.matrix() - *u.matrix()).frobenius_norm() < 1e-12);
    }

    #[test]
    fn unitarize_removes_scaling() {
        let m = Mat2::identity().scale(C64::new(1.01, 0.0));
        let w = unitarize(&m).unwrap();
        assert!((*w.matrix() - Mat2::identity()).frobenius_norm() < 1e-12);
    }

    #[test]
    fn unitarize_rejects_singular() {
        let m = Mat2::new([[C_ONE, C_ONE], [C_ONE, C_ONE]]);
        assert!(matches!(unitarize(&m), Err(Su2Error::Singular)));
    }

    #[test]
    fn fidelity_basic_values() {
        let two = [C_ZERO, C_ONE, C_ZERO, C_ZERO];
        let four = [C_ZERO, C_ZERO, C_ZERO, C_ONE];
        let w = 1.0 / 2.0_f64.sqrt();
        let sup = [C_ZERO, C64::new(w, 0.0), C_ZERO, C64::new(w, 0.0)];
        assert!((state_fidelity(&two, &two).unwrap() - 1.0).abs() < 1e-15);
        assert!(state_fidelity(&two, &four).unwrap() < 1e-15);
        assert!((state_fidelity(&four, &sup).unwrap() - w).abs() < 1e-12);
    }

    #[test]
    fn fidelity_rejects_unnormalized() {
        let bad = [C64::new(0.5, 0.0), C_ZERO];
        let good = [C_ONE, C_ZERO];
        assert!(matches!(
            state_fidelity(&bad, &good),
            Err(Su2Error::NotNormalized { .. })
        ));
    }

    fn arb_axis() -> impl Strategy<Value = [f64; 3]> {
        (-1.0..1.0f64, 0.0..(2.0 * PI))
            .prop_map(|(z, az)| {
                let r = (1.0 - z * z).sqrt();
                [r * az.cos(), r * az.sin(), z]
            })
    }

    proptest! {
        #[test]
        fn prop_exp_log_roundtrip(eta in 1e-3..(PI - 1e-3), axis in arb_axis()) {
            let u = su2_exp(&RotationAxisForm::new(eta, axis)).unwrap();
            let form = su2_log(&u).unwrap();
            prop_assert!((form.eta - eta).abs() < 1e-10);
            for k in 0..3 {
                prop_assert!((form.axis[k] - axis[k]).abs() < 1e-9);
            }
        }

        #[test]
        fn prop_nth_root_recomposes(eta in 1e-3..(PI - 1e-2), axis in arb_axis(), n in 1u32..8) {
            let u = su2_exp(&RotationAxisForm::new(eta, axis)).unwrap();
            let r = nth_root_su2(&u, n).unwrap();
            let back = r.power(n);
            prop_assert!((*back.matrix() - *u.matrix()).frobenius_norm() < 1e-9);
        }

        #[test]
        fn prop_unitarize_near_perturbation(eta in 0.0..PI, axis in arb_axis(),
                                            dre in -1e-3..1e-3f64, dim in -1e-3..1e-3f64) {
            let u = su2_exp(&RotationAxisForm::new(eta, axis)).unwrap();
            let mut m = *u.matrix();
            m.e[0][1] += C64::new(dre, dim);
            let w = unitarize(&m).unwrap();
            prop_assert!(w.matrix().unitarity_defect() < 1e-12);
            prop_assert!((*w.matrix() - *u.matrix()).frobenius_norm() < 40.0 * 1e-3);
        }
    }
}
