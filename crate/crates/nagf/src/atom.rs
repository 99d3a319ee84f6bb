//! The double-Λ four-level system: control-point parameterization, the
//! rotating-wave Hamiltonian, and its closed-form eigensystem.
//!
//! Basis order is the bare basis |1⟩, |2⟩, |3⟩, |4⟩; with ħ = 1 the
//! Hamiltonian carries an explicit 1/2 prefactor, so the spectrum is two
//! two-fold degenerate levels at ±Ω0/2. The lower (dark) pair spans the
//! pseudospin; at θ = 0 it coincides with span{|2⟩, |4⟩}.

use num_complex::Complex64 as C64;
use thiserror::Error;

use crate::mat::{Mat2, Mat4, State4, C_ZERO};

#[derive(Debug, Error)]
pub enum AtomError {
    #[error("omega0 must be positive, got {0}")]
    NonPositiveOmega0(f64),
    #[error("dark frame is only defined at theta = 0 (got theta = {0})")]
    ThetaNotAtPole(f64),
}

/// A point (θ, φ, ϕ) in control-parameter space with energy scale Ω0.
///
/// The couplings are Ω = Ω0 sinθ cosφ, g = Ω0 sinθ sinφ, Δ = Ω0 cosθ,
/// so Ω² + g² + Δ² = Ω0² identically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlPoint {
    /// Polar angle θ (radians).
    pub theta: f64,
    /// Mixing angle φ between the two coupling strengths (radians).
    pub phi_mix: f64,
    /// Relative drive phase ϕ (radians).
    pub varphi: f64,
    /// Energy scale Ω0 (angular frequency, rad/s).
    pub omega0: f64,
}

/// Physical couplings derived from a control point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Couplings {
    pub omega: f64,
    pub g: f64,
    pub delta: f64,
}

impl ControlPoint {
    pub fn new(theta: f64, phi_mix: f64, varphi: f64, omega0: f64) -> Result<Self, AtomError> {
        if !(omega0 > 0.0) {
            return Err(AtomError::NonPositiveOmega0(omega0));
        }
        Ok(Self {
            theta,
            phi_mix,
            varphi,
            omega0,
        })
    }

    pub fn couplings(&self) -> Couplings {
        Couplings {
            omega: self.omega0 * self.theta.sin() * self.phi_mix.cos(),
            g: self.omega0 * self.theta.sin() * self.phi_mix.sin(),
            delta: self.omega0 * self.theta.cos(),
        }
    }
}

/// The rotating-wave Hamiltonian (prefactor 1/2, ħ = 1):
///
/// ```text
///       ⎛  Δ    Ω e^{-iϕ}   0       -g      ⎞
/// H = ½ ⎜  Ω e^{iϕ}  -Δ    -g        0      ⎟
///       ⎜  0    -g     Δ   -Ω e^{iϕ}        ⎟
///       ⎝ -g     0    -Ω e^{-iϕ}    -Δ      ⎠
/// ```
pub fn hamiltonian(p: &ControlPoint) -> Mat4 {
    hamiltonian_from_couplings(&p.couplings(), p.varphi)
}

/// Same entry pattern with the couplings supplied directly; the noise layer
/// perturbs Ω, g, Δ independently of the angle parameterization.
pub fn hamiltonian_from_couplings(c: &Couplings, varphi: f64) -> Mat4 {
    let om_m = C64::from_polar(c.omega, -varphi); // Ω e^{-iϕ}
    let om_p = C64::from_polar(c.omega, varphi); // Ω e^{+iϕ}
    let g = C64::new(c.g, 0.0);
    let d = C64::new(c.delta, 0.0);
    let mut h = Mat4::zero();
    h.e[0] = [d, om_m, C_ZERO, -g];
    h.e[1] = [om_p, -d, -g, C_ZERO];
    h.e[2] = [C_ZERO, -g, d, -om_p];
    h.e[3] = [-g, C_ZERO, -om_m, -d];
    h.scale(C64::new(0.5, 0.0))
}

/// The closed-form eigensystem: dark pair {D1, D2} at −Ω0/2 and bright pair
/// {B1, B2} at +Ω0/2, in a gauge smooth over the whole chart.
#[derive(Debug, Clone, Copy)]
pub struct EigenSystem {
    pub dark: [State4; 2],
    pub bright: [State4; 2],
    pub lower_eigenvalue: f64,
    pub upper_eigenvalue: f64,
}

pub fn eigensystem(p: &ControlPoint) -> EigenSystem {
    let (s, c) = (0.5 * p.theta).sin_cos();
    let (sp, cp) = p.phi_mix.sin_cos();
    let e_p = C64::from_polar(1.0, p.varphi);
    let e_m = C64::from_polar(1.0, -p.varphi);
    let re = |x: f64| C64::new(x, 0.0);

    // |D1⟩ = sin(θ/2)|1⟩ − cos(θ/2)(cosφ e^{iϕ}|2⟩ − sinφ|4⟩)
    let d1 = [re(s), -re(c * cp) * e_p, C_ZERO, re(c * sp)];
    // |D2⟩ = −sin(θ/2)|3⟩ − cos(θ/2)(sinφ|2⟩ + cosφ e^{−iϕ}|4⟩)
    let d2 = [C_ZERO, -re(c * sp), -re(s), -re(c * cp) * e_m];
    // |B1⟩ = −sin(θ/2)|2⟩ − cos(θ/2)(cosφ e^{−iϕ}|1⟩ − sinφ|3⟩)
    let b1 = [-re(c * cp) * e_m, -re(s), re(c * sp), C_ZERO];
    // |B2⟩ = sin(θ/2)|4⟩ − cos(θ/2)(sinφ|1⟩ + cosφ e^{iϕ}|3⟩)
    let b2 = [-re(c * sp), C_ZERO, -re(c * cp) * e_p, re(s)];

    EigenSystem {
        dark: [d1, d2],
        bright: [b1, b2],
        lower_eigenvalue: -0.5 * p.omega0,
        upper_eigenvalue: 0.5 * p.omega0,
    }
}

/// Basis change between the dark pair and the bare pseudospin at θ = 0.
///
/// Returns R with columns the (|2⟩, |4⟩)-coordinates of D1 and D2:
///
/// ```text
/// R = ⎛ −cosφ e^{iϕ}   −sinφ        ⎞
///     ⎝  sinφ          −cosφ e^{−iϕ} ⎠
/// ```
///
/// A dark-frame holonomy U maps to the bare pseudospin frame as
/// R(end) · U · R(start)†.
pub fn dark_frame_at_origin(p: &ControlPoint) -> Result<Mat2, AtomError> {
    if p.theta.abs() > 1e-12 {
        return Err(AtomError::ThetaNotAtPole(p.theta));
    }
    let (sp, cp) = p.phi_mix.sin_cos();
    let e_p = C64::from_polar(1.0, p.varphi);
    let e_m = C64::from_polar(1.0, -p.varphi);
    Ok(Mat2::new([
        [-C64::new(cp, 0.0) * e_p, C64::new(-sp, 0.0)],
        [C64::new(sp, 0.0), -C64::new(cp, 0.0) * e_m],
    ]))
}
