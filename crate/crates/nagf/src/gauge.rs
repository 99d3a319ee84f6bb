//! Gauge structure on the dark subspace: Berry connections A_μ = ⟨D_j|∂_μ D_k⟩,
//! field strengths F_μν = ∂_μA_ν − ∂_νA_μ + [A_μ, A_ν], Wilson lines
//! P exp(−∮ A_μ dμ), and small-loop curvature estimators.
//!
//! Closed forms are written in the fixed gauge defined by the closed-form
//! eigenstates, which is smooth on the whole chart; the numeric variants
//! differentiate those same eigenstates, so the two routes share a gauge and
//! are directly comparable. The commutator sign in F is fixed by the
//! pure-gauge limit (F ≡ 0 wherever the Hamiltonian is parameter-independent)
//! and by the small-loop expansion of P exp(−∮A).

use thiserror::Error;

use crate::atom::{eigensystem, ControlPoint};
use crate::mat::{inner4, sigma_dot, sigma_x, sigma_y, Mat2, State4, C64};
use crate::su2::Unitary2;

#[derive(Debug, Error)]
pub enum GaugeError {
    #[error("point too close to a chart pole for step {step:.1e} (theta = {theta:.3e})")]
    PoleProximity { theta: f64, step: f64 },
    #[error("spherical refinement undefined near the poles (sin theta = {0:.3e})")]
    SphericalPole(f64),
    #[error("path marked closed but endpoints differ")]
    PathNotClosed,
    #[error("path needs at least two waypoints")]
    DegeneratePath,
}

/// Chart coordinate labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coord {
    Theta,
    PhiMix,
    Varphi,
}

/// The three connection components at a point; A_θ vanishes identically.
#[derive(Debug, Clone, Copy)]
pub struct GaugeConnection {
    pub a_theta: Mat2,
    pub a_phi: Mat2,
    pub a_varphi: Mat2,
}

impl GaugeConnection {
    pub fn component(&self, mu: Coord) -> &Mat2 {
        match mu {
            Coord::Theta => &self.a_theta,
            Coord::PhiMix => &self.a_phi,
            Coord::Varphi => &self.a_varphi,
        }
    }
}

/// Field-strength components for the three coordinate pairs.
#[derive(Debug, Clone, Copy)]
pub struct FieldStrength {
    pub f_theta_varphi: Mat2,
    pub f_theta_phi: Mat2,
    pub f_phi_varphi: Mat2,
}

impl FieldStrength {
    /// F_μν with antisymmetry F_νμ = −F_μν; F_μμ = 0.
    pub fn component(&self, mu: Coord, nu: Coord) -> Mat2 {
        match (mu, nu) {
            (Coord::Theta, Coord::Varphi) => self.f_theta_varphi,
            (Coord::Varphi, Coord::Theta) => -self.f_theta_varphi,
            (Coord::Theta, Coord::PhiMix) => self.f_theta_phi,
            (Coord::PhiMix, Coord::Theta) => -self.f_theta_phi,
            (Coord::PhiMix, Coord::Varphi) => self.f_phi_varphi,
            (Coord::Varphi, Coord::PhiMix) => -self.f_phi_varphi,
            _ => Mat2::zero(),
        }
    }
}

/// Closed-form connection in the eigenstate gauge:
///
///   A_θ = 0
///   A_φ = cos²(θ/2) · [[0, e^{−iϕ}], [−e^{iϕ}, 0]]
///   A_ϕ = i cos²(θ/2) cosφ · κ_ϕ·σ,   κ_ϕ = (sinφ cosϕ, sinφ sinϕ, cosφ)
pub fn connection_analytic(p: &ControlPoint) -> GaugeConnection {
    let c2 = (0.5 * p.theta).cos().powi(2);
    let (sp, cp) = p.phi_mix.sin_cos();
    let (sv, cv) = p.varphi.sin_cos();

    let a_phi = (sigma_x().scale(C64::new(0.0, sv)) - sigma_y().scale(C64::new(0.0, cv)))
        .scale(C64::new(-c2, 0.0));
    let kappa = [sp * cv, sp * sv, cp];
    let a_varphi = sigma_dot(kappa).scale(C64::new(0.0, c2 * cp));

    GaugeConnection {
        a_theta: Mat2::zero(),
        a_phi,
        a_varphi,
    }
}

fn shifted(p: &ControlPoint, mu: Coord, delta: f64) -> ControlPoint {
    let mut q = *p;
    match mu {
        Coord::Theta => q.theta += delta,
        Coord::PhiMix => q.phi_mix += delta,
        Coord::Varphi => q.varphi += delta,
    }
    q
}

fn dark_states(p: &ControlPoint) -> [State4; 2] {
    eigensystem(p).dark
}

/// A_μ by central finite differences of the closed-form eigenstates.
pub fn connection_numeric(p: &ControlPoint, h: f64) -> Result<GaugeConnection, GaugeError> {
    if p.theta < h || p.theta > std::f64::consts::PI - h {
        return Err(GaugeError::PoleProximity {
            theta: p.theta,
            step: h,
        });
    }
    let base = dark_states(p);
    let comp = |mu: Coord| -> Mat2 {
        let plus = dark_states(&shifted(p, mu, h));
        let minus = dark_states(&shifted(p, mu, -h));
        let mut a = Mat2::zero();
        for j in 0..2 {
            for k in 0..2 {
                let mut dvec = [crate::mat::C_ZERO; 4];
                for i in 0..4 {
                    dvec[i] = (plus[k][i] - minus[k][i]) / C64::new(2.0 * h, 0.0);
                }
                a.e[j][k] = inner4(&base[j], &dvec);
            }
        }
        // keep the exact anti-Hermitian part; the symmetric remainder is
        // pure O(h²) differencing error
        (a - a.dagger()).scale(C64::new(0.5, 0.0))
    };
    Ok(GaugeConnection {
        a_theta: comp(Coord::Theta),
        a_phi: comp(Coord::PhiMix),
        a_varphi: comp(Coord::Varphi),
    })
}

/// Closed-form field strengths in the same gauge:
///
///   F_θϕ = −(i/2) sinθ cosφ · κ_θϕ·σ,  κ_θϕ = (sinφ cosϕ, sinφ sinϕ, cosφ)
///   F_θφ = (i/2) sinθ · (sinϕ σx − cosϕ σy)
///   F_φϕ = 2i cos²(θ/2) sin²(θ/2) cosφ · (cosφ cosϕ, cosφ sinϕ, −sinφ)·σ
pub fn curvature_analytic(p: &ControlPoint) -> FieldStrength {
    let st = p.theta.sin();
    let c2 = (0.5 * p.theta).cos().powi(2);
    let s2 = (0.5 * p.theta).sin().powi(2);
    let (sp, cp) = p.phi_mix.sin_cos();
    let (sv, cv) = p.varphi.sin_cos();

    let f_theta_varphi =
        sigma_dot([sp * cv, sp * sv, cp]).scale(C64::new(0.0, -0.5 * st * cp));
    let f_theta_phi = (sigma_x().scale(C64::new(sv, 0.0)) - sigma_y().scale(C64::new(cv, 0.0)))
        .scale(C64::new(0.0, 0.5 * st));
    let f_phi_varphi =
        sigma_dot([cp * cv, cp * sv, -sp]).scale(C64::new(0.0, 2.0 * c2 * s2 * cp));

    FieldStrength {
        f_theta_varphi,
        f_theta_phi,
        f_phi_varphi,
    }
}

/// F_μν from the numeric connection: central differences of A plus the
/// commutator at the midpoint.
pub fn curvature_numeric(p: &ControlPoint, h: f64) -> Result<FieldStrength, GaugeError> {
    let a0 = connection_numeric(p, h)?;
    let d = |mu: Coord, nu: Coord| -> Result<Mat2, GaugeError> {
        let ap = connection_numeric(&shifted(p, mu, h), h)?;
        let am = connection_numeric(&shifted(p, mu, -h), h)?;
        Ok((*ap.component(nu) - *am.component(nu)).scale(C64::new(0.5 / h, 0.0)))
    };
    let f = |mu: Coord, nu: Coord| -> Result<Mat2, GaugeError> {
        Ok(d(mu, nu)? - d(nu, mu)? + Mat2::commutator(a0.component(mu), a0.component(nu)))
    };
    Ok(FieldStrength {
        f_theta_varphi: f(Coord::Theta, Coord::Varphi)?,
        f_theta_phi: f(Coord::Theta, Coord::PhiMix)?,
        f_phi_varphi: f(Coord::PhiMix, Coord::Varphi)?,
    })
}

/// The sinθ-refined monopole field F^S_θϕ = F_θϕ / sinθ, whose operator norm
/// is position-independent on the sphere.
pub fn spherical_field(f: &FieldStrength, theta: f64) -> Result<Mat2, GaugeError> {
    let st = theta.sin();
    if st.abs() < 1e-6 {
        return Err(GaugeError::SphericalPole(st));
    }
    Ok(f.f_theta_varphi.scale(C64::new(1.0 / st, 0.0)))
}

/// Piecewise-linear path through control-parameter space.
#[derive(Debug, Clone)]
pub struct ParamPath {
    pub waypoints: Vec<ControlPoint>,
    pub segments_per_leg: usize,
    pub closed: bool,
}

impl ParamPath {
    pub fn new(
        waypoints: Vec<ControlPoint>,
        segments_per_leg: usize,
        closed: bool,
    ) -> Result<Self, GaugeError> {
        if waypoints.len() < 2 {
            return Err(GaugeError::DegeneratePath);
        }
        let path = Self {
            waypoints,
            segments_per_leg: segments_per_leg.max(1),
            closed,
        };
        if closed && !path.endpoints_coincide() {
            return Err(GaugeError::PathNotClosed);
        }
        Ok(path)
    }

    fn endpoints_coincide(&self) -> bool {
        let a = self.waypoints.first().unwrap();
        let b = self.waypoints.last().unwrap();
        (a.theta - b.theta).abs() < 1e-12
            && (a.phi_mix - b.phi_mix).abs() < 1e-12
            && (a.varphi - b.varphi).abs() < 1e-12
    }

    /// The triangle loop of the amplification protocol: pole → (θ0, ϕ0) →
    /// (θ0, ϕ0+Δϕ) → pole, at fixed mixing angle.
    pub fn triangle(
        theta0: f64,
        varphi0: f64,
        delta_varphi: f64,
        phi_mix: f64,
        omega0: f64,
        segments_per_leg: usize,
    ) -> Self {
        let p = |theta: f64, varphi: f64| ControlPoint {
            theta,
            phi_mix,
            varphi,
            omega0,
        };
        Self {
            waypoints: vec![
                p(0.0, varphi0),
                p(theta0, varphi0),
                p(theta0, varphi0 + delta_varphi),
                p(0.0, varphi0 + delta_varphi),
            ],
            segments_per_leg: segments_per_leg.max(1),
            closed: false,
        }
    }

    /// Rectangle with corners (θ0, ϕ0) and (θ0+δθ, ϕ0+δϕ), traversed θ-leg
    /// first; positive orientation for the small-loop estimator.
    pub fn rectangle_theta_varphi(
        origin: &ControlPoint,
        d_theta: f64,
        d_varphi: f64,
        segments_per_leg: usize,
    ) -> Self {
        let p = |theta: f64, varphi: f64| ControlPoint {
            theta,
            phi_mix: origin.phi_mix,
            varphi,
            omega0: origin.omega0,
        };
        Self {
            waypoints: vec![
                p(origin.theta, origin.varphi),
                p(origin.theta + d_theta, origin.varphi),
                p(origin.theta + d_theta, origin.varphi + d_varphi),
                p(origin.theta, origin.varphi + d_varphi),
                p(origin.theta, origin.varphi),
            ],
            segments_per_leg: segments_per_leg.max(1),
            closed: true,
        }
    }
}

/// exp(M) for anti-Hermitian M = i(h0·I + h·σ).
fn exp_anti_hermitian(m: &Mat2) -> Mat2 {
    debug_assert!(m.anti_hermiticity_defect() < 1e-9);
    let h0 = 0.5 * m.trace().im;
    let hx = 0.5 * (m.e[0][1].im + m.e[1][0].im);
    let hy = 0.5 * (m.e[0][1].re - m.e[1][0].re);
    let hz = 0.5 * (m.e[0][0].im - m.e[1][1].im);
    let n = (hx * hx + hy * hy + hz * hz).sqrt();
    let phase = C64::from_polar(1.0, h0);
    if n < 1e-300 {
        return Mat2::identity().scale(phase);
    }
    let (s, c) = n.sin_cos();
    (Mat2::identity().scale(C64::new(c, 0.0))
        + sigma_dot([hx / n, hy / n, hz / n]).scale(C64::new(0.0, s)))
    .scale(phase)
}

/// Path-ordered Wilson line P exp(−∫ A_μ dμ) along the path, midpoint rule
/// with one 2×2 exponential per segment. The result lives in the eigenstate
/// gauge; converting a pole-to-pole holonomy to the bare pseudospin frame is
/// the caller's step (via the dark frame at the endpoints).
pub fn wilson_line(path: &ParamPath) -> Result<Unitary2, GaugeError> {
    if path.closed && !path.endpoints_coincide() {
        return Err(GaugeError::PathNotClosed);
    }
    if path.waypoints.len() < 2 {
        return Err(GaugeError::DegeneratePath);
    }
    let n = path.segments_per_leg;
    let mut u = Mat2::identity();
    for leg in path.waypoints.windows(2) {
        let (a, b) = (&leg[0], &leg[1]);
        let d_theta = (b.theta - a.theta) / n as f64;
        let d_phi = (b.phi_mix - a.phi_mix) / n as f64;
        let d_varphi = (b.varphi - a.varphi) / n as f64;
        for k in 0..n {
            let frac = (k as f64 + 0.5) / n as f64;
            let mid = ControlPoint {
                theta: a.theta + frac * (b.theta - a.theta),
                phi_mix: a.phi_mix + frac * (b.phi_mix - a.phi_mix),
                varphi: a.varphi + frac * (b.varphi - a.varphi),
                omega0: a.omega0,
            };
            let conn = connection_analytic(&mid);
            let gen = conn.a_theta.scale(C64::new(-d_theta, 0.0))
                + conn.a_phi.scale(C64::new(-d_phi, 0.0))
                + conn.a_varphi.scale(C64::new(-d_varphi, 0.0));
            u = exp_anti_hermitian(&gen) * u;
        }
    }
    // each segment factor is exactly unitary, so the product is too
    debug_assert!(u.unitarity_defect() < 1e-8);
    Ok(Unitary2::new_unchecked(u))
}

/// Second-order small-loop operator U' ≈ I − F·δS.
pub fn small_loop_operator(f: &Mat2, ds: f64) -> Mat2 {
    Mat2::identity() - f.scale(C64::new(ds, 0.0))
}
