//! Time-dependent control schedules R(t) = (θ(t), φ(t), ϕ(t)).
//!
//! The triangle loop drives θ with the Allen–Eberly tanh profile
//!
//!   θ(t) = θ0·{1 + tanh[b(t − T/4)]}/2   for t ∈ [0, T/2)
//!   θ(t) = θ0·{1 − tanh[b(t − 3T/4)]}/2  for t ∈ [T/2, T]
//!
//! with b = 10/T by default. The raw profile leaves θ(0) = θ(T) ≈ 0.0067·θ0
//! (the tanh tails); the schedule subtracts a linear baseline over the first
//! and last quarter-periods so the endpoints sit exactly on the pole, where
//! the dark pair coincides with the bare pseudospin. The azimuthal step Δϕ is
//! applied around t = T/2 as a short smooth ramp: wide against 1/Ω0 so no
//! bright-state amplitude is injected, narrow against T so the loop geometry
//! stays a triangle.

use thiserror::Error;

use crate::atom::ControlPoint;

#[derive(Debug, Error)]
pub enum ScheduleError {
    #[error("time {t:.3e} outside the schedule window [0, {duration:.3e}]")]
    TimeOutOfRange { t: f64, duration: f64 },
    #[error("schedule requires a positive duration")]
    NonPositiveDuration,
    #[error("composite schedule needs at least one part")]
    EmptyComposite,
}

/// Raw Allen–Eberly profile of θ(t) (no endpoint clamping).
pub fn allen_eberly_theta(t: f64, duration: f64, theta0: f64, b: f64) -> Result<f64, ScheduleError> {
    if !(0.0..=duration).contains(&t) {
        return Err(ScheduleError::TimeOutOfRange { t, duration });
    }
    Ok(allen_eberly_raw(t, duration, theta0, b))
}

fn allen_eberly_raw(t: f64, duration: f64, theta0: f64, b: f64) -> f64 {
    if t < 0.5 * duration {
        0.5 * theta0 * (1.0 + (b * (t - 0.25 * duration)).tanh())
    } else {
        0.5 * theta0 * (1.0 - (b * (t - 0.75 * duration)).tanh())
    }
}

/// Smooth 0→1 step with vanishing first and second derivatives at both ends.
fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        x - (2.0 * std::f64::consts::PI * x).sin() / (2.0 * std::f64::consts::PI)
    }
}

/// Triangle-loop geometry and timing parameters.
#[derive(Debug, Clone, Copy)]
pub struct TriangleShape {
    pub theta0: f64,
    pub varphi0: f64,
    pub delta_varphi: f64,
    pub phi_mix: f64,
    /// Allen–Eberly steepness; 10/T if `None`.
    pub b: Option<f64>,
    /// Width of the ϕ ramp as a fraction of the period.
    pub phi_ramp_fraction: f64,
}

impl TriangleShape {
    pub fn new(theta0: f64, varphi0: f64, delta_varphi: f64, phi_mix: f64) -> Self {
        Self {
            theta0,
            varphi0,
            delta_varphi,
            phi_mix,
            b: None,
            phi_ramp_fraction: 0.08,
        }
    }
}

/// How the azimuth ϕ is driven over a C loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AzimuthDrive {
    /// One uniform revolution: ϕ(t) = ±2πt/T.
    Uniform { reversed: bool },
    /// Envelope-weighted swing that returns to 0: ϕ(t) = ±2π f(t) t/T.
    EnvelopeModulated { reversed: bool },
}

/// Envelope f(t) shared by θ and φ on the C loops, with f(0) = f(T) = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CEnvelope {
    /// sin²(πt/T): a single smooth hump.
    SinSquared,
    /// sin(πt/T).
    Sin,
    /// Tanh rise/fall with a plateau near 1, steepness b·T.
    TanhPlateau { b_over_t: f64 },
    /// Smooth rise over `ramp` (fraction of T), plateau at 1, mirrored fall.
    Trapezoid { ramp: f64 },
}

impl CEnvelope {
    fn value(&self, t: f64, big_t: f64) -> f64 {
        let x = t / big_t;
        match *self {
            CEnvelope::SinSquared => (std::f64::consts::PI * x).sin().powi(2),
            CEnvelope::Sin => (std::f64::consts::PI * x).sin(),
            CEnvelope::TanhPlateau { b_over_t } => {
                let b = b_over_t;
                let raw = if x < 0.5 {
                    0.5 * (1.0 + (b * (x - 0.25)).tanh())
                } else {
                    0.5 * (1.0 - (b * (x - 0.75)).tanh())
                };
                let tail = 0.5 * (1.0 - (0.25 * b).tanh());
                ((raw - tail) / (1.0 - tail)).max(0.0)
            }
            CEnvelope::Trapezoid { ramp } => {
                if x < ramp {
                    smooth_step(x / ramp)
                } else if x > 1.0 - ramp {
                    smooth_step((1.0 - x) / ramp)
                } else {
                    1.0
                }
            }
        }
    }
}

/// Loop where θ and φ share the envelope f(t): θ = θ_max·f, φ = γ·f, with
/// the azimuth driven per [`AzimuthDrive`].
#[derive(Debug, Clone, Copy)]
pub struct CLoopShape {
    pub azimuth: AzimuthDrive,
    pub theta_max: f64,
    pub gamma: f64,
    pub envelope: CEnvelope,
}

#[derive(Debug, Clone)]
enum ScheduleKind {
    Constant(ControlPoint),
    Triangle(TriangleShape),
    CLoop(CLoopShape),
    Composite(Vec<ParameterSchedule>),
}

/// A schedule: duration, energy scale, and the path kind.
#[derive(Debug, Clone)]
pub struct ParameterSchedule {
    duration: f64,
    omega0: f64,
    kind: ScheduleKind,
}

impl ParameterSchedule {
    pub fn constant(point: ControlPoint, duration: f64) -> Result<Self, ScheduleError> {
        if !(duration > 0.0) {
            return Err(ScheduleError::NonPositiveDuration);
        }
        Ok(Self {
            duration,
            omega0: point.omega0,
            kind: ScheduleKind::Constant(point),
        })
    }

    pub fn triangle(shape: TriangleShape, omega0: f64, duration: f64) -> Result<Self, ScheduleError> {
        if !(duration > 0.0) {
            return Err(ScheduleError::NonPositiveDuration);
        }
        Ok(Self {
            duration,
            omega0,
            kind: ScheduleKind::Triangle(shape),
        })
    }

    pub fn c_loop(shape: CLoopShape, omega0: f64, duration: f64) -> Result<Self, ScheduleError> {
        if !(duration > 0.0) {
            return Err(ScheduleError::NonPositiveDuration);
        }
        Ok(Self {
            duration,
            omega0,
            kind: ScheduleKind::CLoop(shape),
        })
    }

    /// Run the given schedules back to back.
    pub fn concat(parts: Vec<ParameterSchedule>) -> Result<Self, ScheduleError> {
        if parts.is_empty() {
            return Err(ScheduleError::EmptyComposite);
        }
        let duration = parts.iter().map(|p| p.duration).sum();
        let omega0 = parts[0].omega0;
        Ok(Self {
            duration,
            omega0,
            kind: ScheduleKind::Composite(parts),
        })
    }

    /// The same schedule repeated n times.
    pub fn repeat(&self, n: usize) -> Result<Self, ScheduleError> {
        Self::concat(vec![self.clone(); n.max(1)])
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn kind_name(&self) -> &'static str {
        match &self.kind {
            ScheduleKind::Constant(_) => "constant",
            ScheduleKind::Triangle(_) => "triangle",
            ScheduleKind::CLoop(s) => match s.azimuth {
                AzimuthDrive::Uniform { .. } => "c-loop-uniform",
                AzimuthDrive::EnvelopeModulated { .. } => "c-loop-modulated",
            },
            ScheduleKind::Composite(_) => "composite",
        }
    }

    /// Control point at time t, clamped to [0, T].
    pub fn control_at(&self, t: f64) -> ControlPoint {
        let t = t.clamp(0.0, self.duration);
        match &self.kind {
            ScheduleKind::Constant(p) => *p,
            ScheduleKind::Triangle(s) => self.triangle_at(s, t),
            ScheduleKind::CLoop(s) => self.c_loop_at(s, t),
            ScheduleKind::Composite(parts) => {
                let mut local = t;
                for part in parts {
                    if local <= part.duration || std::ptr::eq(part, parts.last().unwrap()) {
                        return part.control_at(local);
                    }
                    local -= part.duration;
                }
                parts.last().unwrap().control_at(parts.last().unwrap().duration)
            }
        }
    }

    fn triangle_at(&self, s: &TriangleShape, t: f64) -> ControlPoint {
        let big_t = self.duration;
        let b = s.b.unwrap_or(10.0 / big_t);
        let quarter = 0.25 * big_t;
        let raw = allen_eberly_raw(t, big_t, s.theta0, b);
        // pull the tanh tails onto the pole with a linear baseline over the
        // first/last quarter period
        let theta = if t <= quarter {
            let tail = allen_eberly_raw(0.0, big_t, s.theta0, b);
            (raw - tail * (1.0 - t / quarter)).max(0.0)
        } else if t >= big_t - quarter {
            let tail = allen_eberly_raw(big_t, big_t, s.theta0, b);
            (raw - tail * ((t - (big_t - quarter)) / quarter)).max(0.0)
        } else {
            raw
        };
        // the baseline subtraction can leave an ulp-scale residue at the ends
        let theta = if theta < 1e-12 { 0.0 } else { theta };

        let tau = s.phi_ramp_fraction * big_t;
        let ramp_start = 0.5 * big_t - 0.5 * tau;
        let varphi = s.varphi0 + s.delta_varphi * smooth_step((t - ramp_start) / tau);

        ControlPoint {
            theta,
            phi_mix: s.phi_mix,
            varphi,
            omega0: self.omega0,
        }
    }

    fn c_loop_at(&self, s: &CLoopShape, t: f64) -> ControlPoint {
        let big_t = self.duration;
        let f = s.envelope.value(t, big_t);
        let varphi = match s.azimuth {
            AzimuthDrive::Uniform { reversed } => {
                let sign = if reversed { -1.0 } else { 1.0 };
                sign * 2.0 * std::f64::consts::PI * t / big_t
            }
            AzimuthDrive::EnvelopeModulated { reversed } => {
                let sign = if reversed { -1.0 } else { 1.0 };
                sign * 2.0 * std::f64::consts::PI * f * t / big_t
            }
        };
        ControlPoint {
            theta: s.theta_max * f,
            phi_mix: s.gamma * f,
            varphi,
            omega0: self.omega0,
        }
    }

    /// Interior times where some control derivative is discontinuous; the
    /// integrator aligns its step grid on these.
    pub fn breakpoints(&self) -> Vec<f64> {
        match &self.kind {
            ScheduleKind::Constant(_) | ScheduleKind::CLoop(_) => Vec::new(),
            ScheduleKind::Triangle(s) => {
                let big_t = self.duration;
                let tau = s.phi_ramp_fraction * big_t;
                vec![
                    0.25 * big_t,
                    0.5 * big_t - 0.5 * tau,
                    0.5 * big_t,
                    0.5 * big_t + 0.5 * tau,
                    0.75 * big_t,
                ]
            }
            ScheduleKind::Composite(parts) => {
                let mut pts = Vec::new();
                let mut offset = 0.0;
                for (i, part) in parts.iter().enumerate() {
                    if i > 0 {
                        pts.push(offset);
                    }
                    pts.extend(part.breakpoints().iter().map(|b| b + offset));
                    offset += part.duration;
                }
                pts
            }
        }
    }

    /// True when the schedule starts and ends with θ on the pole, so the dark
    /// pair coincides with span{|2⟩, |4⟩} at both ends.
    pub fn pole_to_pole(&self) -> bool {
        self.control_at(0.0).theta.abs() < 1e-9
            && self.control_at(self.duration).theta.abs() < 1e-9
    }
}
