//! Small fixed-size complex linear algebra: 2×2 and 4×4 matrices plus state
//! vectors, sized for a two-level pseudospin inside a four-level atom.
//!
//! Everything here is dense, stack-allocated and exact-shape; no general
//! N×N machinery.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

/// Alias used throughout the crate.
pub type C64 = Complex64;

/// Four-component complex state vector in the bare basis |1⟩..|4⟩.
pub type State4 = [C64; 4];

/// Two-component pseudospin state in the (|2⟩, |4⟩) basis.
pub type State2 = [C64; 2];

pub const C_ZERO: C64 = C64::new(0.0, 0.0);
pub const C_ONE: C64 = C64::new(1.0, 0.0);
pub const C_I: C64 = C64::new(0.0, 1.0);

/// 2×2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub e: [[C64; 2]; 2],
}

/// 4×4 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat4 {
    pub e: [[C64; 4]; 4],
}

impl Mat2 {
    pub const fn new(e: [[C64; 2]; 2]) -> Self {
        Self { e }
    }

    pub fn zero() -> Self {
        Self::new([[C_ZERO; 2]; 2])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        m.e[0][0] = C_ONE;
        m.e[1][1] = C_ONE;
        m
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let mut m = Self::zero();
        for i in 0..2 {
            for j in 0..2 {
                m.e[i][j] = self.e[j][i].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> C64 {
        self.e[0][0] + self.e[1][1]
    }

    pub fn det(&self) -> C64 {
        self.e[0][0] * self.e[1][1] - self.e[0][1] * self.e[1][0]
    }

    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if d.norm() < 1e-300 {
            return None;
        }
        let inv = C_ONE / d;
        Some(Self::new([
            [self.e[1][1] * inv, -self.e[0][1] * inv],
            [-self.e[1][0] * inv, self.e[0][0] * inv],
        ]))
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut m = *self;
        for row in m.e.iter_mut() {
            for v in row.iter_mut() {
                *v *= s;
            }
        }
        m
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.e
            .iter()
            .flatten()
            .map(|v| v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Spectral (operator 2-) norm: largest singular value, from the closed-form
    /// eigenvalues of the 2×2 Hermitian matrix M†M.
    pub fn op_norm(&self) -> f64 {
        let g = self.dagger() * *self;
        // g is Hermitian PSD: eigenvalues (t ± sqrt(t² - 4d)) / 2
        let t = g.trace().re;
        let d = g.det().re;
        let disc = (t * t - 4.0 * d).max(0.0);
        (0.5 * (t + disc.sqrt())).max(0.0).sqrt()
    }

    /// ‖U·U† − I‖_F, zero for unitary matrices.
    pub fn unitarity_defect(&self) -> f64 {
        (*self * self.dagger() - Self::identity()).frobenius_norm()
    }

    /// ‖M − M†‖_F, zero for Hermitian matrices.
    pub fn hermiticity_defect(&self) -> f64 {
        (*self - self.dagger()).frobenius_norm()
    }

    /// ‖M + M†‖_F, zero for anti-Hermitian matrices.
    pub fn anti_hermiticity_defect(&self) -> f64 {
        (*self + self.dagger()).frobenius_norm()
    }

    pub fn mul_vec(&self, v: &State2) -> State2 {
        [
            self.e[0][0] * v[0] + self.e[0][1] * v[1],
            self.e[1][0] * v[0] + self.e[1][1] * v[1],
        ]
    }

    pub fn commutator(a: &Self, b: &Self) -> Self {
        *a * *b - *b * *a
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let mut m = self;
        for i in 0..2 {
            for j in 0..2 {
                m.e[i][j] += rhs.e[i][j];
            }
        }
        m
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        let mut m = self;
        for i in 0..2 {
            for j in 0..2 {
                m.e[i][j] -= rhs.e[i][j];
            }
        }
        m
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(-C_ONE)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let mut m = Mat2::zero();
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = C_ZERO;
                for (k, rhs_row) in rhs.e.iter().enumerate() {
                    acc += self.e[i][k] * rhs_row[j];
                }
                m.e[i][j] = acc;
            }
        }
        m
    }
}

/// Pauli σx.
pub fn sigma_x() -> Mat2 {
    Mat2::new([[C_ZERO, C_ONE], [C_ONE, C_ZERO]])
}

/// Pauli σy.
pub fn sigma_y() -> Mat2 {
    Mat2::new([[C_ZERO, -C_I], [C_I, C_ZERO]])
}

/// Pauli σz.
pub fn sigma_z() -> Mat2 {
    Mat2::new([[C_ONE, C_ZERO], [C_ZERO, -C_ONE]])
}

/// n·σ for a real 3-vector n (Hermitian).
pub fn sigma_dot(n: [f64; 3]) -> Mat2 {
    Mat2::new([
        [
            C64::new(n[2], 0.0),
            C64::new(n[0], -n[1]),
        ],
        [
            C64::new(n[0], n[1]),
            C64::new(-n[2], 0.0),
        ],
    ])
}

impl Mat4 {
    pub const fn new(e: [[C64; 4]; 4]) -> Self {
        Self { e }
    }

    pub fn zero() -> Self {
        Self::new([[C_ZERO; 4]; 4])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            m.e[i][i] = C_ONE;
        }
        m
    }

    pub fn dagger(&self) -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            for j in 0..4 {
                m.e[i][j] = self.e[j][i].conj();
            }
        }
        m
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut m = *self;
        for row in m.e.iter_mut() {
            for v in row.iter_mut() {
                *v *= s;
            }
        }
        m
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.e
            .iter()
            .flatten()
            .map(|v| v.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (*self - self.dagger()).frobenius_norm()
    }

    pub fn mul_vec(&self, v: &State4) -> State4 {
        let mut out = [C_ZERO; 4];
        for (i, row) in self.e.iter().enumerate() {
            let mut acc = C_ZERO;
            for (k, x) in v.iter().enumerate() {
                acc += row[k] * *x;
            }
            out[i] = acc;
        }
        out
    }
}

impl Add for Mat4 {
    type Output = Mat4;
    fn add(self, rhs: Mat4) -> Mat4 {
        let mut m = self;
        for i in 0..4 {
            for j in 0..4 {
                m.e[i][j] += rhs.e[i][j];
            }
        }
        m
    }
}

impl Sub for Mat4 {
    type Output = Mat4;
    fn sub(self, rhs: Mat4) -> Mat4 {
        let mut m = self;
        for i in 0..4 {
            for j in 0..4 {
                m.e[i][j] -= rhs.e[i][j];
            }
        }
        m
    }
}

impl Mul for Mat4 {
    type Output = Mat4;
    fn mul(self, rhs: Mat4) -> Mat4 {
        let mut m = Mat4::zero();
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = C_ZERO;
                for (k, rhs_row) in rhs.e.iter().enumerate() {
                    acc += self.e[i][k] * rhs_row[j];
                }
                m.e[i][j] = acc;
            }
        }
        m
    }
}

/// ⟨a|b⟩ with the physics convention (conjugate-linear in the first slot).
pub fn inner4(a: &State4, b: &State4) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn inner2(a: &State2, b: &State2) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm4(a: &State4) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub fn norm2(a: &State2) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub fn normalize4(a: &mut State4) {
    let n = norm4(a);
    if n > 0.0 {
        for x in a.iter_mut() {
            *x /= n;
        }
    }
}

/// Bare basis vector |i⟩ for i in 1..=4.
pub fn basis_state(i: usize) -> State4 {
    assert!((1..=4).contains(&i), "bare states are labelled 1..=4");
    let mut s = [C_ZERO; 4];
    s[i - 1] = C_ONE;
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_algebra() {
        let xy = sigma_x() * sigma_y();
        let expect = sigma_z().scale(C_I);
        assert!((xy - expect).frobenius_norm() < 1e-15);
        assert!((sigma_x() * sigma_x() - Mat2::identity()).frobenius_norm() < 1e-15);
    }

    #[test]
    fn inverse_roundtrip() {
        let m = Mat2::new([
            [C64::new(1.0, 2.0), C64::new(0.3, -0.4)],
            [C64::new(-0.7, 0.1), C64::new(2.0, -1.0)],
        ]);
        let inv = m.inverse().unwrap();
        assert!((m * inv - Mat2::identity()).frobenius_norm() < 1e-12);
    }

    #[test]
    fn op_norm_of_pauli_is_one() {
        assert!((sigma_x().op_norm() - 1.0).abs() < 1e-12);
        assert!((sigma_dot([0.6, 0.0, 0.8]).op_norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn mat4_mul_vec_matches_rows() {
        let mut h = Mat4::zero();
        h.e[0][1] = C64::new(2.0, 0.0);
        h.e[3][3] = C64::new(0.0, 1.0);
        let v = [C_ONE, C_I, C_ZERO, C_ONE];
        let out = h.mul_vec(&v);
        assert!((out[0] - C64::new(0.0, 2.0)).norm() < 1e-15);
        assert!((out[3] - C_I).norm() < 1e-15);
    }
}
