//! Complex-linear algebra over C^4 with the Minkowski signature (+,+,+,-).
//!
//! Hosts the vector function Phi and everything derived from it: the
//! bilinear and Hermitian indefinite products, the bivector norm, 4x4
//! determinants and the tangent/normal projection of Phi'.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const TOL: f64 = 1e-10;

/// A vector in C^4 with the Minkowski signature on the fourth slot.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CVec4 {
    pub c: [Complex64; 4],
}

impl CVec4 {
    pub fn new(c1: Complex64, c2: Complex64, c3: Complex64, c4: Complex64) -> Self {
        Self { c: [c1, c2, c3, c4] }
    }

    pub fn from_real(r: [f64; 4]) -> Self {
        Self {
            c: r.map(|x| Complex64::new(x, 0.0)),
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn basis(k: usize) -> Self {
        let mut v = Self::zero();
        v.c[k] = Complex64::ONE;
        v
    }

    pub fn conj(&self) -> Self {
        Self {
            c: self.c.map(|z| z.conj()),
        }
    }

    pub fn re(&self) -> Self {
        Self {
            c: self.c.map(|z| Complex64::new(z.re, 0.0)),
        }
    }

    pub fn im(&self) -> Self {
        Self {
            c: self.c.map(|z| Complex64::new(z.im, 0.0)),
        }
    }

    pub fn real_parts(&self) -> [f64; 4] {
        self.c.map(|z| z.re)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            c: self.c.map(|z| z * s),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        Self {
            c: [
                self.c[0] + o.c[0],
                self.c[1] + o.c[1],
                self.c[2] + o.c[2],
                self.c[3] + o.c[3],
            ],
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self {
            c: [
                self.c[0] - o.c[0],
                self.c[1] - o.c[1],
                self.c[2] - o.c[2],
                self.c[3] - o.c[3],
            ],
        }
    }

    /// Max component magnitude, used to scale tolerances.
    pub fn max_abs(&self) -> f64 {
        self.c.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// The indefinite bilinear product a1*b1 + a2*b2 + a3*b3 - a4*b4,
/// extended complex-bilinearly.
pub fn bilinear_dot(a: &CVec4, b: &CVec4) -> Complex64 {
    a.c[0] * b.c[0] + a.c[1] * b.c[1] + a.c[2] * b.c[2] - a.c[3] * b.c[3]
}

/// The indefinite Hermitian product a . conj(b). `hermitian_dot(a, a)` is real;
/// callers read it through [`norm_sq`].
pub fn hermitian_dot(a: &CVec4, b: &CVec4) -> Complex64 {
    bilinear_dot(a, &b.conj())
}

/// ||a||^2 = a . conj(a), real but possibly negative.
pub fn norm_sq(a: &CVec4) -> f64 {
    hermitian_dot(a, a).re
}

/// Squared norm of the bivector a ^ b: ||a||^2 ||b||^2 - |conj(a) . b|^2.
pub fn wedge_norm_sq(a: &CVec4, b: &CVec4) -> f64 {
    norm_sq(a) * norm_sq(b) - hermitian_dot(b, a).norm_sqr()
}

/// Determinant of the column matrix [a b c d] in the standard basis of C^4.
pub fn det4(a: &CVec4, b: &CVec4, c: &CVec4, d: &CVec4) -> Complex64 {
    let cols = [a.c, b.c, c.c, d.c];
    // cofactor expansion along the first column
    let minor3 = |rows: [usize; 3]| -> Complex64 {
        let m = |i: usize, j: usize| cols[j + 1][rows[i]];
        m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
            - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
            + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
    };
    cols[0][0] * minor3([1, 2, 3]) - cols[0][1] * minor3([0, 2, 3])
        + cols[0][2] * minor3([0, 1, 3])
        - cols[0][3] * minor3([0, 1, 2])
}

/// Normal projection of Phi': Phi' - ((Phi' . conj(Phi)) / ||Phi||^2) Phi.
///
/// Requires Phi^2 = 0 (isothermal) and ||Phi||^2 > 0 (space-like metric).
pub fn normal_project(phi: &CVec4, dphi: &CVec4) -> Result<CVec4> {
    let scale = phi.max_abs().max(1.0);
    let phi2 = bilinear_dot(phi, phi);
    if phi2.norm() > TOL * scale * scale {
        return Err(Error::NotIsothermal(phi2.norm()));
    }
    let n2 = norm_sq(phi);
    if n2 <= 0.0 {
        return Err(Error::DegenerateMetric(n2));
    }
    let coef = hermitian_dot(dphi, phi) / n2;
    Ok(dphi.sub(&phi.scale(coef)))
}
