//! Truncated power-series arithmetic to order 2: value, first and second
//! derivative at a point. Products and compositions follow the Leibniz and
//! chain rules, so derivatives are exact to machine precision.

use num_complex::Complex64;

/// Value, first derivative and second derivative of a holomorphic function
/// at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub v0: Complex64,
    pub v1: Complex64,
    pub v2: Complex64,
}

impl Jet {
    pub fn constant(z: Complex64) -> Self {
        Jet {
            v0: z,
            v1: Complex64::ZERO,
            v2: Complex64::ZERO,
        }
    }

    /// The identity function t at the point t.
    pub fn variable(t: Complex64) -> Self {
        Jet {
            v0: t,
            v1: Complex64::ONE,
            v2: Complex64::ZERO,
        }
    }

    pub fn new(v0: Complex64, v1: Complex64, v2: Complex64) -> Self {
        Jet { v0, v1, v2 }
    }

    pub fn neg(&self) -> Self {
        Jet::new(-self.v0, -self.v1, -self.v2)
    }

    pub fn add(&self, o: &Jet) -> Self {
        Jet::new(self.v0 + o.v0, self.v1 + o.v1, self.v2 + o.v2)
    }

    pub fn sub(&self, o: &Jet) -> Self {
        Jet::new(self.v0 - o.v0, self.v1 - o.v1, self.v2 - o.v2)
    }

    pub fn mul(&self, o: &Jet) -> Self {
        Jet::new(
            self.v0 * o.v0,
            self.v1 * o.v0 + self.v0 * o.v1,
            self.v2 * o.v0 + 2.0 * self.v1 * o.v1 + self.v0 * o.v2,
        )
    }

    /// Quotient; the caller checks the denominator against zero.
    pub fn div(&self, o: &Jet) -> Self {
        let q0 = self.v0 / o.v0;
        let q1 = (self.v1 - q0 * o.v1) / o.v0;
        let q2 = (self.v2 - 2.0 * q1 * o.v1 - q0 * o.v2) / o.v0;
        Jet::new(q0, q1, q2)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Jet::new(self.v0 * s, self.v1 * s, self.v2 * s)
    }

    /// Compose an elementary function given its value and first two
    /// derivatives at `self.v0`.
    fn chain(&self, f0: Complex64, f1: Complex64, f2: Complex64) -> Self {
        Jet::new(
            f0,
            f1 * self.v1,
            f2 * self.v1 * self.v1 + f1 * self.v2,
        )
    }

    pub fn exp(&self) -> Self {
        let e = self.v0.exp();
        self.chain(e, e, e)
    }

    /// Principal branch.
    pub fn ln(&self) -> Self {
        let z = self.v0;
        self.chain(z.ln(), 1.0 / z, -1.0 / (z * z))
    }

    /// Principal branch.
    pub fn sqrt(&self) -> Self {
        let r = self.v0.sqrt();
        self.chain(r, 0.5 / r, -0.25 / (r * self.v0))
    }

    pub fn sin(&self) -> Self {
        let (s, c) = (self.v0.sin(), self.v0.cos());
        self.chain(s, c, -s)
    }

    pub fn cos(&self) -> Self {
        let (s, c) = (self.v0.sin(), self.v0.cos());
        self.chain(c, -s, -c)
    }

    pub fn sinh(&self) -> Self {
        let (s, c) = (self.v0.sinh(), self.v0.cosh());
        self.chain(s, c, s)
    }

    pub fn cosh(&self) -> Self {
        let (s, c) = (self.v0.sinh(), self.v0.cosh());
        self.chain(c, s, c)
    }

    /// Integer power, including negative exponents (caller checks zero base
    /// for n < 0).
    pub fn powi(&self, n: i32) -> Self {
        let z = self.v0;
        let nf = n as f64;
        let f0 = z.powi(n);
        let f1 = nf * z.powi(n - 1);
        let f2 = nf * (nf - 1.0) * z.powi(n - 2);
        self.chain(f0, f1, f2)
    }
}
