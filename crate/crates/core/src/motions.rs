//! Motions of R^4_1 realized on Weierstrass data: the Hermitian-matrix
//! encoding of vectors, the spinor homomorphism SL(2,C) -> SO+(3,1), the
//! Moebius action on the generating pair (g1, g2) with its f-rule, the
//! improper and non-orthochronous variants, and numerical congruence
//! verification between two surfaces.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector, Matrix2, Matrix4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::holo::{HoloExpr, Jet};
use crate::mink4::CVec4;
use crate::surface::integrate_psi;
use crate::weier::{build_phi, Component, Form, GridSpec, PulledFn, WeierData};

/// An element of SL(2,C): det = 1 to 1e-12.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SL2 {
    pub m: Matrix2<Complex64>,
}

impl SL2 {
    /// Accepts a matrix that is already unimodular.
    pub fn new(m: Matrix2<Complex64>) -> Result<Self> {
        let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
        if (det - Complex64::ONE).norm() > 1e-12 {
            return Err(Error::NotUnimodular((det - Complex64::ONE).norm()));
        }
        Ok(Self { m })
    }

    /// Scales an invertible matrix by the principal square root of its
    /// determinant; the leftover sign ambiguity sits in the kernel of the
    /// spinor map.
    pub fn normalize(m: Matrix2<Complex64>) -> Result<Self> {
        let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
        if det.norm() < 1e-12 {
            return Err(Error::SingularMatrix);
        }
        let s = det.sqrt();
        Ok(Self { m: m / s })
    }

    pub fn identity() -> Self {
        Self {
            m: Matrix2::identity(),
        }
    }

    pub fn mul(&self, other: &SL2) -> Self {
        Self {
            m: self.m * other.m,
        }
    }
}

/// An element of O(3,1) with its component tags.
#[derive(Debug, Clone, PartialEq)]
pub struct SO31 {
    pub m: Matrix4<f64>,
    pub proper: bool,
    pub orthochronous: bool,
}

const ETA: [f64; 4] = [1.0, 1.0, 1.0, -1.0];

impl SO31 {
    /// Checks A^T eta A = eta to 1e-10 and tags the component.
    pub fn new(m: Matrix4<f64>) -> Result<Self> {
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = 0.0;
                for k in 0..4 {
                    acc += m[(k, i)] * ETA[k] * m[(k, j)];
                }
                let want = if i == j { ETA[i] } else { 0.0 };
                if (acc - want).abs() > 1e-10 {
                    return Err(Error::Config(format!(
                        "matrix does not preserve the metric: entry ({i},{j}) off by {}",
                        acc - want
                    )));
                }
            }
        }
        let det = m.determinant();
        Ok(Self {
            m,
            proper: det > 0.0,
            orthochronous: m[(3, 3)] >= 1.0 - 1e-10,
        })
    }

    pub fn identity() -> Self {
        Self {
            m: Matrix4::identity(),
            proper: true,
            orthochronous: true,
        }
    }

    pub fn apply_real(&self, x: [f64; 4]) -> [f64; 4] {
        let mut out = [0.0; 4];
        for i in 0..4 {
            for j in 0..4 {
                out[i] += self.m[(i, j)] * x[j];
            }
        }
        out
    }

    pub fn apply(&self, v: &CVec4) -> CVec4 {
        let mut out = [Complex64::ZERO; 4];
        for i in 0..4 {
            for j in 0..4 {
                out[i] += self.m[(i, j)] * v.c[j];
            }
        }
        CVec4::new(out[0], out[1], out[2], out[3])
    }

    pub fn compose(&self, other: &SO31) -> SO31 {
        SO31 {
            m: self.m * other.m,
            proper: self.proper == other.proper,
            orthochronous: !(self.orthochronous ^ other.orthochronous),
        }
    }
}

/// The Hermitian matrix associated to a vector:
/// S = [[x3 + x4, i x1 + x2], [-i x1 + x2, -x3 + x4]], det S = -x^2.
pub fn s_matrix(x: &CVec4) -> Matrix2<Complex64> {
    let [x1, x2, x3, x4] = x.c;
    let i = Complex64::I;
    Matrix2::new(x3 + x4, i * x1 + x2, -i * x1 + x2, -x3 + x4)
}

/// Inverse of the association, recovering the vector from its matrix.
pub fn s_matrix_inv(s: &Matrix2<Complex64>) -> CVec4 {
    let (s11, s12, s21, s22) = (s[(0, 0)], s[(0, 1)], s[(1, 0)], s[(1, 1)]);
    let i = Complex64::I;
    CVec4::new(
        (s12 - s21) / (2.0 * i),
        0.5 * (s12 + s21),
        0.5 * (s11 - s22),
        0.5 * (s11 + s22),
    )
}

/// The spinor map: the image of S |-> A S A* on the S-encodings of the
/// basis vectors, pulled back column-wise.  Lands in SO+(3,1); the kernel
/// is {+-I}.
pub fn spinor_to_so31(a: &SL2) -> Result<SO31> {
    let astar = a.m.map(|z| z.conj()).transpose();
    let mut m = Matrix4::zeros();
    for k in 0..4 {
        let s = s_matrix(&CVec4::basis(k));
        let hat = a.m * s * astar;
        let col = s_matrix_inv(&hat);
        for i in 0..4 {
            debug_assert!(col.c[i].im.abs() < 1e-10, "non-real image column");
            m[(i, k)] = col.c[i].re;
        }
    }
    let out = SO31::new(m)?;
    debug_assert!(out.proper && out.orthochronous);
    Ok(out)
}

/// Which of the four components of O(3,1) the transformation sits in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MotionVariant {
    ProperOrthochronous,
    ProperNonOrthochronous,
    ImproperOrthochronous,
    ImproperNonOrthochronous,
}

impl MotionVariant {
    fn improper(self) -> bool {
        matches!(
            self,
            MotionVariant::ImproperOrthochronous | MotionVariant::ImproperNonOrthochronous
        )
    }

    fn non_orthochronous(self) -> bool {
        matches!(
            self,
            MotionVariant::ProperNonOrthochronous | MotionVariant::ImproperNonOrthochronous
        )
    }
}

/// The SO(3,1) element realized by `mobius_act` with the same B and
/// variant: the spinor image of A~ = [[conj a, -conj b], [-conj c, conj d]]
/// composed with the generators x -> -x (non-orthochronous) and
/// x4 -> -x4 (improper).
pub fn motion_of(b: &Matrix2<Complex64>, variant: MotionVariant) -> Result<SO31> {
    let bn = SL2::normalize(*b)?;
    let at = spinor_from_mobius(&bn);
    let mut a = spinor_to_so31(&at)?;
    if variant.improper() {
        let d = SO31 {
            m: Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, 1.0, 1.0, -1.0)),
            proper: false,
            orthochronous: true,
        };
        a = d.compose(&a);
    }
    if variant.non_orthochronous() {
        let neg = SO31 {
            m: -Matrix4::identity(),
            proper: true,
            orthochronous: false,
        };
        a = neg.compose(&a);
    }
    Ok(a)
}

/// A~ built from a unimodular B by the conjugated-entry convention.
pub fn spinor_from_mobius(b: &SL2) -> SL2 {
    let (a, bb, c, d) = (b.m[(0, 0)], b.m[(0, 1)], b.m[(1, 0)], b.m[(1, 1)]);
    SL2 {
        m: Matrix2::new(a.conj(), -bb.conj(), -c.conj(), d.conj()),
    }
}

/// Linear-fractional image of a component: (a g + b) / (c g + d).
fn fractional(
    g: &Component,
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
) -> Component {
    match g.expr() {
        Some(e) => {
            let lit = |z: Complex64| Arc::new(HoloExpr::Lit(z));
            let e = Arc::new(e.clone());
            let num = HoloExpr::Add(
                Arc::new(HoloExpr::Mul(lit(a), e.clone())),
                lit(b),
            );
            let den = HoloExpr::Add(Arc::new(HoloExpr::Mul(lit(c), e)), lit(d));
            Component::Expr(HoloExpr::Div(Arc::new(num), Arc::new(den)))
        }
        None => Component::Pulled(Arc::new(FractionalPulled {
            g: g.clone(),
            a,
            b,
            c,
            d,
        })),
    }
}

struct FractionalPulled {
    g: Component,
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
}

impl PulledFn for FractionalPulled {
    fn jet(&self, t: Complex64) -> Result<Jet> {
        let g = self.g.jet(t)?;
        let num = g.scale(self.a).add(&Jet::constant(self.b));
        let den = g.scale(self.c).add(&Jet::constant(self.d));
        if den.v0.norm() < 1e-300 {
            return Err(Error::Domain {
                expr: self.g.jet(t).map(|_| "moebius image".to_string()).unwrap_or_default(),
                t,
                msg: "pole of the moebius image".to_string(),
            });
        }
        Ok(num.div(&den))
    }

    fn describe(&self) -> String {
        format!("moebius image of {:?}", self.g)
    }
}

struct FRulePulled {
    f: Component,
    g1: Component,
    g2: Component,
    c: Complex64,
    d: Complex64,
    nb: Complex64,
    na: Complex64,
    sign: Complex64,
}

impl PulledFn for FRulePulled {
    fn jet(&self, t: Complex64) -> Result<Jet> {
        let f = self.f.jet(t)?;
        let g1 = self.g1.jet(t)?;
        let g2 = self.g2.jet(t)?;
        let left = g1.scale(self.c).add(&Jet::constant(self.d));
        let right = g2.scale(self.nb).add(&Jet::constant(self.na));
        Ok(f.mul(&left).mul(&right).scale(self.sign))
    }

    fn describe(&self) -> String {
        "f-rule of a moebius action".to_string()
    }
}

/// Applies the Moebius action of B to the generating pair: with B
/// normalized to det 1, g1 transforms by B, g2 by (B*)^{-1} and f picks up
/// the factor (c g1 + d)(-conj(b) g2 + conj(a)).  Improper variants swap
/// the transformed pair; non-orthochronous variants flip the sign of f.
pub fn mobius_act(
    w: &WeierData,
    b: &Matrix2<Complex64>,
    variant: MotionVariant,
) -> Result<WeierData> {
    let bn = SL2::normalize(*b)?;
    let (a, bb, c, d) = (bn.m[(0, 0)], bn.m[(0, 1)], bn.m[(1, 0)], bn.m[(1, 1)]);
    // a canonical g-form gets its f made explicit first: the implied
    // 1/(2 sqrt(g1' g2')) would re-pick the principal square-root branch
    // after the action, losing the sign carried by the f-rule
    let source = match &w.form {
        Form::GFormCanonical { .. } => crate::weier::convert(w, crate::weier::FormKind::GForm)?,
        _ => w.clone(),
    };
    let (f, g1, g2) = match &source.form {
        Form::GForm { f, g1, g2 } => (Some(f.clone()), g1.clone(), g2.clone()),
        _ => {
            return Err(Error::UnsupportedDirection {
                from: w.kind().name().to_string(),
                to: "moebius action (needs a g-form)".to_string(),
            })
        }
    };
    // g1 by B, g2 by (B*)^{-1} = [[conj d, -conj c], [-conj b, conj a]]
    let mut h1 = fractional(&g1, a, bb, c, d);
    let mut h2 = fractional(&g2, d.conj(), -c.conj(), -bb.conj(), a.conj());
    if variant.improper() {
        std::mem::swap(&mut h1, &mut h2);
    }
    let form = match f {
        None => Form::GFormCanonical { g1: h1, g2: h2 },
        Some(f) => {
            let sign = if variant.non_orthochronous() {
                -Complex64::ONE
            } else {
                Complex64::ONE
            };
            // closed form when every ingredient has one, so the result
            // stays serializable
            let fhat = match (f.expr(), g1.expr(), g2.expr()) {
                (Some(fe), Some(g1e), Some(g2e)) => {
                    let lit = |z: Complex64| Arc::new(HoloExpr::Lit(z));
                    let left = HoloExpr::Add(
                        Arc::new(HoloExpr::Mul(lit(c), Arc::new(g1e.clone()))),
                        lit(d),
                    );
                    let right = HoloExpr::Add(
                        Arc::new(HoloExpr::Mul(lit(-bb.conj()), Arc::new(g2e.clone()))),
                        lit(a.conj()),
                    );
                    let prod = HoloExpr::Mul(
                        Arc::new(HoloExpr::Mul(lit(sign), Arc::new(fe.clone()))),
                        Arc::new(HoloExpr::Mul(Arc::new(left), Arc::new(right))),
                    );
                    Component::Expr(prod)
                }
                _ => Component::Pulled(Arc::new(FRulePulled {
                    f,
                    g1,
                    g2,
                    c,
                    d,
                    nb: -bb.conj(),
                    na: a.conj(),
                    sign,
                })),
            };
            Form::GForm {
                f: fhat,
                g1: h1,
                g2: h2,
            }
        }
    };
    Ok(WeierData::new(form, w.domain))
}

/// Least-squares fit of hat Phi = A Phi over the real and imaginary parts
/// of the samples, then verification at every node; the translation comes
/// from matching integrated positions at the domain center.
pub fn verify_congruence(
    w1: &WeierData,
    w2: &WeierData,
    grid: GridSpec,
) -> Result<(SO31, [f64; 4])> {
    let points = grid.points(&w1.domain);
    if points.len() < 8 {
        return Err(Error::Config(
            "congruence fitting needs at least 8 sample nodes".into(),
        ));
    }
    let mut samples = Vec::with_capacity(points.len());
    let mut scale = 0.0f64;
    for &(_, _, t) in &points {
        let (p1, _) = build_phi(w1, t)?;
        let (p2, _) = build_phi(w2, t)?;
        scale = scale.max(p1.max_abs()).max(p2.max_abs());
        samples.push((p1, p2));
    }
    // one least-squares system per row of A, over 2N stacked equations
    let rows = 2 * samples.len();
    let mut design = DMatrix::zeros(rows, 4);
    for (n, (p1, _)) in samples.iter().enumerate() {
        for j in 0..4 {
            design[(2 * n, j)] = p1.c[j].re;
            design[(2 * n + 1, j)] = p1.c[j].im;
        }
    }
    let svd = design.clone().svd(true, true);
    let mut m = Matrix4::zeros();
    for i in 0..4 {
        let mut rhs = DVector::zeros(rows);
        for (n, (_, p2)) in samples.iter().enumerate() {
            rhs[2 * n] = p2.c[i].re;
            rhs[2 * n + 1] = p2.c[i].im;
        }
        let row = svd
            .solve(&rhs, 1e-12)
            .map_err(|e| Error::Config(e.to_string()))?;
        for j in 0..4 {
            m[(i, j)] = row[j];
        }
    }
    // verify the fit pointwise
    let tol = 1e-7 * scale.max(1.0);
    let mut max_residual = 0.0f64;
    let a_candidate = SO31 {
        m,
        proper: true,
        orthochronous: true,
    };
    for (p1, p2) in &samples {
        let r = a_candidate.apply(p1).sub(p2).max_abs();
        max_residual = max_residual.max(r);
    }
    if max_residual > tol {
        return Err(Error::NotCongruent(max_residual));
    }
    let a = SO31::new(m).map_err(|_| Error::NotCongruent(max_residual))?;
    // translation from the integrated positions at the domain center
    let tc = w1.domain.center();
    let x1 = integrate_psi(w1, w1.domain.corner(), tc)?.real_parts();
    let x2 = integrate_psi(w2, w2.domain.corner(), tc)?.real_parts();
    let ax1 = a.apply_real(x1);
    let mut b = [0.0; 4];
    for k in 0..4 {
        b[k] = x2[k] - ax1[k];
    }
    Ok((a, b))
}
