//! Weierstrass representations of minimal space-like surfaces: the
//! trigonometric, hyperbolic, w- and g-forms plus the canonical g-form,
//! their validity conditions, inter-conversions and the recovery of
//! (f, g1, g2) from Phi.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::holo::{differentiate, eval_jet, format_expr, parse_expr, HoloExpr, Jet};
use crate::mink4::CVec4;

/// Proximity tolerance for the pointwise validity conditions.
pub const COND_EPS: f64 = 1e-8;

/// Rectangle in the t = u + iv parameter plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub u_min: f64,
    pub u_max: f64,
    pub v_min: f64,
    pub v_max: f64,
}

impl Domain {
    pub fn new(u_min: f64, u_max: f64, v_min: f64, v_max: f64) -> Self {
        Self { u_min, u_max, v_min, v_max }
    }

    /// The square [-1,1] x [-1,1].
    pub fn unit() -> Self {
        Self::new(-1.0, 1.0, -1.0, 1.0)
    }

    pub fn contains(&self, t: Complex64) -> bool {
        let pad = 1e-12;
        t.re >= self.u_min - pad
            && t.re <= self.u_max + pad
            && t.im >= self.v_min - pad
            && t.im <= self.v_max + pad
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(
            0.5 * (self.u_min + self.u_max),
            0.5 * (self.v_min + self.v_max),
        )
    }

    /// Bottom-left corner, the default base point for integration.
    pub fn corner(&self) -> Complex64 {
        Complex64::new(self.u_min, self.v_min)
    }
}

/// Node counts along u and v.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub nu: usize,
    pub nv: usize,
}

impl GridSpec {
    pub fn new(nu: usize, nv: usize) -> Self {
        assert!(nu >= 1 && nv >= 1, "grid must have at least one node");
        Self { nu, nv }
    }

    pub fn len(&self) -> usize {
        self.nu * self.nv
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Node (i, j): i indexes v rows, j indexes u columns.
    pub fn node(&self, d: &Domain, i: usize, j: usize) -> Complex64 {
        let fu = if self.nu > 1 {
            j as f64 / (self.nu - 1) as f64
        } else {
            0.0
        };
        let fv = if self.nv > 1 {
            i as f64 / (self.nv - 1) as f64
        } else {
            0.0
        };
        Complex64::new(
            d.u_min + fu * (d.u_max - d.u_min),
            d.v_min + fv * (d.v_max - d.v_min),
        )
    }

    /// Row-major traversal: v rows outer (bottom to top), u inner.
    pub fn points(&self, d: &Domain) -> Vec<(usize, usize, Complex64)> {
        let mut out = Vec::with_capacity(self.len());
        for i in 0..self.nv {
            for j in 0..self.nu {
                out.push((i, j, self.node(d, i, j)));
            }
        }
        out
    }
}

/// Evaluator for a component pulled back through a coordinate change; the
/// composite has no closed-form expression.
pub trait PulledFn: Send + Sync {
    fn jet(&self, t: Complex64) -> Result<Jet>;
    fn describe(&self) -> String;
}

/// One scalar ingredient of a representation: either a closed-form
/// holomorphic expression or a pulled-back composite evaluator.
#[derive(Clone)]
pub enum Component {
    Expr(HoloExpr),
    Pulled(Arc<dyn PulledFn>),
}

impl Component {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(Component::Expr(parse_expr(text)?))
    }

    pub fn jet(&self, t: Complex64) -> Result<Jet> {
        match self {
            Component::Expr(e) => eval_jet(e, t),
            Component::Pulled(p) => p.jet(t),
        }
    }

    pub fn expr(&self) -> Option<&HoloExpr> {
        match self {
            Component::Expr(e) => Some(e),
            Component::Pulled(_) => None,
        }
    }
}

impl fmt::Debug for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Component::Expr(e) => write!(f, "{}", format_expr(e)),
            Component::Pulled(p) => write!(f, "<{}>", p.describe()),
        }
    }
}

impl From<HoloExpr> for Component {
    fn from(e: HoloExpr) -> Self {
        Component::Expr(e)
    }
}

/// Tag of a representation form, used to request conversions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormKind {
    Trig,
    Hyperbolic,
    WForm,
    GForm,
    GFormCanonical,
}

impl FormKind {
    pub fn name(self) -> &'static str {
        match self {
            FormKind::Trig => "trig",
            FormKind::Hyperbolic => "hyperbolic",
            FormKind::WForm => "wform",
            FormKind::GForm => "gform",
            FormKind::GFormCanonical => "gform-canonical",
        }
    }

    /// Position on the conversion spine trig - hyperbolic - wform - gform -
    /// gform-canonical.
    fn spine_index(self) -> usize {
        match self {
            FormKind::Trig => 0,
            FormKind::Hyperbolic => 1,
            FormKind::WForm => 2,
            FormKind::GForm => 3,
            FormKind::GFormCanonical => 4,
        }
    }

    fn from_spine_index(i: usize) -> Self {
        [
            FormKind::Trig,
            FormKind::Hyperbolic,
            FormKind::WForm,
            FormKind::GForm,
            FormKind::GFormCanonical,
        ][i]
    }
}

/// The generating functions of one representation.
#[derive(Debug, Clone)]
pub enum Form {
    /// phi = (f cos h1, f sin h1, i f cos h2, f sin h2)
    Trig { f: Component, h1: Component, h2: Component },
    /// phi = (i f cosh h1, f sinh h1, f cosh h2, f sinh h2)
    Hyperbolic { f: Component, h1: Component, h2: Component },
    /// hyperbolic with h1 = (w1+w2)/2, h2 = (w1-w2)/2
    WForm { f: Component, w1: Component, w2: Component },
    /// phi = (i f (g1 g2 + 1), f (g1 g2 - 1), f (g1 + g2), f (g1 - g2))
    GForm { f: Component, g1: Component, g2: Component },
    /// g-form with f = 1 / (2 sqrt(g1' g2')) implied, so phi'^2 = 1
    GFormCanonical { g1: Component, g2: Component },
}

impl Form {
    pub fn kind(&self) -> FormKind {
        match self {
            Form::Trig { .. } => FormKind::Trig,
            Form::Hyperbolic { .. } => FormKind::Hyperbolic,
            Form::WForm { .. } => FormKind::WForm,
            Form::GForm { .. } => FormKind::GForm,
            Form::GFormCanonical { .. } => FormKind::GFormCanonical,
        }
    }
}

/// A surface described by Weierstrass data over a parameter rectangle.
#[derive(Debug, Clone)]
pub struct WeierData {
    pub form: Form,
    pub domain: Domain,
}

impl WeierData {
    pub fn new(form: Form, domain: Domain) -> Self {
        Self { form, domain }
    }

    pub fn kind(&self) -> FormKind {
        self.form.kind()
    }
}

fn jv(j: &Jet) -> Complex64 {
    j.v0
}

fn jd(j: &Jet) -> Complex64 {
    j.v1
}

/// Component jets of Phi at t. For the canonical g-form only the value and
/// the first derivative of the result are meaningful (the square root of
/// the derivative jet truncates one order).
fn phi_component_jets(w: &WeierData, t: Complex64) -> Result<[Jet; 4]> {
    let i = Jet::constant(Complex64::I);
    match &w.form {
        Form::Trig { f, h1, h2 } => {
            let (f, h1, h2) = (f.jet(t)?, h1.jet(t)?, h2.jet(t)?);
            Ok([
                f.mul(&h1.cos()),
                f.mul(&h1.sin()),
                i.mul(&f).mul(&h2.cos()),
                f.mul(&h2.sin()),
            ])
        }
        Form::Hyperbolic { f, h1, h2 } => {
            let (f, h1, h2) = (f.jet(t)?, h1.jet(t)?, h2.jet(t)?);
            Ok(hyperbolic_jets(&f, &h1, &h2))
        }
        Form::WForm { f, w1, w2 } => {
            let (f, w1, w2) = (f.jet(t)?, w1.jet(t)?, w2.jet(t)?);
            let h1 = w1.add(&w2).scale(Complex64::new(0.5, 0.0));
            let h2 = w1.sub(&w2).scale(Complex64::new(0.5, 0.0));
            Ok(hyperbolic_jets(&f, &h1, &h2))
        }
        Form::GForm { f, g1, g2 } => {
            let (f, g1, g2) = (f.jet(t)?, g1.jet(t)?, g2.jet(t)?);
            Ok(gform_jets(&f, &g1, &g2))
        }
        Form::GFormCanonical { g1, g2 } => {
            let (g1, g2) = (g1.jet(t)?, g2.jet(t)?);
            // jets of g1', g2' with the (unknown) third derivative dropped
            let dg1 = Jet::new(g1.v1, g1.v2, Complex64::ZERO);
            let dg2 = Jet::new(g2.v1, g2.v2, Complex64::ZERO);
            let q = dg1.mul(&dg2);
            if q.v0.norm() < 1e-14 {
                return Err(Error::CanonicalBranch(q.v0));
            }
            let f = Jet::constant(Complex64::new(0.5, 0.0)).div(&q.sqrt());
            Ok(gform_jets(&f, &g1, &g2))
        }
    }
}

fn hyperbolic_jets(f: &Jet, h1: &Jet, h2: &Jet) -> [Jet; 4] {
    let i = Jet::constant(Complex64::I);
    [
        i.mul(f).mul(&h1.cosh()),
        f.mul(&h1.sinh()),
        f.mul(&h2.cosh()),
        f.mul(&h2.sinh()),
    ]
}

fn gform_jets(f: &Jet, g1: &Jet, g2: &Jet) -> [Jet; 4] {
    let i = Jet::constant(Complex64::I);
    let one = Jet::constant(Complex64::ONE);
    let p = g1.mul(g2);
    [
        i.mul(f).mul(&p.add(&one)),
        f.mul(&p.sub(&one)),
        f.mul(&g1.add(g2)),
        f.mul(&g1.sub(g2)),
    ]
}

/// Phi and Phi' at t; Phi'' is deliberately not exposed because the
/// canonical g-form cannot supply it from second-order component jets.
pub fn build_phi(w: &WeierData, t: Complex64) -> Result<(CVec4, CVec4)> {
    let j = phi_component_jets(w, t)?;
    let phi = CVec4::new(jv(&j[0]), jv(&j[1]), jv(&j[2]), jv(&j[3]));
    let dphi = CVec4::new(jd(&j[0]), jd(&j[1]), jd(&j[2]), jd(&j[3]));
    Ok((phi, dphi))
}

/// Jet of q(t) = Phi'^2: value and first derivative are valid.
pub fn phi_prime_sq(w: &WeierData, t: Complex64) -> Result<Jet> {
    if let Form::GFormCanonical { g1, g2 } = &w.form {
        // identically one whenever the data are evaluable
        let (g1, g2) = (g1.jet(t)?, g2.jet(t)?);
        if (g1.v1 * g2.v1).norm() < 1e-14 {
            return Err(Error::CanonicalBranch(g1.v1 * g2.v1));
        }
        return Ok(Jet::constant(Complex64::ONE));
    }
    let j = phi_component_jets(w, t)?;
    let d: Vec<Jet> = j
        .iter()
        .map(|c| Jet::new(c.v1, c.v2, Complex64::ZERO))
        .collect();
    let mut q = Jet::constant(Complex64::ZERO);
    for (k, dk) in d.iter().enumerate() {
        let sq = dk.mul(dk);
        q = if k == 3 { q.sub(&sq) } else { q.add(&sq) };
    }
    Ok(q)
}

/// Pointwise condition flags at one grid node.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NodeFlags {
    pub f_zero: bool,
    pub derivative_condition_violated: bool,
    pub hermitian_condition_violated: bool,
    pub branch_cut_crossed: bool,
    pub eval_failed: bool,
}

impl NodeFlags {
    pub fn any(&self) -> bool {
        self.f_zero
            || self.derivative_condition_violated
            || self.hermitian_condition_violated
            || self.branch_cut_crossed
            || self.eval_failed
    }
}

/// Classification of every grid node against the form's conditions.
#[derive(Debug, Clone)]
pub struct ValidityReport {
    pub nu: usize,
    pub nv: usize,
    pub flags: Vec<NodeFlags>,
    pub nodes: Vec<Complex64>,
    pub f_zero_count: usize,
    pub derivative_count: usize,
    pub hermitian_count: usize,
    pub branch_cut_count: usize,
    pub eval_failed_count: usize,
}

impl ValidityReport {
    pub fn ok(&self) -> bool {
        self.f_zero_count == 0
            && self.derivative_count == 0
            && self.hermitian_count == 0
            && self.branch_cut_count == 0
            && self.eval_failed_count == 0
    }

    pub fn violations(&self) -> impl Iterator<Item = (usize, usize, Complex64, NodeFlags)> + '_ {
        let nu = self.nu;
        self.flags
            .iter()
            .enumerate()
            .filter(|(_, fl)| fl.any())
            .map(move |(k, fl)| (k / nu, k % nu, self.nodes[k], *fl))
    }
}

/// Distance of x to the nearest pi/2 + k pi.
fn dist_to_half_pi(x: f64) -> f64 {
    use std::f64::consts::PI;
    let r = (x - PI / 2.0).rem_euclid(PI);
    r.min(PI - r)
}

/// Distance of x to the nearest odd multiple of pi.
fn dist_to_odd_pi(x: f64) -> f64 {
    use std::f64::consts::PI;
    let r = (x - PI).rem_euclid(2.0 * PI);
    r.min(2.0 * PI - r)
}

/// True when z lies within eps of the branch cut of the principal square
/// root / logarithm (the closed negative real axis).
fn near_branch_cut(z: Complex64, eps: f64) -> bool {
    z.norm() < eps || (z.re < 0.0 && z.im.abs() < eps * z.norm())
}

fn classify_node(w: &WeierData, t: Complex64) -> NodeFlags {
    let mut fl = NodeFlags::default();
    let eps = COND_EPS;
    let res: Result<()> = (|| {
        match &w.form {
            Form::Trig { f, h1, h2 } => {
                let (f, h1, h2) = (f.jet(t)?.v0, h1.jet(t)?.v0, h2.jet(t)?.v0);
                fl.f_zero = f.norm() < eps;
                fl.hermitian_condition_violated =
                    h1.im.abs() < eps && dist_to_half_pi(h2.re) < eps;
            }
            Form::Hyperbolic { f, h1, h2 } => {
                let (f, h1, h2) = (f.jet(t)?.v0, h1.jet(t)?.v0, h2.jet(t)?.v0);
                fl.f_zero = f.norm() < eps;
                fl.hermitian_condition_violated =
                    h1.re.abs() < eps && dist_to_half_pi(h2.im) < eps;
            }
            Form::WForm { f, w1, w2 } => {
                let (f, w1, w2) = (f.jet(t)?.v0, w1.jet(t)?.v0, w2.jet(t)?.v0);
                fl.f_zero = f.norm() < eps;
                let s = w1 + w2.conj();
                fl.hermitian_condition_violated =
                    s.re.abs() < eps && dist_to_odd_pi(s.im) < eps;
            }
            Form::GForm { f, g1, g2 } => {
                let (f, g1, g2) = (f.jet(t)?.v0, g1.jet(t)?.v0, g2.jet(t)?.v0);
                fl.f_zero = f.norm() < eps;
                fl.hermitian_condition_violated =
                    (Complex64::ONE + g1 * g2.conj()).norm() < eps;
            }
            Form::GFormCanonical { g1, g2 } => {
                let (g1, g2) = (g1.jet(t)?, g2.jet(t)?);
                let q = g1.v1 * g2.v1;
                fl.derivative_condition_violated = q.norm() < eps;
                fl.hermitian_condition_violated =
                    (Complex64::ONE + g1.v0 * g2.v0.conj()).norm() < eps;
                fl.branch_cut_crossed = near_branch_cut(q, eps);
            }
        }
        Ok(())
    })();
    if res.is_err() {
        fl.eval_failed = true;
    }
    fl
}

/// Classify every node of the grid; failures are reported, never raised.
pub fn validate(w: &WeierData, grid: GridSpec) -> ValidityReport {
    let pts = grid.points(&w.domain);
    let mut flags = Vec::with_capacity(pts.len());
    let mut nodes = Vec::with_capacity(pts.len());
    for (_, _, t) in &pts {
        flags.push(classify_node(w, *t));
        nodes.push(*t);
    }
    let count = |pick: fn(&NodeFlags) -> bool| flags.iter().filter(|f| pick(f)).count();
    ValidityReport {
        nu: grid.nu,
        nv: grid.nv,
        f_zero_count: count(|f| f.f_zero),
        derivative_count: count(|f| f.derivative_condition_violated),
        hermitian_count: count(|f| f.hermitian_condition_violated),
        branch_cut_count: count(|f| f.branch_cut_crossed),
        eval_failed_count: count(|f| f.eval_failed),
        flags,
        nodes,
    }
}

fn lit(re: f64, im: f64) -> HoloExpr {
    HoloExpr::Lit(Complex64::new(re, im))
}

fn arc(e: HoloExpr) -> Arc<HoloExpr> {
    Arc::new(e)
}

fn mul(a: HoloExpr, b: HoloExpr) -> HoloExpr {
    HoloExpr::Mul(arc(a), arc(b))
}

fn add(a: HoloExpr, b: HoloExpr) -> HoloExpr {
    HoloExpr::Add(arc(a), arc(b))
}

fn sub(a: HoloExpr, b: HoloExpr) -> HoloExpr {
    HoloExpr::Sub(arc(a), arc(b))
}

fn div(a: HoloExpr, b: HoloExpr) -> HoloExpr {
    HoloExpr::Div(arc(a), arc(b))
}

fn apply(f: crate::holo::Func, a: HoloExpr) -> HoloExpr {
    HoloExpr::Apply(f, arc(a))
}

fn expr_of(c: &Component, from: FormKind, to: FormKind) -> Result<HoloExpr> {
    c.expr().cloned().ok_or(Error::UnsupportedDirection {
        from: from.name().to_string(),
        to: to.name().to_string(),
    })
}

/// One step along the conversion spine (adjacent forms only).
fn convert_step(w: &WeierData, target: FormKind) -> Result<WeierData> {
    use crate::holo::Func;
    use std::f64::consts::PI;
    let from = w.kind();
    let ex = |c: &Component| expr_of(c, from, target);
    let form = match (&w.form, target) {
        // substitution f -> -i f, h1 -> i h1, h2 -> -i (h2 - pi)
        (Form::Trig { f, h1, h2 }, FormKind::Hyperbolic) => Form::Hyperbolic {
            f: mul(lit(0.0, -1.0), ex(f)?).into(),
            h1: mul(lit(0.0, 1.0), ex(h1)?).into(),
            h2: mul(lit(0.0, -1.0), sub(ex(h2)?, lit(PI, 0.0))).into(),
        },
        // substitution f -> i f, h1 -> -i h1, h2 -> pi + i h2
        (Form::Hyperbolic { f, h1, h2 }, FormKind::Trig) => Form::Trig {
            f: mul(lit(0.0, 1.0), ex(f)?).into(),
            h1: mul(lit(0.0, -1.0), ex(h1)?).into(),
            h2: add(lit(PI, 0.0), mul(lit(0.0, 1.0), ex(h2)?)).into(),
        },
        // w1 = h1 + h2, w2 = h1 - h2 (exact)
        (Form::Hyperbolic { f, h1, h2 }, FormKind::WForm) => Form::WForm {
            f: f.clone(),
            w1: add(ex(h1)?, ex(h2)?).into(),
            w2: sub(ex(h1)?, ex(h2)?).into(),
        },
        (Form::WForm { f, w1, w2 }, FormKind::Hyperbolic) => Form::Hyperbolic {
            f: f.clone(),
            h1: div(add(ex(w1)?, ex(w2)?), lit(2.0, 0.0)).into(),
            h2: div(sub(ex(w1)?, ex(w2)?), lit(2.0, 0.0)).into(),
        },
        // g_i = e^{w_i}; the W5 coefficient becomes f e^{-(w1+w2)/2} / 2,
        // which absorbs the square root without a branch choice
        (Form::WForm { f, w1, w2 }, FormKind::GForm) => {
            let half_sum = div(add(ex(w1)?, ex(w2)?), lit(2.0, 0.0));
            Form::GForm {
                f: div(
                    mul(ex(f)?, apply(Func::Exp, sub(lit(0.0, 0.0), half_sum))),
                    lit(2.0, 0.0),
                )
                .into(),
                g1: apply(Func::Exp, ex(w1)?).into(),
                g2: apply(Func::Exp, ex(w2)?).into(),
            }
        }
        // w_i = log g_i on the principal branch; refused when g_i meets the cut
        (Form::GForm { f, g1, g2 }, FormKind::WForm) => {
            let (g1e, g2e) = (ex(g1)?, ex(g2)?);
            let grid = GridSpec::new(21, 21);
            for (_, _, t) in grid.points(&w.domain) {
                for g in [&g1e, &g2e] {
                    let v = eval_jet(g, t)?.v0;
                    if near_branch_cut(v, COND_EPS) {
                        return Err(Error::NeedsLogBranch);
                    }
                }
            }
            let half_sum = div(
                add(apply(Func::Log, g1e.clone()), apply(Func::Log, g2e.clone())),
                lit(2.0, 0.0),
            );
            Form::WForm {
                f: mul(mul(lit(2.0, 0.0), ex(f)?), apply(Func::Exp, half_sum)).into(),
                w1: apply(Func::Log, g1e).into(),
                w2: apply(Func::Log, g2e).into(),
            }
        }
        // drop f after checking 4 f^2 g1' g2' = 1 on a grid
        (Form::GForm { f, g1, g2 }, FormKind::GFormCanonical) => {
            let grid = GridSpec::new(11, 11);
            let mut worst = 0.0f64;
            for (_, _, t) in grid.points(&w.domain) {
                let fv = f.jet(t)?.v0;
                let (j1, j2) = (g1.jet(t)?, g2.jet(t)?);
                let q = 4.0 * fv * fv * j1.v1 * j2.v1;
                worst = worst.max((q - Complex64::ONE).norm());
            }
            if worst > COND_EPS {
                return Err(Error::NotCanonical(worst));
            }
            Form::GFormCanonical { g1: g1.clone(), g2: g2.clone() }
        }
        // reinstate f = 1 / (2 sqrt(g1' g2')) as a closed form
        (Form::GFormCanonical { g1, g2 }, FormKind::GForm) => {
            let (g1e, g2e) = (ex(g1)?, ex(g2)?);
            let q = mul(differentiate(&g1e), differentiate(&g2e));
            Form::GForm {
                f: div(lit(1.0, 0.0), mul(lit(2.0, 0.0), apply(Func::Sqrt, q))).into(),
                g1: g1e.into(),
                g2: g2e.into(),
            }
        }
        _ => {
            return Err(Error::UnsupportedDirection {
                from: from.name().to_string(),
                to: target.name().to_string(),
            })
        }
    };
    Ok(WeierData::new(form, w.domain))
}

/// Convert between representation forms along the spine
/// trig - hyperbolic - wform - gform - gform-canonical. The returned data
/// generates the same Phi at every domain point.
pub fn convert(w: &WeierData, target: FormKind) -> Result<WeierData> {
    let mut cur = w.clone();
    let mut at = cur.kind().spine_index();
    let goal = target.spine_index();
    while at != goal {
        let next = if goal > at { at + 1 } else { at - 1 };
        cur = convert_step(&cur, FormKind::from_spine_index(next))?;
        at = next;
    }
    Ok(cur)
}

/// Recover the g-form triple from a single Phi value.
pub fn recover_fg(phi: &CVec4) -> Result<(Complex64, Complex64, Complex64)> {
    let den = Complex64::I * phi.c[0] + phi.c[1];
    if den.norm() < 1e-12 {
        return Err(Error::SingularRecovery(den.norm()));
    }
    let f = -den / 2.0;
    let g1 = -(phi.c[2] + phi.c[3]) / den;
    let g2 = -(phi.c[2] - phi.c[3]) / den;
    Ok((f, g1, g2))
}
