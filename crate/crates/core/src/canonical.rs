//! Canonical coordinates: detection, the reparametrization obtained by
//! integrating d(tilde t) = (+-Phi'^2)^{1/4} dt with a continuously tracked
//! branch of the fourth root, pulled-back representations, and the eight
//! coordinate symmetries of a canonical parameter.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::holo::{compose_affine, HoloExpr, Jet};
use crate::weier::{
    convert, phi_prime_sq, Component, Domain, Form, FormKind, GridSpec, PulledFn, WeierData,
};

/// Threshold on |Phi'^2| below which canonization refuses a point.
pub const DEGEN_TOL: f64 = 1e-10;

const NEWTON_MAX: usize = 30;
const QUAD_TOL: f64 = 1e-12;
const MAX_BISECT: u32 = 24;

/// Which sign of Phi'^2 the coordinates normalize to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CanonicalType {
    /// Phi'^2 = +1
    First,
    /// Phi'^2 = -1
    Second,
}

/// True iff |Phi'^2 -+ 1| < 1e-8 at every node of the grid.
pub fn is_canonical(w: &WeierData, grid: GridSpec, target: CanonicalType) -> bool {
    let want = match target {
        CanonicalType::First => Complex64::ONE,
        CanonicalType::Second => -Complex64::ONE,
    };
    for (_, _, t) in grid.points(&w.domain) {
        match phi_prime_sq(w, t) {
            Ok(q) => {
                if (q.v0 - want).norm() >= 1e-8 {
                    return false;
                }
            }
            Err(_) => return false,
        }
    }
    true
}

/// Fourth root of +-q on the branch nearest `near` (principal when absent).
fn root4(q: Complex64, target: CanonicalType, near: Option<Complex64>) -> Complex64 {
    let base = match target {
        CanonicalType::First => q,
        CanonicalType::Second => -q,
    }
    .powf(0.25);
    let near = match near {
        Some(r) => r,
        None => return base,
    };
    let mut best = base;
    let mut best_d = (base - near).norm();
    let mut cand = base;
    for _ in 0..3 {
        cand *= Complex64::I;
        let d = (cand - near).norm();
        if d < best_d {
            best = cand;
            best_d = d;
        }
    }
    best
}

struct MapInner {
    w: WeierData,
    t0: Complex64,
    target: CanonicalType,
    /// (t, tilde t, branch-continued root at t), chained row-major over the
    /// construction grid
    cache: Vec<(Complex64, Complex64, Complex64)>,
}

impl MapInner {
    /// GL16 over [a, b] with the root branch walked through the ordered
    /// nodes starting from `root_a`; returns the integral and the root at b.
    fn gl16_segment(
        &self,
        a: Complex64,
        b: Complex64,
        root_a: Complex64,
    ) -> Result<(Complex64, Complex64)> {
        const GL16: [(f64, f64); 8] = [
            (0.0950125098376374401853193, 0.1894506104550684962853967),
            (0.2816035507792589132304605, 0.1826034150449235888667637),
            (0.4580167776572273863424194, 0.1691565193950025381893121),
            (0.6178762444026437484466718, 0.1495959888165767320815017),
            (0.7554044083550030338951012, 0.1246289712555338720524763),
            (0.8656312023878317438804679, 0.0951585116824927848099251),
            (0.9445750230732325760779884, 0.0622535239386478928628438),
            (0.9894009349916499325961542, 0.0271524594117540948517806),
        ];
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        // ordered abscissas so the branch reference moves monotonically
        let mut nodes: Vec<(f64, f64)> = Vec::with_capacity(16);
        for (x, wt) in GL16 {
            nodes.push((-x, wt));
            nodes.push((x, wt));
        }
        nodes.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap());
        let mut acc = Complex64::ZERO;
        let mut reference = root_a;
        for (s, wt) in nodes {
            let q = phi_prime_sq(&self.w, mid + half * s)?.v0;
            let r = root4(q, self.target, Some(reference));
            acc += wt * r;
            reference = r;
        }
        let q_b = phi_prime_sq(&self.w, b)?.v0;
        let root_b = root4(q_b, self.target, Some(reference));
        Ok((acc * half, root_b))
    }

    fn integrate_adaptive(
        &self,
        a: Complex64,
        b: Complex64,
        root_a: Complex64,
        whole: Complex64,
        tol: f64,
        depth: u32,
    ) -> Result<(Complex64, Complex64)> {
        let mid = 0.5 * (a + b);
        let (left, root_mid) = self.gl16_segment(a, mid, root_a)?;
        let (right, root_b) = self.gl16_segment(mid, b, root_mid)?;
        if (left + right - whole).norm() < tol {
            return Ok((left + right, root_b));
        }
        if depth >= MAX_BISECT {
            return Err(Error::QuadratureFailure(depth));
        }
        let (l, rm) = self.integrate_adaptive(a, mid, root_a, left, 0.5 * tol, depth + 1)?;
        let (whole_r, _) = self.gl16_segment(mid, b, rm)?;
        let (r, rb) = self.integrate_adaptive(mid, b, rm, whole_r, 0.5 * tol, depth + 1)?;
        Ok((l + r, rb))
    }

    fn segment(
        &self,
        a: Complex64,
        b: Complex64,
        root_a: Complex64,
    ) -> Result<(Complex64, Complex64)> {
        if (b - a).norm() == 0.0 {
            return Ok((Complex64::ZERO, root_a));
        }
        let (whole, _) = self.gl16_segment(a, b, root_a)?;
        self.integrate_adaptive(a, b, root_a, whole, QUAD_TOL, 0)
    }

    /// Nearest cache entry to t.
    fn nearest(&self, t: Complex64) -> (Complex64, Complex64, Complex64) {
        let mut best = self.cache[0];
        let mut best_d = (best.0 - t).norm();
        for &entry in &self.cache[1..] {
            let d = (entry.0 - t).norm();
            if d < best_d {
                best = entry;
                best_d = d;
            }
        }
        best
    }

    fn forward_with_root(&self, t: Complex64) -> Result<(Complex64, Complex64)> {
        let (ta, tta, root_a) = self.nearest(t);
        let (delta, root_t) = self.segment(ta, t, root_a)?;
        Ok((tta + delta, root_t))
    }

    fn inverse(&self, tt: Complex64) -> Result<Complex64> {
        // warm start at the cache entry with the nearest image
        let mut best = self.cache[0];
        let mut best_d = (best.1 - tt).norm();
        for &entry in &self.cache[1..] {
            let d = (entry.1 - tt).norm();
            if d < best_d {
                best = entry;
                best_d = d;
            }
        }
        let mut t = best.0;
        for _ in 0..NEWTON_MAX {
            let (f, root) = self.forward_with_root(t)?;
            let residual = f - tt;
            if residual.norm() < 1e-12 * (1.0 + tt.norm()) {
                return Ok(t);
            }
            t -= residual / root;
        }
        Err(Error::NewtonDivergence(t))
    }
}

/// The canonical reparametrization tilde t(t) with tilde t(t0) = 0: forward
/// by branch-tracked adaptive quadrature, inverse by Newton iteration warm-
/// started from the construction-time sample table.
#[derive(Clone)]
pub struct CanonicalMap {
    inner: Arc<MapInner>,
}

impl CanonicalMap {
    /// Builds the map and its warm-start table over the given grid.
    pub fn new(
        w: &WeierData,
        t0: Complex64,
        target: CanonicalType,
        grid: GridSpec,
    ) -> Result<Self> {
        check_degenerate(w, grid)?;
        let q0 = phi_prime_sq(w, t0)?.v0;
        if q0.norm() < DEGEN_TOL {
            return Err(degenerate_at(w, t0));
        }
        let root0 = root4(q0, target, None);
        let mut inner = MapInner {
            w: w.clone(),
            t0,
            target,
            cache: vec![(t0, Complex64::ZERO, root0)],
        };
        // chain the table row-major so each segment is short and the branch
        // reference stays close
        let mut cache = Vec::with_capacity(grid.len() + 1);
        let mut row = (t0, Complex64::ZERO, root0);
        for i in 0..grid.nv {
            let first = grid.node(&w.domain, i, 0);
            let (d, r) = inner.segment(row.0, first, row.2)?;
            row = (first, row.1 + d, r);
            let mut prev = row;
            cache.push(row);
            for j in 1..grid.nu {
                let t = grid.node(&w.domain, i, j);
                let (d, r) = inner.segment(prev.0, t, prev.2)?;
                prev = (t, prev.1 + d, r);
                cache.push(prev);
            }
        }
        cache.push((t0, Complex64::ZERO, root0));
        inner.cache = cache;
        Ok(Self {
            inner: Arc::new(inner),
        })
    }

    pub fn t0(&self) -> Complex64 {
        self.inner.t0
    }

    pub fn target(&self) -> CanonicalType {
        self.inner.target
    }

    /// tilde t(t).
    pub fn forward(&self, t: Complex64) -> Result<Complex64> {
        Ok(self.inner.forward_with_root(t)?.0)
    }

    /// d tilde t / dt = (+-Phi'^2)^{1/4} on the continued branch.
    pub fn derivative(&self, t: Complex64) -> Result<Complex64> {
        Ok(self.inner.forward_with_root(t)?.1)
    }

    /// t(tilde t) by Newton iteration.
    pub fn inverse(&self, tt: Complex64) -> Result<Complex64> {
        self.inner.inverse(tt)
    }
}

impl std::fmt::Debug for CanonicalMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "CanonicalMap {{ t0: {}, target: {:?} }}",
            self.inner.t0, self.inner.target
        )
    }
}

fn degenerate_at(w: &WeierData, t: Complex64) -> Error {
    Error::DegeneratePoint {
        t,
        order: estimate_order(w, t),
    }
}

/// Multiplicity of the zero of Phi'^2 at t from the growth of its mean
/// modulus on two small circles.
fn estimate_order(w: &WeierData, t: Complex64) -> u32 {
    let mean = |radius: f64| -> Option<f64> {
        let mut acc = 0.0;
        let n = 16;
        for k in 0..n {
            let angle = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            let z = t + Complex64::from_polar(radius, angle);
            acc += phi_prime_sq(w, z).ok()?.v0.norm();
        }
        Some(acc / n as f64)
    };
    match (mean(0.05), mean(0.1)) {
        (Some(m1), Some(m2)) if m1 > 0.0 && m2 > 0.0 => {
            ((m2 / m1).ln() / 2f64.ln()).round().max(1.0) as u32
        }
        _ => 1,
    }
}

fn check_degenerate(w: &WeierData, grid: GridSpec) -> Result<()> {
    for (_, _, t) in grid.points(&w.domain) {
        let q = phi_prime_sq(w, t)?;
        if q.v0.norm() < DEGEN_TOL {
            return Err(degenerate_at(w, t));
        }
    }
    Ok(())
}

/// g_i(t(s)) evaluated through the inverse map; the second derivative of
/// the jet is taken with t'''(s) dropped, consistent with the one-order
/// truncation of the canonical g-form.
struct PulledThroughMap {
    map: Arc<MapInner>,
    component: Component,
    label: String,
    /// extra factor t'(s) applied to the value (used for a pulled-back f)
    times_tprime: bool,
}

impl PulledThroughMap {
    /// (t, t'(s), t''(s)) at the parameter s of the canonical chart.
    fn chart_jets(&self, s: Complex64) -> Result<(Complex64, Complex64, Complex64)> {
        let t = self.map.inverse(s)?;
        let (_, h) = self.map.forward_with_root(t)?;
        // h^4 = +-q, so h' = +-q' / (4 h^3) and t'' = -h'/h^3
        let q = phi_prime_sq(&self.map.w, t)?;
        let sign = match self.map.target {
            CanonicalType::First => Complex64::ONE,
            CanonicalType::Second => -Complex64::ONE,
        };
        let dh = sign * q.v1 / (4.0 * h.powi(3));
        let t1 = 1.0 / h;
        let t2 = -dh / h.powi(3);
        Ok((t, t1, t2))
    }
}

impl PulledFn for PulledThroughMap {
    fn jet(&self, s: Complex64) -> Result<Jet> {
        let (t, t1, t2) = self.chart_jets(s)?;
        let g = self.component.jet(t)?;
        let v0 = g.v0;
        let v1 = g.v1 * t1;
        let v2 = g.v2 * t1 * t1 + g.v1 * t2;
        let j = Jet::new(v0, v1, v2);
        if self.times_tprime {
            // f(t(s)) t'(s) with t'''(s) unavailable at second order
            Ok(Jet::new(
                j.v0 * t1,
                j.v1 * t1 + j.v0 * t2,
                Complex64::ZERO,
            ))
        } else {
            Ok(j)
        }
    }

    fn describe(&self) -> String {
        self.label.clone()
    }
}

/// Canonize: build the reparametrization from base point t0 and pull the
/// representation back through it.  First-type output is a canonical
/// g-form; second-type output keeps the factor f = f(t(s)) t'(s) explicit
/// because the canonical g-form pins Phi'^2 to +1.
pub fn canonize(
    w: &WeierData,
    t0: Complex64,
    target: CanonicalType,
) -> Result<(CanonicalMap, WeierData)> {
    let grid = GridSpec::new(21, 21);
    let map = CanonicalMap::new(w, t0, target, grid)?;
    let source = match w.kind() {
        FormKind::GForm | FormKind::GFormCanonical => w.clone(),
        _ => convert(w, FormKind::GForm)?,
    };
    let (f, g1, g2) = match &source.form {
        Form::GForm { f, g1, g2 } => (Some(f.clone()), g1.clone(), g2.clone()),
        Form::GFormCanonical { g1, g2 } => (None, g1.clone(), g2.clone()),
        _ => unreachable!(),
    };
    let pull = |component: Component, label: &str, times_tprime: bool| -> Component {
        Component::Pulled(Arc::new(PulledThroughMap {
            map: map.inner.clone(),
            component,
            label: label.to_string(),
            times_tprime,
        }))
    };
    let form = match target {
        CanonicalType::First => Form::GFormCanonical {
            g1: pull(g1, "g1 o t(s)", false),
            g2: pull(g2, "g2 o t(s)", false),
        },
        CanonicalType::Second => {
            // explicit f so that Phi'^2 = -1 survives; a missing f means
            // the canonical implied 1/(2 sqrt(g1' g2'))
            let f = match f {
                Some(f) => f,
                None => implied_f(&g1, &g2)?,
            };
            Form::GForm {
                f: pull(f, "f o t(s) * t'(s)", true),
                g1: pull(g1, "g1 o t(s)", false),
                g2: pull(g2, "g2 o t(s)", false),
            }
        }
    };
    let domain = mapped_domain(&map);
    Ok((map, WeierData::new(form, domain)))
}

/// f = 1 / (2 sqrt(g1' g2')) as a closed-form expression.
fn implied_f(g1: &Component, g2: &Component) -> Result<Component> {
    use crate::holo::differentiate;
    match (g1.expr(), g2.expr()) {
        (Some(e1), Some(e2)) => {
            let product = HoloExpr::Mul(
                Arc::new(differentiate(e1)),
                Arc::new(differentiate(e2)),
            );
            let f = HoloExpr::Div(
                Arc::new(HoloExpr::lit(1.0)),
                Arc::new(HoloExpr::Mul(
                    Arc::new(HoloExpr::lit(2.0)),
                    Arc::new(HoloExpr::Apply(crate::holo::Func::Sqrt, Arc::new(product))),
                )),
            );
            Ok(Component::Expr(f))
        }
        _ => Err(Error::Config(
            "cannot differentiate a pulled-back component symbolically".into(),
        )),
    }
}

/// Axis-aligned box spanned by the cached images, shrunk slightly so the
/// Newton inverse stays inside well-sampled territory.
fn mapped_domain(map: &CanonicalMap) -> Domain {
    let mut u = (f64::INFINITY, f64::NEG_INFINITY);
    let mut v = (f64::INFINITY, f64::NEG_INFINITY);
    for &(_, tt, _) in &map.inner.cache {
        u = (u.0.min(tt.re), u.1.max(tt.re));
        v = (v.0.min(tt.im), v.1.max(tt.im));
    }
    let (cu, cv) = (0.5 * (u.0 + u.1), 0.5 * (v.0 + v.1));
    let s = 0.999;
    Domain::new(
        cu + s * (u.0 - cu),
        cu + s * (u.1 - cu),
        cv + s * (v.0 - cv),
        cv + s * (v.1 - cv),
    )
}

/// One of the eight parameter symmetries of a canonical chart:
/// t = factor * tilde t (factor^4 = 1), optionally conjugated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeckTransform {
    pub factor: Complex64,
    /// antiholomorphic variant; marks orientation reversal
    pub conjugate: bool,
}

impl DeckTransform {
    pub fn apply(&self, t: Complex64) -> Complex64 {
        let t = if self.conjugate { t.conj() } else { t };
        self.factor * t
    }

    pub fn is_identity(&self) -> bool {
        !self.conjugate && (self.factor - Complex64::ONE).norm() < 1e-15
    }
}

/// The eight transforms with zero offset: +-1, +-i times the parameter,
/// plus the four conjugated variants.  The same list serves both types.
pub fn deck_transforms(_target: CanonicalType) -> Vec<DeckTransform> {
    let mut out = Vec::with_capacity(8);
    for conjugate in [false, true] {
        let mut factor = Complex64::ONE;
        for _ in 0..4 {
            out.push(DeckTransform { factor, conjugate });
            factor *= Complex64::I;
        }
    }
    out
}

/// A component precomposed with t = a s and scaled by a constant.
struct AffinePulled {
    component: Component,
    a: Complex64,
    scale: Complex64,
}

impl PulledFn for AffinePulled {
    fn jet(&self, s: Complex64) -> Result<Jet> {
        let j = self.component.jet(self.a * s)?;
        Ok(Jet::new(
            self.scale * j.v0,
            self.scale * j.v1 * self.a,
            self.scale * j.v2 * self.a * self.a,
        ))
    }

    fn describe(&self) -> String {
        format!("{:?} o ({} * s)", self.component, self.a)
    }
}

pub(crate) fn precompose(component: &Component, a: Complex64, scale: Complex64) -> Component {
    match component.expr() {
        Some(e) => {
            let composed = compose_affine(e, a, Complex64::ZERO);
            if (scale - Complex64::ONE).norm() < 1e-15 {
                Component::Expr(composed)
            } else {
                Component::Expr(HoloExpr::Mul(
                    Arc::new(HoloExpr::Lit(scale)),
                    Arc::new(composed),
                ))
            }
        }
        None => Component::Pulled(Arc::new(AffinePulled {
            component: component.clone(),
            a,
            scale,
        })),
    }
}

/// Exchange first- and second-type canonical coordinates by the rotation
/// t = e^{+-i pi/4} s.  The output keeps f explicit (as a g-form) so that
/// Phi'^2 = -1 is representable.
pub fn type_switch(w: &WeierData) -> Result<WeierData> {
    let grid = GridSpec::new(11, 11);
    let current = if is_canonical(w, grid, CanonicalType::First) {
        CanonicalType::First
    } else if is_canonical(w, grid, CanonicalType::Second) {
        CanonicalType::Second
    } else {
        let t = w.domain.center();
        let q = phi_prime_sq(w, t)?.v0;
        return Err(Error::NotCanonical(
            (q - Complex64::ONE).norm().min((q + Complex64::ONE).norm()),
        ));
    };
    let a = match current {
        CanonicalType::First => Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4),
        CanonicalType::Second => Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4),
    };
    let source = match w.kind() {
        FormKind::GForm => w.clone(),
        FormKind::GFormCanonical => {
            // make f explicit before rotating; the canonical implied f
            // would silently renormalize Phi'^2 back to +1
            convert_canonical_to_gform(w)?
        }
        _ => convert(w, FormKind::GForm)?,
    };
    let Form::GForm { f, g1, g2 } = &source.form else {
        unreachable!()
    };
    // Phi picks up the factor t'(s) = a
    let form = Form::GForm {
        f: precompose(f, a, a),
        g1: precompose(g1, a, Complex64::ONE),
        g2: precompose(g2, a, Complex64::ONE),
    };
    Ok(WeierData::new(form, w.domain))
}

fn convert_canonical_to_gform(w: &WeierData) -> Result<WeierData> {
    let Form::GFormCanonical { g1, g2 } = &w.form else {
        unreachable!()
    };
    let f = implied_f(g1, g2)?;
    Ok(WeierData::new(
        Form::GForm {
            f,
            g1: g1.clone(),
            g2: g2.clone(),
        },
        w.domain,
    ))
}
