//! Surface sampling: contour integration of Psi with x = Re Psi, the metric
//! coefficient E, second-fundamental-form vectors, the curvatures K and
//! kappa by independent routes, the invariants nu and mu in canonical
//! coordinates, and degenerate-point detection.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::holo::Jet;
use crate::mink4::{
    bilinear_dot, det4, norm_sq, normal_project, CVec4,
};
use crate::weier::{build_phi, Domain, FormKind, GridSpec, WeierData};

/// Per-segment tolerance of the adaptive quadrature.
pub const QUAD_TOL: f64 = 1e-10;

/// Threshold on |Phi'^2| below which a point counts as degenerate.
pub const DEGEN_TOL: f64 = 1e-10;

const MAX_BISECT: u32 = 20;

// 16-point Gauss-Legendre rule on [-1, 1]: positive abscissas and weights.
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

fn gl16_segment(w: &WeierData, a: Complex64, b: Complex64) -> Result<CVec4> {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = CVec4::zero();
    for (x, wt) in GL16 {
        for s in [-x, x] {
            let (phi, _) = build_phi(w, mid + half * s)?;
            acc = acc.add(&phi.scale(Complex64::new(wt, 0.0)));
        }
    }
    Ok(acc.scale(half))
}

fn integrate_adaptive(
    w: &WeierData,
    a: Complex64,
    b: Complex64,
    whole: CVec4,
    tol: f64,
    depth: u32,
) -> Result<CVec4> {
    let mid = 0.5 * (a + b);
    let left = gl16_segment(w, a, mid)?;
    let right = gl16_segment(w, mid, b)?;
    let refined = left.add(&right);
    if refined.sub(&whole).max_abs() < tol {
        return Ok(refined);
    }
    if depth >= MAX_BISECT {
        return Err(Error::QuadratureFailure(depth));
    }
    let l = integrate_adaptive(w, a, mid, left, 0.5 * tol, depth + 1)?;
    let r = integrate_adaptive(w, mid, b, right, 0.5 * tol, depth + 1)?;
    Ok(l.add(&r))
}

/// Psi(t) = integral of Phi along the straight segment from t0 to t, with
/// Psi(t0) = 0.
pub fn integrate_psi(w: &WeierData, t0: Complex64, t: Complex64) -> Result<CVec4> {
    if (t - t0).norm() == 0.0 {
        return Ok(CVec4::zero());
    }
    let whole = gl16_segment(w, t0, t)?;
    integrate_adaptive(w, t0, t, whole, QUAD_TOL, 0)
}

/// Everything sampled at one grid node.
#[derive(Debug, Clone)]
pub struct SurfaceNode {
    pub t: Complex64,
    pub x: [f64; 4],
    pub e: f64,
    pub sigma_uu: CVec4,
    pub sigma_uv: CVec4,
    pub k: f64,
    pub kappa: f64,
    pub nu: Option<f64>,
    pub mu: Option<f64>,
    pub degenerate: bool,
}

/// A sampled surface over a rectangular grid, row-major with v rows outer.
#[derive(Debug, Clone)]
pub struct SurfaceGrid {
    pub grid: GridSpec,
    pub domain: Domain,
    pub nodes: Vec<SurfaceNode>,
}

impl SurfaceGrid {
    pub fn node(&self, i: usize, j: usize) -> &SurfaceNode {
        &self.nodes[i * self.grid.nu + j]
    }
}

/// Pointwise curvature data from Phi and Phi' alone.
pub struct PointInvariants {
    pub e: f64,
    pub sigma_uu: CVec4,
    pub sigma_uv: CVec4,
    pub k: f64,
    pub kappa: f64,
    pub phi_sq_prime: Complex64,
    pub degenerate: bool,
}

pub fn point_invariants(phi: &CVec4, dphi: &CVec4) -> Result<PointInvariants> {
    let perp = normal_project(phi, dphi)?;
    let n2 = norm_sq(phi);
    let e = 0.5 * n2;
    let sigma_uu = perp.re();
    let sigma_uv = perp.im().scale(Complex64::new(-1.0, 0.0));
    let k = -4.0 * norm_sq(&perp) / (n2 * n2);
    let det = det4(phi, &phi.conj(), dphi, &dphi.conj());
    let scale = phi.max_abs().max(dphi.max_abs()).max(1.0);
    debug_assert!(
        det.im.abs() < 1e-9 * scale.powi(4),
        "determinant imaginary part {}",
        det.im
    );
    let kappa = 4.0 * det.re / (n2 * n2 * n2);
    let q = bilinear_dot(dphi, dphi);
    Ok(PointInvariants {
        e,
        sigma_uu,
        sigma_uv,
        k,
        kappa,
        phi_sq_prime: q,
        degenerate: q.norm() < DEGEN_TOL,
    })
}

/// The scalar invariants of canonical first-type coordinates: nu >= 0 and
/// the signed mu with 2 nu mu = kappa.
pub fn nu_mu(phi: &CVec4, dphi: &CVec4) -> Result<(f64, f64)> {
    let q = bilinear_dot(dphi, dphi);
    if (q - Complex64::ONE).norm() > 1e-8 {
        return Err(Error::NotCanonical((q - Complex64::ONE).norm()));
    }
    let perp = normal_project(phi, dphi)?;
    let p2 = norm_sq(&perp);
    let n4 = norm_sq(phi).powi(2);
    let nu2 = 2.0 * (1.0 + p2) / n4;
    let mut mu2 = 2.0 * (1.0 - p2) / n4;
    if mu2 < 0.0 {
        if mu2 > -1e-8 * 2.0 / n4 {
            mu2 = 0.0;
        } else {
            return Err(Error::NotCanonical(-mu2 * n4 / 2.0));
        }
    }
    let nu = nu2.sqrt();
    // nu^2 >= 2 / ||phi||^4 > 0, so the determinant-route kappa fixes mu
    // (sign included) without the roundoff amplification of sqrt(mu^2)
    let det = det4(phi, &phi.conj(), dphi, &dphi.conj());
    let kappa = 4.0 * det.re / norm_sq(phi).powi(3);
    let mu = kappa / (2.0 * nu);
    debug_assert!((mu * mu - mu2).abs() < 1e-8 * (1.0 + mu2.abs()));
    Ok((nu, mu))
}

/// Sample the surface over the grid with base point t0: positions by
/// chained segment quadrature, curvatures pointwise from the jets.
pub fn sample(w: &WeierData, grid: GridSpec, t0: Complex64) -> Result<SurfaceGrid> {
    let canonical_form = w.kind() == FormKind::GFormCanonical;
    let mut nodes: Vec<SurfaceNode> = Vec::with_capacity(grid.len());
    // psi at the start of the current row and at the previous node
    let mut row_start = CVec4::zero();
    for i in 0..grid.nv {
        let first = grid.node(&w.domain, i, 0);
        if i == 0 {
            row_start = integrate_psi(w, t0, first)?;
        } else {
            let below = grid.node(&w.domain, i - 1, 0);
            row_start = row_start.add(&integrate_psi(w, below, first)?);
        }
        let mut psi = row_start;
        let mut prev_t = first;
        for j in 0..grid.nu {
            let t = grid.node(&w.domain, i, j);
            if j > 0 {
                psi = psi.add(&integrate_psi(w, prev_t, t)?);
            }
            prev_t = t;
            let (phi, dphi) = build_phi(w, t)?;
            let inv = point_invariants(&phi, &dphi)?;
            let canonical_here =
                canonical_form || (inv.phi_sq_prime - Complex64::ONE).norm() < 1e-8;
            let (nu, mu) = if canonical_here {
                let (nu, mu) = nu_mu(&phi, &dphi)?;
                (Some(nu), Some(mu))
            } else {
                (None, None)
            };
            nodes.push(SurfaceNode {
                t,
                x: psi.real_parts(),
                e: inv.e,
                sigma_uu: inv.sigma_uu,
                sigma_uv: inv.sigma_uv,
                k: inv.k,
                kappa: inv.kappa,
                nu,
                mu,
                degenerate: inv.degenerate,
            });
        }
    }
    Ok(SurfaceGrid {
        grid,
        domain: w.domain,
        nodes,
    })
}

/// E, K and kappa from the g-form data: E = |f|^2 |1 + g1 conj(g2)|^2 and
/// K + i kappa = -4 g1' conj(g2') / (E (1 + g1 conj(g2))^2).
pub fn curvatures_gform(
    f: &Jet,
    g1: &Jet,
    g2: &Jet,
    t: Complex64,
) -> Result<(f64, f64, f64)> {
    let d = Complex64::ONE + g1.v0 * g2.v0.conj();
    if d.norm() < 1e-8 {
        return Err(Error::ConditionViolated {
            t,
            msg: format!("|1 + g1 conj(g2)| = {:.3e}", d.norm()),
        });
    }
    let e = f.v0.norm_sqr() * d.norm_sqr();
    let kk = -4.0 * g1.v1 * g2.v1.conj() / (e * d * d);
    Ok((e, kk.re, kk.im))
}

/// E, K and kappa through the harmonic function theta = Re h1 + i Im h2
/// of the hyperbolic form.
pub fn curvatures_theta(
    f: &Jet,
    h1: &Jet,
    h2: &Jet,
    t: Complex64,
) -> Result<(f64, f64, f64)> {
    let theta = Complex64::new(h1.v0.re, h2.v0.im);
    let ch = theta.cosh();
    if ch.norm() < 1e-8 {
        return Err(Error::ConditionViolated {
            t,
            msg: format!("|cosh theta| = {:.3e}", ch.norm()),
        });
    }
    // Cauchy-Riemann: theta'_u and theta'_v from the holomorphic derivatives
    let tu = Complex64::new(h1.v1.re, h2.v1.im);
    let tv = Complex64::new(-h1.v1.im, h2.v1.re);
    let s = tu * tu + tv * tv;
    let f2 = f.v0.norm_sqr();
    let e = f2 * ch.norm_sqr();
    let kk = -s / (f2 * ch.norm_sqr() * ch * ch);
    Ok((e, kk.re, kk.im))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mink4::wedge_norm_sq;
    use crate::weier::{convert, Component, Form};
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn comp(text: &str) -> Component {
        Component::parse(text).unwrap()
    }

    fn canonical(g1: &str, g2: &str) -> WeierData {
        WeierData::new(
            Form::GFormCanonical {
                g1: comp(g1),
                g2: comp(g2),
            },
            Domain::unit(),
        )
    }

    fn gform(f: &str, g1: &str, g2: &str) -> WeierData {
        WeierData::new(
            Form::GForm {
                f: comp(f),
                g1: comp(g1),
                g2: comp(g2),
            },
            Domain::unit(),
        )
    }

    #[test]
    fn integrate_cases() {
        let w = canonical("exp(t)", "exp(t)");
        // zero segment
        let z = integrate_psi(&w, c(0.2, 0.1), c(0.2, 0.1)).unwrap();
        assert_abs_diff_eq!(z.max_abs(), 0.0, epsilon = 1e-15);
        // closed-form antiderivative (i sinh t, cosh t - 1, t, 0)
        for t in [c(1.0, 0.0), c(0.5, 0.5), c(-0.3, 0.8)] {
            let psi = integrate_psi(&w, c(0.0, 0.0), t).unwrap();
            let want = CVec4::new(
                Complex64::I * t.sinh(),
                t.cosh() - Complex64::ONE,
                t,
                Complex64::ZERO,
            );
            assert!(psi.sub(&want).max_abs() < 1e-9, "psi({t}) = {psi:?}");
        }
        // path independence around a rectangle corner
        let via_real = integrate_psi(&w, c(0.0, 0.0), c(1.0, 0.0))
            .unwrap()
            .add(&integrate_psi(&w, c(1.0, 0.0), c(1.0, 1.0)).unwrap());
        let via_imag = integrate_psi(&w, c(0.0, 0.0), c(0.0, 1.0))
            .unwrap()
            .add(&integrate_psi(&w, c(0.0, 1.0), c(1.0, 1.0)).unwrap());
        assert!(via_real.sub(&via_imag).max_abs() < 1e-9);
    }

    #[test]
    fn sample_anchor_values() {
        // canonical g1 = g2 = t at the origin
        let w = canonical("t", "t");
        let (phi, dphi) = build_phi(&w, c(0.0, 0.0)).unwrap();
        let inv = point_invariants(&phi, &dphi).unwrap();
        assert_abs_diff_eq!(inv.e, 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(inv.k, -16.0, epsilon = 1e-10);
        assert_abs_diff_eq!(inv.kappa, 0.0, epsilon = 1e-10);
        let (nu, mu) = nu_mu(&phi, &dphi).unwrap();
        assert_abs_diff_eq!(nu, 4.0, epsilon = 1e-10);
        assert_abs_diff_eq!(mu, 0.0, epsilon = 1e-10);

        // canonical g1 = g2 = e^t at the origin
        let w = canonical("exp(t)", "exp(t)");
        let (phi, dphi) = build_phi(&w, c(0.0, 0.0)).unwrap();
        let inv = point_invariants(&phi, &dphi).unwrap();
        assert_abs_diff_eq!(inv.e, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(inv.k, -1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(inv.kappa, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn closed_form_surface() {
        // x + (0, 1, 0, 0) = (-cosh u sin v, cosh u cos v, u, 0) with the
        // base point at the origin
        let w = canonical("exp(t)", "exp(t)");
        let grid = GridSpec::new(9, 9);
        let s = sample(&w, grid, c(0.0, 0.0)).unwrap();
        for node in &s.nodes {
            let (u, v) = (node.t.re, node.t.im);
            let want = [
                -u.cosh() * v.sin(),
                u.cosh() * v.cos() - 1.0,
                u,
                0.0,
            ];
            for k in 0..4 {
                assert!(
                    (node.x[k] - want[k]).abs() < 1e-8,
                    "x[{k}] at ({u},{v}): {} vs {}",
                    node.x[k],
                    want[k]
                );
            }
            assert!(node.nu.is_some() && node.mu.is_some());
        }
    }

    #[test]
    fn harmonicity_and_first_derivatives() {
        // fine grid around an interior point: five-point Laplacian of x
        // vanishes and central differences give x_u = Re Phi, x_v = -Im Phi
        let mut w = gform("1 + 0.2*t", "t^2 + 1", "exp(t)");
        w.domain = Domain::new(0.2, 0.3, 0.1, 0.2);
        let grid = GridSpec::new(11, 11);
        let s = sample(&w, grid, w.domain.corner()).unwrap();
        let h = 0.01;
        for i in 1..grid.nv - 1 {
            for j in 1..grid.nu - 1 {
                let xc = s.node(i, j).x;
                let (xl, xr) = (s.node(i, j - 1).x, s.node(i, j + 1).x);
                let (xd, xu) = (s.node(i - 1, j).x, s.node(i + 1, j).x);
                let (phi, _) = build_phi(&w, s.node(i, j).t).unwrap();
                for k in 0..4 {
                    let lap = (xl[k] + xr[k] + xd[k] + xu[k] - 4.0 * xc[k]) / (h * h);
                    assert!(lap.abs() < 5e-4, "laplacian x[{k}] = {lap}");
                    // O(h^2) truncation at h = 0.01 dominates, hence 1e-3
                    let du = (xr[k] - xl[k]) / (2.0 * h);
                    assert!((du - phi.c[k].re).abs() < 1e-3, "x_u[{k}] {du} vs {}", phi.c[k].re);
                    let dv = (xu[k] - xd[k]) / (2.0 * h);
                    assert!((dv + phi.c[k].im).abs() < 1e-3, "x_v[{k}] {dv} vs {}", -phi.c[k].im);
                }
            }
        }
    }

    #[test]
    fn bivector_identity() {
        // -4 ||phi'perp||^2 / ||phi||^4 equals -4 ||phi ^ phi'||^2 / ||phi||^6
        let w = gform("1 + 0.2*t", "t^2 + 1", "exp(t)");
        for k in 0..9 {
            let t = c(0.3 * (k % 3) as f64 - 0.3, 0.3 * (k / 3) as f64 - 0.3);
            let (phi, dphi) = build_phi(&w, t).unwrap();
            let inv = point_invariants(&phi, &dphi).unwrap();
            let n2 = norm_sq(&phi);
            let k_bv = -4.0 * wedge_norm_sq(&phi, &dphi) / n2.powi(3);
            assert!(
                (inv.k - k_bv).abs() < 1e-10 * (1.0 + inv.k.abs()),
                "K {} vs bivector {}",
                inv.k,
                k_bv
            );
        }
    }

    #[test]
    fn route_equivalence() {
        // jets route vs g-form formula vs theta route after conversion
        let surfaces = [
            gform("1", "t", "t^2"),
            gform("1 + 0.2*t", "exp(t)", "exp(2*t)"),
            gform("exp(0.3*t)", "exp(t) + 1", "exp(t) + 2"),
        ];
        for w in &surfaces {
            let (f, g1, g2) = match &w.form {
                Form::GForm { f, g1, g2 } => (f.clone(), g1.clone(), g2.clone()),
                _ => unreachable!(),
            };
            let hyp = convert(w, FormKind::Hyperbolic);
            for k in 0..9 {
                let t = c(0.25 * (k % 3) as f64 - 0.25, 0.25 * (k / 3) as f64 - 0.25);
                let (phi, dphi) = build_phi(w, t).unwrap();
                let inv = point_invariants(&phi, &dphi).unwrap();
                let (e2, k2, kap2) = curvatures_gform(
                    &f.jet(t).unwrap(),
                    &g1.jet(t).unwrap(),
                    &g2.jet(t).unwrap(),
                    t,
                )
                .unwrap();
                let tol = 1e-9;
                assert!((inv.e - e2).abs() < tol * (1.0 + inv.e.abs()));
                assert!((inv.k - k2).abs() < tol * (1.0 + inv.k.abs()));
                assert!((inv.kappa - kap2).abs() < tol * (1.0 + inv.kappa.abs()));
                if let Ok(hyp) = &hyp {
                    let (fh, h1, h2) = match &hyp.form {
                        Form::Hyperbolic { f, h1, h2 } => (f, h1, h2),
                        _ => unreachable!(),
                    };
                    let (e3, k3, kap3) = curvatures_theta(
                        &fh.jet(t).unwrap(),
                        &h1.jet(t).unwrap(),
                        &h2.jet(t).unwrap(),
                        t,
                    )
                    .unwrap();
                    assert!((inv.e - e3).abs() < tol * (1.0 + inv.e.abs()));
                    assert!((inv.k - k3).abs() < tol * (1.0 + inv.k.abs()), "{} vs {}", inv.k, k3);
                    assert!((inv.kappa - kap3).abs() < tol * (1.0 + inv.kappa.abs()));
                }
            }
        }
    }

    #[test]
    fn degenerate_detection() {
        // phi'^2 = 8t vanishes at the origin only
        let w = gform("1", "t^2", "t");
        let (phi, dphi) = build_phi(&w, c(0.0, 0.0)).unwrap();
        let inv = point_invariants(&phi, &dphi).unwrap();
        assert!(inv.degenerate);
        assert!(inv.k.abs() < 1e-7 && inv.kappa.abs() < 1e-7);
        let (phi, dphi) = build_phi(&w, c(0.5, 0.0)).unwrap();
        let inv = point_invariants(&phi, &dphi).unwrap();
        assert!(!inv.degenerate);
        assert!(inv.k.abs() > 1e-3 || inv.kappa.abs() > 1e-3);
    }

    #[test]
    fn canonical_invariant_relations() {
        // K = -nu^2 + mu^2, kappa = 2 nu mu, E = 1 / sqrt(nu^2 + mu^2),
        // |kappa| = 4 sqrt(1 - ||phi'perp||^4) / ||phi||^4
        let surfaces = [
            canonical("t", "t^2 + t"),
            canonical("exp(t)", "exp(2*t)"),
            canonical("sin(t) + 2*t", "t"),
        ];
        for w in &surfaces {
            for k in 0..9 {
                let t = c(0.3 * (k % 3) as f64 - 0.3, 0.3 * (k / 3) as f64 - 0.3);
                let Ok((phi, dphi)) = build_phi(w, t) else { continue };
                let inv = point_invariants(&phi, &dphi).unwrap();
                let (nu, mu) = nu_mu(&phi, &dphi).unwrap();
                assert!(
                    (inv.k - (-nu * nu + mu * mu)).abs() < 1e-8 * (1.0 + inv.k.abs()),
                    "K {} vs -nu^2+mu^2 {} at {t}",
                    inv.k,
                    -nu * nu + mu * mu
                );
                assert!(
                    (inv.kappa - 2.0 * nu * mu).abs() < 1e-8 * (1.0 + inv.kappa.abs()),
                    "kappa {} vs 2 nu mu {} (nu {nu}, mu {mu}) at {t}",
                    inv.kappa,
                    2.0 * nu * mu
                );
                let e_from = 1.0 / (nu * nu + mu * mu).sqrt();
                assert!((inv.e - e_from).abs() < 1e-8 * (1.0 + inv.e.abs()));
                // compare squares: the square root is not Lipschitz at
                // kappa = 0 and would amplify roundoff
                let perp = normal_project(&phi, &dphi).unwrap();
                let p2 = norm_sq(&perp);
                let n4 = norm_sq(&phi).powi(2);
                let modk2 = 16.0 * (1.0 - p2 * p2) / (n4 * n4);
                assert!(
                    (inv.kappa * inv.kappa - modk2).abs() < 1e-8 * (1.0 + modk2),
                    "kappa^2 {} vs {}",
                    inv.kappa * inv.kappa,
                    modk2
                );
            }
        }
    }

    #[test]
    fn nu_mu_rejects_non_canonical() {
        let w = gform("1", "t", "t");
        let (phi, dphi) = build_phi(&w, c(0.2, 0.1)).unwrap();
        assert!(matches!(nu_mu(&phi, &dphi), Err(Error::NotCanonical(_))));
    }
}
