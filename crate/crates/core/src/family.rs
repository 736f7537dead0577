//! The associated family M_phi of a minimal surface in canonical
//! coordinates, its conjugate surface, and verification of the special
//! isometry that preserves the curvatures along the family.

use num_complex::Complex64;

use crate::canonical::{is_canonical, precompose, CanonicalType};
use crate::error::{Error, Result};
use crate::surface::{integrate_psi, point_invariants};
use crate::weier::{build_phi, convert, Form, FormKind, GridSpec, WeierData};

/// One member of the associated family: its data evaluate to
/// Phi_phi(s) = e^{-i phi/2} Phi(e^{i phi/2} s), so positions integrate to
/// x_phi(s) = Re(e^{-i phi} Psi(e^{i phi/2} s)).
#[derive(Debug, Clone)]
pub struct FamilyMember {
    pub phi: f64,
    pub data: WeierData,
}

/// The base data rotated and rescaled: f picks up the factor `scale`
/// alongside the substitution t = a s; g1, g2 are substituted only.
fn rotated(w: &WeierData, a: Complex64, scale: Complex64) -> Result<WeierData> {
    let source = match w.kind() {
        FormKind::GForm => w.clone(),
        _ => convert(w, FormKind::GForm)?,
    };
    let Form::GForm { f, g1, g2 } = &source.form else {
        unreachable!()
    };
    let form = Form::GForm {
        f: precompose(f, a, scale),
        g1: precompose(g1, a, Complex64::ONE),
        g2: precompose(g2, a, Complex64::ONE),
    };
    Ok(WeierData::new(form, w.domain))
}

fn member(w: &WeierData, phi: f64) -> Result<FamilyMember> {
    let a = Complex64::from_polar(1.0, 0.5 * phi);
    // Phi_phi = (1/a) Phi(a s): the explicit f keeps the square-root
    // branch of the base data, evaluated at the rotated argument
    let data = rotated(w, a, 1.0 / a)?;
    Ok(FamilyMember { phi, data })
}

/// The family member at angle phi in [0, pi/2].  The input must carry
/// canonical coordinates of the first type.
pub fn associate(w: &WeierData, phi: f64) -> Result<FamilyMember> {
    if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&phi) {
        return Err(Error::Config(format!(
            "family angle {phi} outside [0, pi/2]"
        )));
    }
    require_canonical(w)?;
    member(w, phi)
}

fn require_canonical(w: &WeierData) -> Result<()> {
    if !is_canonical(w, GridSpec::new(11, 11), CanonicalType::First) {
        return Err(Error::NotCanonical(f64::NAN));
    }
    Ok(())
}

/// The conjugate surface: the member at phi = pi/2, whose position is
/// Im Psi of the original.  The first-type canonical coordinates of the
/// output are the second-type coordinates of the input.
pub fn conjugate(w: &WeierData) -> Result<FamilyMember> {
    associate(w, std::f64::consts::FRAC_PI_2)
}

impl FamilyMember {
    /// Position by contour integration of the member's data from s0.
    pub fn position(&self, s0: Complex64, s: Complex64) -> Result<[f64; 4]> {
        Ok(integrate_psi(&self.data, s0, s)?.real_parts())
    }
}

/// Maximal relative deviations of E, K and kappa between the member at s
/// and the base surface at e^{i phi/2} s over the grid.
#[derive(Debug, Clone, Copy, Default)]
pub struct IsometryReport {
    pub max_e: f64,
    pub max_k: f64,
    pub max_kappa: f64,
}

impl IsometryReport {
    pub fn max(&self) -> f64 {
        self.max_e.max(self.max_k).max(self.max_kappa)
    }
}

pub fn check_isometry(
    w: &WeierData,
    member: &FamilyMember,
    grid: GridSpec,
) -> Result<IsometryReport> {
    let a = Complex64::from_polar(1.0, 0.5 * member.phi);
    let mut report = IsometryReport::default();
    for (_, _, s) in grid.points(&member.data.domain) {
        let (p_m, d_m) = build_phi(&member.data, s)?;
        let (p_b, d_b) = build_phi(w, a * s)?;
        let im = point_invariants(&p_m, &d_m)?;
        let ib = point_invariants(&p_b, &d_b)?;
        report.max_e = report.max_e.max((im.e - ib.e).abs() / (1.0 + ib.e.abs()));
        report.max_k = report.max_k.max((im.k - ib.k).abs() / (1.0 + ib.k.abs()));
        report.max_kappa = report
            .max_kappa
            .max((im.kappa - ib.kappa).abs() / (1.0 + ib.kappa.abs()));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::motions::verify_congruence;
    use crate::weier::{Component, Domain};
    use nalgebra::Matrix4;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn canonical_off_origin(g1: &str, g2: &str) -> WeierData {
        WeierData::new(
            Form::GFormCanonical {
                g1: Component::parse(g1).unwrap(),
                g2: Component::parse(g2).unwrap(),
            },
            Domain::new(0.1, 1.1, 0.1, 1.1),
        )
    }

    #[test]
    fn zero_angle_is_the_identity_member() {
        let w = canonical_off_origin("t", "t^2");
        let m = associate(&w, 0.0).unwrap();
        for k in 0..6 {
            let s = c(0.2 + 0.15 * (k % 3) as f64, 0.2 + 0.3 * (k / 3) as f64);
            let (p0, _) = build_phi(&w, s).unwrap();
            let (p1, _) = build_phi(&m.data, s).unwrap();
            assert!(p0.sub(&p1).max_abs() < 1e-12);
        }
    }

    #[test]
    fn members_stay_canonical() {
        let w = canonical_off_origin("t", "t^2");
        for phi in [0.3, std::f64::consts::FRAC_PI_4, std::f64::consts::FRAC_PI_2] {
            let m = associate(&w, phi).unwrap();
            assert!(is_canonical(
                &m.data,
                GridSpec::new(9, 9),
                CanonicalType::First
            ));
        }
    }

    #[test]
    fn angle_range_and_canonicity_guards() {
        let w = canonical_off_origin("t", "t^2");
        assert!(matches!(associate(&w, 2.0), Err(Error::Config(_))));
        let bad = WeierData::new(
            Form::GForm {
                f: Component::parse("1").unwrap(),
                g1: Component::parse("t").unwrap(),
                g2: Component::parse("t").unwrap(),
            },
            Domain::unit(),
        );
        assert!(matches!(associate(&bad, 0.3), Err(Error::NotCanonical(_))));
    }

    #[test]
    fn conjugate_position_is_im_psi() {
        let w = canonical_off_origin("exp(t)", "exp(2*t)");
        let m = conjugate(&w).unwrap();
        let a = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        let s0 = c(0.3, 0.3);
        for k in 0..4 {
            let s = c(0.2 + 0.2 * (k % 2) as f64, 0.3 + 0.25 * (k / 2) as f64);
            let x = m.position(s0, s).unwrap();
            let psi = integrate_psi(&w, a * s0, a * s).unwrap();
            for j in 0..4 {
                assert!(
                    (x[j] - psi.c[j].im).abs() < 1e-9,
                    "component {j}: {} vs {}",
                    x[j],
                    psi.c[j].im
                );
            }
        }
    }

    #[test]
    fn isometry_deviations_are_tiny() {
        let w = canonical_off_origin("t", "t^2");
        for phi in [
            std::f64::consts::FRAC_PI_8,
            std::f64::consts::FRAC_PI_4,
            std::f64::consts::FRAC_PI_2,
        ] {
            let m = associate(&w, phi).unwrap();
            let report = check_isometry(&w, &m, GridSpec::new(21, 21)).unwrap();
            assert!(report.max() < 1e-9, "phi = {phi}: {report:?}");
        }
    }

    #[test]
    fn double_conjugation_is_a_point_reflection() {
        let w = canonical_off_origin("t", "t^2");
        let m1 = conjugate(&w).unwrap();
        let m2 = conjugate(&m1.data).unwrap();
        // the original reparametrized by t = i s (Weierstrass vector picks
        // up the factor t' = i)
        let rep = rotated(&w, Complex64::I, Complex64::I).unwrap();
        let (a, _) = verify_congruence(&rep, &m2.data, GridSpec::new(5, 5)).unwrap();
        assert!(
            (a.m + Matrix4::identity()).norm() < 1e-7,
            "expected -I, got {}",
            a.m
        );
        assert!(a.proper && !a.orthochronous);
    }
}
