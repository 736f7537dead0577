use std::fmt::Write as _;
use std::sync::Arc;

use num_complex::Complex64;

use super::jet::Jet;
use crate::error::{Error, Result};

/// Built-in holomorphic functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Log,
    Sqrt,
    Sin,
    Cos,
    Sinh,
    Cosh,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
        }
    }

    pub fn from_name(s: &str) -> Option<Func> {
        Some(match s {
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            _ => return None,
        })
    }
}

/// AST of a holomorphic function of one variable t. Immutable after parse;
/// shared subtrees are reference counted so composition is cheap.
#[derive(Debug, Clone, PartialEq)]
pub enum HoloExpr {
    Lit(Complex64),
    I,
    Var,
    Neg(Arc<HoloExpr>),
    Add(Arc<HoloExpr>, Arc<HoloExpr>),
    Sub(Arc<HoloExpr>, Arc<HoloExpr>),
    Mul(Arc<HoloExpr>, Arc<HoloExpr>),
    Div(Arc<HoloExpr>, Arc<HoloExpr>),
    Pow(Arc<HoloExpr>, i32),
    Apply(Func, Arc<HoloExpr>),
    /// expr(a*t + b), produced by [`compose_affine`].
    Subst(Arc<HoloExpr>, Complex64, Complex64),
}

impl HoloExpr {
    pub fn lit(re: f64) -> Self {
        HoloExpr::Lit(Complex64::new(re, 0.0))
    }

    pub fn var() -> Self {
        HoloExpr::Var
    }
}

fn domain_err(e: &HoloExpr, t: Complex64, msg: &str) -> Error {
    Error::Domain {
        expr: format_expr(e),
        t,
        msg: msg.to_string(),
    }
}

const SINGULAR: f64 = 1e-300;

/// Evaluate the expression and its first two derivatives at `t`.
pub fn eval_jet(e: &HoloExpr, t: Complex64) -> Result<Jet> {
    match e {
        HoloExpr::Lit(z) => Ok(Jet::constant(*z)),
        HoloExpr::I => Ok(Jet::constant(Complex64::I)),
        HoloExpr::Var => Ok(Jet::variable(t)),
        HoloExpr::Neg(a) => Ok(eval_jet(a, t)?.neg()),
        HoloExpr::Add(a, b) => Ok(eval_jet(a, t)?.add(&eval_jet(b, t)?)),
        HoloExpr::Sub(a, b) => Ok(eval_jet(a, t)?.sub(&eval_jet(b, t)?)),
        HoloExpr::Mul(a, b) => Ok(eval_jet(a, t)?.mul(&eval_jet(b, t)?)),
        HoloExpr::Div(a, b) => {
            let den = eval_jet(b, t)?;
            if den.v0.norm() < SINGULAR {
                return Err(domain_err(e, t, "division by zero"));
            }
            Ok(eval_jet(a, t)?.div(&den))
        }
        HoloExpr::Pow(a, n) => {
            let base = eval_jet(a, t)?;
            if *n < 0 && base.v0.norm() < SINGULAR {
                return Err(domain_err(e, t, "zero base with negative exponent"));
            }
            Ok(base.powi(*n))
        }
        HoloExpr::Apply(f, a) => {
            let inner = eval_jet(a, t)?;
            match f {
                Func::Exp => Ok(inner.exp()),
                Func::Log => {
                    if inner.v0.norm() < SINGULAR {
                        return Err(domain_err(e, t, "log of zero"));
                    }
                    Ok(inner.ln())
                }
                Func::Sqrt => {
                    if inner.v0.norm() < SINGULAR {
                        return Err(domain_err(e, t, "sqrt of zero (derivative singular)"));
                    }
                    Ok(inner.sqrt())
                }
                Func::Sin => Ok(inner.sin()),
                Func::Cos => Ok(inner.cos()),
                Func::Sinh => Ok(inner.sinh()),
                Func::Cosh => Ok(inner.cosh()),
            }
        }
        HoloExpr::Subst(inner, a, b) => {
            let j = eval_jet(inner, a * t + b)?;
            Ok(Jet::new(j.v0, j.v1 * a, j.v2 * a * a))
        }
    }
}

/// Returns an expression evaluating to e(a*t + b).
pub fn compose_affine(e: &HoloExpr, a: Complex64, b: Complex64) -> HoloExpr {
    HoloExpr::Subst(Arc::new(e.clone()), a, b)
}

/// Symbolic derivative of the expression with respect to t.
pub fn differentiate(e: &HoloExpr) -> HoloExpr {
    use HoloExpr::*;
    let arc = |x: HoloExpr| Arc::new(x);
    match e {
        Lit(_) | I => Lit(Complex64::ZERO),
        Var => Lit(Complex64::ONE),
        Neg(a) => Neg(arc(differentiate(a))),
        Add(a, b) => Add(arc(differentiate(a)), arc(differentiate(b))),
        Sub(a, b) => Sub(arc(differentiate(a)), arc(differentiate(b))),
        Mul(a, b) => Add(
            arc(Mul(arc(differentiate(a)), b.clone())),
            arc(Mul(a.clone(), arc(differentiate(b)))),
        ),
        Div(a, b) => Div(
            arc(Sub(
                arc(Mul(arc(differentiate(a)), b.clone())),
                arc(Mul(a.clone(), arc(differentiate(b)))),
            )),
            arc(Pow(b.clone(), 2)),
        ),
        Pow(a, n) => Mul(
            arc(Mul(
                arc(Lit(Complex64::new(*n as f64, 0.0))),
                arc(Pow(a.clone(), n - 1)),
            )),
            arc(differentiate(a)),
        ),
        Apply(f, a) => {
            let da = arc(differentiate(a));
            let outer = match f {
                Func::Exp => Apply(Func::Exp, a.clone()),
                Func::Log => Div(arc(Lit(Complex64::ONE)), a.clone()),
                Func::Sqrt => Div(
                    arc(Lit(Complex64::new(0.5, 0.0))),
                    arc(Apply(Func::Sqrt, a.clone())),
                ),
                Func::Sin => Apply(Func::Cos, a.clone()),
                Func::Cos => Neg(arc(Apply(Func::Sin, a.clone()))),
                Func::Sinh => Apply(Func::Cosh, a.clone()),
                Func::Cosh => Apply(Func::Sinh, a.clone()),
            };
            Mul(arc(outer), da)
        }
        Subst(inner, a, b) => Mul(
            arc(Lit(*a)),
            arc(Subst(arc(differentiate(inner)), *a, *b)),
        ),
    }
}

fn fmt_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        fmt_real(z.re)
    } else if z.re == 0.0 {
        format!("({}*i)", fmt_real(z.im))
    } else if z.im < 0.0 {
        format!("({}-{}*i)", fmt_real(z.re), fmt_real(-z.im))
    } else {
        format!("({}+{}*i)", fmt_real(z.re), fmt_real(z.im))
    }
}

fn fmt_real(x: f64) -> String {
    if x < 0.0 {
        format!("(0-{})", fmt_pos(-x))
    } else {
        fmt_pos(x)
    }
}

fn fmt_pos(x: f64) -> String {
    // shortest decimal that round-trips; Display for f64 guarantees this
    format!("{}", x)
}

/// Render the expression as parseable text. `parse(format_expr(e))` is a
/// semantic identity; affine substitutions are inlined as (a*t + b).
pub fn format_expr(e: &HoloExpr) -> String {
    let mut s = String::new();
    write_expr(e, None, &mut s);
    s
}

// Substitution context: when Some((a, b)), Var renders as (a*t + b).
fn write_expr(e: &HoloExpr, subst: Option<(Complex64, Complex64)>, out: &mut String) {
    match e {
        HoloExpr::Lit(z) => out.push_str(&fmt_complex(*z)),
        HoloExpr::I => out.push('i'),
        HoloExpr::Var => match subst {
            None => out.push('t'),
            Some((a, b)) => {
                out.push('(');
                out.push_str(&fmt_complex(a));
                out.push_str("*t");
                if b != Complex64::ZERO {
                    out.push('+');
                    out.push_str(&fmt_complex(b));
                }
                out.push(')');
            }
        },
        HoloExpr::Neg(a) => {
            out.push_str("(0-");
            write_expr(a, subst, out);
            out.push(')');
        }
        HoloExpr::Add(a, b) => {
            out.push('(');
            write_expr(a, subst, out);
            out.push('+');
            write_expr(b, subst, out);
            out.push(')');
        }
        HoloExpr::Sub(a, b) => {
            out.push('(');
            write_expr(a, subst, out);
            out.push('-');
            write_expr(b, subst, out);
            out.push(')');
        }
        HoloExpr::Mul(a, b) => {
            out.push('(');
            write_expr(a, subst, out);
            out.push('*');
            write_expr(b, subst, out);
            out.push(')');
        }
        HoloExpr::Div(a, b) => {
            out.push('(');
            write_expr(a, subst, out);
            out.push('/');
            write_expr(b, subst, out);
            out.push(')');
        }
        HoloExpr::Pow(a, n) => {
            out.push('(');
            write_expr(a, subst, out);
            out.push(')');
            let _ = write!(out, "^{n}");
        }
        HoloExpr::Apply(f, a) => {
            out.push_str(f.name());
            out.push('(');
            write_expr(a, subst, out);
            out.push(')');
        }
        HoloExpr::Subst(inner, a, b) => {
            // fold nested substitutions: inner evaluated at a'*(a t + b) + b'
            let (a2, b2) = match subst {
                None => (*a, *b),
                Some((sa, sb)) => (*a * sa, *a * sb + *b),
            };
            write_expr(inner, Some((a2, b2)), out);
        }
    }
}
