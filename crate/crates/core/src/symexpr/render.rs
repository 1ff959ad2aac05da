//! LaTeX rendering of exact values and expressions.

use num_traits::{One, Signed, Zero};

use crate::exactnum::{QuadExt, Rational};
use crate::radconst::RadicalConstant;

use super::genexpr::GenExpr;
use super::ratexpr::RatExpr;

/// How a table variable is printed. `negated` prints the variable `w` as
/// `-t` where `t` is `latex`.
#[derive(Clone, Debug)]
pub struct VarLatex {
    pub latex: String,
    pub negated: bool,
}

impl VarLatex {
    pub fn plain(s: &str) -> Self {
        VarLatex {
            latex: s.to_string(),
            negated: false,
        }
    }

    pub fn negated(s: &str) -> Self {
        VarLatex {
            latex: s.to_string(),
            negated: true,
        }
    }
}

fn latex_rational(r: &Rational) -> String {
    let (n, d) = (r.numer().abs(), r.denom().clone());
    let sign = if r.is_negative() { "-" } else { "" };
    if d.is_one() {
        format!("{sign}{n}")
    } else {
        format!("{sign}\\frac{{{n}}}{{{d}}}")
    }
}

pub fn latex_quad(q: &QuadExt) -> String {
    let a = q.rational_part();
    let b = q.sqrt3_part();
    let bpart = |b: &Rational| -> String {
        let (n, d) = (b.numer().abs(), b.denom().clone());
        let sign = if b.is_negative() { "-" } else { "" };
        let num = if n.is_one() {
            "\\sqrt{3}".to_string()
        } else {
            format!("{n}\\sqrt{{3}}")
        };
        if d.is_one() {
            format!("{sign}{num}")
        } else {
            format!("{sign}\\frac{{{num}}}{{{d}}}")
        }
    };
    match (a.is_zero(), b.is_zero()) {
        (_, true) => latex_rational(a),
        (true, false) => bpart(b),
        (false, false) => {
            let bs = bpart(b);
            if bs.starts_with('-') {
                format!("{}{}", latex_rational(a), bs)
            } else {
                format!("{}+{}", latex_rational(a), bs)
            }
        }
    }
}

pub fn latex_const(c: &RadicalConstant) -> String {
    if c.is_zero() {
        return "0".to_string();
    }
    let parts: Vec<String> = c
        .terms()
        .map(|(u, q)| {
            if u.is_identity() {
                return latex_quad(q);
            }
            let units: Vec<String> = u
                .exponents()
                .map(|(p, e)| format!("{p}^{{{}}}", latex_quad(e)))
                .collect();
            let units = units.join(" ");
            if q.is_one() {
                units
            } else if q.unit_sign() == Some(-1) {
                format!("-{units}")
            } else if q.is_rational() || q.rational_part().is_zero() {
                format!("{} {units}", latex_quad(q))
            } else {
                format!("\\left({}\\right) {units}", latex_quad(q))
            }
        })
        .collect();
    parts.join(" + ").replace("+ -", "- ")
}

pub fn latex_gen(x: &GenExpr, vars: &[VarLatex]) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (m, c)) in x.terms().rev().enumerate() {
        let mut negate = false;
        let mut factors = Vec::new();
        for (i, e) in m.0.iter().enumerate() {
            if e.is_zero() {
                continue;
            }
            let v = &vars[i];
            let base = if v.negated {
                match e.to_i64() {
                    Some(k) => {
                        if k % 2 != 0 {
                            negate = !negate;
                        }
                        v.latex.clone()
                    }
                    None => format!("\\left(-{}\\right)", v.latex),
                }
            } else {
                v.latex.clone()
            };
            if e.is_one() {
                factors.push(base);
            } else {
                factors.push(format!("{base}^{{{}}}", latex_quad(e)));
            }
        }
        let c = if negate { -c } else { c.clone() };
        let mono = factors.join(" ");
        let mut term = if mono.is_empty() {
            latex_const(&c)
        } else if c.is_one() {
            mono
        } else if c.as_quad().and_then(|q| q.unit_sign()) == Some(-1) {
            format!("-{mono}")
        } else if c.len() > 1 || c.as_quad().is_some_and(|q| !q.is_rational() && !q.rational_part().is_zero()) {
            format!("\\left({}\\right) {mono}", latex_const(&c))
        } else {
            format!("{} {mono}", latex_const(&c))
        };
        if idx > 0 {
            if let Some(rest) = term.strip_prefix('-') {
                term = format!(" - {rest}");
            } else {
                term = format!(" + {term}");
            }
        }
        out.push_str(&term);
    }
    out
}

pub fn latex_rat(x: &RatExpr, vars: &[VarLatex]) -> String {
    if x.is_polynomial() {
        return latex_gen(x.numerator(), vars);
    }
    let den: Vec<String> = x
        .den_factors()
        .iter()
        .map(|(p, k)| {
            if *k == 1 {
                format!("\\left({}\\right)", latex_gen(p, vars))
            } else {
                format!("\\left({}\\right)^{{{k}}}", latex_gen(p, vars))
            }
        })
        .collect();
    format!("\\frac{{{}}}{{{}}}", latex_gen(x.numerator(), vars), den.join(" "))
}
