//! The dicyclic group of order 4n acting on C², its invariants, and the two
//! metrics on the orbit space chart (u₁, u₂).
//!
//! A group element acts on functions by substituting xᵢ ↦ ξ^{cᵢ} x_{π(i)},
//! with ξ a primitive 2n-th root of unity tracked only through its exponent.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::diffgeo::{lie_metric, mat_diff_witness, ContraMetric, Matrix, VectorField};
use crate::error::{Error, Result};
use crate::exactnum::QuadExt;
use crate::radconst::RadicalConstant;
use crate::symexpr::{GenExpr, MonoImage, Monomial, RatExpr, VarTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> i64 {
        match self {
            Branch::Plus => 1,
            Branch::Minus => -1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn check_n(n: i64) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidOrder(n));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialGroupElement {
    n: u64,
    perm: [usize; 2],
    phases: [u64; 2],
}

impl MonomialGroupElement {
    pub fn new(n: u64, perm: [usize; 2], phases: [i64; 2]) -> Self {
        let m = 2 * n as i64;
        MonomialGroupElement {
            n,
            perm,
            phases: [phases[0].rem_euclid(m) as u64, phases[1].rem_euclid(m) as u64],
        }
    }

    pub fn identity(n: u64) -> Self {
        MonomialGroupElement::new(n, [0, 1], [0, 0])
    }

    /// x₁ ↦ ξx₁, x₂ ↦ ξ^{2n−1}x₂
    pub fn sigma(n: u64) -> Self {
        MonomialGroupElement::new(n, [0, 1], [1, 2 * n as i64 - 1])
    }

    /// x₁ ↦ x₂, x₂ ↦ −x₁
    pub fn alpha(n: u64) -> Self {
        MonomialGroupElement::new(n, [1, 0], [0, n as i64])
    }

    pub fn perm(&self) -> [usize; 2] {
        self.perm
    }

    pub fn phases(&self) -> [u64; 2] {
        self.phases
    }

    /// The element whose substitution is that of `self` followed by `h`.
    pub fn then(&self, h: &Self) -> Self {
        assert_eq!(self.n, h.n);
        let mut perm = [0; 2];
        let mut ph = [0i64; 2];
        for i in 0..2 {
            perm[i] = h.perm[self.perm[i]];
            ph[i] = (self.phases[i] + h.phases[self.perm[i]]) as i64;
        }
        MonomialGroupElement::new(self.n, perm, ph)
    }

    pub fn inverse(&self) -> Self {
        let mut perm = [0; 2];
        let mut ph = [0i64; 2];
        for i in 0..2 {
            perm[self.perm[i]] = i;
            ph[self.perm[i]] = -(self.phases[i] as i64);
        }
        MonomialGroupElement::new(self.n, perm, ph)
    }

    pub fn pow(&self, k: u64) -> Self {
        let mut acc = MonomialGroupElement::identity(self.n);
        for _ in 0..k {
            acc = acc.then(self);
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        *self == MonomialGroupElement::identity(self.n)
    }

    /// Image of each term of `expr` (over x₁, x₂) as `(monomial, ξ-exponent, coefficient)`.
    pub fn act(&self, expr: &GenExpr) -> Result<Vec<(Monomial, u64, RadicalConstant)>> {
        let m = 2 * self.n;
        let mut out = Vec::with_capacity(expr.len());
        for (mono, c) in expr.terms() {
            if mono.0.len() != 2 {
                return Err(Error::Dimension {
                    expected: 2,
                    got: mono.0.len(),
                });
            }
            let mut exps = vec![QuadExt::zero(); 2];
            let mut phase: u64 = 0;
            for i in 0..2 {
                let k = mono.0[i].to_i64().ok_or(Error::NotPolynomial)?;
                if k < 0 {
                    return Err(Error::NotPolynomial);
                }
                exps[self.perm[i]] = QuadExt::int(k);
                phase = (phase + self.phases[i] * (k as u64 % m)) % m;
            }
            out.push((Monomial(exps), phase, c.clone()));
        }
        Ok(out)
    }
}

impl fmt::Display for MonomialGroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "x1->xi^{}*x{}, x2->xi^{}*x{}",
            self.phases[0],
            self.perm[0] + 1,
            self.phases[1],
            self.perm[1] + 1
        )
    }
}

/// Whether `g` fixes `expr`. Since the action permutes monomials, each image
/// monomial carries a single phase ξ^k; with real coefficients the image
/// equals the original iff k ≡ 0 with equal coefficient or k ≡ n with opposite
/// coefficient.
pub fn invariance_check(expr: &GenExpr, g: &MonomialGroupElement) -> Result<bool> {
    for (m, k, c) in g.act(expr)? {
        let Some(orig) = expr.coeff(&m) else {
            return Ok(false);
        };
        let ok = if k == 0 {
            *orig == c
        } else if k == g.n {
            *orig == -&c
        } else {
            false
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupReport {
    pub sigma_order: bool,
    pub alpha_squared: bool,
    pub conjugation: bool,
    pub order: usize,
    pub expected_order: usize,
}

impl GroupReport {
    pub fn passed(&self) -> bool {
        self.sigma_order && self.alpha_squared && self.conjugation && self.order == self.expected_order
    }
}

/// All elements generated by σ and α.
pub fn closure(n: u64) -> Vec<MonomialGroupElement> {
    let gens = [MonomialGroupElement::sigma(n), MonomialGroupElement::alpha(n)];
    let id = MonomialGroupElement::identity(n);
    let mut seen: HashSet<MonomialGroupElement> = HashSet::from([id.clone()]);
    let mut order = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in &gens {
            let h = g.then(s);
            if seen.insert(h.clone()) {
                order.push(h.clone());
                queue.push_back(h);
            }
        }
    }
    order
}

pub fn group_relations_check(n: i64) -> Result<GroupReport> {
    check_n(n)?;
    let nu = n as u64;
    let s = MonomialGroupElement::sigma(nu);
    let a = MonomialGroupElement::alpha(nu);
    Ok(GroupReport {
        sigma_order: s.pow(2 * nu).is_identity(),
        alpha_squared: a.pow(2) == s.pow(nu),
        conjugation: a.inverse().then(&s).then(&a) == s.inverse(),
        order: closure(nu).len(),
        expected_order: 4 * n as usize,
    })
}

pub fn x_chart() -> Arc<VarTable> {
    VarTable::chart(&[("x1", false), ("x2", false)])
}

pub fn u_chart() -> Arc<VarTable> {
    VarTable::chart(&[("u1", true), ("u2", false)])
}

/// u-chart with the jet chain J₀, J₁, J₂ of f(u₁).
pub fn u_jet_chart() -> Arc<VarTable> {
    VarTable::builder()
        .chart("u1", true)
        .chart("u2", false)
        .jets("u1", &["J0", "J1", "J2"])
        .build()
}

#[derive(Clone, Debug)]
pub struct InvariantSet {
    pub n: i64,
    pub table: Arc<VarTable>,
    pub u1: GenExpr,
    pub u2: GenExpr,
    pub u3: GenExpr,
}

fn xmono(t: &Arc<VarTable>, c: i64, a: i64, b: i64) -> GenExpr {
    GenExpr::mono(t, QuadExt::int(c), &[("x1", QuadExt::int(a)), ("x2", QuadExt::int(b))]).expect("x-chart monomial")
}

impl InvariantSet {
    pub fn new(n: i64) -> Result<Self> {
        check_n(n)?;
        let t = x_chart();
        let u1 = xmono(&t, 1, 2, 2);
        let u2 = &xmono(&t, 1, 2 * n, 0) + &xmono(&t, 1, 0, 2 * n);
        let u3 = &xmono(&t, 1, 2 * n + 1, 1) - &xmono(&t, 1, 1, 2 * n + 1);
        Ok(InvariantSet { n, table: t, u1, u2, u3 })
    }

    pub fn all(&self) -> [&GenExpr; 3] {
        [&self.u1, &self.u2, &self.u3]
    }

    pub fn expected_degrees(&self) -> [i64; 3] {
        [4, 2 * self.n, 2 * self.n + 2]
    }
}

/// Total degree when every term shares it.
pub fn homogeneous_degree(x: &GenExpr) -> Option<QuadExt> {
    let mut deg = None;
    for (m, _) in x.terms() {
        let d = m.0.iter().fold(QuadExt::zero(), |acc, e| &acc + e);
        match &deg {
            None => deg = Some(d),
            Some(prev) if *prev == d => {}
            Some(_) => return None,
        }
    }
    deg
}

#[derive(Clone, Debug, Serialize)]
pub struct InvarianceReport {
    /// `[u][generator]` for generators σ, α.
    pub invariant: [[bool; 2]; 3],
    pub degrees_ok: bool,
}

impl InvarianceReport {
    pub fn passed(&self) -> bool {
        self.degrees_ok && self.invariant.iter().flatten().all(|b| *b)
    }
}

pub fn invariants_check(n: i64) -> Result<InvarianceReport> {
    let inv = InvariantSet::new(n)?;
    let gens = [MonomialGroupElement::sigma(n as u64), MonomialGroupElement::alpha(n as u64)];
    let mut invariant = [[false; 2]; 3];
    for (k, u) in inv.all().iter().enumerate() {
        for (j, g) in gens.iter().enumerate() {
            invariant[k][j] = invariance_check(u, g)?;
        }
    }
    let degrees_ok = inv
        .all()
        .iter()
        .zip(inv.expected_degrees())
        .all(|(u, d)| homogeneous_degree(u) == Some(QuadExt::int(d)));
    Ok(InvarianceReport { invariant, degrees_ok })
}

/// `u₃² − u₁u₂² + c·u₁^{n+1}` expanded in x.
pub fn syzygy_expr(n: i64, c: i64) -> Result<GenExpr> {
    let inv = InvariantSet::new(n)?;
    let lhs = &(&inv.u3 * &inv.u3) - &(&inv.u1 * &(&inv.u2 * &inv.u2));
    Ok(&lhs + &inv.u1.pow(n as u32 + 1).scale_quad(&QuadExt::int(c)))
}

pub fn syzygy_check(n: i64) -> Result<bool> {
    Ok(syzygy_expr(n, 4)?.is_zero())
}

fn rq(t: &Arc<VarTable>, q: QuadExt, powers: &[(&str, QuadExt)]) -> RatExpr {
    RatExpr::from(GenExpr::mono(t, q, powers).expect("valid monomial"))
}

fn qi(v: i64) -> QuadExt {
    QuadExt::int(v)
}

/// The matrix `[[4u₁/3, 2nu₂/3], [2nu₂/3, −(2n²/(3u₁))(u₂² − 6u₁ⁿ)]]` on any
/// table containing `u1`, `u2`.
pub fn omega2_claimed(t: &Arc<VarTable>, n: i64) -> Matrix {
    let a = rq(t, QuadExt::ratio(4, 3), &[("u1", qi(1))]);
    let b = rq(t, QuadExt::ratio(2 * n, 3), &[("u2", qi(1))]);
    let c = &rq(t, QuadExt::ratio(-2 * n * n, 3), &[("u1", qi(-1)), ("u2", qi(2))])
        + &rq(t, QuadExt::int(4 * n * n), &[("u1", qi(n - 1))]);
    vec![vec![a, b.clone()], vec![b, c]]
}

#[derive(Clone, Debug)]
pub struct PushforwardReport {
    /// `J h⁻¹ Jᵀ` in the x-chart.
    pub pushforward_x: Matrix,
    pub verified: bool,
    pub witness: Option<(usize, usize)>,
    /// The verified metric on the u-chart.
    pub metric: ContraMetric,
}

/// Pushes the inverse Hessian of u₁ forward to (u₁, u₂) and compares it with
/// [`omega2_claimed`] after substituting the invariants.
pub fn hessian_pushforward(n: i64) -> Result<PushforwardReport> {
    let inv = InvariantSet::new(n)?;
    let xt = &inv.table;
    let vars = [xt.require("x1")?, xt.require("x2")?];
    let mut h = vec![vec![RatExpr::zero(xt); 2]; 2];
    for i in 0..2 {
        let di = inv.u1.diff(vars[i])?;
        for j in 0..2 {
            h[i][j] = RatExpr::from(di.diff(vars[j])?);
        }
    }
    let hinv = crate::diffgeo::inverse(&h)?;
    let us = [&inv.u1, &inv.u2];
    let mut jac = vec![vec![RatExpr::zero(xt); 2]; 2];
    for a in 0..2 {
        for k in 0..2 {
            jac[a][k] = RatExpr::from(us[a].diff(vars[k])?);
        }
    }
    let mut p = vec![vec![RatExpr::zero(xt); 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            let mut acc = RatExpr::zero(xt);
            for k in 0..2 {
                for l in 0..2 {
                    acc = &acc + &(&(&jac[a][k] * &jac[b][l]) * &hinv[k][l]);
                }
            }
            p[a][b] = acc;
        }
    }
    let ut = u_chart();
    let claimed = omega2_claimed(&ut, n);
    let images: HashMap<usize, RatExpr> = [
        (ut.require("u1")?, RatExpr::from(inv.u1.clone())),
        (ut.require("u2")?, RatExpr::from(inv.u2.clone())),
    ]
    .into();
    let claimed_x = claimed
        .iter()
        .map(|row| row.iter().map(|x| x.compose(xt, &images)).collect::<Result<Vec<_>>>())
        .collect::<Result<Matrix>>()?;
    let witness = mat_diff_witness(&p, &claimed_x);
    Ok(PushforwardReport {
        pushforward_x: p,
        verified: witness.is_none(),
        witness,
        metric: ContraMetric::new(&ut, claimed)?,
    })
}

/// The metric `Lie_{f∂u₂}(·,·)₂` as displayed, in jet symbols:
/// `[[0, (2/3)(nJ₀ − 2u₁J₁)], [·, −(4/(3u₁))(n²u₂J₀ + nu₁u₂J₁)]]`.
pub fn omega1_jet_claimed(t: &Arc<VarTable>, n: i64) -> Matrix {
    let zero = RatExpr::zero(t);
    let off = &rq(t, QuadExt::ratio(2 * n, 3), &[("J0", qi(1))])
        + &rq(t, QuadExt::ratio(-4, 3), &[("u1", qi(1)), ("J1", qi(1))]);
    let d = &rq(t, QuadExt::ratio(-4 * n * n, 3), &[("u1", qi(-1)), ("u2", qi(1)), ("J0", qi(1))])
        + &rq(t, QuadExt::ratio(-4 * n, 3), &[("u2", qi(1)), ("J1", qi(1))]);
    vec![vec![zero, off.clone()], vec![off, d]]
}

/// `2nu₁J₀J₁ − 2u₁²J₁² + n²J₀²`.
pub fn ode_polynomial(t: &Arc<VarTable>, n: i64) -> GenExpr {
    let m = |c: i64, p: &[(&str, i64)]| {
        let p: Vec<(&str, QuadExt)> = p.iter().map(|(v, e)| (*v, qi(*e))).collect();
        GenExpr::mono(t, qi(c), &p).expect("jet monomial")
    };
    &(&m(2 * n, &[("u1", 1), ("J0", 1), ("J1", 1)]) - &m(2, &[("u1", 2), ("J1", 2)])) + &m(n * n, &[("J0", 2)])
}

/// `e = J₀ ∂_{u₂}` on the jet chart.
pub fn jet_field(t: &Arc<VarTable>) -> Result<VectorField> {
    VectorField::new(t, vec![RatExpr::zero(t), RatExpr::var(t, "J0")?])
}

#[derive(Clone, Debug)]
pub struct LieJetReport {
    pub computed: Matrix,
    pub matches: bool,
    pub witness: Option<(usize, usize)>,
}

pub fn lie_jet_check(n: i64) -> Result<LieJetReport> {
    check_n(n)?;
    let t = u_jet_chart();
    let g2 = ContraMetric::new(&t, omega2_claimed(&t, n))?;
    let computed = lie_metric(&g2, &jet_field(&t)?)?;
    let witness = mat_diff_witness(&computed, &omega1_jet_claimed(&t, n));
    Ok(LieJetReport {
        computed,
        matches: witness.is_none(),
        witness,
    })
}

/// `f = u₁^{n(1±√3)/2}` on the given branch.
pub fn f_exponent(n: i64, branch: Branch) -> QuadExt {
    QuadExt::from_parts(n, 2, branch.sign() * n, 2)
}

/// Images of J₀, J₁ for `f = c·u₁^e` on a target table with `u1`.
pub fn jet_images(target: &VarTable, e: &QuadExt) -> Result<Vec<(&'static str, MonoImage)>> {
    let one = QuadExt::one();
    Ok(vec![
        ("J0", MonoImage::build(target, RadicalConstant::one(), &[("u1", e.clone())])?),
        ("J1", MonoImage::build(target, RadicalConstant::from_quad(e.clone()), &[("u1", e - &one)])?),
        (
            "J2",
            MonoImage::build(
                target,
                RadicalConstant::from_quad(e * &(e - &one)),
                &[("u1", &(e - &one) - &one)],
            )?,
        ),
    ])
}

#[derive(Clone, Debug)]
pub struct OdeReport {
    /// `Lie_e(·,·)₁` in jet symbols.
    pub lie_e_omega1: Matrix,
    /// Jet-free multiplier `m` with `Lie_e(·,·)₁ = m · P` on the entry that
    /// carries the condition, and whether every entry factors this way.
    pub multiplier: Option<RatExpr>,
    pub factors: bool,
    pub plus_solves: bool,
    pub minus_solves: bool,
    pub u1_pow_n_solves: bool,
}

impl OdeReport {
    pub fn passed(&self) -> bool {
        self.factors && self.multiplier.is_some() && self.plus_solves && self.minus_solves && !self.u1_pow_n_solves
    }
}

fn depends_on_jets(x: &RatExpr) -> bool {
    let t = x.table();
    let jets: Vec<usize> = (0..t.len())
        .filter(|&i| matches!(t.var(i).kind, crate::symexpr::VarKind::Jet { .. }))
        .collect();
    let dep = |g: &GenExpr| jets.iter().any(|&j| g.depends_on(j));
    dep(x.numerator()) || x.den_factors().iter().any(|(p, _)| dep(p))
}

/// Extracts the condition `Lie_e(·,·)₁ = 0` for `e = f∂_{u₂}` and tests the
/// candidate solutions.
pub fn ode_check(n: i64) -> Result<OdeReport> {
    check_n(n)?;
    let t = u_jet_chart();
    let g2 = ContraMetric::new(&t, omega2_claimed(&t, n))?;
    let e = jet_field(&t)?;
    let g1 = ContraMetric::new(&t, lie_metric(&g2, &e)?)?;
    let l = lie_metric(&g1, &e)?;
    let p = RatExpr::from(ode_polynomial(&t, n));
    let mut factors = true;
    let mut multiplier = None;
    let mut any = false;
    for row in &l {
        for x in row {
            if x.is_zero() {
                continue;
            }
            any = true;
            let q = x.checked_div(&p)?;
            if depends_on_jets(&q) {
                factors = false;
            } else if multiplier.is_none() {
                multiplier = Some(q);
            }
        }
    }
    let factors = factors && any;
    let target = u_chart();
    let solves = |e: &QuadExt| -> Result<bool> {
        let imgs = jet_images(&target, e)?;
        let imgs: Vec<(&str, MonoImage)> = imgs.into_iter().filter(|(k, _)| *k != "J2").collect();
        Ok(ode_polynomial(&t, n).subst_named(&target, &imgs)?.is_zero())
    };
    Ok(OdeReport {
        lie_e_omega1: l,
        multiplier,
        factors,
        plus_solves: solves(&f_exponent(n, Branch::Plus))?,
        minus_solves: solves(&f_exponent(n, Branch::Minus))?,
        u1_pow_n_solves: solves(&qi(n))?,
    })
}

/// The plus-branch Ω₁ display:
/// `[[0, −(2n/√3)u₁^a], [·, −(2/3)(3+√3)n²u₁^{a−1}u₂]]`, `a = n(1+√3)/2`.
pub fn omega1_plus_claimed(t: &Arc<VarTable>, n: i64) -> Matrix {
    let a = f_exponent(n, Branch::Plus);
    let off = rq(t, QuadExt::from_parts(0, 1, -2 * n, 3), &[("u1", a.clone())]);
    let c = QuadExt::from_parts(-2 * n * n, 1, -2 * n * n, 3);
    let d = rq(t, c, &[("u1", &a - &QuadExt::one()), ("u2", qi(1))]);
    vec![vec![RatExpr::zero(t), off.clone()], vec![off, d]]
}

/// `τ = ∓(√3/(2n))u₁`.
pub fn tau(t: &Arc<VarTable>, n: i64, branch: Branch) -> RatExpr {
    rq(t, QuadExt::from_parts(0, 1, -branch.sign(), 2 * n), &[("u1", qi(1))])
}

#[derive(Clone, Debug)]
pub struct BranchPencil {
    pub n: i64,
    pub branch: Branch,
    pub g1: ContraMetric,
    pub g2: ContraMetric,
    pub tau: RatExpr,
    /// Ω₁ equals the jet formula evaluated at f.
    pub matches_jet_formula: bool,
    /// Ω₁ equals the displayed plus-branch matrix (plus branch only).
    pub matches_display: Option<bool>,
}

/// Ω₁ = Lie_{f∂u₂}Ω₂ for the branch's f, on the u-chart.
pub fn branch_pencil(n: i64, branch: Branch) -> Result<BranchPencil> {
    check_n(n)?;
    let t = u_chart();
    let g2 = ContraMetric::new(&t, omega2_claimed(&t, n))?;
    let a = f_exponent(n, branch);
    let f = rq(&t, QuadExt::one(), &[("u1", a.clone())]);
    let e = VectorField::new(&t, vec![RatExpr::zero(&t), f])?;
    let g1 = ContraMetric::new(&t, lie_metric(&g2, &e)?)?;
    let jt = u_jet_chart();
    let imgs = jet_images(&t, &a)?;
    let from_jets = omega1_jet_claimed(&jt, n)
        .iter()
        .map(|row| row.iter().map(|x| x.subst_named(&t, &imgs)).collect::<Result<Vec<_>>>())
        .collect::<Result<Matrix>>()?;
    let matches_jet_formula = mat_diff_witness(g1.entries(), &from_jets).is_none();
    let matches_display = match branch {
        Branch::Plus => Some(mat_diff_witness(g1.entries(), &omega1_plus_claimed(&t, n)).is_none()),
        Branch::Minus => None,
    };
    Ok(BranchPencil {
        n,
        branch,
        tau: tau(&t, n, branch),
        g1,
        g2,
        matches_jet_formula,
        matches_display,
    })
}

/// The displayed Euler field `E = −(2/(√3n))u₁∂₁ − (1/√3)u₂∂₂` (plus branch;
/// the minus branch has the opposite sign).
pub fn euler_claimed(t: &Arc<VarTable>, n: i64, branch: Branch) -> Result<VectorField> {
    let s = branch.sign();
    VectorField::new(
        t,
        vec![
            rq(t, QuadExt::from_parts(0, 1, -2 * s, 3 * n), &[("u1", qi(1))]),
            rq(t, QuadExt::from_parts(0, 1, -s, 3), &[("u2", qi(1))]),
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffgeo::{euler_fields, is_flat, mat_eq};

    #[test]
    fn sigma_has_order_2n() {
        let s = MonomialGroupElement::sigma(2);
        assert!(s.pow(4).is_identity());
        assert!(!s.pow(2).is_identity());
    }

    #[test]
    fn alpha_squared_is_central_sign() {
        let a = MonomialGroupElement::alpha(2);
        let s = MonomialGroupElement::sigma(2);
        assert_eq!(a.pow(2), s.pow(2));
        assert_eq!(a.pow(2), MonomialGroupElement::new(2, [0, 1], [2, 2]));
    }

    #[test]
    fn group_orders() {
        for n in 2..=8 {
            let rep = group_relations_check(n).unwrap();
            assert!(rep.passed(), "n={n}: {rep:?}");
        }
        assert_eq!(closure(3).len(), 12);
        assert!(group_relations_check(1).is_err());
    }

    #[test]
    fn invariance_examples() {
        let inv = InvariantSet::new(2).unwrap();
        let a = MonomialGroupElement::alpha(2);
        let s = MonomialGroupElement::sigma(2);
        assert!(invariance_check(&inv.u1, &a).unwrap());
        assert!(invariance_check(&inv.u3, &a).unwrap());
        let t = &inv.table;
        assert!(invariance_check(&xmono(t, 1, 1, 1), &s).unwrap());
        assert!(!invariance_check(&xmono(t, 1, 2, 0), &s).unwrap());
        for n in 2..=8 {
            assert!(invariants_check(n).unwrap().passed());
        }
    }

    #[test]
    fn syzygy() {
        assert!(syzygy_check(2).unwrap());
        assert!(syzygy_check(5).unwrap());
        assert!(!syzygy_expr(3, 5).unwrap().is_zero());
    }

    #[test]
    fn pushforward_matches_display() {
        for n in [2, 3] {
            let rep = hessian_pushforward(n).unwrap();
            assert!(rep.verified, "n={n} {:?}", rep.witness);
            assert!(is_flat(&rep.metric).unwrap().flat);
        }
    }

    #[test]
    fn lie_along_jet_field() {
        let rep = lie_jet_check(2).unwrap();
        assert!(rep.matches, "{:?}", rep.witness);
    }

    #[test]
    fn ode_extraction() {
        let rep = ode_check(2).unwrap();
        assert!(rep.passed(), "{rep:?}");
        let m = rep.multiplier.unwrap();
        let t = m.table().clone();
        let expect = rq(&t, QuadExt::ratio(-4, 3), &[("u1", qi(-1))]);
        assert!(m.equals(&expect), "{m}");
    }

    #[test]
    fn plus_branch_fields() {
        let bp = branch_pencil(2, Branch::Plus).unwrap();
        assert!(bp.matches_jet_formula);
        assert_eq!(bp.matches_display, Some(true));
        let (e, euler) = euler_fields(&bp.g1, &bp.g2, &bp.tau).unwrap();
        let t = bp.g1.table().clone();
        assert!(euler.equals(&euler_claimed(&t, 2, Branch::Plus).unwrap()));
        let f = rq(&t, QuadExt::one(), &[("u1", f_exponent(2, Branch::Plus))]);
        assert!(e.comp(0).is_zero() && e.comp(1).equals(&f));
        let le = lie_metric(&bp.g2, &euler).unwrap();
        let d1 = QuadExt::from_parts(0, 1, 2, 3 * 2);
        let scaled: Matrix = bp.g2.entries().iter().map(|r| r.iter().map(|x| x.scale_quad(&d1)).collect()).collect();
        assert!(mat_eq(&le, &scaled));
    }
}
