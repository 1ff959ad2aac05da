//! Flat coordinates, degrees, potential reconstruction, Frobenius axioms and
//! the two-dimensional normal form.
//!
//! The flat chart is stored with a positive variable `w1` and `t2`; the flat
//! coordinate is `t1 = s·w1` with `s = −1` on the plus branch and `s = +1` on
//! the minus branch, so irrational powers only ever hit positive bases.
//! Matrices and vector fields below are components in the t-frame written as
//! functions of `(w1, t2)`.

use std::sync::Arc;

use crate::dicyclic::{f_exponent, Branch, BranchPencil};
use crate::diffgeo::{mat_diff_witness, ContraMetric, Matrix, VectorField};
use crate::error::{Error, Result};
use crate::exactnum::QuadExt;
use crate::radconst::RadicalConstant;
use crate::symexpr::{GenExpr, MonoImage, Monomial, RatExpr, VarTable};

/// Coordinates `tᵢ = sᵢ·vᵢ` over the variables `vᵢ` of a chart.
#[derive(Clone, Debug)]
pub struct FlatFrame {
    pub table: Arc<VarTable>,
    pub coords: Vec<usize>,
    pub signs: Vec<i64>,
}

impl FlatFrame {
    pub fn new(table: &Arc<VarTable>, signs: Vec<i64>) -> Result<Self> {
        let coords = table.chart_indices();
        if coords.len() != signs.len() || signs.iter().any(|s| s.abs() != 1) {
            return Err(Error::Dimension {
                expected: coords.len(),
                got: signs.len(),
            });
        }
        Ok(FlatFrame {
            table: table.clone(),
            coords,
            signs,
        })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    fn sign(&self, i: usize) -> QuadExt {
        QuadExt::int(self.signs[i])
    }

    /// `∂F/∂tⁱ`
    pub fn d(&self, i: usize, x: &GenExpr) -> Result<GenExpr> {
        Ok(x.diff(self.coords[i])?.scale_quad(&self.sign(i)))
    }

    /// `∫ x dtⁱ`
    pub fn integrate(&self, i: usize, x: &GenExpr) -> Result<GenExpr> {
        Ok(x.integrate(self.coords[i])?.scale_quad(&self.sign(i)))
    }

    /// The coordinate function `tⁱ`.
    pub fn coord(&self, i: usize) -> GenExpr {
        let mut exps = vec![QuadExt::zero(); self.table.len()];
        exps[self.coords[i]] = QuadExt::one();
        GenExpr::term(&self.table, RadicalConstant::from_quad(self.sign(i)), Monomial(exps)).expect("coordinate monomial")
    }

    /// Whether `x` is independent of `tⁱ`.
    pub fn independent_of(&self, i: usize, x: &GenExpr) -> bool {
        !x.depends_on(self.coords[i])
    }
}

pub fn flat_table() -> Arc<VarTable> {
    VarTable::chart(&[("w1", true), ("t2", false)])
}

/// `t1 = s·w1` sign per branch.
pub fn t1_sign(branch: Branch) -> i64 {
    -branch.sign()
}

#[derive(Clone, Debug)]
pub struct FlatCoordinates {
    pub branch: Branch,
    pub n: i64,
    pub frame: FlatFrame,
    /// `(w1, t2)` as functions on the u-chart.
    pub forward: [RatExpr; 2],
    /// `u1 ← c·w1`, `u2 ← c^a·w1^a·t2`.
    pub inverse: Vec<(&'static str, MonoImage)>,
    pub omega1: Matrix,
    pub omega2: Matrix,
    pub euler: VectorField,
    pub unity: VectorField,
    pub omega1_antidiagonal: bool,
    /// Ω₂ equals the displayed flat-chart matrix (plus branch only).
    pub omega2_matches_display: Option<bool>,
}

/// `(√3/(2n))`
fn w1_scale(n: i64) -> QuadExt {
    QuadExt::from_parts(0, 1, 1, 2 * n)
}

fn transform_field(
    x: &VectorField,
    forward: &[RatExpr; 2],
    frame: &FlatFrame,
    inverse: &[(&str, MonoImage)],
) -> Result<VectorField> {
    let t = &frame.table;
    let comps = (0..2)
        .map(|i| {
            let c = x.apply(&forward[i])?.subst_named(t, inverse)?;
            Ok(c.scale_quad(&frame.sign(i)))
        })
        .collect::<Result<Vec<_>>>()?;
    VectorField::new(t, comps)
}

fn transform_metric(
    g: &ContraMetric,
    forward: &[RatExpr; 2],
    frame: &FlatFrame,
    inverse: &[(&str, MonoImage)],
) -> Result<Matrix> {
    let coords = g.coords().to_vec();
    let jac: Vec<Vec<RatExpr>> = forward
        .iter()
        .map(|y| coords.iter().map(|&k| y.diff(k)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let r = coords.len();
    let mut out = vec![vec![RatExpr::zero(&frame.table); r]; r];
    for i in 0..r {
        for j in 0..r {
            let mut acc = RatExpr::zero(g.table());
            for k in 0..r {
                for l in 0..r {
                    if jac[i][k].is_zero() || jac[j][l].is_zero() || g.entry(k, l).is_zero() {
                        continue;
                    }
                    acc = &acc + &(&(&jac[i][k] * &jac[j][l]) * g.entry(k, l));
                }
            }
            let s = QuadExt::int(frame.signs[i] * frame.signs[j]);
            out[i][j] = acc.subst_named(&frame.table, inverse)?.scale_quad(&s);
        }
    }
    Ok(out)
}

/// `t₁ = ∓(√3/(2n))u₁`, `t₂ = u₂u₁^{−a}` with `a = n(1±√3)/2`.
pub fn flat_coordinates(pencil: &BranchPencil, euler: &VectorField, unity: &VectorField) -> Result<FlatCoordinates> {
    let (n, branch) = (pencil.n, pencil.branch);
    let ut = pencil.g1.table().clone();
    let a = f_exponent(n, branch);
    let forward = [
        RatExpr::from(GenExpr::mono(&ut, w1_scale(n), &[("u1", QuadExt::one())])?),
        RatExpr::from(GenExpr::mono(&ut, QuadExt::one(), &[("u2", QuadExt::one()), ("u1", -&a)])?),
    ];
    let ft = flat_table();
    let frame = FlatFrame::new(&ft, vec![t1_sign(branch), 1])?;
    let c = RadicalConstant::from_quad(w1_scale(n).inv()?);
    let inverse = vec![
        ("u1", MonoImage::build(&ft, c.clone(), &[("w1", QuadExt::one())])?),
        ("u2", MonoImage::build(&ft, c.pow(&a)?, &[("w1", a.clone()), ("t2", QuadExt::one())])?),
    ];
    let omega1 = transform_metric(&pencil.g1, &forward, &frame, &inverse)?;
    let omega2 = transform_metric(&pencil.g2, &forward, &frame, &inverse)?;
    let antidiag = antidiagonal(&ft);
    let omega1_antidiagonal = mat_diff_witness(&omega1, &antidiag).is_none();
    let omega2_matches_display = match branch {
        Branch::Plus => Some(mat_diff_witness(&omega2, &omega2_flat_plus_claimed(&ft, n)?).is_none()),
        Branch::Minus => None,
    };
    Ok(FlatCoordinates {
        branch,
        n,
        euler: transform_field(euler, &forward, &frame, &inverse)?,
        unity: transform_field(unity, &forward, &frame, &inverse)?,
        frame,
        forward,
        inverse,
        omega1,
        omega2,
        omega1_antidiagonal,
        omega2_matches_display,
    })
}

pub fn antidiagonal(t: &Arc<VarTable>) -> Matrix {
    let z = RatExpr::zero(t);
    let o = RatExpr::one(t);
    vec![vec![z.clone(), o.clone()], vec![o, z]]
}

/// `2^{1−√3n}·3^{(√3n+1)/2}·n²·n^{−√3n−1}`
fn omega2_flat_coeff(n: i64) -> Result<RadicalConstant> {
    let r3n = QuadExt::from_parts(0, 1, n, 1);
    let two = RadicalConstant::int(2).pow(&(&QuadExt::one() - &r3n))?;
    let three = RadicalConstant::int(3).pow(&(&(&r3n + &QuadExt::one()) * &QuadExt::ratio(1, 2)))?;
    let nn = RadicalConstant::int(n).pow(&(&(-&r3n) - &QuadExt::one()))?;
    Ok(&(&(&two * &three) * &nn) * &RadicalConstant::int(n * n))
}

/// The displayed plus-branch flat-chart Ω₂,
/// `[[−(2/(√3n))t₁, t₂], [t₂, 2^{1−√3n}3^{(√3n+1)/2}n²(−nt₁)^{−√3n−1}]]`,
/// written with `t₁ = −w₁`.
pub fn omega2_flat_plus_claimed(t: &Arc<VarTable>, n: i64) -> Result<Matrix> {
    let a = RatExpr::from(GenExpr::mono(t, QuadExt::from_parts(0, 1, 2, 3 * n), &[("w1", QuadExt::one())])?);
    let b = RatExpr::var(t, "t2")?;
    let e = QuadExt::from_parts(-1, 1, -n, 1);
    let c = RatExpr::from(GenExpr::mono_rc(t, omega2_flat_coeff(n)?, &[("w1", e)])?);
    Ok(vec![vec![a, b.clone()], vec![b, c]])
}

/// Reads `dᵢ` off `E = Σ dᵢ tⁱ ∂ᵢ`, rescaling so that the last degree is 1.
pub fn degrees_and_charge(euler: &VectorField, frame: &FlatFrame) -> Result<(Vec<QuadExt>, bool)> {
    let mut degs = Vec::with_capacity(frame.dim());
    for i in 0..frame.dim() {
        let ti = RatExpr::from(frame.coord(i));
        let q = euler
            .comp(i)
            .checked_div(&ti)?
            .as_quad()
            .ok_or(Error::NotDiagonalLinear(i))?;
        degs.push(q);
    }
    let last = degs.last().cloned().ok_or(Error::NotDiagonalLinear(0))?;
    if last.is_zero() {
        return Err(Error::NotDiagonalLinear(frame.dim() - 1));
    }
    if last.is_one() {
        return Ok((degs, false));
    }
    let inv = last.inv()?;
    Ok((degs.iter().map(|d| d * &inv).collect(), true))
}

/// `Rᵢʲ = ((d−1)/2)δᵢʲ + ∂ᵢEʲ` in the flat frame, where the connection of
/// the flat metric has vanishing Christoffel symbols.
pub fn flat_regularity(frame: &FlatFrame, euler: &VectorField, d: &QuadExt) -> Result<Matrix> {
    let r = frame.dim();
    let t = &frame.table;
    let half = &(d - &QuadExt::one()) * &QuadExt::ratio(1, 2);
    let mut m = vec![vec![RatExpr::zero(t); r]; r];
    for i in 0..r {
        for j in 0..r {
            let ej = as_gen(euler.comp(j))?;
            let mut v = RatExpr::from(frame.d(i, &ej)?);
            if i == j {
                v = &v + &RatExpr::quad(t, half.clone());
            }
            m[i][j] = v;
        }
    }
    Ok(m)
}

#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub hessian: Vec<Vec<GenExpr>>,
    pub integrable: bool,
    pub potential: GenExpr,
    pub hessian_matches: bool,
    pub gradient_equation: bool,
    pub euler_equation: bool,
}

impl Reconstruction {
    pub fn passed(&self) -> bool {
        self.integrable && self.hessian_matches && self.gradient_equation && self.euler_equation
    }
}

pub fn constant_matrix(m: &Matrix) -> Result<Vec<Vec<QuadExt>>> {
    m.iter()
        .map(|row| row.iter().map(|x| x.as_quad().ok_or(Error::Shape("non-constant entry".into()))).collect())
        .collect()
}

fn invert_constant(m: &[Vec<QuadExt>]) -> Result<Vec<Vec<QuadExt>>> {
    if m.len() != 2 {
        return Err(Error::Dimension {
            expected: 2,
            got: m.len(),
        });
    }
    let det = &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]);
    let di = det.inv().map_err(|_| Error::DegenerateMetric)?;
    Ok(vec![
        vec![&m[1][1] * &di, -(&m[0][1] * &di)],
        vec![-(&m[1][0] * &di), &m[0][0] * &di],
    ])
}

fn as_gen(x: &RatExpr) -> Result<GenExpr> {
    x.as_gen().cloned().ok_or(Error::NotPolynomial)
}

/// Potential of a closed 1-form with zero constants of integration.
pub fn potential_from_gradient(frame: &FlatFrame, omega: &[GenExpr]) -> Result<GenExpr> {
    let mut phi = GenExpr::zero(&frame.table);
    for i in 0..frame.dim() {
        let rest = &omega[i] - &frame.d(i, &phi)?;
        for k in 0..i {
            if !frame.independent_of(k, &rest) {
                return Err(Error::Integrability(format!("component {} after integrating {}", i + 1, k + 1)));
            }
        }
        phi = &phi + &frame.integrate(i, &rest)?;
    }
    Ok(phi)
}

/// Solves `∂ᵢ∂ⱼF = Σ η_{ik}η_{jl}Ω₂^{kl}/(d−1+d_k+d_l)` and checks the
/// gradient and Euler equations on the result.
pub fn reconstruct_potential(
    frame: &FlatFrame,
    omega1: &Matrix,
    omega2: &Matrix,
    degrees: &[QuadExt],
    d: &QuadExt,
) -> Result<Reconstruction> {
    let r = frame.dim();
    let eta = invert_constant(&constant_matrix(omega1)?)?;
    let one = QuadExt::one();
    let three = QuadExt::int(3);
    for k in 0..r {
        for l in 0..r {
            let den = &(&(d - &one) + &degrees[k]) + &degrees[l];
            if den.sign() == 0 {
                return Err(Error::Resonance(format!("d-1+d_{}+d_{}", k + 1, l + 1)));
            }
        }
        if (&(&three - d) - &degrees[k]).sign() == 0 {
            return Err(Error::Resonance(format!("3-d-d_{}", k + 1)));
        }
    }
    if (&three - d).sign() == 0 {
        return Err(Error::Resonance("3-d".into()));
    }
    let om: Vec<Vec<GenExpr>> = omega2.iter().map(|row| row.iter().map(as_gen).collect()).collect::<Result<_>>()?;
    let t = &frame.table;
    let mut hess = vec![vec![GenExpr::zero(t); r]; r];
    for i in 0..r {
        for j in 0..r {
            let mut acc = GenExpr::zero(t);
            for k in 0..r {
                for l in 0..r {
                    let c = &eta[i][k] * &eta[j][l];
                    if c.is_zero() || om[k][l].is_zero() {
                        continue;
                    }
                    let den = &(&(d - &one) + &degrees[k]) + &degrees[l];
                    acc = &acc + &om[k][l].scale_quad(&(&c * &den.inv()?));
                }
            }
            hess[i][j] = acc;
        }
    }
    let mut integrable = true;
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                if frame.d(k, &hess[i][j])? != frame.d(i, &hess[k][j])? {
                    integrable = false;
                }
            }
        }
    }
    if !integrable {
        return Err(Error::Integrability("mixed third derivatives differ".into()));
    }
    let grad = (0..r)
        .map(|j| potential_from_gradient(frame, &(0..r).map(|i| hess[i][j].clone()).collect::<Vec<_>>()))
        .collect::<Result<Vec<_>>>()?;
    let potential = potential_from_gradient(frame, &grad)?;

    let mut hessian_matches = true;
    let mut first = Vec::with_capacity(r);
    for i in 0..r {
        let fi = frame.d(i, &potential)?;
        for j in 0..r {
            if frame.d(j, &fi)? != hess[i][j] {
                hessian_matches = false;
            }
        }
        first.push(fi);
    }
    let euler_op = |x: &[GenExpr]| -> GenExpr {
        let mut acc = GenExpr::zero(t);
        for k in 0..r {
            acc = &acc + &(&frame.coord(k) * &x[k]).scale_quad(&degrees[k]);
        }
        acc
    };
    let mut gradient_equation = true;
    for (i, fi) in first.iter().enumerate() {
        let col: Vec<GenExpr> = (0..r).map(|k| frame.d(k, fi)).collect::<Result<_>>()?;
        let rhs = euler_op(&col).scale_quad(&(&(&three - d) - &degrees[i]).inv()?);
        if rhs != *fi {
            gradient_equation = false;
        }
    }
    let euler_equation = euler_op(&first).scale_quad(&(&three - d).inv()?) == potential;
    Ok(Reconstruction {
        hessian: hess,
        integrable,
        potential,
        hessian_matches,
        gradient_equation,
        euler_equation,
    })
}

/// The printed potentials in the `(w1, t2)` chart:
/// plus `2^{−√3n}3^{(√3n+1)/2}(−nt₁)^{1−√3n}/(3n²−1) + t₁t₂²/2`,
/// minus `2^{√3n}3^{(1−√3n)/2}(nt₁)^{√3n+1}/(3n²−1) + t₁t₂²/2`.
pub fn potential_claimed(t: &Arc<VarTable>, n: i64, branch: Branch) -> Result<GenExpr> {
    let s = branch.sign();
    let r3n = QuadExt::from_parts(0, 1, s * n, 1);
    let two = RadicalConstant::int(2).pow(&-&r3n)?;
    let three = RadicalConstant::int(3).pow(&(&(&r3n + &QuadExt::one()) * &QuadExt::ratio(1, 2)))?;
    let k = &QuadExt::one() - &r3n;
    let nk = RadicalConstant::int(n).pow(&k)?;
    let c = (&(&two * &three) * &nk).scale(&QuadExt::ratio(1, 3 * n * n - 1));
    let lead = GenExpr::mono_rc(t, c, &[("w1", k)])?;
    let cubic = GenExpr::mono(
        t,
        QuadExt::ratio(t1_sign(branch), 2),
        &[("w1", QuadExt::one()), ("t2", QuadExt::int(2))],
    )?;
    Ok(&lead + &cubic)
}

#[derive(Clone, Debug, Default)]
pub struct AxiomReport {
    pub unity: bool,
    pub quasihomogeneity: bool,
    pub wdvv: bool,
    pub commutativity: bool,
    pub witness: Option<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.unity && self.quasihomogeneity && self.wdvv && self.commutativity
    }
}

/// Third derivatives `c_{ijk} = ∂ᵢ∂ⱼ∂ₖF`.
pub fn third_derivatives(frame: &FlatFrame, f: &GenExpr) -> Result<Vec<Vec<Vec<GenExpr>>>> {
    let r = frame.dim();
    let mut out = Vec::with_capacity(r);
    for i in 0..r {
        let fi = frame.d(i, f)?;
        let mut row = Vec::with_capacity(r);
        for j in 0..r {
            let fij = frame.d(j, &fi)?;
            row.push((0..r).map(|k| frame.d(k, &fij)).collect::<Result<Vec<_>>>()?);
        }
        out.push(row);
    }
    Ok(out)
}

/// WDVV residuals `Σ c_{ijl}η^{lm}c_{mkn} − c_{ikl}η^{lm}c_{mjn}` for all index
/// choices; returns the first non-vanishing one.
pub fn wdvv_witness(c: &[Vec<Vec<GenExpr>>], eta_inv: &[Vec<QuadExt>]) -> Option<[usize; 4]> {
    let r = c.len();
    let t = c[0][0][0].table().clone();
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                for n in 0..r {
                    let mut acc = GenExpr::zero(&t);
                    for l in 0..r {
                        for m in 0..r {
                            let e = &eta_inv[l][m];
                            if e.is_zero() {
                                continue;
                            }
                            let a = &c[i][j][l] * &c[m][k][n];
                            let b = &c[i][k][l] * &c[m][j][n];
                            acc = &acc + &(&a - &b).scale_quad(e);
                        }
                    }
                    if !acc.is_zero() {
                        return Some([i, j, k, n]);
                    }
                }
            }
        }
    }
    None
}

/// Unity, Euler quasihomogeneity, WDVV and commutativity with unity of the
/// structure constants `c_{ij}^k = Σ η^{kl}c_{ijl}`.
pub fn verify_potential(
    frame: &FlatFrame,
    f: &GenExpr,
    eta: &[Vec<QuadExt>],
    degrees: &[QuadExt],
    d: &QuadExt,
) -> Result<AxiomReport> {
    let r = frame.dim();
    let t = &frame.table;
    let c = third_derivatives(frame, f)?;
    let eta_inv = invert_constant(eta)?;
    let mut rep = AxiomReport::default();
    let last = r - 1;
    rep.unity = true;
    for i in 0..r {
        for j in 0..r {
            if c[last][i][j] != GenExpr::quad(t, eta[i][j].clone()) {
                rep.unity = false;
                rep.witness.get_or_insert_with(|| format!("unity ({},{})", i + 1, j + 1));
            }
        }
    }
    let mut euler = GenExpr::zero(t);
    for k in 0..r {
        euler = &euler + &(&frame.coord(k) * &frame.d(k, f)?).scale_quad(&degrees[k]);
    }
    rep.quasihomogeneity = euler == f.scale_quad(&(&QuadExt::int(3) - d));
    if !rep.quasihomogeneity {
        rep.witness.get_or_insert_with(|| "Euler scaling".into());
    }
    let w = wdvv_witness(&c, &eta_inv);
    rep.wdvv = w.is_none();
    if let Some(w) = w {
        rep.witness
            .get_or_insert_with(|| format!("WDVV ({},{},{},{})", w[0] + 1, w[1] + 1, w[2] + 1, w[3] + 1));
    }
    // c_{ij}^k
    let mut sc = vec![vec![vec![GenExpr::zero(t); r]; r]; r];
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                let mut acc = GenExpr::zero(t);
                for l in 0..r {
                    if !eta_inv[k][l].is_zero() {
                        acc = &acc + &c[i][j][l].scale_quad(&eta_inv[k][l]);
                    }
                }
                sc[i][j][k] = acc;
            }
        }
    }
    rep.commutativity = true;
    for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                if sc[i][j][k] != sc[j][i][k] {
                    rep.commutativity = false;
                }
                let delta = if j == k { GenExpr::one(t) } else { GenExpr::zero(t) };
                if sc[last][j][k] != delta {
                    rep.commutativity = false;
                }
            }
        }
    }
    if !rep.commutativity {
        rep.witness.get_or_insert_with(|| "structure constants".into());
    }
    Ok(rep)
}

#[derive(Clone, Debug)]
pub struct NormalFormReport {
    /// `t₁ = a·z₁`
    pub a: QuadExt,
    /// `b²` for `t₂ = b·z₂`; negative values mean `b` is imaginary.
    pub b_squared: RadicalConstant,
    /// `F ↦ c·F`
    pub c: RadicalConstant,
    pub k: QuadExt,
    pub k_expected: QuadExt,
    /// `c·F(a z₁, b z₂)` in the `(z1, z2)` chart.
    pub transformed: GenExpr,
    pub shape_ok: bool,
    pub k_ok: bool,
}

impl NormalFormReport {
    pub fn passed(&self) -> bool {
        self.shape_ok && self.k_ok
    }
}

pub fn normal_table() -> Arc<VarTable> {
    VarTable::chart(&[("z1", true), ("z2", false)])
}

/// `k = (3−d)/(1−d)`
pub fn expected_k(d: &QuadExt) -> Result<QuadExt> {
    (&QuadExt::int(3) - d).checked_div(&(&QuadExt::one() - d))
}

/// Brings `F = c₁v₁ᵏ + c₂v₁t₂²` to `z₁ᵏ + z₂²z₁/2` by the scalings
/// `v₁ = z₁` (so `t₁ = s·z₁`), `t₂ = b z₂`, `F ↦ cF`.
pub fn normal_form(frame: &FlatFrame, f: &GenExpr, d: &QuadExt) -> Result<NormalFormReport> {
    let shape = || Error::Shape(f.to_string());
    if f.len() != 2 || frame.dim() != 2 {
        return Err(shape());
    }
    let (v1, v2) = (frame.coords[0], frame.coords[1]);
    let mut lead = None;
    let mut cubic = None;
    for (m, c) in f.terms() {
        let e2 = &m.0[v2];
        if e2.is_zero() {
            lead = Some((m.0[v1].clone(), c.clone()));
        } else if *e2 == QuadExt::int(2) && m.0[v1].is_one() {
            cubic = Some(c.clone());
        }
    }
    let ((k, c1), c2) = (lead.ok_or_else(shape)?, cubic.ok_or_else(shape)?);
    let c = c1.inv()?;
    let b_squared = &c1 * &c2.scale(&QuadExt::int(2)).inv()?;
    let zt = normal_table();
    let mut transformed = GenExpr::zero(&zt);
    for (m, coeff) in f.terms() {
        let e2 = m.0[v2].to_i64().filter(|e| e % 2 == 0 && *e >= 0).ok_or_else(shape)?;
        let scale = &(&c * coeff) * &b_squared.pow(&QuadExt::int(e2 / 2))?;
        let mut exps = vec![QuadExt::zero(); 2];
        exps[0] = m.0[v1].clone();
        exps[1] = QuadExt::int(e2);
        transformed = &transformed + &GenExpr::term(&zt, scale, Monomial(exps))?;
    }
    let target = &GenExpr::mono(&zt, QuadExt::one(), &[("z1", k.clone())])?
        + &GenExpr::mono(&zt, QuadExt::ratio(1, 2), &[("z1", QuadExt::one()), ("z2", QuadExt::int(2))])?;
    let k_expected = expected_k(d)?;
    Ok(NormalFormReport {
        a: QuadExt::int(frame.signs[0]),
        shape_ok: transformed == target,
        k_ok: k == k_expected,
        b_squared,
        c,
        k,
        k_expected,
        transformed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dicyclic::{branch_pencil, tau};
    use crate::diffgeo::{euler_fields, quasihom_check};

    fn pipeline(n: i64, branch: Branch) -> (FlatCoordinates, QuadExt) {
        let bp = branch_pencil(n, branch).unwrap();
        let t = bp.g1.table().clone();
        let qh = quasihom_check(&bp.g1, &bp.g2, &tau(&t, n, branch)).unwrap();
        assert!(qh.passed(), "{qh:?}");
        let (e, euler) = euler_fields(&bp.g1, &bp.g2, &bp.tau).unwrap();
        (flat_coordinates(&bp, &euler, &e).unwrap(), qh.charge.unwrap())
    }

    #[test]
    fn plus_branch_n2() {
        let n = 2;
        let (fc, d) = pipeline(n, Branch::Plus);
        assert_eq!(d, QuadExt::from_parts(1, 1, 2, 3 * n));
        assert!(fc.omega1_antidiagonal);
        assert_eq!(fc.omega2_matches_display, Some(true));
        let (degs, rescaled) = degrees_and_charge(&fc.euler, &fc.frame).unwrap();
        assert!(!rescaled);
        assert_eq!(degs[0], QuadExt::from_parts(0, 1, -2, 3 * n));
        assert_eq!(degs[1], QuadExt::one());
        let rec = reconstruct_potential(&fc.frame, &fc.omega1, &fc.omega2, &degs, &d).unwrap();
        assert!(rec.passed());
        assert_eq!(rec.potential, potential_claimed(&fc.frame.table, n, Branch::Plus).unwrap());
        let eta = constant_matrix(&fc.omega1).unwrap();
        let ax = verify_potential(&fc.frame, &rec.potential, &eta, &degs, &d).unwrap();
        assert!(ax.passed(), "{ax:?}");
        let nf = normal_form(&fc.frame, &rec.potential, &d).unwrap();
        assert!(nf.passed());
        assert_eq!(nf.k, QuadExt::from_parts(1, 1, -n, 1));
        assert_eq!(nf.b_squared.single_sign(), Some(-1));
        let r = constant_matrix(&flat_regularity(&fc.frame, &fc.euler, &d).unwrap()).unwrap();
        assert_eq!(r[0][0], QuadExt::from_parts(0, 1, -1, 3 * n));
        assert_eq!(r[1][1], QuadExt::from_parts(1, 1, 1, 3 * n));
        assert!(r[0][1].is_zero() && r[1][0].is_zero());
    }

    #[test]
    fn minus_branch_n3() {
        let n = 3;
        let (fc, d) = pipeline(n, Branch::Minus);
        assert_eq!(d, QuadExt::from_parts(1, 1, -2, 3 * n));
        assert!(fc.omega1_antidiagonal);
        let (degs, _) = degrees_and_charge(&fc.euler, &fc.frame).unwrap();
        assert_eq!(degs[0], QuadExt::from_parts(0, 1, 2, 3 * n));
        let rec = reconstruct_potential(&fc.frame, &fc.omega1, &fc.omega2, &degs, &d).unwrap();
        assert!(rec.passed());
        assert_eq!(rec.potential, potential_claimed(&fc.frame.table, n, Branch::Minus).unwrap());
        let nf = normal_form(&fc.frame, &rec.potential, &d).unwrap();
        assert!(nf.passed());
        assert_eq!(nf.k, QuadExt::from_parts(1, 1, n, 1));
    }

    #[test]
    fn toy_normal_form_is_fixed() {
        let t = VarTable::chart(&[("z1", true), ("z2", false)]);
        let frame = FlatFrame::new(&t, vec![1, 1]).unwrap();
        let f = &GenExpr::mono(&t, QuadExt::one(), &[("z1", QuadExt::int(3))]).unwrap()
            + &GenExpr::mono(&t, QuadExt::ratio(1, 2), &[("z1", QuadExt::one()), ("z2", QuadExt::int(2))]).unwrap();
        let nf = normal_form(&frame, &f, &QuadExt::zero()).unwrap();
        assert!(nf.passed());
        assert_eq!(nf.k, QuadExt::int(3));
        assert!(nf.c.is_one() && nf.b_squared.is_one() && nf.a.is_one());
    }

    #[test]
    fn cubic_term_alone() {
        // F = t1 t2²/2 with degrees (1, 1) and d = 0: 1 + 2 = 3 − d.
        let t = VarTable::chart(&[("w1", true), ("t2", false)]);
        let frame = FlatFrame::new(&t, vec![1, 1]).unwrap();
        let f = GenExpr::mono(&t, QuadExt::ratio(1, 2), &[("w1", QuadExt::one()), ("t2", QuadExt::int(2))]).unwrap();
        let eta = vec![vec![QuadExt::zero(), QuadExt::one()], vec![QuadExt::one(), QuadExt::zero()]];
        let degs = vec![QuadExt::one(), QuadExt::one()];
        let ok = verify_potential(&frame, &f, &eta, &degs, &QuadExt::zero()).unwrap();
        assert!(ok.passed());
        let bad = verify_potential(&frame, &f, &eta, &degs, &QuadExt::one()).unwrap();
        assert!(bad.unity && bad.wdvv && !bad.quasihomogeneity);
    }

    #[test]
    fn constant_metric_gives_cubic() {
        let t = VarTable::chart(&[("w1", true), ("t2", false)]);
        let frame = FlatFrame::new(&t, vec![1, 1]).unwrap();
        let o1 = antidiagonal(&t);
        let o2 = antidiagonal(&t);
        let degs = vec![QuadExt::one(), QuadExt::one()];
        let rec = reconstruct_potential(&frame, &o1, &o2, &degs, &QuadExt::zero()).unwrap();
        assert!(rec.hessian.iter().flatten().all(|h| h.as_constant().is_some()));
    }

    #[test]
    fn doubled_leading_coefficient_breaks_reconstruction() {
        let n = 2;
        let (fc, d) = pipeline(n, Branch::Plus);
        let (degs, _) = degrees_and_charge(&fc.euler, &fc.frame).unwrap();
        let t = &fc.frame.table;
        let f = potential_claimed(t, n, Branch::Plus).unwrap();
        let (m, c) = f.terms().find(|(m, _)| m.0[1].is_zero()).map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let doubled = &f + &GenExpr::term(t, c, m).unwrap();
        let eta = constant_matrix(&fc.omega1).unwrap();
        let ax = verify_potential(&fc.frame, &doubled, &eta, &degs, &d).unwrap();
        assert!(ax.unity && ax.wdvv);
        let rec = reconstruct_potential(&fc.frame, &fc.omega1, &fc.omega2, &degs, &d).unwrap();
        let h11 = fc.frame.d(0, &fc.frame.d(0, &doubled).unwrap()).unwrap();
        assert_ne!(h11, rec.hessian[0][0]);
    }
}
