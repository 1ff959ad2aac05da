//! Contravariant metrics and the tensor calculus needed to recognise a
//! regular quasihomogeneous flat pencil.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::QuadExt;
use crate::symexpr::{same_table, RatExpr, VarTable};

pub type Matrix = Vec<Vec<RatExpr>>;

/// `(duⁱ, duʲ)` on the chart coordinates of `table`.
#[derive(Clone, Debug)]
pub struct ContraMetric {
    table: Arc<VarTable>,
    coords: Vec<usize>,
    entries: Matrix,
}

#[derive(Clone, Debug)]
pub struct VectorField {
    table: Arc<VarTable>,
    comps: Vec<RatExpr>,
}

#[derive(Clone, Debug)]
pub struct ChristoffelData {
    /// `lower[k][i][j] = Γᵏ_{ij}`
    pub lower: Vec<Matrix>,
    /// `upper[i][j][k] = Γ^{ij}_k`
    pub upper: Vec<Matrix>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CurvatureReport {
    pub flat: bool,
    /// First non-vanishing component `R^a_{bcd}`, if any.
    pub witness: Option<[usize; 4]>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PencilReport {
    pub flat_in_lambda: bool,
    pub christoffel_additive: bool,
    pub witness: Option<String>,
}

impl PencilReport {
    pub fn passed(&self) -> bool {
        self.flat_in_lambda && self.christoffel_additive
    }
}

#[derive(Clone, Debug)]
pub struct QuasiHomReport {
    pub bracket_e_euler: bool,
    pub lie_euler_g2: bool,
    pub lie_e_g2: bool,
    pub lie_e_g1: bool,
    pub charge: Option<QuadExt>,
    pub witness: Option<String>,
}

impl QuasiHomReport {
    pub fn passed(&self) -> bool {
        self.bracket_e_euler && self.lie_euler_g2 && self.lie_e_g2 && self.lie_e_g1 && self.charge.is_some()
    }
}

#[derive(Clone, Debug)]
pub struct RegularityReport {
    pub matrix: Matrix,
    pub nondegenerate: bool,
}

fn check_square(m: &Matrix, r: usize) -> Result<()> {
    if m.len() != r || m.iter().any(|row| row.len() != r) {
        return Err(Error::MalformedMatrix);
    }
    Ok(())
}

pub fn zero_matrix(table: &Arc<VarTable>, r: usize) -> Matrix {
    vec![vec![RatExpr::zero(table); r]; r]
}

pub fn mat_eq(a: &Matrix, b: &Matrix) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(x, y)| x.len() == y.len() && x.iter().zip(y).all(|(p, q)| p.equals(q)))
}

pub fn mat_is_zero(a: &Matrix) -> bool {
    a.iter().all(|row| row.iter().all(|x| x.is_zero()))
}

/// First entry where `a` and `b` differ.
pub fn mat_diff_witness(a: &Matrix, b: &Matrix) -> Option<(usize, usize)> {
    for (i, (x, y)) in a.iter().zip(b).enumerate() {
        for (j, (p, q)) in x.iter().zip(y).enumerate() {
            if !p.equals(q) {
                return Some((i, j));
            }
        }
    }
    None
}

pub fn determinant(m: &Matrix) -> Result<RatExpr> {
    let r = m.len();
    check_square(m, r)?;
    match r {
        0 => Err(Error::MalformedMatrix),
        1 => Ok(m[0][0].clone()),
        2 => Ok(&(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0])),
        _ => {
            // Laplace expansion along the first row.
            let mut acc = RatExpr::zero(m[0][0].table());
            for j in 0..r {
                let minor: Matrix = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
                    .collect();
                let term = &m[0][j] * &determinant(&minor)?;
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            Ok(acc)
        }
    }
}

pub fn inverse(m: &Matrix) -> Result<Matrix> {
    let r = m.len();
    check_square(m, r)?;
    let t = m[0][0].table().clone();
    if r == 2 {
        let det = determinant(m)?;
        if det.is_zero() {
            return Err(Error::DegenerateMetric);
        }
        let di = det.inv()?;
        return Ok(vec![
            vec![&m[1][1] * &di, -&(&m[0][1] * &di)],
            vec![-&(&m[1][0] * &di), &m[0][0] * &di],
        ]);
    }
    // Gauss-Jordan with exact pivots.
    let mut a = m.clone();
    let mut inv = zero_matrix(&t, r);
    for (i, row) in inv.iter_mut().enumerate() {
        row[i] = RatExpr::one(&t);
    }
    for col in 0..r {
        let piv = (col..r).find(|&k| !a[k][col].is_zero()).ok_or(Error::DegenerateMetric)?;
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col].inv()?;
        for j in 0..r {
            a[col][j] = &a[col][j] * &p;
            inv[col][j] = &inv[col][j] * &p;
        }
        for k in 0..r {
            if k == col || a[k][col].is_zero() {
                continue;
            }
            let f = a[k][col].clone();
            for j in 0..r {
                a[k][j] = &a[k][j] - &(&f * &a[col][j]);
                inv[k][j] = &inv[k][j] - &(&f * &inv[col][j]);
            }
        }
    }
    Ok(inv)
}

impl ContraMetric {
    pub fn new(table: &Arc<VarTable>, entries: Matrix) -> Result<Self> {
        let coords = table.chart_indices();
        check_square(&entries, coords.len())?;
        for row in &entries {
            for x in row {
                if !same_table(x.table(), table) {
                    return Err(Error::TableMismatch);
                }
            }
        }
        let r = coords.len();
        for i in 0..r {
            for j in i + 1..r {
                if !entries[i][j].equals(&entries[j][i]) {
                    return Err(Error::MalformedMatrix);
                }
            }
        }
        if determinant(&entries)?.is_zero() {
            return Err(Error::DegenerateMetric);
        }
        Ok(ContraMetric {
            table: table.clone(),
            coords,
            entries,
        })
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[usize] {
        &self.coords
    }

    pub fn entries(&self) -> &Matrix {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> &RatExpr {
        &self.entries[i][j]
    }

    /// Covariant metric `g_{ij}`.
    pub fn covariant(&self) -> Result<Matrix> {
        inverse(&self.entries)
    }

    fn d(&self, x: &RatExpr, k: usize) -> Result<RatExpr> {
        x.diff(self.coords[k])
    }

    /// Re-express on another table by variable names.
    pub fn remap(&self, target: &Arc<VarTable>) -> Result<ContraMetric> {
        let entries = self
            .entries
            .iter()
            .map(|row| row.iter().map(|x| x.remap(target)).collect::<Result<Vec<_>>>())
            .collect::<Result<Matrix>>()?;
        ContraMetric::new(target, entries)
    }
}

impl VectorField {
    pub fn new(table: &Arc<VarTable>, comps: Vec<RatExpr>) -> Result<Self> {
        let r = table.chart_indices().len();
        if comps.len() != r {
            return Err(Error::Dimension {
                expected: r,
                got: comps.len(),
            });
        }
        if comps.iter().any(|c| !same_table(c.table(), table)) {
            return Err(Error::TableMismatch);
        }
        Ok(VectorField {
            table: table.clone(),
            comps,
        })
    }

    pub fn zero(table: &Arc<VarTable>) -> Self {
        let r = table.chart_indices().len();
        VectorField {
            table: table.clone(),
            comps: vec![RatExpr::zero(table); r],
        }
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn comps(&self) -> &[RatExpr] {
        &self.comps
    }

    pub fn comp(&self, i: usize) -> &RatExpr {
        &self.comps[i]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    pub fn equals(&self, o: &VectorField) -> bool {
        self.comps.len() == o.comps.len() && self.comps.iter().zip(&o.comps).all(|(a, b)| a.equals(b))
    }

    pub fn add(&self, o: &VectorField) -> VectorField {
        VectorField {
            table: self.table.clone(),
            comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a + b).collect(),
        }
    }

    /// `X(f) = Xᵏ ∂_k f`.
    pub fn apply(&self, f: &RatExpr) -> Result<RatExpr> {
        let coords = self.table.chart_indices();
        let mut acc = RatExpr::zero(&self.table);
        for (k, c) in self.comps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            acc = &acc + &(c * &f.diff(coords[k])?);
        }
        Ok(acc)
    }
}

/// Levi-Civita symbols of the covariant metric and their contravariant form.
pub fn christoffels(g: &ContraMetric) -> Result<ChristoffelData> {
    let r = g.dim();
    let t = g.table().clone();
    let cov = g.covariant()?;
    // dg[l][i][j] = ∂_l g_{ij}
    let mut dg = Vec::with_capacity(r);
    for l in 0..r {
        let mut m = zero_matrix(&t, r);
        for i in 0..r {
            for j in i..r {
                let v = g.d(&cov[i][j], l)?;
                m[i][j] = v.clone();
                m[j][i] = v;
            }
        }
        dg.push(m);
    }
    // first kind: [ij, l] = ½(∂_i g_{lj} + ∂_j g_{li} − ∂_l g_{ij})
    let half = QuadExt::ratio(1, 2);
    let mut lower = vec![zero_matrix(&t, r); r];
    for i in 0..r {
        for j in i..r {
            let first: Vec<RatExpr> = (0..r)
                .map(|l| (&(&dg[i][l][j] + &dg[j][l][i]) - &dg[l][i][j]).scale_quad(&half))
                .collect();
            for (k, lk) in lower.iter_mut().enumerate() {
                let mut acc = RatExpr::zero(&t);
                for (l, f) in first.iter().enumerate() {
                    if !f.is_zero() && !g.entries[k][l].is_zero() {
                        acc = &acc + &(&g.entries[k][l] * f);
                    }
                }
                lk[i][j] = acc.clone();
                lk[j][i] = acc;
            }
        }
    }
    let upper = contravariant_symbols(g, &lower);
    Ok(ChristoffelData { lower, upper })
}

/// `Γ^{ij}_k = −Σ_s g^{is} Γʲ_{sk}`.
fn contravariant_symbols(g: &ContraMetric, lower: &[Matrix]) -> Vec<Matrix> {
    let r = g.dim();
    let t = g.table();
    let mut upper = vec![zero_matrix(t, r); r];
    for (i, ui) in upper.iter_mut().enumerate() {
        for (j, uij) in ui.iter_mut().enumerate() {
            for (k, slot) in uij.iter_mut().enumerate() {
                let mut acc = RatExpr::zero(t);
                for s in 0..r {
                    let a = &g.entries[i][s];
                    let b = &lower[j][s][k];
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc - &(a * b);
                    }
                }
                *slot = acc;
            }
        }
    }
    upper
}

/// `R^a_{bcd} = ∂_c Γ^a_{db} − ∂_d Γ^a_{cb} + Γ^a_{ce}Γ^e_{db} − Γ^a_{de}Γ^e_{cb}`,
/// computed for `c < d` (the tensor is antisymmetric in the last pair).
pub fn riemann(g: &ContraMetric, ch: &ChristoffelData) -> Result<Vec<([usize; 4], RatExpr)>> {
    let r = g.dim();
    let gam = &ch.lower;
    let mut out = Vec::new();
    for a in 0..r {
        for b in 0..r {
            for c in 0..r {
                for d in c + 1..r {
                    let mut v = &g.d(&gam[a][d][b], c)? - &g.d(&gam[a][c][b], d)?;
                    for e in 0..r {
                        v = &v + &(&gam[a][c][e] * &gam[e][d][b]);
                        v = &v - &(&gam[a][d][e] * &gam[e][c][b]);
                    }
                    out.push(([a, b, c, d], v));
                }
            }
        }
    }
    Ok(out)
}

pub fn is_flat(g: &ContraMetric) -> Result<CurvatureReport> {
    let ch = christoffels(g)?;
    is_flat_with(g, &ch)
}

pub fn is_flat_with(g: &ContraMetric, ch: &ChristoffelData) -> Result<CurvatureReport> {
    let witness = riemann(g, ch)?.into_iter().find(|(_, v)| !v.is_zero()).map(|(idx, _)| idx);
    Ok(CurvatureReport {
        flat: witness.is_none(),
        witness,
    })
}

/// `(Lie_X g)^{ij} = Xᵏ∂_k g^{ij} − g^{kj}∂_k Xⁱ − g^{ik}∂_k Xʲ`.
pub fn lie_metric(g: &ContraMetric, x: &VectorField) -> Result<Matrix> {
    if !same_table(g.table(), x.table()) {
        return Err(Error::TableMismatch);
    }
    let r = g.dim();
    let t = g.table();
    let mut dx = zero_matrix(t, r); // dx[k][i] = ∂_k Xⁱ
    for k in 0..r {
        for i in 0..r {
            dx[k][i] = g.d(&x.comps[i], k)?;
        }
    }
    let mut out = zero_matrix(t, r);
    for i in 0..r {
        for j in i..r {
            let mut acc = x.apply(&g.entries[i][j])?;
            for k in 0..r {
                if !dx[k][i].is_zero() {
                    acc = &acc - &(&g.entries[k][j] * &dx[k][i]);
                }
                if !dx[k][j].is_zero() {
                    acc = &acc - &(&g.entries[i][k] * &dx[k][j]);
                }
            }
            out[i][j] = acc.clone();
            out[j][i] = acc;
        }
    }
    Ok(out)
}

/// `[X, Y]ⁱ = X(Yⁱ) − Y(Xⁱ)`.
pub fn bracket(x: &VectorField, y: &VectorField) -> Result<VectorField> {
    let comps = x
        .comps
        .iter()
        .zip(&y.comps)
        .map(|(xi, yi)| Ok(&x.apply(yi)? - &y.apply(xi)?))
        .collect::<Result<Vec<_>>>()?;
    VectorField::new(x.table(), comps)
}

/// Gradient of `τ` with respect to a contravariant metric: `Σ_s g^{is}∂_sτ`.
pub fn gradient(g: &ContraMetric, tau: &RatExpr) -> Result<VectorField> {
    let r = g.dim();
    let dt = (0..r).map(|s| g.d(tau, s)).collect::<Result<Vec<_>>>()?;
    let comps = (0..r)
        .map(|i| {
            let mut acc = RatExpr::zero(g.table());
            for (s, d) in dt.iter().enumerate() {
                if !d.is_zero() {
                    acc = &acc + &(&g.entries[i][s] * d);
                }
            }
            acc
        })
        .collect();
    VectorField::new(g.table(), comps)
}

/// `(e, E) = (∇₁τ, ∇₂τ)`.
pub fn euler_fields(g1: &ContraMetric, g2: &ContraMetric, tau: &RatExpr) -> Result<(VectorField, VectorField)> {
    if !same_table(g1.table(), g2.table()) {
        return Err(Error::TableMismatch);
    }
    Ok((gradient(g1, tau)?, gradient(g2, tau)?))
}

/// Checks that `g2 + λ g1` is flat identically in `λ` and that its
/// contravariant Christoffel symbols are `Γ₂ + λΓ₁`.
pub fn pencil_check(g1: &ContraMetric, g2: &ContraMetric) -> Result<PencilReport> {
    if !same_table(g1.table(), g2.table()) {
        return Err(Error::TableMismatch);
    }
    let pt = g1.table().with_pencil("lambda");
    let lam = RatExpr::var(&pt, "lambda")?;
    let a = g1.remap(&pt)?;
    let b = g2.remap(&pt)?;
    let r = a.dim();
    let entries: Matrix = (0..r)
        .map(|i| (0..r).map(|j| &b.entries[i][j] + &(&lam * &a.entries[i][j])).collect())
        .collect();
    let gl = ContraMetric::new(&pt, entries)?;
    let ch = christoffels(&gl)?;
    let curv = is_flat_with(&gl, &ch)?;
    let ca = christoffels(&a)?;
    let cb = christoffels(&b)?;
    let mut witness = curv.witness.map(|w| format!("R^{}_{}{}{}", w[0] + 1, w[1] + 1, w[2] + 1, w[3] + 1));
    let mut additive = true;
    'outer: for i in 0..r {
        for j in 0..r {
            for k in 0..r {
                let expect = &cb.upper[i][j][k] + &(&lam * &ca.upper[i][j][k]);
                if !ch.upper[i][j][k].equals(&expect) {
                    additive = false;
                    witness.get_or_insert_with(|| format!("Gamma^{}{}_{}", i + 1, j + 1, k + 1));
                    break 'outer;
                }
            }
        }
    }
    Ok(PencilReport {
        flat_in_lambda: curv.flat,
        christoffel_additive: additive,
        witness,
    })
}

/// The constant `c` with `a = c·b` entrywise, if one exists.
pub fn scalar_ratio(a: &Matrix, b: &Matrix) -> std::result::Result<QuadExt, String> {
    let mut ratio: Option<QuadExt> = None;
    for (i, (ra, rb)) in a.iter().zip(b).enumerate() {
        for (j, (x, y)) in ra.iter().zip(rb).enumerate() {
            if y.is_zero() {
                if !x.is_zero() {
                    return Err(format!("entry ({},{}) nonzero where the metric vanishes", i + 1, j + 1));
                }
                continue;
            }
            let q = x
                .checked_div(y)
                .ok()
                .and_then(|r| r.as_quad())
                .ok_or_else(|| format!("entry ({},{}) ratio is not constant", i + 1, j + 1))?;
            match &ratio {
                None => ratio = Some(q),
                Some(prev) if *prev == q => {}
                Some(_) => return Err(format!("entry ({},{}) ratio differs", i + 1, j + 1)),
            }
        }
    }
    ratio.ok_or_else(|| "metric is zero".to_string())
}

pub fn quasihom_check(g1: &ContraMetric, g2: &ContraMetric, tau: &RatExpr) -> Result<QuasiHomReport> {
    let (e, euler) = euler_fields(g1, g2, tau)?;
    let br = bracket(&e, &euler)?;
    let bracket_e_euler = br.equals(&e);
    let lie_e_g2 = mat_eq(&lie_metric(g2, &e)?, g1.entries());
    let lie_e_g1 = mat_is_zero(&lie_metric(g1, &e)?);
    let le = lie_metric(g2, &euler)?;
    let mut witness = None;
    let charge = match scalar_ratio(&le, g2.entries()) {
        Ok(c) => Some(&c + &QuadExt::one()),
        Err(w) => {
            witness = Some(format!("Lie_E g2: {w}"));
            None
        }
    };
    if !bracket_e_euler {
        witness.get_or_insert_with(|| "[e,E] != e".to_string());
    }
    if !lie_e_g2 {
        witness.get_or_insert_with(|| "Lie_e g2 != g1".to_string());
    }
    if !lie_e_g1 {
        witness.get_or_insert_with(|| "Lie_e g1 != 0".to_string());
    }
    Ok(QuasiHomReport {
        bracket_e_euler,
        lie_euler_g2: charge.is_some(),
        lie_e_g2,
        lie_e_g1,
        charge,
        witness,
    })
}

/// `Rᵢʲ = ((d−1)/2)δᵢʲ + ∇ᵢEʲ` with the Levi-Civita connection of `g1`.
pub fn regularity(g1: &ContraMetric, euler: &VectorField, d: &QuadExt) -> Result<RegularityReport> {
    let ch = christoffels(g1)?;
    let r = g1.dim();
    let t = g1.table();
    let half = (d - &QuadExt::one()) * QuadExt::ratio(1, 2);
    let mut m = zero_matrix(t, r);
    for i in 0..r {
        for j in 0..r {
            let mut v = g1.d(&euler.comps[j], i)?;
            for k in 0..r {
                if !euler.comps[k].is_zero() && !ch.lower[j][i][k].is_zero() {
                    v = &v + &(&ch.lower[j][i][k] * &euler.comps[k]);
                }
            }
            if i == j {
                v = &v + &RatExpr::quad(t, half.clone());
            }
            m[i][j] = v;
        }
    }
    let nondegenerate = !determinant(&m)?.is_zero();
    Ok(RegularityReport { matrix: m, nondegenerate })
}

/// `((d−1)/2)δᵢʲ + ∂ᵢEʲ` in the given chart, without connection terms.
pub fn regularity_chart_partial(table: &Arc<VarTable>, euler: &VectorField, d: &QuadExt) -> Result<Matrix> {
    let coords = table.chart_indices();
    let r = coords.len();
    let half = (d - &QuadExt::one()) * QuadExt::ratio(1, 2);
    let mut m = zero_matrix(table, r);
    for i in 0..r {
        for j in 0..r {
            let mut v = euler.comps[j].diff(coords[i])?;
            if i == j {
                v = &v + &RatExpr::quad(table, half.clone());
            }
            m[i][j] = v;
        }
    }
    Ok(m)
}
