use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactnum::QuadExt;
use crate::radconst::RadicalConstant;

use super::vartable::{same_table, VarKind, VarTable};

/// Exponent tuple, one Q(√3) entry per table variable. Ordered
/// lexicographically by the real values of the entries.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomial(pub Vec<QuadExt>);

impl Monomial {
    pub fn one(len: usize) -> Self {
        Monomial(vec![QuadExt::zero(); len])
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|e| e.is_zero())
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn div(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn inv(&self) -> Monomial {
        Monomial(self.0.iter().map(|a| -a).collect())
    }
}

/// Canonical sum of `RadicalConstant × monomial` terms with Q(√3) exponents.
#[derive(Clone, Debug)]
pub struct GenExpr {
    table: Arc<VarTable>,
    terms: BTreeMap<Monomial, RadicalConstant>,
}

/// Image of one variable under a monomial substitution: `coeff · ∏ vⱼ^{exps[j]}`
/// over the target table.
#[derive(Clone, Debug)]
pub struct MonoImage {
    pub coeff: RadicalConstant,
    pub exps: Vec<QuadExt>,
}

impl MonoImage {
    pub fn new(coeff: RadicalConstant, exps: Vec<QuadExt>) -> Self {
        MonoImage { coeff, exps }
    }

    /// `coeff · ∏ name^e` on `table`.
    pub fn build(table: &VarTable, coeff: RadicalConstant, powers: &[(&str, QuadExt)]) -> Result<Self> {
        let mut exps = vec![QuadExt::zero(); table.len()];
        for (name, e) in powers {
            let i = table.require(name)?;
            exps[i] = &exps[i] + e;
        }
        Ok(MonoImage { coeff, exps })
    }
}

impl PartialEq for GenExpr {
    fn eq(&self, other: &Self) -> bool {
        same_table(&self.table, &other.table) && self.terms == other.terms
    }
}

impl Eq for GenExpr {}

impl GenExpr {
    pub fn zero(table: &Arc<VarTable>) -> Self {
        GenExpr {
            table: table.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(table: &Arc<VarTable>) -> Self {
        GenExpr::constant(table, RadicalConstant::one())
    }

    pub fn constant(table: &Arc<VarTable>, c: RadicalConstant) -> Self {
        let mut e = GenExpr::zero(table);
        e.insert(Monomial::one(table.len()), c);
        e
    }

    pub fn quad(table: &Arc<VarTable>, q: QuadExt) -> Self {
        GenExpr::constant(table, RadicalConstant::from_quad(q))
    }

    pub fn var(table: &Arc<VarTable>, name: &str) -> Result<Self> {
        GenExpr::mono(table, QuadExt::one(), &[(name, QuadExt::one())])
    }

    /// `coeff · ∏ name^e`.
    pub fn mono(table: &Arc<VarTable>, coeff: QuadExt, powers: &[(&str, QuadExt)]) -> Result<Self> {
        GenExpr::mono_rc(table, RadicalConstant::from_quad(coeff), powers)
    }

    pub fn mono_rc(
        table: &Arc<VarTable>,
        coeff: RadicalConstant,
        powers: &[(&str, QuadExt)],
    ) -> Result<Self> {
        let img = MonoImage::build(table, coeff, powers)?;
        GenExpr::term(table, img.coeff, Monomial(img.exps))
    }

    /// A single term, validated against the table's positivity flags.
    pub fn term(table: &Arc<VarTable>, coeff: RadicalConstant, m: Monomial) -> Result<Self> {
        if m.0.len() != table.len() {
            return Err(Error::Dimension {
                expected: table.len(),
                got: m.0.len(),
            });
        }
        check_exponents(table, &m)?;
        let mut e = GenExpr::zero(table);
        e.insert(m, coeff);
        Ok(e)
    }

    pub(crate) fn from_terms_unchecked(
        table: &Arc<VarTable>,
        terms: impl IntoIterator<Item = (Monomial, RadicalConstant)>,
    ) -> Self {
        let mut e = GenExpr::zero(table);
        for (m, c) in terms {
            e.insert(m, c);
        }
        e
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &RadicalConstant)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&RadicalConstant> {
        self.terms.get(m)
    }

    /// The largest term in the monomial order.
    pub fn leading_term(&self) -> Option<(&Monomial, &RadicalConstant)> {
        self.terms.iter().next_back()
    }

    pub fn lowest_term(&self) -> Option<(&Monomial, &RadicalConstant)> {
        self.terms.iter().next()
    }

    /// The constant value, if the expression has no variable dependence.
    pub fn as_constant(&self) -> Option<RadicalConstant> {
        match self.terms.len() {
            0 => Some(RadicalConstant::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn as_quad(&self) -> Option<QuadExt> {
        self.as_constant()?.as_quad()
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.terms.keys().any(|m| !m.0[var].is_zero())
    }

    fn insert(&mut self, m: Monomial, c: RadicalConstant) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(cur) => {
                let sum = &*cur + &c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *cur = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    fn assert_table(&self, other: &GenExpr) {
        assert!(
            same_table(&self.table, &other.table),
            "expressions over different variable tables"
        );
    }

    pub fn checked_add(&self, other: &GenExpr) -> Result<GenExpr> {
        if !same_table(&self.table, &other.table) {
            return Err(Error::TableMismatch);
        }
        Ok(self + other)
    }

    pub fn checked_sub(&self, other: &GenExpr) -> Result<GenExpr> {
        if !same_table(&self.table, &other.table) {
            return Err(Error::TableMismatch);
        }
        Ok(self - other)
    }

    pub fn checked_mul(&self, other: &GenExpr) -> Result<GenExpr> {
        if !same_table(&self.table, &other.table) {
            return Err(Error::TableMismatch);
        }
        Ok(self * other)
    }

    pub fn scale(&self, c: &RadicalConstant) -> GenExpr {
        if c.is_zero() {
            return GenExpr::zero(&self.table);
        }
        let mut out = GenExpr::zero(&self.table);
        for (m, k) in &self.terms {
            out.insert(m.clone(), k * c);
        }
        out
    }

    pub fn scale_quad(&self, q: &QuadExt) -> GenExpr {
        if q.is_zero() {
            return GenExpr::zero(&self.table);
        }
        GenExpr {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.scale(q))).collect(),
        }
    }

    /// Multiply by `c · m`. The monomial is not validated.
    pub fn mul_term(&self, c: &RadicalConstant, m: &Monomial) -> GenExpr {
        let mut out = GenExpr::zero(&self.table);
        for (k, v) in &self.terms {
            out.insert(k.mul(m), v * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> GenExpr {
        let mut acc = GenExpr::one(&self.table);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Partial derivative with respect to a chart variable. Jet variables
    /// attached to `var` follow the chain rule `∂ J_k = J_{k+1}`.
    pub fn diff(&self, var: usize) -> Result<GenExpr> {
        let table = &self.table;
        if table.var(var).kind != VarKind::Chart {
            return Err(Error::NotChartVariable(table.name(var).to_string()));
        }
        let jets: Vec<(usize, Option<usize>)> = (0..table.len())
            .filter_map(|j| match table.var(j).kind {
                VarKind::Jet { base, order } if base == var => {
                    Some((j, table.jet(base, order + 1)))
                }
                _ => None,
            })
            .collect();
        let mut out = GenExpr::zero(table);
        for (m, c) in &self.terms {
            let e = &m.0[var];
            if !e.is_zero() {
                let mut m2 = m.clone();
                m2.0[var] = e - &QuadExt::one();
                out.insert(m2, c.scale(e));
            }
            for (j, next) in &jets {
                let ej = &m.0[*j];
                if ej.is_zero() {
                    continue;
                }
                let next = next.ok_or_else(|| Error::JetDepthExceeded(table.name(*j).to_string()))?;
                let mut m2 = m.clone();
                m2.0[*j] = ej - &QuadExt::one();
                m2.0[next] = &m2.0[next] + &QuadExt::one();
                out.insert(m2, c.scale(ej));
            }
        }
        Ok(out)
    }

    pub fn diff_name(&self, name: &str) -> Result<GenExpr> {
        self.diff(self.table.require(name)?)
    }

    /// Term-wise antiderivative in `var` with zero constant of integration.
    pub fn integrate(&self, var: usize) -> Result<GenExpr> {
        let table = &self.table;
        if table.var(var).kind != VarKind::Chart {
            return Err(Error::NotChartVariable(table.name(var).to_string()));
        }
        for (j, v) in table.vars().iter().enumerate() {
            if matches!(v.kind, VarKind::Jet { base, .. } if base == var) && self.depends_on(j) {
                return Err(Error::UnexpectedDependence(v.name.clone()));
            }
        }
        let minus_one = QuadExt::int(-1);
        let mut out = GenExpr::zero(table);
        for (m, c) in &self.terms {
            let e = &m.0[var];
            if *e == minus_one {
                let single = GenExpr::from_terms_unchecked(table, [(m.clone(), c.clone())]);
                return Err(Error::LogarithmicIntegral(single.to_string()));
            }
            let e1 = e + &QuadExt::one();
            let mut m2 = m.clone();
            m2.0[var] = e1.clone();
            out.insert(m2, c.scale(&e1.inv()?));
        }
        Ok(out)
    }

    pub fn integrate_name(&self, name: &str) -> Result<GenExpr> {
        self.integrate(self.table.require(name)?)
    }

    /// Simultaneous monomial substitution into `target`. Variables without an
    /// image are carried over by name.
    pub fn subst_monomials(
        &self,
        target: &Arc<VarTable>,
        images: &HashMap<usize, MonoImage>,
    ) -> Result<GenExpr> {
        let passthrough = self.passthrough(target, images)?;
        let mut pow_cache: HashMap<(usize, QuadExt), RadicalConstant> = HashMap::new();
        let mut out = GenExpr::zero(target);
        for (m, c) in &self.terms {
            let mut exps = vec![QuadExt::zero(); target.len()];
            let mut coeff = c.clone();
            for (i, e) in m.0.iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                match images.get(&i) {
                    Some(img) => {
                        let key = (i, e.clone());
                        let p = match pow_cache.get(&key) {
                            Some(p) => p.clone(),
                            None => {
                                let p = img.coeff.pow(e)?;
                                pow_cache.insert(key, p.clone());
                                p
                            }
                        };
                        coeff = &coeff * &p;
                        for (j, ej) in img.exps.iter().enumerate() {
                            if !ej.is_zero() {
                                exps[j] = &exps[j] + &(e * ej);
                            }
                        }
                    }
                    None => {
                        let j = passthrough[i].expect("checked by passthrough");
                        exps[j] = &exps[j] + e;
                    }
                }
            }
            let m2 = Monomial(exps);
            check_exponents(target, &m2)?;
            out.insert(m2, coeff);
        }
        Ok(out)
    }

    /// Convenience wrapper for [`GenExpr::subst_monomials`] keyed by name.
    pub fn subst_named(&self, target: &Arc<VarTable>, images: &[(&str, MonoImage)]) -> Result<GenExpr> {
        let map = named_images(&self.table, images)?;
        self.subst_monomials(target, &map)
    }

    /// Re-express over another table by matching variable names.
    pub fn remap(&self, target: &Arc<VarTable>) -> Result<GenExpr> {
        if same_table(&self.table, target) {
            return Ok(self.clone());
        }
        self.subst_monomials(target, &HashMap::new())
    }

    fn passthrough(
        &self,
        target: &Arc<VarTable>,
        images: &HashMap<usize, MonoImage>,
    ) -> Result<Vec<Option<usize>>> {
        let mut out = Vec::with_capacity(self.table.len());
        for i in 0..self.table.len() {
            if images.contains_key(&i) {
                out.push(None);
                continue;
            }
            let name = self.table.name(i);
            match target.index(name) {
                Some(j) => out.push(Some(j)),
                None if !self.depends_on(i) => out.push(None),
                None => return Err(Error::UnknownVariable(name.to_string())),
            }
        }
        Ok(out)
    }

    /// Exact quotient `self / d`, if `d` divides `self` within `max_steps`
    /// leading-term reductions.
    pub fn div_exact(&self, d: &GenExpr, max_steps: usize) -> Option<GenExpr> {
        self.assert_table(d);
        let (dl_m, dl_c) = d.leading_term()?;
        let dl_inv = dl_c.inv().ok()?;
        if self.is_zero() {
            return Some(GenExpr::zero(&self.table));
        }
        let (nlo, _) = self.lowest_term()?;
        let (dlo, _) = d.lowest_term()?;
        let floor = nlo.div(dlo);
        let mut rem = self.clone();
        let mut quo = GenExpr::zero(&self.table);
        for _ in 0..max_steps {
            let Some((rm, rc)) = rem.leading_term() else {
                return Some(quo);
            };
            let qm = rm.div(dl_m);
            if qm < floor {
                return None;
            }
            let qc = rc * &dl_inv;
            rem = &rem - &d.mul_term(&qc, &qm);
            quo.insert(qm, qc);
        }
        rem.is_zero().then_some(quo)
    }
}

pub(crate) fn named_images(table: &VarTable, images: &[(&str, MonoImage)]) -> Result<HashMap<usize, MonoImage>> {
    images
        .iter()
        .map(|(n, img)| Ok((table.require(n)?, img.clone())))
        .collect()
}

pub(crate) fn check_exponents(table: &VarTable, m: &Monomial) -> Result<()> {
    for (i, e) in m.0.iter().enumerate() {
        if !table.var(i).positive && !e.is_integer() {
            return Err(Error::IrrationalExponent {
                var: table.name(i).to_string(),
                exponent: e.to_string(),
            });
        }
    }
    Ok(())
}

/// Free-function forms of the ring operations.
pub fn expr_diff(x: &GenExpr, var: &str) -> Result<GenExpr> {
    x.diff_name(var)
}

pub fn expr_integrate(x: &GenExpr, var: &str) -> Result<GenExpr> {
    x.integrate_name(var)
}

impl<'a> Add<&'a GenExpr> for &'a GenExpr {
    type Output = GenExpr;
    fn add(self, o: &GenExpr) -> GenExpr {
        self.assert_table(o);
        let (big, small) = if self.len() >= o.len() { (self, o) } else { (o, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a GenExpr> for &'a GenExpr {
    type Output = GenExpr;
    fn sub(self, o: &GenExpr) -> GenExpr {
        self.assert_table(o);
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.insert(m.clone(), -c);
        }
        out
    }
}

impl<'a> Mul<&'a GenExpr> for &'a GenExpr {
    type Output = GenExpr;
    fn mul(self, o: &GenExpr) -> GenExpr {
        self.assert_table(o);
        let mut out = GenExpr::zero(&self.table);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                out.insert(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &GenExpr {
    type Output = GenExpr;
    fn neg(self) -> GenExpr {
        self.scale_quad(&QuadExt::int(-1))
    }
}

fn fmt_exponent(e: &QuadExt) -> String {
    if e.is_integer() {
        e.to_string()
    } else if e.is_rational() {
        format!("({e})")
    } else {
        let s = e.to_string();
        if s.starts_with('(') {
            s
        } else {
            format!("({s})")
        }
    }
}

pub(crate) fn fmt_monomial(table: &VarTable, m: &Monomial) -> String {
    let parts: Vec<String> = m
        .0
        .iter()
        .enumerate()
        .filter(|(_, e)| !e.is_zero())
        .map(|(i, e)| {
            if e.is_one() {
                table.name(i).to_string()
            } else {
                format!("{}^{}", table.name(i), fmt_exponent(e))
            }
        })
        .collect();
    parts.join("*")
}

impl fmt::Display for GenExpr {
    /// Deterministic plain-text form: terms in decreasing monomial order,
    /// `coeff*var^exp*...` joined by ` + `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let mono = fmt_monomial(&self.table, m);
                if mono.is_empty() {
                    c.to_string()
                } else if c.is_one() {
                    mono
                } else if c.as_quad().and_then(|q| q.unit_sign()) == Some(-1) {
                    format!("-{mono}")
                } else {
                    format!("{c}*{mono}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
