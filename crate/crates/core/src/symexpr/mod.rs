//! Exact generalized polynomials with Q(√3) exponents, rational expressions
//! over them, and jet/pencil variables.

mod genexpr;
mod ratexpr;
pub mod render;
mod vartable;

pub use genexpr::{expr_diff, expr_integrate, GenExpr, MonoImage, Monomial};
pub use ratexpr::{rat_arith, RatExpr};
pub use vartable::{same_table, Var, VarKind, VarTable, VarTableBuilder};

use crate::error::{Error, Result};
use crate::radconst::RingOp;

/// Ring operations dispatched on `op`.
pub fn expr_arith(x: &GenExpr, y: &GenExpr, op: RingOp) -> Result<GenExpr> {
    if !same_table(x.table(), y.table()) {
        return Err(Error::TableMismatch);
    }
    Ok(match op {
        RingOp::Add => x + y,
        RingOp::Sub => x - y,
        RingOp::Mul => x * y,
    })
}

/// Simultaneous monomial substitution keyed by variable name.
pub fn expr_subst_monomial(
    x: &GenExpr,
    target: &std::sync::Arc<VarTable>,
    images: &[(&str, MonoImage)],
) -> Result<GenExpr> {
    x.subst_named(target, images)
}

#[cfg(test)]
mod tests;
