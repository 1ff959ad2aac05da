use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VarKind {
    /// A coordinate of the chart; the only kind that may be differentiated.
    Chart,
    /// `order`-th derivative of an unknown function of the chart variable
    /// `base`.
    Jet { base: usize, order: u8 },
    /// Formal pencil parameter.
    Pencil,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Var {
    pub name: String,
    /// Positive variables may carry irrational exponents.
    pub positive: bool,
    pub kind: VarKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct VarTable {
    vars: Vec<Var>,
}

impl VarTable {
    pub fn builder() -> VarTableBuilder {
        VarTableBuilder::default()
    }

    /// A table holding only chart variables, `(name, positive)`.
    pub fn chart(vars: &[(&str, bool)]) -> Arc<VarTable> {
        let mut b = VarTable::builder();
        for (name, positive) in vars {
            b = b.chart(name, *positive);
        }
        b.build()
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn var(&self, i: usize) -> &Var {
        &self.vars[i]
    }

    pub fn vars(&self) -> &[Var] {
        &self.vars
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    pub fn require(&self, name: &str) -> Result<usize> {
        self.index(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn name(&self, i: usize) -> &str {
        &self.vars[i].name
    }

    /// Indices of the chart coordinates, in table order.
    pub fn chart_indices(&self) -> Vec<usize> {
        self.vars
            .iter()
            .enumerate()
            .filter(|(_, v)| v.kind == VarKind::Chart)
            .map(|(i, _)| i)
            .collect()
    }

    /// The jet variable of `order` attached to chart variable `base`.
    pub fn jet(&self, base: usize, order: u8) -> Option<usize> {
        self.vars
            .iter()
            .position(|v| v.kind == VarKind::Jet { base, order })
    }

    /// A copy of this table with an extra pencil parameter appended.
    pub fn with_pencil(&self, name: &str) -> Arc<VarTable> {
        let mut t = self.clone();
        t.vars.push(Var {
            name: name.to_string(),
            positive: false,
            kind: VarKind::Pencil,
        });
        Arc::new(t)
    }
}

pub fn same_table(a: &Arc<VarTable>, b: &Arc<VarTable>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[derive(Default)]
pub struct VarTableBuilder {
    vars: Vec<Var>,
}

impl VarTableBuilder {
    pub fn chart(mut self, name: &str, positive: bool) -> Self {
        self.vars.push(Var {
            name: name.to_string(),
            positive,
            kind: VarKind::Chart,
        });
        self
    }

    /// Jet chain `names[k]` standing for the k-th derivative of an unknown
    /// function of `base`.
    pub fn jets(mut self, base: &str, names: &[&str]) -> Self {
        let b = self
            .vars
            .iter()
            .position(|v| v.name == base)
            .expect("jet base must be declared first");
        for (k, name) in names.iter().enumerate() {
            self.vars.push(Var {
                name: name.to_string(),
                positive: false,
                kind: VarKind::Jet {
                    base: b,
                    order: k as u8,
                },
            });
        }
        self
    }

    pub fn pencil(mut self, name: &str) -> Self {
        self.vars.push(Var {
            name: name.to_string(),
            positive: false,
            kind: VarKind::Pencil,
        });
        self
    }

    pub fn build(self) -> Arc<VarTable> {
        Arc::new(VarTable { vars: self.vars })
    }
}
