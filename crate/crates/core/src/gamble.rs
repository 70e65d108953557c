//! Gambles on finite carriers, cut measurability and stopped processes.

use std::collections::HashMap;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::{approx_eq, max_of, min_of, Scalar};
use crate::tree::{Cut, EventTree, NodeId};

/// A real-valued map on an ordered finite carrier of labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Gamble<S> {
    carrier: Vec<String>,
    values: Vec<S>,
}

impl<S: Scalar> Gamble<S> {
    pub fn new(carrier: Vec<String>, values: Vec<S>) -> Result<Self> {
        if carrier.len() != values.len() {
            return Err(Error::CarrierMismatch(format!(
                "{} labels but {} values",
                carrier.len(),
                values.len()
            )));
        }
        if let Some(bad) = values.iter().position(|v| !v.is_finite_value()) {
            return Err(Error::CarrierMismatch(format!(
                "value at `{}` is not finite",
                carrier[bad]
            )));
        }
        Ok(Self { carrier, values })
    }

    pub fn from_pairs<L: Into<String>>(pairs: impl IntoIterator<Item = (L, S)>) -> Result<Self> {
        let (carrier, values) = pairs.into_iter().map(|(l, v)| (l.into(), v)).unzip();
        Self::new(carrier, values)
    }

    pub fn constant(carrier: Vec<String>, c: S) -> Self {
        let values = vec![c; carrier.len()];
        Self { carrier, values }
    }

    /// Indicator of the labels in `event`.
    pub fn indicator(carrier: Vec<String>, event: &[&str]) -> Self {
        let values = carrier
            .iter()
            .map(|l| {
                if event.contains(&l.as_str()) {
                    S::one()
                } else {
                    S::zero()
                }
            })
            .collect();
        Self { carrier, values }
    }

    /// A gamble on the sample space of `tree`, valued by `f(label)`.
    pub fn on_terminals(tree: &EventTree, f: impl Fn(&str) -> S) -> Self {
        let carrier = tree.terminal_labels();
        let values = carrier.iter().map(|l| f(l)).collect();
        Self { carrier, values }
    }

    pub fn carrier(&self) -> &[String] {
        &self.carrier
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, label: &str) -> Option<&S> {
        self.carrier
            .iter()
            .position(|l| l == label)
            .map(|i| &self.values[i])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &S)> {
        self.carrier.iter().map(String::as_str).zip(&self.values)
    }

    pub fn min(&self) -> Option<S> {
        min_of(&self.values)
    }

    pub fn max(&self) -> Option<S> {
        max_of(&self.values)
    }

    fn check_same_carrier(&self, other: &Self) -> Result<()> {
        if self.carrier != other.carrier {
            return Err(Error::CarrierMismatch(format!(
                "{:?} vs {:?}",
                self.carrier, other.carrier
            )));
        }
        Ok(())
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        Self {
            carrier: self.carrier.clone(),
            values: self.values.iter().map(f).collect(),
        }
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Result<Self> {
        self.check_same_carrier(other)?;
        Ok(Self {
            carrier: self.carrier.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() + b.clone())
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() - b.clone())
    }

    pub fn pointwise_min(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| if a <= b { a.clone() } else { b.clone() })
    }

    pub fn scale(&self, lambda: &S) -> Self {
        self.map(|v| lambda.clone() * v.clone())
    }

    pub fn shift(&self, alpha: &S) -> Self {
        self.map(|v| v.clone() + alpha.clone())
    }

    /// Pointwise `self >= other`, within tolerance.
    pub fn dominates(&self, other: &Self) -> Result<bool> {
        self.check_same_carrier(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .all(|(a, b)| crate::scalar::approx_ge(a, b)))
    }

    /// Values for the terminals through `t`, in preorder. The carrier must
    /// contain every such terminal; extra labels are ignored.
    pub fn terminal_values(&self, tree: &EventTree, t: NodeId) -> Result<Vec<S>> {
        let range = tree.terminal_range(t);
        let terms = &tree.terminals()[range];
        // Fast path: carrier is exactly the sample space in tree order.
        if self.carrier.len() == tree.terminals().len()
            && self
                .carrier
                .iter()
                .zip(tree.terminals())
                .all(|(l, &w)| l == tree.label(w))
        {
            return Ok(self.values[tree.terminal_range(t)].to_vec());
        }
        let lookup: HashMap<&str, &S> = self.iter().collect();
        terms
            .iter()
            .map(|&w| {
                lookup
                    .get(tree.label(w))
                    .map(|v| (*v).clone())
                    .ok_or_else(|| {
                        Error::CarrierMismatch(format!(
                            "gamble has no value for path `{}`",
                            tree.label(w)
                        ))
                    })
            })
            .collect()
    }
}

impl<S: Scalar> Neg for &Gamble<S> {
    type Output = Gamble<S>;
    fn neg(self) -> Gamble<S> {
        self.map(|v| -v.clone())
    }
}

impl<S: Scalar> Neg for Gamble<S> {
    type Output = Gamble<S>;
    fn neg(self) -> Gamble<S> {
        -&self
    }
}

impl<S: Scalar> Add for &Gamble<S> {
    type Output = Gamble<S>;
    /// Panics on carrier mismatch; use [`Gamble::try_add`] otherwise.
    fn add(self, rhs: Self) -> Gamble<S> {
        self.try_add(rhs).expect("carriers must match")
    }
}

impl<S: Scalar> Sub for &Gamble<S> {
    type Output = Gamble<S>;
    fn sub(self, rhs: Self) -> Gamble<S> {
        self.try_sub(rhs).expect("carriers must match")
    }
}

/// Operations accepted by [`gamble_arith`].
#[derive(Debug, Clone)]
pub enum GambleOp<'a, S> {
    Add(&'a Gamble<S>),
    Sub(&'a Gamble<S>),
    Scale(S),
    Shift(S),
    PointwiseMin(&'a Gamble<S>),
    Negate,
}

pub fn gamble_arith<S: Scalar>(f: &Gamble<S>, op: GambleOp<'_, S>) -> Result<Gamble<S>> {
    match op {
        GambleOp::Add(g) => f.try_add(g),
        GambleOp::Sub(g) => f.try_sub(g),
        GambleOp::Scale(l) => Ok(f.scale(&l)),
        GambleOp::Shift(a) => Ok(f.shift(&a)),
        GambleOp::PointwiseMin(g) => f.pointwise_min(g),
        GambleOp::Negate => Ok(-f),
    }
}

/// True iff `f` is constant on the paths through each member of `cut`.
pub fn is_cut_measurable<S: Scalar>(tree: &EventTree, f: &Gamble<S>, cut: &Cut) -> Result<bool> {
    let values = f.terminal_values(tree, cut.base())?;
    let offset = tree.terminal_range(cut.base()).start;
    Ok(cut.members().iter().all(|&u| {
        let r = tree.terminal_range(u);
        let block = &values[r.start - offset..r.end - offset];
        block.iter().all(|v| approx_eq(v, &block[0]))
    }))
}

/// Reads a cut-measurable gamble as a gamble on the cut members.
pub fn project_to_cut<S: Scalar>(tree: &EventTree, f: &Gamble<S>, cut: &Cut) -> Result<Gamble<S>> {
    if !is_cut_measurable(tree, f, cut)? {
        return Err(Error::NotMeasurable(format!(
            "not constant on every member of the cut of `{}`",
            tree.label(cut.base())
        )));
    }
    let values = f.terminal_values(tree, cut.base())?;
    let offset = tree.terminal_range(cut.base()).start;
    let (carrier, vals) = cut
        .members()
        .iter()
        .map(|&u| {
            (
                tree.label(u).to_owned(),
                values[tree.terminal_range(u).start - offset].clone(),
            )
        })
        .unzip();
    Gamble::new(carrier, vals)
}

/// Lifts a gamble on the cut members back to the paths through the cut's base.
pub fn embed_from_cut<S: Scalar>(tree: &EventTree, g: &Gamble<S>, cut: &Cut) -> Result<Gamble<S>> {
    let mut carrier = Vec::new();
    let mut values = Vec::new();
    for &u in cut.members() {
        let v = g.get(tree.label(u)).ok_or_else(|| {
            Error::CarrierMismatch(format!("no value for cut member `{}`", tree.label(u)))
        })?;
        for &w in &tree.terminals()[tree.terminal_range(u)] {
            carrier.push(tree.label(w).to_owned());
            values.push(v.clone());
        }
    }
    Gamble::new(carrier, values)
}

/// A real process defined on every situation following `base`.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeProcess<S> {
    base: NodeId,
    values: Vec<S>,
}

impl<S: Scalar> TreeProcess<S> {
    /// `values[i]` belongs to the `i`-th situation of the subtree of `base`
    /// in preorder.
    pub fn new(tree: &EventTree, base: NodeId, values: Vec<S>) -> Result<Self> {
        if values.len() != tree.subtree_len(base) {
            return Err(Error::CarrierMismatch(format!(
                "process needs {} values, got {}",
                tree.subtree_len(base),
                values.len()
            )));
        }
        Ok(Self { base, values })
    }

    pub fn from_fn(tree: &EventTree, base: NodeId, f: impl Fn(NodeId) -> S) -> Self {
        Self {
            base,
            values: tree.subtree(base).map(f).collect(),
        }
    }

    pub fn base(&self) -> NodeId {
        self.base
    }

    pub fn at(&self, s: NodeId) -> &S {
        &self.values[s.0 - self.base.0]
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    /// The variable obtained by restricting the process to terminals.
    pub fn terminal_gamble(&self, tree: &EventTree) -> Gamble<S> {
        let terms = &tree.terminals()[tree.terminal_range(self.base)];
        Gamble {
            carrier: terms.iter().map(|&w| tree.label(w).to_owned()).collect(),
            values: terms.iter().map(|&w| self.at(w).clone()).collect(),
        }
    }

    /// The process values at the cut members, as a gamble on the cut.
    pub fn at_cut(&self, tree: &EventTree, cut: &Cut) -> Gamble<S> {
        Gamble {
            carrier: cut.member_labels(tree).map(str::to_owned).collect(),
            values: cut.members().iter().map(|&u| self.at(u).clone()).collect(),
        }
    }
}

/// The `U`-stopped process: unchanged up to the cut, frozen at `F(u)` beyond
/// each member `u`.
pub fn stop_process<S: Scalar>(
    tree: &EventTree,
    process: &TreeProcess<S>,
    cut: &Cut,
) -> Result<TreeProcess<S>> {
    if !tree.precedes_node(process.base, cut.base()) {
        return Err(Error::CarrierMismatch(format!(
            "process starts at `{}`, which does not precede `{}`",
            tree.label(process.base),
            tree.label(cut.base())
        )));
    }
    let base = cut.base();
    Ok(TreeProcess::from_fn(tree, base, |s| {
        match cut
            .members()
            .iter()
            .find(|&&u| tree.precedes_node(u, s))
        {
            Some(&u) => process.at(u).clone(),
            None => process.at(s).clone(),
        }
    }))
}
