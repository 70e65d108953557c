//! Local imprecise belief models on a finite move space.
//!
//! A [`LocalModel`] carries its carrier (the child labels of the situation it
//! is attached to) and one of four variants. Its lower prevision is the
//! supremum acceptable buying price for a gamble on that carrier.

use crate::error::{Error, Result};
use crate::gamble::Gamble;
use crate::scalar::{dot, min_of, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub enum ModelKind<S> {
    /// Lower prevision is the minimum.
    Vacuous,
    /// A single mass function.
    Precise(Vec<S>),
    /// `(1 − delta)·E_center + delta·min`.
    LinearVacuous { center: Vec<S>, delta: S },
    /// Lower envelope of finitely many mass functions.
    Credal(Vec<Vec<S>>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalModel<S> {
    carrier: Vec<String>,
    kind: ModelKind<S>,
}

fn check_mass<S: Scalar>(mass: &[S], n: usize) -> Result<()> {
    if mass.len() != n {
        return Err(Error::InvalidModel(format!(
            "mass has {} entries for {} moves",
            mass.len(),
            n
        )));
    }
    if let Some(p) = mass.iter().find(|p| **p < -S::tolerance() || !p.is_finite_value()) {
        return Err(Error::InvalidModel(format!("negative mass {p}")));
    }
    let total = mass.iter().fold(S::zero(), |a, p| a + p.clone());
    if (total.clone() - S::one()).abs() > S::tolerance() {
        return Err(Error::InvalidModel(format!("masses sum to {total}, not 1")));
    }
    Ok(())
}

impl<S: Scalar> LocalModel<S> {
    pub fn new(carrier: Vec<String>, kind: ModelKind<S>) -> Result<Self> {
        let n = carrier.len();
        if n == 0 {
            return Err(Error::InvalidModel("empty carrier".into()));
        }
        match &kind {
            ModelKind::Vacuous => {}
            ModelKind::Precise(p) => check_mass(p, n)?,
            ModelKind::LinearVacuous { center, delta } => {
                check_mass(center, n)?;
                if *delta < S::zero() || *delta > S::one() {
                    return Err(Error::InvalidModel(format!(
                        "contamination {delta} outside [0, 1]"
                    )));
                }
            }
            ModelKind::Credal(points) => {
                if points.is_empty() {
                    return Err(Error::InvalidModel("credal set without extreme points".into()));
                }
                for p in points {
                    check_mass(p, n)?;
                }
            }
        }
        Ok(Self { carrier, kind })
    }

    pub fn vacuous(carrier: Vec<String>) -> Self {
        Self {
            carrier,
            kind: ModelKind::Vacuous,
        }
    }

    pub fn precise(carrier: Vec<String>, mass: Vec<S>) -> Result<Self> {
        Self::new(carrier, ModelKind::Precise(mass))
    }

    pub fn linear_vacuous(carrier: Vec<String>, center: Vec<S>, delta: S) -> Result<Self> {
        Self::new(carrier, ModelKind::LinearVacuous { center, delta })
    }

    /// Uniform-centre contamination model in which each move's probability
    /// lies within `half_width` of `1/n`; for two moves this is the coin model
    /// with contamination `2·half_width`.
    pub fn coin(carrier: Vec<String>, half_width: S) -> Result<Self> {
        let n = carrier.len();
        let nn = S::from_usize(n).expect("small carrier");
        let center = vec![S::one() / nn.clone(); n];
        let delta = half_width * nn;
        Self::linear_vacuous(carrier, center, delta)
    }

    pub fn credal(carrier: Vec<String>, points: Vec<Vec<S>>) -> Result<Self> {
        Self::new(carrier, ModelKind::Credal(points))
    }

    pub fn carrier(&self) -> &[String] {
        &self.carrier
    }

    pub fn kind(&self) -> &ModelKind<S> {
        &self.kind
    }

    /// Same model on relabelled moves (same order).
    pub fn with_carrier(&self, carrier: Vec<String>) -> Result<Self> {
        if carrier.len() != self.carrier.len() {
            return Err(Error::CarrierMismatch(format!(
                "model has {} moves, new carrier {}",
                self.carrier.len(),
                carrier.len()
            )));
        }
        Ok(Self {
            carrier,
            kind: self.kind.clone(),
        })
    }

    /// Whether a credal model lists the same extreme point twice.
    pub fn has_duplicate_vertices(&self) -> bool {
        match &self.kind {
            ModelKind::Credal(points) => points
                .iter()
                .enumerate()
                .any(|(i, p)| points[..i].contains(p)),
            _ => false,
        }
    }

    /// Lower prevision of the gamble given by `values`, aligned with the
    /// carrier order.
    pub fn lower_values(&self, values: &[S]) -> S {
        debug_assert_eq!(values.len(), self.carrier.len());
        let min = || min_of(values).expect("non-empty carrier");
        match &self.kind {
            ModelKind::Vacuous => min(),
            ModelKind::Precise(p) => dot(p, values),
            ModelKind::LinearVacuous { center, delta } => {
                (S::one() - delta.clone()) * dot(center, values) + delta.clone() * min()
            }
            ModelKind::Credal(points) => self.credal_argmin(points, values).1,
        }
    }

    fn credal_argmin(&self, points: &[Vec<S>], values: &[S]) -> (usize, S) {
        let mut best = (0, dot(&points[0], values));
        for (i, p) in points.iter().enumerate().skip(1) {
            let e = dot(p, values);
            if e < best.1 {
                best = (i, e);
            }
        }
        best
    }

    /// Index of the extreme point attaining the lower prevision, lowest index
    /// on ties. `None` for non-credal variants.
    pub fn active_vertex(&self, values: &[S]) -> Option<usize> {
        match &self.kind {
            ModelKind::Credal(points) => Some(self.credal_argmin(points, values).0),
            _ => None,
        }
    }

    pub fn upper_values(&self, values: &[S]) -> S {
        let neg: Vec<S> = values.iter().map(|v| -v.clone()).collect();
        -self.lower_values(&neg)
    }

    fn check_carrier(&self, g: &Gamble<S>) -> Result<()> {
        if g.carrier() != self.carrier.as_slice() {
            return Err(Error::CarrierMismatch(format!(
                "model on {:?}, gamble on {:?}",
                self.carrier,
                g.carrier()
            )));
        }
        Ok(())
    }

    pub fn lower(&self, g: &Gamble<S>) -> Result<S> {
        self.check_carrier(g)?;
        Ok(self.lower_values(g.values()))
    }

    pub fn upper(&self, g: &Gamble<S>) -> Result<S> {
        self.check_carrier(g)?;
        Ok(self.upper_values(g.values()))
    }

    /// Finitely generated credal set with the same lower prevision.
    pub fn as_credal(&self) -> Self {
        let n = self.carrier.len();
        let degenerate = |w: usize| -> Vec<S> {
            (0..n)
                .map(|i| if i == w { S::one() } else { S::zero() })
                .collect()
        };
        let points = match &self.kind {
            ModelKind::Vacuous => (0..n).map(degenerate).collect(),
            ModelKind::Precise(p) => vec![p.clone()],
            ModelKind::LinearVacuous { center, delta } => (0..n)
                .map(|w| {
                    center
                        .iter()
                        .enumerate()
                        .map(|(i, p)| {
                            let e = if i == w { S::one() } else { S::zero() };
                            (S::one() - delta.clone()) * p.clone() + delta.clone() * e
                        })
                        .collect()
                })
                .collect(),
            ModelKind::Credal(points) => points.clone(),
        };
        Self {
            carrier: self.carrier.clone(),
            kind: ModelKind::Credal(points),
        }
    }

    /// Extreme points of [`Self::as_credal`].
    pub fn extreme_points(&self) -> Vec<Vec<S>> {
        match self.as_credal().kind {
            ModelKind::Credal(points) => points,
            _ => unreachable!(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        match &self.kind {
            ModelKind::Vacuous => self.carrier.len(),
            ModelKind::Precise(_) => 1,
            ModelKind::LinearVacuous { .. } => self.carrier.len(),
            ModelKind::Credal(points) => points.len(),
        }
    }
}

/// `P̲(g)` for a gamble on the model's carrier.
pub fn local_lower<S: Scalar>(model: &LocalModel<S>, g: &Gamble<S>) -> Result<S> {
    model.lower(g)
}

/// `P̄(g) = −P̲(−g)`.
pub fn local_upper<S: Scalar>(model: &LocalModel<S>, g: &Gamble<S>) -> Result<S> {
    model.upper(g)
}

pub fn as_credal<S: Scalar>(model: &LocalModel<S>) -> LocalModel<S> {
    model.as_credal()
}
