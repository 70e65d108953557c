//! Finite sets of really desirable gambles on a flat possibility space.
//!
//! The natural extension of an assessment `{g_1, …, g_k}` is the cone of
//! gambles `f` with `f >= Σ λ_i g_i` for some `λ >= 0`. Membership and
//! conditional lower previsions are decided by linear programs; the cone is
//! taken closed, so suprema are attained and reported as LP optima.

use crate::error::{Error, Result};
use crate::gamble::Gamble;
use crate::scalar::Scalar;
use crate::simplex::{LinearProgram, LpOutcome};

#[derive(Debug, Clone, PartialEq)]
pub struct Assessment<S> {
    space: Vec<String>,
    gambles: Vec<Gamble<S>>,
}

impl<S: Scalar> Assessment<S> {
    pub fn new(space: Vec<String>, gambles: Vec<Gamble<S>>) -> Result<Self> {
        if let Some(g) = gambles.iter().find(|g| g.carrier() != space.as_slice()) {
            return Err(Error::CarrierMismatch(format!(
                "assessment gamble on {:?}, space is {:?}",
                g.carrier(),
                space
            )));
        }
        Ok(Self { space, gambles })
    }

    pub fn space(&self) -> &[String] {
        &self.space
    }

    pub fn gambles(&self) -> &[Gamble<S>] {
        &self.gambles
    }

    fn check(&self, f: &Gamble<S>) -> Result<()> {
        if f.carrier() != self.space.as_slice() {
            return Err(Error::CarrierMismatch(format!(
                "gamble on {:?}, space is {:?}",
                f.carrier(),
                self.space
            )));
        }
        Ok(())
    }

    /// `Σ_i λ_i g_i(ω)` coefficient row for outcome `ω`.
    fn row(&self, omega: usize) -> impl Iterator<Item = S> + '_ {
        self.gambles.iter().map(move |g| g.values()[omega].clone())
    }

    /// Whether `f` lies in the natural extension.
    pub fn natural_extension_contains(&self, f: &Gamble<S>) -> Result<bool> {
        let all: Vec<&str> = self.space.iter().map(String::as_str).collect();
        match self.conditional_lower(f, &all) {
            Ok(v) => Ok(v >= -S::tolerance()),
            Err(Error::UnboundedPrice) => Ok(true),
            Err(e) => Err(e),
        }
    }

    /// Optimum of `max Σ_ω (−Σλ_i g_i(ω))` over `λ >= 0`, `Σλ <= 1`,
    /// `Σλ_i g_i <= 0`: positive iff some combination is `<= 0` and non-zero.
    fn partial_loss_margin(&self) -> Result<S> {
        let k = self.gambles.len();
        let objective = (0..k)
            .map(|i| {
                self.gambles[i]
                    .values()
                    .iter()
                    .fold(S::zero(), |a, v| a - v.clone())
            })
            .collect();
        let mut lp = LinearProgram::maximize(objective);
        for omega in 0..self.space.len() {
            lp.less_eq(self.row(omega).collect(), S::zero());
        }
        lp.less_eq(vec![S::one(); k], S::one());
        match lp.solve()? {
            LpOutcome::Optimal { value, .. } => Ok(value),
            LpOutcome::Unbounded => Err(Error::LinearProgram("bounded by construction".into())),
        }
    }

    /// No gamble `f <= 0`, `f != 0`, lies in the natural extension.
    pub fn avoids_partial_loss(&self) -> Result<bool> {
        if self.gambles.is_empty() {
            return Ok(true);
        }
        Ok(self.partial_loss_margin()? <= S::lp_tolerance())
    }

    /// No positive combination of assessment gambles is strictly negative
    /// everywhere.
    pub fn avoids_sure_loss(&self) -> Result<bool> {
        let k = self.gambles.len();
        if k == 0 {
            return Ok(true);
        }
        // max t  s.t.  t + Σλ_i g_i(ω) <= 0 for all ω, Σλ <= 1, t, λ >= 0.
        let mut objective = vec![S::one()];
        objective.extend((0..k).map(|_| S::zero()));
        let mut lp = LinearProgram::maximize(objective);
        for omega in 0..self.space.len() {
            let mut row = vec![S::one()];
            row.extend(self.row(omega));
            lp.less_eq(row, S::zero());
        }
        let mut norm = vec![S::zero()];
        norm.extend((0..k).map(|_| S::one()));
        lp.less_eq(norm, S::one());
        match lp.solve()? {
            LpOutcome::Optimal { value, .. } => Ok(value <= S::lp_tolerance()),
            LpOutcome::Unbounded => Ok(false),
        }
    }

    /// `sup{α : I_B (f − α) is in the natural extension}`.
    pub fn conditional_lower(&self, f: &Gamble<S>, event: &[&str]) -> Result<S> {
        self.check(f)?;
        let in_b: Vec<bool> = self
            .space
            .iter()
            .map(|w| event.contains(&w.as_str()))
            .collect();
        if !in_b.iter().any(|&b| b) {
            return Err(Error::EmptyConditioningEvent);
        }
        if let Some(bad) = event.iter().find(|e| !self.space.iter().any(|w| w == *e)) {
            return Err(Error::CarrierMismatch(format!("`{bad}` is not in the space")));
        }
        // Shift by min_B f so that every right-hand side is non-negative; the
        // optimum is at least min_B f (take λ = 0), so the shifted price is
        // non-negative as well.
        let floor = f
            .values()
            .iter()
            .zip(&in_b)
            .filter(|(_, &b)| b)
            .map(|(v, _)| v)
            .fold(None::<S>, |m, v| match m {
                Some(m) if m <= *v => Some(m),
                _ => Some(v.clone()),
            })
            .expect("non-empty event");

        let k = self.gambles.len();
        let mut objective = vec![S::one()];
        objective.extend((0..k).map(|_| S::zero()));
        let mut lp = LinearProgram::maximize(objective);
        for (omega, &b) in in_b.iter().enumerate() {
            let lead = if b { S::one() } else { S::zero() };
            let rhs = if b {
                f.values()[omega].clone() - floor.clone()
            } else {
                S::zero()
            };
            let mut row = vec![lead];
            row.extend(self.row(omega));
            lp.less_eq(row, rhs);
        }
        match lp.solve()? {
            LpOutcome::Optimal { value, .. } => Ok(floor + value),
            LpOutcome::Unbounded => Err(Error::UnboundedPrice),
        }
    }

    /// `P̄(f|B) = −P̲(−f|B)`.
    pub fn conditional_upper(&self, f: &Gamble<S>, event: &[&str]) -> Result<S> {
        Ok(-self.conditional_lower(&-f, event)?)
    }

    /// Unconditional lower prevision.
    pub fn lower(&self, f: &Gamble<S>) -> Result<S> {
        let all: Vec<&str> = self.space.iter().map(String::as_str).collect();
        self.conditional_lower(f, &all)
    }

    /// The gamble equal to `P̲(f|B)` on each block `B` of the partition.
    pub fn conditional_lower_on_partition(
        &self,
        f: &Gamble<S>,
        partition: &[Vec<&str>],
    ) -> Result<Gamble<S>> {
        self.check(f)?;
        let mut values: Vec<Option<S>> = vec![None; self.space.len()];
        for block in partition {
            if block.is_empty() {
                return Err(Error::NotAPartition("empty block".into()));
            }
            let v = self.conditional_lower(f, block)?;
            for w in block {
                let i = self
                    .space
                    .iter()
                    .position(|s| s == w)
                    .ok_or_else(|| Error::NotAPartition(format!("`{w}` is not in the space")))?;
                if values[i].is_some() {
                    return Err(Error::NotAPartition(format!("`{w}` is in two blocks")));
                }
                values[i] = Some(v.clone());
            }
        }
        let values = values
            .into_iter()
            .zip(&self.space)
            .map(|(v, w)| v.ok_or_else(|| Error::NotAPartition(format!("`{w}` is not covered"))))
            .collect::<Result<Vec<_>>>()?;
        Gamble::new(self.space.clone(), values)
    }
}
