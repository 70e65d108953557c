//! Imprecise Markov chains.
//!
//! A time-homogeneous chain has an initial model on the state space `X` and a
//! transition model per state. Lower previsions of gambles on `X(n)` follow
//! from `n − 1` applications of the lower transition operator `T`, which is
//! linear in `n`; the same value can be recovered from the unrolled event tree,
//! whose credal enumeration is exponential in the number of situations.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::gamble::Gamble;
use crate::inference::ImpreciseProbabilityTree;
use crate::local::LocalModel;
use crate::oracle::{enumerate, EnumerationRun};
use crate::scalar::Scalar;
use crate::tree::{Cut, EventTree, TreeDescription};

/// Largest unrolled tree, in situations.
pub fn default_node_cap() -> BigUint {
    BigUint::one() << 22u32
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImpreciseMarkovChain<S> {
    states: Vec<String>,
    initial: LocalModel<S>,
    transitions: Vec<LocalModel<S>>,
}

impl<S: Scalar> ImpreciseMarkovChain<S> {
    /// `transitions[i]` is the model for the next state given state `i`.
    pub fn new(states: Vec<String>, initial: LocalModel<S>, transitions: Vec<LocalModel<S>>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for s in &states {
            if !seen.insert(s.as_str()) {
                return Err(Error::DuplicateId(s.clone()));
            }
        }
        if transitions.len() != states.len() {
            return Err(Error::InvalidModel(format!(
                "{} transition models for {} states",
                transitions.len(),
                states.len()
            )));
        }
        for m in std::iter::once(&initial).chain(&transitions) {
            if m.carrier() != states.as_slice() {
                return Err(Error::CarrierMismatch(format!(
                    "model on {:?}, states are {:?}",
                    m.carrier(),
                    states
                )));
            }
        }
        Ok(Self {
            states,
            initial,
            transitions,
        })
    }

    /// Same as [`Self::new`] with transitions keyed by state.
    pub fn from_map(
        states: Vec<String>,
        initial: LocalModel<S>,
        mut transitions: HashMap<String, LocalModel<S>>,
    ) -> Result<Self> {
        let ordered = states
            .iter()
            .map(|x| {
                transitions
                    .remove(x)
                    .ok_or_else(|| Error::InvalidModel(format!("no transition model for state `{x}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(extra) = transitions.keys().next() {
            return Err(Error::UnknownId(extra.clone()));
        }
        Self::new(states, initial, ordered)
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn initial(&self) -> &LocalModel<S> {
        &self.initial
    }

    pub fn transition(&self, state: usize) -> &LocalModel<S> {
        &self.transitions[state]
    }

    fn check(&self, f: &Gamble<S>) -> Result<()> {
        if f.carrier() != self.states.as_slice() {
            return Err(Error::CarrierMismatch(format!(
                "gamble on {:?}, states are {:?}; path-dependent gambles need the unrolled tree",
                f.carrier(),
                self.states
            )));
        }
        Ok(())
    }

    /// `T(f)(x) = P̲_x(f)`.
    pub fn apply_t(&self, f: &Gamble<S>) -> Result<Gamble<S>> {
        self.check(f)?;
        Gamble::new(self.states.clone(), self.apply_t_values(f.values()))
    }

    /// `T̄(f)(x) = −T(−f)(x)`.
    pub fn apply_t_upper(&self, f: &Gamble<S>) -> Result<Gamble<S>> {
        self.check(f)?;
        Gamble::new(self.states.clone(), self.apply_t_upper_values(f.values()))
    }

    pub fn apply_t_values(&self, f: &[S]) -> Vec<S> {
        self.transitions.iter().map(|m| m.lower_values(f)).collect()
    }

    pub fn apply_t_upper_values(&self, f: &[S]) -> Vec<S> {
        self.transitions.iter().map(|m| m.upper_values(f)).collect()
    }

    /// `P̲(f_n) = P̲_1(T^{n−1} f_n)`.
    pub fn state_lower_prevision(&self, f: &Gamble<S>, n: usize) -> Result<S> {
        self.check(f)?;
        if n == 0 {
            return Err(Error::NonPositiveHorizon);
        }
        let mut v = f.values().to_vec();
        for _ in 1..n {
            v = self.apply_t_values(&v);
        }
        Ok(self.initial.lower_values(&v))
    }

    /// `P̄(f_n) = P̄_1(T̄^{n−1} f_n)`.
    pub fn state_upper_prevision(&self, f: &Gamble<S>, n: usize) -> Result<S> {
        self.check(f)?;
        if n == 0 {
            return Err(Error::NonPositiveHorizon);
        }
        let mut v = f.values().to_vec();
        for _ in 1..n {
            v = self.apply_t_upper_values(&v);
        }
        Ok(self.initial.upper_values(&v))
    }

    /// Situations in the tree unrolled to horizon `n`: `Σ_{k=0}^{n} |X|^k`.
    pub fn unrolled_size(&self, n: usize) -> BigUint {
        let x = BigUint::from(self.states.len());
        let mut total = BigUint::one();
        let mut level = BigUint::one();
        for _ in 0..n {
            level *= &x;
            total += &level;
        }
        total
    }

    /// Number of vertex assignments in the unrolled tree of horizon `n`: the
    /// initial model's vertex count times `v_x^{Σ_{k<n−1} |X|^k}` per state.
    pub fn enumeration_count(&self, n: usize) -> BigUint {
        let mut per_state_exponent = BigUint::ZERO;
        let mut level = BigUint::one();
        for _ in 1..n {
            per_state_exponent += &level;
            level *= BigUint::from(self.states.len());
        }
        let exponent = per_state_exponent.to_u64().unwrap_or(u64::MAX);
        let mut count = BigUint::from(self.initial.vertex_count());
        for m in &self.transitions {
            let v = BigUint::from(m.vertex_count());
            if v > BigUint::one() {
                count *= pow_big(&v, exponent);
            }
        }
        count
    }

    /// The event tree of state sequences of length `n` with the chain's
    /// models attached, plus the cuts `X^1 … X^n` (index `k − 1` holds the
    /// situations at time `k`).
    pub fn unroll_to_tree(&self, n: usize, node_cap: &BigUint) -> Result<UnrolledChain<S>> {
        if n == 0 {
            return Err(Error::NonPositiveHorizon);
        }
        let size = self.unrolled_size(n);
        if &size > node_cap {
            return Err(Error::SizeCapExceeded {
                required: size,
                cap: node_cap.clone(),
            });
        }
        let mut desc = TreeDescription::new(ROOT);
        let mut frontier = vec![String::new()];
        for depth in 0..n {
            let mut next = Vec::with_capacity(frontier.len() * self.states.len());
            for path in &frontier {
                let kids: Vec<String> = self.states.iter().map(|x| extend_path(path, x)).collect();
                let parent = if depth == 0 { ROOT.to_owned() } else { path.clone() };
                desc = desc.node(parent, kids.clone());
                next.extend(kids);
            }
            frontier = next;
        }
        let tree = EventTree::build(&desc)?;
        let ipt = ImpreciseProbabilityTree::from_fn(tree, |tree, s| {
            let model = if s == tree.root() {
                &self.initial
            } else {
                // Children are listed in state order, so the position is the state.
                &self.transitions[tree.child_position(s)]
            };
            model.with_carrier(tree.child_labels(s))
        })?;
        let root = ipt.tree().root();
        let cuts = (1..=n).map(|k| ipt.tree().level_cut(root, k)).collect();
        Ok(UnrolledChain { ipt, cuts, horizon: n })
    }

    /// Benchmarks operator iteration against credal enumeration of the
    /// unrolled tree for each horizon.
    pub fn benchmark_scaling(
        &self,
        f: &Gamble<S>,
        horizons: &[usize],
        options: &BenchOptions,
    ) -> Result<Vec<BenchRow<S>>> {
        horizons
            .iter()
            .map(|&n| {
                let start = Instant::now();
                let value_operator = self.state_lower_prevision(f, n)?;
                let t_operator = start.elapsed();
                let count = self.enumeration_count(n);
                let enumeration = self.time_enumeration(f, n, count.clone(), options)?;
                Ok(BenchRow {
                    n,
                    t_operator,
                    value_operator,
                    count,
                    enumeration,
                })
            })
            .collect()
    }

    fn time_enumeration(&self, f: &Gamble<S>, n: usize, count: BigUint, options: &BenchOptions) -> Result<EnumTiming<S>> {
        if options.enum_budget.is_none() && count > options.enum_cap {
            return Ok(EnumTiming::Skipped { count });
        }
        if self.unrolled_size(n) > options.node_cap {
            return Ok(EnumTiming::Skipped { count });
        }
        let start = Instant::now();
        let unrolled = self.unroll_to_tree(n, &options.node_cap)?;
        let lifted = unrolled.lift(f)?;
        let cap = options.enum_budget.is_none().then_some(&options.enum_cap);
        let run = enumerate(&unrolled.ipt, &lifted, unrolled.ipt.tree().root(), cap, options.enum_budget)?;
        Ok(match run {
            EnumerationRun::Completed { result, .. } => EnumTiming::Completed {
                elapsed: start.elapsed(),
                value: result.value,
                count,
            },
            EnumerationRun::Exhausted { visited, .. } => EnumTiming::Exhausted {
                elapsed: start.elapsed(),
                visited,
                count,
            },
        })
    }
}

const ROOT: &str = "root";

fn extend_path(path: &str, state: &str) -> String {
    if path.is_empty() {
        state.to_owned()
    } else {
        format!("{path},{state}")
    }
}

fn pow_big(base: &BigUint, mut exp: u64) -> BigUint {
    let mut acc = BigUint::one();
    let mut b = base.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            acc *= &b;
        }
        exp >>= 1;
        if exp > 0 {
            b = &b * &b;
        }
    }
    acc
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnrolledChain<S> {
    pub ipt: ImpreciseProbabilityTree<S>,
    /// `cuts[k − 1]` is `X^k`.
    pub cuts: Vec<Cut>,
    pub horizon: usize,
}

impl<S: Scalar> UnrolledChain<S> {
    /// The gamble on paths whose value is `f` of the final state.
    pub fn lift(&self, f: &Gamble<S>) -> Result<Gamble<S>> {
        let tree = self.ipt.tree();
        let values = tree
            .terminals()
            .iter()
            .map(|&w| {
                f.values()
                    .get(tree.child_position(w))
                    .cloned()
                    .ok_or_else(|| Error::CarrierMismatch("gamble does not cover the states".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Gamble::new(tree.terminal_labels(), values)
    }
}

#[derive(Debug, Clone)]
pub struct BenchOptions {
    /// Largest unrolled tree attempted, in situations.
    pub node_cap: BigUint,
    /// Without a budget, enumeration runs only when the count is within this.
    pub enum_cap: BigUint,
    /// With a budget, enumeration runs regardless of the count and stops when
    /// the budget is spent.
    pub enum_budget: Option<Duration>,
}

impl Default for BenchOptions {
    fn default() -> Self {
        Self {
            node_cap: default_node_cap(),
            enum_cap: crate::oracle::default_cap(),
            enum_budget: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum EnumTiming<S> {
    Completed { elapsed: Duration, value: S, count: BigUint },
    /// Stopped by the budget; `elapsed` is a lower bound on the full run.
    Exhausted { elapsed: Duration, visited: u64, count: BigUint },
    Skipped { count: BigUint },
}

impl<S> EnumTiming<S> {
    pub fn elapsed(&self) -> Option<Duration> {
        match self {
            Self::Completed { elapsed, .. } | Self::Exhausted { elapsed, .. } => Some(*elapsed),
            Self::Skipped { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow<S> {
    pub n: usize,
    pub t_operator: Duration,
    pub value_operator: S,
    /// Predicted number of vertex assignments.
    pub count: BigUint,
    pub enumeration: EnumTiming<S>,
}
