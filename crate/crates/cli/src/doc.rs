//! JSON documents: trees, gambles, commitment plans, chains and selections.
//!
//! Numbers are JSON numbers or strings such as `"1/4"`; both keep their
//! source text so a document re-serialises byte for byte and exact mode
//! reads `0.1` as one tenth.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use iptree::laws::Commitment;
use iptree::{
    gamble::embed_from_cut, parse_rational, CommitmentPlan, Cut, EventTree, Gamble, ImpreciseMarkovChain,
    ImpreciseProbabilityTree, LocalModel, ModelKind, Scalar, Selection, TreeDescription,
};
use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::error::CliError;

pub const VERSION: u32 = 1;

/// A number as written in the document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Number(serde_json::Number),
    Text(String),
}

impl Num {
    pub fn text(&self) -> String {
        match self {
            Num::Number(n) => n.to_string(),
            Num::Text(s) => s.clone(),
        }
    }

    /// Exact reading for rationals; correctly rounded decimal parsing for
    /// floats.
    pub fn value<S: Scalar>(&self, field: &str) -> Result<S, CliError> {
        let text = self.text();
        if !S::is_exact() {
            if let Ok(x) = text.trim().parse::<f64>() {
                return Ok(S::from_f64_lossy(x));
            }
        }
        let r = parse_rational(&text)
            .ok_or_else(|| CliError::Parse(format!("{field}: `{text}` is not a number")))?;
        Ok(S::from_rational(&r))
    }

    pub fn from_scalar<S: Scalar>(v: &S) -> Self {
        if S::is_exact() {
            Num::Text(v.to_string())
        } else {
            let text = crate::format::format_f64(v.to_f64_lossy());
            serde_json::from_str(&text).map(Num::Number).unwrap_or(Num::Text(text))
        }
    }
}

fn values<S: Scalar>(nums: &[Num], field: &str) -> Result<Vec<S>, CliError> {
    nums.iter()
        .enumerate()
        .map(|(i, n)| n.value(&format!("{field}[{i}]")))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum ModelDoc {
    Vacuous {},
    Precise { mass: Vec<Num> },
    Linvac { center: Vec<Num>, delta: Num },
    Credal { points: Vec<Vec<Num>> },
}

impl ModelDoc {
    pub fn build<S: Scalar>(&self, carrier: Vec<String>, field: &str) -> Result<LocalModel<S>, CliError> {
        let kind = match self {
            ModelDoc::Vacuous {} => ModelKind::Vacuous,
            ModelDoc::Precise { mass } => ModelKind::Precise(values(mass, &format!("{field}.mass"))?),
            ModelDoc::Linvac { center, delta } => ModelKind::LinearVacuous {
                center: values(center, &format!("{field}.center"))?,
                delta: delta.value(&format!("{field}.delta"))?,
            },
            ModelDoc::Credal { points } => ModelKind::Credal(
                points
                    .iter()
                    .enumerate()
                    .map(|(i, p)| values(p, &format!("{field}.points[{i}]")))
                    .collect::<Result<_, _>>()?,
            ),
        };
        let mismatch = match self {
            ModelDoc::Vacuous {} => None,
            ModelDoc::Precise { mass } => Some(mass.len()),
            ModelDoc::Linvac { center, .. } => Some(center.len()),
            ModelDoc::Credal { points } => points.iter().map(Vec::len).find(|&l| l != carrier.len()),
        }
        .filter(|&w| w != carrier.len());
        if let Some(w) = mismatch {
            return Err(CliError::Carrier(format!(
                "{field}: {w} masses for {} children",
                carrier.len()
            )));
        }
        LocalModel::new(carrier, kind).map_err(|e| CliError::at(field, e))
    }

    pub fn from_model<S: Scalar>(m: &LocalModel<S>) -> Self {
        let nums = |v: &[S]| v.iter().map(Num::from_scalar).collect::<Vec<_>>();
        match m.kind() {
            ModelKind::Vacuous => ModelDoc::Vacuous {},
            ModelKind::Precise(p) => ModelDoc::Precise { mass: nums(p) },
            ModelKind::LinearVacuous { center, delta } => ModelDoc::Linvac {
                center: nums(center),
                delta: Num::from_scalar(delta),
            },
            ModelKind::Credal(points) => ModelDoc::Credal {
                points: points.iter().map(|p| nums(p)).collect(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeDoc {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CutDoc {
    pub base: String,
    pub members: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeDoc {
    pub version: u32,
    pub kind: String,
    pub root: String,
    pub nodes: BTreeMap<String, NodeDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub cuts: BTreeMap<String, CutDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GambleDoc {
    pub version: u32,
    pub kind: String,
    pub on: String,
    pub values: BTreeMap<String, Num>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommitmentDoc {
    pub h: Vec<Num>,
    pub m: Num,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanDoc {
    pub version: u32,
    pub kind: String,
    pub base: String,
    pub horizon: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<Num>,
    pub commitments: BTreeMap<String, CommitmentDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainDoc {
    pub version: u32,
    pub kind: String,
    pub states: Vec<String>,
    pub initial: ModelDoc,
    pub transitions: BTreeMap<String, ModelDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelectionDoc {
    pub version: u32,
    pub kind: String,
    pub base: String,
    pub choices: BTreeMap<String, Vec<Num>>,
}

/// Documents carry `version` and `kind`; both are checked on load.
pub trait Document: Serialize + DeserializeOwned {
    const KIND: &'static str;
    fn header(&self) -> (u32, &str);
}

macro_rules! document {
    ($t:ty, $kind:literal) => {
        impl Document for $t {
            const KIND: &'static str = $kind;
            fn header(&self) -> (u32, &str) {
                (self.version, &self.kind)
            }
        }
    };
}

document!(TreeDoc, "tree");
document!(GambleDoc, "gamble");
document!(PlanDoc, "plan");
document!(ChainDoc, "chain");
document!(SelectionDoc, "selection");

pub fn parse<D: Document>(text: &str, origin: &str) -> Result<D, CliError> {
    let doc: D = serde_json::from_str(text).map_err(|e| CliError::Parse(format!("{origin}: {e}")))?;
    let (version, kind) = doc.header();
    if version != VERSION {
        return Err(CliError::Parse(format!("{origin}: version {version} is not supported (expected {VERSION})")));
    }
    if kind != D::KIND {
        return Err(CliError::Parse(format!(
            "{origin}: kind is \"{kind}\", expected \"{}\"",
            D::KIND
        )));
    }
    Ok(doc)
}

pub fn load<D: Document>(path: &Path) -> Result<D, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    parse(&text, &path.display().to_string())
}

/// Canonical text: two-space indentation, sorted maps, trailing newline.
pub fn serialize<D: Document>(doc: &D) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialise");
    s.push('\n');
    s
}

impl TreeDoc {
    pub fn event_tree(&self) -> Result<EventTree, CliError> {
        let mut desc = TreeDescription::new(self.root.clone());
        for (id, node) in &self.nodes {
            if !node.children.is_empty() {
                desc = desc.node(id.clone(), node.children.clone());
            }
        }
        let tree = EventTree::build(&desc).map_err(|e| CliError::at("nodes", e))?;
        if let Some(id) = self.nodes.keys().find(|id| tree.node(id).is_err()) {
            return Err(CliError::at("nodes", iptree::Error::Disconnected(id.clone())));
        }
        Ok(tree)
    }

    pub fn build<S: Scalar>(&self) -> Result<ImpreciseProbabilityTree<S>, CliError> {
        let tree = self.event_tree()?;
        let mut models = HashMap::new();
        for (id, node) in &self.nodes {
            let field = format!("nodes.{id}.model");
            match (&node.model, node.children.is_empty()) {
                (Some(_), true) => {
                    return Err(CliError::Parse(format!("{field}: terminal situation carries a model")))
                }
                (None, false) => return Err(CliError::Parse(format!("{field}: missing"))),
                (Some(m), false) => {
                    models.insert(id.clone(), m.build(node.children.clone(), &field)?);
                }
                (None, true) => {}
            }
        }
        ImpreciseProbabilityTree::new(tree, models).map_err(|e| CliError::at("nodes", e))
    }

    pub fn cut(&self, tree: &EventTree, id: &str) -> Result<Cut, CliError> {
        let doc = self
            .cuts
            .get(id)
            .ok_or_else(|| CliError::Parse(format!("cuts.{id}: no such cut in the tree document")))?;
        tree.validate_cut(&doc.base, &doc.members)
            .map_err(|e| CliError::at(&format!("cuts.{id}"), e))
    }

    pub fn from_ipt<S: Scalar>(ipt: &ImpreciseProbabilityTree<S>) -> Self {
        let tree = ipt.tree();
        let nodes = tree
            .nodes()
            .map(|s| {
                (
                    tree.label(s).to_owned(),
                    NodeDoc {
                        children: tree.child_labels(s),
                        model: ipt.local(s).map(ModelDoc::from_model),
                    },
                )
            })
            .collect();
        TreeDoc {
            version: VERSION,
            kind: "tree".into(),
            root: tree.label(tree.root()).to_owned(),
            nodes,
            cuts: BTreeMap::new(),
        }
    }
}

impl GambleDoc {
    /// The gamble on the tree's terminals. `on` is `"terminals"` or the id of
    /// a cut declared in the tree document.
    pub fn on_tree<S: Scalar>(&self, tree_doc: &TreeDoc, tree: &EventTree) -> Result<Gamble<S>, CliError> {
        if self.on == "terminals" {
            let labels = tree.terminal_labels();
            return self.aligned(labels, "terminals");
        }
        if self.on == "states" {
            return Err(CliError::Carrier("gamble is on chain states, not on a tree".into()));
        }
        let cut = tree_doc.cut(tree, &self.on)?;
        if cut.base() != tree.root() {
            return Err(CliError::Carrier(format!(
                "cut `{}` is based at `{}`; gambles need a cut of the root",
                self.on,
                tree.label(cut.base())
            )));
        }
        let on_cut = self.aligned(cut.member_labels(tree).map(str::to_owned).collect(), &self.on)?;
        embed_from_cut(tree, &on_cut, &cut).map_err(|e| CliError::at("values", e))
    }

    pub fn on_states<S: Scalar>(&self, states: &[String]) -> Result<Gamble<S>, CliError> {
        if self.on != "states" {
            return Err(CliError::Carrier(format!(
                "chain gambles must be on \"states\", found \"{}\"",
                self.on
            )));
        }
        self.aligned(states.to_vec(), "states")
    }

    fn aligned<S: Scalar>(&self, carrier: Vec<String>, what: &str) -> Result<Gamble<S>, CliError> {
        if let Some(extra) = self.values.keys().find(|k| !carrier.contains(k)) {
            return Err(CliError::Carrier(format!("values.{extra}: not one of the {what}")));
        }
        let values = carrier
            .iter()
            .map(|id| {
                self.values
                    .get(id)
                    .ok_or_else(|| CliError::Carrier(format!("values: no value for `{id}`")))?
                    .value(&format!("values.{id}"))
            })
            .collect::<Result<Vec<S>, _>>()?;
        Gamble::new(carrier, values).map_err(|e| CliError::at("values", e))
    }
}

impl PlanDoc {
    pub fn build<S: Scalar>(&self, ipt: &ImpreciseProbabilityTree<S>) -> Result<CommitmentPlan<S>, CliError> {
        let tree = ipt.tree();
        let horizon = tree
            .validate_cut(&self.base, &self.horizon)
            .map_err(|e| CliError::Plan(format!("horizon: {e}")))?;
        let mut commitments = Vec::new();
        for (id, c) in &self.commitments {
            let field = format!("commitments.{id}");
            commitments.push((
                id.clone(),
                Commitment {
                    h: values(&c.h, &format!("{field}.h"))?,
                    m: c.m.value(&format!("{field}.m"))?,
                },
            ));
        }
        let bound = self.bound.as_ref().map(|b| b.value("bound")).transpose()?;
        CommitmentPlan::from_labels(ipt, horizon, commitments, bound).map_err(|e| CliError::Plan(e.to_string()))
    }
}

impl ChainDoc {
    pub fn build<S: Scalar>(&self) -> Result<ImpreciseMarkovChain<S>, CliError> {
        let initial = self.initial.build(self.states.clone(), "initial")?;
        let mut transitions = HashMap::new();
        for (x, m) in &self.transitions {
            transitions.insert(x.clone(), m.build(self.states.clone(), &format!("transitions.{x}"))?);
        }
        ImpreciseMarkovChain::from_map(self.states.clone(), initial, transitions)
            .map_err(|e| CliError::at("transitions", e))
    }
}

impl SelectionDoc {
    pub fn from_selection<S: Scalar>(tree: &EventTree, sel: &Selection<S>) -> Self {
        let choices = tree
            .non_terminals_from(sel.base())
            .filter_map(|s| {
                let v = sel.choice(s)?;
                Some((tree.label(s).to_owned(), v.iter().map(Num::from_scalar).collect()))
            })
            .collect();
        SelectionDoc {
            version: VERSION,
            kind: "selection".into(),
            base: tree.label(sel.base()).to_owned(),
            choices,
        }
    }
}
