//! Small named models used by tests, the acceptance suite and `selfcheck`.

use crate::desirability::Assessment;
use crate::gamble::Gamble;
use crate::inference::ImpreciseProbabilityTree;
use crate::local::LocalModel;
use crate::scalar::Scalar;
use crate::tree::{EventTree, TreeDescription};

/// Two successive coin flips; situations are labelled `"?,?"`, `"h,?"`,
/// `"h,t"` and so on.
pub fn coin2_description() -> TreeDescription {
    TreeDescription::new("?,?")
        .node("?,?", ["h,?", "t,?"])
        .node("h,?", ["h,h", "h,t"])
        .node("t,?", ["t,h", "t,t"])
}

pub fn coin2_tree() -> EventTree {
    EventTree::build(&coin2_description()).expect("valid fixture")
}

/// Two independent fair flips.
pub fn coin2_fair<S: Scalar>() -> ImpreciseProbabilityTree<S> {
    let tree = coin2_tree();
    let half = S::from_ratio(1, 2);
    ImpreciseProbabilityTree::from_fn(tree, |tree, s| {
        LocalModel::precise(tree.child_labels(s), vec![half.clone(), half.clone()])
    })
    .expect("valid fixture")
}

/// Flip coins until the first tails or until `n` coins have been flipped.
/// Non-terminals are `h0 … h{n-1}` (root `h0`); `h_k` has children
/// `[t{k+1}, h{k+1}]`.
pub fn coins_description(n: usize) -> TreeDescription {
    assert!(n >= 1, "at least one coin");
    let mut desc = TreeDescription::new("h0");
    for k in 0..n {
        desc = desc.node(format!("h{k}"), [format!("t{}", k + 1), format!("h{}", k + 1)]);
    }
    desc
}

pub fn coins_tree(n: usize) -> EventTree {
    EventTree::build(&coins_description(n)).expect("valid fixture")
}

/// The coin tree where every heads probability lies within `half_width` of
/// one half (linear-vacuous with contamination `2·half_width`).
pub fn coins<S: Scalar>(n: usize, half_width: S) -> ImpreciseProbabilityTree<S> {
    ImpreciseProbabilityTree::from_fn(coins_tree(n), |tree, s| {
        LocalModel::coin(tree.child_labels(s), half_width.clone())
    })
    .expect("valid fixture")
}

pub fn urn_space() -> Vec<String> {
    ["r", "g", "b"].iter().map(|s| s.to_string()).collect()
}

/// Betting on each colour at rate 1/4: `{I_r − 1/4, I_g − 1/4, I_b − 1/4}`.
pub fn urn_assessment<S: Scalar>() -> Assessment<S> {
    let space = urn_space();
    let quarter = S::from_ratio(1, 4);
    let gambles = ["r", "g", "b"]
        .iter()
        .map(|c| Gamble::indicator(space.clone(), &[c]).shift(&-quarter.clone()))
        .collect();
    Assessment::new(space, gambles).expect("shared carrier")
}

/// The urn as a one-step tree whose local model is the credal set
/// `{p : p(c) >= 1/4}`, given by its three extreme points.
pub fn urn_tree<S: Scalar>() -> ImpreciseProbabilityTree<S> {
    let tree = EventTree::build(&TreeDescription::new("urn").node("urn", ["r", "g", "b"]))
        .expect("valid fixture");
    let (h, q) = (S::from_ratio(1, 2), S::from_ratio(1, 4));
    let points = vec![
        vec![h.clone(), q.clone(), q.clone()],
        vec![q.clone(), h.clone(), q.clone()],
        vec![q.clone(), q.clone(), h],
    ];
    ImpreciseProbabilityTree::from_fn(tree, |tree, s| {
        LocalModel::credal(tree.child_labels(s), points.clone())
    })
    .expect("valid fixture")
}
