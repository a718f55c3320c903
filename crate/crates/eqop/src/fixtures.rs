//! Small worked configurations shared by tests, the CLI and the docs.

use std::sync::Arc;

use crate::error::Result;
use crate::grp::{product_sigma_op, FiniteGroup, GSet, Permutation, Subgroup};
use crate::model::Arrow;
use crate::oper::{close_support, initial_operad, monoid_operad, ActedMonoid, MonoidOperadSpec, OperadMap, TruncatedOperad};
use crate::sym::{SigSpace, SymSeqMap};
use crate::tree::{Signature, Tree};

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Z/4 acting on {a, ia, −a, −ia, b, ib} by multiplication.
pub fn quartic_colors() -> (FiniteGroup, GSet) {
    let g = FiniteGroup::quartic_roots();
    let action = (0..4)
        .map(|k| {
            let mut row: Vec<usize> = (0..4).map(|x| (x + k) % 4).collect();
            row.extend((0..2).map(|x| 4 + (x + k) % 2));
            row
        })
        .collect();
    let colors = GSet::from_table(&g, action, Some(labels(&["a", "ia", "-a", "-ia", "b", "ib"]))).unwrap();
    (g, colors)
}

/// (a, ib, ib, −a; b).
pub fn quartic_corolla() -> Signature {
    Signature::new(&[0, 5, 5, 2], 4)
}

/// Z/2 acting on {a, −a, b} with −b = b.
pub fn sign_colors() -> (FiniteGroup, GSet) {
    let g = FiniteGroup::cyclic(2).unwrap();
    let colors = GSet::from_table(&g, vec![vec![0, 1, 2], vec![1, 0, 2]], Some(labels(&["a", "-a", "b"]))).unwrap();
    (g, colors)
}

/// (a, b, b, −a; b) and (a, a, −a, −a; b).
pub fn sign_signatures() -> (Signature, Signature) {
    (Signature::new(&[0, 2, 2, 1], 2), Signature::new(&[0, 0, 1, 1], 2))
}

/// Colors {a, b, c}, trivial group.
pub fn abc_colors() -> (FiniteGroup, GSet) {
    let g = FiniteGroup::trivial();
    let colors = GSet::trivial(&g, 3).with_labels(labels(&["a", "b", "c"])).unwrap();
    (g, colors)
}

/// Two planar trees over {a, b, c}: one with leaves (b, c) and a stump, one linear ending in a stump.
pub fn abc_forest() -> (Tree, Tree) {
    let (a, b, c) = (0, 1, 2);
    let t = Tree::vertex(
        a,
        vec![Tree::vertex(a, vec![Tree::edge(b), Tree::vertex(a, vec![])]), Tree::vertex(b, vec![Tree::edge(c)])],
    );
    let s = Tree::vertex(a, vec![Tree::vertex(b, vec![Tree::vertex(c, vec![])])]);
    (t, s)
}

/// Z/4 data with Λ = ⟨(1,(14)(23)), (i,(12)(34))⟩ ≤ Z/4 × Σ₄ᵒᵖ stabilizing
/// B̄ = (b, ib, ib, b; a) and C̄ = (c, c, c, c; a).
#[derive(Clone, Debug)]
pub struct QuarticLambda {
    pub group: FiniteGroup,
    pub colors: GSet,
    pub product: FiniteGroup,
    pub lambda: Subgroup,
    pub b: Signature,
    pub c: Signature,
}

pub fn quartic_lambda() -> QuarticLambda {
    let g = FiniteGroup::quartic_roots();
    let action = (0..4).map(|k| vec![0, 1 + k % 2, 1 + (k + 1) % 2, 3, 4]).collect();
    let colors = GSet::from_table(&g, action, Some(labels(&["a", "b", "ib", "c", "d"]))).unwrap();
    let p = product_sigma_op(&g, 4).unwrap();
    let info = p.product_info().unwrap();
    let lambda = Subgroup::generated(
        &p,
        &[
            info.join(0, &Permutation::from_cycles(4, &[&[1, 4], &[2, 3]]).unwrap()),
            info.join(1, &Permutation::from_cycles(4, &[&[1, 2], &[3, 4]]).unwrap()),
        ],
    );
    QuarticLambda {
        group: g,
        colors,
        product: p,
        lambda,
        b: Signature::new(&[1, 2, 2, 1], 0),
        c: Signature::new(&[3, 3, 3, 3], 0),
    }
}

/// An operad on the colors of [`quartic_lambda`] with every level Z/5 × Z/2,
/// i acting on Z/5 by doubling, supported on the closure of B̄, C̄ and the
/// unary signatures between b, ib and c.
pub fn quartic_lambda_operad(q: &QuarticLambda) -> Result<TruncatedOperad> {
    let g = &q.group;
    let space: Arc<SigSpace> = SigSpace::new(g, &q.colors, 4)?;
    let mut seeds = vec![q.b.clone(), q.c.clone()];
    for x in [1, 2] {
        seeds.push(Signature::new(&[x], 3));
        seeds.push(Signature::new(&[3], x));
    }
    let monoid = ActedMonoid::cyclic(g, 5, &[1, 2, 4, 3])?.product(&ActedMonoid::cyclic(g, 2, &[1, 1, 1, 1])?);
    let spec = MonoidOperadSpec { support: close_support(&space, &seeds), space, monoid, with_orders: false };
    monoid_operad(&spec)
}

/// 𝟙̃ over the trivial group: colors {0, 1} and exactly one operation in each unary level.
pub fn interval_operad(arity_bound: usize) -> Result<TruncatedOperad> {
    let g = FiniteGroup::trivial();
    let colors = GSet::trivial(&g, 2).with_labels(labels(&["0", "1"]))?;
    let space = SigSpace::new(&g, &colors, arity_bound)?;
    let seeds = [Signature::new(&[0], 1), Signature::new(&[1], 0)];
    let spec = MonoidOperadSpec { support: close_support(&space, &seeds), space, monoid: ActedMonoid::trivial(&g), with_orders: false };
    monoid_operad(&spec)
}

/// η ⊔ η → 𝟙̃, the identity on colors.
pub fn eta_pair_to_interval(arity_bound: usize) -> Result<Arrow> {
    let tgt = interval_operad(arity_bound)?;
    let src = initial_operad(tgt.space())?;
    let maps = src.levels().levels().keys().map(|r| (r.clone(), vec![tgt.unit(r.root())])).collect();
    let map = OperadMap { color_map: vec![0, 1], levels: SymSeqMap { color_map: vec![0, 1], maps } };
    Arrow::new(src, tgt, map)
}

/// η → 𝟙̃ at the color 0.
pub fn eta_to_interval(arity_bound: usize) -> Result<Arrow> {
    let tgt = interval_operad(arity_bound)?;
    let g = FiniteGroup::trivial();
    let colors = GSet::trivial(&g, 1).with_labels(labels(&["0"]))?;
    let src = initial_operad(&SigSpace::new(&g, &colors, arity_bound)?)?;
    let maps = src.levels().levels().keys().map(|r| (r.clone(), vec![tgt.unit(0)])).collect();
    let map = OperadMap { color_map: vec![0], levels: SymSeqMap { color_map: vec![0], maps } };
    Arrow::new(src, tgt, map)
}
