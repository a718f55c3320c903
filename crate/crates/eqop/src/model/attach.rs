use std::collections::BTreeMap;

use super::Arrow;
use crate::error::{invalid, Result};
use crate::grp::{GSet, Subgroup};
use crate::oper::{pullback_section, pushforward_operad_injective, OperadMap, TruncatedOperad};
use crate::sym::{SigSpace, SymSeqMap};

/// The coset eH, as an index of `GSet::cosets(g, h)`.
pub fn base_coset(cosets: &GSet, h: &Subgroup, order: usize) -> usize {
    (0..cosets.size())
        .find(|&c| (0..order).all(|g| (cosets.act(g, c) == c) == h.contains(g)))
        .expect("some coset has stabilizer H")
}

/// O → O ⊔ G/H·η: a new orbit of colors G/H with only units on them.
pub fn attach_colors(o: &TruncatedOperad, h: &Subgroup) -> Result<Arrow> {
    let g = o.group();
    let colors = o.colors().disjoint_union(&GSet::cosets(g, h));
    let space = SigSpace::new(g, &colors, o.arity_bound())?;
    let phi: Vec<usize> = (0..o.colors().size()).collect();
    let (tgt, map) = pushforward_operad_injective(&phi, o, &space)?;
    Ok(Arrow { src: o.clone(), tgt, map })
}

/// The pushout along G/H·(η → 𝟙̃) at an H-fixed color `a`, as two stages:
/// adding the colors G/H, then connecting [e]₁ to `a`.
#[derive(Clone, Debug)]
pub struct Attachment {
    pub add_colors: Arrow,
    pub connect: Arrow,
    pub total: Arrow,
    /// The color [e]₁, isomorphic to `a` in the result.
    pub base: usize,
}

pub fn attach_interval(o: &TruncatedOperad, h: &Subgroup, a: usize) -> Result<Attachment> {
    let g = o.group();
    if a >= o.colors().size() || !o.colors().is_fixed(a, h) {
        return invalid(format!("color {a} is not fixed by the subgroup"));
    }
    let add_colors = attach_colors(o, h)?;
    let k = o.colors().size();
    let cosets = GSet::cosets(g, h);
    let e = base_coset(&cosets, h, g.order());
    let mut psi: Vec<usize> = (0..k).collect();
    psi.resize(k + cosets.size(), usize::MAX);
    for x in g.elements() {
        psi[k + cosets.act(x, e)] = o.colors().act(x, a);
    }
    let section: Vec<usize> = (0..k).collect();
    let (pulled, incl) = pullback_section(add_colors.tgt.space(), &psi, o, &section)?;
    let mid = &add_colors.tgt;
    let mut maps = BTreeMap::new();
    for (rep, lvl) in mid.levels().levels() {
        let row = if rep.raw().iter().all(|&c| c < k) {
            (0..lvl.size)
                .map(|y| {
                    let x = (0..o.size_at(rep)).find(|&x| add_colors.apply(rep, x) == y).expect("old levels are unchanged");
                    incl.apply(o, &pulled, rep, x)
                })
                .collect()
        } else {
            debug_assert!(rep.arity() == 1 && rep.leaves()[0] == rep.root());
            vec![pulled.unit(rep.root())]
        };
        maps.insert(rep.clone(), row);
    }
    let id: Vec<usize> = (0..mid.colors().size()).collect();
    let connect_map = OperadMap { color_map: id.clone(), levels: SymSeqMap { color_map: id, maps } };
    let connect = Arrow::new(mid.clone(), pulled.clone(), connect_map)?;
    let total = Arrow { src: o.clone(), tgt: pulled, map: incl };
    debug_assert_eq!(add_colors.then(&connect)?.map, total.map);
    Ok(Attachment { add_colors, connect, total, base: k + e })
}
