//! Free operads on symmetric sequences, as decorated trees with labeled leaves.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, RwLock};

use super::{materialize, OperadMap, OperadSpec, TruncatedOperad};
use crate::error::{invalid, Error, Result};
use crate::grp::Permutation;
use crate::sym::{Catalog, EqSymSeq, NaturalSeq, SymSeqMap};
use crate::tree::Signature;

/// A tree whose vertices carry elements of a symmetric sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DTree {
    Leaf { label: usize, color: usize },
    Node { sig: Signature, x: usize, children: Vec<DTree> },
}

impl DTree {
    pub fn vertex_count(&self) -> usize {
        match self {
            DTree::Leaf { .. } => 0,
            DTree::Node { children, .. } => 1 + children.iter().map(DTree::vertex_count).sum::<usize>(),
        }
    }

    pub fn root_color(&self) -> usize {
        match self {
            DTree::Leaf { color, .. } => *color,
            DTree::Node { sig, .. } => sig.root(),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            DTree::Leaf { .. } => 1,
            DTree::Node { children, .. } => children.iter().map(DTree::leaf_count).sum(),
        }
    }

    fn relabel(&self, f: &dyn Fn(usize) -> usize) -> DTree {
        match self {
            DTree::Leaf { label, color } => DTree::Leaf { label: f(*label), color: *color },
            DTree::Node { sig, x, children } => {
                DTree::Node { sig: sig.clone(), x: *x, children: children.iter().map(|c| c.relabel(f)).collect() }
            }
        }
    }

    /// Replaces the leaf labeled `slot` by `t` with labels shifted by `slot`,
    /// and shifts later labels by the arity of `t` minus one.
    fn graft_at(&self, slot: usize, t: &DTree, m: usize) -> DTree {
        match self {
            DTree::Leaf { label, .. } if *label == slot => t.relabel(&|l| l + slot),
            DTree::Leaf { label, color } => DTree::Leaf { label: if *label > slot { label + m - 1 } else { *label }, color: *color },
            DTree::Node { sig, x, children } => DTree::Node {
                sig: sig.clone(),
                x: *x,
                children: children.iter().map(|c| c.graft_at(slot, t, m)).collect(),
            },
        }
    }

    pub fn corolla(sig: &Signature, x: usize) -> DTree {
        let children = sig.leaves().iter().enumerate().map(|(l, &c)| DTree::Leaf { label: l, color: c }).collect();
        DTree::Node { sig: sig.clone(), x, children }
    }
}

/// Orbit-minimum representative under reordering of every vertex's inputs.
fn canonical(t: &DTree, x: &EqSymSeq) -> DTree {
    match t {
        DTree::Leaf { .. } => t.clone(),
        DTree::Node { sig, x: e, children } => {
            let children: Vec<DTree> = children.iter().map(|c| canonical(c, x)).collect();
            let space = x.space();
            let k = sig.arity();
            let info = space.product(k).product_info().unwrap();
            let g0 = space.group().identity();
            Permutation::all(k)
                .into_iter()
                .map(|sigma| {
                    let u = info.join(g0, &sigma);
                    DTree::Node {
                        sig: space.act(u, sig),
                        x: x.transport(u, sig, *e),
                        children: (0..k).map(|j| children[sigma.apply(j)].clone()).collect(),
                    }
                })
                .min()
                .unwrap()
        }
    }
}

/// Applies g ∈ G to vertices and colors and relabels leaves by σ⁻¹.
fn act_tree(t: &DTree, x: &EqSymSeq, g: usize, sigma_inv: &Permutation) -> DTree {
    let space = x.space();
    match t {
        DTree::Leaf { label, color } => DTree::Leaf { label: sigma_inv.apply(*label), color: space.colors().act(g, *color) },
        DTree::Node { sig, x: e, children } => {
            let k = sig.arity();
            let u = space.product(k).product_info().unwrap().join(g, &Permutation::identity(k));
            DTree::Node {
                sig: space.act(u, sig),
                x: x.transport(u, sig, *e),
                children: children.iter().map(|c| act_tree(c, x, g, sigma_inv)).collect(),
            }
        }
    }
}

type Planar = (DTree, Vec<usize>);

/// The natural description of the vertex-truncated free operad on X.
#[derive(Debug)]
pub struct FreeSpec {
    x: EqSymSeq,
    vertex_bound: usize,
    planar: RwLock<HashMap<usize, Arc<Vec<Planar>>>>,
}

impl FreeSpec {
    pub fn new(x: &EqSymSeq, vertex_bound: usize) -> Self {
        FreeSpec { x: x.clone(), vertex_bound, planar: RwLock::new(HashMap::new()) }
    }

    pub fn generators(&self) -> &EqSymSeq {
        &self.x
    }

    pub fn vertex_bound(&self) -> usize {
        self.vertex_bound
    }

    pub fn canonical(&self, t: &DTree) -> DTree {
        canonical(t, &self.x)
    }

    /// Planar trees with the given root color, leaves labeled 0.. in planar order.
    fn planar_trees(&self, root: usize) -> Arc<Vec<Planar>> {
        if let Some(p) = self.planar.read().unwrap().get(&root) {
            return p.clone();
        }
        let mut memo = HashMap::new();
        let mut trees = self.planar_rec(root, self.vertex_bound, &mut memo);
        let n_max = self.x.space().arity_bound();
        trees.retain(|(_, leaves)| leaves.len() <= n_max);
        let trees: Vec<Planar> = trees
            .into_iter()
            .map(|(t, leaves)| {
                let mut next = 0;
                (number_leaves(&t, &mut next), leaves)
            })
            .collect();
        let out = Arc::new(trees);
        self.planar.write().unwrap().insert(root, out.clone());
        out
    }

    fn planar_rec(&self, root: usize, budget: usize, memo: &mut HashMap<(usize, usize), Vec<Planar>>) -> Vec<Planar> {
        if let Some(v) = memo.get(&(root, budget)) {
            return v.clone();
        }
        let mut out = vec![(DTree::Leaf { label: 0, color: root }, vec![root])];
        if budget > 0 {
            for v in self.x.support_members() {
                if v.root() != root {
                    continue;
                }
                let child_options: Vec<Vec<Planar>> =
                    v.leaves().iter().map(|&c| self.planar_rec(c, budget - 1, memo)).collect();
                for e in 0..self.x.size_at(&v) {
                    let mut partial: Vec<(Vec<DTree>, Vec<usize>, usize)> = vec![(vec![], vec![], 1)];
                    for opts in &child_options {
                        let mut next = Vec::new();
                        for (kids, leaves, used) in &partial {
                            for (t, l) in opts {
                                let u = used + t.vertex_count();
                                if u <= budget {
                                    let mut k2 = kids.clone();
                                    k2.push(t.clone());
                                    let mut l2 = leaves.clone();
                                    l2.extend(l);
                                    next.push((k2, l2, u));
                                }
                            }
                        }
                        partial = next;
                    }
                    for (kids, leaves, _) in partial {
                        out.push((DTree::Node { sig: v.clone(), x: e, children: kids }, leaves));
                    }
                }
            }
        }
        memo.insert((root, budget), out.clone());
        out
    }
}

fn number_leaves(t: &DTree, next: &mut usize) -> DTree {
    match t {
        DTree::Leaf { color, .. } => {
            *next += 1;
            DTree::Leaf { label: *next - 1, color: *color }
        }
        DTree::Node { sig, x, children } => DTree::Node {
            sig: sig.clone(),
            x: *x,
            children: children.iter().map(|c| number_leaves(c, next)).collect(),
        },
    }
}

impl NaturalSeq for FreeSpec {
    type E = DTree;

    fn elements(&self, sig: &Signature) -> Vec<DTree> {
        let mut want: Vec<usize> = sig.leaves().to_vec();
        want.sort_unstable();
        let n = sig.arity();
        let perms = Permutation::all(n);
        let mut out = BTreeSet::new();
        for (t, leaves) in self.planar_trees(sig.root()).iter() {
            let mut have = leaves.clone();
            have.sort_unstable();
            if have != want {
                continue;
            }
            for p in &perms {
                if (0..n).all(|pos| sig.leaves()[p.apply(pos)] == leaves[pos]) {
                    out.insert(self.canonical(&t.relabel(&|pos| p.apply(pos))));
                }
            }
        }
        out.into_iter().collect()
    }

    fn act(&self, u: usize, sig: &Signature, e: &DTree) -> DTree {
        let space = self.x.space();
        let (g, sigma) = space.product(sig.arity()).product_info().unwrap().split(u);
        self.canonical(&act_tree(e, &self.x, g, &sigma.inverse()))
    }
}

impl OperadSpec for FreeSpec {
    fn unit(&self, color: usize) -> DTree {
        DTree::Leaf { label: 0, color }
    }

    fn compose(&self, _: &Signature, slot: usize, inner: &Signature, x: &DTree, y: &DTree) -> Option<DTree> {
        if x.vertex_count() + y.vertex_count() > self.vertex_bound {
            return None;
        }
        Some(self.canonical(&x.graft_at(slot, y, inner.arity())))
    }
}

/// The free operad FX truncated at `vertex_bound` vertices, with the inclusion X → FX.
#[derive(Debug)]
pub struct FreeOperad {
    pub operad: TruncatedOperad,
    pub catalog: Catalog<DTree>,
    pub spec: FreeSpec,
    pub inclusion: SymSeqMap,
}

impl FreeOperad {
    pub fn tree(&self, sig: &Signature, x: usize) -> DTree {
        self.catalog.natural(self.operad.space(), &self.spec, sig, x)
    }

    pub fn index(&self, sig: &Signature, t: &DTree) -> Option<usize> {
        self.catalog.index(self.operad.space(), &self.spec, sig, &self.spec.canonical(t))
    }
}

pub fn free_operad(x: &EqSymSeq, vertex_bound: usize) -> Result<FreeOperad> {
    if vertex_bound == 0 && x.total_size() > 0 {
        return Err(Error::Bound("a vertex bound of 0 cannot contain the generators".into()));
    }
    let space = x.space().clone();
    let spec = FreeSpec::new(x, vertex_bound);
    let (operad, catalog) = materialize(&space, &spec, None)?;
    let maps = x
        .levels()
        .iter()
        .map(|(r, l)| {
            let row = (0..l.size)
                .map(|e| catalog.index(&space, &spec, r, &spec.canonical(&DTree::corolla(r, e))).unwrap())
                .collect();
            (r.clone(), row)
        })
        .collect();
    let inclusion = SymSeqMap { color_map: (0..space.colors().size()).collect(), maps };
    Ok(FreeOperad { operad, catalog, spec, inclusion })
}

/// Evaluates a decorated tree in O, reading vertex `(v, x)` as `value(v, x)` ∈ O(φv).
/// Returns the element at φ(sig); `None` if a composition leaves O's bounds.
pub fn evaluate_tree(
    t: &DTree,
    sig: &Signature,
    o: &TruncatedOperad,
    phi: &[usize],
    value: &dyn Fn(&Signature, usize) -> Option<usize>,
) -> Option<usize> {
    let (psig, e, labels) = eval_planar(t, o, phi, value)?;
    let n = labels.len();
    let mut inv = vec![0; n];
    for (p, &l) in labels.iter().enumerate() {
        inv[l] = p;
    }
    let pi = Permutation::from_images(inv).ok()?;
    let u = o.space().product(n).product_info().unwrap().join(o.group().identity(), &pi);
    debug_assert_eq!(o.space().act(u, &psig), sig.map_colors(phi));
    Some(o.transport(u, &psig, e))
}

fn eval_planar(
    t: &DTree,
    o: &TruncatedOperad,
    phi: &[usize],
    value: &dyn Fn(&Signature, usize) -> Option<usize>,
) -> Option<(Signature, usize, Vec<usize>)> {
    match t {
        DTree::Leaf { label, color } => Some((Signature::unit(phi[*color]), o.unit(phi[*color]), vec![*label])),
        DTree::Node { sig, x, children } => {
            let mut cur_sig = sig.map_colors(phi);
            let mut cur = value(sig, *x)?;
            let evals: Vec<(Signature, usize, Vec<usize>)> =
                children.iter().map(|c| eval_planar(c, o, phi, value)).collect::<Option<_>>()?;
            let mut order: Vec<usize> = (0..children.len()).collect();
            order.sort_by_key(|&j| (evals[j].0.arity(), j));
            let mut width = vec![1usize; children.len()];
            for j in order {
                let pos: usize = width[..j].iter().sum();
                let (csig, ce, _) = &evals[j];
                cur = o.compose(&cur_sig, pos, csig, cur, *ce)?;
                cur_sig = cur_sig.substitute(pos + 1, csig).ok()?;
                width[j] = csig.arity();
            }
            let labels = evals.into_iter().flat_map(|(_, _, l)| l).collect();
            Some((cur_sig, cur, labels))
        }
    }
}

/// The operad map FX → O corresponding to f: X → φ*O.
pub fn adjunction_transpose(fx: &FreeOperad, f: &SymSeqMap, o: &TruncatedOperad) -> Result<OperadMap> {
    let x = fx.spec.generators();
    f.is_valid(x, o.levels())?;
    let phi = &f.color_map;
    let value = |v: &Signature, e: usize| Some(f.apply(x, o.levels(), v, e));
    let mut maps = std::collections::BTreeMap::new();
    for (rep, lvl) in fx.operad.levels().levels() {
        let mut row = Vec::with_capacity(lvl.size);
        for e in 0..lvl.size {
            let t = fx.tree(rep, e);
            row.push(evaluate_tree(&t, rep, o, phi, &value).ok_or_else(|| {
                Error::Bound(format!("evaluating a tree at {:?} leaves the target bounds", rep.to_wire()))
            })?);
        }
        maps.insert(rep.clone(), row);
    }
    Ok(OperadMap { color_map: phi.clone(), levels: SymSeqMap { color_map: phi.clone(), maps } })
}

/// F(h): FX → FY for a map h: X → Y over the identity of colors.
pub fn free_map(h: &SymSeqMap, fx: &FreeOperad, fy: &FreeOperad) -> Result<OperadMap> {
    let (x, y) = (fx.spec.generators(), fy.spec.generators());
    if !h.color_map.iter().enumerate().all(|(i, &c)| i == c) {
        return invalid("free_map needs the identity on colors");
    }
    fn map_tree(t: &DTree, h: &SymSeqMap, x: &EqSymSeq, y: &EqSymSeq) -> DTree {
        match t {
            DTree::Leaf { .. } => t.clone(),
            DTree::Node { sig, x: e, children } => DTree::Node {
                sig: sig.clone(),
                x: h.apply(x, y, sig, *e),
                children: children.iter().map(|c| map_tree(c, h, x, y)).collect(),
            },
        }
    }
    let mut maps = std::collections::BTreeMap::new();
    for (rep, lvl) in fx.operad.levels().levels() {
        let row = (0..lvl.size)
            .map(|e| {
                let t = map_tree(&fx.tree(rep, e), h, x, y);
                fy.index(rep, &t).ok_or_else(|| Error::Bound("image tree outside the target bounds".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        maps.insert(rep.clone(), row);
    }
    Ok(OperadMap { color_map: h.color_map.clone(), levels: SymSeqMap { color_map: h.color_map.clone(), maps } })
}
