//! Signatures and their G × Σₙᵒᵖ action, colored planar trees and forests,
//! the forest G·C̄, grafting, and iso-class enumeration of colored trees.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::grp::{FiniteGroup, GSet, Permutation, ProductInfo};

pub const DEFAULT_VERTEX_BOUND: usize = 4;

/// A signature (𝔠₁,…,𝔠ₙ;𝔠₀). Stored root first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    cols: Vec<usize>,
}

impl Signature {
    pub fn new(leaves: &[usize], root: usize) -> Self {
        let mut cols = Vec::with_capacity(leaves.len() + 1);
        cols.push(root);
        cols.extend_from_slice(leaves);
        Signature { cols }
    }

    /// From `[c₀, c₁, …, cₙ]`.
    pub fn from_raw(cols: Vec<usize>) -> Self {
        assert!(!cols.is_empty(), "a signature has a root");
        Signature { cols }
    }

    /// From the wire layout `[c₁, …, cₙ, c₀]`.
    pub fn from_wire(wire: &[usize]) -> Result<Self> {
        let (&root, leaves) = wire.split_last().ok_or_else(|| Error::Invalid("empty signature".into()))?;
        Ok(Signature::new(leaves, root))
    }

    pub fn to_wire(&self) -> Vec<usize> {
        let mut w = self.leaves().to_vec();
        w.push(self.root());
        w
    }

    pub fn unit(c: usize) -> Self {
        Signature { cols: vec![c, c] }
    }

    pub fn arity(&self) -> usize {
        self.cols.len() - 1
    }

    pub fn root(&self) -> usize {
        self.cols[0]
    }

    pub fn leaves(&self) -> &[usize] {
        &self.cols[1..]
    }

    /// Color at position `i`, with 0 the root.
    pub fn at(&self, i: usize) -> usize {
        self.cols[i]
    }

    pub fn raw(&self) -> &[usize] {
        &self.cols
    }

    pub fn check(&self, colors: &GSet) -> Result<()> {
        if self.cols.iter().any(|&c| c >= colors.size()) {
            return invalid(format!("signature {:?} has colors out of range", self.to_wire()));
        }
        Ok(())
    }

    /// Substitutes `inner` at leaf `slot` (1-based); requires matching colors.
    pub fn substitute(&self, slot: usize, inner: &Signature) -> Result<Signature> {
        if slot == 0 || slot > self.arity() {
            return invalid(format!("slot {slot} out of range for arity {}", self.arity()));
        }
        if self.cols[slot] != inner.root() {
            return invalid("color mismatch in substitution");
        }
        let mut cols = self.cols[..slot].to_vec();
        cols.extend_from_slice(inner.leaves());
        cols.extend_from_slice(&self.cols[slot + 1..]);
        Ok(Signature { cols })
    }

    pub fn map_colors(&self, f: &[usize]) -> Signature {
        Signature { cols: self.cols.iter().map(|&c| f[c]).collect() }
    }

    pub fn display(&self, colors: &GSet) -> String {
        let leaves: Vec<String> = self.leaves().iter().map(|&c| colors.label(c)).collect();
        format!("({};{})", leaves.join(","), colors.label(self.root()))
    }
}

/// `(g,σ)·C̄ = (g𝔠_{σ(1)},…,g𝔠_{σ(n)}; g𝔠₀)`.
pub fn act_signature(prod: &FiniteGroup, colors: &GSet, u: usize, sig: &Signature) -> Result<Signature> {
    let info = prod.product_info().ok_or_else(|| Error::Invalid("not a product group".into()))?;
    if info.arity() != sig.arity() {
        return Err(Error::Invalid(format!(
            "arity mismatch: element of G×Σ{}ᵒᵖ on a signature of arity {}",
            info.arity(),
            sig.arity()
        )));
    }
    if u >= prod.order() {
        return invalid("group element out of range");
    }
    Ok(act_unchecked(info, colors, u, sig))
}

pub(crate) fn act_unchecked(info: &ProductInfo, colors: &GSet, u: usize, sig: &Signature) -> Signature {
    let (g, s) = info.split(u);
    let mut cols = Vec::with_capacity(sig.cols.len());
    cols.push(colors.act(g, sig.cols[0]));
    for i in 0..sig.arity() {
        cols.push(colors.act(g, sig.cols[1 + s.apply(i)]));
    }
    Signature { cols }
}

/// A colored planar tree. `children: None` is a bare edge; `Some(vec![])` is a stump.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Tree {
    pub color: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub children: Option<Vec<Tree>>,
}

impl Tree {
    pub fn edge(color: usize) -> Tree {
        Tree { color, children: None }
    }

    pub fn vertex(color: usize, children: Vec<Tree>) -> Tree {
        Tree { color, children: Some(children) }
    }

    pub fn corolla(sig: &Signature) -> Tree {
        Tree::vertex(sig.root(), sig.leaves().iter().map(|&c| Tree::edge(c)).collect())
    }

    pub fn is_edge(&self) -> bool {
        self.children.is_none()
    }

    pub fn vertex_count(&self) -> usize {
        match &self.children {
            None => 0,
            Some(ch) => 1 + ch.iter().map(Tree::vertex_count).sum::<usize>(),
        }
    }

    /// Number of edges, i.e. nodes in preorder.
    pub fn size(&self) -> usize {
        1 + self.children.as_ref().map_or(0, |ch| ch.iter().map(Tree::size).sum())
    }

    pub fn leaf_colors(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match &self.children {
            None => out.push(self.color),
            Some(ch) => ch.iter().for_each(|c| c.collect_leaves(out)),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match &self.children {
            None => 1,
            Some(ch) => ch.iter().map(Tree::leaf_count).sum(),
        }
    }

    pub fn max_vertex_arity(&self) -> usize {
        match &self.children {
            None => 0,
            Some(ch) => ch.iter().map(Tree::max_vertex_arity).fold(ch.len(), usize::max),
        }
    }

    /// Signatures of all vertices, in preorder.
    pub fn vertex_signatures(&self) -> Vec<Signature> {
        let mut out = Vec::new();
        self.collect_vertices(&mut out);
        out
    }

    fn collect_vertices(&self, out: &mut Vec<Signature>) {
        if let Some(ch) = &self.children {
            out.push(Signature::new(&ch.iter().map(|c| c.color).collect::<Vec<_>>(), self.color));
            ch.iter().for_each(|c| c.collect_vertices(out));
        }
    }

    pub fn map_colors(&self, f: &dyn Fn(usize) -> usize) -> Tree {
        Tree {
            color: f(self.color),
            children: self.children.as_ref().map(|ch| ch.iter().map(|c| c.map_colors(f)).collect()),
        }
    }

    /// Unordered canonical form: children recursively canonical and sorted.
    pub fn canonical(&self) -> Tree {
        Tree {
            color: self.color,
            children: self.children.as_ref().map(|ch| {
                let mut v: Vec<Tree> = ch.iter().map(Tree::canonical).collect();
                v.sort();
                v
            }),
        }
    }

    pub fn is_isomorphic(&self, other: &Tree) -> bool {
        self.canonical() == other.canonical()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("trees serialize")
    }
}

/// (𝔠(l₁),…,𝔠(lₙ);𝔠(r)) in planar leaf order.
pub fn leaf_root(t: &Tree) -> Signature {
    Signature::new(&t.leaf_colors(), t.color)
}

pub fn leaf_root_forest(forest: &[Tree]) -> Result<Signature> {
    match forest {
        [t] => Ok(leaf_root(t)),
        _ => invalid(format!("leaf-root needs a single tree, got {} components", forest.len())),
    }
}

/// Replaces planar leaf `leaf` (0-based) of `t` by `s`.
pub fn graft(t: &Tree, leaf: usize, s: &Tree) -> Result<Tree> {
    let mut counter = leaf;
    let out = graft_rec(t, &mut counter, s)?;
    out.ok_or_else(|| Error::Invalid(format!("leaf {leaf} out of range")))
}

fn graft_rec(t: &Tree, counter: &mut usize, s: &Tree) -> Result<Option<Tree>> {
    match &t.children {
        None => {
            if *counter == 0 {
                if t.color != s.color {
                    return invalid("color mismatch in grafting");
                }
                return Ok(Some(s.clone()));
            }
            *counter -= 1;
            Ok(None)
        }
        Some(ch) => {
            for (j, c) in ch.iter().enumerate() {
                if let Some(new) = graft_rec(c, counter, s)? {
                    let mut children = ch.clone();
                    children[j] = new;
                    return Ok(Some(Tree::vertex(t.color, children)));
                }
            }
            Ok(None)
        }
    }
}

/// All isomorphisms `a → b` as maps on preorder edge indices.
pub fn tree_isomorphisms(a: &Tree, b: &Tree) -> Vec<Vec<usize>> {
    if a.color != b.color {
        return vec![];
    }
    match (&a.children, &b.children) {
        (None, None) => vec![vec![0]],
        (Some(ca), Some(cb)) if ca.len() == cb.len() => {
            let offs = |ch: &Vec<Tree>| {
                let mut o = Vec::with_capacity(ch.len());
                let mut acc = 1;
                for c in ch {
                    o.push(acc);
                    acc += c.size();
                }
                o
            };
            let (oa, ob) = (offs(ca), offs(cb));
            let can_a: Vec<Tree> = ca.iter().map(Tree::canonical).collect();
            let can_b: Vec<Tree> = cb.iter().map(Tree::canonical).collect();
            let mut out = Vec::new();
            for pi in Permutation::all(ca.len()) {
                if (0..ca.len()).any(|j| can_a[j] != can_b[pi.apply(j)]) {
                    continue;
                }
                let parts: Vec<Vec<Vec<usize>>> =
                    (0..ca.len()).map(|j| tree_isomorphisms(&ca[j], &cb[pi.apply(j)])).collect();
                let mut partial: Vec<Vec<usize>> = vec![vec![0; a.size()]];
                for (j, isos) in parts.iter().enumerate() {
                    let mut next = Vec::new();
                    for p in &partial {
                        for iso in isos {
                            let mut q = p.clone();
                            for (k, &v) in iso.iter().enumerate() {
                                q[oa[j] + k] = ob[pi.apply(j)] + v;
                            }
                            next.push(q);
                        }
                    }
                    partial = next;
                }
                out.extend(partial);
            }
            out.sort();
            out
        }
        _ => vec![],
    }
}

/// Color- and root-preserving automorphisms, as permutations of preorder edges.
pub fn tree_automorphisms(t: &Tree) -> Vec<Vec<usize>> {
    tree_isomorphisms(t, t)
}

/// Preorder indices of the leaves of `t`, in planar order.
pub fn leaf_positions(t: &Tree) -> Vec<usize> {
    fn go(t: &Tree, pos: &mut usize, out: &mut Vec<usize>) {
        let here = *pos;
        *pos += 1;
        match &t.children {
            None => out.push(here),
            Some(ch) => ch.iter().for_each(|c| go(c, pos, out)),
        }
    }
    let mut out = Vec::new();
    go(t, &mut 0, &mut out);
    out
}

/// The G-free forest G·C̄: component ḡ is the corolla ḡC̄, edges are G × {0,…,n}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GCorollaForest {
    arity: usize,
    components: Vec<Signature>,
}

pub fn g_dot_corolla(group: &FiniteGroup, colors: &GSet, sig: &Signature) -> GCorollaForest {
    let components = group
        .elements()
        .map(|g| Signature { cols: sig.cols.iter().map(|&c| colors.act(g, c)).collect() })
        .collect();
    GCorollaForest { arity: sig.arity(), components }
}

impl GCorollaForest {
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn components(&self) -> &[Signature] {
        &self.components
    }

    pub fn trees(&self) -> Vec<Tree> {
        self.components.iter().map(Tree::corolla).collect()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.components.len()).flat_map(|g| (0..=self.arity).map(move |i| (g, i))).collect()
    }

    pub fn edge_color(&self, edge: (usize, usize)) -> usize {
        self.components[edge.0].cols[edge.1]
    }

    /// The G-action permuting components: `h·ḡ = hḡ`.
    pub fn act_component(&self, group: &FiniteGroup, h: usize, gbar: usize) -> usize {
        group.mul(h, gbar)
    }

    /// The right action `(ḡ,i)·(g,σ) = (ḡg, σ(i))`, with σ(0) = 0.
    pub fn right_act_edge(&self, prod: &FiniteGroup, edge: (usize, usize), u: usize) -> (usize, usize) {
        let info = prod.product_info().expect("product group");
        let (g, s) = info.split(u);
        let i = if edge.1 == 0 { 0 } else { 1 + s.apply(edge.1 - 1) };
        (info.base().mul(edge.0, g), i)
    }

    /// Whether components `a` and `b` are isomorphic in Σ_𝔠.
    pub fn isomorphic_components(&self, a: usize, b: usize) -> bool {
        let (x, y) = (&self.components[a], &self.components[b]);
        let mut lx = x.leaves().to_vec();
        let mut ly = y.leaves().to_vec();
        lx.sort_unstable();
        ly.sort_unstable();
        x.root() == y.root() && lx == ly
    }
}

/// Options for [`enumerate_tree_classes`].
#[derive(Clone, Debug)]
pub struct TreeEnumeration {
    pub palette: usize,
    pub max_vertices: usize,
    /// Allowed vertex arities; `None` admits every arity that can occur.
    pub vertex_arities: Option<Vec<usize>>,
    pub vertex_bound: usize,
}

impl TreeEnumeration {
    pub fn new(palette: usize, max_vertices: usize) -> Self {
        TreeEnumeration { palette, max_vertices, vertex_arities: None, vertex_bound: DEFAULT_VERTEX_BOUND }
    }
}

/// An isomorphism class of colored trees with a marker C̄ ≅ lr(T̄).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeIsoClass {
    pub representative: Tree,
    pub automorphisms: Vec<Vec<usize>>,
    /// `marker.apply(j)` is the planar leaf of the representative matched with leaf `j` of C̄.
    pub marker: Permutation,
}

/// Iso classes of trees T̄ with at most `max_vertices` vertices and lr(T̄) ≅ C̄.
pub fn enumerate_tree_classes(sig: &Signature, opts: &TreeEnumeration) -> Result<Vec<TreeIsoClass>> {
    if opts.max_vertices > opts.vertex_bound {
        return Err(Error::Bound(format!(
            "vertex count {} exceeds bound {}",
            opts.max_vertices, opts.vertex_bound
        )));
    }
    if sig.cols.iter().any(|&c| c >= opts.palette) {
        return invalid("signature colors outside the palette");
    }
    let n = sig.arity();
    let mut target = sig.leaves().to_vec();
    target.sort_unstable();
    let max_arity = n + opts.max_vertices;
    let allowed = |a: usize| opts.vertex_arities.as_ref().map_or(a <= max_arity, |v| v.contains(&a));
    let trees = gen_trees(sig.root(), opts.max_vertices, n, opts.palette, &allowed);
    let mut out = Vec::new();
    for t in trees {
        let mut leaves = t.leaf_colors();
        leaves.sort_unstable();
        if leaves != target {
            continue;
        }
        let planar = t.leaf_colors();
        let mut used = vec![false; planar.len()];
        let mut marker = Vec::with_capacity(n);
        for &c in sig.leaves() {
            let k = (0..planar.len()).find(|&k| !used[k] && planar[k] == c).unwrap();
            used[k] = true;
            marker.push(k);
        }
        out.push(TreeIsoClass {
            automorphisms: tree_automorphisms(&t),
            marker: Permutation::from_images(marker).unwrap(),
            representative: t,
        });
    }
    Ok(out)
}

/// Canonical trees with root color `c`, at most `budget` vertices and `max_leaves` leaves.
fn gen_trees(c: usize, budget: usize, max_leaves: usize, palette: usize, allowed: &dyn Fn(usize) -> bool) -> Vec<Tree> {
    let mut out: BTreeSet<Tree> = BTreeSet::new();
    if max_leaves >= 1 {
        out.insert(Tree::edge(c));
    }
    if budget == 0 {
        return out.into_iter().collect();
    }
    // candidate children: any canonical tree with fewer vertices
    let mut pool: Vec<Tree> = Vec::new();
    for col in 0..palette {
        pool.extend(gen_trees(col, budget - 1, max_leaves, palette, allowed));
    }
    pool.sort();
    pool.dedup();
    let max_arity = max_leaves + budget - 1;
    for arity in 0..=max_arity {
        if !allowed(arity) {
            continue;
        }
        let mut stack: Vec<(usize, Vec<Tree>, usize, usize)> = vec![(0, vec![], 0, 0)];
        while let Some((start, chosen, verts, leaves)) = stack.pop() {
            if chosen.len() == arity {
                out.insert(Tree::vertex(c, chosen));
                continue;
            }
            for k in start..pool.len() {
                let t = &pool[k];
                let (v, l) = (verts + t.vertex_count(), leaves + t.leaf_count());
                if v + 1 > budget || l > max_leaves {
                    continue;
                }
                let mut next = chosen.clone();
                next.push(t.clone());
                stack.push((k, next, v, l));
            }
        }
    }
    out.into_iter().collect()
}

/// Compact text rendering, e.g. `a[b[c],a[b,a[]]]`.
pub fn render_tree(t: &Tree, colors: &GSet) -> String {
    let mut s = colors.label(t.color);
    if let Some(ch) = &t.children {
        s.push('[');
        for (k, c) in ch.iter().enumerate() {
            if k > 0 {
                s.push(',');
            }
            let _ = write!(s, "{}", render_tree(c, colors));
        }
        s.push(']');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::{product_sigma_op, Subgroup};
    use proptest::prelude::*;

    fn abc() -> (FiniteGroup, GSet) {
        let g = FiniteGroup::trivial();
        let c = GSet::trivial(&g, 3).with_labels(vec!["a".into(), "b".into(), "c".into()]).unwrap();
        (g, c)
    }

    fn two_trees() -> (Tree, Tree) {
        let (a, b, c) = (0, 1, 2);
        let t = Tree::vertex(
            a,
            vec![
                Tree::vertex(a, vec![Tree::edge(b), Tree::vertex(a, vec![])]),
                Tree::vertex(b, vec![Tree::edge(c)]),
            ],
        );
        let s = Tree::vertex(a, vec![Tree::vertex(b, vec![Tree::vertex(c, vec![])])]);
        (t, s)
    }

    #[test]
    fn leaf_root_of_example_forest() {
        let (_, colors) = abc();
        let (t, s) = two_trees();
        assert_eq!(leaf_root(&t).display(&colors), "(b,c;a)");
        assert_eq!(leaf_root(&s).display(&colors), "(;a)");
        assert_eq!(leaf_root(&s).arity(), 0);
        assert_eq!(t.vertex_count(), 4);
        assert_eq!(s.vertex_count(), 3);
        assert!(leaf_root_forest(&[t, s]).is_err());
    }

    #[test]
    fn vertex_corollas_of_example_forest() {
        let (_, colors) = abc();
        let (t, s) = two_trees();
        let mut tv: Vec<String> = t.vertex_signatures().iter().map(|v| v.display(&colors)).collect();
        tv.sort();
        assert_eq!(tv, vec!["(;a)", "(a,b;a)", "(b,a;a)", "(c;b)"]);
        let sv: Vec<String> = s.vertex_signatures().iter().map(|v| v.display(&colors)).collect();
        assert_eq!(sv, vec!["(b;a)", "(c;b)", "(;c)"]);
    }

    #[test]
    fn corolla_leaf_root_is_its_signature() {
        let sig = Signature::new(&[1, 2, 0], 1);
        assert_eq!(leaf_root(&Tree::corolla(&sig)), sig);
        assert_eq!(Signature::from_wire(&sig.to_wire()).unwrap(), sig);
    }

    #[test]
    fn json_shape() {
        let t = Tree::vertex(0, vec![Tree::edge(1), Tree::vertex(2, vec![])]);
        let v = t.to_json();
        assert_eq!(v.to_string(), r#"{"children":[{"color":1},{"children":[],"color":2}],"color":0}"#);
        let back: Tree = serde_json::from_value(v).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn grafting_corollas() {
        let outer = Tree::corolla(&Signature::new(&[0, 1], 0));
        let inner = Tree::corolla(&Signature::new(&[2, 2, 2], 1));
        let g = graft(&outer, 1, &inner).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(leaf_root(&g), Signature::new(&[0, 2, 2, 2], 0));
        assert!(graft(&outer, 0, &inner).is_err());
        assert!(graft(&outer, 5, &inner).is_err());
    }

    #[test]
    fn grafting_every_leaf_adds_arities() {
        let outer = Tree::corolla(&Signature::new(&[0, 0, 0], 0));
        let ks = [2usize, 0, 3];
        let mut t = outer;
        let mut pos = 0;
        for &k in &ks {
            let inner = Tree::corolla(&Signature::new(&vec![0; k], 0));
            t = graft(&t, pos, &inner).unwrap();
            pos += k;
        }
        assert_eq!(leaf_root(&t).arity(), ks.iter().sum::<usize>());
        assert_eq!(t.vertex_count(), 4);
    }

    fn z4_example() -> (FiniteGroup, GSet) {
        let g = FiniteGroup::quartic_roots();
        let action = (0..4)
            .map(|k| {
                let mut row: Vec<usize> = (0..4).map(|x| (x + k) % 4).collect();
                row.extend((0..2).map(|x| 4 + (x + k) % 2));
                row
            })
            .collect();
        let labels = ["a", "ia", "-a", "-ia", "b", "ib"].iter().map(|s| s.to_string()).collect();
        (g.clone(), GSet::from_table(&g, action, Some(labels)).unwrap())
    }

    #[test]
    fn acting_by_i_on_example_corolla() {
        let (g, colors) = z4_example();
        let p = product_sigma_op(&g, 4).unwrap();
        let c = Signature::new(&[0, 5, 5, 2], 4);
        assert_eq!(c.display(&colors), "(a,ib,ib,-a;b)");
        let u = p.product_info().unwrap().join(1, &Permutation::identity(4));
        let ic = act_signature(&p, &colors, u, &c).unwrap();
        assert_eq!(ic.display(&colors), "(ia,b,b,-ia;ib)");
        assert!(act_signature(&p, &colors, u, &Signature::new(&[0], 0)).is_err());
    }

    #[test]
    fn g_dot_example_corolla() {
        let (g, colors) = z4_example();
        let c = Signature::new(&[0, 5, 5, 2], 4);
        let f = g_dot_corolla(&g, &colors, &c);
        let shown: Vec<String> = f.components().iter().map(|s| s.display(&colors)).collect();
        assert_eq!(shown, vec!["(a,ib,ib,-a;b)", "(ia,b,b,-ia;ib)", "(-a,ib,ib,a;b)", "(-ia,b,b,ia;ib)"]);
        assert!(f.isomorphic_components(0, 2));
        assert!(f.isomorphic_components(1, 3));
        assert!(!f.isomorphic_components(0, 1));
        assert_eq!(f.edges().len(), 4 * 5);
        assert_eq!(f.act_component(&g, 1, 3), 0);
    }

    #[test]
    fn right_edge_action_is_an_action() {
        let (g, colors) = z4_example();
        let p = product_sigma_op(&g, 3).unwrap();
        let f = g_dot_corolla(&g, &colors, &Signature::new(&[0, 4, 1], 4));
        for e in f.edges() {
            assert_eq!(f.right_act_edge(&p, e, p.identity()), e);
            for u in [5, 7, 13, 22] {
                for v in [1, 9, 17] {
                    let lhs = f.right_act_edge(&p, f.right_act_edge(&p, e, u), v);
                    assert_eq!(lhs, f.right_act_edge(&p, e, p.mul(u, v)));
                }
            }
        }
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(tree_automorphisms(&Tree::corolla(&Signature::new(&[0, 1, 2], 0))).len(), 1);
        assert_eq!(tree_automorphisms(&Tree::corolla(&Signature::new(&[0, 0], 0))).len(), 2);
        for n in 0..=4 {
            let t = Tree::corolla(&Signature::new(&vec![0; n], 0));
            // oracle: leaf permutations preserving colors
            let brute = Permutation::all(n).len();
            assert_eq!(tree_automorphisms(&t).len(), brute);
        }
        let t = Tree::vertex(0, vec![Tree::corolla(&Signature::new(&[0, 0], 0)), Tree::corolla(&Signature::new(&[0, 0], 0))]);
        assert_eq!(tree_automorphisms(&t).len(), 8);
    }

    #[test]
    fn unit_tree_classes() {
        let opts = TreeEnumeration::new(2, 0);
        let cls = enumerate_tree_classes(&Signature::unit(1), &opts).unwrap();
        assert_eq!(cls.len(), 1);
        assert!(cls[0].representative.is_edge());
        assert!(enumerate_tree_classes(&Signature::new(&[0], 1), &opts).unwrap().is_empty());
        assert!(enumerate_tree_classes(&Signature::new(&[0, 0], 0), &opts).unwrap().is_empty());
    }

    #[test]
    fn binary_corolla_class() {
        let opts = TreeEnumeration::new(1, 1);
        let cls = enumerate_tree_classes(&Signature::new(&[0, 0], 0), &opts).unwrap();
        assert_eq!(cls.len(), 1);
        assert_eq!(cls[0].automorphisms.len(), 2);
    }

    #[test]
    fn linear_unary_trees() {
        let mut opts = TreeEnumeration::new(1, 2);
        opts.vertex_arities = Some(vec![1]);
        let cls = enumerate_tree_classes(&Signature::new(&[0], 0), &opts).unwrap();
        let two: Vec<_> = cls.iter().filter(|c| c.representative.vertex_count() == 2).collect();
        assert_eq!(two.len(), 1);
        assert_eq!(cls.len(), 3);
        // stumps are ordinary vertices: a binary vertex over a stump also has lr = (0;0)
        let all = enumerate_tree_classes(&Signature::new(&[0], 0), &TreeEnumeration::new(1, 2)).unwrap();
        assert_eq!(all.iter().filter(|c| c.representative.vertex_count() == 2).count(), 2);
    }

    #[test]
    fn enumeration_bound() {
        let opts = TreeEnumeration::new(1, 5);
        assert!(matches!(enumerate_tree_classes(&Signature::unit(0), &opts), Err(Error::Bound(_))));
    }

    fn relabel_all(t: &Tree, out: &mut Vec<Tree>) {
        // every planar rearrangement of a tree
        match &t.children {
            None => out.push(t.clone()),
            Some(ch) => {
                let subs: Vec<Vec<Tree>> = ch
                    .iter()
                    .map(|c| {
                        let mut v = Vec::new();
                        relabel_all(c, &mut v);
                        v
                    })
                    .collect();
                for p in Permutation::all(ch.len()) {
                    let mut partial: Vec<Vec<Tree>> = vec![vec![]];
                    for j in 0..ch.len() {
                        let mut next = Vec::new();
                        for pre in &partial {
                            for s in &subs[p.apply(j)] {
                                let mut q = pre.clone();
                                q.push(s.clone());
                                next.push(q);
                            }
                        }
                        partial = next;
                    }
                    out.extend(partial.into_iter().map(|c| Tree::vertex(t.color, c)));
                }
            }
        }
    }

    #[test]
    fn classes_are_pairwise_non_isomorphic() {
        for (sig, k) in [(Signature::new(&[0, 1], 0), 3), (Signature::new(&[0, 0, 1], 1), 3), (Signature::new(&[], 0), 3)] {
            let cls = enumerate_tree_classes(&sig, &TreeEnumeration::new(2, k)).unwrap();
            for (i, a) in cls.iter().enumerate() {
                let mut variants = Vec::new();
                relabel_all(&a.representative, &mut variants);
                for b in &cls[i + 1..] {
                    assert!(!variants.contains(&b.representative));
                    assert!(tree_isomorphisms(&a.representative, &b.representative).is_empty());
                }
            }
        }
    }

    #[test]
    fn stabilizing_is_descent_of_coloring() {
        let (g, colors) = z4_example();
        let p = product_sigma_op(&g, 2).unwrap();
        let subs = crate::grp::enumerate_subgroups(&p).unwrap();
        for leaves in [[4usize, 5], [4, 4], [0, 2], [5, 5], [1, 3]] {
            for root in [4usize, 5, 0] {
                let sig = Signature::new(&leaves, root);
                let f = g_dot_corolla(&g, &colors, &sig);
                for l in &subs {
                    let descends = f.edges().iter().all(|&e| {
                        l.members().iter().all(|&u| f.edge_color(f.right_act_edge(&p, e, u)) == f.edge_color(e))
                    });
                    let stab = l.members().iter().all(|&u| act_signature(&p, &colors, u, &sig).unwrap() == sig);
                    assert_eq!(descends, stab);
                }
            }
        }
        let _ = Subgroup::trivial(&g);
    }

    proptest! {
        #[test]
        fn action_is_a_left_action(u in 0usize..96, v in 0usize..96, cols in proptest::collection::vec(0usize..6, 5)) {
            let (g, colors) = z4_example();
            let p = product_sigma_op(&g, 4).unwrap();
            let sig = Signature::from_raw(cols);
            let once = act_signature(&p, &colors, p.mul(u, v), &sig).unwrap();
            let twice = act_signature(&p, &colors, u, &act_signature(&p, &colors, v, &sig).unwrap()).unwrap();
            prop_assert_eq!(&once, &twice);
            prop_assert_eq!(act_signature(&p, &colors, p.identity(), &sig).unwrap(), sig);
        }

        #[test]
        fn graft_substitutes_leaf_root(n in 1usize..4, m in 0usize..4, slot in 0usize..4, c in 0usize..3) {
            let slot = slot % n;
            let mut outer_leaves = vec![0; n];
            outer_leaves[slot] = c;
            let outer = Tree::corolla(&Signature::new(&outer_leaves, 1));
            let inner = Tree::corolla(&Signature::new(&vec![2; m], c));
            let g = graft(&outer, slot, &inner).unwrap();
            let expect = leaf_root(&outer).substitute(slot + 1, &leaf_root(&inner)).unwrap();
            prop_assert_eq!(leaf_root(&g), expect);
            prop_assert_eq!(g.vertex_count(), outer.vertex_count() + inner.vertex_count());
        }
    }
}
