//! Finite groups as multiplication tables, permutations, the products
//! G × Σₙᵒᵖ, subgroup lattices and finite G-sets.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use crate::error::{invalid, Error, Result};

pub const DEFAULT_SYMMETRIC_BOUND: usize = 6;
pub const DEFAULT_SUBGROUP_BOUND: usize = 48;
const ASSOCIATIVITY_CHECK_LIMIT: usize = 64;

/// A permutation of {0,…,n-1}, stored 0-based; serialized 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { image: (0..n).collect() }
    }

    pub fn from_images(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &x in &image {
            if x >= n || seen[x] {
                return invalid(format!("{image:?} is not a bijection"));
            }
            seen[x] = true;
        }
        Ok(Permutation { image })
    }

    pub fn from_one_based(image: &[usize]) -> Result<Self> {
        if image.iter().any(|&x| x == 0) {
            return invalid("permutation images are 1-based");
        }
        Self::from_images(image.iter().map(|x| x - 1).collect())
    }

    /// Builds a permutation from 1-based cycles, e.g. `[[1,4],[2,3]]`.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut image: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cyc in cycles {
            for (k, &x) in cyc.iter().enumerate() {
                let y = cyc[(k + 1) % cyc.len()];
                if x == 0 || x > n || y == 0 || y > n || touched[x - 1] {
                    return invalid(format!("bad cycle {cyc:?} for arity {n}"));
                }
                touched[x - 1] = true;
                image[x - 1] = y - 1;
            }
        }
        Self::from_images(image)
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.image.iter().map(|x| x + 1).collect()
    }

    pub fn images(&self) -> &[usize] {
        &self.image
    }

    pub fn arity(&self) -> usize {
        self.image.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.arity(), other.arity(), "arity mismatch");
        Permutation { image: other.image.iter().map(|&i| self.image[i]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut image = vec![0; self.arity()];
        for (i, &x) in self.image.iter().enumerate() {
            image[x] = i;
        }
        Permutation { image }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// All permutations of arity `n` in lexicographic order of image arrays.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            out.push(Permutation { image: cur.clone() });
            // next lexicographic permutation
            let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
                break;
            };
            let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
            cur.swap(i, j);
            cur[i + 1..].reverse();
        }
        out
    }

    /// Position in the lexicographic listing of [`Permutation::all`].
    pub fn rank(&self) -> usize {
        let n = self.arity();
        let mut rank = 0;
        let mut fact = factorial(n);
        let mut used = vec![false; n];
        for (k, &x) in self.image.iter().enumerate() {
            fact /= n - k;
            let smaller = (0..x).filter(|&y| !used[y]).count();
            rank += smaller * fact;
            used[x] = true;
        }
        rank
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.arity()];
        let mut wrote = false;
        for start in 0..self.arity() {
            if seen[start] || self.image[start] == start {
                continue;
            }
            let mut cyc = vec![start + 1];
            seen[start] = true;
            let mut x = self.image[start];
            while x != start {
                seen[x] = true;
                cyc.push(x + 1);
                x = self.image[x];
            }
            let parts: Vec<String> = cyc.iter().map(|c| c.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
            wrote = true;
        }
        if !wrote {
            write!(f, "id")?;
        }
        Ok(())
    }
}

pub fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Data carried by groups built with [`product_sigma_op`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductInfo {
    base: FiniteGroup,
    arity: usize,
    perms: Vec<Permutation>,
}

impl ProductInfo {
    pub fn base(&self) -> &FiniteGroup {
        &self.base
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn perms(&self) -> &[Permutation] {
        &self.perms
    }

    /// The projection π_n to G.
    pub fn project(&self, x: usize) -> usize {
        x / self.perms.len()
    }

    pub fn perm(&self, x: usize) -> &Permutation {
        &self.perms[x % self.perms.len()]
    }

    pub fn split(&self, x: usize) -> (usize, &Permutation) {
        (self.project(x), self.perm(x))
    }

    pub fn join(&self, g: usize, sigma: &Permutation) -> usize {
        g * self.perms.len() + sigma.rank()
    }
}

/// A finite group given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<usize>,
    inv: Vec<usize>,
    identity: usize,
    labels: Option<Vec<String>>,
    product: Option<Box<ProductInfo>>,
}

impl FiniteGroup {
    /// Validates the table (range, identity, inverses, and associativity up to
    /// order 64) and builds the group.
    pub fn from_table(table: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self> {
        let order = table.len();
        if order == 0 {
            return invalid("group must be nonempty");
        }
        if table.iter().any(|row| row.len() != order || row.iter().any(|&x| x >= order)) {
            return invalid("multiplication table is not square or has out-of-range entries");
        }
        if let Some(l) = &labels {
            if l.len() != order {
                return invalid("label count differs from group order");
            }
        }
        let mul: Vec<usize> = table.into_iter().flatten().collect();
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| mul[e * order + x] == x && mul[x * order + e] == x))
            .ok_or_else(|| Error::Invalid("no two-sided identity".into()))?;
        let mut inv = vec![usize::MAX; order];
        for x in 0..order {
            let y = (0..order)
                .find(|&y| mul[y * order + x] == identity && mul[x * order + y] == identity)
                .ok_or_else(|| Error::Invalid(format!("element {x} has no inverse")))?;
            inv[x] = y;
        }
        let g = FiniteGroup { order, mul, inv, identity, labels, product: None };
        if order <= ASSOCIATIVITY_CHECK_LIMIT {
            for a in 0..order {
                for b in 0..order {
                    let ab = g.mul(a, b);
                    for c in 0..order {
                        if g.mul(ab, c) != g.mul(a, g.mul(b, c)) {
                            return invalid(format!("not associative at ({a},{b},{c})"));
                        }
                    }
                }
            }
        }
        Ok(g)
    }

    pub fn trivial() -> Self {
        FiniteGroup::from_table(vec![vec![0]], Some(vec!["e".into()])).unwrap()
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return invalid("cyclic group of order 0");
        }
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::from_table(table, Some((0..n).map(|k| k.to_string()).collect()))
    }

    /// Z/4 written multiplicatively as the quartic roots of unity 1, i, −1, −i.
    pub fn quartic_roots() -> Self {
        Self::cyclic(4)
            .unwrap()
            .with_labels(vec!["1".into(), "i".into(), "-1".into(), "-i".into()])
            .unwrap()
    }

    pub fn symmetric_group(n: usize) -> Result<Self> {
        Self::symmetric_group_bounded(n, DEFAULT_SYMMETRIC_BOUND)
    }

    /// Σₙ with the usual composition `σ·τ = σ∘τ`.
    pub fn symmetric_group_bounded(n: usize, bound: usize) -> Result<Self> {
        if n > bound {
            return Err(Error::Bound(format!("symmetric group of arity {n} exceeds bound {bound}")));
        }
        let perms = Permutation::all(n);
        let table = perms
            .iter()
            .map(|s| perms.iter().map(|t| s.compose(t).rank()).collect())
            .collect();
        FiniteGroup::from_table(table, Some(perms.iter().map(|p| p.to_string()).collect()))
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.order {
            return invalid("label count differs from group order");
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn label(&self, a: usize) -> String {
        match (&self.labels, &self.product) {
            (Some(l), _) => l[a].clone(),
            (None, Some(p)) => {
                let (g, s) = p.split(a);
                format!("({},{})", p.base.label(g), s)
            }
            _ => a.to_string(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.mul.chunks(self.order).map(|r| r.to_vec()).collect()
    }

    pub fn product_info(&self) -> Option<&ProductInfo> {
        self.product.as_deref()
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// `x a x⁻¹`.
    pub fn conj(&self, x: usize, a: usize) -> usize {
        self.mul(self.mul(x, a), self.inv(x))
    }
}

/// G × Σₙᵒᵖ with `(g,σ)·(h,τ) = (gh, τ∘σ)`; element `(g,σ)` has index
/// `g·n! + rank(σ)`.
pub fn product_sigma_op(g: &FiniteGroup, n: usize) -> Result<FiniteGroup> {
    if n > DEFAULT_SYMMETRIC_BOUND {
        return Err(Error::Bound(format!(
            "arity {n} exceeds symmetric bound {DEFAULT_SYMMETRIC_BOUND}"
        )));
    }
    let perms = Permutation::all(n);
    let s = perms.len();
    let order = g.order() * s;
    let mut mul = Vec::with_capacity(order * order);
    for a in 0..order {
        let (ga, sa) = (a / s, &perms[a % s]);
        for b in 0..order {
            let (gb, sb) = (b / s, &perms[b % s]);
            mul.push(g.mul(ga, gb) * s + sb.compose(sa).rank());
        }
    }
    let mut inv = vec![0; order];
    for a in 0..order {
        inv[a] = g.inv(a / s) * s + perms[a % s].inverse().rank();
    }
    Ok(FiniteGroup {
        order,
        mul,
        inv,
        identity: g.identity() * s,
        labels: None,
        product: Some(Box::new(ProductInfo { base: g.clone(), arity: n, perms })),
    })
}

/// A subgroup, recorded as the sorted list of its element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    members: Vec<usize>,
}

impl Subgroup {
    pub fn trivial(g: &FiniteGroup) -> Self {
        Subgroup { members: vec![g.identity()] }
    }

    pub fn whole(g: &FiniteGroup) -> Self {
        Subgroup { members: g.elements().collect() }
    }

    pub fn generated(g: &FiniteGroup, gens: &[usize]) -> Self {
        Subgroup { members: closure(g, &[g.identity()], gens) }
    }

    pub fn from_members(g: &FiniteGroup, members: &[usize]) -> Result<Self> {
        let set: HashSet<usize> = members.iter().copied().collect();
        if members.iter().any(|&x| x >= g.order()) {
            return invalid("subgroup member out of range");
        }
        if !set.contains(&g.identity()) {
            return invalid("subgroup must contain the identity");
        }
        for &a in &set {
            if !set.contains(&g.inv(a)) || set.iter().any(|&b| !set.contains(&g.mul(a, b))) {
                return invalid(format!("{members:?} is not closed"));
            }
        }
        let mut members: Vec<usize> = set.into_iter().collect();
        members.sort_unstable();
        Ok(Subgroup { members })
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    pub fn position(&self, x: usize) -> Option<usize> {
        self.members.binary_search(&x).ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&x| other.contains(x))
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    /// A small generating set, found greedily.
    pub fn generators(&self, g: &FiniteGroup) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut cur = vec![g.identity()];
        for &x in &self.members {
            if cur.binary_search(&x).is_err() {
                gens.push(x);
                cur = closure(g, &cur, &gens);
            }
        }
        gens
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        Subgroup { members: self.members.iter().copied().filter(|&x| other.contains(x)).collect() }
    }

    /// The image π_n(Λ) ≤ G of a subgroup of a product group.
    pub fn project(&self, prod: &FiniteGroup) -> Result<Subgroup> {
        let info = prod.product_info().ok_or_else(|| Error::Invalid("not a product group".into()))?;
        let mut members: Vec<usize> = self.members.iter().map(|&x| info.project(x)).collect();
        members.sort_unstable();
        members.dedup();
        Ok(Subgroup { members })
    }
}

/// Sorted closure of `start ∪ gens` under multiplication by `gens` (on the right).
fn closure(g: &FiniteGroup, start: &[usize], gens: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; g.order()];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for &x in start.iter().chain(std::iter::once(&g.identity())) {
        if !seen[x] {
            seen[x] = true;
            queue.push_back(x);
        }
    }
    while let Some(x) = queue.pop_front() {
        for &s in start.iter().chain(gens) {
            let y = g.mul(x, s);
            if !seen[y] {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    }
    (0..g.order()).filter(|&x| seen[x]).collect()
}

pub fn conjugate(g: &FiniteGroup, h: &Subgroup, x: usize) -> Subgroup {
    let mut members: Vec<usize> = h.members.iter().map(|&a| g.conj(x, a)).collect();
    members.sort_unstable();
    Subgroup { members }
}

pub fn enumerate_subgroups(g: &FiniteGroup) -> Result<Vec<Subgroup>> {
    enumerate_subgroups_bounded(g, DEFAULT_SUBGROUP_BOUND)
}

pub fn enumerate_subgroups_bounded(g: &FiniteGroup, bound: usize) -> Result<Vec<Subgroup>> {
    if g.order() > bound {
        return Err(Error::Bound(format!(
            "subgroup enumeration for order {} exceeds bound {bound}",
            g.order()
        )));
    }
    Ok(enumerate_subgroups_where(g, |_| true))
}

/// All subgroups satisfying a predicate that is inherited by subgroups,
/// by cyclic extension from the trivial subgroup. Ordered by
/// (order, member list).
pub fn enumerate_subgroups_where(g: &FiniteGroup, pred: impl Fn(&Subgroup) -> bool) -> Vec<Subgroup> {
    let triv = Subgroup::trivial(g);
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    seen.insert(triv.members.clone());
    let mut found = vec![(triv, Vec::<usize>::new())];
    let mut frontier = 0;
    while frontier < found.len() {
        let (s, gens) = found[frontier].clone();
        frontier += 1;
        for x in g.elements() {
            if s.contains(x) {
                continue;
            }
            let mut ng = gens.clone();
            ng.push(x);
            let members = closure(g, &s.members, &ng);
            if seen.contains(&members) {
                continue;
            }
            seen.insert(members.clone());
            let t = Subgroup { members };
            if pred(&t) {
                found.push((t, ng));
            }
        }
    }
    let mut out: Vec<Subgroup> = found.into_iter().map(|(s, _)| s).collect();
    out.sort_by(|a, b| (a.order(), &a.members).cmp(&(b.order(), &b.members)));
    out
}

/// Data recovered from a graph subgroup Γ: its projection H and the
/// homomorphism φ: H → Σₙ with Γ = {(h, φ(h)⁻¹)}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphData {
    pub h: Subgroup,
    pub phi: Vec<(usize, Permutation)>,
}

impl GraphData {
    pub fn phi_of(&self, h: usize) -> Option<&Permutation> {
        self.phi.iter().find(|(x, _)| *x == h).map(|(_, p)| p)
    }
}

/// `Some(data)` iff Γ meets the Σₙᵒᵖ factor trivially.
pub fn is_graph_subgroup(prod: &FiniteGroup, gamma: &Subgroup) -> Result<Option<GraphData>> {
    let info = prod.product_info().ok_or_else(|| Error::Invalid("not a product group".into()))?;
    let e = info.base().identity();
    let mut phi: Vec<(usize, Permutation)> = Vec::new();
    for &x in gamma.members() {
        let (g, s) = info.split(x);
        if g == e && !s.is_identity() {
            return Ok(None);
        }
        phi.push((g, s.inverse()));
    }
    phi.sort();
    let h = gamma.project(prod)?;
    Ok(Some(GraphData { h, phi }))
}

/// A finite set with a left G-action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GSet {
    size: usize,
    action: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
}

impl GSet {
    pub fn from_table(g: &FiniteGroup, action: Vec<Vec<usize>>, labels: Option<Vec<String>>) -> Result<Self> {
        if action.len() != g.order() {
            return invalid("action table needs one row per group element");
        }
        let size = action.first().map_or(0, |r| r.len());
        if action.iter().any(|r| r.len() != size || r.iter().any(|&x| x >= size)) {
            return invalid("action rows have inconsistent size or out-of-range entries");
        }
        if let Some(l) = &labels {
            if l.len() != size {
                return invalid("label count differs from set size");
            }
        }
        if (0..size).any(|x| action[g.identity()][x] != x) {
            return invalid("identity does not act trivially");
        }
        for a in g.elements() {
            for b in g.elements() {
                let ab = g.mul(a, b);
                if (0..size).any(|x| action[ab][x] != action[a][action[b][x]]) {
                    return invalid(format!("action is not compatible at ({a},{b})"));
                }
            }
        }
        Ok(GSet { size, action, labels })
    }

    pub fn trivial(g: &FiniteGroup, size: usize) -> Self {
        GSet { size, action: vec![(0..size).collect(); g.order()], labels: None }
    }

    pub fn regular(g: &FiniteGroup) -> Self {
        GSet { size: g.order(), action: g.table(), labels: None }
    }

    /// G/H with left multiplication; cosets ordered by their smallest member.
    pub fn cosets(g: &FiniteGroup, h: &Subgroup) -> GSet {
        let mut coset_of = vec![usize::MAX; g.order()];
        let mut reps = Vec::new();
        for x in g.elements() {
            if coset_of[x] == usize::MAX {
                for &k in h.members() {
                    coset_of[g.mul(x, k)] = reps.len();
                }
                reps.push(x);
            }
        }
        let action = g
            .elements()
            .map(|a| reps.iter().map(|&r| coset_of[g.mul(a, r)]).collect())
            .collect();
        let labels = reps.iter().map(|&r| format!("[{}]", g.label(r))).collect();
        GSet { size: reps.len(), action, labels: Some(labels) }
    }

    pub fn disjoint_union(&self, other: &GSet) -> GSet {
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| a.iter().copied().chain(b.iter().map(|&x| x + self.size)).collect())
            .collect();
        let labels = match (&self.labels, &other.labels) {
            (None, None) => None,
            _ => Some((0..self.size).map(|x| self.label(x)).chain((0..other.size).map(|x| other.label(x))).collect()),
        };
        GSet { size: self.size + other.size, action, labels }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.size {
            return invalid("label count differs from set size");
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn act(&self, g: usize, x: usize) -> usize {
        self.action[g][x]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.action
    }

    pub fn label(&self, x: usize) -> String {
        self.labels.as_ref().map_or_else(|| x.to_string(), |l| l[x].clone())
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        (0..self.size).find(|&x| self.label(x) == label)
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.size];
        let mut out = Vec::new();
        for x in 0..self.size {
            if seen[x] {
                continue;
            }
            let mut orb: Vec<usize> = self.action.iter().map(|row| row[x]).collect();
            orb.sort_unstable();
            orb.dedup();
            for &y in &orb {
                seen[y] = true;
            }
            out.push(orb);
        }
        out
    }

    pub fn stabilizer(&self, g: &FiniteGroup, x: usize) -> Result<Subgroup> {
        if x >= self.size {
            return Err(Error::Invalid(format!("point {x} out of range")));
        }
        Ok(Subgroup { members: g.elements().filter(|&a| self.action[a][x] == x).collect() })
    }

    pub fn is_fixed(&self, x: usize, h: &Subgroup) -> bool {
        h.members().iter().all(|&a| self.action[a][x] == x)
    }

    pub fn fixed_points(&self, h: &Subgroup) -> Vec<usize> {
        (0..self.size).filter(|&x| self.is_fixed(x, h)).collect()
    }
}

pub fn fixed_points_gset(x: &GSet, h: &Subgroup) -> Vec<usize> {
    x.fixed_points(h)
}

pub fn is_equivariant_map(g: &FiniteGroup, x: &GSet, y: &GSet, f: &[usize]) -> bool {
    f.len() == x.size()
        && f.iter().all(|&v| v < y.size())
        && g.elements().all(|a| (0..x.size()).all(|p| f[x.act(a, p)] == y.act(a, f[p])))
}

/// Every G-map X → Y: choose a Stab(x)-fixed image per orbit representative.
pub fn equivariant_maps(g: &FiniteGroup, x: &GSet, y: &GSet) -> Vec<Vec<usize>> {
    let orbits = x.orbits();
    let choices: Vec<Vec<usize>> = orbits
        .iter()
        .map(|o| {
            let stab = x.stabilizer(g, o[0]).unwrap();
            y.fixed_points(&stab)
        })
        .collect();
    let mut out = Vec::new();
    let mut pick = vec![0usize; orbits.len()];
    if choices.iter().any(|c| c.is_empty()) {
        return out;
    }
    loop {
        let mut f = vec![usize::MAX; x.size()];
        for (o, orb) in orbits.iter().enumerate() {
            let target = choices[o][pick[o]];
            for a in g.elements() {
                f[x.act(a, orb[0])] = y.act(a, target);
            }
        }
        out.push(f);
        let mut k = 0;
        loop {
            if k == orbits.len() {
                return out;
            }
            pick[k] += 1;
            if pick[k] < choices[k].len() {
                break;
            }
            pick[k] = 0;
            k += 1;
        }
    }
}

/// Conjugacy classes of a list of subgroups, as index lists into `subs`.
pub fn conjugacy_classes(g: &FiniteGroup, subs: &[Subgroup]) -> Vec<Vec<usize>> {
    let index: HashMap<&Subgroup, usize> = subs.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut class = vec![usize::MAX; subs.len()];
    let mut out: Vec<Vec<usize>> = Vec::new();
    for i in 0..subs.len() {
        if class[i] != usize::MAX {
            continue;
        }
        let mut members = Vec::new();
        for x in g.elements() {
            let c = conjugate(g, &subs[i], x);
            if let Some(&j) = index.get(&c) {
                if class[j] == usize::MAX {
                    class[j] = out.len();
                    members.push(j);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}
