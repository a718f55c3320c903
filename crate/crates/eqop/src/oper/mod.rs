//! Arity-truncated colored G-operads in Set.

mod free;

pub use free::{adjunction_transpose, evaluate_tree, free_map, free_operad, DTree, FreeOperad, FreeSpec};

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use crate::cat::FinCategory;
use crate::error::{invalid, Error, Result};
use crate::fam::stabilizes_unchecked;
use crate::grp::{is_equivariant_map, FiniteGroup, GSet, Permutation, Subgroup};
use crate::sym::{Catalog, EqSymSeq, NaturalSeq, SigSpace, SymSeqMap};
use crate::tree::Signature;

/// A natural description of an operad, used to materialize tables.
pub trait OperadSpec: NaturalSeq {
    fn unit(&self, color: usize) -> Self::E;
    /// `x ∘_slot y` with a 0-based slot, or `None` when the graft leaves the bounds.
    fn compose(&self, outer: &Signature, slot: usize, inner: &Signature, x: &Self::E, y: &Self::E) -> Option<Self::E>;
}

type CompKey = (usize, usize, usize);

#[derive(Clone, Debug)]
pub struct TruncatedOperad {
    levels: EqSymSeq,
    units: Vec<usize>,
    sigs: Vec<Signature>,
    sig_ids: HashMap<Signature, usize>,
    comp: HashMap<CompKey, Vec<Option<usize>>>,
}

impl PartialEq for TruncatedOperad {
    fn eq(&self, other: &Self) -> bool {
        self.levels == other.levels && self.units == other.units && self.sigs == other.sigs && self.comp == other.comp
    }
}

/// Builds the tables of an operad from its natural description on the orbits
/// of `support` (all signatures when `None`).
pub fn materialize<S: OperadSpec + ?Sized>(
    space: &Arc<SigSpace>,
    spec: &S,
    support: Option<&[Signature]>,
) -> Result<(TruncatedOperad, Catalog<S::E>)> {
    let ncolors = space.colors().size();
    let sup: Vec<Signature> = match support {
        Some(s) => s.iter().cloned().chain((0..ncolors).map(Signature::unit)).collect(),
        None => space.all_orbit_reps(),
    };
    let (levels, catalog) = EqSymSeq::from_natural(space.clone(), spec, Some(&sup))?;
    let mut units = Vec::with_capacity(ncolors);
    for c in 0..ncolors {
        let u = catalog
            .index(space, spec, &Signature::unit(c), &spec.unit(c))
            .ok_or_else(|| Error::Invalid(format!("unit of color {} is not an element", space.colors().label(c))))?;
        units.push(u);
    }
    let members = levels.support_members();
    let sig_ids: HashMap<Signature, usize> = members.iter().enumerate().map(|(k, s)| (s.clone(), k)).collect();
    let naturals: HashMap<&Signature, Vec<S::E>> = members
        .iter()
        .map(|s| (s, (0..levels.size_at(s)).map(|x| catalog.natural(space, spec, s, x)).collect()))
        .collect();
    let mut by_root: BTreeMap<usize, Vec<&Signature>> = BTreeMap::new();
    for s in &members {
        by_root.entry(s.root()).or_default().push(s);
    }
    let n_max = space.arity_bound();
    let mut comp = HashMap::new();
    for s in &members {
        for i in 0..s.arity() {
            for &t in by_root.get(&s.leaves()[i]).map_or(&[][..], |v| v.as_slice()) {
                if s.arity() + t.arity() - 1 > n_max {
                    continue;
                }
                let r = s.substitute(i + 1, t)?;
                let mut table = Vec::with_capacity(naturals[s].len() * naturals[t].len());
                for x in &naturals[s] {
                    for y in &naturals[t] {
                        let z = match spec.compose(s, i, t, x, y) {
                            None => None,
                            Some(e) => Some(catalog.index(space, spec, &r, &e).ok_or_else(|| {
                                Error::Invalid(format!("composite at {:?} is not an element", r.to_wire()))
                            })?),
                        };
                        table.push(z);
                    }
                }
                comp.insert((sig_ids[s], i, sig_ids[t]), table);
            }
        }
    }
    Ok((TruncatedOperad { levels, units, sigs: members, sig_ids, comp }, catalog))
}

/// A single failed law with its witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub law: &'static str,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    pub checks: usize,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn record(&mut self, ok: bool, law: &'static str, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.violations.len() < 64 {
            self.violations.push(Violation { law, detail: detail() });
        }
    }
}

impl TruncatedOperad {
    pub fn space(&self) -> &Arc<SigSpace> {
        self.levels.space()
    }

    pub fn levels(&self) -> &EqSymSeq {
        &self.levels
    }

    pub fn colors(&self) -> &GSet {
        self.space().colors()
    }

    pub fn group(&self) -> &FiniteGroup {
        self.space().group()
    }

    pub fn arity_bound(&self) -> usize {
        self.space().arity_bound()
    }

    pub fn unit(&self, c: usize) -> usize {
        self.units[c]
    }

    pub fn size_at(&self, sig: &Signature) -> usize {
        self.levels.size_at(sig)
    }

    pub fn transport(&self, u: usize, sig: &Signature, x: usize) -> usize {
        self.levels.transport(u, sig, x)
    }

    /// `x ∘_slot y`; `None` if undefined within the bounds.
    pub fn compose(&self, outer: &Signature, slot: usize, inner: &Signature, x: usize, y: usize) -> Option<usize> {
        let table = self.comp.get(&self.key(outer, slot, inner)?)?;
        let m = self.levels.size_at(inner);
        *table.get(x * m + y)?
    }

    /// Like `compose`, but reports a partial-composition error.
    pub fn try_compose(&self, outer: &Signature, slot: usize, inner: &Signature, x: usize, y: usize) -> Result<usize> {
        self.compose(outer, slot, inner, x, y).ok_or_else(|| {
            Error::Bound(format!("composition {:?} ∘{} {:?} is outside the bounds", outer.to_wire(), slot + 1, inner.to_wire()))
        })
    }

    fn key(&self, outer: &Signature, slot: usize, inner: &Signature) -> Option<CompKey> {
        Some((*self.sig_ids.get(outer)?, slot, *self.sig_ids.get(inner)?))
    }

    /// Composition keys in a deterministic order.
    pub fn composition_keys(&self) -> Vec<(Signature, usize, Signature)> {
        let mut keys: Vec<_> = self.comp.keys().map(|&(a, i, b)| (self.sigs[a].clone(), i, self.sigs[b].clone())).collect();
        keys.sort();
        keys
    }

    /// Overwrites a single table entry, for fault injection.
    pub fn set_composition_entry(&mut self, outer: &Signature, slot: usize, inner: &Signature, x: usize, y: usize, z: Option<usize>) -> Result<()> {
        let m = self.levels.size_at(inner);
        let key = self.key(outer, slot, inner).ok_or_else(|| Error::Invalid("no such composition".into()))?;
        let table = self.comp.get_mut(&key).ok_or_else(|| Error::Invalid("no such composition".into()))?;
        let cell = table.get_mut(x * m + y).ok_or_else(|| Error::Invalid("entry out of range".into()))?;
        *cell = z;
        Ok(())
    }

    fn members_by_root(&self) -> BTreeMap<usize, Vec<Signature>> {
        let mut by_root: BTreeMap<usize, Vec<Signature>> = BTreeMap::new();
        for s in self.levels.support_members() {
            by_root.entry(s.root()).or_default().push(s);
        }
        by_root
    }

    fn perm_element(&self, n: usize, perm: &Permutation) -> usize {
        let prod = self.space().product(n);
        prod.product_info().unwrap().join(self.group().identity(), perm)
    }

    /// Checks units, presence of tables, unit laws, associativity, and
    /// equivariance against generators of G × Σᵒᵖ.
    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport::default();
        if let Err(e) = self.levels.validate() {
            rep.record(false, "levels", || e.to_string());
        }
        let space = self.space().clone();
        let g = self.group();
        let gens = Subgroup::whole(g).generators(g);
        let n_max = self.arity_bound();
        let colors = self.colors();
        for c in 0..colors.size() {
            let sig = Signature::unit(c);
            for &h in &gens {
                let u = space.product(1).product_info().unwrap().join(h, &Permutation::identity(1));
                let moved = self.transport(u, &sig, self.units[c]);
                rep.record(moved == self.units[colors.act(h, c)], "unit-equivariance", || {
                    format!("g={} moves the unit of {}", g.label(h), colors.label(c))
                });
            }
        }
        let by_root = self.members_by_root();
        let members = self.levels.support_members();
        for s in &members {
            for i in 0..s.arity() {
                for t in by_root.get(&s.leaves()[i]).map_or(&[][..], |v| v.as_slice()) {
                    if s.arity() + t.arity() - 1 <= n_max {
                        let present = self.key(s, i, t).is_some_and(|k| self.comp.contains_key(&k));
                        rep.record(present, "missing-table", || {
                            format!("{:?} ∘{} {:?}", s.to_wire(), i + 1, t.to_wire())
                        });
                    }
                }
            }
            for x in 0..self.size_at(s) {
                for i in 0..s.arity() {
                    let c = s.leaves()[i];
                    let r = self.compose(s, i, &Signature::unit(c), x, self.units[c]);
                    rep.record(r == Some(x), "right-unit", || format!("{:?} element {x} slot {}", s.to_wire(), i + 1));
                }
                let r = self.compose(&Signature::unit(s.root()), 0, s, self.units[s.root()], x);
                rep.record(r == Some(x), "left-unit", || format!("{:?} element {x}", s.to_wire()));
            }
        }
        for (s, i, t) in self.composition_keys() {
            let r = s.substitute(i + 1, &t).unwrap();
            let (n, m) = (s.arity(), t.arity());
            let (sx, sy) = (self.size_at(&s), self.size_at(&t));
            for x in 0..sx {
                for y in 0..sy {
                    let Some(z) = self.compose(&s, i, &t, x, y) else { continue };
                    self.check_associativity(&mut rep, &by_root, (&s, i, &t, &r), x, y, z);
                    for &h in &gens {
                        let (un, um, ur) = (
                            space.product(n).product_info().unwrap().join(h, &Permutation::identity(n)),
                            space.product(m).product_info().unwrap().join(h, &Permutation::identity(m)),
                            space.product(r.arity()).product_info().unwrap().join(h, &Permutation::identity(r.arity())),
                        );
                        let lhs = self.compose(&space.act(un, &s), i, &space.act(um, &t), self.transport(un, &s, x), self.transport(um, &t, y));
                        let rhs = self.transport(ur, &r, z);
                        rep.record(lhs == Some(rhs), "group-equivariance", || {
                            format!("g={} on {:?} ∘{} {:?} at ({x},{y})", g.label(h), s.to_wire(), i + 1, t.to_wire())
                        });
                    }
                    for a in 0..n.saturating_sub(1) {
                        let sigma = transposition(n, a);
                        let us = self.perm_element(n, &sigma);
                        let s2 = space.act(us, &s);
                        let j = sigma.apply(i);
                        let pi = outer_block_perm(&sigma, j, m);
                        let lhs = self.compose(&s2, j, &t, self.transport(us, &s, x), y);
                        let rhs = self.transport(self.perm_element(r.arity(), &pi), &r, z);
                        rep.record(lhs == Some(rhs), "outer-equivariance", || {
                            format!("({} {}) on {:?} ∘{} {:?} at ({x},{y})", a + 1, a + 2, s.to_wire(), i + 1, t.to_wire())
                        });
                    }
                    for a in 0..m.saturating_sub(1) {
                        let tau = transposition(m, a);
                        let ut = self.perm_element(m, &tau);
                        let t2 = space.act(ut, &t);
                        let pi = inner_block_perm(n, i, &tau);
                        let lhs = self.compose(&s, i, &t2, x, self.transport(ut, &t, y));
                        let rhs = self.transport(self.perm_element(r.arity(), &pi), &r, z);
                        rep.record(lhs == Some(rhs), "inner-equivariance", || {
                            format!("({} {}) on {:?} ∘{} {:?} at ({x},{y})", a + 1, a + 2, s.to_wire(), i + 1, t.to_wire())
                        });
                    }
                }
            }
        }
        rep
    }

    fn check_associativity(
        &self,
        rep: &mut ValidationReport,
        by_root: &BTreeMap<usize, Vec<Signature>>,
        (s, i, t, r): (&Signature, usize, &Signature, &Signature),
        x: usize,
        y: usize,
        z: usize,
    ) {
        let m = t.arity();
        for j in 0..r.arity() {
            for q in by_root.get(&r.leaves()[j]).map_or(&[][..], |v| v.as_slice()) {
                if r.arity() + q.arity() - 1 > self.arity_bound() {
                    continue;
                }
                let k = q.arity();
                for w in 0..self.size_at(q) {
                    let Some(lhs) = self.compose(r, j, q, z, w) else { continue };
                    let rhs = if j < i {
                        let sq = s.substitute(j + 1, q).unwrap();
                        self.compose(s, j, q, x, w).and_then(|a| self.compose(&sq, i + k - 1, t, a, y))
                    } else if j < i + m {
                        let tq = t.substitute(j - i + 1, q).unwrap();
                        self.compose(t, j - i, q, y, w).and_then(|b| self.compose(s, i, &tq, x, b))
                    } else {
                        let jj = j - m + 1;
                        let sq = s.substitute(jj + 1, q).unwrap();
                        self.compose(s, jj, q, x, w).and_then(|a| self.compose(&sq, i, t, a, y))
                    };
                    if let Some(rhs) = rhs {
                        rep.record(lhs == rhs, "associativity", || {
                            format!(
                                "({:?} ∘{} {:?}) ∘{} {:?} at ({x},{y},{w})",
                                s.to_wire(),
                                i + 1,
                                t.to_wire(),
                                j + 1,
                                q.to_wire()
                            )
                        });
                    }
                }
            }
        }
    }

    /// A two-sided inverse of a unary element, if any.
    pub fn inverse(&self, sig: &Signature, x: usize) -> Option<usize> {
        if sig.arity() != 1 {
            return None;
        }
        let (b, c) = (sig.leaves()[0], sig.root());
        let back = Signature::new(&[c], b);
        (0..self.size_at(&back)).find(|&y| {
            self.compose(&back, 0, sig, y, x) == Some(self.units[b]) && self.compose(sig, 0, &back, x, y) == Some(self.units[c])
        })
    }

    /// Simultaneous composition `x ∘ (y₁, …, yₙ)` with unary `yᵢ`.
    pub fn compose_unary_inputs(&self, sig: &Signature, x: usize, inputs: &[(Signature, usize)]) -> Option<(Signature, usize)> {
        let mut cur = (sig.clone(), x);
        for (i, (q, y)) in inputs.iter().enumerate().rev() {
            let z = self.compose(&cur.0, i, q, cur.1, *y)?;
            cur = (cur.0.substitute(i + 1, q).ok()?, z);
        }
        Some(cur)
    }
}

fn transposition(n: usize, a: usize) -> Permutation {
    let mut img: Vec<usize> = (0..n).collect();
    img.swap(a, a + 1);
    Permutation::from_images(img).unwrap()
}

/// π with (π·(s ∘_{σ(j)} t)) = (σ·s) ∘_j t.
fn outer_block_perm(sigma: &Permutation, j: usize, m: usize) -> Permutation {
    let n = sigma.arity();
    let i = sigma.apply(j);
    let shift = |k: usize| if k < i { k } else { k + m - 1 };
    let mut img = Vec::with_capacity(n + m - 1);
    for p in 0..n + m - 1 {
        img.push(if p < j {
            shift(sigma.apply(p))
        } else if p < j + m {
            i + (p - j)
        } else {
            shift(sigma.apply(p - m + 1))
        });
    }
    Permutation::from_images(img).unwrap()
}

/// π with (π·(s ∘_i t)) = s ∘_i (τ·t).
fn inner_block_perm(n: usize, i: usize, tau: &Permutation) -> Permutation {
    let m = tau.arity();
    let img = (0..n + m - 1).map(|p| if p >= i && p < i + m { i + tau.apply(p - i) } else { p }).collect();
    Permutation::from_images(img).unwrap()
}

/// An operad map: a G-equivariant color map and compatible level maps.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OperadMap {
    pub color_map: Vec<usize>,
    pub levels: SymSeqMap,
}

impl OperadMap {
    pub fn identity(o: &TruncatedOperad) -> Self {
        let levels = SymSeqMap::identity(&o.levels);
        OperadMap { color_map: levels.color_map.clone(), levels }
    }

    pub fn apply(&self, src: &TruncatedOperad, tgt: &TruncatedOperad, sig: &Signature, x: usize) -> usize {
        self.levels.apply(&src.levels, &tgt.levels, sig, x)
    }

    pub fn is_valid(&self, src: &TruncatedOperad, tgt: &TruncatedOperad) -> Result<()> {
        if self.color_map != self.levels.color_map {
            return invalid("level maps use a different color map");
        }
        self.levels.is_valid(&src.levels, &tgt.levels)?;
        for c in 0..src.colors().size() {
            if self.apply(src, tgt, &Signature::unit(c), src.unit(c)) != tgt.unit(self.color_map[c]) {
                return invalid(format!("unit of {} is not preserved", src.colors().label(c)));
            }
        }
        for (s, i, t) in src.composition_keys() {
            let (fs, ft) = (s.map_colors(&self.color_map), t.map_colors(&self.color_map));
            let r = s.substitute(i + 1, &t)?;
            for x in 0..src.size_at(&s) {
                for y in 0..src.size_at(&t) {
                    let Some(z) = src.compose(&s, i, &t, x, y) else { continue };
                    let fx = self.apply(src, tgt, &s, x);
                    let fy = self.apply(src, tgt, &t, y);
                    if let Some(w) = tgt.compose(&fs, i, &ft, fx, fy) {
                        if w != self.apply(src, tgt, &r, z) {
                            return invalid(format!("composition {:?} ∘{} {:?} is not preserved", s.to_wire(), i + 1, t.to_wire()));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &OperadMap, src: &TruncatedOperad, mid: &TruncatedOperad, tgt: &TruncatedOperad) -> OperadMap {
        let levels = self.levels.then(&g.levels, &src.levels, &mid.levels, &tgt.levels);
        OperadMap { color_map: levels.color_map.clone(), levels }
    }

    pub fn is_identity_on_colors(&self) -> bool {
        self.color_map.iter().enumerate().all(|(i, &c)| i == c)
    }
}

/// Every operad map O → P over the color map φ, found by backtracking with
/// propagation along compositions.
pub fn operad_maps(src: &TruncatedOperad, tgt: &TruncatedOperad, phi: &[usize], budget: u128) -> Result<Vec<OperadMap>> {
    if src.group() != tgt.group() || !is_equivariant_map(src.group(), src.colors(), tgt.colors(), phi) {
        return invalid("color map is not G-equivariant");
    }
    if src.arity_bound() > tgt.arity_bound() {
        return Err(Error::BoundMismatch("source bound above target bound".into()));
    }
    let search = MapSearch::new(src, tgt, phi);
    let mut vals = vec![None; search.slots];
    let mut queue = Vec::new();
    for c in 0..src.colors().size() {
        let sig = Signature::unit(c);
        let m = &search.members[&sig];
        let slot = search.offsets[m.rep] + m.to_rep[src.unit(c)];
        if !search.assign(&mut vals, &mut queue, slot, m.to_rep_t[tgt.unit(phi[c])]) {
            return Ok(vec![]);
        }
    }
    let mut out = Vec::new();
    let mut nodes = 0u128;
    search.run(vals, queue, budget, &mut nodes, &mut out)?;
    Ok(out
        .into_iter()
        .map(|vals| {
            let maps = search
                .reps
                .iter()
                .enumerate()
                .map(|(k, r)| (r.clone(), vals[search.offsets[k]..search.offsets[k + 1]].to_vec()))
                .collect();
            OperadMap { color_map: phi.to_vec(), levels: SymSeqMap { color_map: phi.to_vec(), maps } }
        })
        .collect())
}

/// How a signature sits in its orbit, on both sides of the map.
struct MemberInfo {
    rep: usize,
    /// Source element at the signature ↦ element at the representative.
    to_rep: Vec<usize>,
    /// Target element at φ(rep) ↦ element at φ(signature).
    from_rep_t: Vec<usize>,
    /// Target element at φ(signature) ↦ element at φ(rep).
    to_rep_t: Vec<usize>,
}

struct Entry<'a> {
    x: (usize, usize),
    y: (usize, usize),
    z: (usize, usize),
    table: &'a [Option<usize>],
    m: usize,
}

struct MapSearch<'a> {
    reps: Vec<Signature>,
    offsets: Vec<usize>,
    slots: usize,
    members: HashMap<Signature, MemberInfo>,
    /// Per slot, its image under each stabilizer element; per representative,
    /// the matching permutations of target elements.
    stab_moves: Vec<Vec<usize>>,
    stab_perms: Vec<Vec<Vec<usize>>>,
    slot_rep: Vec<usize>,
    target_sizes: Vec<usize>,
    entries: Vec<Entry<'a>>,
    /// For each slot, the entries using it as an input.
    watch: Vec<Vec<usize>>,
    member_list: Vec<Signature>,
    decomposable: Vec<bool>,
}

impl<'a> MapSearch<'a> {
    fn new(src: &'a TruncatedOperad, tgt: &'a TruncatedOperad, phi: &[usize]) -> Self {
        let space = src.space();
        let reps: Vec<Signature> = src.levels.levels().keys().cloned().collect();
        let mut offsets = vec![0];
        for r in &reps {
            offsets.push(offsets.last().unwrap() + src.size_at(r));
        }
        let slots = *offsets.last().unwrap();
        let mut stab_moves = vec![Vec::new(); slots];
        let mut stab_perms = Vec::with_capacity(reps.len());
        let mut slot_rep = vec![0; slots];
        let mut target_sizes = Vec::with_capacity(reps.len());
        for (k, r) in reps.iter().enumerate() {
            let (orb, _) = space.locate(r);
            let image = r.map_colors(phi);
            let m = tgt.size_at(&image);
            target_sizes.push(m);
            let lvl = &src.levels.levels()[r];
            let mut perms = Vec::new();
            for (j, &u) in orb.stab.members().iter().enumerate() {
                perms.push((0..m).map(|v| tgt.transport(u, &image, v)).collect());
                for x in 0..lvl.size {
                    stab_moves[offsets[k] + x].push(offsets[k] + lvl.action[j][x]);
                }
            }
            for x in 0..lvl.size {
                slot_rep[offsets[k] + x] = k;
            }
            stab_perms.push(perms);
        }
        let rep_index: HashMap<&Signature, usize> = reps.iter().enumerate().map(|(k, r)| (r, k)).collect();
        let member_list = src.levels.support_members();
        let mut members = HashMap::new();
        for s in &member_list {
            let (orb, t) = space.locate(s);
            let prod = space.product(s.arity());
            let tinv = prod.inv(t);
            let (image_rep, image) = (orb.rep.map_colors(phi), s.map_colors(phi));
            let m = tgt.size_at(&image);
            members.insert(
                s.clone(),
                MemberInfo {
                    rep: rep_index[&orb.rep],
                    to_rep: (0..src.size_at(s)).map(|x| src.transport(tinv, s, x)).collect(),
                    from_rep_t: (0..m).map(|v| tgt.transport(t, &image_rep, v)).collect(),
                    to_rep_t: (0..m).map(|v| tgt.transport(tinv, &image, v)).collect(),
                },
            );
        }
        let member_id: HashMap<&Signature, usize> = member_list.iter().enumerate().map(|(k, s)| (s, k)).collect();
        let is_unit = |s: &Signature, x: usize| s.arity() == 1 && s.root() == s.leaves()[0] && x == src.unit(s.root());
        let mut entries = Vec::new();
        let mut watch = vec![Vec::new(); slots];
        let mut decomposable = vec![false; slots];
        for (s, i, t) in src.composition_keys() {
            let r = s.substitute(i + 1, &t).unwrap();
            let Some(table) = tgt.comp.get(&match tgt.key(&s.map_colors(phi), i, &t.map_colors(phi)) {
                Some(k) => k,
                None => continue,
            }) else {
                continue;
            };
            let m = tgt.size_at(&t.map_colors(phi));
            let Some(mr) = members.get(&r) else { continue };
            let (ms, mt) = (&members[&s], &members[&t]);
            for x in 0..src.size_at(&s) {
                for y in 0..src.size_at(&t) {
                    let Some(z) = src.compose(&s, i, &t, x, y) else { continue };
                    let e = Entry {
                        x: (member_id[&s], offsets[ms.rep] + ms.to_rep[x]),
                        y: (member_id[&t], offsets[mt.rep] + mt.to_rep[y]),
                        z: (member_id[&r], offsets[mr.rep] + mr.to_rep[z]),
                        table,
                        m,
                    };
                    if !is_unit(&s, x) && !is_unit(&t, y) {
                        decomposable[e.z.1] = true;
                    }
                    let id = entries.len();
                    watch[e.x.1].push(id);
                    if e.y.1 != e.x.1 {
                        watch[e.y.1].push(id);
                    }
                    entries.push(e);
                }
            }
        }
        MapSearch {
            reps,
            offsets,
            slots,
            members,
            stab_moves,
            stab_perms,
            slot_rep,
            target_sizes,
            entries,
            watch,
            member_list,
            decomposable,
        }
    }

    fn info(&self, member: usize) -> &MemberInfo {
        &self.members[&self.member_list[member]]
    }

    /// Sets a slot to a target element at φ(rep), and its stabilizer orbit accordingly.
    fn assign(&self, vals: &mut [Option<usize>], queue: &mut Vec<usize>, slot: usize, v: usize) -> bool {
        let perms = &self.stab_perms[self.slot_rep[slot]];
        for (j, &s2) in self.stab_moves[slot].iter().enumerate() {
            let v2 = perms[j][v];
            match vals[s2] {
                Some(w) if w != v2 => return false,
                Some(_) => {}
                None => {
                    vals[s2] = Some(v2);
                    queue.push(s2);
                }
            }
        }
        true
    }

    fn propagate(&self, vals: &mut [Option<usize>], queue: &mut Vec<usize>) -> bool {
        while let Some(slot) = queue.pop() {
            for &id in &self.watch[slot] {
                let e = &self.entries[id];
                let (Some(vx), Some(vy)) = (vals[e.x.1], vals[e.y.1]) else { continue };
                let fx = self.info(e.x.0).from_rep_t[vx];
                let fy = self.info(e.y.0).from_rep_t[vy];
                let Some(w) = e.table[fx * e.m + fy] else { continue };
                let wr = self.info(e.z.0).to_rep_t[w];
                match vals[e.z.1] {
                    Some(c) if c != wr => return false,
                    Some(_) => {}
                    None => {
                        if !self.assign(vals, queue, e.z.1, wr) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn run(
        &self,
        mut vals: Vec<Option<usize>>,
        mut queue: Vec<usize>,
        budget: u128,
        nodes: &mut u128,
        out: &mut Vec<Vec<usize>>,
    ) -> Result<()> {
        *nodes += 1;
        if *nodes > budget {
            return Err(Error::Budget { needed: *nodes, budget });
        }
        if !self.propagate(&mut vals, &mut queue) {
            return Ok(());
        }
        let open = (0..self.slots)
            .find(|&s| vals[s].is_none() && !self.decomposable[s])
            .or_else(|| (0..self.slots).find(|&s| vals[s].is_none()));
        match open {
            None => {
                out.push(vals.into_iter().map(Option::unwrap).collect());
                Ok(())
            }
            Some(slot) => {
                for v in 0..self.target_sizes[self.slot_rep[slot]] {
                    let mut next = vals.clone();
                    let mut q = Vec::new();
                    if self.assign(&mut next, &mut q, slot, v) {
                        self.run(next, q, budget, nodes, out)?;
                    }
                }
                Ok(())
            }
        }
    }
}

/// Commutative monoid with G acting by automorphisms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActedMonoid {
    add: Vec<Vec<usize>>,
    act: Vec<Vec<usize>>,
    zero: usize,
}

impl ActedMonoid {
    pub fn new(g: &FiniteGroup, add: Vec<Vec<usize>>, act: Vec<Vec<usize>>, zero: usize) -> Result<Self> {
        let n = add.len();
        if n == 0 || add.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) || zero >= n {
            return invalid("malformed monoid table");
        }
        for a in 0..n {
            if add[zero][a] != a {
                return invalid("zero is not neutral");
            }
            for b in 0..n {
                if add[a][b] != add[b][a] {
                    return invalid("monoid is not commutative");
                }
                for c in 0..n {
                    if add[add[a][b]][c] != add[a][add[b][c]] {
                        return invalid("monoid is not associative");
                    }
                }
            }
        }
        let gs = GSet::from_table(g, act.clone(), None)?;
        for h in g.elements() {
            for a in 0..n {
                for b in 0..n {
                    if gs.act(h, add[a][b]) != add[gs.act(h, a)][gs.act(h, b)] {
                        return invalid("group does not act by automorphisms");
                    }
                }
            }
        }
        Ok(ActedMonoid { add, act, zero })
    }

    pub fn trivial(g: &FiniteGroup) -> Self {
        ActedMonoid::new(g, vec![vec![0]], vec![vec![0]; g.order()], 0).unwrap()
    }

    /// Z/n with g acting as multiplication by `mult[g]`.
    pub fn cyclic(g: &FiniteGroup, n: usize, mult: &[usize]) -> Result<Self> {
        let add = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let act = mult.iter().map(|&k| (0..n).map(|a| a * k % n).collect()).collect();
        ActedMonoid::new(g, add, act, 0)
    }

    /// {0, …, n-1} under max, with trivial action.
    pub fn max(g: &FiniteGroup, n: usize) -> Self {
        let add = (0..n).map(|a| (0..n).map(|b| a.max(b)).collect()).collect();
        ActedMonoid::new(g, add, vec![(0..n).collect(); g.order()], 0).unwrap()
    }

    pub fn product(&self, other: &ActedMonoid) -> ActedMonoid {
        let m = other.size();
        let n = self.size() * m;
        let add = (0..n)
            .map(|a| (0..n).map(|b| self.add[a / m][b / m] * m + other.add[a % m][b % m]).collect())
            .collect();
        let act = self
            .act
            .iter()
            .zip(&other.act)
            .map(|(r, q)| (0..n).map(|a| r[a / m] * m + q[a % m]).collect())
            .collect();
        ActedMonoid { add, act, zero: self.zero * m + other.zero }
    }

    pub fn size(&self) -> usize {
        self.add.len()
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a][b]
    }

    pub fn act(&self, g: usize, a: usize) -> usize {
        self.act[g][a]
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn is_group(&self) -> bool {
        (0..self.size()).all(|a| (0..self.size()).any(|b| self.add[a][b] == self.zero))
    }

    /// Equivariant monoid homomorphisms onto a quotient given by a class map.
    pub fn quotient(&self, g: &FiniteGroup, class_of: &[usize]) -> Result<ActedMonoid> {
        let k = class_of.iter().max().map_or(0, |&m| m + 1);
        let mut add = vec![vec![usize::MAX; k]; k];
        let mut act = vec![vec![usize::MAX; k]; g.order()];
        for a in 0..self.size() {
            for b in 0..self.size() {
                let cell = &mut add[class_of[a]][class_of[b]];
                let v = class_of[self.add[a][b]];
                if *cell != usize::MAX && *cell != v {
                    return invalid("class map is not a congruence");
                }
                *cell = v;
            }
            for h in g.elements() {
                let cell = &mut act[h][class_of[a]];
                let v = class_of[self.act[h][a]];
                if *cell != usize::MAX && *cell != v {
                    return invalid("class map is not equivariant");
                }
                *cell = v;
            }
        }
        ActedMonoid::new(g, add, act, class_of[self.zero])
    }
}

/// The closure of a set of signatures under the action, under grafting within
/// the arity bound, and with all unit signatures added.
pub fn close_support(space: &SigSpace, seeds: &[Signature]) -> BTreeSet<Signature> {
    let mut set: BTreeSet<Signature> = BTreeSet::new();
    let mut queue: Vec<Signature> = Vec::new();
    let add = |s: &Signature, set: &mut BTreeSet<Signature>, queue: &mut Vec<Signature>| {
        if !set.contains(s) {
            for m in space.locate(s).0.members.iter() {
                if set.insert(m.clone()) {
                    queue.push(m.clone());
                }
            }
        }
    };
    for s in (0..space.colors().size()).map(Signature::unit).chain(seeds.iter().cloned()) {
        add(&s, &mut set, &mut queue);
    }
    let mut done: Vec<Signature> = Vec::new();
    while let Some(s) = queue.pop() {
        done.push(s.clone());
        let mut found = Vec::new();
        for t in &done {
            for (a, b) in [(&s, t), (t, &s)] {
                if a.arity() + b.arity() > space.arity_bound() + 1 {
                    continue;
                }
                for i in 0..a.arity() {
                    if a.leaves()[i] == b.root() {
                        found.push(a.substitute(i + 1, b).unwrap());
                    }
                }
            }
        }
        for r in found {
            add(&r, &mut set, &mut queue);
        }
    }
    set
}

/// Operads with levels M × (Σₙ as linear orders, optional) on a support
/// closed under the action and grafting.
#[derive(Clone, Debug)]
pub struct MonoidOperadSpec {
    pub space: Arc<SigSpace>,
    pub support: BTreeSet<Signature>,
    pub monoid: ActedMonoid,
    pub with_orders: bool,
}

impl NaturalSeq for MonoidOperadSpec {
    type E = (usize, Vec<usize>);

    fn elements(&self, sig: &Signature) -> Vec<Self::E> {
        if !self.support.contains(sig) {
            return vec![];
        }
        let orders: Vec<Vec<usize>> = if self.with_orders {
            Permutation::all(sig.arity()).into_iter().map(|p| p.images().to_vec()).collect()
        } else {
            vec![vec![]]
        };
        (0..self.monoid.size()).flat_map(|m| orders.iter().map(move |w| (m, w.clone()))).collect()
    }

    fn act(&self, u: usize, sig: &Signature, (m, w): &Self::E) -> Self::E {
        let info = self.space.product(sig.arity()).product_info().unwrap();
        let (g, sigma) = info.split(u);
        let inv = sigma.inverse();
        (self.monoid.act(g, *m), w.iter().map(|&l| inv.apply(l)).collect())
    }
}

impl OperadSpec for MonoidOperadSpec {
    fn unit(&self, _: usize) -> Self::E {
        (self.monoid.zero(), if self.with_orders { vec![0] } else { vec![] })
    }

    fn compose(&self, _: &Signature, i: usize, inner: &Signature, (m1, w1): &Self::E, (m2, w2): &Self::E) -> Option<Self::E> {
        let m = inner.arity();
        let mut w = Vec::new();
        if self.with_orders {
            for &l in w1 {
                match l.cmp(&i) {
                    std::cmp::Ordering::Less => w.push(l),
                    std::cmp::Ordering::Equal => w.extend(w2.iter().map(|&k| k + i)),
                    std::cmp::Ordering::Greater => w.push(l + m - 1),
                }
            }
        }
        Some((self.monoid.add(*m1, *m2), w))
    }
}

/// A materialized operad together with the description it came from.
pub fn monoid_operad(spec: &MonoidOperadSpec) -> Result<TruncatedOperad> {
    let support: Vec<Signature> = spec.support.iter().cloned().collect();
    Ok(materialize(&spec.space, spec, Some(&support))?.0)
}

/// All levels singletons.
pub fn terminal_operad(space: &Arc<SigSpace>) -> Result<TruncatedOperad> {
    let spec = MonoidOperadSpec {
        space: space.clone(),
        support: all_signatures(space),
        monoid: ActedMonoid::trivial(space.group()),
        with_orders: false,
    };
    monoid_operad(&spec)
}

/// Level at every signature is the set of linear orders of its inputs.
pub fn associative_operad(space: &Arc<SigSpace>) -> Result<TruncatedOperad> {
    let spec = MonoidOperadSpec {
        space: space.clone(),
        support: all_signatures(space),
        monoid: ActedMonoid::trivial(space.group()),
        with_orders: true,
    };
    monoid_operad(&spec)
}

/// Only units.
pub fn initial_operad(space: &Arc<SigSpace>) -> Result<TruncatedOperad> {
    let spec = MonoidOperadSpec {
        space: space.clone(),
        support: (0..space.colors().size()).map(Signature::unit).collect(),
        monoid: ActedMonoid::trivial(space.group()),
        with_orders: false,
    };
    monoid_operad(&spec)
}

pub fn all_signatures(space: &SigSpace) -> BTreeSet<Signature> {
    space.all_orbit_reps().iter().flat_map(|r| space.locate(r).0.members.clone()).collect()
}

struct PullSpec<'a> {
    p: &'a TruncatedOperad,
    phi: &'a [usize],
}

impl NaturalSeq for PullSpec<'_> {
    type E = usize;

    fn elements(&self, sig: &Signature) -> Vec<usize> {
        (0..self.p.size_at(&sig.map_colors(self.phi))).collect()
    }

    fn act(&self, u: usize, sig: &Signature, e: &usize) -> usize {
        self.p.transport(u, &sig.map_colors(self.phi), *e)
    }
}

impl OperadSpec for PullSpec<'_> {
    fn unit(&self, c: usize) -> usize {
        self.p.unit(self.phi[c])
    }

    fn compose(&self, outer: &Signature, slot: usize, inner: &Signature, x: &usize, y: &usize) -> Option<usize> {
        self.p.compose(&outer.map_colors(self.phi), slot, &inner.map_colors(self.phi), *x, *y)
    }
}

fn check_color_change(src: &SigSpace, tgt: &SigSpace, phi: &[usize]) -> Result<()> {
    if src.group() != tgt.group() || !is_equivariant_map(src.group(), src.colors(), tgt.colors(), phi) {
        return invalid("color map is not G-equivariant");
    }
    if src.arity_bound() != tgt.arity_bound() {
        return Err(Error::BoundMismatch(format!("bounds {} and {}", src.arity_bound(), tgt.arity_bound())));
    }
    Ok(())
}

/// φ*P over the colors of `space`.
pub fn pullback_operad(space: &Arc<SigSpace>, phi: &[usize], p: &TruncatedOperad) -> Result<TruncatedOperad> {
    check_color_change(space, p.space(), phi)?;
    Ok(materialize(space, &PullSpec { p, phi }, None)?.0)
}

/// The canonical map φ*P → P.
pub fn pullback_projection(pulled: &TruncatedOperad, phi: &[usize]) -> OperadMap {
    let maps = pulled.levels.levels().iter().map(|(r, l)| (r.clone(), (0..l.size).collect())).collect();
    OperadMap { color_map: phi.to_vec(), levels: SymSeqMap { color_map: phi.to_vec(), maps } }
}

/// ψ*O with the map O → ψ*O over a section `s` of ψ.
pub fn pullback_section(space: &Arc<SigSpace>, psi: &[usize], o: &TruncatedOperad, s: &[usize]) -> Result<(TruncatedOperad, OperadMap)> {
    check_color_change(space, o.space(), psi)?;
    check_color_change(o.space(), space, s)?;
    if s.iter().enumerate().any(|(c, &d)| psi[d] != c) {
        return invalid("not a section of the color map");
    }
    let spec = PullSpec { p: o, phi: psi };
    let (pulled, catalog) = materialize(space, &spec, None)?;
    let maps = o
        .levels
        .levels()
        .iter()
        .map(|(r, l)| {
            let image = r.map_colors(s);
            (r.clone(), (0..l.size).map(|x| catalog.index(space, &spec, &image, &x).unwrap()).collect())
        })
        .collect();
    Ok((pulled, OperadMap { color_map: s.to_vec(), levels: SymSeqMap { color_map: s.to_vec(), maps } }))
}

struct CoprodSpec<'a> {
    left: &'a TruncatedOperad,
    right: &'a TruncatedOperad,
}

impl CoprodSpec<'_> {
    fn side(&self, sig: &Signature) -> Option<(&TruncatedOperad, Signature)> {
        let k = self.left.colors().size();
        if sig.raw().iter().all(|&c| c < k) {
            Some((self.left, sig.clone()))
        } else if sig.raw().iter().all(|&c| c >= k) {
            Some((self.right, Signature::from_raw(sig.raw().iter().map(|&c| c - k).collect())))
        } else {
            None
        }
    }
}

impl NaturalSeq for CoprodSpec<'_> {
    type E = usize;

    fn elements(&self, sig: &Signature) -> Vec<usize> {
        self.side(sig).map_or(vec![], |(o, s)| (0..o.size_at(&s)).collect())
    }

    fn act(&self, u: usize, sig: &Signature, e: &usize) -> usize {
        let (o, s) = self.side(sig).unwrap();
        o.transport(u, &s, *e)
    }
}

impl OperadSpec for CoprodSpec<'_> {
    fn unit(&self, c: usize) -> usize {
        let (o, s) = self.side(&Signature::unit(c)).unwrap();
        o.unit(s.root())
    }

    fn compose(&self, outer: &Signature, slot: usize, inner: &Signature, x: &usize, y: &usize) -> Option<usize> {
        let (o, s) = self.side(outer)?;
        let (_, t) = self.side(inner)?;
        o.compose(&s, slot, &t, *x, *y)
    }
}

/// O ⊔ P with its two inclusions.
pub fn coproduct_operad(o: &TruncatedOperad, p: &TruncatedOperad) -> Result<(TruncatedOperad, OperadMap, OperadMap)> {
    if o.group() != p.group() {
        return invalid("operads over different groups");
    }
    if o.arity_bound() != p.arity_bound() {
        return Err(Error::BoundMismatch(format!("bounds {} and {}", o.arity_bound(), p.arity_bound())));
    }
    let colors = o.colors().disjoint_union(p.colors());
    let space = SigSpace::new(o.group(), &colors, o.arity_bound())?;
    let spec = CoprodSpec { left: o, right: p };
    let k = o.colors().size();
    let mut support: Vec<Signature> = o.levels.support().cloned().collect();
    support.extend(p.levels.support().map(|r| r.map_colors(&(k..k + p.colors().size()).collect::<Vec<_>>())));
    let (sum, catalog) = materialize(&space, &spec, Some(&support))?;
    let inclusion = |q: &TruncatedOperad, phi: Vec<usize>| {
        let maps = q
            .levels
            .levels()
            .iter()
            .map(|(r, l)| {
                let image = r.map_colors(&phi);
                (r.clone(), (0..l.size).map(|x| catalog.index(&space, &spec, &image, &x).unwrap()).collect())
            })
            .collect();
        OperadMap { color_map: phi.clone(), levels: SymSeqMap { color_map: phi, maps } }
    };
    let left = inclusion(o, (0..k).collect());
    let right = inclusion(p, (k..k + p.colors().size()).collect());
    Ok((sum, left, right))
}

/// The map of monoid operads induced by an equivariant monoid homomorphism
/// over a color map carrying the source support into the target support.
pub fn monoid_operad_map(src: &MonoidOperadSpec, tgt: &MonoidOperadSpec, phi: &[usize], hom: &[usize]) -> Result<OperadMap> {
    if src.with_orders || tgt.with_orders {
        return Err(Error::Unsupported("maps between monoid operads with orders".into()));
    }
    check_color_change(&src.space, &tgt.space, phi)?;
    let mut maps = BTreeMap::new();
    for rep in src.support.iter().filter(|r| src.space.is_rep(r)) {
        let image = rep.map_colors(phi);
        if !tgt.support.contains(&image) {
            return invalid(format!("{:?} leaves the target support", image.to_wire()));
        }
        let (_, t) = tgt.space.locate(&image);
        let prod = tgt.space.product(image.arity());
        let back = prod.product_info().unwrap().project(prod.inv(t));
        maps.insert(rep.clone(), hom.iter().map(|&v| tgt.monoid.act(back, v)).collect());
    }
    Ok(OperadMap { color_map: phi.to_vec(), levels: SymSeqMap { color_map: phi.to_vec(), maps } })
}

struct InjSpec<'a> {
    o: &'a TruncatedOperad,
    back: Vec<Option<usize>>,
}

impl InjSpec<'_> {
    fn preimage(&self, sig: &Signature) -> Option<Signature> {
        sig.raw().iter().map(|&c| self.back[c]).collect::<Option<Vec<_>>>().map(Signature::from_raw)
    }
}

impl NaturalSeq for InjSpec<'_> {
    type E = usize;

    fn elements(&self, sig: &Signature) -> Vec<usize> {
        match self.preimage(sig) {
            Some(s) => (0..self.o.size_at(&s)).collect(),
            None if sig.arity() == 1 && sig.root() == sig.leaves()[0] => vec![0],
            None => vec![],
        }
    }

    fn act(&self, u: usize, sig: &Signature, e: &usize) -> usize {
        match self.preimage(sig) {
            Some(s) => self.o.transport(u, &s, *e),
            None => *e,
        }
    }
}

impl OperadSpec for InjSpec<'_> {
    fn unit(&self, c: usize) -> usize {
        self.back[c].map_or(0, |b| self.o.unit(b))
    }

    fn compose(&self, outer: &Signature, slot: usize, inner: &Signature, x: &usize, y: &usize) -> Option<usize> {
        match (self.preimage(outer), self.preimage(inner)) {
            (Some(s), Some(t)) => self.o.compose(&s, slot, &t, *x, *y),
            (None, _) => Some(*y),
            (_, None) => Some(*x),
        }
    }
}

/// φ̌_!O for an injective φ: extension by empty levels, plus units on new colors.
pub fn pushforward_operad_injective(phi: &[usize], o: &TruncatedOperad, target: &Arc<SigSpace>) -> Result<(TruncatedOperad, OperadMap)> {
    check_color_change(o.space(), target, phi)?;
    let mut back = vec![None; target.colors().size()];
    for (c, &d) in phi.iter().enumerate() {
        if back[d].is_some() {
            return Err(Error::Unsupported(
                "pushforward along a non-injective color map needs a coequalizer of free operads; only injective maps are supported".into(),
            ));
        }
        back[d] = Some(c);
    }
    let spec = InjSpec { o, back };
    let mut support: Vec<Signature> = o.levels.support().map(|r| r.map_colors(phi)).collect();
    support.extend((0..target.colors().size()).map(Signature::unit));
    let (p, catalog) = materialize(target, &spec, Some(&support))?;
    let maps = o
        .levels
        .levels()
        .iter()
        .map(|(r, l)| {
            let image = r.map_colors(phi);
            (r.clone(), (0..l.size).map(|x| catalog.index(target, &spec, &image, &x).unwrap()).collect())
        })
        .collect();
    let levels = SymSeqMap { color_map: phi.to_vec(), maps };
    Ok((p, OperadMap { color_map: phi.to_vec(), levels }))
}

struct FixSpec<'a> {
    o: &'a TruncatedOperad,
    fixed: Vec<usize>,
    h: Vec<usize>,
    trivial: Arc<SigSpace>,
}

impl FixSpec<'_> {
    fn lift(&self, sig: &Signature) -> Signature {
        sig.map_colors(&self.fixed)
    }

    fn lift_perm(&self, n: usize, u: usize) -> usize {
        let perm = self.trivial.product(n).product_info().unwrap().perm(u).clone();
        self.o.space().product(n).product_info().unwrap().join(self.o.group().identity(), &perm)
    }
}

impl NaturalSeq for FixSpec<'_> {
    type E = usize;

    fn elements(&self, sig: &Signature) -> Vec<usize> {
        let s = self.lift(sig);
        let n = s.arity();
        let info = self.o.space().product(n).product_info().unwrap();
        let id = Permutation::identity(n);
        (0..self.o.size_at(&s))
            .filter(|&x| self.h.iter().all(|&h| self.o.transport(info.join(h, &id), &s, x) == x))
            .collect()
    }

    fn act(&self, u: usize, sig: &Signature, e: &usize) -> usize {
        self.o.transport(self.lift_perm(sig.arity(), u), &self.lift(sig), *e)
    }
}

impl OperadSpec for FixSpec<'_> {
    fn unit(&self, c: usize) -> usize {
        self.o.unit(self.fixed[c])
    }

    fn compose(&self, outer: &Signature, slot: usize, inner: &Signature, x: &usize, y: &usize) -> Option<usize> {
        self.o.compose(&self.lift(outer), slot, &self.lift(inner), *x, *y)
    }
}

/// j*O^H over the trivial group, with colors the H-fixed colors of O.
pub fn fixed_operad(o: &TruncatedOperad, h: &Subgroup) -> Result<(TruncatedOperad, Vec<usize>)> {
    let g = o.group();
    if h.members().iter().any(|&x| x >= g.order()) || Subgroup::from_members(g, h.members()).is_err() {
        return invalid("not a subgroup of the operad's group");
    }
    let fixed = o.colors().fixed_points(h);
    let triv = FiniteGroup::trivial();
    let labels = fixed.iter().map(|&c| o.colors().label(c)).collect();
    let colors = GSet::trivial(&triv, fixed.len()).with_labels(labels)?;
    let space = SigSpace::new(&triv, &colors, o.arity_bound())?;
    let spec = FixSpec { o, fixed: fixed.clone(), h: h.members().to_vec(), trivial: space.clone() };
    Ok((materialize(&space, &spec, None)?.0, fixed))
}

/// The unary part of j*O^H as a category; objects are the H-fixed colors in order.
pub fn underlying_category(o: &TruncatedOperad, h: &Subgroup) -> Result<(FinCategory, UnderlyingIndex)> {
    let fixed = o.colors().fixed_points(h);
    let info = o.space().product(1).product_info().unwrap();
    let id = Permutation::identity(1);
    let mut arrows = Vec::new();
    let mut index: HashMap<(usize, usize, usize), usize> = HashMap::new();
    let mut elements = Vec::new();
    for (a, &ca) in fixed.iter().enumerate() {
        for (b, &cb) in fixed.iter().enumerate() {
            let sig = Signature::new(&[ca], cb);
            for x in 0..o.size_at(&sig) {
                if h.members().iter().all(|&g| o.transport(info.join(g, &id), &sig, x) == x) {
                    index.insert((a, b, x), arrows.len());
                    arrows.push((a, b));
                    elements.push(x);
                }
            }
        }
    }
    let identities = fixed.iter().enumerate().map(|(a, &c)| index[&(a, a, o.unit(c))]).collect();
    let cat = FinCategory::new(fixed.len(), arrows.clone(), identities, |g, f| {
        let (a, b) = arrows[f];
        let c = arrows[g].1;
        let (ca, cb, cc) = (fixed[a], fixed[b], fixed[c]);
        let z = o
            .compose(&Signature::new(&[cb], cc), 0, &Signature::new(&[ca], cb), elements[g], elements[f])
            .expect("unary compositions are within any bound");
        index[&(a, c, z)]
    })?;
    Ok((cat, UnderlyingIndex { fixed, elements, index }))
}

/// Bookkeeping between an underlying category and operad elements.
#[derive(Clone, Debug)]
pub struct UnderlyingIndex {
    pub fixed: Vec<usize>,
    pub elements: Vec<usize>,
    index: HashMap<(usize, usize, usize), usize>,
}

impl UnderlyingIndex {
    pub fn object_of(&self, color: usize) -> Option<usize> {
        self.fixed.iter().position(|&c| c == color)
    }

    pub fn arrow_of(&self, a: usize, b: usize, x: usize) -> Option<usize> {
        self.index.get(&(a, b, x)).copied()
    }
}

fn check_lambda(p: &TruncatedOperad, b: &Signature, c: &Signature, lambda: &Subgroup) -> Result<()> {
    let space = p.space();
    space.check(b)?;
    space.check(c)?;
    if b.arity() != c.arity() {
        return invalid("signatures of different arity");
    }
    let prod = space.product(b.arity());
    for (name, s) in [("B", b), ("C", c)] {
        if !stabilizes_unchecked(prod, space.colors(), lambda, s) {
            return invalid(format!("subgroup does not stabilize {name} = {}", s.display(space.colors())));
        }
    }
    Ok(())
}

/// x ↦ x ∘ (κ₁, …, κₙ) from P(C̄)^Λ to P(B̄)^Λ, with κᵢ ∈ P(bᵢ; cᵢ).
pub fn lambda_precompose(
    p: &TruncatedOperad,
    b: &Signature,
    c: &Signature,
    lambda: &Subgroup,
    kappa: &[usize],
) -> Result<BTreeMap<usize, usize>> {
    check_lambda(p, b, c, lambda)?;
    if b.root() != c.root() {
        return invalid("precomposition needs a common target color");
    }
    let n = b.arity();
    if kappa.len() != n {
        return invalid("one κ per input");
    }
    let ksig = |i: usize| Signature::new(&[b.leaves()[i]], c.leaves()[i]);
    for (i, &k) in kappa.iter().enumerate() {
        if k >= p.size_at(&ksig(i)) {
            return invalid(format!("κ{} is not an element of P{}", i + 1, ksig(i).display(p.colors())));
        }
    }
    let space = p.space();
    let info = space.product(n).product_info().unwrap();
    let info1 = space.product(1).product_info().unwrap();
    let id1 = Permutation::identity(1);
    for &u in lambda.members() {
        let (g, sigma) = info.split(u);
        for i in 0..n {
            let j = sigma.apply(i);
            let moved = p.transport(info1.join(g, &id1), &ksig(j), kappa[j]);
            if moved != kappa[i] {
                return invalid(format!("κ is not Λ-compatible at position {}", i + 1));
            }
        }
    }
    let inputs: Vec<(Signature, usize)> = (0..n).map(|i| (ksig(i), kappa[i])).collect();
    let mut out = BTreeMap::new();
    for x in p.levels.fixed_points_unchecked(c, lambda) {
        let (sig, z) = p
            .compose_unary_inputs(c, x, &inputs)
            .ok_or_else(|| Error::Bound("precomposition leaves the bounds".into()))?;
        debug_assert_eq!(&sig, b);
        if lambda.members().iter().any(|&u| p.transport(u, b, z) != z) {
            return invalid("precomposite is not Λ-fixed");
        }
        out.insert(x, z);
    }
    Ok(out)
}

/// x ↦ κ₀ ∘ x from P(C̄)^Λ to P(B̄)^Λ, with κ₀ ∈ P(c₀; b₀).
pub fn lambda_postcompose(
    p: &TruncatedOperad,
    b: &Signature,
    c: &Signature,
    lambda: &Subgroup,
    kappa0: usize,
) -> Result<BTreeMap<usize, usize>> {
    check_lambda(p, b, c, lambda)?;
    if b.leaves() != c.leaves() {
        return invalid("postcomposition needs common source colors");
    }
    let ksig = Signature::new(&[c.root()], b.root());
    if kappa0 >= p.size_at(&ksig) {
        return invalid("κ0 is not an element");
    }
    let space = p.space();
    let info = space.product(b.arity()).product_info().unwrap();
    let info1 = space.product(1).product_info().unwrap();
    for &u in lambda.members() {
        let g = info.project(u);
        if p.transport(info1.join(g, &Permutation::identity(1)), &ksig, kappa0) != kappa0 {
            return invalid("κ0 is not Λ-compatible");
        }
    }
    let mut out = BTreeMap::new();
    for x in p.levels.fixed_points_unchecked(c, lambda) {
        let z = p.compose(&ksig, 0, c, kappa0, x).ok_or_else(|| Error::Bound("postcomposition leaves the bounds".into()))?;
        if lambda.members().iter().any(|&u| p.transport(u, b, z) != z) {
            return invalid("postcomposite is not Λ-fixed");
        }
        out.insert(x, z);
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
