//! Finite equivariant symmetric sequences: presheaves on G⋉Σ_𝔠ᵒᵖ up to an
//! arity bound, stored one level per signature orbit.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::{Arc, OnceLock, RwLock};

const DENSE_LIMIT: usize = 1 << 21;

use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::fam::stabilizes_unchecked;
use crate::grp::{enumerate_subgroups_where, is_equivariant_map, product_sigma_op, FiniteGroup, GSet, Permutation, Subgroup};
use crate::tree::{act_unchecked, g_dot_corolla, Signature};

pub const DEFAULT_BUDGET: u128 = 1_000_000;

/// One orbit of G × Σₙᵒᵖ on n-ary signatures.
#[derive(Debug, PartialEq, Eq)]
pub struct OrbitData {
    pub rep: Signature,
    pub stab: Subgroup,
    pub members: Vec<Signature>,
}

/// Signatures over a colored G-set up to an arity bound, with cached orbit data.
#[derive(Debug)]
pub struct SigSpace {
    group: FiniteGroup,
    colors: GSet,
    arity_bound: usize,
    products: Vec<FiniteGroup>,
    /// Orbit data indexed by signature code when the space is small enough.
    dense: Vec<OnceLock<(Arc<OrbitData>, usize)>>,
    offsets: Vec<usize>,
    cache: RwLock<HashMap<Signature, (Arc<OrbitData>, usize)>>,
    reps: RwLock<HashMap<usize, Arc<Vec<Signature>>>>,
}

impl PartialEq for SigSpace {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group && self.colors == other.colors && self.arity_bound == other.arity_bound
    }
}

impl SigSpace {
    pub fn new(group: &FiniteGroup, colors: &GSet, arity_bound: usize) -> Result<Arc<Self>> {
        GSet::from_table(group, colors.table().to_vec(), None)?;
        let products = (0..=arity_bound).map(|n| product_sigma_op(group, n)).collect::<Result<_>>()?;
        let k = colors.size();
        let mut offsets = vec![0usize];
        for n in 0..=arity_bound {
            let size = k.checked_pow(n as u32 + 1).unwrap_or(usize::MAX);
            offsets.push(offsets[n].saturating_add(size));
        }
        let total = offsets[arity_bound + 1];
        let dense = if total <= DENSE_LIMIT { (0..total).map(|_| OnceLock::new()).collect() } else { Vec::new() };
        Ok(Arc::new(SigSpace {
            group: group.clone(),
            colors: colors.clone(),
            arity_bound,
            products,
            dense,
            offsets,
            cache: RwLock::new(HashMap::new()),
            reps: RwLock::new(HashMap::new()),
        }))
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn colors(&self) -> &GSet {
        &self.colors
    }

    pub fn arity_bound(&self) -> usize {
        self.arity_bound
    }

    pub fn product(&self, n: usize) -> &FiniteGroup {
        &self.products[n]
    }

    pub fn check(&self, sig: &Signature) -> Result<()> {
        if sig.arity() > self.arity_bound {
            return Err(Error::BoundMismatch(format!("arity {} above bound {}", sig.arity(), self.arity_bound)));
        }
        sig.check(&self.colors)
    }

    pub fn act(&self, u: usize, sig: &Signature) -> Signature {
        act_unchecked(self.products[sig.arity()].product_info().unwrap(), &self.colors, u, sig)
    }

    /// The orbit of `sig` and the transversal element t with t·rep = sig.
    pub fn locate(&self, sig: &Signature) -> (Arc<OrbitData>, usize) {
        let code = self.code(sig);
        if let Some(hit) = code.and_then(|c| self.dense[c].get()) {
            return hit.clone();
        }
        if code.is_none() {
            if let Some(hit) = self.cache.read().unwrap().get(sig) {
                return hit.clone();
            }
        }
        let n = sig.arity();
        let prod = &self.products[n];
        let rep = prod.elements().map(|u| self.act(u, sig)).min().unwrap();
        let mut t_of: BTreeMap<Signature, usize> = BTreeMap::new();
        let mut stab = Vec::new();
        for u in prod.elements() {
            let m = self.act(u, &rep);
            if m == rep {
                stab.push(u);
            }
            t_of.entry(m).or_insert(u);
        }
        let data = Arc::new(OrbitData {
            rep: rep.clone(),
            stab: Subgroup::from_members(prod, &stab).expect("stabilizers are subgroups"),
            members: t_of.keys().cloned().collect(),
        });
        if code.is_some() {
            for (m, t) in t_of {
                let c = self.code(&m).unwrap();
                let _ = self.dense[c].set((data.clone(), t));
            }
            return self.dense[code.unwrap()].get().unwrap().clone();
        }
        let mut cache = self.cache.write().unwrap();
        for (m, t) in t_of {
            cache.insert(m, (data.clone(), t));
        }
        cache.get(sig).unwrap().clone()
    }

    fn code(&self, sig: &Signature) -> Option<usize> {
        if self.dense.is_empty() {
            return None;
        }
        let k = self.colors.size();
        let mut c = 0;
        for &x in sig.raw().iter().rev() {
            c = c * k + x;
        }
        Some(self.offsets[sig.arity()] + c)
    }

    pub fn rep(&self, sig: &Signature) -> Signature {
        self.locate(sig).0.rep.clone()
    }

    pub fn is_rep(&self, sig: &Signature) -> bool {
        &self.locate(sig).0.rep == sig
    }

    /// All orbit representatives of arity `n`.
    pub fn orbit_reps(&self, n: usize) -> Arc<Vec<Signature>> {
        if let Some(r) = self.reps.read().unwrap().get(&n) {
            return r.clone();
        }
        let k = self.colors.size();
        let mut reps = BTreeSet::new();
        if k > 0 {
            let total = k.pow(n as u32 + 1);
            for code in 0..total {
                let cols: Vec<usize> = (0..=n).map(|j| code / k.pow(j as u32) % k).collect();
                let sig = Signature::from_raw(cols);
                reps.insert(self.locate(&sig).0.rep.clone());
            }
        }
        let out = Arc::new(reps.into_iter().collect::<Vec<_>>());
        self.reps.write().unwrap().insert(n, out.clone());
        out
    }

    pub fn all_orbit_reps(&self) -> Vec<Signature> {
        (0..=self.arity_bound).flat_map(|n| self.orbit_reps(n).as_ref().clone()).collect()
    }

    pub fn same_as(&self, other: &SigSpace) -> bool {
        std::ptr::eq(self, other) || self == other
    }
}

/// A level at an orbit representative: a finite set with a Stab(rep)-action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level {
    pub size: usize,
    /// `action[k]` is the permutation induced by the k-th stabilizer member.
    pub action: Vec<Vec<usize>>,
}

/// Natural descriptions of symmetric sequences; elements at every signature
/// together with the transports.
pub trait NaturalSeq {
    type E: Clone + Eq + Hash + Ord + Debug;
    fn elements(&self, sig: &Signature) -> Vec<Self::E>;
    /// Maps an element at `sig` to the corresponding element at `u·sig`.
    fn act(&self, u: usize, sig: &Signature, e: &Self::E) -> Self::E;
}

/// Natural element lists at each orbit representative, with reverse indices.
#[derive(Clone, Debug)]
pub struct Catalog<E: Clone + Eq + Hash> {
    elems: BTreeMap<Signature, Vec<E>>,
    index: HashMap<(Signature, E), usize>,
}

impl<E: Clone + Eq + Hash + Ord + Debug> Catalog<E> {
    pub fn at_rep(&self, rep: &Signature) -> &[E] {
        self.elems.get(rep).map_or(&[], |v| v.as_slice())
    }

    /// The natural element with index `x` at `sig`.
    pub fn natural<N: NaturalSeq<E = E> + ?Sized>(&self, space: &SigSpace, nat: &N, sig: &Signature, x: usize) -> E {
        let (orb, t) = space.locate(sig);
        nat.act(t, &orb.rep, &self.elems[&orb.rep][x])
    }

    /// The index of a natural element at `sig`.
    pub fn index<N: NaturalSeq<E = E> + ?Sized>(&self, space: &SigSpace, nat: &N, sig: &Signature, e: &E) -> Option<usize> {
        let (orb, t) = space.locate(sig);
        let prod = space.product(sig.arity());
        let back = nat.act(prod.inv(t), sig, e);
        self.index.get(&(orb.rep.clone(), back)).copied()
    }
}

/// An equivariant symmetric sequence with levels stored per orbit.
#[derive(Clone, Debug)]
pub struct EqSymSeq {
    space: Arc<SigSpace>,
    levels: BTreeMap<Signature, Level>,
}

impl PartialEq for EqSymSeq {
    fn eq(&self, other: &Self) -> bool {
        self.space.same_as(&other.space) && self.levels == other.levels
    }
}

impl EqSymSeq {
    pub fn empty(space: Arc<SigSpace>) -> Self {
        EqSymSeq { space, levels: BTreeMap::new() }
    }

    /// Builds from explicit levels keyed by orbit representatives, validating
    /// that each action is a homomorphism from the stabilizer.
    pub fn from_levels(space: Arc<SigSpace>, levels: BTreeMap<Signature, Level>) -> Result<Self> {
        for (rep, lvl) in &levels {
            space.check(rep)?;
            let (orb, _) = space.locate(rep);
            if &orb.rep != rep {
                return invalid(format!("{:?} is not an orbit representative", rep.to_wire()));
            }
            check_level(space.product(rep.arity()), &orb.stab, lvl)
                .map_err(|e| Error::Invalid(format!("level {:?}: {e}", rep.to_wire())))?;
        }
        let levels = levels.into_iter().filter(|(_, l)| l.size > 0).collect();
        Ok(EqSymSeq { space, levels })
    }

    /// Builds from a natural description on the orbits of `support`
    /// (all signatures when `None`).
    pub fn from_natural<N: NaturalSeq + ?Sized>(
        space: Arc<SigSpace>,
        nat: &N,
        support: Option<&[Signature]>,
    ) -> Result<(Self, Catalog<N::E>)> {
        let reps: BTreeSet<Signature> = match support {
            Some(s) => s.iter().map(|x| space.rep(x)).collect(),
            None => space.all_orbit_reps().into_iter().collect(),
        };
        let mut levels = BTreeMap::new();
        let mut elems = BTreeMap::new();
        let mut index = HashMap::new();
        for rep in reps {
            space.check(&rep)?;
            let list = nat.elements(&rep);
            if list.is_empty() {
                continue;
            }
            let local: HashMap<&N::E, usize> = list.iter().enumerate().map(|(i, e)| (e, i)).collect();
            if local.len() != list.len() {
                return invalid(format!("duplicate elements at {:?}", rep.to_wire()));
            }
            let (orb, _) = space.locate(&rep);
            let mut action = Vec::with_capacity(orb.stab.order());
            for &u in orb.stab.members() {
                let row = list
                    .iter()
                    .map(|e| {
                        local.get(&nat.act(u, &rep, e)).copied().ok_or_else(|| {
                            Error::Invalid(format!("transport leaves the level at {:?}", rep.to_wire()))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                action.push(row);
            }
            let lvl = Level { size: list.len(), action };
            check_level(space.product(rep.arity()), &orb.stab, &lvl)?;
            for (i, e) in list.iter().enumerate() {
                index.insert((rep.clone(), e.clone()), i);
            }
            levels.insert(rep.clone(), lvl);
            elems.insert(rep, list);
        }
        Ok((EqSymSeq { space, levels }, Catalog { elems, index }))
    }

    pub fn space(&self) -> &Arc<SigSpace> {
        &self.space
    }

    pub fn levels(&self) -> &BTreeMap<Signature, Level> {
        &self.levels
    }

    /// Orbit representatives with nonempty levels.
    pub fn support(&self) -> impl Iterator<Item = &Signature> {
        self.levels.keys()
    }

    /// Every signature with a nonempty level.
    pub fn support_members(&self) -> Vec<Signature> {
        self.levels.keys().flat_map(|r| self.space.locate(r).0.members.clone()).collect()
    }

    pub fn size_at(&self, sig: &Signature) -> usize {
        self.level_at(sig).map_or(0, |l| l.size)
    }

    fn level_at(&self, sig: &Signature) -> Option<&Level> {
        if sig.arity() > self.space.arity_bound() {
            return None;
        }
        let (orb, _) = self.space.locate(sig);
        self.levels.get(&orb.rep)
    }

    /// Transport of element `x` at `sig` along `u`, landing at `u·sig`.
    pub fn transport(&self, u: usize, sig: &Signature, x: usize) -> usize {
        let space = &self.space;
        let prod = space.product(sig.arity());
        let (orb, t) = space.locate(sig);
        let target = space.act(u, sig);
        let (_, t2) = space.locate(&target);
        let k = prod.mul(prod.mul(prod.inv(t2), u), t);
        let lvl = &self.levels[&orb.rep];
        lvl.action[orb.stab.position(k).expect("stabilizer element")][x]
    }

    /// X(C̄)^Λ for Λ stabilizing C̄.
    pub fn fixed_points(&self, sig: &Signature, lambda: &Subgroup) -> Result<Vec<usize>> {
        self.space.check(sig)?;
        let prod = self.space.product(sig.arity());
        if !stabilizes_unchecked(prod, self.space.colors(), lambda, sig) {
            return invalid(format!("subgroup does not stabilize {}", sig.display(self.space.colors())));
        }
        Ok(self.fixed_points_unchecked(sig, lambda))
    }

    pub(crate) fn fixed_points_unchecked(&self, sig: &Signature, lambda: &Subgroup) -> Vec<usize> {
        (0..self.size_at(sig))
            .filter(|&x| lambda.members().iter().all(|&u| self.transport(u, sig, x) == x))
            .collect()
    }

    pub fn total_size(&self) -> usize {
        self.levels.values().map(|l| l.size).sum()
    }

    /// Re-checks every level action.
    pub fn validate(&self) -> Result<()> {
        for (rep, lvl) in &self.levels {
            let (orb, _) = self.space.locate(rep);
            check_level(self.space.product(rep.arity()), &orb.stab, lvl)?;
        }
        Ok(())
    }
}

fn check_level(prod: &FiniteGroup, stab: &Subgroup, lvl: &Level) -> Result<()> {
    if lvl.action.len() != stab.order() {
        return invalid("action needs one row per stabilizer member");
    }
    for row in &lvl.action {
        if Permutation::from_images(row.clone()).map(|p| p.arity()) != Ok(lvl.size) {
            return invalid("action rows must be permutations of the level");
        }
    }
    let e = stab.position(prod.identity()).unwrap();
    if lvl.action[e].iter().enumerate().any(|(i, &x)| i != x) {
        return invalid("identity acts nontrivially");
    }
    for (a, &u) in stab.members().iter().enumerate() {
        for (b, &v) in stab.members().iter().enumerate() {
            let c = stab.position(prod.mul(u, v)).unwrap();
            if (0..lvl.size).any(|x| lvl.action[c][x] != lvl.action[a][lvl.action[b][x]]) {
                return invalid("level action is not a homomorphism");
            }
        }
    }
    Ok(())
}

/// A map X → φ*Y, stored on the orbit representatives of X.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymSeqMap {
    pub color_map: Vec<usize>,
    pub maps: BTreeMap<Signature, Vec<usize>>,
}

impl SymSeqMap {
    pub fn identity(x: &EqSymSeq) -> Self {
        SymSeqMap {
            color_map: (0..x.space.colors().size()).collect(),
            maps: x.levels.iter().map(|(r, l)| (r.clone(), (0..l.size).collect())).collect(),
        }
    }

    /// Value at element `x` of `src(sig)`, an element of `tgt(φ sig)`.
    pub fn apply(&self, src: &EqSymSeq, tgt: &EqSymSeq, sig: &Signature, x: usize) -> usize {
        let (orb, t) = src.space.locate(sig);
        let y = self.maps[&orb.rep][x];
        tgt.transport(t, &orb.rep.map_colors(&self.color_map), y)
    }

    pub fn is_valid(&self, src: &EqSymSeq, tgt: &EqSymSeq) -> Result<()> {
        let (ss, ts) = (&src.space, &tgt.space);
        if !is_equivariant_map(ss.group(), ss.colors(), ts.colors(), &self.color_map) || ss.group() != ts.group() {
            return invalid("color map is not G-equivariant");
        }
        if ss.arity_bound() > ts.arity_bound() {
            return Err(Error::BoundMismatch("source bound above target bound".into()));
        }
        for (rep, lvl) in &src.levels {
            let f = self.maps.get(rep).ok_or_else(|| Error::Invalid(format!("no map at {:?}", rep.to_wire())))?;
            let image = rep.map_colors(&self.color_map);
            let m = tgt.size_at(&image);
            if f.len() != lvl.size || f.iter().any(|&y| y >= m) {
                return invalid(format!("map at {:?} has the wrong shape", rep.to_wire()));
            }
            let (orb, _) = ss.locate(rep);
            for (k, &u) in orb.stab.members().iter().enumerate() {
                for x in 0..lvl.size {
                    if f[lvl.action[k][x]] != tgt.transport(u, &image, f[x]) {
                        return invalid(format!("map at {:?} is not equivariant", rep.to_wire()));
                    }
                }
            }
        }
        Ok(())
    }

    /// `g ∘ self`.
    pub fn then(&self, g: &SymSeqMap, _src: &EqSymSeq, mid: &EqSymSeq, tgt: &EqSymSeq) -> SymSeqMap {
        let color_map = self.color_map.iter().map(|&c| g.color_map[c]).collect();
        let maps = self
            .maps
            .iter()
            .map(|(rep, f)| {
                let image = rep.map_colors(&self.color_map);
                (rep.clone(), f.iter().map(|&y| g.apply(mid, tgt, &image, y)).collect())
            })
            .collect();
        SymSeqMap { color_map, maps }
    }

    pub fn is_levelwise_bijective(&self, _src: &EqSymSeq, tgt: &EqSymSeq) -> bool {
        let mut covered: BTreeSet<Signature> = BTreeSet::new();
        for (rep, f) in &self.maps {
            let image = rep.map_colors(&self.color_map);
            let m = tgt.size_at(&image);
            let set: BTreeSet<usize> = f.iter().copied().collect();
            if set.len() != f.len() || f.len() != m {
                return false;
            }
            covered.insert(tgt.space.rep(&image));
        }
        tgt.support().all(|r| covered.contains(r))
    }
}

/// X ⊔ Y over the same colors, with the elements of X first at every level.
pub fn coproduct_seq(x: &EqSymSeq, y: &EqSymSeq) -> Result<EqSymSeq> {
    if !x.space.same_as(&y.space) {
        return invalid("sequences over different signature spaces");
    }
    let mut levels = x.levels.clone();
    for (rep, b) in &y.levels {
        let merged = match levels.get(rep) {
            None => b.clone(),
            Some(a) => Level {
                size: a.size + b.size,
                action: a
                    .action
                    .iter()
                    .zip(&b.action)
                    .map(|(r, q)| r.iter().copied().chain(q.iter().map(|&e| e + a.size)).collect())
                    .collect(),
            },
        };
        levels.insert(rep.clone(), merged);
    }
    EqSymSeq::from_levels(x.space.clone(), levels)
}

/// The fold map X ⊔ X → X.
pub fn fold_map(x: &EqSymSeq) -> SymSeqMap {
    SymSeqMap {
        color_map: (0..x.space.colors().size()).collect(),
        maps: x.levels.iter().map(|(r, l)| (r.clone(), (0..l.size).chain(0..l.size).collect())).collect(),
    }
}

/// Per-orbit decomposition used by the enumerators.
struct OrbitChoices {
    rep: Signature,
    image: Signature,
    /// (element-orbit representative, candidate images)
    slots: Vec<(usize, Vec<usize>)>,
}

fn orbit_choices(x: &EqSymSeq, y: &EqSymSeq, phi: &[usize]) -> Vec<OrbitChoices> {
    let mut out = Vec::new();
    for (rep, lvl) in &x.levels {
        let (orb, _) = x.space.locate(rep);
        let image = rep.map_colors(phi);
        let m = y.size_at(&image);
        let mut seen = vec![false; lvl.size];
        let mut slots = Vec::new();
        for e in 0..lvl.size {
            if seen[e] {
                continue;
            }
            let mut stab_e = Vec::new();
            for (k, &u) in orb.stab.members().iter().enumerate() {
                seen[lvl.action[k][e]] = true;
                if lvl.action[k][e] == e {
                    stab_e.push(u);
                }
            }
            let cands = (0..m).filter(|&t| stab_e.iter().all(|&u| y.transport(u, &image, t) == t)).collect();
            slots.push((e, cands));
        }
        out.push(OrbitChoices { rep: rep.clone(), image, slots });
    }
    out
}

/// Number of equivariant maps X → φ*Y.
pub fn count_hom_maps_along(x: &EqSymSeq, y: &EqSymSeq, phi: &[usize]) -> u128 {
    orbit_choices(x, y, phi)
        .iter()
        .flat_map(|o| o.slots.iter())
        .map(|(_, c)| c.len() as u128)
        .fold(1u128, |a, b| a.saturating_mul(b))
}

pub fn hom_maps(x: &EqSymSeq, y: &EqSymSeq, budget: u128) -> Result<Vec<SymSeqMap>> {
    let id: Vec<usize> = (0..x.space.colors().size()).collect();
    hom_maps_along(x, y, &id, budget)
}

/// Every equivariant map X → φ*Y, in a deterministic order.
pub fn hom_maps_along(x: &EqSymSeq, y: &EqSymSeq, phi: &[usize], budget: u128) -> Result<Vec<SymSeqMap>> {
    if x.space.group() != y.space.group() {
        return invalid("sequences over different groups");
    }
    if !is_equivariant_map(x.space.group(), x.space.colors(), y.space.colors(), phi) {
        return invalid("color map is not G-equivariant");
    }
    let choices = orbit_choices(x, y, phi);
    let needed = count_hom_maps_along(x, y, phi);
    if needed > budget {
        return Err(Error::Budget { needed, budget });
    }
    let slots: Vec<(usize, usize, &Vec<usize>)> = choices
        .iter()
        .enumerate()
        .flat_map(|(o, oc)| oc.slots.iter().map(move |(e, c)| (o, *e, c)))
        .collect();
    if slots.iter().any(|(_, _, c)| c.is_empty()) {
        return Ok(vec![]);
    }
    let mut out = Vec::with_capacity(needed as usize);
    let mut pick = vec![0usize; slots.len()];
    loop {
        let mut maps = BTreeMap::new();
        for (o, oc) in choices.iter().enumerate() {
            let lvl = &x.levels[&oc.rep];
            let (orb, _) = x.space.locate(&oc.rep);
            let mut f = vec![usize::MAX; lvl.size];
            for (s, &(so, e, cands)) in slots.iter().enumerate() {
                if so != o {
                    continue;
                }
                let t = cands[pick[s]];
                for (k, &u) in orb.stab.members().iter().enumerate() {
                    f[lvl.action[k][e]] = y.transport(u, &oc.image, t);
                }
            }
            maps.insert(oc.rep.clone(), f);
        }
        out.push(SymSeqMap { color_map: phi.to_vec(), maps });
        let mut k = 0;
        loop {
            if k == slots.len() {
                return Ok(out);
            }
            pick[k] += 1;
            if pick[k] < slots[k].2.len() {
                break;
            }
            pick[k] = 0;
            k += 1;
        }
    }
}

/// Σ_𝔠[G·_𝔠 C̄], with elements the forest maps (ḡ, τ): D̄ → ḡC̄.
#[derive(Clone, Debug)]
pub struct Representable {
    pub seq: EqSymSeq,
    pub sig: Signature,
    /// Product-group elements u with u·C̄ = rep, one per level element.
    pub rep_elements: Vec<usize>,
}

impl Representable {
    pub fn rep(&self) -> Signature {
        self.seq.space.rep(&self.sig)
    }

    /// The element (G × Σₙᵒᵖ)-index corresponding to level element `x` at `sig`.
    pub fn element_at(&self, sig: &Signature, x: usize) -> usize {
        let (_, t) = self.seq.space.locate(sig);
        self.seq.space.product(sig.arity()).mul(t, self.rep_elements[x])
    }

    /// The index of the identity of C̄ in the level at C̄.
    pub fn universal(&self) -> usize {
        let space = &self.seq.space;
        let prod = space.product(self.sig.arity());
        let (_, t) = space.locate(&self.sig);
        let target = prod.inv(t);
        self.rep_elements.iter().position(|&u| u == target).unwrap()
    }
}

pub fn representable(space: &Arc<SigSpace>, sig: &Signature) -> Result<Representable> {
    space.check(sig)?;
    let n = sig.arity();
    let prod = space.product(n);
    let info = prod.product_info().unwrap();
    let (orb, _) = space.locate(sig);
    let rep = orb.rep.clone();
    let forest = g_dot_corolla(space.group(), space.colors(), sig);
    let mut rep_elements = Vec::new();
    for (gbar, comp) in forest.components().iter().enumerate() {
        if comp.root() != rep.root() {
            continue;
        }
        for tau in Permutation::all(n) {
            if (0..n).all(|j| comp.leaves()[tau.apply(j)] == rep.leaves()[j]) {
                rep_elements.push(info.join(gbar, &tau));
            }
        }
    }
    rep_elements.sort_unstable();
    let pos: HashMap<usize, usize> = rep_elements.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let action = orb
        .stab
        .members()
        .iter()
        .map(|&v| rep_elements.iter().map(|&u| pos[&prod.mul(v, u)]).collect())
        .collect();
    let mut levels = BTreeMap::new();
    levels.insert(rep, Level { size: rep_elements.len(), action });
    let seq = EqSymSeq::from_levels(space.clone(), levels)?;
    Ok(Representable { seq, sig: sig.clone(), rep_elements })
}

/// Σ_𝔠[G·C̄]/Λ with its class map.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub seq: EqSymSeq,
    pub class_of: Vec<usize>,
    pub lambda: Subgroup,
}

impl Quotient {
    pub fn universal(&self, r: &Representable) -> usize {
        self.class_of[r.universal()]
    }
}

/// Quotient of a representable by the right action of Λ ≤ Stab(C̄).
pub fn quotient(r: &Representable, lambda: &Subgroup) -> Result<Quotient> {
    let space = &r.seq.space;
    let n = r.sig.arity();
    let prod = space.product(n);
    if !stabilizes_unchecked(prod, space.colors(), lambda, &r.sig) {
        return invalid(format!("subgroup does not stabilize {}", r.sig.display(space.colors())));
    }
    let pos: HashMap<usize, usize> = r.rep_elements.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let mut class_of = vec![usize::MAX; r.rep_elements.len()];
    let mut classes = 0;
    for i in 0..r.rep_elements.len() {
        if class_of[i] == usize::MAX {
            for &l in lambda.members() {
                class_of[pos[&prod.mul(r.rep_elements[i], l)]] = classes;
            }
            classes += 1;
        }
    }
    let rep = r.rep();
    let (orb, _) = space.locate(&rep);
    let lvl = &r.seq.levels[&rep];
    let mut action = Vec::new();
    for k in 0..orb.stab.order() {
        let mut row = vec![usize::MAX; classes];
        for i in 0..lvl.size {
            row[class_of[i]] = class_of[lvl.action[k][i]];
        }
        action.push(row);
    }
    let mut levels = BTreeMap::new();
    levels.insert(rep, Level { size: classes, action });
    Ok(Quotient { seq: EqSymSeq::from_levels(space.clone(), levels)?, class_of, lambda: lambda.clone() })
}

pub fn fixed_points(x: &EqSymSeq, sig: &Signature, lambda: &Subgroup) -> Result<Vec<usize>> {
    x.fixed_points(sig, lambda)
}

/// φ*Y over the colors of `space`.
pub fn pullback(space: &Arc<SigSpace>, phi: &[usize], y: &EqSymSeq) -> Result<EqSymSeq> {
    check_color_map(space, y.space(), phi)?;
    let mut levels = BTreeMap::new();
    for rep in space.all_orbit_reps() {
        let image = rep.map_colors(phi);
        let size = y.size_at(&image);
        if size == 0 {
            continue;
        }
        let (orb, _) = space.locate(&rep);
        let action = orb
            .stab
            .members()
            .iter()
            .map(|&u| (0..size).map(|t| y.transport(u, &image, t)).collect())
            .collect();
        levels.insert(rep, Level { size, action });
    }
    EqSymSeq::from_levels(space.clone(), levels)
}

fn check_color_map(src: &SigSpace, tgt: &SigSpace, phi: &[usize]) -> Result<()> {
    if src.group() != tgt.group() {
        return invalid("color map between different groups");
    }
    if !is_equivariant_map(src.group(), src.colors(), tgt.colors(), phi) {
        return invalid("color map is not G-equivariant");
    }
    if src.arity_bound() != tgt.arity_bound() {
        return Err(Error::BoundMismatch(format!("bounds {} and {}", src.arity_bound(), tgt.arity_bound())));
    }
    Ok(())
}

/// Left Kan extension φ_!X, as classes of triples (R, w, x) with w·φR = D̄,
/// modulo (R, w, v·x) ~ (R, w·v, x) for v ∈ Stab(R).
#[derive(Clone, Debug)]
pub struct Pushforward {
    pub seq: EqSymSeq,
    /// For each target representative, a representative triple per class.
    pub classes: BTreeMap<Signature, Vec<(Signature, usize, usize)>>,
}

pub fn pushforward(phi: &[usize], x: &EqSymSeq, target: &Arc<SigSpace>) -> Result<Pushforward> {
    check_color_map(x.space(), target, phi)?;
    let mut by_target: BTreeMap<Signature, Vec<Signature>> = BTreeMap::new();
    for r in x.support() {
        by_target.entry(target.rep(&r.map_colors(phi))).or_default().push(r.clone());
    }
    let mut levels = BTreeMap::new();
    let mut classes = BTreeMap::new();
    for (d, sources) in by_target {
        let prod = target.product(d.arity());
        let mut triples: Vec<(Signature, usize, usize)> = Vec::new();
        for r in &sources {
            let image = r.map_colors(phi);
            for w in prod.elements() {
                if target.act(w, &image) == d {
                    for e in 0..x.size_at(r) {
                        triples.push((r.clone(), w, e));
                    }
                }
            }
        }
        let index: HashMap<(Signature, usize, usize), usize> =
            triples.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        let mut uf = UnionFind::new(triples.len());
        for (i, (r, w, e)) in triples.iter().enumerate() {
            let (orb, _) = x.space().locate(r);
            let lvl = &x.levels[r];
            for (k, &v) in orb.stab.members().iter().enumerate() {
                let j = index[&(r.clone(), prod.mul(*w, prod.inv(v)), lvl.action[k][*e])];
                uf.union(i, j);
            }
        }
        let mut class_ix: BTreeMap<usize, usize> = BTreeMap::new();
        let mut reps = Vec::new();
        let mut class_of = vec![0; triples.len()];
        for i in 0..triples.len() {
            let root = uf.find(i);
            let c = *class_ix.entry(root).or_insert_with(|| {
                reps.push(triples[i].clone());
                reps.len() - 1
            });
            class_of[i] = c;
        }
        let (orb, _) = target.locate(&d);
        let action = orb
            .stab
            .members()
            .iter()
            .map(|&u| {
                reps.iter()
                    .map(|(r, w, e)| class_of[index[&(r.clone(), prod.mul(u, *w), *e)]])
                    .collect()
            })
            .collect();
        levels.insert(d.clone(), Level { size: reps.len(), action });
        classes.insert(d, reps);
    }
    Ok(Pushforward { seq: EqSymSeq::from_levels(target.clone(), levels)?, classes })
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, i: usize) -> usize {
        let mut r = i;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut j = i;
        while self.parent[j] != r {
            let next = self.parent[j];
            self.parent[j] = r;
            j = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Whether two sequences over the same space are isomorphic.
pub fn isomorphic(x: &EqSymSeq, y: &EqSymSeq, budget: u128) -> Result<bool> {
    let sizes = |s: &EqSymSeq| s.levels.iter().map(|(r, l)| (r.clone(), l.size)).collect::<Vec<_>>();
    if sizes(x) != sizes(y) {
        return Ok(false);
    }
    Ok(hom_maps(x, y, budget)?.iter().any(|f| f.is_levelwise_bijective(x, y)))
}

/// A random sequence: each orbit kept with probability `density` gets a
/// disjoint union of one or two transitive stabilizer-sets.
pub fn random_seq<R: Rng + ?Sized>(space: &Arc<SigSpace>, rng: &mut R, density: f64) -> EqSymSeq {
    let mut levels = BTreeMap::new();
    for rep in space.all_orbit_reps() {
        if !rng.gen_bool(density) {
            continue;
        }
        let (orb, _) = space.locate(&rep);
        let prod = space.product(rep.arity());
        let subs: Vec<Subgroup> = enumerate_subgroups_where(prod, |s| s.is_subgroup_of(&orb.stab));
        let mut cosets: Vec<Vec<Vec<usize>>> = Vec::new();
        for _ in 0..rng.gen_range(1..=2) {
            let k = &subs[rng.gen_range(0..subs.len())];
            // left cosets u·K of K in Stab
            let mut cs: Vec<Vec<usize>> = Vec::new();
            for &u in orb.stab.members() {
                let mut c: Vec<usize> = k.members().iter().map(|&h| prod.mul(u, h)).collect();
                c.sort_unstable();
                if !cs.contains(&c) {
                    cs.push(c);
                }
            }
            cosets.push(cs);
        }
        let size: usize = cosets.iter().map(|c| c.len()).sum();
        let action = orb
            .stab
            .members()
            .iter()
            .map(|&v| {
                let mut row = Vec::with_capacity(size);
                let mut off = 0;
                for cs in &cosets {
                    for c in cs {
                        let moved = prod.mul(v, c[0]);
                        row.push(off + cs.iter().position(|d| d.contains(&moved)).unwrap());
                    }
                    off += cs.len();
                }
                row
            })
            .collect();
        levels.insert(rep, Level { size, action });
    }
    EqSymSeq::from_levels(space.clone(), levels).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::enumerate_subgroups;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_xoshiro::SplitMix64;

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
    fn rigid_corolla_is_a_singleton() {
        let g = FiniteGroup::trivial();
        let colors = GSet::trivial(&g, 3);
        let space = SigSpace::new(&g, &colors, 3).unwrap();
        let sig = Signature::new(&[0, 1], 2);
        let r = representable(&space, &sig).unwrap();
        assert_eq!(r.seq.size_at(&sig), 1);
        assert_eq!(r.seq.support().count(), 1);
        assert_eq!(r.seq.size_at(&Signature::new(&[1, 0], 2)), 1);
        assert_eq!(r.seq.size_at(&Signature::new(&[0, 0], 2)), 0);
    }

    #[test]
    fn single_color_binary_has_two_markers() {
        let g = FiniteGroup::trivial();
        let space = SigSpace::new(&g, &GSet::trivial(&g, 1), 2).unwrap();
        let r = representable(&space, &Signature::new(&[0, 0], 0)).unwrap();
        assert_eq!(r.seq.size_at(&Signature::new(&[0, 0], 0)), 2);
    }

    /// Groupoid hom-sets {u : u·C̄ = D̄} with left multiplication.
    fn groupoid_hom(space: &SigSpace, c: &Signature, d: &Signature) -> Vec<usize> {
        let prod = space.product(c.arity());
        prod.elements().filter(|&u| &space.act(u, c) == d).collect()
    }

    #[test]
    fn representable_matches_groupoid_hom_functor() {
        let (g, colors) = z4_example();
        let space = SigSpace::new(&g, &colors, 4).unwrap();
        let c = Signature::new(&[0, 5, 5, 2], 4);
        let r = representable(&space, &c).unwrap();
        for d in space.locate(&c).0.members.iter() {
            let hom = groupoid_hom(&space, &c, d);
            let mine: BTreeSet<usize> = (0..r.seq.size_at(d)).map(|x| r.element_at(d, x)).collect();
            assert_eq!(mine, hom.iter().copied().collect());
            let prod = space.product(4);
            for u in [1usize, 30, 57, 95] {
                let d2 = space.act(u, d);
                for x in 0..r.seq.size_at(d) {
                    assert_eq!(r.element_at(&d2, r.seq.transport(u, d, x)), prod.mul(u, r.element_at(d, x)));
                }
            }
        }
        assert_eq!(r.element_at(&c, r.universal()), space.product(4).identity());
    }

    #[test]
    fn trivial_quotient_is_identity() {
        let (g, colors) = z4_example();
        let space = SigSpace::new(&g, &colors, 2).unwrap();
        let r = representable(&space, &Signature::new(&[4, 4], 4)).unwrap();
        let q = quotient(&r, &Subgroup::trivial(space.product(2))).unwrap();
        assert_eq!(q.seq, r.seq);
    }

    #[test]
    fn swap_quotient_collapses_markers() {
        let g = FiniteGroup::trivial();
        let space = SigSpace::new(&g, &GSet::trivial(&g, 1), 2).unwrap();
        let sig = Signature::new(&[0, 0], 0);
        let r = representable(&space, &sig).unwrap();
        let q = quotient(&r, &Subgroup::whole(space.product(2))).unwrap();
        assert_eq!(q.seq.size_at(&sig), 1);
    }

    #[test]
    fn quotient_sizes_follow_burnside() {
        let (g, colors) = z4_example();
        let space = SigSpace::new(&g, &colors, 3).unwrap();
        for sig in [Signature::new(&[4, 4, 5], 4), Signature::new(&[0, 2, 4], 4), Signature::new(&[4, 4, 4], 5)] {
            let r = representable(&space, &sig).unwrap();
            let (orb, _) = space.locate(&sig);
            let prod = space.product(3);
            for l in enumerate_subgroups_where_stab(prod, &orb, &space, &sig) {
                let q = quotient(&r, &l).unwrap();
                let rep = r.rep();
                let size = r.seq.size_at(&rep);
                let fixed: usize = l
                    .members()
                    .iter()
                    .map(|&h| (0..size).filter(|&x| prod.mul(r.rep_elements[x], h) == r.rep_elements[x]).count())
                    .sum();
                assert_eq!(q.seq.size_at(&rep), fixed / l.order());
            }
        }
    }

    fn enumerate_subgroups_where_stab(prod: &FiniteGroup, _: &OrbitData, space: &SigSpace, sig: &Signature) -> Vec<Subgroup> {
        enumerate_subgroups(prod)
            .unwrap()
            .into_iter()
            .filter(|l| stabilizes_unchecked(prod, space.colors(), l, sig))
            .collect()
    }

    #[test]
    fn quotient_rejects_non_stabilizing() {
        let (g, colors) = z4_example();
        let space = SigSpace::new(&g, &colors, 1).unwrap();
        let r = representable(&space, &Signature::new(&[0], 0)).unwrap();
        assert!(quotient(&r, &Subgroup::whole(space.product(1))).is_err());
    }

    #[test]
    fn yoneda_and_fixed_point_adjunction() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let colors = GSet::from_table(&g, vec![vec![0, 1, 2], vec![1, 0, 2]], None).unwrap();
        let space = SigSpace::new(&g, &colors, 2).unwrap();
        let mut rng = SplitMix64::seed_from_u64(7);
        for _ in 0..20 {
            let y = random_seq(&space, &mut rng, 0.4);
            for sig in [Signature::new(&[2, 2], 2), Signature::new(&[0, 1], 2), Signature::new(&[0], 0)] {
                let r = representable(&space, &sig).unwrap();
                let maps = hom_maps(&r.seq, &y, DEFAULT_BUDGET).unwrap();
                assert_eq!(maps.len(), y.size_at(&sig));
                let prod = space.product(sig.arity());
                for l in enumerate_subgroups(prod).unwrap() {
                    if !stabilizes_unchecked(prod, space.colors(), &l, &sig) {
                        continue;
                    }
                    let q = quotient(&r, &l).unwrap();
                    let maps = hom_maps(&q.seq, &y, DEFAULT_BUDGET).unwrap();
                    let fixed = y.fixed_points(&sig, &l).unwrap();
                    let mut images: Vec<usize> =
                        maps.iter().map(|f| f.apply(&q.seq, &y, &sig, q.universal(&r))).collect();
                    images.sort_unstable();
                    assert_eq!(images, fixed);
                }
            }
        }
    }

    #[test]
    fn terminal_target_has_one_map() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let colors = GSet::regular(&g);
        let space = SigSpace::new(&g, &colors, 2).unwrap();
        let mut levels = BTreeMap::new();
        for rep in space.all_orbit_reps() {
            let (orb, _) = space.locate(&rep);
            levels.insert(rep, Level { size: 1, action: vec![vec![0]; orb.stab.order()] });
        }
        let term = EqSymSeq::from_levels(space.clone(), levels).unwrap();
        let mut rng = SplitMix64::seed_from_u64(3);
        let x = random_seq(&space, &mut rng, 0.5);
        assert_eq!(hom_maps(&x, &term, DEFAULT_BUDGET).unwrap().len(), 1);
    }

    #[test]
    fn budget_is_enforced() {
        let g = FiniteGroup::trivial();
        let space = SigSpace::new(&g, &GSet::trivial(&g, 1), 2).unwrap();
        let r = representable(&space, &Signature::new(&[0, 0], 0)).unwrap();
        let err = hom_maps(&r.seq, &r.seq, 1).unwrap_err();
        assert_eq!(err, Error::Budget { needed: 2, budget: 1 });
    }

    #[test]
    fn identity_change_of_colors() {
        let (g, colors) = z4_example();
        let space = SigSpace::new(&g, &colors, 2).unwrap();
        let mut rng = SplitMix64::seed_from_u64(11);
        let x = random_seq(&space, &mut rng, 0.3);
        let id: Vec<usize> = (0..6).collect();
        assert_eq!(pullback(&space, &id, &x).unwrap(), x);
        let p = pushforward(&id, &x, &space).unwrap();
        assert!(isomorphic(&p.seq, &x, DEFAULT_BUDGET).unwrap());
    }

    fn injective_setup() -> (FiniteGroup, Arc<SigSpace>, Arc<SigSpace>, Vec<usize>) {
        let g = FiniteGroup::cyclic(2).unwrap();
        let small = GSet::from_table(&g, vec![vec![0, 1], vec![1, 0]], None).unwrap();
        let big = small.disjoint_union(&GSet::trivial(&g, 1));
        let s = SigSpace::new(&g, &small, 2).unwrap();
        let b = SigSpace::new(&g, &big, 2).unwrap();
        (g, s, b, vec![0, 1])
    }

    #[test]
    fn injective_pushforward_extends_by_empty() {
        let (_, s, b, phi) = injective_setup();
        let mut rng = SplitMix64::seed_from_u64(5);
        for _ in 0..10 {
            let x = random_seq(&s, &mut rng, 0.5);
            let p = pushforward(&phi, &x, &b).unwrap();
            for rep in b.all_orbit_reps() {
                if rep.raw().contains(&2) {
                    assert_eq!(p.seq.size_at(&rep), 0);
                }
            }
            for rep in x.support() {
                assert_eq!(p.seq.size_at(&rep.map_colors(&phi)), x.size_at(rep));
            }
            let back = pullback(&s, &phi, &p.seq).unwrap();
            assert!(isomorphic(&back, &x, DEFAULT_BUDGET).unwrap());
        }
    }

    #[test]
    fn pushforward_of_representable_is_representable() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let src = GSet::regular(&g).disjoint_union(&GSet::trivial(&g, 1));
        let tgt = GSet::trivial(&g, 2);
        let phi = vec![0, 0, 1];
        let s = SigSpace::new(&g, &src, 2).unwrap();
        let t = SigSpace::new(&g, &tgt, 2).unwrap();
        for sig in [Signature::new(&[0, 1], 2), Signature::new(&[0, 0], 2), Signature::new(&[2], 0), Signature::new(&[], 1)] {
            let r = representable(&s, &sig).unwrap();
            let p = pushforward(&phi, &r.seq, &t).unwrap();
            let direct = representable(&t, &sig.map_colors(&phi)).unwrap();
            assert!(isomorphic(&p.seq, &direct.seq, DEFAULT_BUDGET).unwrap(), "{:?}", sig);
        }
    }

    #[test]
    fn pushforward_pullback_adjunction() {
        let g = FiniteGroup::cyclic(2).unwrap();
        let src = GSet::regular(&g).disjoint_union(&GSet::trivial(&g, 1));
        let tgt = GSet::trivial(&g, 1).disjoint_union(&GSet::trivial(&g, 1));
        let phi = vec![0, 0, 1];
        let s = SigSpace::new(&g, &src, 2).unwrap();
        let t = SigSpace::new(&g, &tgt, 2).unwrap();
        let mut rng = SplitMix64::seed_from_u64(19);
        let mut checked = 0;
        while checked < 12 {
            let x = random_seq(&s, &mut rng, 0.15);
            let y = random_seq(&t, &mut rng, 0.5);
            let px = pushforward(&phi, &x, &t).unwrap();
            if px.seq.total_size() + y.total_size() > 200 {
                continue;
            }
            let left = hom_maps(&px.seq, &y, DEFAULT_BUDGET).unwrap().len();
            let pulled = pullback(&s, &phi, &y).unwrap();
            let right = hom_maps(&x, &pulled, DEFAULT_BUDGET).unwrap().len();
            let along = hom_maps_along(&x, &y, &phi, DEFAULT_BUDGET).unwrap().len();
            assert_eq!(left, right);
            assert_eq!(right, along);
            checked += 1;
        }
    }

    #[test]
    fn non_equivariant_color_map_is_rejected() {
        let (_, s, b, _) = injective_setup();
        let x = EqSymSeq::empty(s.clone());
        assert!(pushforward(&[0, 0], &x, &b).is_err());
        assert!(pullback(&s, &[2, 0], &EqSymSeq::empty(b)).is_err());
    }

    #[test]
    fn fixed_points_basics() {
        let (g, colors) = z4_example();
        let space = SigSpace::new(&g, &colors, 2).unwrap();
        let sig = Signature::new(&[4, 4], 4);
        let r = representable(&space, &sig).unwrap();
        let prod = space.product(2);
        assert_eq!(r.seq.fixed_points(&sig, &Subgroup::trivial(prod)).unwrap().len(), r.seq.size_at(&sig));
        let (orb, _) = space.locate(&sig);
        assert!(r.seq.fixed_points(&sig, &orb.stab).unwrap().len() <= r.seq.size_at(&sig));
        assert!(r.seq.fixed_points(&Signature::new(&[0, 4], 4), &orb.stab).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn random_levels_satisfy_transport_laws(seed in 0u64..1000) {
            let g = FiniteGroup::cyclic(2).unwrap();
            let colors = GSet::regular(&g).disjoint_union(&GSet::trivial(&g, 1));
            let space = SigSpace::new(&g, &colors, 2).unwrap();
            let mut rng = SplitMix64::seed_from_u64(seed);
            let x = random_seq(&space, &mut rng, 0.4);
            x.validate().unwrap();
            for sig in x.support_members() {
                let prod = space.product(sig.arity());
                for u in prod.elements() {
                    for v in prod.elements() {
                        let vs = space.act(v, &sig);
                        for e in 0..x.size_at(&sig) {
                            prop_assert_eq!(x.transport(u, &vs, x.transport(v, &sig, e)), x.transport(prod.mul(u, v), &sig, e));
                        }
                    }
                    if u == prod.identity() {
                        for e in 0..x.size_at(&sig) {
                            prop_assert_eq!(x.transport(u, &sig, e), e);
                        }
                    }
                }
            }
        }
    }
}
