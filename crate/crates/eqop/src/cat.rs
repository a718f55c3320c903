//! Finite categories and functors, π₀ for Set-enriched categories, and the
//! interval amalgamation.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::grp::Permutation;

/// A finite category with arrows indexed `0..arrow_count`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinCategory {
    objects: usize,
    arrows: Vec<(usize, usize)>,
    identities: Vec<usize>,
    /// `compose[g][f]` is `g ∘ f` when `tgt f = src g`.
    compose: Vec<Vec<Option<usize>>>,
}

impl FinCategory {
    /// Validates all category axioms. `compose(g, f)` is queried only for composable pairs.
    pub fn new(
        objects: usize,
        arrows: Vec<(usize, usize)>,
        identities: Vec<usize>,
        compose: impl Fn(usize, usize) -> usize,
    ) -> Result<Self> {
        if identities.len() != objects {
            return invalid("one identity per object");
        }
        if arrows.iter().any(|&(s, t)| s >= objects || t >= objects) {
            return invalid("arrow endpoint out of range");
        }
        for (o, &i) in identities.iter().enumerate() {
            if arrows.get(i) != Some(&(o, o)) {
                return invalid(format!("identity of object {o} is not an endomorphism of it"));
            }
        }
        let m = arrows.len();
        let mut table = vec![vec![None; m]; m];
        for g in 0..m {
            for f in 0..m {
                if arrows[f].1 == arrows[g].0 {
                    let h = compose(g, f);
                    if arrows.get(h) != Some(&(arrows[f].0, arrows[g].1)) {
                        return invalid(format!("composite of {g} and {f} has wrong endpoints"));
                    }
                    table[g][f] = Some(h);
                }
            }
        }
        let c = FinCategory { objects, arrows, identities, compose: table };
        c.check_axioms()?;
        Ok(c)
    }

    fn check_axioms(&self) -> Result<()> {
        for f in 0..self.arrows.len() {
            let (s, t) = self.arrows[f];
            if self.comp(f, self.identities[s]) != f || self.comp(self.identities[t], f) != f {
                return invalid(format!("unit law fails at arrow {f}"));
            }
        }
        for f in 0..self.arrows.len() {
            for g in self.out_of(self.arrows[f].1) {
                for h in self.out_of(self.arrows[g].1) {
                    if self.comp(h, self.comp(g, f)) != self.comp(self.comp(h, g), f) {
                        return invalid(format!("associativity fails at ({h},{g},{f})"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn discrete(objects: usize) -> Self {
        let arrows = (0..objects).map(|o| (o, o)).collect();
        FinCategory::new(objects, arrows, (0..objects).collect(), |g, _| g).unwrap()
    }

    pub fn object_count(&self) -> usize {
        self.objects
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn src(&self, f: usize) -> usize {
        self.arrows[f].0
    }

    pub fn tgt(&self, f: usize) -> usize {
        self.arrows[f].1
    }

    pub fn identity(&self, o: usize) -> usize {
        self.identities[o]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.identities[self.arrows[f].0] == f
    }

    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.compose[g][f]
    }

    fn comp(&self, g: usize, f: usize) -> usize {
        self.compose[g][f].expect("composable")
    }

    fn out_of(&self, o: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.arrows.len()).filter(move |&g| self.arrows[g].0 == o)
    }

    pub fn hom(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.arrows.len()).filter(|&f| self.arrows[f] == (a, b)).collect()
    }

    pub fn inverse(&self, f: usize) -> Option<usize> {
        let (s, t) = self.arrows[f];
        self.hom(t, s)
            .into_iter()
            .find(|&g| self.comp(g, f) == self.identities[s] && self.comp(f, g) == self.identities[t])
    }

    pub fn is_iso(&self, f: usize) -> bool {
        self.inverse(f).is_some()
    }

    pub fn isos_from(&self, a: usize) -> Vec<usize> {
        self.out_of(a).filter(|&f| self.is_iso(f)).collect()
    }

    pub fn isomorphic_objects(&self, a: usize, b: usize) -> bool {
        self.hom(a, b).into_iter().any(|f| self.is_iso(f))
    }

    /// Full subcategory on the given objects, renumbered in order.
    pub fn full_subcategory(&self, objs: &[usize]) -> Self {
        let pos: HashMap<usize, usize> = objs.iter().enumerate().map(|(i, &o)| (o, i)).collect();
        let keep: Vec<usize> = (0..self.arrows.len())
            .filter(|&f| pos.contains_key(&self.arrows[f].0) && pos.contains_key(&self.arrows[f].1))
            .collect();
        let new_ix: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let arrows = keep.iter().map(|&f| (pos[&self.arrows[f].0], pos[&self.arrows[f].1])).collect();
        let identities = objs.iter().map(|&o| new_ix[&self.identities[o]]).collect();
        FinCategory::new(objs.len(), arrows, identities, |g, f| new_ix[&self.comp(keep[g], keep[f])]).unwrap()
    }
}

pub fn point() -> FinCategory {
    FinCategory::discrete(1)
}

/// 𝟙: objects {0,1} and a single non-identity arrow 0 → 1.
pub fn walking_arrow() -> FinCategory {
    FinCategory::new(2, vec![(0, 0), (1, 1), (0, 1)], vec![0, 1], |g, f| if g == 2 { 2 } else if f == 2 { 2 } else { g })
        .unwrap()
}

/// 𝟙̃: objects {0,1}, every hom a singleton.
pub fn walking_iso() -> FinCategory {
    let arrows = vec![(0, 0), (1, 1), (0, 1), (1, 0)];
    let lookup = |s: usize, t: usize| match (s, t) {
        (0, 0) => 0,
        (1, 1) => 1,
        (0, 1) => 2,
        _ => 3,
    };
    let a = arrows.clone();
    FinCategory::new(2, arrows, vec![0, 1], move |g, f| lookup(a[f].0, a[g].1)).unwrap()
}

/// A functor together with its source and target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Functor {
    pub source: FinCategory,
    pub target: FinCategory,
    pub objects: Vec<usize>,
    pub arrows: Vec<usize>,
}

impl Functor {
    pub fn new(source: FinCategory, target: FinCategory, objects: Vec<usize>, arrows: Vec<usize>) -> Result<Self> {
        if objects.len() != source.object_count() || arrows.len() != source.arrow_count() {
            return invalid("functor maps have the wrong length");
        }
        if objects.iter().any(|&o| o >= target.object_count()) || arrows.iter().any(|&f| f >= target.arrow_count()) {
            return invalid("functor value out of range");
        }
        for f in 0..source.arrow_count() {
            let (s, t) = source.arrows[f];
            if target.arrows[arrows[f]] != (objects[s], objects[t]) {
                return invalid(format!("arrow {f} is sent to an arrow with wrong endpoints"));
            }
        }
        for o in 0..source.object_count() {
            if arrows[source.identity(o)] != target.identity(objects[o]) {
                return invalid(format!("identity of {o} is not preserved"));
            }
        }
        for g in 0..source.arrow_count() {
            for f in 0..source.arrow_count() {
                if let Some(h) = source.compose(g, f) {
                    if target.compose(arrows[g], arrows[f]) != Some(arrows[h]) {
                        return invalid(format!("composite of {g} and {f} is not preserved"));
                    }
                }
            }
        }
        Ok(Functor { source, target, objects, arrows })
    }

    pub fn identity(c: &FinCategory) -> Self {
        Functor {
            source: c.clone(),
            target: c.clone(),
            objects: (0..c.object_count()).collect(),
            arrows: (0..c.arrow_count()).collect(),
        }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Functor) -> Result<Functor> {
        if self.target != other.source {
            return invalid("functors are not composable");
        }
        Ok(Functor {
            source: self.source.clone(),
            target: other.target.clone(),
            objects: self.objects.iter().map(|&o| other.objects[o]).collect(),
            arrows: self.arrows.iter().map(|&f| other.arrows[f]).collect(),
        })
    }
}

pub fn essentially_surjective(f: &Functor) -> bool {
    (0..f.target.object_count()).all(|d| f.objects.iter().any(|&fc| f.target.isomorphic_objects(fc, d)))
}

pub fn fully_faithful(f: &Functor) -> bool {
    let (c, d) = (&f.source, &f.target);
    (0..c.object_count()).all(|a| {
        (0..c.object_count()).all(|b| {
            let mut img: Vec<usize> = c.hom(a, b).iter().map(|&x| f.arrows[x]).collect();
            img.sort_unstable();
            img.dedup();
            img.len() == c.hom(a, b).len() && img.len() == d.hom(f.objects[a], f.objects[b]).len()
        })
    })
}

pub fn is_equivalence(f: &Functor) -> bool {
    fully_faithful(f) && essentially_surjective(f)
}

/// Every iso F(c) ≅ d lifts to an iso out of c.
pub fn is_isofibration(f: &Functor) -> bool {
    (0..f.source.object_count()).all(|c| {
        f.target
            .isos_from(f.objects[c])
            .into_iter()
            .all(|j| f.source.isos_from(c).into_iter().any(|i| f.arrows[i] == j))
    })
}

pub fn surjective_on_objects(f: &Functor) -> bool {
    (0..f.target.object_count()).all(|d| f.objects.contains(&d))
}

/// π₀ of a Set-enriched category; Ho(Set)(1, X) ≅ X so this is the identity.
pub fn pi0_setenriched(c: &FinCategory) -> FinCategory {
    c.clone()
}

pub fn pi0_functor(f: &Functor) -> Functor {
    Functor {
        source: pi0_setenriched(&f.source),
        target: pi0_setenriched(&f.target),
        objects: f.objects.clone(),
        arrows: f.arrows.clone(),
    }
}

pub fn equivalent_objects(c: &FinCategory, a: usize, b: usize) -> bool {
    pi0_setenriched(c).isomorphic_objects(a, b)
}

pub fn virtually_equivalent(c: &FinCategory, a: usize, b: usize) -> bool {
    equivalent_objects(c, a, b)
}

pub fn homotopy_equivalent(c: &FinCategory, a: usize, b: usize) -> bool {
    equivalent_objects(c, a, b)
}

/// Searches for an isomorphism of categories.
pub fn isomorphism(c: &FinCategory, d: &FinCategory) -> Option<Functor> {
    if c.object_count() != d.object_count() || c.arrow_count() != d.arrow_count() {
        return None;
    }
    for objs in Permutation::all(c.object_count()) {
        let objs = objs.images().to_vec();
        let hom_sizes_match = (0..c.object_count()).all(|a| {
            (0..c.object_count()).all(|b| c.hom(a, b).len() == d.hom(objs[a], objs[b]).len())
        });
        if !hom_sizes_match {
            continue;
        }
        let mut arrows = vec![usize::MAX; c.arrow_count()];
        if assign_arrows(c, d, &objs, &mut arrows, 0) {
            return Some(Functor { source: c.clone(), target: d.clone(), objects: objs, arrows });
        }
    }
    None
}

fn assign_arrows(c: &FinCategory, d: &FinCategory, objs: &[usize], arrows: &mut [usize], f: usize) -> bool {
    if f == c.arrow_count() {
        return Functor::new(c.clone(), d.clone(), objs.to_vec(), arrows.to_vec()).is_ok();
    }
    let (s, t) = c.arrows[f];
    for cand in d.hom(objs[s], objs[t]) {
        if arrows[..f].contains(&cand) {
            continue;
        }
        if c.is_identity(f) != d.is_identity(cand) {
            continue;
        }
        arrows[f] = cand;
        let consistent = (0..=f).all(|g| {
            (0..=f).all(|h| match c.compose(g, h) {
                Some(k) if k <= f => d.compose(arrows[g], arrows[h]) == Some(arrows[k]),
                _ => true,
            })
        });
        if consistent && assign_arrows(c, d, objs, arrows, f + 1) {
            return true;
        }
    }
    arrows[f] = usize::MAX;
    false
}

pub fn is_isomorphic_categories(c: &FinCategory, d: &FinCategory) -> bool {
    isomorphism(c, d).is_some()
}

pub fn is_interval(c: &FinCategory) -> bool {
    c.object_count() == 2 && is_isomorphic_categories(c, &walking_iso())
}

/// A generator of the amalgamated category: (which input, arrow of that input).
type Gen = (usize, usize);

/// 𝕀 ⋆ 𝕁: the pushout over the middle object, restricted to the outer objects.
pub fn amalgamate_intervals(i: &FinCategory, j: &FinCategory) -> Result<FinCategory> {
    for (name, c) in [("first", i), ("second", j)] {
        if !is_interval(c) {
            return Err(Error::Invalid(format!("{name} input is not isomorphic to the walking isomorphism")));
        }
    }
    let inputs = [i, j];
    let embed = |which: usize, o: usize| which + o;
    let endpoints = |(w, f): Gen| (embed(w, inputs[w].src(f)), embed(w, inputs[w].tgt(f)));
    let gens: Vec<Gen> = (0..2)
        .flat_map(|w| (0..inputs[w].arrow_count()).filter(move |&f| !inputs[w].is_identity(f)).map(move |f| (w, f)))
        .collect();

    // Words are in diagrammatic order; reduce adjacent arrows from the same input.
    let reduce = |word: Vec<Gen>| -> Vec<Gen> {
        assert!(word.len() <= 4, "word rewriting exceeded length 4");
        let mut out: Vec<Gen> = Vec::new();
        for g in word {
            match out.last() {
                Some(&(w, f)) if w == g.0 => {
                    out.pop();
                    let h = inputs[w].compose(g.1, f).expect("adjacent arrows are composable");
                    if !inputs[w].is_identity(h) {
                        out.push((w, h));
                    }
                }
                _ => out.push(g),
            }
        }
        out
    };

    // Enumerate reduced words of length ≤ 2 between the three objects.
    let mut identity_of = [0usize; 3];
    let mut list: Vec<(Vec<Gen>, (usize, usize))> = (0..3).map(|o| (vec![], (o, o))).collect();
    let mut frontier: Vec<(Vec<Gen>, (usize, usize))> = Vec::new();
    for &g in &gens {
        frontier.push((vec![g], endpoints(g)));
    }
    while let Some((w, ends)) = frontier.pop() {
        let w = reduce(w);
        if w.is_empty() || list.iter().any(|(x, e)| x == &w && *e == ends) {
            continue;
        }
        list.push((w.clone(), ends));
        for &g in &gens {
            if endpoints(g).0 == ends.1 {
                let mut next = w.clone();
                next.push(g);
                frontier.push((next, (ends.0, endpoints(g).1)));
            }
        }
    }
    list.sort();
    for (k, (w, ends)) in list.iter().enumerate() {
        if w.is_empty() {
            identity_of[ends.0] = k;
        }
    }
    let index: HashMap<(Vec<Gen>, (usize, usize)), usize> =
        list.iter().cloned().enumerate().map(|(k, x)| (x, k)).collect();
    let arrows: Vec<(usize, usize)> = list.iter().map(|(_, e)| *e).collect();
    let k = FinCategory::new(3, arrows, identity_of.to_vec(), |g, f| {
        let mut w = list[f].0.clone();
        w.extend(list[g].0.iter().copied());
        let w = reduce(w);
        index[&(w, (list[f].1 .0, list[g].1 .1))]
    })?;
    Ok(k.full_subcategory(&[0, 2]))
}
