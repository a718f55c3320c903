//! (G,Σ)-families of subgroups of G × Σₙᵒᵖ up to an arity bound.

use std::collections::BTreeSet;

use crate::error::{invalid, Error, Result};
use crate::grp::{
    conjugacy_classes, conjugate, enumerate_subgroups_bounded, enumerate_subgroups_where, is_graph_subgroup,
    product_sigma_op, FiniteGroup, GSet, Subgroup, DEFAULT_SUBGROUP_BOUND,
};
use crate::tree::{act_unchecked, Signature};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GSigmaFamily {
    group: FiniteGroup,
    arity_bound: usize,
    products: Vec<FiniteGroup>,
    per_arity: Vec<Vec<Subgroup>>,
}

fn products(g: &FiniteGroup, n: usize) -> Result<Vec<FiniteGroup>> {
    (0..=n).map(|k| product_sigma_op(g, k)).collect()
}

fn sort_subgroups(v: &mut Vec<Subgroup>) {
    v.sort_by(|a, b| (a.order(), a.members()).cmp(&(b.order(), b.members())));
    v.dedup();
}

impl GSigmaFamily {
    pub fn all(g: &FiniteGroup, n: usize) -> Result<Self> {
        Self::all_bounded(g, n, DEFAULT_SUBGROUP_BOUND)
    }

    pub fn all_bounded(g: &FiniteGroup, n: usize, bound: usize) -> Result<Self> {
        let products = products(g, n)?;
        let per_arity = products.iter().map(|p| enumerate_subgroups_bounded(p, bound)).collect::<Result<_>>()?;
        Ok(GSigmaFamily { group: g.clone(), arity_bound: n, products, per_arity })
    }

    pub fn graph(g: &FiniteGroup, n: usize) -> Result<Self> {
        let products = products(g, n)?;
        let per_arity = products
            .iter()
            .map(|p| enumerate_subgroups_where(p, |s| is_graph_subgroup(p, s).unwrap().is_some()))
            .collect();
        Ok(GSigmaFamily { group: g.clone(), arity_bound: n, products, per_arity })
    }

    /// The smallest family containing the seeds, given as `(arity, subgroup)`.
    pub fn from_generators(g: &FiniteGroup, n: usize, seeds: &[(usize, Subgroup)]) -> Result<Self> {
        let products = products(g, n)?;
        let mut per_arity: Vec<Vec<Subgroup>> = products.iter().map(|p| vec![Subgroup::trivial(p)]).collect();
        for (k, seed) in seeds {
            if *k > n {
                return Err(Error::BoundMismatch(format!("seed at arity {k} above bound {n}")));
            }
            let p = &products[*k];
            let seed = Subgroup::from_members(p, seed.members())?;
            for s in enumerate_subgroups_where(p, |s| s.is_subgroup_of(&seed)) {
                for x in p.elements() {
                    per_arity[*k].push(conjugate(p, &s, x));
                }
            }
        }
        per_arity.iter_mut().for_each(sort_subgroups);
        Ok(GSigmaFamily { group: g.clone(), arity_bound: n, products, per_arity })
    }

    /// Builds a family from explicit member lists, checking closure.
    pub fn from_members(g: &FiniteGroup, n: usize, per_arity: Vec<Vec<Subgroup>>) -> Result<Self> {
        if per_arity.len() != n + 1 {
            return Err(Error::BoundMismatch(format!("expected {} arities, got {}", n + 1, per_arity.len())));
        }
        let products = products(g, n)?;
        let mut checked = Vec::with_capacity(n + 1);
        for (p, subs) in products.iter().zip(per_arity) {
            let mut v = subs.iter().map(|s| Subgroup::from_members(p, s.members())).collect::<Result<Vec<_>>>()?;
            sort_subgroups(&mut v);
            checked.push(v);
        }
        let fam = GSigmaFamily { group: g.clone(), arity_bound: n, products, per_arity: checked };
        fam.check_closure()?;
        Ok(fam)
    }

    /// Closure under subgroups and conjugation, and nonemptiness, at every arity.
    pub fn check_closure(&self) -> Result<()> {
        for (k, (p, subs)) in self.products.iter().zip(&self.per_arity).enumerate() {
            if subs.is_empty() {
                return invalid(format!("family is empty at arity {k}"));
            }
            let set: BTreeSet<&Subgroup> = subs.iter().collect();
            for s in subs {
                for x in p.elements() {
                    if !set.contains(&conjugate(p, s, x)) {
                        return invalid(format!("arity {k}: not closed under conjugation at {:?}", s.members()));
                    }
                }
                for t in enumerate_subgroups_where(p, |t| t.is_subgroup_of(s)) {
                    if !set.contains(&t) {
                        return invalid(format!("arity {k}: not closed under subgroups at {:?}", s.members()));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn arity_bound(&self) -> usize {
        self.arity_bound
    }

    pub fn product(&self, n: usize) -> &FiniteGroup {
        &self.products[n]
    }

    pub fn members(&self, n: usize) -> &[Subgroup] {
        &self.per_arity[n]
    }

    pub fn per_arity(&self) -> &[Vec<Subgroup>] {
        &self.per_arity
    }

    pub fn contains(&self, n: usize, s: &Subgroup) -> bool {
        n <= self.arity_bound && self.per_arity[n].contains(s)
    }

    /// F₁ read as subgroups of G (G × Σ₁ᵒᵖ has the same element indices as G).
    pub fn unary_subgroups(&self) -> &[Subgroup] {
        &self.per_arity[1.min(self.arity_bound)]
    }

    /// One representative per conjugacy class at arity `n`.
    pub fn class_representatives(&self, n: usize) -> Vec<Subgroup> {
        conjugacy_classes(&self.products[n], &self.per_arity[n])
            .into_iter()
            .map(|c| self.per_arity[n][c[0]].clone())
            .collect()
    }

    /// Every π_n(H) lies in F₁; otherwise the offending (n, H).
    pub fn has_enough_units(&self) -> (bool, Option<(usize, Subgroup)>) {
        if self.arity_bound == 0 {
            return (true, None);
        }
        let f1 = &self.per_arity[1];
        for (n, subs) in self.per_arity.iter().enumerate() {
            for h in subs {
                let proj = h.project(&self.products[n]).expect("product group");
                if !f1.contains(&proj) {
                    return (false, Some((n, h.clone())));
                }
            }
        }
        (true, None)
    }

    /// F_C̄ = {Λ ∈ F_n : Λ stabilizes C̄}.
    pub fn stabilizer_family(&self, colors: &GSet, sig: &Signature) -> Result<Vec<Subgroup>> {
        let n = sig.arity();
        if n > self.arity_bound {
            return Err(Error::BoundMismatch(format!("arity {n} above family bound {}", self.arity_bound)));
        }
        sig.check(colors)?;
        let p = &self.products[n];
        Ok(self.per_arity[n].iter().filter(|l| stabilizes_unchecked(p, colors, l, sig)).cloned().collect())
    }
}

pub fn family_all(g: &FiniteGroup, n: usize) -> Result<GSigmaFamily> {
    GSigmaFamily::all(g, n)
}

pub fn family_graph(g: &FiniteGroup, n: usize) -> Result<GSigmaFamily> {
    GSigmaFamily::graph(g, n)
}

pub fn family_from_generators(g: &FiniteGroup, n: usize, seeds: &[(usize, Subgroup)]) -> Result<GSigmaFamily> {
    GSigmaFamily::from_generators(g, n, seeds)
}

/// g𝔠_{σ(i)} = 𝔠_i for every (g,σ) ∈ Λ.
pub fn stabilizes(prod: &FiniteGroup, colors: &GSet, lambda: &Subgroup, sig: &Signature) -> Result<bool> {
    let info = prod.product_info().ok_or_else(|| Error::Invalid("not a product group".into()))?;
    if info.arity() != sig.arity() {
        return invalid(format!("arity mismatch: subgroup of arity {}, signature of arity {}", info.arity(), sig.arity()));
    }
    sig.check(colors)?;
    Ok(stabilizes_unchecked(prod, colors, lambda, sig))
}

pub(crate) fn stabilizes_unchecked(prod: &FiniteGroup, colors: &GSet, lambda: &Subgroup, sig: &Signature) -> bool {
    let info = prod.product_info().unwrap();
    lambda.members().iter().all(|&u| &act_unchecked(info, colors, u, sig) == sig)
}

/// All signatures stabilized by Λ: pick an H_i-fixed color on each orbit
/// representative of Λ acting on positions, then propagate.
pub fn enumerate_stabilized_signatures(prod: &FiniteGroup, colors: &GSet, lambda: &Subgroup) -> Vec<Signature> {
    let info = prod.product_info().expect("product group");
    let n = info.arity();
    let pos = |u: usize, i: usize| if i == 0 { 0 } else { 1 + info.perm(u).apply(i - 1) };
    let mut orbit_of = vec![usize::MAX; n + 1];
    let mut reps = Vec::new();
    for i in 0..=n {
        if orbit_of[i] == usize::MAX {
            for &u in lambda.members() {
                orbit_of[pos(u, i)] = reps.len();
            }
            reps.push(i);
        }
    }
    let base = info.base();
    let choices: Vec<Vec<usize>> = reps
        .iter()
        .map(|&i| {
            let h: Vec<usize> = lambda.members().iter().filter(|&&u| pos(u, i) == i).map(|&u| info.project(u)).collect();
            (0..colors.size()).filter(|&c| h.iter().all(|&g| colors.act(g, c) == c)).collect()
        })
        .collect();
    let mut out = Vec::new();
    if choices.iter().any(|c| c.is_empty()) {
        return out;
    }
    let mut pick = vec![0usize; reps.len()];
    loop {
        let mut cols = vec![usize::MAX; n + 1];
        for (o, &i) in reps.iter().enumerate() {
            cols[i] = choices[o][pick[o]];
            // c_{σ(i)} = g⁻¹ c_i
            for &u in lambda.members() {
                let (g, _) = info.split(u);
                cols[pos(u, i)] = colors.act(base.inv(g), cols[i]);
            }
        }
        let sig = Signature::from_raw(cols);
        debug_assert!(stabilizes_unchecked(prod, colors, lambda, &sig));
        out.push(sig);
        let mut k = 0;
        loop {
            if k == reps.len() {
                out.sort();
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
