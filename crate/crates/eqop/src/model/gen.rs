//! Seeded random operads and operad maps, built so that validity holds by construction.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{attach_colors, attach_interval, Arrow};
use crate::error::Result;
use crate::grp::{enumerate_subgroups, equivariant_maps, FiniteGroup, GSet, Subgroup};
use crate::oper::{
    close_support, initial_operad, monoid_operad, monoid_operad_map, operad_maps, pullback_operad, pullback_projection,
    pushforward_operad_injective, terminal_operad, ActedMonoid, MonoidOperadSpec, OperadMap, TruncatedOperad,
};
use crate::sym::{SigSpace, SymSeqMap};
use crate::tree::Signature;

/// A random G-set: a union of orbits G/H with at most `max` points.
pub fn random_colors<R: Rng + ?Sized>(rng: &mut R, g: &FiniteGroup, max: usize) -> GSet {
    let subs = enumerate_subgroups(g).expect("small group");
    let mut colors: Option<GSet> = None;
    let target = rng.gen_range(1..=max.max(1));
    for _ in 0..8 {
        let size = colors.as_ref().map_or(0, |c| c.size());
        if size >= target {
            break;
        }
        let fits: Vec<&Subgroup> = subs.iter().filter(|h| size + g.order() / h.order() <= max).collect();
        let Some(h) = fits.choose(rng) else { break };
        let orbit = GSet::cosets(g, h);
        colors = Some(match colors {
            None => orbit,
            Some(c) => c.disjoint_union(&orbit),
        });
    }
    let colors = colors.unwrap_or_else(|| GSet::trivial(g, 1));
    let labels = (0..colors.size()).map(|c| format!("c{c}")).collect();
    colors.with_labels(labels).unwrap()
}

/// x ↦ −x on elements outside the squares, a homomorphism to {±1} for abelian G.
fn sign_action(g: &FiniteGroup, n: usize) -> Vec<usize> {
    let squares: BTreeSet<usize> = g.elements().map(|x| g.mul(x, x)).collect();
    g.elements().map(|h| if squares.contains(&h) { 1 } else { n - 1 }).collect()
}

pub fn random_monoid<R: Rng + ?Sized>(rng: &mut R, g: &FiniteGroup) -> ActedMonoid {
    let sign = if g.is_abelian() { sign_action(g, 3) } else { vec![1; g.order()] };
    match rng.gen_range(0..6) {
        0 => ActedMonoid::trivial(g),
        1 => ActedMonoid::cyclic(g, 2, &vec![1; g.order()]).unwrap(),
        2 => ActedMonoid::cyclic(g, 3, &sign).unwrap(),
        3 => ActedMonoid::max(g, 2),
        4 => ActedMonoid::max(g, 3),
        _ => ActedMonoid::cyclic(g, 2, &vec![1; g.order()]).unwrap().product(&ActedMonoid::max(g, 2)),
    }
}

/// A group monoid, so that every unary element is invertible.
pub fn random_group_monoid<R: Rng + ?Sized>(rng: &mut R, g: &FiniteGroup) -> ActedMonoid {
    let sign = if g.is_abelian() { sign_action(g, 3) } else { vec![1; g.order()] };
    match rng.gen_range(0..3) {
        0 => ActedMonoid::trivial(g),
        1 => ActedMonoid::cyclic(g, 2, &vec![1; g.order()]).unwrap(),
        _ => ActedMonoid::cyclic(g, 3, &sign).unwrap(),
    }
}

fn random_signature<R: Rng + ?Sized>(rng: &mut R, k: usize, n_max: usize) -> Signature {
    let n = match rng.gen_range(0..20) {
        0..=2 => 0,
        3..=12 => 1,
        13..=17 => 2,
        _ => 3,
    }
    .min(n_max);
    let leaves: Vec<usize> = (0..n).map(|_| rng.gen_range(0..k)).collect();
    Signature::new(&leaves, rng.gen_range(0..k))
}

/// Seeds for a support; `connect` adds unary signatures both ways between consecutive colors.
pub fn random_seeds<R: Rng + ?Sized>(rng: &mut R, space: &SigSpace, connect: bool) -> Vec<Signature> {
    let k = space.colors().size();
    let n_max = space.arity_bound();
    let mut seeds: Vec<Signature> = (0..rng.gen_range(0..=3)).map(|_| random_signature(rng, k, n_max)).collect();
    if connect {
        for c in 1..k {
            seeds.push(Signature::new(&[c - 1], c));
            seeds.push(Signature::new(&[c], c - 1));
        }
    }
    seeds
}

/// A monoid operad with its description.
#[derive(Clone, Debug)]
pub struct Built {
    pub spec: MonoidOperadSpec,
    pub operad: TruncatedOperad,
}

pub fn build(space: &Arc<SigSpace>, seeds: &[Signature], monoid: ActedMonoid) -> Result<Built> {
    let spec = MonoidOperadSpec { space: space.clone(), support: close_support(space, seeds), monoid, with_orders: false };
    let operad = monoid_operad(&spec)?;
    Ok(Built { spec, operad })
}

pub fn random_operad<R: Rng + ?Sized>(rng: &mut R, space: &Arc<SigSpace>) -> Result<Built> {
    let connect = rng.gen_bool(0.5);
    let seeds = random_seeds(rng, space, connect);
    let monoid = if connect && rng.gen_bool(0.7) { random_group_monoid(rng, space.group()) } else { random_monoid(rng, space.group()) };
    build(space, &seeds, monoid)
}

/// The unique map to the terminal operad on the same colors.
pub fn to_terminal(o: &TruncatedOperad) -> Result<Arrow> {
    let t = terminal_operad(o.space())?;
    let id: Vec<usize> = (0..o.colors().size()).collect();
    let maps: BTreeMap<Signature, Vec<usize>> = o.levels().levels().iter().map(|(r, l)| (r.clone(), vec![0; l.size])).collect();
    let map = OperadMap { color_map: id.clone(), levels: SymSeqMap { color_map: id, maps } };
    Ok(Arrow { src: o.clone(), tgt: t, map })
}

/// The unique map from the initial operad on the same colors.
pub fn from_initial(o: &TruncatedOperad) -> Result<Arrow> {
    let i = initial_operad(o.space())?;
    let id: Vec<usize> = (0..o.colors().size()).collect();
    let maps = i.levels().levels().keys().map(|r| (r.clone(), vec![o.unit(r.root())])).collect();
    let map = OperadMap { color_map: id.clone(), levels: SymSeqMap { color_map: id, maps } };
    Ok(Arrow { src: i, tgt: o.clone(), map })
}

/// The full suboperad on a G-stable set of colors, as a pullback projection.
pub fn restrict_colors(p: &TruncatedOperad, keep: &[usize]) -> Result<Arrow> {
    let g = p.group();
    let mut keep = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    let colors = p.colors();
    let action = g
        .elements()
        .map(|x| keep.iter().map(|&c| keep.binary_search(&colors.act(x, c)).map_err(|_| crate::Error::Invalid("colors are not G-stable".into()))).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let labels = keep.iter().map(|&c| colors.label(c)).collect();
    let sub = GSet::from_table(g, action, Some(labels))?;
    let space = SigSpace::new(g, &sub, p.arity_bound())?;
    let src = pullback_operad(&space, &keep, p)?;
    let map = pullback_projection(&src, &keep);
    Ok(Arrow { src, tgt: p.clone(), map })
}

fn random_fixed_color<R: Rng + ?Sized>(rng: &mut R, o: &TruncatedOperad) -> Option<(Subgroup, usize)> {
    let g = o.group();
    let subs = enumerate_subgroups(g).ok()?;
    let h = subs.choose(rng)?.clone();
    let fixed = o.colors().fixed_points(&h);
    let a = *fixed.choose(rng)?;
    Some((h, a))
}

/// Maps into `p.operad`: identity, pullback projections (including onto a
/// sub-G-set of colors), sub-support inclusions, monoid quotients and maps from the initial operad.
pub fn random_arrow_into<R: Rng + ?Sized>(rng: &mut R, p: &Built, max_colors: usize) -> Result<Arrow> {
    let space = &p.spec.space;
    let g = space.group();
    let n = space.arity_bound();
    Ok(match rng.gen_range(0..6) {
        0 => Arrow::identity(&p.operad),
        1 => {
            let colors = random_colors(rng, g, max_colors);
            let maps = equivariant_maps(g, &colors, space.colors());
            match maps.choose(rng) {
                Some(phi) => {
                    let src_space = SigSpace::new(g, &colors, n)?;
                    let src = pullback_operad(&src_space, phi, &p.operad)?;
                    let map = pullback_projection(&src, phi);
                    Arrow { src, tgt: p.operad.clone(), map }
                }
                None => Arrow::identity(&p.operad),
            }
        }
        2 => {
            let orbit = space.colors().orbits().choose(rng).unwrap().clone();
            restrict_colors(&p.operad, &orbit)?
        }
        3 => {
            let reps: Vec<Signature> = p.spec.support.iter().filter(|s| space.is_rep(s)).cloned().collect();
            let seeds: Vec<Signature> = reps.into_iter().filter(|_| rng.gen_bool(0.5)).collect();
            let sub = build(space, &seeds, p.spec.monoid.clone())?;
            let id: Vec<usize> = (0..space.colors().size()).collect();
            let hom: Vec<usize> = (0..p.spec.monoid.size()).collect();
            let map = monoid_operad_map(&sub.spec, &p.spec, &id, &hom)?;
            Arrow { src: sub.operad, tgt: p.operad.clone(), map }
        }
        4 => {
            let extra = random_monoid(rng, g);
            let big = build(space, &p.spec.support.iter().cloned().collect::<Vec<_>>(), p.spec.monoid.product(&extra))?;
            let m = extra.size();
            let hom: Vec<usize> = (0..big.spec.monoid.size()).map(|x| x / m).collect();
            let id: Vec<usize> = (0..space.colors().size()).collect();
            let map = monoid_operad_map(&big.spec, &p.spec, &id, &hom)?;
            Arrow { src: big.operad, tgt: p.operad.clone(), map }
        }
        _ => from_initial(&p.operad)?,
    })
}

/// Maps out of `o`: identity, attachments, collapse to the terminal operad,
/// extension by new colors, and a searched map into another operad on the same colors.
pub fn random_arrow_from<R: Rng + ?Sized>(rng: &mut R, o: &TruncatedOperad, budget: u128) -> Result<Arrow> {
    let g = o.group();
    Ok(match rng.gen_range(0..6) {
        0 => Arrow::identity(o),
        1 => match random_fixed_color(rng, o) {
            Some((h, a)) => attach_interval(o, &h, a)?.total,
            None => Arrow::identity(o),
        },
        2 => {
            let subs = enumerate_subgroups(g)?;
            attach_colors(o, subs.choose(rng).unwrap())?
        }
        3 => to_terminal(o)?,
        4 => {
            let extra = random_colors(rng, g, 2);
            let colors = o.colors().disjoint_union(&extra);
            let space = SigSpace::new(g, &colors, o.arity_bound())?;
            let phi: Vec<usize> = (0..o.colors().size()).collect();
            let (tgt, map) = pushforward_operad_injective(&phi, o, &space)?;
            Arrow { src: o.clone(), tgt, map }
        }
        _ => {
            let other = random_operad(rng, o.space())?;
            let id: Vec<usize> = (0..o.colors().size()).collect();
            let maps = match operad_maps(o, &other.operad, &id, budget) {
                Ok(m) => m,
                Err(_) => vec![],
            };
            match maps.choose(rng) {
                Some(m) => Arrow { src: o.clone(), tgt: other.operad.clone(), map: m.clone() },
                None => to_terminal(o)?,
            }
        }
    })
}

/// A random operad on random colors over `g`.
pub fn random_built<R: Rng + ?Sized>(rng: &mut R, g: &FiniteGroup, arity_bound: usize, max_colors: usize) -> Result<Built> {
    let colors = random_colors(rng, g, max_colors);
    let space = SigSpace::new(g, &colors, arity_bound)?;
    random_operad(rng, &space)
}

/// A random operad map, either into or out of a random operad.
pub fn random_arrow<R: Rng + ?Sized>(rng: &mut R, g: &FiniteGroup, arity_bound: usize, max_colors: usize, budget: u128) -> Result<Arrow> {
    let p = random_built(rng, g, arity_bound, max_colors)?;
    if rng.gen_bool(0.5) {
        random_arrow_into(rng, &p, max_colors)
    } else {
        random_arrow_from(rng, &p.operad, budget)
    }
}

/// F: O → P and G: P → Q.
pub fn random_composable_pair<R: Rng + ?Sized>(
    rng: &mut R,
    g: &FiniteGroup,
    arity_bound: usize,
    max_colors: usize,
    budget: u128,
) -> Result<(Arrow, Arrow)> {
    let p = random_built(rng, g, arity_bound, max_colors)?;
    let f = random_arrow_into(rng, &p, max_colors)?;
    let second = random_arrow_from(rng, &p.operad, budget)?;
    Ok((f, second))
}

/// F: O → P with colors of P outside the image isomorphic to image colors
/// through G-compatible isomorphisms, and some G: P → Q.
pub fn hard_case_pair<R: Rng + ?Sized>(
    rng: &mut R,
    g: &FiniteGroup,
    arity_bound: usize,
    max_colors: usize,
    budget: u128,
) -> Result<(Arrow, Arrow)> {
    let colors = random_colors(rng, g, max_colors.max(2));
    let space = SigSpace::new(g, &colors, arity_bound)?;
    let mut seeds = random_seeds(rng, &space, true);
    seeds.retain(|s| s.arity() <= 1 || rng.gen_bool(0.5));
    let p = build(&space, &seeds, random_group_monoid(rng, g))?;
    let f = if colors.orbits().len() > 1 && rng.gen_bool(0.7) {
        let orbit = colors.orbits().choose(rng).unwrap().clone();
        restrict_colors(&p.operad, &orbit)?
    } else {
        let (h, a) = random_fixed_color(rng, &p.operad).unwrap_or((Subgroup::trivial(g), 0));
        attach_interval(&p.operad, &h, a)?.total
    };
    let second = random_arrow_from(rng, &f.tgt, budget)?;
    Ok((f, second))
}
