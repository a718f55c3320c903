use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use super::*;
use crate::fixtures::{quartic_lambda, quartic_lambda_operad, sign_colors};
use crate::grp::{enumerate_subgroups, equivariant_maps, factorial, fixed_points_gset, product_sigma_op};
use crate::sym::{count_hom_maps_along, hom_maps_along, quotient, random_seq, representable, Level};

const BUDGET: u128 = 1_000_000;

fn one_color(n: usize) -> Arc<SigSpace> {
    let g = FiniteGroup::trivial();
    SigSpace::new(&g, &GSet::trivial(&g, 1), n).unwrap()
}

fn sign_space(n: usize) -> Arc<SigSpace> {
    let (g, colors) = sign_colors();
    SigSpace::new(&g, &colors, n).unwrap()
}

fn binary(n: usize) -> Signature {
    Signature::new(&vec![0; n], 0)
}

/// One binary operation, fixed by the transposition.
fn commutative_generator(space: &Arc<SigSpace>) -> EqSymSeq {
    let r = representable(space, &binary(2)).unwrap();
    let whole = Subgroup::whole(space.product(2));
    quotient(&r, &whole).unwrap().seq
}

fn random_monoid(g: &FiniteGroup, rng: &mut SplitMix64) -> ActedMonoid {
    let squares: BTreeSet<usize> = g.elements().map(|x| g.mul(x, x)).collect();
    let neg: Vec<usize> = g.elements().map(|h| if squares.contains(&h) { 1 } else { 2 }).collect();
    match rng.gen_range(0..4) {
        0 => ActedMonoid::cyclic(g, 2, &vec![1; g.order()]).unwrap(),
        1 => ActedMonoid::cyclic(g, 3, &neg).unwrap(),
        2 => ActedMonoid::max(g, 3),
        _ => ActedMonoid::trivial(g),
    }
}

fn random_operad(space: &Arc<SigSpace>, rng: &mut SplitMix64) -> TruncatedOperad {
    let reps = space.all_orbit_reps();
    let seeds: Vec<Signature> = reps.iter().filter(|_| rng.gen_bool(0.3)).cloned().collect();
    let spec = MonoidOperadSpec {
        space: space.clone(),
        support: close_support(space, &seeds),
        monoid: random_monoid(space.group(), rng),
        with_orders: rng.gen_bool(0.5),
    };
    monoid_operad(&spec).unwrap()
}

#[test]
fn terminal_operad_is_valid() {
    let space = sign_space(3);
    let t = terminal_operad(&space).unwrap();
    assert!(t.validate().is_valid());
    assert!(all_signatures(&space).iter().all(|s| t.size_at(s) == 1));
}

#[test]
fn associative_operad_has_orders() {
    let space = one_color(3);
    let a = associative_operad(&space).unwrap();
    let report = a.validate();
    assert!(report.is_valid(), "{:?}", report.violations);
    assert!(report.checks > 0);
    for n in 0..=3 {
        assert_eq!(a.size_at(&binary(n)), factorial(n));
    }
    assert!(associative_operad(&sign_space(3)).unwrap().validate().is_valid());
}

#[test]
fn corrupted_entry_is_reported() {
    let space = one_color(3);
    let mut a = associative_operad(&space).unwrap();
    let s = binary(2);
    let good = a.compose(&s, 0, &s, 0, 0).unwrap();
    let bad = (good + 1) % a.size_at(&binary(3));
    a.set_composition_entry(&s, 0, &s, 0, 0, Some(bad)).unwrap();
    let report = a.validate();
    assert!(!report.is_valid());
    assert!(report.violations.iter().any(|v| v.detail.contains("[0, 0, 0] ∘1 [0, 0, 0] at (0,0)")));
}

#[test]
fn missing_unit_entry_breaks_unit_law() {
    let space = one_color(2);
    let mut t = terminal_operad(&space).unwrap();
    t.set_composition_entry(&binary(2), 1, &Signature::unit(0), 0, 0, None).unwrap();
    let report = t.validate();
    assert!(report.violations.iter().any(|v| v.law == "right-unit"));
}

#[test]
fn free_on_empty_has_only_units() {
    let space = sign_space(3);
    let fx = free_operad(&EqSymSeq::empty(space.clone()), 2).unwrap();
    let total: usize = all_signatures(&space).iter().map(|s| fx.operad.size_at(s)).sum();
    assert_eq!(total, space.colors().size());
    for s in fx.operad.levels().support() {
        assert_eq!(s.arity(), 1);
        assert_eq!(s.root(), s.leaves()[0]);
    }
}

/// Ways to pick the two leaves that meet first.
fn unordered_pairs(n: usize) -> usize {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).count()
}

#[test]
fn free_commutative_binary_counts() {
    let space = one_color(3);
    let x = commutative_generator(&space);
    assert_eq!(x.total_size(), 1);
    let fx = free_operad(&x, 2).unwrap();
    assert!(fx.operad.validate().is_valid());
    assert_eq!(fx.operad.size_at(&binary(3)), unordered_pairs(3));
    assert_eq!(fx.operad.size_at(&binary(2)), 1);
    assert_eq!(fx.operad.size_at(&binary(1)), 1);
    assert_eq!(fx.operad.size_at(&binary(0)), 0);
}

fn catalan(n: usize) -> usize {
    (0..n).map(|k| catalan(k) * catalan(n - 1 - k)).sum::<usize>().max(1)
}

#[test]
fn free_noncommutative_binary_counts() {
    let space = one_color(4);
    let x = representable(&space, &binary(2)).unwrap().seq;
    assert_eq!(x.total_size(), 2);
    let fx = free_operad(&x, 3).unwrap();
    for n in 1..=4 {
        assert_eq!(fx.operad.size_at(&binary(n)), catalan(n - 1) * factorial(n), "arity {n}");
    }
}

#[test]
fn edge_tree_grafts_as_identity() {
    let space = one_color(3);
    let fx = free_operad(&commutative_generator(&space), 2).unwrap();
    let s = binary(2);
    let e = fx.inclusion.maps[&s][0];
    let u = fx.operad.unit(0);
    assert_eq!(fx.tree(&Signature::unit(0), u), DTree::Leaf { label: 0, color: 0 });
    for i in 0..2 {
        assert_eq!(fx.operad.compose(&s, i, &Signature::unit(0), e, u), Some(e));
    }
    assert_eq!(fx.operad.compose(&Signature::unit(0), 0, &s, u, e), Some(e));
}

#[test]
fn free_graft_beyond_vertex_bound_is_partial() {
    let space = one_color(4);
    let fx = free_operad(&commutative_generator(&space), 1).unwrap();
    let s = binary(2);
    assert_eq!(fx.operad.size_at(&binary(3)), 0);
    assert!(fx.operad.compose(&s, 0, &s, 0, 0).is_none());
    assert!(matches!(fx.operad.try_compose(&s, 0, &s, 0, 0), Err(Error::Bound(_))));
}

#[test]
fn maps_out_of_a_truncated_free_operad_with_empty_composites() {
    let space = one_color(3);
    let fx = free_operad(&commutative_generator(&space), 1).unwrap();
    let t = terminal_operad(&space).unwrap();
    assert_eq!(operad_maps(&fx.operad, &t, &[0], BUDGET).unwrap().len(), 1);
}

#[test]
fn free_operads_on_random_sequences_validate() {
    let mut rng = SplitMix64::seed_from_u64(11);
    for _ in 0..4 {
        let space = sign_space(2);
        let x = random_seq(&space, &mut rng, 0.3);
        let fx = free_operad(&x, 2).unwrap();
        let report = fx.operad.validate();
        assert!(report.is_valid(), "{:?}", report.violations);
        fx.inclusion.is_valid(&x, fx.operad.levels()).unwrap();
    }
}

fn check_adjunction(x: &EqSymSeq, o: &TruncatedOperad, k: usize) -> usize {
    let fx = free_operad(x, k).unwrap();
    let g = o.group();
    let mut total = 0;
    for phi in equivariant_maps(g, x.space().colors(), o.colors()) {
        let homs = hom_maps_along(x, o.levels(), &phi, BUDGET).unwrap();
        assert_eq!(homs.len() as u128, count_hom_maps_along(x, o.levels(), &phi));
        let maps: BTreeSet<OperadMap> = operad_maps(&fx.operad, o, &phi, BUDGET).unwrap().into_iter().collect();
        assert_eq!(homs.len(), maps.len(), "color map {phi:?}");
        let mut seen = BTreeSet::new();
        for f in &homs {
            let t = adjunction_transpose(&fx, f, o).unwrap();
            t.is_valid(&fx.operad, o).unwrap();
            assert!(maps.contains(&t));
            let restricted = fx.inclusion.then(&t.levels, x, fx.operad.levels(), o.levels());
            assert_eq!(&restricted, f);
            seen.insert(t);
        }
        assert_eq!(seen.len(), homs.len());
        total += maps.len();
    }
    total
}

#[test]
fn transpose_into_terminal_is_unique() {
    let space = sign_space(2);
    let mut rng = SplitMix64::seed_from_u64(3);
    let x = random_seq(&space, &mut rng, 0.4);
    let t = terminal_operad(&space).unwrap();
    let n = check_adjunction(&x, &t, 2);
    assert_eq!(n, equivariant_maps(space.group(), space.colors(), space.colors()).len());
}

#[test]
fn adjunction_counts_agree_on_samples() {
    let mut rng = SplitMix64::seed_from_u64(5);
    let mut nontrivial = 0;
    let mut samples = 0;
    while samples < 8 {
        let space = sign_space(2);
        let x = random_seq(&space, &mut rng, 0.25);
        let o = random_operad(&space, &mut rng);
        let small = equivariant_maps(space.group(), space.colors(), space.colors())
            .iter()
            .all(|phi| count_hom_maps_along(&x, o.levels(), phi) <= 2_000);
        if !small {
            continue;
        }
        samples += 1;
        if check_adjunction(&x, &o, 2) > 1 {
            nontrivial += 1;
        }
    }
    assert!(nontrivial > 0);
}

fn map_vertices(t: &DTree, f: &dyn Fn(&Signature, usize) -> Option<usize>) -> Option<DTree> {
    match t {
        DTree::Leaf { .. } => Some(t.clone()),
        DTree::Node { sig, x, children } => Some(DTree::Node {
            sig: sig.clone(),
            x: f(sig, *x)?,
            children: children.iter().map(|c| map_vertices(c, f)).collect::<Option<_>>()?,
        }),
    }
}

#[test]
fn free_monad_laws_within_bounds() {
    let space = one_color(2);
    let mut levels = BTreeMap::new();
    levels.insert(binary(1), Level { size: 1, action: vec![vec![0]] });
    levels.insert(binary(2), Level { size: 1, action: vec![vec![0], vec![0]] });
    let x = EqSymSeq::from_levels(space.clone(), levels).unwrap();
    let fx = free_operad(&x, 2).unwrap();
    let ffx = free_operad(fx.operad.levels(), 2).unwrap();
    let fffx = free_operad(ffx.operad.levels(), 2).unwrap();
    let id = [0usize];
    let mu = |t: &DTree, sig: &Signature| evaluate_tree(t, sig, &fx.operad, &id, &|_, e| Some(e));
    let mu_f = |t: &DTree, sig: &Signature| evaluate_tree(t, sig, &ffx.operad, &id, &|_, e| Some(e));

    let eta_x = free_map(&fx.inclusion, &fx, &ffx).unwrap();
    for (rep, lvl) in fx.operad.levels().levels() {
        for a in 0..lvl.size {
            let corolla = ffx.index(rep, &DTree::corolla(rep, a)).unwrap();
            assert_eq!(mu(&ffx.tree(rep, corolla), rep), Some(a));
            let fa = eta_x.apply(&fx.operad, &ffx.operad, rep, a);
            assert_eq!(mu(&ffx.tree(rep, fa), rep), Some(a));
        }
    }

    let mut compared = 0;
    for (rep, lvl) in fffx.operad.levels().levels() {
        for e in 0..lvl.size {
            let t = fffx.tree(rep, e);
            let left = map_vertices(&t, &|s, y| mu(&ffx.tree(s, y), s)).and_then(|u| mu(&u, rep));
            let right = mu_f(&t, rep).and_then(|y| mu(&ffx.tree(rep, y), rep));
            if let (Some(l), Some(r)) = (left, right) {
                assert_eq!(l, r);
                compared += 1;
            }
        }
    }
    assert!(compared > 10);
}

#[test]
fn pullback_along_identity_is_identity() {
    let mut rng = SplitMix64::seed_from_u64(8);
    let space = sign_space(3);
    let o = random_operad(&space, &mut rng);
    let id: Vec<usize> = (0..space.colors().size()).collect();
    let p = pullback_operad(&space, &id, &o).unwrap();
    let proj = pullback_projection(&p, &id);
    proj.is_valid(&p, &o).unwrap();
    assert!(proj.levels.is_levelwise_bijective(p.levels(), o.levels()));
    assert_eq!(p.levels().levels().keys().collect::<Vec<_>>(), o.levels().levels().keys().collect::<Vec<_>>());
    assert!(p.validate().is_valid());
}

#[test]
fn pullback_forgets_other_colors() {
    let g = FiniteGroup::trivial();
    let two = SigSpace::new(&g, &GSet::trivial(&g, 2), 2).unwrap();
    let one = SigSpace::new(&g, &GSet::trivial(&g, 1), 2).unwrap();
    let a = associative_operad(&two).unwrap();
    let p = pullback_operad(&one, &[0], &a).unwrap();
    assert_eq!(p.levels().support().count(), 3);
    for n in 0..=2 {
        assert_eq!(p.size_at(&binary(n)), a.size_at(&binary(n)));
    }
    pullback_projection(&p, &[0]).is_valid(&p, &a).unwrap();
}

/// Words of length exactly `len` in the free monoid on loops at 0, where a loop
/// through 1 with m intermediate steps has length m + 2.
fn loop_words(len: usize, x00: usize, x01: usize, x11: usize, x10: usize) -> usize {
    let gens = |l: usize| if l == 1 { x00 } else { x01 * x11.pow(l as u32 - 2) * x10 };
    let mut w = vec![1usize];
    for n in 1..=len {
        w.push((1..=n).map(|l| gens(l) * w[n - l]).sum());
    }
    w[len]
}

#[test]
fn pulled_back_free_category_is_free_monoid() {
    let g = FiniteGroup::trivial();
    let colors = GSet::trivial(&g, 2);
    let space = SigSpace::new(&g, &colors, 1).unwrap();
    let (x00, x01, x11, x10) = (1, 2, 1, 3);
    let mut levels = BTreeMap::new();
    for (from, to, k) in [(0, 0, x00), (0, 1, x01), (1, 1, x11), (1, 0, x10)] {
        levels.insert(Signature::new(&[from], to), Level { size: k, action: vec![(0..k).collect()] });
    }
    let x = EqSymSeq::from_levels(space.clone(), levels).unwrap();
    let fx = free_operad(&x, 3).unwrap();
    let one = SigSpace::new(&g, &GSet::trivial(&g, 1), 1).unwrap();
    let p = pullback_operad(&one, &[0], &fx.operad).unwrap();
    let loops = binary(1);
    let mut by_len = [0usize; 4];
    for e in 0..fx.operad.size_at(&loops) {
        by_len[fx.tree(&loops, e).vertex_count()] += 1;
    }
    for (len, &n) in by_len.iter().enumerate() {
        assert_eq!(n, loop_words(len, x00, x01, x11, x10), "length {len}");
    }
    assert_eq!(p.size_at(&loops), by_len.iter().sum::<usize>());
    assert!(p.validate().is_valid());
}

#[test]
fn injective_pushforward_extends_by_empty() {
    let (g, colors) = sign_colors();
    let pair = GSet::from_table(&g, vec![vec![0, 1], vec![1, 0]], None).unwrap();
    let src = SigSpace::new(&g, &pair, 2).unwrap();
    let tgt = SigSpace::new(&g, &colors, 2).unwrap();
    let mut rng = SplitMix64::seed_from_u64(21);
    for _ in 0..4 {
        let o = random_operad(&src, &mut rng);
        let (p, inc) = pushforward_operad_injective(&[0, 1], &o, &tgt).unwrap();
        assert!(p.validate().is_valid());
        inc.is_valid(&o, &p).unwrap();
        assert_eq!(p.levels().total_size(), o.levels().total_size() + 1);
        assert_eq!(p.size_at(&Signature::unit(2)), 1);
        for q in [terminal_operad(&tgt).unwrap(), random_operad(&tgt, &mut rng)] {
            let down = operad_maps(&o, &q, &[0, 1], BUDGET).unwrap().len();
            let id: Vec<usize> = (0..3).collect();
            let up = operad_maps(&p, &q, &id, BUDGET).unwrap().len();
            assert_eq!(down, up);
        }
    }
}

#[test]
fn pushforward_along_identity_is_identity() {
    let space = sign_space(2);
    let mut rng = SplitMix64::seed_from_u64(2);
    let o = random_operad(&space, &mut rng);
    let (p, inc) = pushforward_operad_injective(&[0, 1, 2], &o, &space).unwrap();
    assert!(inc.levels.is_levelwise_bijective(o.levels(), p.levels()));
}

#[test]
fn non_injective_pushforward_is_unsupported() {
    let (g, colors) = sign_colors();
    let point = SigSpace::new(&g, &GSet::trivial(&g, 1), 2).unwrap();
    let o = terminal_operad(&SigSpace::new(&g, &colors, 2).unwrap()).unwrap();
    assert!(matches!(pushforward_operad_injective(&[0, 0, 0], &o, &point), Err(Error::Unsupported(_))));
}

#[test]
fn fixed_operad_of_trivial_subgroup_is_underlying() {
    let mut rng = SplitMix64::seed_from_u64(4);
    let space = sign_space(2);
    let o = random_operad(&space, &mut rng);
    let h = Subgroup::trivial(space.group());
    let (f, fixed) = fixed_operad(&o, &h).unwrap();
    assert_eq!(fixed, vec![0, 1, 2]);
    assert!(f.validate().is_valid());
    for s in all_signatures(&space) {
        assert_eq!(f.size_at(&s), o.size_at(&s));
    }
    let (cat, _) = underlying_category(&o, &h).unwrap();
    assert_eq!(cat.object_count(), 3);
    let unary: usize = (0..3).flat_map(|a| (0..3).map(move |b| (a, b))).map(|(a, b)| o.size_at(&Signature::new(&[a], b))).sum();
    assert_eq!(cat.arrow_count(), unary);
}

#[test]
fn free_color_action_has_empty_fixed_category() {
    let (g, _) = sign_colors();
    let pair = GSet::from_table(&g, vec![vec![0, 1], vec![1, 0]], None).unwrap();
    let space = SigSpace::new(&g, &pair, 2).unwrap();
    let o = associative_operad(&space).unwrap();
    let (cat, _) = underlying_category(&o, &Subgroup::whole(&g)).unwrap();
    assert_eq!(cat.object_count(), 0);
    assert_eq!(cat.arrow_count(), 0);
}

#[test]
fn fixed_levels_match_brute_force() {
    let mut rng = SplitMix64::seed_from_u64(6);
    let g = FiniteGroup::quartic_roots();
    let action = (0..4).map(|k| vec![0, 1 + k % 2, 1 + (k + 1) % 2]).collect();
    let colors = GSet::from_table(&g, action, None).unwrap();
    let space = SigSpace::new(&g, &colors, 2).unwrap();
    for _ in 0..3 {
        let o = random_operad(&space, &mut rng);
        for h in enumerate_subgroups(&g).unwrap() {
            let (f, fixed) = fixed_operad(&o, &h).unwrap();
            assert_eq!(fixed, fixed_points_gset(&colors, &h));
            let (cat, idx) = underlying_category(&o, &h).unwrap();
            assert_eq!(cat.object_count(), fixed.len());
            for s in all_signatures(f.space()) {
                let lifted = s.map_colors(&fixed);
                let n = lifted.arity();
                let info = space.product(n).product_info().unwrap();
                let id = Permutation::identity(n);
                let brute = (0..o.size_at(&lifted))
                    .filter(|&x| h.members().iter().all(|&k| o.transport(info.join(k, &id), &lifted, x) == x))
                    .count();
                assert_eq!(f.size_at(&s), brute);
                if n == 1 {
                    let (a, b) = (idx.object_of(lifted.leaves()[0]).unwrap(), idx.object_of(lifted.root()).unwrap());
                    assert_eq!(cat.hom(a, b).len(), brute);
                }
            }
            assert!(f.validate().is_valid());
        }
    }
}

#[test]
fn unit_kappas_give_identity() {
    let q = quartic_lambda();
    let p = quartic_lambda_operad(&q).unwrap();
    let kappa: Vec<usize> = q.c.leaves().iter().map(|&c| p.unit(c)).collect();
    let pre = lambda_precompose(&p, &q.c, &q.c, &q.lambda, &kappa).unwrap();
    let post = lambda_postcompose(&p, &q.c, &q.c, &q.lambda, p.unit(q.c.root())).unwrap();
    assert!(!pre.is_empty());
    assert!(pre.iter().all(|(x, y)| x == y));
    assert_eq!(pre, post);
}

/// The κ built from α ∈ P(b; c): α at b-colored inputs and i·α at ib-colored ones.
fn kappa_from(p: &TruncatedOperad, q: &crate::fixtures::QuarticLambda, alpha: usize) -> Vec<usize> {
    let info1 = p.space().product(1).product_info().unwrap();
    let i_elt = info1.join(1, &Permutation::identity(1));
    let bc = Signature::new(&[1], 3);
    q.b.leaves().iter().map(|&c| if c == 1 { alpha } else { p.transport(i_elt, &bc, alpha) }).collect()
}

#[test]
fn quartic_lambda_precomposition_is_bijective_iff_alpha_is_even() {
    let q = quartic_lambda();
    let p = quartic_lambda_operad(&q).unwrap();
    assert_eq!(q.lambda.order(), 8);
    let info1 = p.space().product(1).product_info().unwrap();
    let minus = info1.join(2, &Permutation::identity(1));
    let bc = Signature::new(&[1], 3);
    let fixed_c = p.levels().fixed_points(&q.c, &q.lambda).unwrap();
    let fixed_b = p.levels().fixed_points(&q.b, &q.lambda).unwrap();
    assert_eq!(fixed_c.len(), 2);
    assert_eq!(fixed_c.len(), fixed_b.len());
    let mut even = 0;
    for alpha in 0..p.size_at(&bc) {
        let is_even = p.transport(minus, &bc, alpha) == alpha;
        let kappa = kappa_from(&p, &q, alpha);
        match lambda_precompose(&p, &q.b, &q.c, &q.lambda, &kappa) {
            Ok(f) => {
                assert!(is_even);
                even += 1;
                let image: BTreeSet<usize> = f.values().copied().collect();
                assert_eq!(image, fixed_b.iter().copied().collect());
                let inverses: Vec<(usize, usize)> = kappa
                    .iter()
                    .zip(q.b.leaves())
                    .map(|(&k, &b)| (k, p.inverse(&Signature::new(&[b], 3), k).unwrap()))
                    .collect();
                let back_kappa: Vec<usize> = inverses.iter().map(|&(_, inv)| inv).collect();
                let back = lambda_precompose(&p, &q.c, &q.b, &q.lambda, &back_kappa).unwrap();
                assert!(f.iter().all(|(x, y)| back[y] == *x));
            }
            Err(e) => {
                assert!(!is_even, "{e}");
                assert!(matches!(e, Error::Invalid(_)));
            }
        }
    }
    assert_eq!(even, 2);
    let mut total_compatible = 0;
    let sizes: Vec<usize> = q.b.leaves().iter().map(|&c| p.size_at(&Signature::new(&[c], 3))).collect();
    let mut kappa = vec![0usize; 4];
    loop {
        if lambda_precompose(&p, &q.b, &q.c, &q.lambda, &kappa).is_ok() {
            total_compatible += 1;
        }
        let mut i = 0;
        while i < 4 {
            kappa[i] += 1;
            if kappa[i] < sizes[i] {
                break;
            }
            kappa[i] = 0;
            i += 1;
        }
        if i == 4 {
            break;
        }
    }
    assert_eq!(total_compatible, even);
}

#[test]
fn lambda_rejects_non_stabilizing_subgroup() {
    let q = quartic_lambda();
    let p = quartic_lambda_operad(&q).unwrap();
    let info = q.product.product_info().unwrap();
    let rot = Subgroup::generated(&q.product, &[info.join(1, &Permutation::identity(4))]);
    let kappa = vec![p.unit(3); 4];
    assert!(lambda_precompose(&p, &q.c, &q.c, &rot, &kappa).is_ok());
    assert!(lambda_precompose(&p, &q.b, &q.c, &rot, &kappa_from(&p, &q, 0)).is_err());
}

#[test]
fn postcomposition_on_random_operads_lands_in_fixed_points() {
    let mut rng = SplitMix64::seed_from_u64(9);
    let (g, colors) = sign_colors();
    let space = SigSpace::new(&g, &colors, 2).unwrap();
    let prod = product_sigma_op(&g, 2).unwrap();
    let subs = enumerate_subgroups(&prod).unwrap();
    let mut checked = 0;
    for _ in 0..6 {
        let o = random_operad(&space, &mut rng);
        for lam in &subs {
            for c in crate::fam::enumerate_stabilized_signatures(&prod, &colors, lam) {
                for b0 in 0..3 {
                    let b = Signature::new(c.leaves(), b0);
                    if !crate::fam::stabilizes(&prod, &colors, lam, &b).unwrap() {
                        continue;
                    }
                    let k = Signature::new(&[c.root()], b0);
                    for kappa0 in 0..o.size_at(&k) {
                        let Ok(f) = lambda_postcompose(&o, &b, &c, lam, kappa0) else { continue };
                        for (&x, &y) in &f {
                            assert!(lam.members().iter().all(|&u| o.transport(u, &c, x) == x));
                            assert!(lam.members().iter().all(|&u| o.transport(u, &b, y) == y));
                            checked += 1;
                        }
                    }
                }
            }
        }
    }
    assert!(checked > 0);
}

#[test]
fn operad_map_identity_and_composition() {
    let mut rng = SplitMix64::seed_from_u64(12);
    let space = sign_space(2);
    let o = random_operad(&space, &mut rng);
    let t = terminal_operad(&space).unwrap();
    let id = OperadMap::identity(&o);
    id.is_valid(&o, &o).unwrap();
    let id_colors: Vec<usize> = (0..3).collect();
    let to_t = operad_maps(&o, &t, &id_colors, BUDGET).unwrap();
    assert_eq!(to_t.len(), 1);
    assert_eq!(id.then(&to_t[0], &o, &o, &t), to_t[0]);
}

#[test]
fn operad_map_search_respects_budget() {
    let space = one_color(3);
    let fx = free_operad(&representable(&space, &binary(2)).unwrap().seq, 2).unwrap();
    let a = associative_operad(&space).unwrap();
    assert!(matches!(operad_maps(&fx.operad, &a, &[0], 1), Err(Error::Budget { .. })));
    assert_eq!(operad_maps(&fx.operad, &a, &[0], BUDGET).unwrap().len(), 2);
}

#[test]
fn inverse_finds_two_sided_inverses() {
    let q = quartic_lambda();
    let p = quartic_lambda_operad(&q).unwrap();
    let bc = Signature::new(&[1], 3);
    let cb = Signature::new(&[3], 1);
    for x in 0..p.size_at(&bc) {
        let y = p.inverse(&bc, x).unwrap();
        assert_eq!(p.compose(&cb, 0, &bc, y, x), Some(p.unit(1)));
    }
    let max = ActedMonoid::max(&FiniteGroup::trivial(), 2);
    let space = one_color(1);
    let spec = MonoidOperadSpec { space: space.clone(), support: all_signatures(&space), monoid: max, with_orders: false };
    let o = monoid_operad(&spec).unwrap();
    assert!(o.inverse(&binary(1), 1).is_none());
    assert_eq!(o.inverse(&binary(1), 0), Some(0));
}

#[test]
fn monoid_quotient_checks_congruence() {
    let g = FiniteGroup::trivial();
    let z4 = ActedMonoid::cyclic(&g, 4, &[1]).unwrap();
    assert_eq!(z4.quotient(&g, &[0, 1, 0, 1]).unwrap().size(), 2);
    assert!(z4.quotient(&g, &[0, 1, 1, 0]).is_err());
    assert!(z4.is_group());
    assert!(!ActedMonoid::max(&g, 2).is_group());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn random_monoid_operads_validate(seed in any::<u64>()) {
        let mut rng = SplitMix64::seed_from_u64(seed);
        let space = sign_space(3);
        let o = random_operad(&space, &mut rng);
        let report = o.validate();
        prop_assert!(report.is_valid(), "{:?}", report.violations);
    }

    #[test]
    fn pullback_projection_is_an_operad_map(seed in any::<u64>()) {
        let mut rng = SplitMix64::seed_from_u64(seed);
        let (g, colors) = sign_colors();
        let space = SigSpace::new(&g, &colors, 2).unwrap();
        let o = random_operad(&space, &mut rng);
        let maps = equivariant_maps(&g, &colors, &colors);
        let phi = &maps[rng.gen_range(0..maps.len())];
        let p = pullback_operad(&space, phi, &o).unwrap();
        prop_assert!(p.validate().is_valid());
        prop_assert!(pullback_projection(&p, phi).is_valid(&p, &o).is_ok());
    }
}

