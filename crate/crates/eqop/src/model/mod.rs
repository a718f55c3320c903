//! Weak equivalences, fibrations and trivial fibrations of G-operads in Set,
//! generating cells with lifting oracles, cell attachments and property suites.

mod attach;
mod cells;
pub mod gen;
mod suite;

pub use attach::{attach_colors, attach_interval, base_coset, Attachment};
pub use cells::{generating_cells, llp_sample, materialize_cell, rlp, Boundary, Cell, FailingSquare, GeneratingSet, LlpSample};
pub use suite::{axiom_suite, axiom_suite_with, two_out_of_three_suite, two_out_of_three_suite_with, Classifier, SuiteConfig, SuiteReport, Tally};

use std::collections::BTreeSet;
use std::fmt;

use crate::cat::{essentially_surjective, is_isofibration, pi0_functor, pi0_setenriched, Functor};
use crate::error::{invalid, Error, Result};
use crate::fam::GSigmaFamily;
use crate::grp::{Permutation, Subgroup};
use crate::oper::{underlying_category, OperadMap, TruncatedOperad};
use crate::tree::Signature;

/// An operad map together with its source and target.
#[derive(Clone, Debug)]
pub struct Arrow {
    pub src: TruncatedOperad,
    pub tgt: TruncatedOperad,
    pub map: OperadMap,
}

impl Arrow {
    pub fn new(src: TruncatedOperad, tgt: TruncatedOperad, map: OperadMap) -> Result<Self> {
        map.is_valid(&src, &tgt)?;
        Ok(Arrow { src, tgt, map })
    }

    pub fn identity(o: &TruncatedOperad) -> Self {
        Arrow { src: o.clone(), tgt: o.clone(), map: OperadMap::identity(o) }
    }

    pub fn color_map(&self) -> &[usize] {
        &self.map.color_map
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Arrow) -> Result<Arrow> {
        if self.tgt != next.src {
            return invalid("arrows are not composable");
        }
        let map = self.map.then(&next.map, &self.src, &self.tgt, &next.tgt);
        Ok(Arrow { src: self.src.clone(), tgt: next.tgt.clone(), map })
    }

    /// Value of the map at element `x` of the source level at `sig`.
    pub fn apply(&self, sig: &Signature, x: usize) -> usize {
        self.map.apply(&self.src, &self.tgt, sig, x)
    }
}

/// Why a flag is false.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    /// The map of Λ-fixed points at `sig` is not a bijection.
    Level { sig: Signature, lambda: Vec<usize>, missing: Vec<usize>, collapsed: Option<(usize, usize)> },
    /// An H-fixed target color outside the (essential) image.
    Color { h: Vec<usize>, color: usize },
    /// An H-fixed isomorphism `element: φ(source) → target` with no lift.
    Path { h: Vec<usize>, source: usize, target: usize, element: usize },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Level { sig, lambda, missing, collapsed } => {
                write!(f, "level {:?} under Λ = {:?}", sig.to_wire(), lambda)?;
                if !missing.is_empty() {
                    write!(f, ": fixed points {missing:?} not hit")?;
                }
                if let Some((x, y)) = collapsed {
                    write!(f, ": fixed points {x} and {y} identified")?;
                }
                Ok(())
            }
            Witness::Color { h, color } => write!(f, "H = {h:?}: color {color} not reached"),
            Witness::Path { h, source, target, element } => {
                write!(f, "H = {h:?}: isomorphism {element} from the image of {source} to {target} does not lift")
            }
        }
    }
}

/// The flags of an operad map and the resulting verdicts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub local_we: bool,
    /// Every map of sets is a fibration.
    pub local_fib: bool,
    pub local_trivfib: bool,
    pub ess_surj: bool,
    pub path_lifting: bool,
    pub pi0_ess_surj: bool,
    pub surjective_on_fixed_colors: bool,
    pub we: bool,
    pub fib: bool,
    pub trivfib: bool,
    pub witnesses: Vec<(String, Witness)>,
}

fn check_inputs(f: &Arrow, fam: &GSigmaFamily) -> Result<()> {
    if f.src.group() != f.tgt.group() || fam.group() != f.src.group() {
        return invalid("map and family over different groups");
    }
    let n = f.src.arity_bound();
    if f.tgt.arity_bound() != n {
        return Err(Error::BoundMismatch(format!("source bound {n}, target bound {}", f.tgt.arity_bound())));
    }
    if fam.arity_bound() < n.max(1) {
        return Err(Error::BoundMismatch(format!("family bound {} below the operad bound {}", fam.arity_bound(), n.max(1))));
    }
    Ok(())
}

/// F₁ as subgroups of G.
pub fn unary_family(fam: &GSigmaFamily) -> Vec<Subgroup> {
    let g = fam.group();
    fam.unary_subgroups().iter().map(|h| Subgroup::from_members(g, h.members()).unwrap()).collect()
}

fn fixed_points_map(f: &Arrow, fam: &GSigmaFamily, need_inj: bool, need_surj: bool) -> Result<Option<Witness>> {
    check_inputs(f, fam)?;
    let colors = f.src.colors();
    for rep in f.src.space().all_orbit_reps() {
        let image = rep.map_colors(f.color_map());
        if f.src.size_at(&rep) == 0 && f.tgt.size_at(&image) == 0 {
            continue;
        }
        for lambda in fam.stabilizer_family(colors, &rep)? {
            let ours = f.src.levels().fixed_points(&rep, &lambda)?;
            let theirs: BTreeSet<usize> = f.tgt.levels().fixed_points(&image, &lambda)?.into_iter().collect();
            let mut hit = std::collections::BTreeMap::new();
            let mut collapsed = None;
            for &x in &ours {
                if let Some(prev) = hit.insert(f.apply(&rep, x), x) {
                    collapsed.get_or_insert((prev, x));
                }
            }
            let missing: Vec<usize> = theirs.iter().filter(|y| !hit.contains_key(y)).copied().collect();
            let bad_inj = need_inj && collapsed.is_some();
            let bad_surj = need_surj && !missing.is_empty();
            if bad_inj || bad_surj {
                return Ok(Some(Witness::Level {
                    sig: rep,
                    lambda: lambda.members().to_vec(),
                    missing: if need_surj { missing } else { vec![] },
                    collapsed: if need_inj { collapsed } else { None },
                }));
            }
        }
    }
    Ok(None)
}

/// O(C̄)^Λ → P(φC̄)^Λ is a bijection for every C̄ and every Λ ∈ F stabilizing it.
pub fn is_local_weak_equivalence(f: &Arrow, fam: &GSigmaFamily) -> Result<(bool, Option<Witness>)> {
    let w = fixed_points_map(f, fam, true, true)?;
    Ok((w.is_none(), w))
}

/// Local trivial fibration: the same maps are surjective and injective.
pub fn is_local_trivial_fibration(f: &Arrow, fam: &GSigmaFamily) -> Result<(bool, Option<Witness>)> {
    if let Some(w) = fixed_points_map(f, fam, false, true)? {
        return Ok((false, Some(w)));
    }
    let w = fixed_points_map(f, fam, true, false)?;
    Ok((w.is_none(), w))
}

fn fixed_by(o: &TruncatedOperad, h: &Subgroup, sig: &Signature, x: usize) -> bool {
    let info = o.space().product(1).product_info().unwrap();
    let id = Permutation::identity(1);
    h.members().iter().all(|&g| o.transport(info.join(g, &id), sig, x) == x)
}

/// H-fixed invertible elements of O(a; b).
fn fixed_isos(o: &TruncatedOperad, h: &Subgroup, a: usize, b: usize) -> Vec<usize> {
    let sig = Signature::new(&[a], b);
    (0..o.size_at(&sig)).filter(|&x| fixed_by(o, h, &sig, x) && o.inverse(&sig, x).is_some()).collect()
}

/// Every H-fixed color of P is isomorphic in j*P^H to the image of an H-fixed color of O, for H ∈ F₁.
pub fn is_essentially_surjective(f: &Arrow, fam: &GSigmaFamily) -> Result<(bool, Option<Witness>)> {
    check_inputs(f, fam)?;
    for h in unary_family(fam) {
        let ours = f.src.colors().fixed_points(&h);
        for b in f.tgt.colors().fixed_points(&h) {
            if !ours.iter().any(|&a| !fixed_isos(&f.tgt, &h, f.color_map()[a], b).is_empty()) {
                return Ok((false, Some(Witness::Color { h: h.members().to_vec(), color: b })));
            }
        }
    }
    Ok((true, None))
}

/// Every H-fixed color of P is the image of an H-fixed color of O, for H ∈ F₁.
pub fn is_surjective_on_fixed_colors(f: &Arrow, fam: &GSigmaFamily) -> Result<(bool, Option<Witness>)> {
    check_inputs(f, fam)?;
    for h in unary_family(fam) {
        let ours = f.src.colors().fixed_points(&h);
        for b in f.tgt.colors().fixed_points(&h) {
            if !ours.iter().any(|&a| f.color_map()[a] == b) {
                return Ok((false, Some(Witness::Color { h: h.members().to_vec(), color: b })));
            }
        }
    }
    Ok((true, None))
}

/// Every H-fixed isomorphism φ(a) → b′ in P lifts to an H-fixed isomorphism a → b in O.
pub fn is_path_lifting(f: &Arrow, fam: &GSigmaFamily) -> Result<(bool, Option<Witness>)> {
    check_inputs(f, fam)?;
    let phi = f.color_map();
    for h in unary_family(fam) {
        let ours = f.src.colors().fixed_points(&h);
        for &a in &ours {
            for b2 in f.tgt.colors().fixed_points(&h) {
                for p in fixed_isos(&f.tgt, &h, phi[a], b2) {
                    let lifts = ours.iter().filter(|&&b| phi[b] == b2).any(|&b| {
                        let sig = Signature::new(&[a], b);
                        fixed_isos(&f.src, &h, a, b).into_iter().any(|x| f.apply(&sig, x) == p)
                    });
                    if !lifts {
                        return Ok((false, Some(Witness::Path { h: h.members().to_vec(), source: a, target: b2, element: p })));
                    }
                }
            }
        }
    }
    Ok((true, None))
}

/// j*O^H → j*P^H on underlying categories.
pub fn fixed_functor(f: &Arrow, h: &Subgroup) -> Result<Functor> {
    let (cs, is) = underlying_category(&f.src, h)?;
    let (ct, it) = underlying_category(&f.tgt, h)?;
    let objects: Vec<usize> = is.fixed.iter().map(|&c| it.object_of(f.color_map()[c]).unwrap()).collect();
    let arrows = cs
        .arrows()
        .iter()
        .zip(&is.elements)
        .map(|(&(a, b), &x)| {
            let y = f.apply(&Signature::new(&[is.fixed[a]], is.fixed[b]), x);
            it.arrow_of(objects[a], objects[b], y).unwrap()
        })
        .collect();
    Functor::new(cs, ct, objects, arrows)
}

/// Isofibration of underlying categories for every H ∈ F₁.
pub fn is_isofibration_on_fixed(f: &Arrow, fam: &GSigmaFamily) -> Result<bool> {
    check_inputs(f, fam)?;
    for h in unary_family(fam) {
        if !is_isofibration(&fixed_functor(f, &h)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Essential surjectivity of π₀ j*O^H → π₀ j*P^H for every H ∈ F₁.
pub fn is_pi0_essentially_surjective(f: &Arrow, fam: &GSigmaFamily) -> Result<(bool, Option<Witness>)> {
    check_inputs(f, fam)?;
    for h in unary_family(fam) {
        let functor = fixed_functor(f, &h)?;
        let pf = pi0_functor(&functor);
        if !essentially_surjective(&pf) {
            let target = pi0_setenriched(&functor.target);
            let hit = &pf.objects;
            let color = (0..target.object_count())
                .find(|&b| !hit.iter().any(|&a| target.isomorphic_objects(a, b)))
                .map(|b| f.tgt.colors().fixed_points(&h)[b])
                .unwrap_or(0);
            return Ok((false, Some(Witness::Color { h: h.members().to_vec(), color })));
        }
    }
    Ok((true, None))
}

/// Local weak equivalence with π₀-essential surjectivity.
pub fn is_dwyer_kan(f: &Arrow, fam: &GSigmaFamily) -> Result<bool> {
    Ok(is_local_weak_equivalence(f, fam)?.0 && is_pi0_essentially_surjective(f, fam)?.0)
}

/// All flags and verdicts; refuses families without enough units.
pub fn classify(f: &Arrow, fam: &GSigmaFamily) -> Result<Classification> {
    check_inputs(f, fam)?;
    if let (false, Some((n, h))) = fam.has_enough_units() {
        return invalid(format!(
            "family does not have enough units: the projection of {:?} at arity {n} is not in F₁",
            h.members()
        ));
    }
    let mut witnesses = Vec::new();
    let mut flag = |name: &str, (ok, w): (bool, Option<Witness>)| {
        if let Some(w) = w {
            witnesses.push((name.to_string(), w));
        }
        ok
    };
    let local_we = flag("local_we", is_local_weak_equivalence(f, fam)?);
    let local_trivfib = flag("local_trivfib", is_local_trivial_fibration(f, fam)?);
    let ess_surj = flag("ess_surj", is_essentially_surjective(f, fam)?);
    let path_lifting = flag("path_lifting", is_path_lifting(f, fam)?);
    let pi0_ess_surj = flag("pi0_ess_surj", is_pi0_essentially_surjective(f, fam)?);
    let surjective_on_fixed_colors = flag("surjective_on_fixed_colors", is_surjective_on_fixed_colors(f, fam)?);
    let local_fib = true;
    let we = local_we && ess_surj;
    let fib = local_fib && path_lifting;
    let trivfib = we && fib;
    assert_eq!(
        trivfib,
        local_trivfib && surjective_on_fixed_colors,
        "trivial fibration verdicts disagree"
    );
    Ok(Classification {
        local_we,
        local_fib,
        local_trivfib,
        ess_surj,
        path_lifting,
        pi0_ess_surj,
        surjective_on_fixed_colors,
        we,
        fib,
        trivfib,
        witnesses,
    })
}
