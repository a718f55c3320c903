use std::collections::BTreeSet;
use std::fmt;

use super::{unary_family, Arrow};
use crate::error::{invalid, Error, Result};
use crate::fam::{enumerate_stabilized_signatures, GSigmaFamily};
use crate::grp::{equivariant_maps, FiniteGroup, GSet, Subgroup};
use crate::oper::{close_support, free_map, free_operad, initial_operad, monoid_operad, operad_maps, ActedMonoid, MonoidOperadSpec, OperadMap, TruncatedOperad};
use crate::sym::{coproduct_seq, fold_map, hom_maps_along, quotient, representable, SigSpace};
use crate::tree::{act_unchecked, Signature};

/// The generating cofibration of Set attached to a (C2) cell.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Boundary {
    /// ∅ → *
    Empty,
    /// {a, b} → *
    Pair,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cell {
    /// ∅ → G/H·η
    C1 { h: Subgroup },
    /// 𝔽(Σ[G·Cₙ]/Λ·∂) → 𝔽(Σ[G·Cₙ]/Λ·*)
    C2 { arity: usize, lambda: Subgroup, boundary: Boundary },
    /// G/H·(η → 𝟙̃)
    TC1 { h: Subgroup },
}

impl Cell {
    pub fn tag(&self) -> &'static str {
        match self {
            Cell::C1 { .. } => "C1",
            Cell::C2 { .. } => "C2",
            Cell::TC1 { .. } => "TC1",
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::C1 { h } => write!(f, "C1(H = {:?})", h.members()),
            Cell::C2 { arity, lambda, boundary } => {
                let b = match boundary {
                    Boundary::Empty => "∅→*",
                    Boundary::Pair => "{a,b}→*",
                };
                write!(f, "C2(n = {arity}, Λ = {:?}, {b})", lambda.members())
            }
            Cell::TC1 { h } => write!(f, "TC1(H = {:?})", h.members()),
        }
    }
}

/// (C1), (C2) and (TC1); (TC2) is empty since every map of sets is a fibration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratingSet {
    pub cells: Vec<Cell>,
}

impl GeneratingSet {
    pub fn of_kind(&self, tag: &str) -> Vec<Cell> {
        self.cells.iter().filter(|c| c.tag() == tag).cloned().collect()
    }

    pub fn cofibrations(&self) -> Vec<Cell> {
        self.cells.iter().filter(|c| c.tag() != "TC1").cloned().collect()
    }

    pub fn trivial_cofibrations(&self) -> Vec<Cell> {
        self.of_kind("TC1")
    }
}

/// (C1) for H ∈ F₁, (C2) for one Λ per conjugacy class of Fₙ (n ≤ bound) and
/// both boundaries, (TC1) for H ∈ F₁.
pub fn generating_cells(fam: &GSigmaFamily, arity_bound: usize) -> Result<GeneratingSet> {
    if arity_bound > fam.arity_bound() {
        return Err(Error::BoundMismatch(format!("bound {arity_bound} above the family bound {}", fam.arity_bound())));
    }
    let f1 = unary_family(fam);
    let mut cells: Vec<Cell> = f1.iter().map(|h| Cell::C1 { h: h.clone() }).collect();
    for n in 0..=arity_bound {
        for lambda in fam.class_representatives(n) {
            for boundary in [Boundary::Empty, Boundary::Pair] {
                cells.push(Cell::C2 { arity: n, lambda: lambda.clone(), boundary });
            }
        }
    }
    cells.extend(f1.into_iter().map(|h| Cell::TC1 { h }));
    Ok(GeneratingSet { cells })
}

const CELL_BUDGET: u128 = 1 << 20;

fn unique_map(src: &TruncatedOperad, tgt: &TruncatedOperad, phi: &[usize]) -> Result<OperadMap> {
    let mut maps = operad_maps(src, tgt, phi, CELL_BUDGET)?;
    if maps.len() != 1 {
        return invalid(format!("expected a unique map, found {}", maps.len()));
    }
    Ok(maps.pop().unwrap())
}

/// The colors of a (C2) cell: G × {0, …, n} modulo the relations making
/// C̄ₙ = ([e,1], …, [e,n]; [e,0]) Λ-stable, with C̄ₙ itself.
fn c2_colors(g: &FiniteGroup, n: usize, lambda: &Subgroup) -> Result<(GSet, Signature)> {
    let m = g.order() * (n + 1);
    let free_action = g.elements().map(|k| (0..m).map(|x| g.mul(k, x / (n + 1)) * (n + 1) + x % (n + 1)).collect()).collect();
    let free = GSet::from_table(g, free_action, None)?;
    let e = g.identity();
    let generic = Signature::from_raw((0..=n).map(|i| e * (n + 1) + i).collect());
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let prod = crate::grp::product_sigma_op(g, n)?;
    let info = prod.product_info().unwrap();
    for &u in lambda.members() {
        let moved = act_unchecked(info, &free, u, &generic);
        for (&x, &y) in generic.raw().iter().zip(moved.raw()) {
            for k in g.elements() {
                let (a, b) = (find(&mut parent, free.act(k, x)), find(&mut parent, free.act(k, y)));
                parent[a] = b;
            }
        }
    }
    let mut class = vec![usize::MAX; m];
    let mut count = 0;
    let mut labels = Vec::new();
    for x in 0..m {
        let r = find(&mut parent, x);
        if class[r] == usize::MAX {
            class[r] = count;
            count += 1;
            labels.push(format!("[{},{}]", g.label(x / (n + 1)), x % (n + 1)));
        }
        class[x] = class[r];
    }
    let action = g
        .elements()
        .map(|k| {
            let mut row = vec![0; count];
            for x in 0..m {
                row[class[x]] = class[free.act(k, x)];
            }
            row
        })
        .collect();
    let colors = GSet::from_table(g, action, Some(labels))?;
    let sig = Signature::from_raw(generic.raw().iter().map(|&x| class[x]).collect());
    Ok((colors, sig))
}

/// The cell as an operad map, with free operads truncated at `vertex_bound` vertices.
pub fn materialize_cell(cell: &Cell, g: &FiniteGroup, arity_bound: usize, vertex_bound: usize) -> Result<Arrow> {
    match cell {
        Cell::C1 { h } => {
            let empty = SigSpace::new(g, &GSet::trivial(g, 0), arity_bound)?;
            let cosets = SigSpace::new(g, &GSet::cosets(g, h), arity_bound)?;
            let (src, tgt) = (initial_operad(&empty)?, initial_operad(&cosets)?);
            let map = unique_map(&src, &tgt, &[])?;
            Ok(Arrow { src, tgt, map })
        }
        Cell::TC1 { h } => {
            let cosets = GSet::cosets(g, h);
            let k = cosets.size();
            let src = initial_operad(&SigSpace::new(g, &cosets, arity_bound)?)?;
            let space = SigSpace::new(g, &cosets.disjoint_union(&cosets), arity_bound)?;
            let seeds: Vec<Signature> = (0..k).flat_map(|c| [Signature::new(&[c], c + k), Signature::new(&[c + k], c)]).collect();
            let spec = MonoidOperadSpec {
                support: close_support(&space, &seeds),
                space,
                monoid: ActedMonoid::trivial(g),
                with_orders: false,
            };
            let tgt = monoid_operad(&spec)?;
            let phi: Vec<usize> = (0..k).collect();
            let map = unique_map(&src, &tgt, &phi)?;
            Ok(Arrow { src, tgt, map })
        }
        Cell::C2 { arity, lambda, boundary } => {
            if *arity > arity_bound {
                return Err(Error::Bound(format!("cell arity {arity} above the bound {arity_bound}")));
            }
            let (colors, sig) = c2_colors(g, *arity, lambda)?;
            let space = SigSpace::new(g, &colors, arity_bound)?;
            let x = quotient(&representable(&space, &sig)?, lambda)?.seq;
            let tgt = free_operad(&x, vertex_bound)?;
            match boundary {
                Boundary::Empty => {
                    let src = initial_operad(&space)?;
                    let id: Vec<usize> = (0..colors.size()).collect();
                    let map = unique_map(&src, &tgt.operad, &id)?;
                    Ok(Arrow { src, tgt: tgt.operad, map })
                }
                Boundary::Pair => {
                    let src = free_operad(&coproduct_seq(&x, &x)?, vertex_bound)?;
                    let map = free_map(&fold_map(&x), &src, &tgt)?;
                    Ok(Arrow { src: src.operad, tgt: tgt.operad, map })
                }
            }
        }
    }
}

/// A commutative square with no diagonal filler.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FailingSquare {
    pub cell: String,
    pub detail: String,
}

/// Squares from `cell` to `f` and their lifts, by enumeration of all operad maps.
pub(crate) fn brute_force_lift(cell: &Arrow, f: &Arrow, budget: u128) -> Result<Option<String>> {
    let g = f.src.group();
    let compose_colors = |a: &[usize], b: &[usize]| a.iter().map(|&c| b[c]).collect::<Vec<usize>>();
    for chi in equivariant_maps(g, cell.src.colors(), f.src.colors()) {
        let tops = operad_maps(&cell.src, &f.src, &chi, budget)?;
        if tops.is_empty() {
            continue;
        }
        let bottom_colors = compose_colors(&chi, f.color_map());
        for psi in equivariant_maps(g, cell.tgt.colors(), f.tgt.colors()) {
            if compose_colors(cell.color_map(), &psi) != bottom_colors {
                continue;
            }
            let bottoms = operad_maps(&cell.tgt, &f.tgt, &psi, budget)?;
            let diagonals: Vec<Vec<usize>> = equivariant_maps(g, cell.tgt.colors(), f.src.colors())
                .into_iter()
                .filter(|l| compose_colors(cell.color_map(), l) == chi && compose_colors(l, f.color_map()) == psi)
                .collect();
            let mut fillers = Vec::new();
            for l in &diagonals {
                fillers.extend(operad_maps(&cell.tgt, &f.src, l, budget)?);
            }
            for top in &tops {
                let right = top.then(&f.map, &cell.src, &f.src, &f.tgt);
                for bottom in &bottoms {
                    if cell.map.then(bottom, &cell.src, &cell.tgt, &f.tgt) != right {
                        continue;
                    }
                    let lifted = fillers.iter().any(|d| {
                        &cell.map.then(d, &cell.src, &cell.tgt, &f.src) == top && &d.then(&f.map, &cell.tgt, &f.src, &f.tgt) == bottom
                    });
                    if !lifted {
                        return Ok(Some(format!("top over colors {chi:?}, bottom over colors {psi:?}: no filler")));
                    }
                }
            }
        }
    }
    Ok(None)
}

/// Lifting against a (C2) cell through hom(Σ[G·C̄]/Λ, −) ≅ (−)(C̄)^Λ.
fn c2_lift(f: &Arrow, n: usize, lambda: &Subgroup, boundary: Boundary, budget: u128) -> Result<Option<String>> {
    if n > f.src.arity_bound() {
        return Ok(None);
    }
    let space = f.src.space();
    let id: Vec<usize> = (0..f.src.colors().size()).collect();
    for sig in enumerate_stabilized_signatures(space.product(n), f.src.colors(), lambda) {
        let q = quotient(&representable(space, &sig)?, lambda)?;
        let ups = hom_maps_along(&q.seq, f.src.levels(), &id, budget)?;
        let downs = hom_maps_along(&q.seq, f.tgt.levels(), f.color_map(), budget)?;
        let pushed: Vec<_> = ups.iter().map(|u| u.then(&f.map.levels, &q.seq, f.src.levels(), f.tgt.levels())).collect();
        match boundary {
            Boundary::Empty => {
                if let Some(k) = downs.iter().position(|d| !pushed.contains(d)) {
                    return Ok(Some(format!("at {:?}: fixed element {k} of the target has no preimage", sig.to_wire())));
                }
            }
            Boundary::Pair => {
                let distinct: BTreeSet<_> = pushed.iter().collect();
                if distinct.len() != pushed.len() {
                    return Ok(Some(format!("at {:?}: two fixed elements of the source have the same image", sig.to_wire())));
                }
            }
        }
    }
    Ok(None)
}

/// Right lifting property of `f` against every cell; `None` when all squares lift.
pub fn rlp(f: &Arrow, cells: &[Cell], budget: u128) -> Result<Option<FailingSquare>> {
    let g = f.src.group();
    let n = f.src.arity_bound();
    for cell in cells {
        let detail = match cell {
            Cell::C2 { arity, lambda, boundary } => c2_lift(f, *arity, lambda, *boundary, budget)?,
            _ => brute_force_lift(&materialize_cell(cell, g, n, 1)?, f, budget)?,
        };
        if let Some(detail) = detail {
            return Ok(Some(FailingSquare { cell: cell.to_string(), detail }));
        }
    }
    Ok(None)
}

/// Outcome of a sampled left lifting check; never a proof of cofibrancy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LlpSample {
    pub checked: usize,
    pub exhaustive: bool,
    pub failure: Option<FailingSquare>,
}

/// Left lifting property of `f` against the given maps, which should be trivial fibrations.
pub fn llp_sample(f: &Arrow, candidates: &[Arrow], budget: u128) -> Result<LlpSample> {
    for (k, c) in candidates.iter().enumerate() {
        if let Some(detail) = brute_force_lift(f, c, budget)? {
            return Ok(LlpSample { checked: k + 1, exhaustive: false, failure: Some(FailingSquare { cell: format!("candidate {k}"), detail }) });
        }
    }
    Ok(LlpSample { checked: candidates.len(), exhaustive: false, failure: None })
}
