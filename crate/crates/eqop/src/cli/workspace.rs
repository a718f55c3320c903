//! The `eqop/1` interchange format: named groups, G-sets, families, operads,
//! maps and categories, with bounds and a seed.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cat::FinCategory;
use crate::error::{Error, Result};
use crate::fam::GSigmaFamily;
use crate::grp::{FiniteGroup, GSet, Subgroup};
use crate::model::Arrow;
use crate::oper::{
    associative_operad, close_support, free_operad, initial_operad, monoid_operad, operad_maps, pullback_operad, terminal_operad, ActedMonoid,
    MonoidOperadSpec, OperadMap, TruncatedOperad,
};
use crate::sym::{coproduct_seq, quotient, representable, EqSymSeq, SigSpace, SymSeqMap};
use crate::tree::Signature;

pub const SCHEMA: &str = "eqop/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bounds {
    #[serde(default = "default_arity")]
    pub arity: usize,
    #[serde(default = "default_vertices")]
    pub vertices: usize,
    #[serde(default = "default_budget")]
    pub budget: u64,
}

fn default_arity() -> usize {
    2
}

fn default_vertices() -> usize {
    2
}

fn default_budget() -> u64 {
    1 << 20
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { arity: default_arity(), vertices: default_vertices(), budget: default_budget() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDef {
    pub order: usize,
    pub mul: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

/// One row per group element: `action[g][x] = g·x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GSetDef {
    pub group: String,
    pub action: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedDef {
    pub arity: usize,
    pub members: Vec<usize>,
}

/// Either explicit `subgroups` per arity (element indices of G × Σₙᵒᵖ) or a
/// `constructor`: `all`, `graph` or `generated` from `seeds`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDef {
    pub group: String,
    pub arity_bound: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constructor: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subgroups: Option<BTreeMap<String, Vec<Vec<usize>>>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub seeds: Vec<SeedDef>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonoidDef {
    pub add: Vec<Vec<usize>>,
    pub act: Vec<Vec<usize>>,
    pub zero: usize,
}

/// Σ[G·C̄]/Λ; an empty `lambda` is the trivial subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDef {
    pub signature: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lambda: Vec<usize>,
}

/// Signatures are written leaves first, root last, with color labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Construction {
    Initial,
    Terminal,
    Associative,
    Monoid {
        support: Vec<Vec<String>>,
        monoid: MonoidDef,
        #[serde(default)]
        with_orders: bool,
    },
    Free {
        generators: Vec<GeneratorDef>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        vertex_bound: Option<usize>,
    },
    /// φ*P, with `map` sending each color label of `colors` to a color label of `of`.
    Pullback { of: String, map: BTreeMap<String, String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperadDef {
    pub colors: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arity_bound: Option<usize>,
    pub construction: Construction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelDef {
    pub signature: Vec<String>,
    pub values: Vec<usize>,
}

/// Without `levels` the map must be the only one along its colors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDef {
    pub source: String,
    pub target: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colors: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<Vec<LevelDef>>,
}

/// `compose` lists `[g, f, g∘f]` for every composable pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryDef {
    pub objects: usize,
    pub arrows: Vec<[usize; 2]>,
    pub identities: Vec<usize>,
    pub compose: Vec<[usize; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Workspace {
    pub schema: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub bounds: Bounds,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub groups: BTreeMap<String, GroupDef>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub gsets: BTreeMap<String, GSetDef>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub families: BTreeMap<String, FamilyDef>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub operads: BTreeMap<String, OperadDef>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub maps: BTreeMap<String, MapDef>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub categories: BTreeMap<String, CategoryDef>,
}

impl Default for Workspace {
    fn default() -> Self {
        Workspace {
            schema: SCHEMA.to_string(),
            seed: 0,
            bounds: Bounds::default(),
            groups: BTreeMap::new(),
            gsets: BTreeMap::new(),
            families: BTreeMap::new(),
            operads: BTreeMap::new(),
            maps: BTreeMap::new(),
            categories: BTreeMap::new(),
        }
    }
}

fn escape(segment: &str) -> String {
    segment.replace('~', "~0").replace('/', "~1")
}

/// A JSON pointer from path segments.
pub fn pointer(segments: &[&str]) -> String {
    segments.iter().map(|s| format!("/{}", escape(s))).collect()
}

fn schema_err(path: String, msg: impl Into<String>) -> Error {
    Error::Schema { path, msg: msg.into() }
}

/// Errors other than bound and budget errors are reported at `path`.
fn at<T>(path: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Invalid(msg) | Error::Unsupported(msg) => schema_err(path.to_string(), msg),
        other => other,
    })
}

fn path_to_pointer(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    path.iter()
        .filter_map(|s| match s {
            Segment::Seq { index } => Some(format!("/{index}")),
            Segment::Map { key } => Some(format!("/{}", escape(key))),
            Segment::Enum { variant } => Some(format!("/{}", escape(variant))),
            Segment::Unknown => None,
        })
        .collect()
}

pub fn parse(text: &str) -> Result<Workspace> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let ws: Workspace = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = path_to_pointer(e.path());
        schema_err(path, e.into_inner().to_string())
    })?;
    if ws.schema != SCHEMA {
        return Err(schema_err("/schema".into(), format!("expected \"{SCHEMA}\", found \"{}\"", ws.schema)));
    }
    Ok(ws)
}

pub fn load(path: &Path) -> Result<Workspace> {
    let text = std::fs::read_to_string(path).map_err(|e| schema_err(String::new(), format!("{}: {e}", path.display())))?;
    parse(&text)
}

/// Sorted keys, two-space indentation, trailing newline.
pub fn to_canonical(ws: &Workspace) -> String {
    let value = serde_json::to_value(ws).expect("workspace serializes");
    let mut s = serde_json::to_string_pretty(&value).expect("value serializes");
    s.push('\n');
    s
}

pub fn save(ws: &Workspace, path: &Path) -> Result<()> {
    std::fs::write(path, to_canonical(ws)).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

/// Every object of a workspace, built and checked.
#[derive(Clone, Debug, Default)]
pub struct Resolved {
    pub bounds: Option<Bounds>,
    pub groups: BTreeMap<String, FiniteGroup>,
    pub gsets: BTreeMap<String, (String, GSet)>,
    pub families: BTreeMap<String, GSigmaFamily>,
    pub operads: BTreeMap<String, TruncatedOperad>,
    pub maps: BTreeMap<String, Arrow>,
    pub categories: BTreeMap<String, FinCategory>,
}

pub fn color_index(colors: &GSet, label: &str) -> Option<usize> {
    colors.index_of(label).or_else(|| label.parse::<usize>().ok().filter(|&c| c < colors.size() && colors.labels().is_none()))
}

pub fn signature(colors: &GSet, wire: &[String], path: &str) -> Result<Signature> {
    let idx = wire
        .iter()
        .enumerate()
        .map(|(i, l)| color_index(colors, l).ok_or_else(|| schema_err(format!("{path}/{i}"), format!("unknown color \"{l}\""))))
        .collect::<Result<Vec<_>>>()?;
    at(path, Signature::from_wire(&idx))
}

pub fn signature_labels(colors: &GSet, sig: &Signature) -> Vec<String> {
    sig.to_wire().into_iter().map(|c| colors.label(c)).collect()
}

struct Resolver<'a> {
    ws: &'a Workspace,
    out: Resolved,
    in_progress: BTreeSet<String>,
}

impl Resolver<'_> {
    fn group(&self, name: &str, path: &str) -> Result<FiniteGroup> {
        self.out.groups.get(name).cloned().ok_or_else(|| schema_err(path.to_string(), format!("unknown group \"{name}\"")))
    }

    fn gset(&self, name: &str, path: &str) -> Result<(FiniteGroup, GSet)> {
        let (g, x) = self.out.gsets.get(name).ok_or_else(|| schema_err(path.to_string(), format!("unknown G-set \"{name}\"")))?;
        Ok((self.out.groups[g].clone(), x.clone()))
    }

    fn operad(&mut self, name: &str, path: &str) -> Result<TruncatedOperad> {
        if let Some(o) = self.out.operads.get(name) {
            return Ok(o.clone());
        }
        let def = self.ws.operads.get(name).ok_or_else(|| schema_err(path.to_string(), format!("unknown operad \"{name}\"")))?;
        if !self.in_progress.insert(name.to_string()) {
            return Err(schema_err(path.to_string(), format!("operad \"{name}\" refers to itself")));
        }
        let here = pointer(&["operads", name]);
        let o = self.build_operad(def, &here)?;
        self.in_progress.remove(name);
        self.out.operads.insert(name.to_string(), o.clone());
        Ok(o)
    }

    fn build_operad(&mut self, def: &OperadDef, here: &str) -> Result<TruncatedOperad> {
        let (g, colors) = self.gset(&def.colors, &format!("{here}/colors"))?;
        let n = def.arity_bound.unwrap_or(self.ws.bounds.arity);
        let space = at(here, SigSpace::new(&g, &colors, n))?;
        let cpath = format!("{here}/construction");
        match &def.construction {
            Construction::Initial => initial_operad(&space),
            Construction::Terminal => terminal_operad(&space),
            Construction::Associative => associative_operad(&space),
            Construction::Monoid { support, monoid, with_orders } => {
                let seeds = support
                    .iter()
                    .enumerate()
                    .map(|(i, w)| {
                        let p = format!("{cpath}/support/{i}");
                        let s = signature(&colors, w, &p)?;
                        at(&p, space.check(&s))?;
                        Ok(s)
                    })
                    .collect::<Result<Vec<_>>>()?;
                let m = at(&format!("{cpath}/monoid"), ActedMonoid::new(&g, monoid.add.clone(), monoid.act.clone(), monoid.zero))?;
                let spec = MonoidOperadSpec { support: close_support(&space, &seeds), space, monoid: m, with_orders: *with_orders };
                at(&cpath, monoid_operad(&spec))
            }
            Construction::Free { generators, vertex_bound } => {
                let x = generator_seq(&space, generators, &format!("{cpath}/generators"))?;
                Ok(free_operad(&x, vertex_bound.unwrap_or(self.ws.bounds.vertices))?.operad)
            }
            Construction::Pullback { of, map } => {
                let p = self.operad(of, &format!("{cpath}/of"))?;
                let mut phi = vec![usize::MAX; colors.size()];
                for (src, tgt) in map {
                    let mp = format!("{cpath}/map/{}", escape(src));
                    let a = color_index(&colors, src).ok_or_else(|| schema_err(mp.clone(), format!("unknown color \"{src}\"")))?;
                    phi[a] = color_index(p.colors(), tgt).ok_or_else(|| schema_err(mp, format!("unknown color \"{tgt}\"")))?;
                }
                if let Some(a) = phi.iter().position(|&c| c == usize::MAX) {
                    return Err(schema_err(format!("{cpath}/map"), format!("color \"{}\" is not mapped", colors.label(a))));
                }
                at(&cpath, pullback_operad(&space, &phi, &p))
            }
        }
    }

    fn map(&mut self, name: &str, def: &MapDef) -> Result<Arrow> {
        let here = pointer(&["maps", name]);
        let src = self.operad(&def.source, &format!("{here}/source"))?;
        let tgt = self.operad(&def.target, &format!("{here}/target"))?;
        let (sc, tc) = (src.colors(), tgt.colors());
        let mut phi = vec![usize::MAX; sc.size()];
        match &def.colors {
            Some(m) => {
                for (a, b) in m {
                    let mp = format!("{here}/colors/{}", escape(a));
                    let x = color_index(sc, a).ok_or_else(|| schema_err(mp.clone(), format!("unknown color \"{a}\"")))?;
                    phi[x] = color_index(tc, b).ok_or_else(|| schema_err(mp, format!("unknown color \"{b}\"")))?;
                }
            }
            None => {
                for (x, slot) in phi.iter_mut().enumerate() {
                    *slot = color_index(tc, &sc.label(x)).unwrap_or(usize::MAX);
                }
            }
        }
        if let Some(a) = phi.iter().position(|&c| c == usize::MAX) {
            return Err(schema_err(format!("{here}/colors"), format!("color \"{}\" is not mapped", sc.label(a))));
        }
        let Some(levels) = &def.levels else {
            let mut found = operad_maps(&src, &tgt, &phi, self.ws.bounds.budget as u128)?;
            if found.len() != 1 {
                return Err(schema_err(format!("{here}/levels"), format!("{} maps along these colors; list the levels", found.len())));
            }
            return Ok(Arrow { src, tgt, map: found.pop().unwrap() });
        };
        let space = src.space();
        let mut given: Vec<(Signature, &[usize], String)> = Vec::new();
        for (i, l) in levels.iter().enumerate() {
            let p = format!("{here}/levels/{i}");
            let s = signature(sc, &l.signature, &format!("{p}/signature"))?;
            at(&p, space.check(&s))?;
            if l.values.len() != src.size_at(&s) {
                return Err(schema_err(format!("{p}/values"), format!("{} values for a level of size {}", l.values.len(), src.size_at(&s))));
            }
            let image = s.map_colors(&phi);
            if let Some(v) = l.values.iter().position(|&v| v >= tgt.size_at(&image)) {
                return Err(schema_err(format!("{p}/values/{v}"), "value outside the target level"));
            }
            given.push((s, &l.values, p));
        }
        let mut maps = BTreeMap::new();
        for (s, values, _) in &given {
            let rep = space.rep(s);
            if maps.contains_key(&rep) {
                continue;
            }
            let prod = space.product(s.arity());
            let u = prod.elements().find(|&u| &space.act(u, &rep) == s).expect("same orbit");
            let image = s.map_colors(&phi);
            let row = (0..src.size_at(&rep)).map(|x| tgt.transport(prod.inv(u), &image, values[src.transport(u, &rep, x)])).collect();
            maps.insert(rep, row);
        }
        for rep in src.levels().levels().keys() {
            if !maps.contains_key(rep) {
                return Err(schema_err(format!("{here}/levels"), format!("no values for {:?}", signature_labels(sc, rep))));
            }
        }
        let map = OperadMap { color_map: phi.clone(), levels: SymSeqMap { color_map: phi, maps } };
        let arrow = at(&here, Arrow::new(src, tgt, map))?;
        for (s, values, p) in &given {
            if let Some(x) = (0..values.len()).find(|&x| arrow.apply(s, x) != values[x]) {
                return Err(schema_err(format!("{p}/values/{x}"), "values are not equivariant"));
            }
        }
        Ok(arrow)
    }
}

/// Σ[G·C̄]/Λ summed over the generators.
pub fn generator_seq(space: &Arc<SigSpace>, generators: &[GeneratorDef], path: &str) -> Result<EqSymSeq> {
    let mut acc = EqSymSeq::empty(space.clone());
    for (i, gen) in generators.iter().enumerate() {
        let p = format!("{path}/{i}");
        let s = signature(space.colors(), &gen.signature, &format!("{p}/signature"))?;
        at(&p, space.check(&s))?;
        let prod = space.product(s.arity());
        let lambda = if gen.lambda.is_empty() { Subgroup::trivial(prod) } else { at(&format!("{p}/lambda"), Subgroup::from_members(prod, &gen.lambda))? };
        let q = at(&p, quotient(&representable(space, &s)?, &lambda))?;
        acc = if i == 0 { q.seq } else { coproduct_seq(&acc, &q.seq)? };
    }
    Ok(acc)
}

fn family(g: &FiniteGroup, def: &FamilyDef, here: &str) -> Result<GSigmaFamily> {
    let n = def.arity_bound;
    match (&def.constructor, &def.subgroups) {
        (Some(_), Some(_)) => Err(schema_err(here.to_string(), "give either a constructor or subgroups")),
        (None, None) => Err(schema_err(here.to_string(), "a family needs a constructor or subgroups")),
        (Some(c), None) => match c.as_str() {
            "all" => GSigmaFamily::all(g, n),
            "graph" => GSigmaFamily::graph(g, n),
            "generated" => {
                let products = (0..=n).map(|k| crate::grp::product_sigma_op(g, k)).collect::<Result<Vec<_>>>()?;
                let seeds = def
                    .seeds
                    .iter()
                    .enumerate()
                    .map(|(i, s)| {
                        let p = format!("{here}/seeds/{i}");
                        let prod = products.get(s.arity).ok_or_else(|| Error::BoundMismatch(format!("{p}: seed arity {} above bound {n}", s.arity)))?;
                        Ok((s.arity, at(&p, Subgroup::from_members(prod, &s.members))?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                GSigmaFamily::from_generators(g, n, &seeds)
            }
            other => Err(schema_err(format!("{here}/constructor"), format!("unknown constructor \"{other}\""))),
        },
        (None, Some(subs)) => {
            let mut per_arity = vec![Vec::new(); n + 1];
            for (key, list) in subs {
                let p = format!("{here}/subgroups/{}", escape(key));
                let k: usize = key.parse().map_err(|_| schema_err(p.clone(), "arity keys are integers"))?;
                if k > n {
                    return Err(Error::BoundMismatch(format!("{p}: arity {k} above bound {n}")));
                }
                let prod = crate::grp::product_sigma_op(g, k)?;
                for (j, members) in list.iter().enumerate() {
                    per_arity[k].push(at(&format!("{p}/{j}"), Subgroup::from_members(&prod, members))?);
                }
            }
            at(&format!("{here}/subgroups"), GSigmaFamily::from_members(g, n, per_arity))
        }
    }
}

fn category(def: &CategoryDef, here: &str) -> Result<FinCategory> {
    let table: BTreeMap<(usize, usize), usize> = def.compose.iter().map(|&[g, f, h]| ((g, f), h)).collect();
    let arrows: Vec<(usize, usize)> = def.arrows.iter().map(|&[s, t]| (s, t)).collect();
    for (f, &(_, t)) in arrows.iter().enumerate() {
        for (g, &(s, _)) in arrows.iter().enumerate() {
            if s == t && !table.contains_key(&(g, f)) {
                return Err(schema_err(format!("{here}/compose"), format!("missing composite of {g} and {f}")));
            }
        }
    }
    at(here, FinCategory::new(def.objects, arrows, def.identities.clone(), |g, f| table[&(g, f)]))
}

/// Builds everything; errors carry JSON pointers into the workspace.
pub fn resolve(ws: &Workspace) -> Result<Resolved> {
    let mut r = Resolver { ws, out: Resolved { bounds: Some(ws.bounds.clone()), ..Default::default() }, in_progress: BTreeSet::new() };
    for (name, def) in &ws.groups {
        let here = pointer(&["groups", name]);
        if def.mul.len() != def.order {
            return Err(schema_err(format!("{here}/mul"), format!("{} rows for order {}", def.mul.len(), def.order)));
        }
        let g = at(&here, FiniteGroup::from_table(def.mul.clone(), def.labels.clone()))?;
        r.out.groups.insert(name.clone(), g);
    }
    for (name, def) in &ws.gsets {
        let here = pointer(&["gsets", name]);
        let g = r.group(&def.group, &format!("{here}/group"))?;
        let x = at(&here, GSet::from_table(&g, def.action.clone(), def.labels.clone()))?;
        r.out.gsets.insert(name.clone(), (def.group.clone(), x));
    }
    for (name, def) in &ws.families {
        let here = pointer(&["families", name]);
        let g = r.group(&def.group, &format!("{here}/group"))?;
        let f = family(&g, def, &here)?;
        r.out.families.insert(name.clone(), f);
    }
    for name in ws.operads.keys() {
        r.operad(name, &pointer(&["operads", name]))?;
    }
    for (name, def) in &ws.maps {
        let arrow = r.map(name, def)?;
        r.out.maps.insert(name.clone(), arrow);
    }
    for (name, def) in &ws.categories {
        let c = category(def, &pointer(&["categories", name]))?;
        r.out.categories.insert(name.clone(), c);
    }
    Ok(r.out)
}
