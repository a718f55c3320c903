//! The `eqop` command line: argument parsing, dispatch and output.

pub mod workspace;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cat::{amalgamate_intervals, is_interval, is_isomorphic_categories, pi0_setenriched, walking_iso, FinCategory};
use crate::error::{Error, Result};
use crate::fam::GSigmaFamily;
use crate::grp::{FiniteGroup, Subgroup};
use crate::model::{
    attach_colors, attach_interval, axiom_suite, classify, generating_cells, is_dwyer_kan, is_isofibration_on_fixed, rlp, two_out_of_three_suite,
    Arrow, SuiteConfig,
};
use crate::oper::{fixed_operad, underlying_category, TruncatedOperad};
use workspace::{load, resolve, save, signature_labels, to_canonical, Construction, Resolved, Workspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Clone, Debug, Args)]
pub struct GlobalOpts {
    /// Arity bound N, overriding the workspace.
    #[arg(long, global = true)]
    pub bound_arity: Option<usize>,
    /// Vertex bound k for free operads, overriding the workspace.
    #[arg(long, global = true)]
    pub bound_vertices: Option<usize>,
    /// Search budget, overriding the workspace.
    #[arg(long, global = true, env = "EQOP_BUDGET")]
    pub budget: Option<u64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value = "table")]
    pub format: Format,
}

#[derive(Debug, Parser)]
#[command(name = "eqop", version, about = "Equivariant colored operads over finite sets")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build every object of a workspace and check the operad axioms.
    Validate {
        file: PathBuf,
        /// Print the canonical form.
        #[arg(long)]
        canonical: bool,
        /// Rewrite the file in canonical form.
        #[arg(long)]
        write: bool,
    },
    /// Verdict table for an operad map.
    Classify {
        #[arg(long, visible_alias = "workspace", short = 'w')]
        operad_map: PathBuf,
        #[arg(long)]
        map: Option<String>,
        /// A family of the workspace, `all`, `graph`, `trivial`, or FILE[#NAME].
        #[arg(long, default_value = "graph")]
        family: String,
    },
    /// Members, conjugacy classes and the enough-units check of a family.
    Family {
        /// `trivial`, `zN`, or FILE[#NAME].
        #[arg(long)]
        group: Option<String>,
        #[arg(long, default_value = "graph")]
        constructor: String,
        /// `ARITY:m1,m2,...` seeds for the generated constructor.
        #[arg(long = "generator")]
        generators: Vec<String>,
        #[arg(long, short = 'w')]
        workspace: Option<PathBuf>,
        #[arg(long)]
        name: Option<String>,
    },
    /// Level sizes of a free operad of the workspace.
    Free {
        #[arg(long, short = 'w')]
        workspace: PathBuf,
        #[arg(long)]
        operad: Option<String>,
    },
    /// The H-fixed operad j*O^H.
    Fixed {
        #[arg(long, short = 'w')]
        workspace: PathBuf,
        #[arg(long)]
        operad: Option<String>,
        /// Members of H, comma separated, or `all`; empty for the trivial subgroup.
        #[arg(long, default_value = "")]
        subgroup: String,
    },
    /// Right lifting against the generating cells.
    Lift {
        #[arg(long, short = 'w')]
        workspace: PathBuf,
        #[arg(long)]
        map: Option<String>,
        #[arg(long, default_value = "graph")]
        family: String,
    },
    /// π₀ of the underlying category of j*O^H.
    Pi0 {
        #[arg(long, short = 'w')]
        workspace: PathBuf,
        #[arg(long)]
        operad: Option<String>,
        #[arg(long, default_value = "")]
        subgroup: String,
    },
    /// Amalgamate intervals; without a workspace, copies of the walking isomorphism.
    Amalgamate {
        #[arg(long, short = 'w')]
        workspace: Option<PathBuf>,
        /// Category names of the workspace, in order.
        #[arg(long = "interval")]
        intervals: Vec<String>,
    },
    /// Attach G/H·(η → 𝟙̃) at a color, or only the colors G/H.
    Attach {
        #[arg(long, short = 'w')]
        workspace: PathBuf,
        #[arg(long)]
        operad: Option<String>,
        #[arg(long, default_value = "")]
        subgroup: String,
        #[arg(long)]
        color: Option<String>,
        #[arg(long)]
        colors_only: bool,
        #[arg(long, default_value = "graph")]
        family: String,
    },
    /// Seeded property suites; exits 1 on any violation.
    Suite {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value = "z2")]
        group: String,
        #[arg(long, default_value = "graph")]
        family: String,
        #[arg(long, value_enum, default_value = "both")]
        kind: SuiteKind,
        #[arg(long, default_value_t = 3)]
        max_colors: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SuiteKind {
    TwoOutOfThree,
    Axioms,
    Both,
}

/// What a command prints, and whether it found a violation.
#[derive(Clone, Debug)]
pub struct Report {
    pub json: Value,
    pub table: String,
    pub violation: bool,
}

pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_SCHEMA: i32 = 2;
pub const EXIT_BOUND: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;
pub const EXIT_OTHER: i32 = 5;
pub const EXIT_USAGE: i32 = 64;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Schema { .. } => EXIT_SCHEMA,
        Error::Bound(_) | Error::BoundMismatch(_) => EXIT_BOUND,
        Error::Budget { .. } => EXIT_BUDGET,
        Error::Invalid(_) | Error::Unsupported(_) => EXIT_OTHER,
    }
}

/// Parses, runs and prints; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    match run(&cli) {
        Ok(report) => {
            match cli.global.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&report.json).unwrap()),
                Format::Table => print!("{}", report.table),
            }
            if report.violation {
                EXIT_VIOLATION
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn load_with(path: &Path, opts: &GlobalOpts) -> Result<Workspace> {
    let mut ws = load(path)?;
    if let Some(n) = opts.bound_arity {
        ws.bounds.arity = n;
        ws.operads.values_mut().for_each(|o| o.arity_bound = None);
    }
    if let Some(k) = opts.bound_vertices {
        ws.bounds.vertices = k;
        for o in ws.operads.values_mut() {
            if let Construction::Free { vertex_bound, .. } = &mut o.construction {
                *vertex_bound = None;
            }
        }
    }
    if let Some(b) = opts.budget {
        ws.bounds.budget = b;
    }
    if let Some(s) = opts.seed {
        ws.seed = s;
    }
    Ok(ws)
}

fn pick<'a, T>(items: &'a BTreeMap<String, T>, name: Option<&str>, kind: &str) -> Result<(&'a str, &'a T)> {
    let not_found = |msg: String| Error::Schema { path: format!("/{kind}s"), msg };
    match name {
        Some(n) => items.get_key_value(n).map(|(k, v)| (k.as_str(), v)).ok_or_else(|| not_found(format!("no {kind} named \"{n}\""))),
        None if items.len() == 1 => {
            let (k, v) = items.iter().next().unwrap();
            Ok((k.as_str(), v))
        }
        None => Err(not_found(format!("{} {kind}s; choose one by name", items.len()))),
    }
}

fn split_ref(spec: &str) -> (&str, Option<&str>) {
    match spec.split_once('#') {
        Some((p, n)) => (p, Some(n)),
        None => (spec, None),
    }
}

/// `trivial`, `zN`/`cN`, or a group of a workspace file.
pub fn group_spec(spec: &str) -> Result<FiniteGroup> {
    if spec == "trivial" || spec == "1" {
        return Ok(FiniteGroup::trivial());
    }
    if let Some(n) = spec.strip_prefix('z').or_else(|| spec.strip_prefix('c')).and_then(|n| n.parse::<usize>().ok()) {
        return FiniteGroup::cyclic(n);
    }
    let (path, name) = split_ref(spec);
    let r = resolve(&load(Path::new(path))?)?;
    Ok(pick(&r.groups, name, "group")?.1.clone())
}

/// A family of `r`, `all`, `graph`, `trivial`, or a family of a workspace file.
pub fn family_spec(spec: &str, r: &Resolved, g: &FiniteGroup, n: usize) -> Result<GSigmaFamily> {
    let n = n.max(1);
    let fam = match (r.families.get(spec), spec) {
        (Some(f), _) => f.clone(),
        (None, "all") => return GSigmaFamily::all(g, n),
        (None, "graph") => return GSigmaFamily::graph(g, n),
        (None, "trivial") => return GSigmaFamily::from_generators(g, n, &[]),
        (None, _) => {
            let (path, name) = split_ref(spec);
            let other = resolve(&load(Path::new(path))?)?;
            pick(&other.families, name, "family")?.1.clone()
        }
    };
    if fam.group() != g {
        return Err(Error::Schema { path: "/families".into(), msg: "family over a different group".into() });
    }
    Ok(fam)
}

fn subgroup_spec(spec: &str, g: &FiniteGroup) -> Result<Subgroup> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Ok(Subgroup::trivial(g));
    }
    if spec == "all" {
        return Ok(Subgroup::whole(g));
    }
    let members = spec
        .split(',')
        .map(|m| {
            let m = m.trim();
            m.parse::<usize>().ok().or_else(|| g.labels().and_then(|l| l.iter().position(|x| x == m)))
        })
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Invalid(format!("cannot read subgroup \"{spec}\"")))?;
    let mut members = members;
    if !members.contains(&g.identity()) {
        members.push(g.identity());
    }
    Subgroup::from_members(g, &members)
}

fn classification_json(f: &Arrow, fam: &GSigmaFamily) -> Result<(Value, String)> {
    let c = classify(f, fam)?;
    let dk = is_dwyer_kan(f, fam)?;
    let iso = is_isofibration_on_fixed(f, fam)?;
    let flags = [
        ("local_we", c.local_we),
        ("local_fib", c.local_fib),
        ("local_trivfib", c.local_trivfib),
        ("ess_surj", c.ess_surj),
        ("path_lifting", c.path_lifting),
        ("pi0_ess_surj", c.pi0_ess_surj),
        ("surjective_on_fixed_colors", c.surjective_on_fixed_colors),
        ("dwyer_kan", dk),
        ("isofibration", iso),
    ];
    let verdicts = [("we", c.we), ("fib", c.fib), ("trivfib", c.trivfib)];
    let witnesses: BTreeMap<String, String> = c.witnesses.iter().map(|(k, w)| (k.clone(), w.to_string())).collect();
    let json = json!({
        "flags": flags.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>(),
        "verdicts": verdicts.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>(),
        "witnesses": witnesses,
    });
    let mut table = String::new();
    for (k, v) in verdicts.iter().chain(flags.iter()) {
        let _ = writeln!(table, "{k:<28}{v}");
    }
    for (k, w) in &witnesses {
        let _ = writeln!(table, "witness {k}: {w}");
    }
    Ok((json, table))
}

fn levels_json(o: &TruncatedOperad) -> (Value, String) {
    let colors = o.colors();
    let mut rows = Vec::new();
    let mut table = String::new();
    for (rep, lvl) in o.levels().levels() {
        if lvl.size == 0 {
            continue;
        }
        let wire = signature_labels(colors, rep);
        let _ = writeln!(table, "{:<32}{}", format!("({})", display_sig(&wire)), lvl.size);
        rows.push(json!({"signature": wire, "size": lvl.size}));
    }
    let total = o.levels().total_size();
    let _ = writeln!(table, "{:<32}{total}", "total");
    (json!({"levels": rows, "total": total}), table)
}

fn display_sig(wire: &[String]) -> String {
    let (root, leaves) = wire.split_last().unwrap();
    format!("{};{root}", leaves.join(","))
}

fn operad<'a>(r: &'a Resolved, name: Option<&str>) -> Result<(&'a str, &'a TruncatedOperad)> {
    pick(&r.operads, name, "operad")
}

fn cmd_validate(file: &Path, canonical: bool, write: bool, opts: &GlobalOpts) -> Result<Report> {
    let ws = load_with(file, opts)?;
    let r = resolve(&ws)?;
    let mut violation = false;
    let mut table = String::new();
    let mut operads = serde_json::Map::new();
    for (name, o) in &r.operads {
        let v = o.validate();
        violation |= !v.is_valid();
        let _ = writeln!(table, "operad {name}: {} checks, {} violations", v.checks, v.violations.len());
        for bad in &v.violations {
            let _ = writeln!(table, "  {}: {}", bad.law, bad.detail);
        }
        operads.insert(name.clone(), json!({"checks": v.checks, "violations": v.violations.iter().map(|b| format!("{}: {}", b.law, b.detail)).collect::<Vec<_>>()}));
    }
    for name in r.maps.keys() {
        let _ = writeln!(table, "map {name}: valid");
    }
    let counts = json!({
        "groups": r.groups.len(), "gsets": r.gsets.len(), "families": r.families.len(),
        "operads": r.operads.len(), "maps": r.maps.len(), "categories": r.categories.len(),
    });
    if write {
        save(&load(file)?, file)?;
    }
    if canonical {
        table = to_canonical(&load(file)?);
    }
    Ok(Report { json: json!({"counts": counts, "operads": operads, "valid": !violation}), table, violation })
}

fn cmd_classify(path: &Path, map: Option<&str>, family: &str, opts: &GlobalOpts) -> Result<Report> {
    let r = resolve(&load_with(path, opts)?)?;
    let (name, f) = pick(&r.maps, map, "map")?;
    let fam = family_spec(family, &r, f.src.group(), f.src.arity_bound())?;
    let (mut json, table) = classification_json(f, &fam)?;
    json["map"] = json!(name);
    Ok(Report { json, table: format!("map {name}\n{table}"), violation: false })
}

fn cmd_family(group: Option<&str>, constructor: &str, gens: &[String], ws: Option<&Path>, name: Option<&str>, opts: &GlobalOpts) -> Result<Report> {
    let fam = match ws {
        Some(p) => {
            let r = resolve(&load_with(p, opts)?)?;
            pick(&r.families, name, "family")?.1.clone()
        }
        None => {
            let g = group_spec(group.unwrap_or("z2"))?;
            let n = opts.bound_arity.unwrap_or(2);
            match constructor {
                "all" => GSigmaFamily::all(&g, n)?,
                "graph" => GSigmaFamily::graph(&g, n)?,
                "generated" => {
                    let seeds = gens
                        .iter()
                        .map(|s| {
                            let (k, m) = s.split_once(':').ok_or_else(|| Error::Invalid(format!("generator \"{s}\" is not ARITY:MEMBERS")))?;
                            let k: usize = k.parse().map_err(|_| Error::Invalid(format!("bad arity in \"{s}\"")))?;
                            if k > n {
                                return Err(Error::BoundMismatch(format!("generator arity {k} above bound {n}")));
                            }
                            let prod = crate::grp::product_sigma_op(&g, k)?;
                            Ok((k, subgroup_spec(m, &prod)?))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    GSigmaFamily::from_generators(&g, n, &seeds)?
                }
                other => return Err(Error::Invalid(format!("unknown constructor \"{other}\""))),
            }
        }
    };
    let mut arities = Vec::new();
    let mut table = String::new();
    let _ = writeln!(table, "{:<8}{:<10}{}", "arity", "members", "classes");
    for n in 0..=fam.arity_bound() {
        let members: Vec<Vec<usize>> = fam.members(n).iter().map(|s| s.members().to_vec()).collect();
        let classes = fam.class_representatives(n).len();
        let _ = writeln!(table, "{n:<8}{:<10}{classes}", members.len());
        arities.push(json!({"arity": n, "members": members, "classes": classes}));
    }
    let (ok, witness) = fam.has_enough_units();
    let _ = writeln!(table, "enough units: {ok}");
    let witness = witness.map(|(n, h)| {
        let _ = writeln!(table, "witness: arity {n}, subgroup {:?}", h.members());
        json!({"arity": n, "members": h.members()})
    });
    Ok(Report { json: json!({"arities": arities, "enough_units": ok, "witness": witness}), table, violation: false })
}

fn cmd_free(path: &Path, name: Option<&str>, opts: &GlobalOpts) -> Result<Report> {
    let ws = load_with(path, opts)?;
    let r = resolve(&ws)?;
    let (name, o) = operad(&r, name)?;
    let Construction::Free { vertex_bound, .. } = &ws.operads[name].construction else {
        return Err(Error::Invalid(format!("operad \"{name}\" is not free")));
    };
    let k = vertex_bound.unwrap_or(ws.bounds.vertices);
    let (mut json, table) = levels_json(o);
    json["operad"] = json!(name);
    json["vertex_bound"] = json!(k);
    Ok(Report { json, table: format!("free operad {name}, at most {k} vertices\n{table}"), violation: false })
}

fn cmd_fixed(path: &Path, name: Option<&str>, subgroup: &str, opts: &GlobalOpts) -> Result<Report> {
    let r = resolve(&load_with(path, opts)?)?;
    let (name, o) = operad(&r, name)?;
    let h = subgroup_spec(subgroup, o.group())?;
    let (fixed, colors) = fixed_operad(o, &h)?;
    let labels: Vec<String> = colors.iter().map(|&c| o.colors().label(c)).collect();
    let (mut json, table) = levels_json(&fixed);
    json["operad"] = json!(name);
    json["subgroup"] = json!(h.members());
    json["colors"] = json!(labels);
    Ok(Report { json, table: format!("fixed colors: {}\n{table}", labels.join(", ")), violation: false })
}

fn cmd_lift(path: &Path, map: Option<&str>, family: &str, opts: &GlobalOpts) -> Result<Report> {
    let ws = load_with(path, opts)?;
    let r = resolve(&ws)?;
    let (name, f) = pick(&r.maps, map, "map")?;
    let fam = family_spec(family, &r, f.src.group(), f.src.arity_bound())?;
    let cells = generating_cells(&fam, f.src.arity_bound())?;
    let budget = ws.bounds.budget as u128;
    let mut out = serde_json::Map::new();
    let mut table = format!("map {name}\n");
    for (label, set) in [("C1+C2", cells.cofibrations()), ("TC1", cells.trivial_cofibrations())] {
        let res = rlp(f, &set, budget)?;
        let _ = match &res {
            None => writeln!(table, "{label:<8}lifts against all {} cells", set.len()),
            Some(sq) => writeln!(table, "{label:<8}fails at {}: {}", sq.cell, sq.detail),
        };
        out.insert(
            label.to_string(),
            json!({"cells": set.len(), "holds": res.is_none(), "failure": res.map(|s| json!({"cell": s.cell, "detail": s.detail}))}),
        );
    }
    out.insert("map".into(), json!(name));
    Ok(Report { json: Value::Object(out), table, violation: false })
}

fn cmd_pi0(path: &Path, name: Option<&str>, subgroup: &str, opts: &GlobalOpts) -> Result<Report> {
    let r = resolve(&load_with(path, opts)?)?;
    let (name, o) = operad(&r, name)?;
    let h = subgroup_spec(subgroup, o.group())?;
    let (cat, index) = underlying_category(o, &h)?;
    let pi0 = pi0_setenriched(&cat);
    let labels: Vec<String> = index.fixed.iter().map(|&c| o.colors().label(c)).collect();
    let mut classes: Vec<Vec<String>> = Vec::new();
    let mut seen = vec![false; pi0.object_count()];
    for a in 0..pi0.object_count() {
        if seen[a] {
            continue;
        }
        let class: Vec<usize> = (0..pi0.object_count()).filter(|&b| pi0.isomorphic_objects(a, b)).collect();
        class.iter().for_each(|&b| seen[b] = true);
        classes.push(class.iter().map(|&b| labels[b].clone()).collect());
    }
    let mut table = format!("operad {name}, H = {:?}\n", h.members());
    let mut homs = Vec::new();
    for a in 0..pi0.object_count() {
        for b in 0..pi0.object_count() {
            let n = pi0.hom(a, b).len();
            if n > 0 {
                let _ = writeln!(table, "{} -> {}: {n}", labels[a], labels[b]);
                homs.push(json!({"source": labels[a], "target": labels[b], "arrows": n}));
            }
        }
    }
    let _ = writeln!(table, "isomorphism classes: {}", classes.iter().map(|c| format!("{{{}}}", c.join(", "))).collect::<Vec<_>>().join(" "));
    Ok(Report { json: json!({"operad": name, "objects": labels, "homs": homs, "iso_classes": classes}), table, violation: false })
}

fn cmd_amalgamate(ws: Option<&Path>, names: &[String], opts: &GlobalOpts) -> Result<Report> {
    let inputs: Vec<FinCategory> = match ws {
        Some(p) => {
            let r = resolve(&load_with(p, opts)?)?;
            let names: Vec<String> = if names.is_empty() { r.categories.keys().cloned().collect() } else { names.to_vec() };
            names.iter().map(|n| pick(&r.categories, Some(n), "categorie").map(|(_, c)| c.clone())).collect::<Result<_>>()?
        }
        None => vec![walking_iso(); names.len().max(2)],
    };
    if inputs.len() < 2 {
        return Err(Error::Invalid("amalgamation needs at least two intervals".into()));
    }
    let mut acc = inputs[0].clone();
    for c in &inputs[1..] {
        acc = amalgamate_intervals(&acc, c)?;
    }
    let interval = is_interval(&acc);
    let mut json = json!({"inputs": inputs.len(), "objects": acc.object_count(), "arrows": acc.arrow_count(), "interval": interval});
    let mut table = format!("{} intervals amalgamated: {} objects, {} arrows, interval: {interval}\n", inputs.len(), acc.object_count(), acc.arrow_count());
    if inputs.len() == 3 {
        let right = amalgamate_intervals(&inputs[0], &amalgamate_intervals(&inputs[1], &inputs[2])?)?;
        let assoc = is_isomorphic_categories(&acc, &right);
        json["associative"] = json!(assoc);
        let _ = writeln!(table, "associative up to isomorphism: {assoc}");
    }
    Ok(Report { json, table, violation: !interval })
}

#[allow(clippy::too_many_arguments)]
fn cmd_attach(path: &Path, name: Option<&str>, subgroup: &str, color: Option<&str>, colors_only: bool, family: &str, opts: &GlobalOpts) -> Result<Report> {
    let r = resolve(&load_with(path, opts)?)?;
    let (name, o) = operad(&r, name)?;
    let h = subgroup_spec(subgroup, o.group())?;
    let (f, base) = if colors_only {
        (attach_colors(o, &h)?, None)
    } else {
        let label = color.ok_or_else(|| Error::Invalid("--color is required unless --colors-only".into()))?;
        let a = workspace::color_index(o.colors(), label).ok_or_else(|| Error::Invalid(format!("unknown color \"{label}\"")))?;
        let att = attach_interval(o, &h, a)?;
        let base = att.base;
        (att.total, Some(base))
    };
    let fam = family_spec(family, &r, o.group(), o.arity_bound())?;
    let (mut json, table) = classification_json(&f, &fam)?;
    let new_colors: Vec<usize> = (o.colors().size()..f.tgt.colors().size()).collect();
    json["operad"] = json!(name);
    json["new_colors"] = json!(new_colors);
    json["base"] = json!(base);
    let head = format!("{name} with {} new colors (indices {new_colors:?})\n", new_colors.len());
    Ok(Report { json, table: head + &table, violation: false })
}

fn cmd_suite(trials: usize, group: &str, family: &str, kind: SuiteKind, max_colors: usize, opts: &GlobalOpts) -> Result<Report> {
    let g = group_spec(group)?;
    let n = opts.bound_arity.unwrap_or(2);
    let fam = family_spec(family, &Resolved::default(), &g, n)?;
    let seed = opts.seed.unwrap_or(0);
    let cfg = SuiteConfig { group: g, family: fam, arity_bound: n, max_colors, budget: opts.budget.unwrap_or(1 << 20) as u128 };
    let mut out = serde_json::Map::new();
    let mut table = String::new();
    let mut violation = false;
    let runs: Vec<(&str, crate::model::SuiteReport)> = match kind {
        SuiteKind::TwoOutOfThree => vec![("two_out_of_three", two_out_of_three_suite(seed, trials, &cfg)?)],
        SuiteKind::Axioms => vec![("axioms", axiom_suite(seed, trials, &cfg)?)],
        SuiteKind::Both => vec![("two_out_of_three", two_out_of_three_suite(seed, trials, &cfg)?), ("axioms", axiom_suite(seed, trials, &cfg)?)],
    };
    for (label, rep) in runs {
        violation |= !rep.passed();
        let _ = writeln!(table, "{label} ({} trials)", rep.trials);
        for (check, t) in &rep.checks {
            let _ = writeln!(table, "  {check:<32}{:>6} passed {:>4} failed", t.passed, t.failed);
        }
        for c in &rep.counterexamples {
            let _ = writeln!(table, "  counterexample: {c}");
        }
        out.insert(label.to_string(), serde_json::to_value(&rep).unwrap());
    }
    out.insert("seed".into(), json!(seed));
    out.insert("passed".into(), json!(!violation));
    Ok(Report { json: Value::Object(out), table, violation })
}

pub fn run(cli: &Cli) -> Result<Report> {
    let o = &cli.global;
    match &cli.command {
        Command::Validate { file, canonical, write } => cmd_validate(file, *canonical, *write, o),
        Command::Classify { operad_map, map, family } => cmd_classify(operad_map, map.as_deref(), family, o),
        Command::Family { group, constructor, generators, workspace, name } => {
            cmd_family(group.as_deref(), constructor, generators, workspace.as_deref(), name.as_deref(), o)
        }
        Command::Free { workspace, operad } => cmd_free(workspace, operad.as_deref(), o),
        Command::Fixed { workspace, operad, subgroup } => cmd_fixed(workspace, operad.as_deref(), subgroup, o),
        Command::Lift { workspace, map, family } => cmd_lift(workspace, map.as_deref(), family, o),
        Command::Pi0 { workspace, operad, subgroup } => cmd_pi0(workspace, operad.as_deref(), subgroup, o),
        Command::Amalgamate { workspace, intervals } => cmd_amalgamate(workspace.as_deref(), intervals, o),
        Command::Attach { workspace, operad, subgroup, color, colors_only, family } => {
            cmd_attach(workspace, operad.as_deref(), subgroup, color.as_deref(), *colors_only, family, o)
        }
        Command::Suite { trials, group, family, kind, max_colors } => cmd_suite(*trials, group, family, *kind, *max_colors, o),
    }
}

#[cfg(test)]
mod tests;
