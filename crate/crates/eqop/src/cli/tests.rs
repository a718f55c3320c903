use std::path::PathBuf;

use super::workspace::*;
use super::*;
use crate::fixtures::{eta_pair_to_interval, eta_to_interval, quartic_colors, quartic_corolla};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn cli(args: &[&str]) -> Cli {
    Cli::try_parse_from(std::iter::once("eqop").chain(args.iter().copied())).unwrap()
}

#[test]
fn empty_workspace_round_trips() {
    let ws = Workspace::default();
    let text = to_canonical(&ws);
    let back = parse(&text).unwrap();
    assert_eq!(back, ws);
    assert_eq!(to_canonical(&back), text);
    let r = resolve(&back).unwrap();
    assert!(r.operads.is_empty() && r.maps.is_empty());
}

#[test]
fn canonical_form_is_a_fixed_point() {
    for name in ["interval.json", "quartic.json", "sign.json"] {
        let ws = load(&fixture(name)).unwrap();
        let once = to_canonical(&ws);
        let twice = to_canonical(&parse(&once).unwrap());
        assert_eq!(once, twice, "{name}");
        assert_eq!(parse(&once).unwrap(), ws);
    }
}

#[test]
fn canonical_keys_are_sorted() {
    let text = to_canonical(&load(&fixture("interval.json")).unwrap());
    let top: Vec<&str> = text.lines().filter(|l| l.starts_with("  \"")).map(|l| l.trim().split('"').nth(1).unwrap()).collect();
    let mut sorted = top.clone();
    sorted.sort_unstable();
    assert_eq!(top, sorted);
}

#[test]
fn quartic_workspace_matches_the_fixture() {
    let r = resolve(&load(&fixture("quartic.json")).unwrap()).unwrap();
    let (g, colors) = quartic_colors();
    assert_eq!(r.groups["z4"], g);
    assert_eq!(r.gsets["quartic"].1, colors);
    let o = &r.operads["corolla"];
    assert_eq!(o.size_at(&quartic_corolla()), 4);
    assert_eq!(o.levels().total_size(), 6);
}

#[test]
fn schema_errors_carry_pointers() {
    let cases = [
        (r#"{"schema":"eqop/1","groups":{"g":{"order":1,"mul":[["x"]]}}}"#, "/groups/g/mul/0/0"),
        (r#"{"schema":"eqop/1","groups":{"g":{"order":1,"mul":[[0]],"colour":1}}}"#, "/groups/g/colour"),
        (r#"{"schema":"eqop/0"}"#, "/schema"),
        (r#"{"schema":"eqop/1","gsets":{"x":{"group":"h","action":[[0]]}}}"#, "/gsets/x/group"),
        (r#"{"schema":"eqop/1","groups":{"g":{"order":2,"mul":[[0,1],[1,0]]}},"gsets":{"x":{"group":"g","action":[[1,0],[0,1]]}}}"#, "/gsets/x"),
    ];
    for (text, path) in cases {
        let err = parse(text).and_then(|ws| resolve(&ws).map(|_| ()));
        match err {
            Err(Error::Schema { path: p, .. }) => assert_eq!(p, path, "{text}"),
            other => panic!("{text}: {other:?}"),
        }
    }
}

#[test]
fn map_levels_errors_point_at_values() {
    let mut ws = load(&fixture("interval.json")).unwrap();
    ws.maps.get_mut("eta_to_interval").unwrap().levels = Some(vec![LevelDef { signature: vec!["0".into(), "0".into()], values: vec![3] }]);
    match resolve(&ws) {
        Err(Error::Schema { path, .. }) => assert_eq!(path, "/maps/eta_to_interval/levels/0/values/0"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn explicit_levels_agree_with_the_search() {
    let mut ws = load(&fixture("interval.json")).unwrap();
    let searched = resolve(&ws).unwrap().maps["eta_to_interval"].clone();
    ws.maps.get_mut("eta_to_interval").unwrap().levels = Some(vec![LevelDef { signature: vec!["0".into(), "0".into()], values: vec![0] }]);
    let explicit = resolve(&ws).unwrap().maps["eta_to_interval"].clone();
    assert_eq!(searched.map, explicit.map);
}

#[test]
fn pointers_escape_segments() {
    assert_eq!(pointer(&["maps", "a/b~c"]), "/maps/a~1b~0c");
}

#[test]
fn verdicts_match_library_calls() {
    let path = fixture("interval.json");
    for (map, arrow) in [("eta_pair_to_interval", eta_pair_to_interval(2).unwrap()), ("eta_to_interval", eta_to_interval(2).unwrap())] {
        let p = path.to_str().unwrap();
        let report = run(&cli(&["classify", "--operad-map", p, "--map", map, "--family", "all"])).unwrap();
        let fam = GSigmaFamily::all(&FiniteGroup::trivial(), 2).unwrap();
        let c = classify(&arrow, &fam).unwrap();
        assert_eq!(report.json["verdicts"]["we"], c.we);
        assert_eq!(report.json["verdicts"]["fib"], c.fib);
        assert_eq!(report.json["verdicts"]["trivfib"], c.trivfib);
    }
}

#[test]
fn golden_interval_verdicts() {
    let p = fixture("interval.json");
    let p = p.to_str().unwrap();
    let pair = run(&cli(&["classify", "-w", p, "--map", "eta_pair_to_interval"])).unwrap();
    assert_eq!(pair.json["verdicts"], json!({"we": false, "fib": false, "trivfib": false}));
    let single = run(&cli(&["classify", "-w", p, "--map", "eta_to_interval"])).unwrap();
    assert_eq!(single.json["verdicts"], json!({"we": true, "fib": false, "trivfib": false}));
}

#[test]
fn overrides_reach_the_workspace() {
    let o = cli(&["--bound-arity", "3", "--bound-vertices", "4", "--budget", "9", "--seed", "5", "validate", "x.json"]).global;
    let ws = load_with(&fixture("quartic.json"), &o).unwrap();
    assert_eq!((ws.bounds.arity, ws.bounds.vertices, ws.bounds.budget, ws.seed), (3, 4, 9, 5));
    assert!(ws.operads.values().all(|d| d.arity_bound.is_none()));
}

#[test]
fn error_kinds_map_to_exit_codes() {
    assert_eq!(exit_code(&Error::Schema { path: String::new(), msg: String::new() }), 2);
    assert_eq!(exit_code(&Error::BoundMismatch(String::new())), 3);
    assert_eq!(exit_code(&Error::Bound(String::new())), 3);
    assert_eq!(exit_code(&Error::Budget { needed: 2, budget: 1 }), 4);
}

#[test]
fn family_specs_resolve() {
    let r = resolve(&load(&fixture("sign.json")).unwrap()).unwrap();
    let g = r.groups["z2"].clone();
    assert_eq!(family_spec("graph", &r, &g, 1).unwrap(), r.families["graph"]);
    assert_eq!(family_spec("all", &r, &g, 1).unwrap(), GSigmaFamily::all(&g, 1).unwrap());
    let file = format!("{}#deficient", fixture("sign.json").display());
    assert!(!family_spec(&file, &Resolved::default(), &g, 1).unwrap().has_enough_units().0);
    assert!(family_spec("all", &r, &FiniteGroup::trivial(), 1).is_ok());
    assert!(family_spec("graph", &r, &FiniteGroup::trivial(), 1).is_err());
}

#[test]
fn group_specs_resolve() {
    assert_eq!(group_spec("trivial").unwrap().order(), 1);
    assert_eq!(group_spec("z4").unwrap().order(), 4);
    let file = format!("{}#z4", fixture("quartic.json").display());
    assert_eq!(group_spec(&file).unwrap(), FiniteGroup::quartic_roots());
}

#[test]
fn subgroup_specs_accept_labels() {
    let g = FiniteGroup::quartic_roots();
    assert_eq!(subgroup_spec("-1", &g).unwrap().members(), &[0, 2]);
    assert_eq!(subgroup_spec("all", &g).unwrap().order(), 4);
    assert!(subgroup_spec("i,q", &g).is_err());
}
