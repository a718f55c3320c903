use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::Serialize;

use super::gen::{hard_case_pair, random_arrow, random_composable_pair};
use super::{
    classify, generating_cells, is_dwyer_kan, is_isofibration_on_fixed, is_local_trivial_fibration, is_local_weak_equivalence, rlp, Arrow,
    Classification,
};
use crate::error::Result;
use crate::fam::GSigmaFamily;
use crate::grp::FiniteGroup;
use crate::oper::{coproduct_operad, OperadMap};
use crate::sym::SymSeqMap;

/// Anything that produces a classification; [`classify`] in normal use.
pub type Classifier<'a> = &'a dyn Fn(&Arrow, &GSigmaFamily) -> Result<Classification>;

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub group: FiniteGroup,
    pub family: GSigmaFamily,
    pub arity_bound: usize,
    pub max_colors: usize,
    pub budget: u128,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub passed: u64,
    pub failed: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub trials: usize,
    pub checks: BTreeMap<String, Tally>,
    /// Counts of observed events that are not asserted.
    pub observations: BTreeMap<String, u64>,
    pub counterexamples: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.values().all(|t| t.failed == 0)
    }

    pub fn violations(&self) -> u64 {
        self.checks.values().map(|t| t.failed).sum()
    }

    fn check(&mut self, name: &str, ok: bool, detail: impl FnOnce() -> String) {
        let t = self.checks.entry(name.to_string()).or_default();
        if ok {
            t.passed += 1;
        } else {
            t.failed += 1;
            self.counterexamples.push(format!("{name}: {}", detail()));
        }
    }

    fn observe(&mut self, name: &str) {
        *self.observations.entry(name.to_string()).or_default() += 1;
    }
}

fn trial_rng(seed: u64, trial: usize) -> SplitMix64 {
    SplitMix64::seed_from_u64(seed ^ (trial as u64 + 1).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

fn verdicts(c: &Classification) -> String {
    format!("we={} fib={} trivfib={} witnesses={:?}", c.we, c.fib, c.trivfib, c.witnesses.iter().map(|(k, w)| format!("{k}: {w}")).collect::<Vec<_>>())
}

/// f ⊔ f: O ⊔ O → P ⊔ P.
pub(crate) fn doubled(f: &Arrow) -> Result<Arrow> {
    let (src, _, _) = coproduct_operad(&f.src, &f.src)?;
    let (tgt, _, _) = coproduct_operad(&f.tgt, &f.tgt)?;
    let (ks, kt) = (f.src.colors().size(), f.tgt.colors().size());
    let color_map: Vec<usize> = f.color_map().iter().copied().chain(f.color_map().iter().map(|&c| c + kt)).collect();
    let shift: Vec<usize> = (ks..2 * ks).collect();
    let mut maps = BTreeMap::new();
    for (rep, row) in &f.map.levels.maps {
        maps.insert(rep.clone(), row.clone());
        maps.insert(rep.map_colors(&shift), row.clone());
    }
    Arrow::new(src, tgt, OperadMap { color_map: color_map.clone(), levels: SymSeqMap { color_map, maps } })
}

/// 2-out-of-3 for weak equivalences and for Dwyer-Kan equivalences on random
/// composable pairs; every fourth pair has target colors outside the image
/// that are isomorphic to image colors.
pub fn two_out_of_three_suite(seed: u64, trials: usize, cfg: &SuiteConfig) -> Result<SuiteReport> {
    two_out_of_three_suite_with(seed, trials, cfg, &classify)
}

pub fn two_out_of_three_suite_with(seed: u64, trials: usize, cfg: &SuiteConfig, classifier: Classifier) -> Result<SuiteReport> {
    let mut report = SuiteReport { trials, ..Default::default() };
    let fam = &cfg.family;
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let hard = trial % 4 == 3;
        let (f, g) = if hard {
            hard_case_pair(&mut rng, &cfg.group, cfg.arity_bound, cfg.max_colors, cfg.budget)?
        } else {
            random_composable_pair(&mut rng, &cfg.group, cfg.arity_bound, cfg.max_colors, cfg.budget)?
        };
        let gf = f.then(&g)?;
        let (cf, cg, cgf) = (classifier(&f, fam)?, classifier(&g, fam)?, classifier(&gf, fam)?);
        let we = [cf.we, cg.we, cgf.we];
        let dk = [is_dwyer_kan(&f, fam)?, is_dwyer_kan(&g, fam)?, is_dwyer_kan(&gf, fam)?];
        let describe = |flags: [bool; 3]| format!("trial {trial} (seed {seed}): F, G, GF flags {flags:?}; F {}; G {}; GF {}", verdicts(&cf), verdicts(&cg), verdicts(&cgf));
        report.check("two_out_of_three_we", we.iter().filter(|&&b| b).count() != 2, || describe(we));
        report.check("two_out_of_three_dwyer_kan", dk.iter().filter(|&&b| b).count() != 2, || describe(dk));
        if hard {
            report.observe("hard_cases");
            if g.tgt.colors().size() > 0 && f.color_map().len() < f.tgt.colors().size() {
                report.observe("hard_cases_with_colors_outside_the_image");
            }
            if cf.we && cgf.we {
                report.observe("hard_cases_with_f_and_gf_we");
            }
        }
        for (name, flags) in [("we", we), ("dwyer_kan", dk)] {
            let k = flags.iter().filter(|&&b| b).count();
            report.observe(&format!("{name}_true_count_{k}"));
        }
    }
    Ok(report)
}

/// Lifting ⇔ classification, weak equivalence = Dwyer-Kan, fibration =
/// isofibration, fiber versus global classes for color-fixed maps, and
/// retract closure, on random maps.
pub fn axiom_suite(seed: u64, trials: usize, cfg: &SuiteConfig) -> Result<SuiteReport> {
    axiom_suite_with(seed, trials, cfg, &classify)
}

pub fn axiom_suite_with(seed: u64, trials: usize, cfg: &SuiteConfig, classifier: Classifier) -> Result<SuiteReport> {
    let mut report = SuiteReport { trials, ..Default::default() };
    let fam = &cfg.family;
    let cells = generating_cells(fam, cfg.arity_bound)?;
    let (cof, tcof) = (cells.cofibrations(), cells.trivial_cofibrations());
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let f = random_arrow(&mut rng, &cfg.group, cfg.arity_bound, cfg.max_colors, cfg.budget)?;
        let c = classifier(&f, fam)?;
        let tag = |what: &str| format!("trial {trial} (seed {seed}): {what}; {}", verdicts(&c));
        let lifts_cof = rlp(&f, &cof, cfg.budget)?;
        report.check("trivfib_iff_rlp_c1_c2", lifts_cof.is_none() == c.trivfib, || tag(&format!("{lifts_cof:?}")));
        let lifts_tcof = rlp(&f, &tcof, cfg.budget)?;
        report.check("fib_iff_rlp_tc1", lifts_tcof.is_none() == c.fib, || tag(&format!("{lifts_tcof:?}")));
        report.check("we_iff_dwyer_kan", is_dwyer_kan(&f, fam)? == c.we, || tag("Dwyer-Kan differs"));
        report.check("fib_iff_isofibration", is_isofibration_on_fixed(&f, fam)? == c.fib, || tag("isofibration differs"));
        report.check("trivfib_iff_we_and_fib", c.trivfib == (c.we && c.fib), || tag("trivfib differs from we and fib"));
        if f.map.is_identity_on_colors() && f.src.colors() == f.tgt.colors() {
            report.observe("color_fixed_maps");
            let fiber_we = is_local_weak_equivalence(&f, fam)?.0;
            let fiber_trivfib = is_local_trivial_fibration(&f, fam)?.0;
            report.check("fiber_we_iff_we", fiber_we == c.we, || tag("fiber weak equivalence differs"));
            report.check("fiber_trivfib_iff_trivfib", fiber_trivfib == c.trivfib, || tag("fiber trivial fibration differs"));
            report.check("fib_implies_fiber_fib", !c.fib || c.local_fib, || tag("fibration but not a fiber fibration"));
            if !c.fib {
                report.observe("fiber_fib_but_not_fib");
            }
        }
        if rng.gen_bool(0.5) {
            let d = doubled(&f)?;
            let cd = classifier(&d, fam)?;
            let ok = (!cd.we || c.we) && (!cd.fib || c.fib) && (!cd.trivfib || c.trivfib);
            report.check("retract_closure", ok, || tag(&format!("f ⊔ f: {}", verdicts(&cd))));
        }
        for (name, v) in [("we", c.we), ("fib", c.fib), ("trivfib", c.trivfib)] {
            if v {
                report.observe(name);
            }
        }
    }
    Ok(report)
}
