mod common;

use std::path::PathBuf;

use argagree::format::{parse_scenario, Scenario, ScenarioDocument};
use argagree::synth::{gen_initial_vaas, GenConfig};
use argagree::{AgreementScenario, SemanticsKind};
use proptest::prelude::*;

fn scenario_files() -> Vec<PathBuf> {
    let dir: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "scenarios"].iter().collect();
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "apx"))
        .collect();
    files.sort();
    files
}

#[test]
fn shipped_scenarios_round_trip() {
    let files = scenario_files();
    assert!(files.len() >= 10);
    for path in files {
        let text = std::fs::read_to_string(&path).unwrap();
        let doc = parse_scenario(&text).unwrap();
        let again = parse_scenario(&doc.to_text()).unwrap();
        assert_eq!(doc, again, "{}", path.display());
        assert_eq!(doc.scenario().unwrap(), again.scenario().unwrap(), "{}", path.display());
    }
}

#[test]
fn generated_value_scenarios_round_trip() {
    for seed in 0..100u64 {
        let cfg = GenConfig::default().with_seed(seed);
        let s = gen_initial_vaas(&cfg, 1 + (seed % 10) as usize, SemanticsKind::Stage).unwrap();
        let doc = ScenarioDocument::from_value(&s);
        let parsed = parse_scenario(&doc.to_text()).unwrap();
        assert_eq!(parsed, doc, "seed {seed}");
        let Scenario::Value(back) = parsed.scenario().unwrap() else {
            panic!("seed {seed}: not a value scenario");
        };
        // agents without preferences after the last one with some are not expressible
        let mut prefs = s.vaf().prefs().to_vec();
        while prefs.len() > 1 && prefs.last().is_some_and(|p| p.is_empty()) {
            prefs.pop();
        }
        assert_eq!(back.vaf().prefs(), &prefs[..], "seed {seed}");
        assert_eq!(back.vaf().af(), s.vaf().af());
        assert_eq!(back.vaf().valuation(), s.vaf().valuation());
        assert_eq!((back.topic(), back.semantics()), (s.topic(), s.semantics()));
    }
}

proptest! {
    #[test]
    fn abstract_scenarios_round_trip(seed in any::<u64>(), n in 1usize..9, agents in 1usize..5) {
        let mut r = common::rng(seed);
        let af = common::random_af(&mut r, n, 0.3, true);
        let topic = common::random_subset(&mut r, &af);
        let sems = (0..agents).map(|_| common::random_semantics(&mut r)).collect();
        let scn = AgreementScenario::new(af.clone(), topic, sems).unwrap();
        let doc = ScenarioDocument::from_agreement(&scn);
        let parsed = parse_scenario(&doc.to_text()).unwrap();
        prop_assert_eq!(&parsed, &doc);
        prop_assert_eq!(parsed.scenario().unwrap(), Scenario::Abstract(scn));

        let plain = ScenarioDocument::from_framework(&af);
        prop_assert_eq!(parse_scenario(&plain.to_text()).unwrap().framework().unwrap(), af);
    }

    #[test]
    fn parsing_never_panics(text in "[a-z(),. %\n0-9_]{0,80}") {
        let _ = parse_scenario(&text).and_then(|d| d.scenario());
    }
}
