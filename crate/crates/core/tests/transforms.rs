use dga_core::automaton::{classify, Variant};
use dga_core::fixtures::{self, AUTOMATA};
use dga_core::graph::enumerate_graphs;
use dga_core::mso::compile_with_report;
use dga_core::transforms::{
    complement_ddga, dual, intersection, is_nonblocking, make_nonblocking, product, to_anf, trim, union, ProductMode, TransformReport,
};
use dga_core::{accepts, Alphabet, StateSet};
use proptest::prelude::*;

#[test]
fn nonblocking_normal_form_is_certified_and_trim_keeps_it() {
    for f in AUTOMATA {
        let a = (f.build)();
        let (nb, report) = make_nonblocking(&a).unwrap();
        assert!(is_nonblocking(&nb, 2).holds(), "{}", f.name);
        assert!(report.output_siz <= report.input_siz[0] + report.input_len[0]);
        let (t, _) = trim(&nb).unwrap();
        assert!(is_nonblocking(&t, 2).holds(), "trim of nonblocking {} blocks", f.name);
    }
}

#[test]
fn anf_output_alternates() {
    for f in AUTOMATA {
        let (anf, _) = to_anf(&(f.build)()).unwrap();
        assert!(anf.is_anf(), "{}", f.name);
    }
}

#[test]
fn ddga_closure_stays_deterministic() {
    let a = fixtures::a_occur();
    let c = complement_ddga(&a).unwrap();
    assert_eq!(classify(&c), Variant::Ddga);
    for g in enumerate_graphs(3, a.sigma(), a.gamma()) {
        assert_ne!(accepts(&a, &g).unwrap(), accepts(&c, &g).unwrap());
    }
    for mode in [ProductMode::And, ProductMode::Or] {
        let (p, r) = product(&a, &c, mode).unwrap();
        assert_eq!(classify(&p), Variant::Ddga);
        assert!(r.output_siz <= r.normalized_siz[0] * r.normalized_siz[1]);
        for g in enumerate_graphs(3, a.sigma(), a.gamma()) {
            assert_eq!(accepts(&p, &g).unwrap(), mode == ProductMode::Or, "{}", g.to_json_string());
        }
    }
    assert!(complement_ddga(&fixtures::a_3color()).is_err());
    assert!(product(&fixtures::a_max2(), &fixtures::a_3color(), ProductMode::And).is_err());
}

#[test]
fn ndga_product_matches_languages() {
    let (a1, a2) = (fixtures::a_3color(), fixtures::a_min3());
    for (mode, op) in [(ProductMode::And, (|x, y| x && y) as fn(bool, bool) -> bool), (ProductMode::Or, |x, y| x || y)] {
        let (p, _) = product(&a1, &a2, mode).unwrap();
        for g in enumerate_graphs(3, a1.sigma(), a1.gamma()) {
            assert_eq!(accepts(&p, &g).unwrap(), op(accepts(&a1, &g).unwrap(), accepts(&a2, &g).unwrap()));
        }
    }
}

#[test]
fn closure_rejects_mismatched_alphabets() {
    assert!(union(&fixtures::a_3color(), &fixtures::a_occur()).is_err());
    assert!(intersection(&fixtures::a_centric(), &fixtures::a_conn()).is_err());
}

/// Union and intersection add one initial level and one state per label.
/// Inside a compilation the labels carry variables, so the label count is
/// read off the fresh choice states and must be a multiple of the base alphabet.
fn check_report(r: &TransformReport, base_sigma: usize) {
    match r.construction.as_str() {
        "union" | "intersection" => {
            let sigma = r.fresh_states.values().filter(|role| role.starts_with("choice state of label")).count();
            assert!(sigma > 0 && sigma % base_sigma == 0, "{r:?}");
            assert_eq!(r.output_siz, r.normalized_siz[0] + r.normalized_siz[1] + sigma + 1, "{r:?}");
            assert_eq!(r.output_len, r.normalized_len[0].max(r.normalized_len[1]) + 1, "{r:?}");
        }
        "nonblocking" => assert!(r.output_siz <= r.input_siz[0] + r.input_len[0]),
        "anf" => assert!(r.output_siz < 2 * r.input_siz[0].max(1)),
        _ => {}
    }
    for s in &r.steps {
        check_report(s, base_sigma);
    }
}

#[test]
fn compiled_sentences_respect_every_step_bound() {
    let blank = Alphabet::blank();
    let ab = Alphabet::new(["a", "b"]).unwrap();
    let sentences = [
        ("exists x (lab[a](x)) & exists y (lab[b](y)) & forall z (exists w (w -> z) | lab[a](z))", &ab),
        ("forall X (exists x (x in X) | forall y (y -> y))", &blank),
        ("exists x, y (x -> y & !(x = y) & forall z (z -> x => z = y))", &blank),
    ];
    for (text, sigma) in sentences {
        let phi = dga_core::mso::parse(text).unwrap();
        let (a, report) = compile_with_report(&phi, sigma, &blank).unwrap();
        assert!(report.peak_siz >= a.siz());
        for step in &report.steps {
            if let Some(r) = &step.report {
                check_report(r, sigma.len());
            }
        }
        for g in enumerate_graphs(3, sigma, &blank) {
            assert_eq!(accepts(&a, &g).unwrap(), dga_core::mso::evaluate_sentence(&phi, &g).unwrap(), "{text}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn double_dual_keeps_acceptance(i: usize, bits: u64) {
        let a = (AUTOMATA[i % AUTOMATA.len()].build)();
        let dd = dual(&dual(&a));
        let perm: Vec<_> = a.permanent_states().iter().collect();
        let set: StateSet = perm.iter().enumerate().filter(|(k, _)| bits >> k & 1 == 1).map(|(_, &q)| q).collect();
        prop_assume!(!set.is_empty());
        prop_assert_eq!(a.accepting().contains(set.as_slice()), dd.accepting().contains(set.as_slice()));
        prop_assert_ne!(a.accepting().contains(set.as_slice()), dual(&a).accepting().contains(set.as_slice()));
    }
}
