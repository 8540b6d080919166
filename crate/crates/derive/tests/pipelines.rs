use qhj_derive::*;
use qhj_opalg::{parse_cnumber, HamiltonianSpec};
use sha2::{Digest, Sha256};

fn run(name: &str) -> DerivationReport {
    let r = golden_check(name).expect("pipeline runs");
    assert!(r.pass, "{}", r.transcript());
    r
}

#[test]
fn nonrel_general_matches_all_goldens() {
    let r = run("nonrel-general");
    for step in ["c-number-qhj", "real-part", "imaginary-part", "identity-real-part", "classical-real-part"] {
        assert!(r.step(step).is_some_and(DerivationStep::matched), "{step}");
    }
    assert!(r.checks.iter().any(|c| c.name == "classical-limit" && c.passed));
}

#[test]
fn nonrel_bohm_matches_all_goldens() {
    let r = run("nonrel-bohm");
    for step in ["general-hj", "continuity", "qp-qk-form", "difference-from-reference"] {
        assert!(r.step(step).is_some_and(DerivationStep::matched), "{step}");
    }
    // The factor of two: the -hbar^2/(2m) prefactor belongs to QP+QK, not to half of it.
    let half = parse_cnumber("1/2*(QP + QK)").unwrap();
    let claimed = parse_cnumber("-hbar^2/(2*m)*d[R*d[R]/dq_i]/dq_i/R^2").unwrap();
    let qp = parse_cnumber("-hbar^2/(2*m)*d[R]/dq_i/dq_i/R").unwrap();
    let qk = parse_cnumber("-hbar^2/(2*m)*d[R]/dq_i*d[R]/dq_i/R^2").unwrap();
    let b = qhj_opalg::Bindings::new()
        .with(qhj_opalg::Binding { name: "QP".into(), params: vec![], body: qp })
        .with(qhj_opalg::Binding { name: "QK".into(), params: vec![], body: qk });
    let half = b.apply(&half).unwrap();
    assert!(!qhj_opalg::expr_equal(&half, &claimed));
    assert!(qhj_opalg::expr_equal(&(&half + &half), &claimed));
}

#[test]
fn relativistic_reduction_and_c_audit() {
    let r = run("relativistic");
    for step in ["c-number", "real-part", "imaginary-part", "kg-final", "kg-continuity", "mass-shell"] {
        assert!(r.step(step).is_some_and(DerivationStep::matched), "{step}");
    }
    assert!(!r.audits.is_empty());
    assert!(r.audits.iter().all(|a| !a.matched() && a.diff.is_some()));

    let c = r.c_identification.as_ref().expect("c audit present");
    let eq = |a: &str, b: &str| qhj_opalg::expr_equal(&parse_cnumber(a).unwrap(), &parse_cnumber(b).unwrap());
    assert!(eq(&c.solved, "-1/2*m0*c_light^2*R^2"), "{}", c.solved);
    assert!(eq(&c.solved_from_printed_real, "-1/4*m0*c_light^2*R^2"));
    assert!(eq(&c.printed, "-1/4*m0^2*c_light^2*R^2"));
    assert!(c.solved_is_local && c.solved_reproduces_kg_final);
    assert!(!c.printed_reproduces_kg_final);
    assert!(!c.printed_reproduces_kg_final_from_printed_real);
    assert!(!c.resolution.is_empty());
}

#[test]
fn unknown_pipeline_is_an_error() {
    assert!(matches!(golden_check("nosuch"), Err(DeriveError::UnknownPipeline(_))));
}

#[test]
fn reports_are_deterministic() {
    for p in PIPELINES {
        let a = golden_check(p).unwrap().to_json();
        let b = golden_check(p).unwrap().to_json();
        assert_eq!(a, b, "{p}");
        let v: serde_json::Value = serde_json::from_str(&a).unwrap();
        assert_eq!(v["pipeline"], p);
        assert_eq!(v["pass"], true);
    }
}

#[test]
fn golden_file_checksum() {
    let manifest = include_str!("../goldens/goldens.sha256");
    let want = manifest.split_whitespace().next().unwrap();
    let got: String = Sha256::digest(GOLDENS_TEXT.as_bytes()).iter().map(|b| format!("{b:02x}")).collect();
    assert_eq!(got, want);
}

#[test]
fn every_golden_parses() {
    let g = Goldens::embedded();
    let labels: Vec<&str> = g.labels().collect();
    assert!(labels.len() > 30);
    for l in labels {
        let ok = g.cnumber(l).is_ok() || g.operator(l).is_ok();
        assert!(ok, "{l}");
    }
    assert!(matches!(g.text("no.such"), Err(DeriveError::MissingGolden(_))));
}

#[test]
fn malformed_golden_lines_are_rejected() {
    assert!(matches!(Goldens::parse("no equals sign"), Err(DeriveError::GoldenFormat { line: 1, .. })));
    assert!(Goldens::parse("# only a comment\n\nx = a + b\n").is_ok());
}

#[test]
fn unsupported_spec_has_no_goldens() {
    let mut spec = HamiltonianSpec::nonrelativistic();
    spec.c = qhj_opalg::CoeffFn::Zero;
    assert!(matches!(derive_nonrel_general(&spec), Err(DeriveError::NoGoldens(_))));
}
