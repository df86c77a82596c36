use affschubert::peterson::{self, Engine};
use affschubert::rootdata::{ParabolicType, TypeLabel};
use affschubert::table::TableFile;

fn parabolics(rank: usize) -> Vec<ParabolicType> {
    (0u32..(1 << rank))
        .map(|mask| {
            let labels: Vec<usize> = (0..rank)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| i + 1)
                .collect();
            ParabolicType::from_labels(rank, &labels).unwrap()
        })
        .collect()
}

#[test]
fn combinatorial_sweeps_up_to_length_six() {
    for (t, r) in [
        (TypeLabel::A, 1),
        (TypeLabel::A, 2),
        (TypeLabel::C, 2),
        (TypeLabel::G, 2),
    ] {
        let e = Engine::new(t, r).unwrap();
        for p in parabolics(r) {
            let qh = e.qh(&p).unwrap();
            let out = peterson::sweep_properties(e.group(), &qh, 6).unwrap();
            assert!(
                out.failures.is_empty(),
                "{t}{r} {p}: {:?}",
                &out.failures[..1]
            );
            assert!(out.condition_checked > 0 && out.dim_checked > 0);
        }
    }
}

#[test]
fn homomorphism_on_small_ranges() {
    for (t, r, len) in [
        (TypeLabel::A, 1, 5),
        (TypeLabel::A, 2, 3),
        (TypeLabel::B, 2, 3),
        (TypeLabel::A, 3, 3),
    ] {
        let e = Engine::new(t, r).unwrap();
        for p in parabolics(r) {
            let report = peterson::verify_homomorphism(&e, &p, len).unwrap();
            assert!(report.passed(), "{t}{r} {p}: {:?}", report.failures);
        }
    }
}

#[test]
fn tables_round_trip() {
    let e = Engine::new(TypeLabel::C, 2).unwrap();
    let els: Vec<_> = e
        .group()
        .enumerate_waf_minus(3)
        .unwrap()
        .into_iter()
        .map(|(x, _)| x)
        .collect();
    let gr = peterson::compute_gr_table(e.gr(), &els).unwrap();
    let file = TableFile::from_gr(e.group(), &gr, 3, false);
    let json = file.to_json();
    let back = TableFile::from_json(&json).unwrap();
    assert_eq!(back.to_json(), json);
    assert_eq!(back.to_gr(e.group()).unwrap(), gr);

    let p = ParabolicType::from_labels(2, &[1]).unwrap();
    let qh = peterson::compute_qh_table(&e.qh(&p).unwrap()).unwrap();
    let file = TableFile::from_qh(e.root_system(), &p, &qh, 3, false);
    let json = file.to_json();
    let back = TableFile::from_json(&json).unwrap();
    assert_eq!(back.to_json(), json);
    assert_eq!(back.to_qh(e.root_system()).unwrap(), qh);
    assert!(back.to_gr(e.group()).is_err());
}

#[test]
fn report_is_deterministic_apart_from_timing() {
    let e = Engine::new(TypeLabel::A, 2).unwrap();
    let p = ParabolicType::from_labels(2, &[2]).unwrap();
    let mut a = peterson::verify_homomorphism(&e, &p, 3).unwrap();
    let mut b = peterson::verify_homomorphism(&e, &p, 3).unwrap();
    a.timing.clear();
    b.timing.clear();
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
}
