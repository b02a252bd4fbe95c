use galois_patch::forge::{build, build_with, default_points, reconstruct_entries, CheckStatus};
use galois_patch::rootdata::RootDatum;
use galois_patch::seed::{make_f, Family};
use galois_patch::tower::{reconstruct_scheduled, PointSet};
use galois_patch::wire::{bundle_to_file, to_json_string};
use galois_patch::{Error, Rat, TMatrix, TSeries};

fn a1() -> RootDatum {
    RootDatum::from_label("A1").unwrap()
}

#[test]
fn builds_are_deterministic_across_thread_counts() {
    let rd = a1();
    let ps = default_points(&rd);
    let one = to_json_string(&bundle_to_file(&build(&rd, &ps, 8).unwrap()));
    let pool = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
    let three = pool.install(|| to_json_string(&bundle_to_file(&build(&rd, &ps, 8).unwrap())));
    assert_eq!(one, three);
}

#[test]
fn point_order_and_values_are_free() {
    let rd = a1();
    let ps = PointSet::new(vec![Rat::new(1, 2), Rat::int(-3), Rat::new(7, 3), Rat::int(5)]).unwrap();
    let b = build(&rd, &ps, 8).unwrap();
    assert!(b.report.overall_pass, "{:?}", b.report.failed());
}

#[test]
fn repeated_points_rejected_before_work() {
    let pts = vec![Rat::int(0), Rat::int(1), Rat::int(1), Rat::int(2)];
    assert!(matches!(PointSet::new(pts), Err(Error::InvalidPoints(_))));
}

#[test]
fn a1_entries_certified_at_higher_precision() {
    let rd = a1();
    let b = build(&rd, &default_points(&rd), 24).unwrap();
    assert!(b.report.overall_pass);
    assert_eq!(b.report.get("a_rational_certificates").unwrap().status, CheckStatus::Pass);
    for r in &b.reconstructions {
        let c = r.certificate.as_ref().unwrap();
        let entry = b.a.get(r.row, r.col);
        assert!(c.residual(entry).order() >= 24);
        assert!(c.degree_bounds.0 <= 9);
    }
}

#[test]
fn membership_controls() {
    // the raw logarithmic series stays inconclusive on the whole schedule
    assert!(reconstruct_scheduled(&make_f(&Rat::int(0), 24), 24).is_none());
    // a zero entry gets the trivial certificate
    let zero: TMatrix<Rat> = galois_patch::Mat::new(1, 1, vec![TSeries::zero_to(10)]).unwrap();
    let r = reconstruct_entries(&zero, 10);
    let c = r[0].certificate.as_ref().unwrap();
    assert!(c.numerator.is_zero());
    assert_eq!(c.denominator, TSeries::one());
}

#[test]
fn three_families_are_not_enough() {
    let rd = RootDatum::from_label("A2").unwrap();
    let fams = [Family::PlusConst, Family::MinusConst, Family::PlusT];
    let b = build_with(&rd, &PointSet::consecutive(9), 8, &fams).unwrap();
    let c = b.report.get("galois_descriptors").unwrap();
    assert_eq!(c.status, CheckStatus::Fail);
    assert_eq!(c.notes.iter().filter(|n| n.starts_with("missing")).count(), 3);
    assert!(b.report.get("patch").unwrap().status == CheckStatus::Pass);
}

#[test]
fn symplectic_rank_two() {
    let rd = RootDatum::from_label("C2").unwrap();
    let b = build(&rd, &default_points(&rd), 8).unwrap();
    assert!(b.report.overall_pass, "{:?}", b.report.failed());
    assert_eq!(b.seeds.len(), 16);
    assert!(b.report.get("trace_a_zero").is_none());
}
