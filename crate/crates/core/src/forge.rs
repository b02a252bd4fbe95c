//! End-to-end construction: one seed per (positive root, family), patched
//! into a global `Y`, and the equation `A = ∂_x(Y) Y^-1` with its checks.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Rat;
use crate::matrix::TMatrix;
use crate::patcher::{factor_simultaneous, verify_patch, PatchProblem, PatchSolution};
use crate::rootdata::{GroupDescriptor, GroupType, RootDatum};
use crate::seed::{certify_nonrational, check_seed, f_identities_order, galois_action_check, make_seed, Family, LocalSeed};
use crate::series::TSeries;
use crate::tower::{in_f0_ring, reconstruct_scheduled, PointSet, Reconstruction};

/// Smallest precision accepted by [`build`].
pub const MIN_PRECISION: i64 = 8;
pub const DEFAULT_PRECISION: i64 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Inconclusive,
    Notice,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub name: String,
    pub status: CheckStatus,
    pub mandatory: bool,
    pub verified_order: Option<i64>,
    pub notes: Vec<String>,
}

impl CheckEntry {
    fn mandatory(name: impl Into<String>, ok: bool, order: Option<i64>, notes: Vec<String>) -> CheckEntry {
        CheckEntry {
            name: name.into(),
            status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
            mandatory: true,
            verified_order: order,
            notes,
        }
    }

    fn notice(name: &str, note: &str) -> CheckEntry {
        CheckEntry {
            name: name.into(),
            status: CheckStatus::Notice,
            mandatory: false,
            verified_order: None,
            notes: vec![note.into()],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<CheckEntry>,
    pub overall_pass: bool,
}

impl VerificationReport {
    fn new(checks: Vec<CheckEntry>) -> VerificationReport {
        let overall_pass = checks.iter().all(|c| !c.mandatory || c.status == CheckStatus::Pass);
        VerificationReport { checks, overall_pass }
    }

    pub fn get(&self, name: &str) -> Option<&CheckEntry> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failed(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| c.mandatory && c.status != CheckStatus::Pass)
            .map(|c| c.name.as_str())
            .collect()
    }
}

/// Rational certificate (or its absence) for one entry of `A`.
#[derive(Clone)]
pub struct EntryReconstruction {
    pub row: usize,
    pub col: usize,
    pub certificate: Option<Reconstruction<Rat>>,
}

#[derive(Clone)]
pub struct EquationBundle {
    pub rd: RootDatum,
    pub ps: PointSet,
    pub prec: i64,
    pub seeds: Vec<LocalSeed>,
    pub patch: PatchSolution,
    pub a: TMatrix<Rat>,
    pub reconstructions: Vec<EntryReconstruction>,
    pub report: VerificationReport,
}

/// Default points `0, 1, ..., 4m - 1`.
pub fn default_points(rd: &RootDatum) -> PointSet {
    PointSet::consecutive(4 * rd.m())
}

/// Seeds in blocks: point `k*m + j` gets family `families[k]` on the
/// `j`-th positive root.
pub fn make_seeds(rd: &RootDatum, ps: &PointSet, n: i64, families: &[Family]) -> Result<Vec<LocalSeed>> {
    let m = rd.m();
    let needed = families.len() * m;
    if ps.len() != needed {
        return Err(Error::WrongPointCount {
            needed,
            m,
            got: ps.len(),
        });
    }
    if n < MIN_PRECISION {
        return Err(Error::InvalidPrecision(format!("need at least {MIN_PRECISION}, got {n}")));
    }
    let pos = rd.positive_roots();
    let jobs: Vec<(Family, usize, usize)> = families
        .iter()
        .enumerate()
        .flat_map(|(k, &fam)| (0..m).map(move |j| (fam, j, k * m + j)))
        .collect();
    jobs.par_iter()
        .map(|&(fam, j, i)| make_seed(rd, &pos[j], fam, ps.get(i), n))
        .collect()
}

/// Full construction with all four families.
pub fn build(rd: &RootDatum, ps: &PointSet, n: i64) -> Result<EquationBundle> {
    build_with(rd, ps, n, &Family::ALL)
}

/// Construction with a chosen family list; `|ps|` must be `families.len() * m`.
pub fn build_with(rd: &RootDatum, ps: &PointSet, n: i64, families: &[Family]) -> Result<EquationBundle> {
    let seeds = make_seeds(rd, ps, n, families)?;
    let problem = PatchProblem::new(ps.clone(), seeds.iter().map(|s| s.y_local.clone()).collect(), n)?;
    let patch = factor_simultaneous(&problem)?;
    let a = patch.y.dx().mul(&patch.y.inv()?).truncate(n);
    let reconstructions = reconstruct_entries(&a, n);
    let mut bundle = EquationBundle {
        rd: rd.clone(),
        ps: ps.clone(),
        prec: n,
        seeds,
        patch,
        a,
        reconstructions,
        report: VerificationReport::new(Vec::new()),
    };
    bundle.report = verify_bundle(&bundle);
    Ok(bundle)
}

/// Searches each entry of `a` on the degree schedule.
pub fn reconstruct_entries(a: &TMatrix<Rat>, n: i64) -> Vec<EntryReconstruction> {
    let cells: Vec<(usize, usize)> = (0..a.rows()).flat_map(|i| (0..a.cols()).map(move |j| (i, j))).collect();
    cells
        .par_iter()
        .map(|&(row, col)| EntryReconstruction {
            row,
            col,
            certificate: reconstruct_scheduled(a.get(row, col), n),
        })
        .collect()
}

/// Order to which `A - (∂_x(Z) Z^-1 + Z A_loc Z^-1)` vanishes.
pub fn gauge_identity_order(a: &TMatrix<Rat>, z: &TMatrix<Rat>, a_local: &TMatrix<Rat>) -> i64 {
    let Ok(zi) = z.inv() else {
        return 0;
    };
    let rhs = z.dx().mul(&zi).add(&z.mul(a_local).mul(&zi));
    a.sub(&rhs).zero_order()
}

pub fn gauge_check(b: &EquationBundle, i: usize) -> bool {
    match (b.patch.z.get(i), b.seeds.get(i)) {
        (Some(z), Some(s)) => gauge_identity_order(&b.a, z, &s.a_local) >= b.prec,
        _ => false,
    }
}

/// Descriptors of the seeds whose Galois action verified.
pub fn verified_descriptors(b: &EquationBundle) -> Vec<GroupDescriptor> {
    b.seeds
        .par_iter()
        .filter(|s| galois_action_check(&b.rd, s).unwrap_or(false))
        .map(|s| s.descriptor())
        .collect()
}

pub fn galois_descriptor_check(b: &EquationBundle) -> CheckEntry {
    let descriptors = verified_descriptors(b);
    let rep = b.rd.propgen_hypothesis_check(&descriptors);
    let mut notes = vec![format!("{} verified descriptors", descriptors.len())];
    notes.extend(rep.missing.iter().map(|d| format!("missing {d}")));
    notes.extend(rep.invalid.iter().map(|d| format!("invalid {d}")));
    CheckEntry::mandatory("galois_descriptors", rep.pass, None, notes)
}

/// `A` entries in the ring at the points, plus the stored rational
/// certificates re-verified against `A`.
pub fn membership_check(b: &EquationBundle) -> Vec<CheckEntry> {
    let ring = b.a.entries().iter().all(|e| in_f0_ring(e, &b.ps));
    let mut out = vec![CheckEntry::mandatory("a_in_f0_ring", ring, Some(b.prec), vec![])];
    let mut notes = Vec::new();
    let mut found = 0;
    let mut bad = false;
    for r in &b.reconstructions {
        match &r.certificate {
            Some(c) => {
                let entry = b.a.get(r.row, r.col);
                let ok = c.residual(entry).order() >= c.verified_order && c.verified_order >= b.prec;
                if ok {
                    found += 1;
                } else {
                    bad = true;
                    notes.push(format!("entry ({},{}) certificate does not verify", r.row, r.col));
                }
            }
            None => notes.push(format!("entry ({},{}) inconclusive at bounds", r.row, r.col)),
        }
    }
    notes.insert(0, format!("{found}/{} entries certified", b.reconstructions.len()));
    out.push(CheckEntry {
        name: "a_rational_certificates".into(),
        status: if bad {
            CheckStatus::Fail
        } else if found == b.reconstructions.len() {
            CheckStatus::Pass
        } else {
            CheckStatus::Inconclusive
        },
        mandatory: bad,
        verified_order: Some(b.prec),
        notes,
    });
    out
}

/// Recomputes every invariant from the stored raw data.
pub fn verify_bundle(b: &EquationBundle) -> VerificationReport {
    let n = b.prec;
    let mut checks = Vec::new();
    let count_ok = b.seeds.len() == b.ps.len() && b.patch.z.len() == b.ps.len();
    checks.push(CheckEntry::mandatory(
        "shape",
        count_ok && b.seeds.iter().zip(b.ps.points()).all(|(s, q)| s.point == *q),
        None,
        vec![format!("{} points, {} seeds", b.ps.len(), b.seeds.len())],
    ));
    if !count_ok {
        return VerificationReport::new(checks);
    }

    let f_orders: Vec<i64> = b.ps.points().par_iter().map(|q| f_identities_order(q, n)).collect();
    let f_min = f_orders.iter().copied().min().unwrap_or(0);
    checks.push(CheckEntry::mandatory("f_identities", f_min >= n - 1, Some(f_min), vec![]));

    let seed_checks: Vec<_> = b.seeds.par_iter().map(|s| check_seed(&b.rd, s)).collect();
    let bad: Vec<String> = seed_checks
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.pass() || c.verified_order < n)
        .map(|(i, _)| format!("seed {i} fails"))
        .collect();
    let order = seed_checks.iter().map(|c| c.verified_order).min();
    checks.push(CheckEntry::mandatory("local_seeds", bad.is_empty(), order, bad));

    let actions: Vec<bool> = b
        .seeds
        .par_iter()
        .map(|s| galois_action_check(&b.rd, s).unwrap_or(false))
        .collect();
    let bad: Vec<String> = actions
        .iter()
        .enumerate()
        .filter(|(_, ok)| !**ok)
        .map(|(i, _)| format!("seed {i} action mismatch"))
        .collect();
    checks.push(CheckEntry::mandatory("galois_actions", bad.is_empty(), None, bad));

    let problem = PatchProblem {
        ps: b.ps.clone(),
        inputs: b.seeds.iter().map(|s| s.y_local.clone()).collect(),
        target: n,
    };
    let patch_ok = b.patch.achieved_order >= n;
    let pr = verify_patch(&problem, &b.patch);
    let notes = pr
        .failing_points()
        .iter()
        .map(|i| format!("point {i} fails"))
        .chain((!pr.y_in_f0_ring).then(|| "Y not in the F0 ring".to_string()))
        .collect();
    checks.push(CheckEntry::mandatory(
        "patch",
        patch_ok && pr.pass(),
        Some(pr.verified_order()),
        notes,
    ));

    let y = b.patch.y.truncate(n);
    let fund = y.dx().sub(&b.a.mul(&y)).zero_order();
    checks.push(CheckEntry::mandatory("fundamental_solution", fund >= n, Some(fund), vec![]));

    let gauge: Vec<i64> = (0..b.ps.len())
        .into_par_iter()
        .map(|i| gauge_identity_order(&b.a, &b.patch.z[i], &b.seeds[i].a_local))
        .collect();
    let bad: Vec<String> = gauge
        .iter()
        .enumerate()
        .filter(|(_, o)| **o < n)
        .map(|(i, o)| format!("point {i} holds only to order {o}"))
        .collect();
    let g_min = gauge.iter().copied().min();
    checks.push(CheckEntry::mandatory("gauge_identity", bad.is_empty(), g_min, bad));

    let det = y.det().sub(&TSeries::one()).order();
    checks.push(CheckEntry::mandatory("det_y_one", det >= n, Some(det), vec![]));
    if matches!(b.rd.group_type(), GroupType::A(_)) {
        let tr = b.a.trace().order();
        checks.push(CheckEntry::mandatory("trace_a_zero", tr >= n, Some(tr), vec![]));
    }

    checks.extend(membership_check(b));
    checks.push(galois_descriptor_check(b));

    let springer_bad: Vec<String> = b
        .rd
        .roots()
        .iter()
        .filter(|r| !b.rd.springer_identity_check(r).unwrap_or(false))
        .map(|r| format!("root {r}"))
        .collect();
    checks.push(CheckEntry::mandatory("springer_identity", springer_bad.is_empty(), None, springer_bad));

    let nonrat: Vec<String> = b
        .ps
        .points()
        .iter()
        .filter(|q| !certify_nonrational(q))
        .map(|q| format!("x = {q}"))
        .collect();
    checks.push(CheckEntry::mandatory("f_not_rational", nonrat.is_empty(), None, nonrat));

    checks.push(CheckEntry::notice(
        "minus_tinv_shift",
        "t^-1 seeds use u_{-α}(t^-1 f - 1/(x-q)) so that Y is the identity mod t; the action group is unchanged",
    ));
    checks.push(CheckEntry::notice(
        "springer_sign",
        "checked in the form u_α(f) u_{-α}(-f^-1) u_α(f) = α^∨(f) n_α",
    ));
    VerificationReport::new(checks)
}
