//! Acceptance suite: one line per criterion, non-zero exit on any failure.
//! Expected values are produced by oracles written here, independently of
//! the library routines they check.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use galois_patch::forge::{self, build, default_points, gauge_check, EquationBundle};
use galois_patch::patcher::{verify_patch, PatchProblem};
use galois_patch::poly::Poly;
use galois_patch::random;
use galois_patch::rootdata::{GroupDescriptor, Multiplier, Root, RootDatum};
use galois_patch::seed::{certify_nonrational, galois_action_check, make_f, Family};
use galois_patch::tower::{reconstruct, PointSet};
use galois_patch::wire;
use galois_patch::{Mat, Rat, RatFunc, Ring, TMatrix, TSeries};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type R = RatFunc<Rat>;
type S = TSeries<Rat>;
type Outcome = Result<String, String>;
type Criterion = (&'static str, fn(&mut Ctx) -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure(elapsed < limit, format!("{what} took {elapsed:.2?}, limit {limit:?}"))
}

// ---- oracles -------------------------------------------------------------

/// `c / (x - q)^k` written out as a fraction, bypassing the pole constructor.
fn oracle_pole(q: &Rat, k: usize, c: Rat) -> R {
    let mut den = Poly::one();
    for _ in 0..k {
        den = den.mul(&Poly::from_rats(&[-q, Rat::one()]));
    }
    R::from_fraction(Poly::constant(c), den).unwrap()
}

/// `sum_k (-1)^k t^k / (x-q)^(k+1)`, i.e. `1/(x-q+t)`, mod `t^n`.
fn oracle_shifted_inverse(q: &Rat, n: i64) -> S {
    let coeffs = (0..n)
        .map(|k| oracle_pole(q, k as usize + 1, Rat::int(if k % 2 == 0 { 1 } else { -1 })))
        .collect();
    S::from_coeffs(coeffs, Some(n))
}

/// `f = sum_{k>=1} (-1)^(k+1) t^k / (k (x-q)^k)` mod `t^n`.
fn oracle_f(q: &Rat, n: i64) -> S {
    let coeffs = (0..n)
        .map(|k| {
            if k == 0 {
                R::zero()
            } else {
                let s = if k % 2 == 1 { 1 } else { -1 };
                oracle_pole(q, k as usize, Rat::new(s, k))
            }
        })
        .collect();
    S::from_coeffs(coeffs, Some(n))
}

/// All roots of `den` lie in `pts` (checked by synthetic division) and the
/// fraction vanishes or is constant at infinity.
fn oracle_in_f0_coeff(c: &R, pts: &[Rat]) -> bool {
    let (num, mut den) = c.to_fraction();
    while let Some(q) = pts.iter().find(|q| den.degree().unwrap_or(0) > 0 && den.eval(q).is_zero()) {
        den = den.div_linear(q).0;
    }
    den.degree() == Some(0) && num.degree().unwrap_or(0) <= c.to_fraction().1.degree().unwrap_or(0)
}

fn oracle_in_f0(s: &S, pts: &[Rat]) -> bool {
    s.valuation().is_none_or(|v| v >= 0) && s.terms().all(|(_, c)| oracle_in_f0_coeff(c, pts))
}

fn oracle_in_fi(s: &S, q: &Rat) -> bool {
    s.valuation().is_none_or(|v| v >= 0) && s.terms().all(|(_, c)| !c.to_fraction().1.eval(q).is_zero())
}

/// The four `SL_2` seed matrices built from the explicit series.
fn oracle_sl2_seed(fam: Family, q: &Rat, n: i64) -> TMatrix<Rat> {
    let f = oracle_f(q, n + 1);
    let c = match fam {
        Family::PlusConst | Family::MinusConst => f.truncate(n),
        Family::PlusT => f.shift(1).truncate(n),
        Family::MinusTinv => f.shift(-1).sub(&S::constant(oracle_pole(q, 1, Rat::one()))).truncate(n),
    };
    let (one, zero) = (S::one(), S::zero_exact());
    let data = if fam.uses_negative_root() {
        vec![one.clone(), zero, c, one]
    } else {
        vec![one.clone(), c, zero, one]
    };
    Mat::new(2, 2, data).unwrap()
}

// ---- shared pipeline runs -------------------------------------------------

struct Ctx {
    a1: Option<(EquationBundle, Duration)>,
    a2: Option<(EquationBundle, Duration)>,
}

impl Ctx {
    fn a1(&mut self) -> &(EquationBundle, Duration) {
        self.a1.get_or_insert_with(|| timed_build("A1", 16))
    }

    fn a2(&mut self) -> &(EquationBundle, Duration) {
        self.a2.get_or_insert_with(|| timed_build("A2", 12))
    }
}

fn timed_build(label: &str, n: i64) -> (EquationBundle, Duration) {
    let rd = RootDatum::from_label(label).unwrap();
    let start = Instant::now();
    let b = build(&rd, &default_points(&rd), n).unwrap();
    (b, start.elapsed())
}

// ---- criteria -------------------------------------------------------------

fn c1_f_identities(_: &mut Ctx) -> Outcome {
    let start = Instant::now();
    let n = 32;
    for q in [Rat::int(0), Rat::int(1), Rat::int(-2), Rat::new(7, 3)] {
        let f = make_f(&q, n);
        ensure(f == oracle_f(&q, n), format!("make_f differs from the explicit series at q={q}"))?;
        let shifted = oracle_shifted_inverse(&q, n);
        let dx_expect = shifted.sub(&S::constant(oracle_pole(&q, 1, Rat::one())));
        let dx = f.dx();
        ensure(dx.prec() == Some(n), "dx precision")?;
        ensure(dx.sub(&dx_expect).order() >= n, format!("dx f mismatch at q={q}"))?;
        // dt of a series known mod t^(n+1) is known mod t^n
        let dt = make_f(&q, n + 1).dt();
        ensure(dt.prec() == Some(n), "dt precision")?;
        ensure(dt.sub(&shifted).order() >= n, format!("dt f mismatch at q={q}"))?;
    }
    within(start.elapsed(), Duration::from_secs(5), "f identities")?;
    Ok("4 points, dx and dt exact to order 32".into())
}

/// Type A: `u` is `I + c E_ij`, the coroot is `diag(.., c, .., c^-1, ..)` and
/// `n_α = I - E_ii - E_jj + E_ij - E_ji`.
fn oracle_springer_type_a(n: usize, i: usize, j: usize) -> (Mat<R>, Mat<R>) {
    let f = R::x();
    let fi = f.inv().unwrap();
    let e = |a: usize, b: usize, c: &R| Mat::<R>::from_fn(n, n, |r, s| if (r, s) == (a, b) { c.clone() } else { R::zero() });
    let id = Mat::<R>::identity(n);
    let u = id.add(&e(i, j, &f));
    let v = id.add(&e(j, i, &fi.neg()));
    let lhs = u.mul(&v).mul(&u);
    let mut torus = Mat::<R>::identity(n);
    torus.set(i, i, f.clone());
    torus.set(j, j, fi);
    let one = R::one();
    let weyl = id
        .sub(&e(i, i, &one))
        .sub(&e(j, j, &one))
        .add(&e(i, j, &one))
        .sub(&e(j, i, &one));
    (lhs, torus.mul(&weyl))
}

fn c2_springer(_: &mut Ctx) -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for label in ["A1", "A2", "A3", "C2"] {
        let rd = RootDatum::from_label(label).unwrap();
        for r in rd.roots() {
            ensure(
                rd.springer_identity_check(&r).unwrap(),
                format!("{label} root {r} fails"),
            )?;
            let f = R::x();
            let lib = rd.springer_product(&r, &f, &f.inv().unwrap().neg()).unwrap();
            if label.starts_with('A') {
                let i = r.0.iter().position(|&c| c == 1).unwrap();
                let j = r.0.iter().position(|&c| c == -1).unwrap();
                let (lhs, rhs) = oracle_springer_type_a(rd.dim(), i, j);
                ensure(lhs == rhs, format!("oracle identity fails for {label} {r}"))?;
                ensure(lib == lhs, format!("library product differs from oracle for {label} {r}"))?;
            } else {
                // exp(c X) with X^3 = 0 for every C2 root in this realization
                let x = rd.nilpotent(&r).unwrap().map(R::from_rat);
                let xm = rd.nilpotent(&r.neg()).unwrap().map(R::from_rat);
                let exp = |m: &Mat<R>, c: &R| {
                    let cm = m.scale(c);
                    Mat::identity(4).add(&cm).add(&cm.mul(&cm).scale_rat(&Rat::new(1, 2)))
                };
                let u = exp(&x, &f);
                let lhs = u.mul(&exp(&xm, &f.inv().unwrap().neg())).mul(&u);
                ensure(lib == lhs, format!("library product differs from oracle for C2 {r}"))?;
            }
            count += 1;
        }
    }
    within(start.elapsed(), Duration::from_secs(5), "springer")?;
    Ok(format!("{count} roots over A1, A2, A3, C2"))
}

fn check_patch(b: &EquationBundle) -> Result<(), String> {
    let n = b.prec;
    let pts = b.ps.points();
    let problem = PatchProblem::new(b.ps.clone(), b.seeds.iter().map(|s| s.y_local.clone()).collect(), n)
        .map_err(|e| e.to_string())?;
    let rep = verify_patch(&problem, &b.patch);
    ensure(rep.pass(), format!("verify_patch failed at {:?}", rep.failing_points()))?;
    let y = &b.patch.y;
    ensure(y.entries().iter().all(|e| oracle_in_f0(e, pts)), "Y not in the F0 ring")?;
    for (i, z) in b.patch.z.iter().enumerate() {
        let resid = z.inv().map_err(|e| e.to_string())?.mul(y).sub(&b.seeds[i].y_local);
        ensure(resid.zero_order() >= n, format!("Z_{i}^-1 Y - Y_{i} nonzero below t^{n}"))?;
        ensure(z.entries().iter().all(|e| oracle_in_fi(e, &pts[i])), format!("Z_{i} not in its ring"))?;
    }
    Ok(())
}

fn c3_factorization(ctx: &mut Ctx) -> Outcome {
    let (a1, t1) = ctx.a1();
    let start = Instant::now();
    let m = a1.rd.m();
    for (i, s) in a1.seeds.iter().enumerate() {
        let fam = Family::ALL[i / m];
        ensure(
            s.y_local == oracle_sl2_seed(fam, &s.point, a1.prec),
            format!("A1 seed {i} differs from the explicit matrix"),
        )?;
    }
    check_patch(a1)?;
    let t1 = *t1 + start.elapsed();
    within(t1, Duration::from_secs(10), "A1 pipeline")?;
    let (a2, t2) = ctx.a2();
    let start = Instant::now();
    check_patch(a2)?;
    let t2 = *t2 + start.elapsed();
    within(t2, Duration::from_secs(120), "A2 pipeline")?;
    Ok(format!("A1 N=16 in {t1:.2?}, A2 N=12 in {t2:.2?}"))
}

fn check_equation(b: &EquationBundle) -> Result<(), String> {
    let n = b.prec;
    let y = &b.patch.y;
    ensure(y.dx().sub(&b.a.mul(y)).zero_order() >= n, "dx(Y) - A Y nonzero")?;
    for i in 0..b.ps.len() {
        ensure(gauge_check(b, i), format!("gauge identity fails at point {i}"))?;
    }
    // one point recomputed by hand
    let z = &b.patch.z[0];
    let zi = z.inv().unwrap();
    let rhs = z.dx().mul(&zi).add(&z.mul(&b.seeds[0].a_local).mul(&zi));
    ensure(b.a.sub(&rhs).zero_order() >= n, "explicit gauge recomputation at point 0")?;
    Ok(())
}

fn c4_global_equation(ctx: &mut Ctx) -> Outcome {
    check_equation(&ctx.a1().0)?;
    check_equation(&ctx.a2().0)?;
    Ok("A1 and A2: fundamental solution and gauge identity at every point".into())
}

fn family_of(d: &GroupDescriptor, rd: &RootDatum) -> Family {
    let positive = rd.is_positive(&d.root).unwrap();
    match (positive, d.multiplier) {
        (true, Multiplier::One) => Family::PlusConst,
        (false, Multiplier::One) => Family::MinusConst,
        (true, Multiplier::T) => Family::PlusT,
        _ => Family::MinusTinv,
    }
}

fn c5_descriptors(ctx: &mut Ctx) -> Outcome {
    let mut counts = Vec::new();
    for b in [&ctx.a1().0.clone(), &ctx.a2().0.clone()] {
        for (i, s) in b.seeds.iter().enumerate() {
            ensure(galois_action_check(&b.rd, s).unwrap(), format!("{} seed {i} action", b.rd.label()))?;
        }
        let descriptors: Vec<GroupDescriptor> = b.seeds.iter().map(|s| s.descriptor()).collect();
        ensure(descriptors.len() == 4 * b.rd.m(), "descriptor count")?;
        ensure(b.rd.propgen_hypothesis_check(&descriptors).pass, "hypothesis check")?;
        ensure(forge::galois_descriptor_check(b).status == forge::CheckStatus::Pass, "bundle descriptor check")?;
        for drop in Family::ALL {
            let kept: Vec<GroupDescriptor> = descriptors
                .iter()
                .filter(|d| family_of(d, &b.rd) != drop)
                .cloned()
                .collect();
            ensure(
                !b.rd.propgen_hypothesis_check(&kept).pass,
                format!("{} passes without {drop:?}", b.rd.label()),
            )?;
        }
        counts.push(format!("{} with {}", b.rd.label(), descriptors.len()));
    }
    // a descriptor for a foreign root is rejected
    let rd = RootDatum::from_label("A1").unwrap();
    let mut bogus: Vec<GroupDescriptor> = ctx.a1().0.seeds.iter().map(|s| s.descriptor()).collect();
    bogus.push(GroupDescriptor {
        root: Root(vec![1, 0, -1]),
        multiplier: Multiplier::T,
    });
    ensure(!rd.propgen_hypothesis_check(&bogus).pass, "foreign root accepted")?;
    Ok(format!("{}; every family drop flips the verdict", counts.join(", ")))
}

fn c6_reconstruction(ctx: &mut Ctx) -> Outcome {
    let n = 16;
    let q = Rat::new(1, 2);
    let lin = |shift: i64| S::constant(R::from_poly(Poly::from_rats(&[-&q, Rat::one()]))).add(&S::monomial(R::from_rat(&Rat::int(shift)), 1));
    // 1/(x - q + t)
    let a = oracle_shifted_inverse(&q, n);
    let r = reconstruct(&a, 1, n).map_err(|e| e.to_string())?;
    ensure(r.success, "planted 1/(x-q+t) not found")?;
    ensure(r.denominator.mul(&a).sub(&r.numerator).order() >= n, "residual of 1/(x-q+t)")?;
    ensure(r.numerator.mul(&lin(1)).sub(&r.denominator).order() >= n, "P (x-q+t) != Q")?;
    // (x - q)/(x - q - t) = sum_k t^k / (x-q)^k
    let coeffs = (0..n)
        .map(|k| if k == 0 { R::one() } else { oracle_pole(&q, k as usize, Rat::one()) })
        .collect();
    let b = S::from_coeffs(coeffs, Some(n));
    let r = reconstruct(&b, 1, n).map_err(|e| e.to_string())?;
    ensure(r.success, "planted (x-q)/(x-q-t) not found")?;
    ensure(r.denominator.mul(&b).sub(&r.numerator).order() >= n, "residual of (x-q)/(x-q-t)")?;
    ensure(
        r.numerator.mul(&lin(-1)).sub(&r.denominator.mul(&lin(0))).order() >= n,
        "P (x-q-t) != Q (x-q)",
    )?;
    // the logarithmic series has no certificate at small degree
    let f = make_f(&q, 32);
    for d in 1..=4usize {
        for m in [2 * (d as i64 + 1) + 4, 32] {
            let r = reconstruct(&f, d, m).map_err(|e| e.to_string())?;
            ensure(!r.success, format!("f reconstructed at d_x={d}, N={m}"))?;
        }
    }
    let mut pts: Vec<Rat> = ctx.a1().0.ps.points().to_vec();
    pts.extend(ctx.a2().0.ps.points().iter().cloned());
    for p in &pts {
        ensure(certify_nonrational(p), format!("no certificate at x = {p}"))?;
    }
    Ok(format!("2 planted closed forms, f inconclusive for d_x <= 4, {} points certified", pts.len()))
}

fn c7_infrastructure(ctx: &mut Ctx) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20240611);
    let ps = PointSet::consecutive(3);
    for k in 0..1000 {
        let s = random::series(&mut rng, &ps, 6);
        let (a, b) = (s.dx().dt(), s.dt().dx());
        ensure(a == b && a.prec() == b.prec(), format!("[dx, dt] != 0 on case {k}"))?;
    }
    for k in 0..200 {
        let s = random::series(&mut rng, &ps, 6);
        let Ok(inv) = s.inv() else { continue };
        let v = s.valuation().unwrap();
        let r = inv.mul(&s).sub(&S::one());
        ensure(r.order() >= 6 - v, format!("series inverse residual on case {k}"))?;
    }
    for k in 0..40 {
        let m = random::identity_mod_t(&mut rng, 3, &ps, 5);
        let r = m.inv().map_err(|e| e.to_string())?.mul(&m).sub(&TMatrix::identity(3));
        ensure(r.zero_order() >= 5, format!("matrix inverse residual on case {k}"))?;
    }
    for k in 0..200 {
        let s = random::series(&mut rng, &ps, 5);
        let text = wire::to_json_string(&wire::series_to_json(&s));
        let back = wire::series_from_json(&wire::from_json_str(&text).unwrap(), ps.points()).unwrap();
        ensure(back == s && wire::to_json_string(&wire::series_to_json(&back)) == text, format!("json case {k}"))?;
    }
    let a1 = &ctx.a1().0;
    let text = wire::to_json_string(&wire::bundle_to_file(a1));
    let back = wire::bundle_from_file(&wire::from_json_str(&text).unwrap()).unwrap();
    ensure(wire::to_json_string(&wire::bundle_to_file(&back)) == text, "bundle json not bit-exact")?;
    ensure(forge::verify_bundle(&back).overall_pass, "reloaded bundle fails verification")?;

    let rd = RootDatum::from_label("A1").unwrap();
    let lo = build(&rd, &default_points(&rd), 10).unwrap();
    for (x, y) in [(&a1.patch.y, &lo.patch.y), (&a1.a, &lo.a)] {
        ensure(x.truncate(10) == *y, "rebuild at higher precision disagrees")?;
    }
    for (x, y) in a1.patch.z.iter().zip(&lo.patch.z) {
        ensure(x.truncate(10) == *y, "Z disagrees on overlap")?;
    }
    Ok("1000 commutator cases, inverse residuals, bit-exact json, refinement N=10 vs 16".into())
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("f-series identities", c1_f_identities),
        ("Springer identity", c2_springer),
        ("simultaneous factorization", c3_factorization),
        ("global equation and gauge identity", c4_global_equation),
        ("Galois descriptors", c5_descriptors),
        ("reconstruction oracle", c6_reconstruction),
        ("infrastructure invariants", c7_infrastructure),
    ];
    let suite = Instant::now();
    let mut ctx = Ctx { a1: None, a2: None };
    let mut failures = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(|| run(&mut ctx)))
            .unwrap_or_else(|p| Err(p.downcast_ref::<String>().cloned().unwrap_or_else(|| "panicked".into())));
        let t = start.elapsed();
        match res {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail}; {t:.2?})", k + 1),
            Err(why) => {
                failures += 1;
                println!("criterion {} {name}: FAIL ({why}; {t:.2?})", k + 1);
            }
        }
    }
    let total = suite.elapsed();
    println!("acceptance: {} of 7 passed in {total:.2?}", 7 - failures);
    if total > Duration::from_secs(300) {
        println!("acceptance: FAIL (suite exceeded 5 minutes)");
        failures += 1;
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
