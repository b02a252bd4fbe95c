//! Per-point local data: the logarithmic series `f`, the four families of
//! local fundamental matrices, their equations, and the `σ_a` action.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::field::{Field, Rat, Ring};
use crate::matrix::{Mat, TMatrix};
use crate::poly::Poly;
use crate::ratfunc::RatFunc;
use crate::rootdata::{GroupDescriptor, Multiplier, Root, RootDatum};
use crate::series::TSeries;

/// `Q(a)`: the rationals with one formal constant adjoined.
pub type QA = RatFunc<Rat>;

/// Which one-parameter group a seed realizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `u_α(f)`, group `u_α(S)`.
    PlusConst,
    /// `u_{-α}(f)`, group `u_{-α}(S)`.
    MinusConst,
    /// `u_α(t f)`, group `u_α(t S)`.
    PlusT,
    /// `u_{-α}(t^-1 f - 1/(x-q))`, group `u_{-α}(t^-1 S)`.
    MinusTinv,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::PlusConst,
        Family::MinusConst,
        Family::PlusT,
        Family::MinusTinv,
    ];

    /// Whether the seed uses `α` or `-α`.
    pub fn uses_negative_root(self) -> bool {
        matches!(self, Family::MinusConst | Family::MinusTinv)
    }

    pub fn multiplier(self) -> Multiplier {
        match self {
            Family::PlusConst | Family::MinusConst => Multiplier::One,
            Family::PlusT => Multiplier::T,
            Family::MinusTinv => Multiplier::TInverse,
        }
    }

    /// The scalar `a`, `a`, `t a` or `t^-1 a` by which `σ_a` moves the seed.
    fn action_scalar<K: Field>(self, a: &RatFunc<K>) -> TSeries<K> {
        let e = match self.multiplier() {
            Multiplier::One => 0,
            Multiplier::T => 1,
            Multiplier::TInverse => -1,
        };
        TSeries::monomial(a.clone(), e)
    }
}

/// `f = sum_{n=1}^{N-1} (-1)^(n+1) t^n / (n (x-q)^n)`, known mod `t^N`.
pub fn make_f(q: &Rat, n: i64) -> TSeries<Rat> {
    let coeffs = (0..n.max(0))
        .map(|k| {
            if k == 0 {
                RatFunc::zero()
            } else {
                let sign = if k % 2 == 1 { 1 } else { -1 };
                RatFunc::pole(q, k as usize, Rat::new(sign, k))
            }
        })
        .collect();
    TSeries::from_coeffs(coeffs, Some(n))
}

/// `1/(x-q+t) - 1/(x-q)` and `1/(x-q+t)` expanded mod `t^n`, the two
/// partial derivatives of `f`.
pub fn f_derivative_closed_forms(q: &Rat, n: i64) -> (TSeries<Rat>, TSeries<Rat>) {
    let shifted = TSeries::inv_linear_shift(q, &Rat::one(), n);
    let dx = shifted.sub(&TSeries::constant(RatFunc::pole(q, 1, Rat::one())));
    (dx, shifted)
}

/// Checks `∂_x f` and `∂_t f` against their closed forms; returns the order
/// to which both agree (0 on mismatch).
pub fn f_identities_order(q: &Rat, n: i64) -> i64 {
    let f = make_f(q, n);
    let (dx_closed, dt_closed) = f_derivative_closed_forms(q, n);
    let dx = f.dx();
    let dt = f.dt();
    let both = dx == dx_closed && dt == dt_closed && dx.prec() == Some(n) && dt.prec() == Some(n - 1);
    if both {
        n - 1
    } else {
        0
    }
}

/// Local data attached to one point.
#[derive(Clone)]
pub struct LocalSeed {
    pub point: Rat,
    pub family: Family,
    /// The root whose one-parameter subgroup is used (`α` or `-α`).
    pub root: Root,
    pub f: TSeries<Rat>,
    /// Argument of `u_root`.
    pub c: TSeries<Rat>,
    pub y_local: TMatrix<Rat>,
    pub a_local: TMatrix<Rat>,
}

impl LocalSeed {
    pub fn descriptor(&self) -> GroupDescriptor {
        GroupDescriptor {
            root: self.root.clone(),
            multiplier: self.family.multiplier(),
        }
    }

    pub fn precision(&self) -> i64 {
        self.c.prec().unwrap_or(i64::MAX)
    }
}

/// The argument `c` fed to the root subgroup for a family, given `f`
/// known mod `t^(n+1)`. The result is known mod `t^n`.
fn seed_argument<K: Field>(family: Family, q: &Rat, f_long: &TSeries<K>, n: i64) -> TSeries<K> {
    match family {
        Family::PlusConst | Family::MinusConst => f_long.truncate(n),
        Family::PlusT => f_long.shift(1).truncate(n),
        Family::MinusTinv => f_long
            .shift(-1)
            .sub(&TSeries::constant(RatFunc::pole(q, 1, K::one())))
            .truncate(n),
    }
}

/// Builds the seed for positive root `alpha`, a family and a point.
pub fn make_seed(rd: &RootDatum, alpha: &Root, family: Family, q: &Rat, n: i64) -> Result<LocalSeed> {
    let root = if family.uses_negative_root() {
        alpha.neg()
    } else {
        alpha.clone()
    };
    let x = rd.nilpotent(&root)?.clone();
    let f_long = make_f(q, n + 1);
    let c = seed_argument(family, q, &f_long, n);
    let y_local = rd.u_matrix(&root, &c)?;
    // d/dx exp(c X) = (∂_x c) X exp(c X)
    let dc = c.dx();
    let a_local = x.map(|e| dc.scale(e));
    Ok(LocalSeed {
        point: q.clone(),
        family,
        root,
        f: f_long.truncate(n),
        c,
        y_local,
        a_local,
    })
}

/// Outcome of the structural checks on a seed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedCheck {
    pub identity_mod_t: bool,
    pub solves_equation: bool,
    pub det_one: bool,
    pub argument_matches: bool,
    pub verified_order: i64,
}

impl SeedCheck {
    pub fn pass(&self) -> bool {
        self.identity_mod_t && self.solves_equation && self.det_one && self.argument_matches
    }
}

/// Recomputes the seed invariants from its stored matrices.
pub fn check_seed(rd: &RootDatum, seed: &LocalSeed) -> SeedCheck {
    let n = seed.precision();
    let y = &seed.y_local;
    let residual = y.dx().sub(&seed.a_local.mul(y));
    let solves = residual.is_zero();
    let det_one = y.det() == TSeries::one();
    let f_long = make_f(&seed.point, n + 1);
    let expect_c = seed_argument(seed.family, &seed.point, &f_long, n);
    let expect_root = rd.contains(&seed.root);
    let argument_matches = expect_root
        && seed.c == expect_c
        && seed.f == f_long
        && rd.u_matrix(&seed.root, &seed.c).is_ok_and(|u| u == *y);
    let verified = y.prec().unwrap_or(n).min(residual.zero_order());
    SeedCheck {
        identity_mod_t: y.is_identity_mod_t(),
        solves_equation: solves,
        det_one,
        argument_matches,
        verified_order: verified,
    }
}

/// Lift a rational series into `Q(a)` coefficients.
pub fn lift_series(s: &TSeries<Rat>) -> TSeries<QA> {
    s.map_coeffs(QA::from_rat)
}

pub fn lift_matrix(m: &TMatrix<Rat>) -> TMatrix<QA> {
    m.map_coeffs(QA::from_rat)
}

/// The formal constant `a` in `Q(a)(x)`.
pub fn formal_a() -> RatFunc<QA> {
    RatFunc::constant(QA::x())
}

/// Checks `Y^-1 σ_a(Y)` equals `u_α(a)`, `u_{-α}(a)`, `u_α(t a)` or
/// `u_{-α}(t^-1 a)` for a formal constant `a`, where `σ_a` sends `f` to `f + a`.
pub fn galois_action_check(rd: &RootDatum, seed: &LocalSeed) -> Result<bool> {
    let n = seed.precision();
    let a = formal_a();
    let f_long = lift_series(&make_f(&seed.point, n + 1));
    let f_moved = f_long.add(&TSeries::constant(a.clone()));
    let c_moved = seed_argument(seed.family, &seed.point, &f_moved, n);
    let y = lift_matrix(&seed.y_local);
    let y_moved = rd.u_matrix(&seed.root, &c_moved)?;
    let quotient = y.inv()?.mul(&y_moved);
    let expect = rd.u_matrix(&seed.root, &seed.family.action_scalar(&a))?;
    // a t^-1 entry costs one order of precision
    let floor = if seed.family == Family::MinusTinv { n - 1 } else { n };
    Ok(quotient == expect && quotient.prec().is_some_and(|p| p >= floor))
}

/// The `2 x 2` model `Ã = [[0, ∂_x f], [0, 0]]`, `Ỹ = [[1, f], [0, 1]]`.
#[derive(Clone)]
pub struct LocalModel2x2 {
    pub a_tilde: TMatrix<Rat>,
    pub y_tilde: TMatrix<Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalModelReport {
    pub solution: bool,
    pub sigma_commutes_dx: bool,
    pub sigma_commutes_dt: bool,
    pub det_one: bool,
    pub sigma_zero_is_identity: bool,
}

impl LocalModelReport {
    pub fn pass(&self) -> bool {
        self.solution
            && self.sigma_commutes_dx
            && self.sigma_commutes_dt
            && self.det_one
            && self.sigma_zero_is_identity
    }
}

impl LocalModel2x2 {
    pub fn new(q: &Rat, n: i64) -> LocalModel2x2 {
        let f = make_f(q, n);
        let z = TSeries::zero_exact();
        let a_tilde = Mat::new(2, 2, vec![z.clone(), f.dx(), z.clone(), z.clone()]).unwrap();
        let y_tilde = Mat::new(2, 2, vec![TSeries::one(), f, z, TSeries::one()]).unwrap();
        LocalModel2x2 { a_tilde, y_tilde }
    }

    /// `∂_x Ỹ = Ã Ỹ` modulo precision.
    pub fn solves(&self) -> bool {
        self.y_tilde.dx().sub(&self.a_tilde.mul(&self.y_tilde)).is_zero()
    }

    pub fn check(&self) -> LocalModelReport {
        let f = self.y_tilde.get(0, 1);
        let fl = lift_series(f);
        let a = TSeries::constant(formal_a());
        let moved = fl.add(&a);
        // σ_a(∂ f) = ∂ σ_a(f), with ∂ a = ∂_t a = 0
        let sigma_commutes_dx = moved.dx() == lift_series(&f.dx());
        let sigma_commutes_dt = moved.dt() == lift_series(&f.dt());
        let zero = TSeries::constant(RatFunc::<QA>::zero());
        let sigma_zero_is_identity = fl.add(&zero) == fl;
        LocalModelReport {
            solution: self.solves(),
            sigma_commutes_dx,
            sigma_commutes_dt,
            det_one: self.y_tilde.det() == TSeries::one(),
            sigma_zero_is_identity,
        }
    }
}

/// True iff some residue of `g` at the given points is nonzero, in which
/// case `g` has no antiderivative in `K(x)`.
pub fn has_log_obstruction<K: Field>(g: &RatFunc<K>, at: &[K]) -> bool {
    at.iter().any(|r| !g.residue_at(r).is_zero())
}

/// Certifies `f ∉ k((t))(x)`: its x-derivative `1/(x-q+t) - 1/(x-q)` has
/// residue `+1` at `x = q - t` and `-1` at `x = q`, computed exactly over `Q(t)`.
pub fn certify_nonrational(q: &Rat) -> bool {
    let t = QA::x();
    let qk = QA::from_rat(q);
    let moving = qk.sub(&t);
    let Ok(first) = RatFunc::from_fraction(Poly::one(), Poly::linear(&moving)) else {
        return false;
    };
    let g = first.sub(&RatFunc::pole(q, 1, QA::one()));
    let r_moving = g.residue_at(&moving);
    let r_fixed = g.residue_at(&qk);
    r_moving == QA::one() && r_fixed == QA::one().neg() && has_log_obstruction(&g, &[moving, qk])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::{in_f0_ring, in_fi_ring, reconstruct, PointSet};

    type R = RatFunc<Rat>;
    type S = TSeries<Rat>;

    #[test]
    fn f_series_terms() {
        let f = make_f(&Rat::zero(), 4);
        let x = Rat::zero();
        assert_eq!(f.coeff(1), R::pole(&x, 1, Rat::one()));
        assert_eq!(f.coeff(2), R::pole(&x, 2, Rat::new(-1, 2)));
        assert_eq!(f.coeff(3), R::pole(&x, 3, Rat::new(1, 3)));
        assert_eq!(f.prec(), Some(4));
        for q in [Rat::zero(), Rat::int(1), Rat::int(-2), Rat::new(7, 3)] {
            assert_eq!(f_identities_order(&q, 12), 11);
        }
    }

    #[test]
    fn f_membership() {
        let ps = PointSet::new(vec![Rat::int(0), Rat::int(1)]).unwrap();
        let f = make_f(&Rat::int(0), 6);
        assert!(in_f0_ring(&f, &ps));
        assert!(!in_fi_ring(&f, &Rat::int(0)));
        assert!(in_fi_ring(&f, &Rat::int(1)));
    }

    #[test]
    fn a1_plus_const_seed() {
        let rd = RootDatum::from_label("A1").unwrap();
        let al = rd.positive_roots()[0].clone();
        let s = make_seed(&rd, &al, Family::PlusConst, &Rat::zero(), 6).unwrap();
        assert_eq!(*s.y_local.get(0, 1), make_f(&Rat::zero(), 6));
        assert_eq!(*s.a_local.get(0, 1), make_f(&Rat::zero(), 6).dx());
        assert!(s.a_local.get(1, 0).is_zero());
        assert!(check_seed(&rd, &s).pass());
    }

    #[test]
    fn minus_tinv_shift() {
        let q = Rat::int(3);
        let rd = RootDatum::from_label("A1").unwrap();
        let al = rd.positive_roots()[0].clone();
        let s = make_seed(&rd, &al, Family::MinusTinv, &q, 6).unwrap();
        // t^-1 f - 1/(x-q) = -t/(2(x-q)^2) + t^2/(3(x-q)^3) - ...
        assert_eq!(s.c.valuation(), Some(1));
        assert_eq!(s.c.coeff(1), R::pole(&q, 2, Rat::new(-1, 2)));
        assert_eq!(s.c.coeff(2), R::pole(&q, 3, Rat::new(1, 3)));
        assert_eq!(s.c.prec(), Some(6));
        assert!(s.y_local.is_identity_mod_t());
        assert!(check_seed(&rd, &s).pass());
    }

    #[test]
    fn seed_equations_all_families() {
        for label in ["A1", "A2"] {
            let rd = RootDatum::from_label(label).unwrap();
            for al in rd.positive_roots() {
                for fam in Family::ALL {
                    let s = make_seed(&rd, &al, fam, &Rat::new(1, 2), 8).unwrap();
                    let chk = check_seed(&rd, &s);
                    assert!(chk.pass(), "{label} {fam:?}");
                    assert_eq!(chk.verified_order, 8);
                    // closed form against ∂Y · Y^-1
                    let a2 = s.y_local.dx().mul(&s.y_local.inv().unwrap());
                    assert_eq!(a2, s.a_local);
                    assert!(galois_action_check(&rd, &s).unwrap(), "{label} {fam:?}");
                }
            }
        }
    }

    #[test]
    fn mutated_seed_fails_action_check() {
        let rd = RootDatum::from_label("A1").unwrap();
        let al = rd.positive_roots()[0].clone();
        let mut s = make_seed(&rd, &al, Family::PlusT, &Rat::zero(), 6).unwrap();
        s.family = Family::PlusConst;
        assert!(!galois_action_check(&rd, &s).unwrap());
    }

    #[test]
    fn local_equations_are_rational() {
        let rd = RootDatum::from_label("A1").unwrap();
        let al = rd.positive_roots()[0].clone();
        let q = Rat::int(2);
        for fam in Family::ALL {
            let s = make_seed(&rd, &al, fam, &q, 12).unwrap();
            let (i, j) = if fam.uses_negative_root() { (1, 0) } else { (0, 1) };
            // the shifted argument gives t / ((x-q)^2 (x-q+t)), of degree 3
            let d = if fam == Family::MinusTinv { 3 } else { 2 };
            let r = reconstruct(s.a_local.get(i, j), d, 12).unwrap();
            assert!(r.success, "{fam:?}");
            assert!(r.residual(s.a_local.get(i, j)).is_zero());
        }
        // PlusT: t (1/(x-q+t) - 1/(x-q))
        let s = make_seed(&rd, &al, Family::PlusT, &q, 8).unwrap();
        let (dx, _) = f_derivative_closed_forms(&q, 8);
        assert_eq!(*s.a_local.get(0, 1), dx.shift(1).truncate(8));
    }

    #[test]
    fn local_model() {
        let m = LocalModel2x2::new(&Rat::zero(), 8);
        assert!(m.check().pass());
        let mut bad = m.clone();
        let a = bad.a_tilde.get(0, 1).add(&S::t());
        bad.a_tilde.set(0, 1, a);
        assert!(!bad.solves());
    }

    #[test]
    fn nonrationality_certificate() {
        for q in [Rat::zero(), Rat::int(5), Rat::new(-7, 3)] {
            assert!(certify_nonrational(&q));
        }
        let q = Rat::int(1);
        assert_eq!(R::pole(&q, 1, Rat::int(-1)).residue(&q), Rat::int(-1));
        // d/dx 1/(x-q) has only a double pole: no obstruction
        let g = R::pole(&q, 1, Rat::one()).dx();
        assert!(!has_log_obstruction(&g, &[q]));
    }
}
