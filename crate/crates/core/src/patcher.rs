//! Simultaneous factorization `Y_i = Z_i^-1 Y` for inputs `≡ I mod t`.
//!
//! `Y` is built order by order. At order `s` the errors `E_i = [t^s](Y Y_i^-1)`
//! are split: the principal parts of every `E_j` at its own point go into a
//! global correction `C`, and `Y ← (I + t^s C) Y`. After the update each
//! `[t^s](Y Y_i^-1) = E_i + C` is regular at `q_i`, so `Z_i = Y Y_i^-1` has
//! coefficients regular at `q_i` while `Y` only ever gains principal parts at
//! the points.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::Rat;
use crate::matrix::{Mat, TMatrix};
use crate::ratfunc::RatFunc;
use crate::series::TSeries;
use crate::tower::{in_f0_ring, in_fi_ring, PointSet};

type RMat = Mat<RatFunc<Rat>>;

/// Local matrices `Y_i`, one per point, to be factored to order `target`.
#[derive(Clone)]
pub struct PatchProblem {
    pub ps: PointSet,
    pub inputs: Vec<TMatrix<Rat>>,
    pub target: i64,
}

#[derive(Clone)]
pub struct PatchSolution {
    pub y: TMatrix<Rat>,
    pub z: Vec<TMatrix<Rat>>,
    pub achieved_order: i64,
}

impl PatchProblem {
    pub fn new(ps: PointSet, inputs: Vec<TMatrix<Rat>>, target: i64) -> Result<PatchProblem> {
        let p = PatchProblem { ps, inputs, target };
        p.validate()?;
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.inputs[0].rows()
    }

    fn validate(&self) -> Result<()> {
        if self.inputs.len() != self.ps.len() {
            return Err(Error::Shape(format!(
                "{} matrices for {} points",
                self.inputs.len(),
                self.ps.len()
            )));
        }
        if self.target < 1 {
            return Err(Error::InvalidPrecision(format!("target order {}", self.target)));
        }
        let n = self.inputs[0].rows();
        for (i, y) in self.inputs.iter().enumerate() {
            if !y.is_square() || y.rows() != n {
                return Err(Error::Shape(format!("input {i} is not {n}x{n}")));
            }
            if let Some(p) = y.prec() {
                if p < self.target {
                    return Err(Error::PrecisionExhausted {
                        have: p,
                        target: self.target,
                    });
                }
            }
            if !y.is_identity_mod_t() {
                return Err(Error::NotIdentityModT { index: i });
            }
        }
        Ok(())
    }
}

/// Principal parts of `e` at every point, negated, and the remainder
/// `d = e + c`, which is regular at every point (in particular at `q_i`).
pub fn additive_split(e: &RMat, ps: &PointSet) -> Result<(RMat, RMat)> {
    let c = negated_principal_parts(e, ps, None)?;
    let d = e.add(&c);
    Ok((c, d))
}

/// `-sum_q pp_q(e)` over the points (or only at `only`), rejecting poles
/// elsewhere.
fn negated_principal_parts(e: &RMat, ps: &PointSet, only: Option<&Rat>) -> Result<RMat> {
    let pts = ps.points();
    let mut out = Vec::with_capacity(e.rows() * e.cols());
    for v in e.entries() {
        if let Some(bad) = v.pole_points().find(|p| !pts.contains(p)) {
            return Err(Error::pole_at(bad));
        }
        if let Some((num, den)) = v.remainder() {
            return Err(Error::PoleOutsidePointSet {
                location: format!("roots of {den:?} (numerator {num:?})"),
            });
        }
        let mut acc = RatFunc::zero();
        for p in v.poles() {
            if only.is_none_or(|q| *q == p.at) {
                acc = acc.sub(&RatFunc::principal(&p.at, p.coeffs.clone()));
            }
        }
        out.push(acc);
    }
    Mat::new(e.rows(), e.cols(), out)
}

fn coeff_mats(m: &TMatrix<Rat>, n: i64) -> Vec<RMat> {
    (0..n).map(|k| m.coeff(k)).collect()
}

/// `[t^s]` of the product of two coefficient lists (both start at `t^0`).
fn product_coeff(a: &[RMat], b: &[RMat], s: usize) -> RMat {
    let dim = a[0].rows();
    let mut acc: RMat = Mat::zeros(dim, dim);
    for k in 0..=s {
        if a[k].is_zero() || b[s - k].is_zero() {
            continue;
        }
        acc = acc.add(&a[k].mul(&b[s - k]));
    }
    acc
}

/// Runs the order-by-order factorization to `p.target`.
pub fn factor_simultaneous(p: &PatchProblem) -> Result<PatchSolution> {
    p.validate()?;
    let n = p.target;
    let dim = p.dim();
    let w: Vec<Vec<RMat>> = p
        .inputs
        .par_iter()
        .map(|y| y.inv_to(n).map(|inv| coeff_mats(&inv, n)))
        .collect::<Result<_>>()?;

    let mut y: Vec<RMat> = vec![Mat::identity(dim)];
    y.extend((1..n).map(|_| Mat::zeros(dim, dim)));

    for s in 1..n as usize {
        let errors: Vec<RMat> = w.par_iter().map(|wi| product_coeff(&y, wi, s)).collect();
        let mut c: RMat = Mat::zeros(dim, dim);
        for (i, e) in errors.iter().enumerate() {
            c = c.add(&negated_principal_parts(e, &p.ps, Some(p.ps.get(i)))?);
        }
        for (i, e) in errors.iter().enumerate() {
            let fixed = e.add(&c);
            if !fixed.entries().iter().all(|v| v.pole_free_at(p.ps.get(i))) {
                return Err(Error::pole_at(p.ps.get(i)));
            }
        }
        if c.is_zero() {
            continue;
        }
        // Y ← (I + t^s C) Y, applied from the top so lower orders are read unchanged
        for m in (s..n as usize).rev() {
            let add = c.mul(&y[m - s]);
            y[m] = y[m].add(&add);
        }
    }

    let y_t = TMatrix::from_coeff_mats(&y, Some(n));
    let z = p
        .inputs
        .par_iter()
        .zip(&w)
        .map(|(_, wi)| TMatrix::from_coeff_mats(wi, Some(n)))
        .map(|wi| y_t.mul(&wi).truncate(n))
        .collect();
    Ok(PatchSolution {
        y: y_t,
        z,
        achieved_order: n,
    })
}

/// Per-point verification results.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointPatchReport {
    pub index: usize,
    /// Order to which `Z_i^-1 Y - Y_i` vanishes.
    pub residual_order: i64,
    pub z_in_fi_ring: bool,
    pub z_identity_mod_t: bool,
    pub det_relation: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatchReport {
    pub points: Vec<PointPatchReport>,
    pub y_in_f0_ring: bool,
    pub y_identity_mod_t: bool,
    pub target: i64,
}

impl PatchReport {
    pub fn pass(&self) -> bool {
        self.y_in_f0_ring
            && self.y_identity_mod_t
            && self.points.iter().all(|r| {
                r.residual_order >= self.target && r.z_in_fi_ring && r.z_identity_mod_t && r.det_relation
            })
    }

    pub fn failing_points(&self) -> Vec<usize> {
        self.points
            .iter()
            .filter(|r| {
                r.residual_order < self.target || !r.z_in_fi_ring || !r.z_identity_mod_t || !r.det_relation
            })
            .map(|r| r.index)
            .collect()
    }

    /// Smallest per-point verified order.
    pub fn verified_order(&self) -> i64 {
        self.points.iter().map(|r| r.residual_order).min().unwrap_or(0)
    }
}

/// Independently recomputes `Z_i^-1 Y - Y_i`, memberships and determinants.
pub fn verify_patch(p: &PatchProblem, s: &PatchSolution) -> PatchReport {
    let target = s.achieved_order;
    let y = s.y.truncate(target);
    let det_y = y.det();
    let points = (0..p.ps.len())
        .into_par_iter()
        .map(|i| {
            let q = p.ps.get(i);
            let z = s.z.get(i).map(|z| z.truncate(target));
            let Some(z) = z else {
                return PointPatchReport {
                    index: i,
                    residual_order: 0,
                    z_in_fi_ring: false,
                    z_identity_mod_t: false,
                    det_relation: false,
                };
            };
            let residual_order = match z.inv() {
                Ok(zi) => {
                    let r = zi.mul(&y).sub(&p.inputs[i].truncate(target));
                    r.zero_order()
                }
                Err(_) => 0,
            };
            let det_relation = z.det().mul(&p.inputs[i].det()) == det_y;
            PointPatchReport {
                index: i,
                residual_order,
                z_in_fi_ring: z.entries().iter().all(|e| in_fi_ring(e, q)),
                z_identity_mod_t: z.is_identity_mod_t(),
                det_relation,
            }
        })
        .collect();
    PatchReport {
        points,
        y_in_f0_ring: y.entries().iter().all(|e| in_f0_ring(e, &p.ps)),
        y_identity_mod_t: y.is_identity_mod_t(),
        target,
    }
}

/// Determinant of each matrix is `1 + O(t)`.
pub fn det_is_one_mod_t(m: &TMatrix<Rat>) -> bool {
    let d = m.det();
    d.coeff(0) == RatFunc::one() && d.valuation().is_none_or(|v| v >= 0)
}

/// Convenience: `u_+(c)` or `u_-(c)` in `SL_2`.
pub fn sl2_unipotent(upper: bool, c: &TSeries<Rat>) -> TMatrix<Rat> {
    let one = TSeries::one();
    let z = TSeries::zero_exact();
    let data = if upper {
        vec![one.clone(), c.clone(), z, one]
    } else {
        vec![one.clone(), z, c.clone(), one]
    };
    Mat::new(2, 2, data).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    type R = RatFunc<Rat>;
    type S = TSeries<Rat>;

    fn q(n: i64) -> Rat {
        Rat::int(n)
    }

    #[test]
    fn split_examples() {
        let ps = PointSet::new(vec![q(1), q(2)]).unwrap();
        let e: RMat = Mat::new(1, 1, vec![R::pole(&q(1), 1, Rat::one())]).unwrap();
        let (c, d) = additive_split(&e, &ps).unwrap();
        assert_eq!(*c.get(0, 0), R::pole(&q(1), 1, Rat::int(-1)));
        assert!(d.is_zero());

        let e: RMat = Mat::new(1, 1, vec![R::pole(&q(2), 1, Rat::one())]).unwrap();
        let (_, d) = additive_split(&e, &ps).unwrap();
        assert!(d.get(0, 0).pole_free_at(&q(1)));

        // (x^2 + 1)/(x - 1) = x + 1 + 2/(x - 1)
        let num = crate::poly::Poly::from_rats(&[q(1), q(0), q(1)]);
        let den = crate::poly::Poly::from_rats(&[q(-1), q(1)]);
        let e: RMat = Mat::new(1, 1, vec![R::from_fraction(num, den).unwrap()]).unwrap();
        let (c, d) = additive_split(&e, &ps).unwrap();
        assert_eq!(*c.get(0, 0), R::pole(&q(1), 1, q(-2)));
        assert_eq!(*d.get(0, 0), R::from_poly(crate::poly::Poly::from_rats(&[q(1), q(1)])));

        let e: RMat = Mat::new(1, 1, vec![R::pole(&q(5), 1, Rat::one())]).unwrap();
        assert!(matches!(additive_split(&e, &ps), Err(Error::PoleOutsidePointSet { .. })));
    }

    fn check(p: &PatchProblem) -> PatchSolution {
        let s = factor_simultaneous(p).unwrap();
        let rep = verify_patch(p, &s);
        assert!(rep.pass(), "{rep:?}");
        s
    }

    #[test]
    fn identity_inputs() {
        let ps = PointSet::consecutive(3);
        let id = TMatrix::<Rat>::identity(2).truncate(6);
        let p = PatchProblem::new(ps, vec![id.clone(), id.clone(), id.clone()], 6).unwrap();
        let s = check(&p);
        assert_eq!(s.y, id);
        assert!(s.z.iter().all(|z| *z == id));
    }

    #[test]
    fn two_point_sl2() {
        let (q1, q2) = (q(0), q(1));
        let ps = PointSet::new(vec![q1.clone(), q2.clone()]).unwrap();
        let n = 8;
        let c1 = S::monomial(R::pole(&q1, 1, Rat::one()), 1).truncate(n);
        let c2 = S::monomial(R::pole(&q2, 1, Rat::one()), 1).truncate(n);
        let p = PatchProblem::new(ps, vec![sl2_unipotent(true, &c1), sl2_unipotent(false, &c2)], n).unwrap();
        let s = check(&p);
        assert!(det_is_one_mod_t(&s.y));
        // the answer is not just one of the inputs
        assert!(s.y != p.inputs[0] && s.y != p.inputs[1]);
    }

    #[test]
    fn single_point_trivial_certificate() {
        let ps = PointSet::new(vec![q(3)]).unwrap();
        let c = S::monomial(R::pole(&q(3), 2, Rat::new(1, 2)), 1).truncate(6);
        let y1 = sl2_unipotent(true, &c);
        let p = PatchProblem::new(ps, vec![y1.clone()], 6).unwrap();
        let s = check(&p);
        let trivial = PatchSolution {
            y: y1.clone(),
            z: vec![TMatrix::identity(2).truncate(6)],
            achieved_order: 6,
        };
        assert!(verify_patch(&p, &trivial).pass());
        // idempotence: Y fed back as a single-point problem
        let again = PatchProblem::new(PointSet::new(vec![q(3)]).unwrap(), vec![s.y.clone()], 6).unwrap();
        assert!(verify_patch(&again, &factor_simultaneous(&again).unwrap()).pass());
    }

    #[test]
    fn mutations_are_flagged() {
        let ps = PointSet::new(vec![q(0), q(1)]).unwrap();
        let n = 6;
        let c1 = S::monomial(R::pole(&q(0), 1, Rat::one()), 1).truncate(n);
        let c2 = S::monomial(R::pole(&q(1), 1, Rat::one()), 1).truncate(n);
        let p = PatchProblem::new(ps, vec![sl2_unipotent(true, &c1), sl2_unipotent(false, &c2)], n).unwrap();
        let s = factor_simultaneous(&p).unwrap();
        let mut bad = s.clone();
        let e = bad.z[0].get(0, 1).add(&S::monomial(R::one(), 3));
        bad.z[0].set(0, 1, e);
        let rep = verify_patch(&p, &bad);
        assert!(!rep.pass());
        assert_eq!(rep.failing_points(), vec![0]);
        assert_eq!(rep.points[0].residual_order, 3);

        let mut lower = s.clone();
        lower.achieved_order = 4;
        assert!(verify_patch(&p, &lower).pass());
    }

    #[test]
    fn input_validation() {
        let ps = PointSet::new(vec![q(0)]).unwrap();
        let c = S::monomial(R::pole(&q(0), 1, Rat::one()), 0).truncate(6);
        let bad = sl2_unipotent(true, &c);
        assert_eq!(
            PatchProblem::new(ps.clone(), vec![bad], 6).err(),
            Some(Error::NotIdentityModT { index: 0 })
        );
        let short = TMatrix::<Rat>::identity(2).truncate(4);
        assert!(matches!(
            PatchProblem::new(ps.clone(), vec![short], 6),
            Err(Error::PrecisionExhausted { .. })
        ));
        let outside = sl2_unipotent(true, &S::monomial(R::pole(&q(9), 1, Rat::one()), 1).truncate(6));
        let p = PatchProblem::new(ps, vec![outside], 6).unwrap();
        assert!(matches!(factor_simultaneous(&p), Err(Error::PoleOutsidePointSet { .. })));
    }
}
