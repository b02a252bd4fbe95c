//! Split root data with explicit matrix realizations.
//!
//! Type `A_l` is realized on `SL_{l+1}` with `X_{e_i - e_j} = E_ij`. Type `C_2`
//! is realized on `Sp_4` in the basis `e1, e2, f1, f2`. Each root comes with
//! an sl2-triple `(X_α, X_{-α}, H_α)`, so `u_α(c) = exp(c X_α)` and the coroot
//! is `α^∨(c) = c^{H_α}`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Rat, Ring};
use crate::matrix::Mat;
use crate::ratfunc::RatFunc;

/// A root, as an integer vector in the standard basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Root(pub Vec<i64>);

impl Root {
    pub fn neg(&self) -> Root {
        Root(self.0.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupType {
    A(usize),
    C2,
}

impl fmt::Display for GroupType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupType::A(l) => write!(f, "A{l}"),
            GroupType::C2 => write!(f, "C2"),
        }
    }
}

impl FromStr for GroupType {
    type Err = Error;
    fn from_str(s: &str) -> Result<GroupType> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("C2") {
            return Ok(GroupType::C2);
        }
        if let Some(rest) = s.strip_prefix(['A', 'a']) {
            if let Ok(l) = rest.parse::<usize>() {
                if (1..=8).contains(&l) {
                    return Ok(GroupType::A(l));
                }
            }
        }
        Err(Error::UnsupportedGroup(s.to_string()))
    }
}

#[derive(Clone, Debug)]
struct RootInfo {
    root: Root,
    positive: bool,
    simple: bool,
    height: i64,
    x: Mat<Rat>,
    /// Exponents of the diagonal cocharacter.
    coroot: Vec<i64>,
}

/// A split root datum together with a faithful matrix representation.
#[derive(Clone, Debug)]
pub struct RootDatum {
    ty: GroupType,
    dim: usize,
    /// Positive roots by (height, vector descending), then their negatives in the same order.
    roots: Vec<RootInfo>,
}

/// Which scalars a realized local group contributes: `u_α(S)`, `u_α(t S)` or `u_α(t^-1 S)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Multiplier {
    One,
    T,
    TInverse,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupDescriptor {
    pub root: Root,
    pub multiplier: Multiplier,
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = match self.multiplier {
            Multiplier::One => "1",
            Multiplier::T => "t",
            Multiplier::TInverse => "t^-1",
        };
        write!(f, "u_{}({m}·S)", self.root)
    }
}

/// Result of [`RootDatum::propgen_hypothesis_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropGenReport {
    pub pass: bool,
    /// Required generators with no matching descriptor.
    pub missing: Vec<GroupDescriptor>,
    /// Descriptors whose root is not in the datum.
    pub invalid: Vec<GroupDescriptor>,
}

fn unit(n: usize, i: usize, j: usize) -> Mat<Rat> {
    Mat::unit(n, i, j)
}

fn sl2_exponents(n: usize, plus: &[usize], minus: &[usize]) -> Vec<i64> {
    let mut v = vec![0; n];
    for &i in plus {
        v[i] += 1;
    }
    for &i in minus {
        v[i] -= 1;
    }
    v
}

impl RootDatum {
    pub fn new(ty: GroupType) -> RootDatum {
        match ty {
            GroupType::A(l) => RootDatum::type_a(l),
            GroupType::C2 => RootDatum::type_c2(),
        }
    }

    /// Parses labels like `A1`, `A3`, `C2`.
    pub fn from_label(s: &str) -> Result<RootDatum> {
        Ok(RootDatum::new(s.parse()?))
    }

    fn type_a(l: usize) -> RootDatum {
        let n = l + 1;
        let mut pos = Vec::new();
        for h in 1..n {
            for i in 0..n - h {
                let j = i + h;
                let mut v = vec![0; n];
                v[i] = 1;
                v[j] = -1;
                pos.push(RootInfo {
                    root: Root(v),
                    positive: true,
                    simple: h == 1,
                    height: h as i64,
                    x: unit(n, i, j),
                    coroot: sl2_exponents(n, &[i], &[j]),
                });
            }
        }
        RootDatum::with_negatives(GroupType::A(l), n, pos, |r| {
            let i = r.root.0.iter().position(|&c| c == 1).unwrap();
            let j = r.root.0.iter().position(|&c| c == -1).unwrap();
            unit(n, j, i)
        })
    }

    fn type_c2() -> RootDatum {
        let n = 4;
        let e = |i, j| unit(n, i, j);
        // (root, simple, height, X_α, X_-α, coroot exponents)
        let table = vec![
            (vec![1, -1], true, 1, e(0, 1).sub(&e(3, 2)), e(1, 0).sub(&e(2, 3)), vec![1, -1, -1, 1]),
            (vec![0, 2], true, 1, e(1, 3), e(3, 1), vec![0, 1, 0, -1]),
            (vec![1, 1], false, 2, e(0, 3).add(&e(1, 2)), e(3, 0).add(&e(2, 1)), vec![1, 1, -1, -1]),
            (vec![2, 0], false, 3, e(0, 2), e(2, 0), vec![1, 0, -1, 0]),
        ];
        let mut pos = Vec::new();
        let mut negs = Vec::new();
        for (v, simple, h, x, xm, co) in table {
            pos.push(RootInfo {
                root: Root(v),
                positive: true,
                simple,
                height: h,
                x,
                coroot: co,
            });
            negs.push(xm);
        }
        let mut k = 0;
        RootDatum::with_negatives(GroupType::C2, n, pos, move |_| {
            k += 1;
            negs[k - 1].clone()
        })
    }

    fn with_negatives(
        ty: GroupType,
        dim: usize,
        mut pos: Vec<RootInfo>,
        mut neg_x: impl FnMut(&RootInfo) -> Mat<Rat>,
    ) -> RootDatum {
        pos.sort_by(|a, b| a.height.cmp(&b.height).then(b.root.cmp(&a.root)));
        let negs: Vec<RootInfo> = pos
            .iter()
            .map(|r| RootInfo {
                root: r.root.neg(),
                positive: false,
                simple: false,
                height: -r.height,
                x: neg_x(r),
                coroot: r.coroot.iter().map(|c| -c).collect(),
            })
            .collect();
        pos.extend(negs);
        RootDatum { ty, dim, roots: pos }
    }

    pub fn group_type(&self) -> GroupType {
        self.ty
    }

    pub fn label(&self) -> String {
        self.ty.to_string()
    }

    pub fn rank(&self) -> usize {
        match self.ty {
            GroupType::A(l) => l,
            GroupType::C2 => 2,
        }
    }

    /// Dimension of the matrix representation.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of positive roots.
    pub fn m(&self) -> usize {
        self.roots.len() / 2
    }

    pub fn positive_roots(&self) -> Vec<Root> {
        self.roots.iter().filter(|r| r.positive).map(|r| r.root.clone()).collect()
    }

    pub fn simple_roots(&self) -> Vec<Root> {
        self.roots.iter().filter(|r| r.simple).map(|r| r.root.clone()).collect()
    }

    pub fn roots(&self) -> Vec<Root> {
        self.roots.iter().map(|r| r.root.clone()).collect()
    }

    pub fn contains(&self, root: &Root) -> bool {
        self.roots.iter().any(|r| r.root == *root)
    }

    pub fn is_positive(&self, root: &Root) -> Result<bool> {
        Ok(self.info(root)?.positive)
    }

    fn info(&self, root: &Root) -> Result<&RootInfo> {
        self.roots
            .iter()
            .find(|r| r.root == *root)
            .ok_or_else(|| Error::UnknownRoot(root.0.clone()))
    }

    /// The nilpotent generator `X_α`.
    pub fn nilpotent(&self, root: &Root) -> Result<&Mat<Rat>> {
        Ok(&self.info(root)?.x)
    }

    /// `u_α(c) = exp(c X_α)`, a polynomial in `c`.
    pub fn u_matrix<R: Ring>(&self, root: &Root, c: &R) -> Result<Mat<R>> {
        let x = self.nilpotent(root)?;
        let n = self.dim;
        let mut out: Mat<R> = Mat::identity(n);
        let mut xk = x.clone();
        let mut ck = c.clone();
        let mut fact = Rat::one();
        let mut k = 1;
        while !xk.is_zero() {
            fact = &fact * &Rat::int(k);
            let scale = fact.recip().unwrap();
            for i in 0..n {
                for j in 0..n {
                    let e = xk.get(i, j);
                    if !e.is_zero() {
                        let v = out.get(i, j).add(&ck.scale(&(e * &scale)));
                        out.set(i, j, v);
                    }
                }
            }
            xk = xk.mul(x);
            ck = ck.mul(c);
            k += 1;
        }
        Ok(out)
    }

    /// `n_α = u_α(1) u_{-α}(-1) u_α(1)`.
    pub fn weyl_rep(&self, root: &Root) -> Result<Mat<Rat>> {
        let one = Rat::one();
        let a = self.u_matrix(root, &one)?;
        let b = self.u_matrix(&root.neg(), &-&one)?;
        Ok(a.mul(&b).mul(&a))
    }

    /// The cocharacter value `α^∨(c)`, diagonal in this realization.
    pub fn coroot_matrix<F: Field>(&self, root: &Root, c: &F) -> Result<Mat<F>> {
        let info = self.info(root)?;
        let ci = c
            .inv()
            .ok_or_else(|| Error::NonInvertibleScalar(format!("{c:?}")))?;
        let mut m = Mat::identity(self.dim);
        for (i, &e) in info.coroot.iter().enumerate() {
            let v = match e.cmp(&0) {
                std::cmp::Ordering::Equal => F::one(),
                std::cmp::Ordering::Greater => c.pow(e as u32),
                std::cmp::Ordering::Less => ci.pow((-e) as u32),
            };
            m.set(i, i, v);
        }
        Ok(m)
    }

    /// `u_α(f) u_{-α}(g) u_α(f)`.
    pub fn springer_product<F: Field>(&self, root: &Root, f: &F, g: &F) -> Result<Mat<F>> {
        let a = self.u_matrix(root, f)?;
        let b = self.u_matrix(&root.neg(), g)?;
        Ok(a.mul(&b).mul(&a))
    }

    /// Checks `u_α(f) u_{-α}(-f^-1) u_α(f) = α^∨(f) n_α` for a given invertible `f`.
    pub fn springer_identity_holds<F: Field>(&self, root: &Root, f: &F) -> Result<bool> {
        let fi = f
            .inv()
            .ok_or_else(|| Error::NonInvertibleScalar(format!("{f:?}")))?;
        let lhs = self.springer_product(root, f, &fi.neg())?;
        let n = self.weyl_rep(root)?.map(F::from_rat);
        Ok(lhs == self.coroot_matrix(root, f)?.mul(&n))
    }

    /// The Springer identity with a formal invertible `f = s` over `Q(s)`.
    pub fn springer_identity_check(&self, root: &Root) -> Result<bool> {
        self.springer_identity_holds(root, &RatFunc::<Rat>::x())
    }

    /// The same identity with `u_{-α}(+f^-1)` in the middle factor, as the
    /// sign appears in some printed proofs. It does not hold as a matrix
    /// identity; kept so the discrepancy can be reported.
    pub fn springer_plus_sign_holds(&self, root: &Root) -> Result<bool> {
        let s = RatFunc::<Rat>::x();
        let lhs = self.springer_product(root, &s, &s.inv().unwrap())?;
        let n = self.weyl_rep(root)?.map(RatFunc::from_rat);
        Ok(lhs == self.coroot_matrix(root, &s)?.mul(&n))
    }

    /// Finite form of the generation hypotheses: for each simple `α` the
    /// groups `u_{±α}(S)` (supplying `u_{±α}(±1)`), and for each positive
    /// `α` the groups `u_α(tS)` and `u_{-α}(t^-1 S)` (supplying `u_α(f)` and
    /// `u_{-α}(-f^-1)` with `f = t`, transcendental over the constants).
    pub fn propgen_hypothesis_check(&self, realized: &[GroupDescriptor]) -> PropGenReport {
        let mut required = Vec::new();
        for r in self.roots.iter().filter(|r| r.simple) {
            required.push(GroupDescriptor {
                root: r.root.clone(),
                multiplier: Multiplier::One,
            });
            required.push(GroupDescriptor {
                root: r.root.neg(),
                multiplier: Multiplier::One,
            });
        }
        for r in self.roots.iter().filter(|r| r.positive) {
            required.push(GroupDescriptor {
                root: r.root.clone(),
                multiplier: Multiplier::T,
            });
            required.push(GroupDescriptor {
                root: r.root.neg(),
                multiplier: Multiplier::TInverse,
            });
        }
        let invalid: Vec<GroupDescriptor> = realized
            .iter()
            .filter(|d| !self.contains(&d.root))
            .cloned()
            .collect();
        let missing: Vec<GroupDescriptor> = required
            .into_iter()
            .filter(|d| !realized.contains(d))
            .collect();
        PropGenReport {
            pass: missing.is_empty() && invalid.is_empty(),
            missing,
            invalid,
        }
    }
}
