//! Dense matrices over a [`Ring`], and the series-matrix operations used by
//! the patching construction.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, Rat, Ring};
use crate::ratfunc::RatFunc;
use crate::series::TSeries;

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Mat<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

/// Matrix with truncated-series entries.
pub type TMatrix<K> = Mat<TSeries<K>>;

impl<R: Ring> Mat<R> {
    pub fn new(rows: usize, cols: usize, data: Vec<R>) -> Result<Mat<R>> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Mat { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> R) -> Mat<R> {
        let mut f = f;
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Mat { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Mat<R> {
        Mat::from_fn(rows, cols, |_, _| R::zero())
    }

    pub fn identity(n: usize) -> Mat<R> {
        Mat::from_fn(n, n, |i, j| if i == j { R::one() } else { R::zero() })
    }

    /// Matrix unit `E_ij` of size `n`.
    pub fn unit(n: usize, i: usize, j: usize) -> Mat<R> {
        Mat::from_fn(n, n, |a, b| if (a, b) == (i, j) { R::one() } else { R::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[R] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Mat<S> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    fn same_shape(&self, rhs: &Mat<R>) -> Result<()> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(Error::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, rhs: &Mat<R>) -> Result<Mat<R>> {
        self.same_shape(rhs)?;
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.add(b)).collect(),
        })
    }

    pub fn try_sub(&self, rhs: &Mat<R>) -> Result<Mat<R>> {
        self.same_shape(rhs)?;
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.sub(b)).collect(),
        })
    }

    pub fn try_mul(&self, rhs: &Mat<R>) -> Result<Mat<R>> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out: Mat<R> = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let idx = i * rhs.cols + j;
                        out.data[idx] = out.data[idx].add(&a.mul(b));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Panics on shape mismatch; see [`Mat::try_add`].
    pub fn add(&self, rhs: &Mat<R>) -> Mat<R> {
        self.try_add(rhs).expect("matrix shapes")
    }

    pub fn sub(&self, rhs: &Mat<R>) -> Mat<R> {
        self.try_sub(rhs).expect("matrix shapes")
    }

    pub fn mul(&self, rhs: &Mat<R>) -> Mat<R> {
        self.try_mul(rhs).expect("matrix shapes")
    }

    pub fn neg(&self) -> Mat<R> {
        self.map(|e| e.neg())
    }

    pub fn scale(&self, c: &R) -> Mat<R> {
        self.map(|e| e.mul(c))
    }

    pub fn scale_rat(&self, q: &Rat) -> Mat<R> {
        self.map(|e| e.scale(q))
    }

    pub fn transpose(&self) -> Mat<R> {
        Mat::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn trace(&self) -> R {
        assert!(self.is_square());
        (0..self.rows).fold(R::zero(), |acc, i| acc.add(self.get(i, i)))
    }

    /// Determinant by cofactor expansion; meant for the small sizes used here.
    pub fn det(&self) -> R {
        assert!(self.is_square());
        let idx: Vec<usize> = (0..self.rows).collect();
        self.minor_det(&idx, 0)
    }

    fn minor_det(&self, cols: &[usize], row: usize) -> R {
        if cols.is_empty() {
            return R::one();
        }
        let mut acc = R::zero();
        for (k, &c) in cols.iter().enumerate() {
            let a = self.get(row, c);
            if a.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = a.mul(&self.minor_det(&rest, row + 1));
            acc = if k % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
        }
        acc
    }

    /// Commutator `self * rhs - rhs * self`.
    pub fn bracket(&self, rhs: &Mat<R>) -> Mat<R> {
        self.mul(rhs).sub(&rhs.mul(self))
    }
}

impl<F: Field> Mat<F> {
    /// Gauss-Jordan inverse; `None` if singular.
    pub fn inverse(&self) -> Option<Mat<F>> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut b = Mat::<F>::identity(n);
        for col in 0..n {
            let piv = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            if piv != col {
                for j in 0..n {
                    a.data.swap(piv * n + j, col * n + j);
                    b.data.swap(piv * n + j, col * n + j);
                }
            }
            let inv = a.get(col, col).inv()?;
            for j in 0..n {
                let v = a.get(col, j).mul(&inv);
                a.set(col, j, v);
                let v = b.get(col, j).mul(&inv);
                b.set(col, j, v);
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for j in 0..n {
                    let v = a.get(r, j).sub(&f.mul(a.get(col, j)));
                    a.set(r, j, v);
                    let v = b.get(r, j).sub(&f.mul(b.get(col, j)));
                    b.set(r, j, v);
                }
            }
        }
        Some(b)
    }
}

impl<R: Ring> fmt::Debug for Mat<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{:?}; ", self.get(i, j))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl<K: Field> TMatrix<K> {
    /// Embed a constant matrix.
    pub fn from_rf(m: &Mat<RatFunc<K>>) -> TMatrix<K> {
        m.map(|c| TSeries::constant(c.clone()))
    }

    /// Minimum precision over the entries (`None` if all exact).
    pub fn prec(&self) -> Option<i64> {
        self.data.iter().filter_map(|e| e.prec()).min()
    }

    /// Lowest t-exponent with a nonzero entry, or `None` for the zero matrix.
    pub fn valuation(&self) -> Option<i64> {
        self.data.iter().filter_map(|e| e.valuation()).min()
    }

    pub fn truncate(&self, n: i64) -> TMatrix<K> {
        self.map(|e| e.truncate(n))
    }

    pub fn dx(&self) -> TMatrix<K> {
        self.map(|e| e.dx())
    }

    pub fn dt(&self) -> TMatrix<K> {
        self.map(|e| e.dt())
    }

    /// Matrix of `t^e` coefficients.
    pub fn coeff(&self, e: i64) -> Mat<RatFunc<K>> {
        self.map(|s| s.coeff(e))
    }

    /// `sum_e coeffs[e] t^e + O(t^prec)`.
    pub fn from_coeff_mats(coeffs: &[Mat<RatFunc<K>>], prec: Option<i64>) -> TMatrix<K> {
        let (r, c) = (coeffs[0].rows, coeffs[0].cols);
        Mat::from_fn(r, c, |i, j| {
            TSeries::from_coeffs(coeffs.iter().map(|m| m.get(i, j).clone()).collect(), prec)
        })
    }

    /// True iff the matrix is `I + O(t)`: no negative powers and identity at `t^0`.
    pub fn is_identity_mod_t(&self) -> bool {
        self.valuation().is_none_or(|v| v >= 0)
            && self.coeff(0) == Mat::identity(self.rows)
            && self.prec().is_none_or(|p| p >= 1)
    }

    /// Largest `n` with `self = 0 mod t^n`, capped by the known precision.
    pub fn zero_order(&self) -> i64 {
        let v = self.valuation().unwrap_or(i64::MAX);
        self.prec().map_or(v, |p| v.min(p))
    }

    /// Inverse of a square series matrix whose leading coefficient matrix
    /// is invertible over `K(x)`.
    ///
    /// With valuation `v` and precision `P`, the inverse is known mod
    /// `t^(P - 2v)`. Exact inputs need [`TMatrix::inv_to`].
    pub fn inv(&self) -> Result<TMatrix<K>> {
        let p = self.prec().ok_or(Error::UnboundedPrecision)?;
        self.inv_with_prec(p)
    }

    /// Inverse computed modulo `t^prec`.
    pub fn inv_to(&self, prec: i64) -> Result<TMatrix<K>> {
        let v = self.valuation().ok_or(Error::SingularLeadingMatrix)?;
        let p = self.prec().map_or(prec + 2 * v, |p| p.min(prec + 2 * v));
        self.inv_with_prec(p)
    }

    fn inv_with_prec(&self, p: i64) -> Result<TMatrix<K>> {
        if !self.is_square() {
            return Err(Error::Shape("inverse of a non-square matrix".into()));
        }
        let v = self.valuation().ok_or(Error::SingularLeadingMatrix)?;
        let n = (p - v).max(0) as usize;
        let m: Vec<Mat<RatFunc<K>>> = (0..n as i64).map(|k| self.coeff(v + k)).collect();
        if n == 0 {
            return Ok(Mat::from_fn(self.rows, self.cols, |_, _| TSeries::zero_to(p - 2 * v)));
        }
        let b0 = m[0].inverse().ok_or(Error::SingularLeadingMatrix)?;
        let mut b = vec![b0.clone()];
        for k in 1..n {
            let mut acc = Mat::zeros(self.rows, self.cols);
            for j in 1..=k {
                if m[j].is_zero() || b[k - j].is_zero() {
                    continue;
                }
                acc = acc.add(&m[j].mul(&b[k - j]));
            }
            b.push(b0.mul(&acc).neg());
        }
        Ok(Mat::from_coeff_mats(&b, Some(p - v)).map(|s| s.shift(-v)))
    }

    pub fn map_coeffs<L: Field>(&self, f: impl Fn(&K) -> L + Copy) -> TMatrix<L> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|s| s.map_coeffs(f)).collect(),
        }
    }
}
