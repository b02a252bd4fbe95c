//! JSON forms of bundles, patch problems and series. Every rational is an
//! exact `"p/q"` string; polynomials are coefficient arrays, low degree first.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Rat;
use crate::forge::{EntryReconstruction, EquationBundle, VerificationReport};
use crate::matrix::{Mat, TMatrix};
use crate::patcher::{PatchProblem, PatchSolution};
use crate::poly::Poly;
use crate::ratfunc::RatFunc;
use crate::rootdata::{Root, RootDatum};
use crate::seed::{Family, LocalSeed};
use crate::series::TSeries;
use crate::tower::{PointSet, Reconstruction};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatFuncJson {
    pub num: Vec<Rat>,
    pub den: Vec<Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub t_min: i64,
    /// `null` for an exact (finite) series.
    pub prec: Option<i64>,
    pub coeffs: Vec<RatFuncJson>,
}

pub type MatrixJson = Vec<Vec<SeriesJson>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupJson {
    #[serde(rename = "type")]
    pub label: String,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedJson {
    pub point: Rat,
    pub family: Family,
    pub root: Root,
    pub f: SeriesJson,
    pub c: SeriesJson,
    pub y_local: MatrixJson,
    pub a_local: MatrixJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatchJson {
    pub y: MatrixJson,
    pub z: Vec<MatrixJson>,
    pub achieved_order: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ReconstructionJson {
    Certified {
        row: usize,
        col: usize,
        degree_bounds: (usize, usize),
        verified_order: i64,
        numerator: SeriesJson,
        denominator: SeriesJson,
    },
    InconclusiveAtBounds {
        row: usize,
        col: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundleFile {
    pub format_version: u32,
    pub group: GroupJson,
    pub points: Vec<Rat>,
    pub precision: i64,
    pub seeds: Vec<SeedJson>,
    pub patch: PatchJson,
    #[serde(rename = "matrix_A")]
    pub matrix_a: MatrixJson,
    pub reconstructions: Vec<ReconstructionJson>,
    pub report: VerificationReport,
}

/// Input of the standalone factorization command.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorFile {
    pub format_version: u32,
    pub points: Vec<Rat>,
    pub precision: i64,
    pub matrices: Vec<MatrixJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorResultFile {
    pub format_version: u32,
    pub points: Vec<Rat>,
    pub patch: PatchJson,
    pub residual_orders: Vec<i64>,
    pub pass: bool,
}

/// Input of the standalone reconstruction command. `points` are only used
/// as hints when splitting denominators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesFile {
    #[serde(default)]
    pub points: Vec<Rat>,
    pub series: SeriesJson,
}

pub fn ratfunc_to_json(r: &RatFunc<Rat>) -> RatFuncJson {
    let (num, den) = r.to_fraction();
    RatFuncJson {
        num: num.coeffs().to_vec(),
        den: den.coeffs().to_vec(),
    }
}

pub fn ratfunc_from_json(j: &RatFuncJson, hints: &[Rat]) -> Result<RatFunc<Rat>> {
    RatFunc::from_fraction_hinted(Poly::new(j.num.clone()), Poly::new(j.den.clone()), hints)
}

pub fn series_to_json(s: &TSeries<Rat>) -> SeriesJson {
    let t_min = s.valuation().unwrap_or(0);
    let coeffs = match s.max_exponent() {
        Some(top) => (t_min..=top).map(|e| ratfunc_to_json(&s.coeff(e))).collect(),
        None => Vec::new(),
    };
    SeriesJson {
        t_min,
        prec: s.prec(),
        coeffs,
    }
}

pub fn series_from_json(j: &SeriesJson, hints: &[Rat]) -> Result<TSeries<Rat>> {
    let coeffs = j
        .coeffs
        .iter()
        .map(|c| ratfunc_from_json(c, hints))
        .collect::<Result<Vec<_>>>()?;
    Ok(TSeries::new(j.t_min, coeffs, j.prec))
}

pub fn matrix_to_json(m: &TMatrix<Rat>) -> MatrixJson {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| series_to_json(m.get(i, j))).collect())
        .collect()
}

pub fn matrix_from_json(j: &MatrixJson, hints: &[Rat]) -> Result<TMatrix<Rat>> {
    let rows = j.len();
    let cols = j.first().map_or(0, Vec::len);
    if rows == 0 || j.iter().any(|r| r.len() != cols) {
        return Err(Error::Parse("matrix rows must be non-empty and of equal length".into()));
    }
    let data = j
        .iter()
        .flatten()
        .map(|s| series_from_json(s, hints))
        .collect::<Result<Vec<_>>>()?;
    Mat::new(rows, cols, data)
}

fn patch_to_json(p: &PatchSolution) -> PatchJson {
    PatchJson {
        y: matrix_to_json(&p.y),
        z: p.z.iter().map(matrix_to_json).collect(),
        achieved_order: p.achieved_order,
    }
}

fn patch_from_json(j: &PatchJson, hints: &[Rat]) -> Result<PatchSolution> {
    Ok(PatchSolution {
        y: matrix_from_json(&j.y, hints)?,
        z: j.z.iter().map(|z| matrix_from_json(z, hints)).collect::<Result<_>>()?,
        achieved_order: j.achieved_order,
    })
}

pub fn bundle_to_file(b: &EquationBundle) -> BundleFile {
    let seeds = b
        .seeds
        .iter()
        .map(|s| SeedJson {
            point: s.point.clone(),
            family: s.family,
            root: s.root.clone(),
            f: series_to_json(&s.f),
            c: series_to_json(&s.c),
            y_local: matrix_to_json(&s.y_local),
            a_local: matrix_to_json(&s.a_local),
        })
        .collect();
    let reconstructions = b
        .reconstructions
        .iter()
        .map(|r| match &r.certificate {
            Some(c) => ReconstructionJson::Certified {
                row: r.row,
                col: r.col,
                degree_bounds: c.degree_bounds,
                verified_order: c.verified_order,
                numerator: series_to_json(&c.numerator),
                denominator: series_to_json(&c.denominator),
            },
            None => ReconstructionJson::InconclusiveAtBounds { row: r.row, col: r.col },
        })
        .collect();
    BundleFile {
        format_version: FORMAT_VERSION,
        group: GroupJson {
            label: b.rd.label(),
            rank: b.rd.rank(),
        },
        points: b.ps.points().to_vec(),
        precision: b.prec,
        seeds,
        patch: patch_to_json(&b.patch),
        matrix_a: matrix_to_json(&b.a),
        reconstructions,
        report: b.report.clone(),
    }
}

fn check_version(v: u32) -> Result<()> {
    if v == FORMAT_VERSION {
        Ok(())
    } else {
        Err(Error::FormatVersion(v))
    }
}

/// Rebuilds the in-memory bundle. The stored report is carried over as is;
/// callers that want fresh verdicts run `forge::verify_bundle`.
pub fn bundle_from_file(f: &BundleFile) -> Result<EquationBundle> {
    check_version(f.format_version)?;
    let rd = RootDatum::from_label(&f.group.label)?;
    if rd.rank() != f.group.rank {
        return Err(Error::Parse(format!(
            "group {} has rank {}, file says {}",
            f.group.label,
            rd.rank(),
            f.group.rank
        )));
    }
    let ps = PointSet::new(f.points.clone())?;
    let hints = ps.points();
    let seeds = f
        .seeds
        .iter()
        .map(|s| {
            Ok(LocalSeed {
                point: s.point.clone(),
                family: s.family,
                root: s.root.clone(),
                f: series_from_json(&s.f, hints)?,
                c: series_from_json(&s.c, hints)?,
                y_local: matrix_from_json(&s.y_local, hints)?,
                a_local: matrix_from_json(&s.a_local, hints)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let reconstructions = f
        .reconstructions
        .iter()
        .map(|r| {
            Ok(match r {
                ReconstructionJson::Certified {
                    row,
                    col,
                    degree_bounds,
                    verified_order,
                    numerator,
                    denominator,
                } => EntryReconstruction {
                    row: *row,
                    col: *col,
                    certificate: Some(Reconstruction {
                        success: true,
                        numerator: series_from_json(numerator, hints)?,
                        denominator: series_from_json(denominator, hints)?,
                        degree_bounds: *degree_bounds,
                        verified_order: *verified_order,
                    }),
                },
                ReconstructionJson::InconclusiveAtBounds { row, col } => EntryReconstruction {
                    row: *row,
                    col: *col,
                    certificate: None,
                },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EquationBundle {
        rd,
        ps: ps.clone(),
        prec: f.precision,
        seeds,
        patch: patch_from_json(&f.patch, hints)?,
        a: matrix_from_json(&f.matrix_a, hints)?,
        reconstructions,
        report: f.report.clone(),
    })
}

pub fn factor_file(p: &PatchProblem) -> FactorFile {
    FactorFile {
        format_version: FORMAT_VERSION,
        points: p.ps.points().to_vec(),
        precision: p.target,
        matrices: p.inputs.iter().map(matrix_to_json).collect(),
    }
}

/// Parses a factor input without validating it as a patch problem.
pub fn factor_inputs(f: &FactorFile) -> Result<(PointSet, Vec<TMatrix<Rat>>, i64)> {
    check_version(f.format_version)?;
    let ps = PointSet::new(f.points.clone())?;
    let m = f
        .matrices
        .iter()
        .map(|m| matrix_from_json(m, ps.points()))
        .collect::<Result<Vec<_>>>()?;
    Ok((ps, m, f.precision))
}

pub fn factor_result_file(ps: &PointSet, s: &PatchSolution, residual_orders: Vec<i64>, pass: bool) -> FactorResultFile {
    FactorResultFile {
        format_version: FORMAT_VERSION,
        points: ps.points().to_vec(),
        patch: patch_to_json(s),
        residual_orders,
        pass,
    }
}

pub fn to_json_string<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("wire types always serialize")
}

pub fn from_json_str<T: for<'de> Deserialize<'de>>(s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}
