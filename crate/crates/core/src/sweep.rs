//! Convergence tables: exact counts against the certified leading constant.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;
use thiserror::Error;

use crate::constants::{leading_constant_direct, to_decimal, CertifiedReal, ConstantsError, CurveZeta};
use crate::count::{count_fast, CountError, CountOptions, CountResult};
use crate::gf::FieldCtx;
use crate::picard::CurveClass;

/// Column order of the CSV output.
pub const CSV_COLUMNS: [&str; 8] = ["class", "d", "d1", "hom_count", "ratio", "c_mid", "c_rad", "rel_err"];

const DIGITS: usize = 15;

#[derive(Debug, Error)]
pub enum SweepError {
    #[error(transparent)]
    Count(#[from] CountError),
    #[error(transparent)]
    Constant(#[from] ConstantsError),
    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub class: String,
    pub d: i64,
    pub d1: i64,
    pub hom_count: String,
    pub ratio: String,
    pub c_mid: String,
    pub c_rad: String,
    pub rel_err: String,
    #[serde(skip)]
    pub ratio_exact: BigRational,
    #[serde(skip)]
    pub rel_err_exact: BigRational,
}

/// `hom_count / q^(d+2)` exactly.
pub fn exact_ratio(r: &CountResult) -> BigRational {
    let denom = BigInt::from(r.q).pow((r.d + 2) as u32);
    BigRational::new(BigInt::from(r.hom_count.clone()), denom)
}

pub fn row_for(result: &CountResult, c: &CertifiedReal) -> SweepRow {
    let class = CurveClass(result.class);
    let d1 = class.chamber_normalize().map(|ch| ch.data.di(1)).unwrap_or(0);
    let ratio = exact_ratio(result);
    let mid = c.mid();
    let rel = ((&ratio - &mid) / &mid).abs();
    SweepRow {
        class: class.to_string(),
        d: result.d,
        d1,
        hom_count: result.hom_count.to_string(),
        ratio: to_decimal(&ratio, DIGITS),
        c_mid: to_decimal(&mid, DIGITS),
        c_rad: format!("{:.3e}", c.rad_f64()),
        rel_err: to_decimal(&rel, DIGITS),
        ratio_exact: ratio,
        rel_err_exact: rel,
    }
}

/// Counts each class with `count_fast` and compares with the constant of
/// `P^1` over the same field.
pub fn sweep(f: &FieldCtx, classes: &[CurveClass], opts: &CountOptions) -> Result<Vec<SweepRow>, SweepError> {
    let c = leading_constant_direct(&CurveZeta::p1(f.size() as u64), 1e-12)?;
    classes
        .iter()
        .map(|class| Ok(row_for(&count_fast(f, class, opts)?, &c)))
        .collect()
}

/// UTF-8 CSV with LF line endings and a header row.
pub fn to_csv(rows: &[SweepRow]) -> Result<String, SweepError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| SweepError::Csv(e.into_error().into()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}
