//! Rich-line counts across a family of configurations, normalized by
//! `r^{d+1}/n²`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::incidence::enumerate_rich_lines;
use crate::scalar::{Field, Rational};

use super::precision::int_pow;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub k: usize,
    pub n: usize,
    pub rich_count: usize,
    /// `rich_count · r^{d+1} / n²`.
    pub normalized_ratio: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepTable {
    pub r: usize,
    pub d: usize,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    /// Largest over smallest normalized ratio; `None` if some ratio is zero.
    pub fn ratio_spread(&self) -> Option<Rational> {
        let max = self.rows.iter().map(|r| &r.normalized_ratio).max()?;
        let min = self.rows.iter().map(|r| &r.normalized_ratio).min()?;
        min.is_positive().then(|| max / min)
    }

    /// CSV with header `n,rich_count,normalized_ratio`; ratios as `p/q`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,rich_count,normalized_ratio\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{}\n",
                row.n, row.rich_count, row.normalized_ratio
            ));
        }
        out
    }
}

/// Counts `r`-rich lines of `generator(k)` for each `k`. Every generated
/// configuration must live in dimension `d`.
pub fn scaling_sweep<F: Field>(
    generator: impl Fn(usize) -> Result<Vec<Point<F>>>,
    ks: &[usize],
    r: usize,
    d: usize,
) -> Result<SweepTable> {
    if ks.len() < 3 {
        return Err(Error::TooFewSizes(ks.len()));
    }
    let rq = Rational::from(r);
    let rows = ks
        .iter()
        .map(|&k| {
            let points = generator(k)?;
            if let Some(p) = points.iter().find(|p| p.dim() != d) {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: p.dim(),
                });
            }
            let n = points.len();
            if n == 0 {
                return Err(Error::EmptyInput);
            }
            let rich_count = enumerate_rich_lines(&points, r)?.len();
            let nq = Rational::from(n);
            let normalized_ratio =
                Rational::from(rich_count) * int_pow(&rq, d as i64 + 1) / (&nq * &nq);
            Ok(SweepRow {
                k,
                n,
                rich_count,
                normalized_ratio,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable { r, d, rows })
}
