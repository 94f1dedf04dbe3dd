use rayon::prelude::*;
use serde::Serialize;

use crate::error::{DpcdError, Result};
use crate::matrix::Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RetrievalScore {
    pub map: f64,
    pub precision_at_k: f64,
    pub k: usize,
}

/// Packs each row of a `+-1` code matrix into `u64` words, bit set for `+1`.
pub fn pack_codes(codes: &Matrix) -> Vec<Vec<u64>> {
    (0..codes.rows())
        .map(|i| {
            let mut words = vec![0u64; codes.cols().div_ceil(64)];
            for (j, &v) in codes.row(i).iter().enumerate() {
                if v > 0.0 {
                    words[j / 64] |= 1 << (j % 64);
                }
            }
            words
        })
        .collect()
}

fn hamming(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x ^ y).count_ones() as usize).sum()
}

/// MAP and precision@k under Hamming ranking.
///
/// The database is ranked by ascending Hamming distance, ties by ascending id.
/// An item is relevant when it shares at least one label with the query. A
/// query with no relevant item contributes an average precision of 0.
pub fn evaluate_retrieval(
    query_codes: &Matrix,
    db_codes: &Matrix,
    query_labels: &Matrix,
    db_labels: &Matrix,
    k: usize,
) -> Result<RetrievalScore> {
    let r = query_codes.cols();
    let shape = |axis, expected, found| {
        if expected == found {
            Ok(())
        } else {
            Err(DpcdError::Shape { axis, expected, found })
        }
    };
    shape("code length of database", r, db_codes.cols())?;
    shape("rows of query labels", query_codes.rows(), query_labels.rows())?;
    shape("rows of database labels", db_codes.rows(), db_labels.rows())?;
    shape("label columns of database", query_labels.cols(), db_labels.cols())?;
    let m = db_codes.rows();
    if k == 0 || k > m {
        return Err(DpcdError::domain(format!("need 1 <= k <= database size {m}, got k = {k}")));
    }
    if query_codes.rows() == 0 {
        return Err(DpcdError::domain("no queries"));
    }

    let q = pack_codes(query_codes);
    let db = pack_codes(db_codes);
    let per_query: Vec<(f64, f64)> = (0..q.len())
        .into_par_iter()
        .map(|i| {
            // Counting sort by distance keeps ids ascending inside each bucket.
            let mut buckets = vec![Vec::new(); r + 1];
            for (j, code) in db.iter().enumerate() {
                buckets[hamming(&q[i], code)].push(j);
            }
            let label = query_labels.row(i);
            let relevant = |j: usize| db_labels.row(j).iter().zip(label).any(|(a, b)| *a != 0.0 && *b != 0.0);
            let mut hits = 0usize;
            let mut hits_at_k = 0usize;
            let mut precision_sum = 0.0;
            for (rank, j) in buckets.into_iter().flatten().enumerate() {
                if relevant(j) {
                    hits += 1;
                    precision_sum += hits as f64 / (rank + 1) as f64;
                }
                if rank + 1 == k {
                    hits_at_k = hits;
                }
            }
            let ap = if hits == 0 { 0.0 } else { precision_sum / hits as f64 };
            (ap, hits_at_k as f64 / k as f64)
        })
        .collect();
    let nq = per_query.len() as f64;
    Ok(RetrievalScore {
        map: per_query.iter().map(|p| p.0).sum::<f64>() / nq,
        precision_at_k: per_query.iter().map(|p| p.1).sum::<f64>() / nq,
        k,
    })
}
