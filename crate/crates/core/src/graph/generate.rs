use rand::seq::index;
use rand::Rng;

use super::SparseGraph;
use crate::binary::{stream_rng, streams, SeededRng};
#[cfg(test)]
use crate::binary::seeded_rng;
use crate::error::{DpcdError, Result};

#[derive(Clone, Debug)]
pub struct PlantedGraph {
    pub graph: SparseGraph,
    /// Hidden dense block, ascending node ids.
    pub block: Vec<usize>,
}

/// Random graph with a denser hidden block of `k` nodes.
///
/// Unit-weight edges are drawn independently: with probability `p_in` when
/// both endpoints are in the block, `p_out` otherwise.
pub fn planted_partition(n: usize, k: usize, p_in: f64, p_out: f64, seed: u64) -> Result<PlantedGraph> {
    if !(0.0..=1.0).contains(&p_in) || !(0.0..=1.0).contains(&p_out) || p_out >= p_in {
        return Err(DpcdError::domain(format!(
            "need 0 <= p_out < p_in <= 1, got p_in = {p_in}, p_out = {p_out}"
        )));
    }
    if k > n {
        return Err(DpcdError::domain(format!("block size {k} exceeds n = {n}")));
    }
    let mut rng = stream_rng(seed, streams::PLANTED_GRAPH);
    let mut block = index::sample(&mut rng, n, k).into_vec();
    block.sort_unstable();
    let mut in_block = vec![false; n];
    for &b in &block {
        in_block[b] = true;
    }

    let mut edges = Vec::new();
    sample_pairs(n, p_out, &mut rng, |i, j| {
        if !(in_block[i] && in_block[j]) {
            edges.push((i, j, 1.0));
        }
    });
    sample_pairs(k, p_in, &mut rng, |a, b| edges.push((block[a], block[b], 1.0)));

    Ok(PlantedGraph {
        graph: SparseGraph::from_edges(n, edges)?,
        block,
    })
}

/// Visits each unordered pair of `0..n` independently with probability `p`
/// using geometric skips, so the cost is proportional to `n` plus the number
/// of pairs visited.
fn sample_pairs(n: usize, p: f64, rng: &mut SeededRng, mut visit: impl FnMut(usize, usize)) {
    if p <= 0.0 || n < 2 {
        return;
    }
    let log_q = (1.0 - p).ln();
    let mut v: usize = 1;
    let mut w: i64 = -1;
    while v < n {
        let skip = if p >= 1.0 {
            0
        } else {
            let r: f64 = rng.random();
            ((1.0 - r).ln() / log_q).floor() as i64
        };
        w += 1 + skip;
        while w >= v as i64 && v < n {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            visit(w as usize, v);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::density;

    #[test]
    fn degenerate_probabilities_give_a_clique() {
        let p = planted_partition(10, 4, 1.0, 0.0, 5).unwrap();
        assert_eq!(p.block.len(), 4);
        assert_eq!(p.graph.edge_count(), 6);
        for &(i, j, _) in p.graph.edges() {
            assert!(p.block.contains(&i) && p.block.contains(&j));
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let a = planted_partition(80, 10, 0.6, 0.05, 42).unwrap();
        let b = planted_partition(80, 10, 0.6, 0.05, 42).unwrap();
        assert_eq!(a.graph, b.graph);
        assert_eq!(a.block, b.block);
        let c = planted_partition(80, 10, 0.6, 0.05, 43).unwrap();
        assert_ne!(a.graph, c.graph);
    }

    #[test]
    fn full_probability_visits_every_pair() {
        let mut rng = seeded_rng(0);
        let mut count = 0;
        sample_pairs(7, 1.0, &mut rng, |i, j| {
            assert!(i < j);
            count += 1
        });
        assert_eq!(count, 21);
    }

    #[test]
    fn parameter_domain() {
        assert!(planted_partition(10, 4, 0.1, 0.2, 0).is_err());
        assert!(planted_partition(10, 11, 0.5, 0.1, 0).is_err());
        assert!(planted_partition(10, 4, 1.5, 0.1, 0).is_err());
    }

    // Block density is 2 * Binomial(C(k,2), p_in) / k with mean (k-1) p_in.
    #[test]
    fn block_density_matches_binomial_expectation() {
        let (n, k, p_in) = (60usize, 12usize, 0.4);
        let pairs = (k * (k - 1) / 2) as f64;
        let mean = (k - 1) as f64 * p_in;
        let sd = 2.0 * (pairs * p_in * (1.0 - p_in)).sqrt() / k as f64;
        let seeds = 50;
        let avg: f64 = (0..seeds)
            .map(|s| {
                let p = planted_partition(n, k, p_in, 0.05, s).unwrap();
                density(&p.graph, &p.block).unwrap()
            })
            .sum::<f64>()
            / seeds as f64;
        assert!((avg - mean).abs() <= 3.0 * sd / (seeds as f64).sqrt(), "avg {avg} mean {mean}");
    }

    #[test]
    fn block_is_denser_than_random_selection() {
        let p = planted_partition(200, 15, 0.5, 0.02, 9).unwrap();
        let mut rng = seeded_rng(1);
        let random = index::sample(&mut rng, 200, 15).into_vec();
        assert!(density(&p.graph, &p.block).unwrap() > density(&p.graph, &random).unwrap());
    }
}
