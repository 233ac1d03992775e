use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Result of [`kmeans`]; `labels[i]` is the cluster of `points[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClusterAssignment {
    pub k: usize,
    pub seed: u64,
    pub labels: Vec<usize>,
    pub centroids: Vec<[f64; 2]>,
    /// Sum of squared distances to the assigned centroid after each
    /// assignment step.
    pub objective_history: Vec<f64>,
}

fn sq_dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)
}

/// Nearest centroid, ties to the smallest index.
fn nearest(p: [f64; 2], centroids: &[[f64; 2]]) -> (usize, f64) {
    let mut best = (0, sq_dist(p, centroids[0]));
    for (j, &c) in centroids.iter().enumerate().skip(1) {
        let d = sq_dist(p, c);
        if d < best.1 {
            best = (j, d);
        }
    }
    best
}

fn distinct_count(points: &[[f64; 2]]) -> usize {
    let mut keys: Vec<(u64, u64)> = points.iter().map(|p| ((p[0] + 0.0).to_bits(), (p[1] + 0.0).to_bits())).collect();
    keys.sort_unstable();
    keys.dedup();
    keys.len()
}

fn seed_centroids(points: &[[f64; 2]], k: usize, rng: &mut ChaCha8Rng) -> Vec<[f64; 2]> {
    let mut centroids = vec![points[rng.gen_range(0..points.len())]];
    while centroids.len() < k {
        let weights: Vec<f64> = points.iter().map(|&p| nearest(p, &centroids).1).collect();
        let pick = WeightedIndex::new(&weights).expect("k does not exceed the distinct points").sample(rng);
        centroids.push(points[pick]);
    }
    centroids
}

/// Lloyd's algorithm from a k-means++ start, driven by a ChaCha8 stream
/// seeded with `seed`. Stops when labels stop changing or after `max_iters`
/// assignment steps. An empty cluster keeps its previous centroid.
pub fn kmeans(points: &[[f64; 2]], k: usize, seed: u64, max_iters: usize) -> Result<ClusterAssignment> {
    if k == 0 {
        return Err(Error::Clustering("k must be at least 1".into()));
    }
    let distinct = distinct_count(points);
    if k > distinct {
        return Err(Error::Clustering(format!("k = {k} exceeds the {distinct} distinct points")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids = seed_centroids(points, k, &mut rng);
    let mut labels: Vec<usize> = Vec::new();
    let mut history = Vec::new();
    for _ in 0..max_iters.max(1) {
        let assigned: Vec<(usize, f64)> = points.iter().map(|&p| nearest(p, &centroids)).collect();
        let new_labels: Vec<usize> = assigned.iter().map(|a| a.0).collect();
        history.push(assigned.iter().map(|a| a.1).sum());
        let stable = new_labels == labels;
        labels = new_labels;
        if stable {
            break;
        }
        let mut sums = vec![[0.0, 0.0]; k];
        let mut counts = vec![0usize; k];
        for (p, &l) in points.iter().zip(&labels) {
            sums[l][0] += p[0];
            sums[l][1] += p[1];
            counts[l] += 1;
        }
        for j in 0..k {
            if counts[j] > 0 {
                centroids[j] = [sums[j][0] / counts[j] as f64, sums[j][1] / counts[j] as f64];
            }
        }
    }
    Ok(ClusterAssignment { k, seed, labels, centroids, objective_history: history })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separated_pairs() {
        let points = [[0.0, 0.0], [0.1, 0.0], [10.0, 10.0], [10.1, 10.0]];
        let ca = kmeans(&points, 2, 7, 50).unwrap();
        assert_eq!(ca.labels[0], ca.labels[1]);
        assert_eq!(ca.labels[2], ca.labels[3]);
        assert_ne!(ca.labels[0], ca.labels[2]);
    }

    #[test]
    fn single_cluster_is_the_mean() {
        let points = [[0.0, 0.0], [2.0, 0.0], [4.0, 6.0]];
        let ca = kmeans(&points, 1, 0, 10).unwrap();
        assert_eq!(ca.centroids, vec![[2.0, 2.0]]);
        assert_eq!(ca.labels, vec![0, 0, 0]);
    }

    #[test]
    fn invalid_k() {
        let points = [[1.0, 1.0], [1.0, 1.0], [2.0, 2.0]];
        assert!(matches!(kmeans(&points, 3, 0, 10), Err(Error::Clustering(_))));
        assert!(matches!(kmeans(&points, 0, 0, 10), Err(Error::Clustering(_))));
        assert!(kmeans(&points, 2, 0, 10).is_ok());
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let points: Vec<[f64; 2]> = (0..40).map(|i| [((i * 37) % 11) as f64, ((i * 13) % 7) as f64]).collect();
        assert_eq!(kmeans(&points, 4, 99, 100).unwrap(), kmeans(&points, 4, 99, 100).unwrap());
    }
}
