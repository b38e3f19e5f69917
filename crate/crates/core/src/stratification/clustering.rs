//! Seeded k-means over personnel value systems.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::WeightMatrix;

pub const MAX_ITERATIONS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterAssignment {
    /// Members of each cluster in roster order; clusters ordered by their
    /// earliest member.
    pub clusters: Vec<Vec<String>>,
    pub centroids: Vec<Vec<f64>>,
    /// Up to two members nearest each centroid, nearest first.
    pub typical_representatives: Vec<Vec<String>>,
    pub seed: u64,
    pub iterations: usize,
    /// Sum of squared distances after each assignment step.
    pub objective_trace: Vec<f64>,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest(point: &[f64], centroids: &[Vec<f64>]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (c, centroid) in centroids.iter().enumerate() {
        let d = sq_dist(point, centroid);
        if d < best.1 {
            best = (c, d);
        }
    }
    best
}

/// k-means++ seeding.
fn seed_centroids(points: &[&[f64]], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let m = points.len();
    let mut chosen = vec![rng.random_range(0..m)];
    let mut d2: Vec<f64> = points.iter().map(|p| sq_dist(p, points[chosen[0]])).collect();
    while chosen.len() < k {
        let total: f64 = d2.iter().sum();
        let next = if total > 0.0 {
            let mut target = rng.random::<f64>() * total;
            let mut pick = None;
            for (i, &d) in d2.iter().enumerate() {
                if d > 0.0 {
                    pick = Some(i);
                    if target < d {
                        break;
                    }
                    target -= d;
                }
            }
            pick.expect("positive total implies a positive weight")
        } else {
            // all remaining points coincide with a centroid
            (0..m).find(|i| !chosen.contains(i)).expect("k <= m")
        };
        chosen.push(next);
        for (i, p) in points.iter().enumerate() {
            d2[i] = d2[i].min(sq_dist(p, points[next]));
        }
    }
    chosen.iter().map(|&i| points[i].to_vec()).collect()
}

pub fn cluster_value_systems(weights: &WeightMatrix, k: usize, seed: u64) -> Result<ClusterAssignment> {
    let m = weights.roster().len();
    if k == 0 || k > m {
        return Err(Error::OutOfRange {
            what: "k",
            value: k as i64,
            min: 1,
            max: m as i64,
        });
    }
    let points: Vec<&[f64]> = weights.matrix().row_iter().collect();
    let dim = weights.categories().len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut centroids = seed_centroids(&points, k, &mut rng);

    let mut assign = vec![usize::MAX; m];
    let mut trace = Vec::new();
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let mut changed = false;
        let mut objective = 0.0;
        for (i, p) in points.iter().enumerate() {
            let (c, d) = nearest(p, &centroids);
            objective += d;
            if assign[i] != c {
                assign[i] = c;
                changed = true;
            }
        }
        trace.push(objective);
        if !changed {
            break;
        }
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (i, p) in points.iter().enumerate() {
            counts[assign[i]] += 1;
            for (s, v) in sums[assign[i]].iter_mut().zip(p.iter()) {
                *s += v;
            }
        }
        for c in 0..k {
            // an empty cluster keeps its previous centroid
            if counts[c] > 0 {
                centroids[c] = sums[c].iter().map(|s| s / counts[c] as f64).collect();
            }
        }
    }

    // relabel clusters by earliest member so output does not depend on seeding order
    let mut label_order: Vec<usize> = Vec::with_capacity(k);
    for &c in &assign {
        if !label_order.contains(&c) {
            label_order.push(c);
        }
    }
    let roster = weights.roster();
    let mut clusters = Vec::with_capacity(label_order.len());
    let mut reps = Vec::with_capacity(label_order.len());
    let mut out_centroids = Vec::with_capacity(label_order.len());
    for &c in &label_order {
        let members: Vec<usize> = (0..m).filter(|&i| assign[i] == c).collect();
        let mut by_dist = members.clone();
        by_dist.sort_by(|&a, &b| {
            sq_dist(points[a], &centroids[c])
                .total_cmp(&sq_dist(points[b], &centroids[c]))
                .then(a.cmp(&b))
        });
        reps.push(by_dist.iter().take(2).map(|&i| roster.id(i).to_string()).collect());
        clusters.push(members.iter().map(|&i| roster.id(i).to_string()).collect());
        out_centroids.push(centroids[c].clone());
    }
    Ok(ClusterAssignment {
        clusters,
        centroids: out_centroids,
        typical_representatives: reps,
        seed,
        iterations,
        objective_trace: trace,
    })
}
