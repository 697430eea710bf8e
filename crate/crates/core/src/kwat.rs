//! Exact dense computation of the hop-weighted transition mix
//! `W^(k) = sum_l alpha_l A^l` (the k-WAT matrix), its normalized row and
//! column distributions, and the full-softmax objectives.
//!
//! Everything here is O(N^2) or worse and exists as ground truth for the
//! sampler and trainer on small graphs: the endpoint law of a group random
//! walk from `u` equals row `u` of `W^(k)`, and the negative-sampling
//! objective is a surrogate for the cross-entropies computed by
//! [`exact_objective`]. A node-count guard keeps it from being misapplied
//! at production scale.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{CoreError, Result};
use crate::graph::Graph;
use crate::math;
use crate::matrix::{dot, DenseMatrix};
use crate::train::ModelParams;
use crate::Direction;

/// Default node-count guard for dense computations.
pub const DENSE_NODE_LIMIT: usize = 10_000;

/// Hop weights `alpha_l = alpha^l / sum_{i=1..k} alpha^i` for `l = 1..=k`.
///
/// Strictly positive, sum to 1, monotone increasing in `l` iff `alpha > 1`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HopWeights {
    weights: Vec<f64>,
    alpha: f64,
}

impl HopWeights {
    /// Weight of the `l`-hop group at index `l - 1`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn max_steps(&self) -> usize {
        self.weights.len()
    }
}

/// Computes the hop weights for `k >= 1` steps and variation coefficient
/// `alpha > 0`.
pub fn hop_weights(k: usize, alpha: f64) -> Result<HopWeights> {
    if k == 0 {
        return Err(CoreError::InvalidWalkSteps);
    }
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(CoreError::InvalidAlpha(alpha));
    }
    let powers: Vec<f64> = (1..=k as u32).map(|l| math::powu(alpha, l)).collect();
    let total: f64 = powers.iter().sum();
    Ok(HopWeights { weights: powers.iter().map(|p| p / total).collect(), alpha })
}

/// The dense matrix `W^(k)` together with the parameters that produced it.
#[derive(Debug, Clone)]
pub struct KwatMatrix {
    values: DenseMatrix,
    k: usize,
    alpha: f64,
}

impl KwatMatrix {
    pub fn values(&self) -> &DenseMatrix {
        &self.values
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn node_count(&self) -> usize {
        self.values.rows()
    }
}

/// One-step transition matrix `A`; row `u` is `transition_distribution(u)`,
/// dangling rows are all zero.
pub fn transition_matrix(g: &Graph) -> Result<DenseMatrix> {
    transition_matrix_with_limit(g, DENSE_NODE_LIMIT)
}

/// As [`transition_matrix`] with a caller-chosen node-count guard.
pub fn transition_matrix_with_limit(g: &Graph, limit: usize) -> Result<DenseMatrix> {
    let n = g.node_count();
    if n > limit {
        return Err(CoreError::GraphTooLarge { node_count: n, limit });
    }
    let mut a = DenseMatrix::zeros(n, n);
    for u in 0..n {
        for (v, p) in g.transition_distribution(u) {
            let cur = a.get(u, v);
            a.set(u, v, cur + p);
        }
    }
    Ok(a)
}

/// `W^(k) = sum_{l=1..k} alpha_l A^l` by iterated multiplication.
pub fn kwat_matrix(g: &Graph, k: usize, alpha: f64) -> Result<KwatMatrix> {
    kwat_matrix_with_limit(g, k, alpha, DENSE_NODE_LIMIT)
}

/// As [`kwat_matrix`] with a caller-chosen node-count guard.
pub fn kwat_matrix_with_limit(g: &Graph, k: usize, alpha: f64, limit: usize) -> Result<KwatMatrix> {
    let hw = hop_weights(k, alpha)?;
    let a = transition_matrix_with_limit(g, limit)?;
    let mut power = a.clone();
    let mut values = DenseMatrix::zeros(a.rows(), a.cols());
    values.scaled_add(hw.weights()[0], &power);
    for &w in &hw.weights()[1..] {
        power = power.matmul(&a);
        values.scaled_add(w, &power);
    }
    Ok(KwatMatrix { values, k, alpha })
}

/// Row `i` of `W^(k)` normalized to sum 1: the distribution of forward
/// neighbors of `i` within `k` hops.
pub fn forward_distribution(w: &KwatMatrix, i: usize) -> Result<Vec<f64>> {
    let n = w.node_count();
    if i >= n {
        return Err(CoreError::NodeOutOfRange { index: i, node_count: n });
    }
    let row = w.values.row(i);
    let total: f64 = row.iter().sum();
    if total <= 0.0 {
        return Err(CoreError::ZeroMass { node: i, direction: Direction::Forward });
    }
    Ok(row.iter().map(|v| v / total).collect())
}

/// Column `i` of `W^(k)` normalized to sum 1: the distribution of backward
/// neighbors of `i` (nodes that reach `i` within `k` hops).
pub fn backward_distribution(w: &KwatMatrix, i: usize) -> Result<Vec<f64>> {
    let n = w.node_count();
    if i >= n {
        return Err(CoreError::NodeOutOfRange { index: i, node_count: n });
    }
    let col: Vec<f64> = (0..n).map(|r| w.values.get(r, i)).collect();
    let total: f64 = col.iter().sum();
    if total <= 0.0 {
        return Err(CoreError::ZeroMass { node: i, direction: Direction::Backward });
    }
    Ok(col.iter().map(|v| v / total).collect())
}

/// Cosine similarity of two distributions; the proximity of two nodes is
/// the cosine of their forward (or backward) neighbor distributions.
/// Returns 0 when either vector is all zero.
pub fn kwat_proximity(p: &[f64], q: &[f64]) -> f64 {
    assert_eq!(p.len(), q.len(), "proximity vectors must have equal length");
    let pp = dot(p, p);
    let qq = dot(q, q);
    if pp == 0.0 || qq == 0.0 {
        return 0.0;
    }
    dot(p, q) / (math::sqrt(pp) * math::sqrt(qq))
}

/// Exact cross-entropy between the hop-weighted neighbor distributions and
/// the full-softmax model distribution:
/// forward `-sum_i sum_j Wrow_i(j) ln q_i(j)` with
/// `q_i(j) = softmax_j(S_i . T_j)`, and the column analogue backward.
///
/// Nodes whose row (or column) of `W^(k)` has zero mass have no defined
/// neighbor distribution and contribute nothing. Oracle scale only.
pub fn exact_objective(
    g: &Graph,
    k: usize,
    alpha: f64,
    params: &ModelParams,
    direction: Direction,
) -> Result<f64> {
    let n = g.node_count();
    if params.node_count() != n {
        return Err(CoreError::DimensionMismatch {
            expected: n,
            got: params.node_count(),
            what: "model params node count",
        });
    }
    let w = kwat_matrix(g, k, alpha)?;
    let dim = params.dim();

    // Target table for this direction, materialized once.
    let mut targets = DenseMatrix::zeros(n, dim);
    for j in 0..n {
        params.target_into(j, direction, targets.row_mut(j));
    }

    let mut logits = vec![0.0; n];
    let mut total = 0.0;
    for i in 0..n {
        let p: Vec<f64> = match direction {
            Direction::Forward => {
                let row = w.values.row(i);
                let mass: f64 = row.iter().sum();
                if mass <= 0.0 {
                    continue;
                }
                row.iter().map(|v| v / mass).collect()
            }
            Direction::Backward => {
                let col: Vec<f64> = (0..n).map(|r| w.values.get(r, i)).collect();
                let mass: f64 = col.iter().sum();
                if mass <= 0.0 {
                    continue;
                }
                col.iter().map(|v| v / mass).collect()
            }
        };
        let source = params.source().row(i);
        for j in 0..n {
            logits[j] = dot(source, targets.row(j));
        }
        let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let log_z = math::ln(logits.iter().map(|&x| math::exp(x - max)).sum::<f64>()) + max;
        for (j, &pj) in p.iter().enumerate() {
            if pj > 0.0 {
                total -= pj * (logits[j] - log_z);
            }
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::train::{ModelParams, TargetLayout, TrainConfig};
    use crate::walk::WalkConfig;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn triangle() -> Graph {
        Graph::from_index_edges(3, &[(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)], false).unwrap()
    }

    fn chain() -> Graph {
        Graph::from_edge_list([("a", "b", 1.0), ("b", "c", 1.0)], true).unwrap()
    }

    #[test]
    fn hop_weights_uniform_when_alpha_one() {
        let hw = hop_weights(3, 1.0).unwrap();
        for &w in hw.weights() {
            assert!((w - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn hop_weights_alpha_two() {
        let hw = hop_weights(2, 2.0).unwrap();
        assert!((hw.weights()[0] - 1.0 / 3.0).abs() < 1e-15);
        assert!((hw.weights()[1] - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn hop_weights_alpha_half() {
        let hw = hop_weights(2, 0.5).unwrap();
        assert!((hw.weights()[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((hw.weights()[1] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn hop_weights_reject_bad_params() {
        assert!(matches!(hop_weights(0, 1.0), Err(CoreError::InvalidWalkSteps)));
        assert!(matches!(hop_weights(3, 0.0), Err(CoreError::InvalidAlpha(_))));
        assert!(matches!(hop_weights(3, -1.0), Err(CoreError::InvalidAlpha(_))));
    }

    #[test]
    fn hop_weights_sum_to_one_on_grid() {
        for k in 1..=8 {
            for &alpha in &[0.25, 0.5, 1.0, 2.0, 4.0] {
                let hw = hop_weights(k, alpha).unwrap();
                let sum: f64 = hw.weights().iter().sum();
                assert!((sum - 1.0).abs() < 1e-12, "k={k} alpha={alpha} sum={sum}");
                assert!(hw.weights().iter().all(|&w| w > 0.0));
            }
        }
    }

    #[test]
    fn hop_weights_monotone_iff_alpha_above_one() {
        let inc = hop_weights(5, 2.0).unwrap();
        assert!(inc.weights().windows(2).all(|w| w[1] > w[0]));
        let dec = hop_weights(5, 0.5).unwrap();
        assert!(dec.weights().windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn transition_matrix_triangle() {
        let a = transition_matrix(&triangle()).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { 0.0 } else { 0.5 };
                assert!((a.get(i, j) - expected).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn transition_matrix_chain_has_zero_dangling_row() {
        let a = transition_matrix(&chain()).unwrap();
        assert_eq!(a.row(0), &[0.0, 1.0, 0.0]);
        assert_eq!(a.row(1), &[0.0, 0.0, 1.0]);
        assert_eq!(a.row(2), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn transition_matrix_weighted_star() {
        let g = Graph::from_index_edges(3, &[(0, 1, 1.0), (0, 2, 3.0)], true).unwrap();
        let a = transition_matrix(&g).unwrap();
        assert_eq!(a.row(0), &[0.0, 0.25, 0.75]);
    }

    #[test]
    fn node_limit_guard() {
        let g = triangle();
        assert!(matches!(
            transition_matrix_with_limit(&g, 2),
            Err(CoreError::GraphTooLarge { node_count: 3, limit: 2 })
        ));
        assert!(kwat_matrix_with_limit(&g, 2, 1.0, 2).is_err());
    }

    #[test]
    fn kwat_triangle_two_steps() {
        // A^2 has diagonal 0.5 and off-diagonal 0.25; averaging with A gives
        // diagonal 0.25 and off-diagonal 0.375.
        let w = kwat_matrix(&triangle(), 2, 1.0).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { 0.25 } else { 0.375 };
                assert!((w.values().get(i, j) - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn kwat_single_step_equals_transition_matrix() {
        let g = triangle();
        let a = transition_matrix(&g).unwrap();
        for alpha in [0.25, 1.0, 3.0] {
            let w = kwat_matrix(&g, 1, alpha).unwrap();
            assert!(w.values().max_abs_diff(&a) < 1e-15);
        }
    }

    #[test]
    fn kwat_chain_two_steps() {
        let w = kwat_matrix(&chain(), 2, 1.0).unwrap();
        assert_eq!(w.values().row(0), &[0.0, 0.5, 0.5]);
    }

    #[test]
    fn kwat_rows_stochastic_on_dangling_free_graph() {
        let g = crate::graph::synthetic::random_undirected(12, 24, 5);
        let w = kwat_matrix(&g, 4, 1.5).unwrap();
        for i in 0..12 {
            let sum: f64 = w.values().row(i).iter().sum();
            assert!((sum - 1.0).abs() < 1e-9, "row {i} sums to {sum}");
            assert!(w.values().row(i).iter().all(|&v| v >= 0.0));
        }
    }

    #[test]
    fn kwat_concentrates_on_first_hop_as_alpha_vanishes() {
        // As alpha -> 0+ the l=1 weight dominates: the deviation from A is
        // Theta(alpha), so alpha = 1e-8 pushes it far below 1e-6.
        let g = crate::graph::synthetic::random_undirected(10, 20, 11);
        let a = transition_matrix(&g).unwrap();
        let w = kwat_matrix(&g, 4, 1e-8).unwrap();
        assert!(w.values().max_abs_diff(&a) < 1e-6);
    }

    #[test]
    fn forward_distribution_triangle() {
        let w = kwat_matrix(&triangle(), 2, 1.0).unwrap();
        let p = forward_distribution(&w, 0).unwrap();
        assert!((p[0] - 0.25).abs() < 1e-12);
        assert!((p[1] - 0.375).abs() < 1e-12);
        assert!((p[2] - 0.375).abs() < 1e-12);
    }

    #[test]
    fn backward_distribution_chain_single_step() {
        let w = kwat_matrix(&chain(), 1, 1.0).unwrap();
        let c = backward_distribution(&w, 2).unwrap();
        assert_eq!(c, vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn forward_equals_backward_on_regular_undirected_graph() {
        // A symmetric doubly-stochastic transition matrix makes W^(k)
        // symmetric, so row i and column i coincide.
        let g = crate::graph::synthetic::random_regular(12, 4, 3);
        let w = kwat_matrix(&g, 3, 1.25).unwrap();
        for i in 0..12 {
            let f = forward_distribution(&w, i).unwrap();
            let b = backward_distribution(&w, i).unwrap();
            for (x, y) in f.iter().zip(&b) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn chain_asymmetry_witness() {
        // Forward and backward carry different information on a directed
        // chain: node b sees c ahead and a behind; node a is unreachable,
        // so its backward distribution does not even exist.
        let w = kwat_matrix(&chain(), 1, 1.0).unwrap();
        let fwd_a = forward_distribution(&w, 0).unwrap();
        assert_eq!(fwd_a, vec![0.0, 1.0, 0.0]);
        assert!(matches!(
            backward_distribution(&w, 0),
            Err(CoreError::ZeroMass { node: 0, direction: Direction::Backward })
        ));
        let fwd_b = forward_distribution(&w, 1).unwrap();
        let bwd_b = backward_distribution(&w, 1).unwrap();
        assert_ne!(fwd_b, bwd_b);
    }

    #[test]
    fn fully_dangling_row_errors_forward() {
        let w = kwat_matrix(&chain(), 3, 1.0).unwrap();
        assert!(matches!(
            forward_distribution(&w, 2),
            Err(CoreError::ZeroMass { node: 2, direction: Direction::Forward })
        ));
    }

    #[test]
    fn proximity_identical_disjoint_and_half() {
        assert!((kwat_proximity(&[0.2, 0.8], &[0.2, 0.8]) - 1.0).abs() < 1e-12);
        assert_eq!(kwat_proximity(&[1.0, 0.0], &[0.0, 1.0]), 0.0);
        let p = [0.5, 0.5, 0.0];
        let q = [0.5, 0.0, 0.5];
        assert!((kwat_proximity(&p, &q) - 0.5).abs() < 1e-12);
    }

    fn zero_params(n: usize, dim: usize) -> ModelParams {
        ModelParams::zeros(n, dim, TargetLayout::Split)
    }

    #[test]
    fn exact_objective_zero_params_is_n_log_n() {
        // Uniform softmax gives q_i(j) = 1/N, so the objective is N ln N.
        let g = triangle();
        let params = zero_params(3, 4);
        for dir in [Direction::Forward, Direction::Backward] {
            let obj = exact_objective(&g, 2, 1.0, &params, dir).unwrap();
            assert!((obj - 3.0 * (3.0f64).ln()).abs() < 1e-9, "{dir:?} {obj}");
        }
    }

    #[test]
    fn exact_objective_single_node_self_loop_is_zero() {
        let g = Graph::from_edge_list([("s", "s", 1.0)], true).unwrap();
        let params = zero_params(1, 4);
        let obj = exact_objective(&g, 3, 2.0, &params, Direction::Forward).unwrap();
        assert!(obj.abs() < 1e-12);
    }

    /// Brute-force re-implementation: textbook double loop with a naive
    /// softmax, kept deliberately separate from the library code path.
    fn brute_force_objective(g: &Graph, k: usize, alpha: f64, params: &ModelParams, dir: Direction) -> f64 {
        let n = g.node_count();
        let w = kwat_matrix(g, k, alpha).unwrap();
        let mut total = 0.0;
        for i in 0..n {
            let mut p = vec![0.0; n];
            for j in 0..n {
                p[j] = match dir {
                    Direction::Forward => w.values().get(i, j),
                    Direction::Backward => w.values().get(j, i),
                };
            }
            let mass: f64 = p.iter().sum();
            if mass <= 0.0 {
                continue;
            }
            let s_i = params.source().row(i);
            let mut z = 0.0;
            let mut numer = vec![0.0; n];
            for j in 0..n {
                let t_j = params.target_vector(j, dir);
                numer[j] = crate::math::exp(crate::matrix::dot(s_i, &t_j));
                z += numer[j];
            }
            for j in 0..n {
                if p[j] > 0.0 {
                    total -= p[j] / mass * crate::math::ln(numer[j] / z);
                }
            }
        }
        total
    }

    #[test]
    fn exact_objective_matches_brute_force_on_random_params() {
        let g = triangle();
        let walk = WalkConfig::new(1.0, 2).unwrap();
        let cfg = TrainConfig::new(6, walk);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let params = ModelParams::init(3, &cfg, None, &mut rng).unwrap();
        for dir in [Direction::Forward, Direction::Backward] {
            let fast = exact_objective(&g, 2, 1.0, &params, dir).unwrap();
            let slow = brute_force_objective(&g, 2, 1.0, &params, dir);
            assert!((fast - slow).abs() < 1e-10, "{dir:?}: {fast} vs {slow}");
        }
    }

    #[test]
    fn exact_objective_invariant_under_joint_permutation() {
        let g = Graph::from_index_edges(
            4,
            &[(0, 1, 1.0), (1, 2, 2.0), (2, 3, 1.0), (3, 0, 1.0), (0, 2, 1.0)],
            false,
        )
        .unwrap();
        // Permutation sends old index i to perm[i].
        let perm = [2usize, 0, 3, 1];
        let edges_perm: Vec<(usize, usize, f64)> = [(0usize, 1usize, 1.0), (1, 2, 2.0), (2, 3, 1.0), (3, 0, 1.0), (0, 2, 1.0)]
            .iter()
            .map(|&(u, v, w)| (perm[u], perm[v], w))
            .collect();
        let g_perm = Graph::from_index_edges(4, &edges_perm, false).unwrap();

        let walk = WalkConfig::new(1.5, 3).unwrap();
        let cfg = TrainConfig::new(5, walk);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let params = ModelParams::init(4, &cfg, None, &mut rng).unwrap();
        let params_perm = params.permute_nodes(&perm);

        for dir in [Direction::Forward, Direction::Backward] {
            let a = exact_objective(&g, 3, 1.5, &params, dir).unwrap();
            let b = exact_objective(&g_perm, 3, 1.5, &params_perm, dir).unwrap();
            assert!((a - b).abs() < 1e-9, "{dir:?}: {a} vs {b}");
        }
    }

    #[test]
    fn exact_objective_rejects_mismatched_params() {
        let params = zero_params(5, 4);
        assert!(matches!(
            exact_objective(&triangle(), 2, 1.0, &params, Direction::Forward),
            Err(CoreError::DimensionMismatch { .. })
        ));
    }
}
