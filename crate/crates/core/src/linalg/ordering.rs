use std::collections::VecDeque;

use super::SparseMatrix;

/// Symmetric permutation applied before factorization.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Ordering {
    Natural,
    /// Reverse Cuthill-McKee; keeps the envelope of grid Laplacians (including
    /// periodic ones) at `O(m)` width.
    #[default]
    ReverseCuthillMcKee,
}

/// Returns `perm` with `perm[new] = old`.
pub(crate) fn permutation(a: &SparseMatrix, ordering: Ordering) -> Vec<usize> {
    match ordering {
        Ordering::Natural => (0..a.dim()).collect(),
        Ordering::ReverseCuthillMcKee => rcm(a),
    }
}

fn rcm(a: &SparseMatrix) -> Vec<usize> {
    let n = a.dim();
    let degree: Vec<usize> = (0..n).map(|i| a.row(i).filter(|&(j, _)| j != i).count()).collect();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);

    while order.len() < n {
        let seed = (0..n)
            .filter(|&i| !visited[i])
            .min_by_key(|&i| degree[i])
            .expect("unvisited node remains");
        let start = pseudo_peripheral(a, seed, &degree);
        visited[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut next: Vec<usize> = a
                .row(v)
                .map(|(j, _)| j)
                .filter(|&j| !visited[j])
                .collect();
            next.sort_by_key(|&j| (degree[j], j));
            for j in next {
                visited[j] = true;
                queue.push_back(j);
            }
        }
    }
    order.reverse();
    order
}

/// A few rounds of "jump to the farthest, lowest-degree node".
fn pseudo_peripheral(a: &SparseMatrix, seed: usize, degree: &[usize]) -> usize {
    let mut start = seed;
    let mut ecc = 0;
    for _ in 0..8 {
        let levels = bfs_levels(a, start);
        let far = *levels.iter().filter(|&&l| l != usize::MAX).max().unwrap_or(&0);
        if far <= ecc {
            break;
        }
        ecc = far;
        start = (0..a.dim())
            .filter(|&i| levels[i] == far)
            .min_by_key(|&i| (degree[i], i))
            .unwrap_or(start);
    }
    start
}

fn bfs_levels(a: &SparseMatrix, start: usize) -> Vec<usize> {
    let mut level = vec![usize::MAX; a.dim()];
    level[start] = 0;
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        for (j, _) in a.row(v) {
            if level[j] == usize::MAX {
                level[j] = level[v] + 1;
                queue.push_back(j);
            }
        }
    }
    level
}
