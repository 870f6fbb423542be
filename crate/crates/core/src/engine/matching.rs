//! Perfect matchings in small bipartite graphs.

/// A perfect matching between `0..n` on both sides using only pairs with
/// `adj(i, j)`, found with augmenting paths. `result[i]` is the partner of
/// left vertex `i`.
pub fn perfect_matching(n_left: usize, n_right: usize, adj: impl Fn(usize, usize) -> bool) -> Option<Vec<usize>> {
    if n_left != n_right {
        return None;
    }
    let n = n_left;
    let mut owner: Vec<Option<usize>> = vec![None; n];

    fn augment(
        i: usize,
        n: usize,
        adj: &dyn Fn(usize, usize) -> bool,
        seen: &mut [bool],
        owner: &mut [Option<usize>],
    ) -> bool {
        for j in 0..n {
            if adj(i, j) && !seen[j] {
                seen[j] = true;
                if owner[j].is_none_or(|k| augment(k, n, adj, seen, owner)) {
                    owner[j] = Some(i);
                    return true;
                }
            }
        }
        false
    }

    for i in 0..n {
        let mut seen = vec![false; n];
        if !augment(i, n, &adj, &mut seen, &mut owner) {
            return None;
        }
    }
    let mut partner = vec![0; n];
    for (j, i) in owner.into_iter().enumerate() {
        partner[i.expect("perfect")] = j;
    }
    Some(partner)
}

/// Tries every permutation. Only sensible for a handful of vertices.
pub fn perfect_matching_brute(n_left: usize, n_right: usize, adj: impl Fn(usize, usize) -> bool) -> bool {
    use itertools::Itertools;
    n_left == n_right && (0..n_right).permutations(n_left).any(|p| p.iter().enumerate().all(|(i, &j)| adj(i, j)))
}
