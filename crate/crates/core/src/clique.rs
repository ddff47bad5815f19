//! Maximum cliques in small undirected graphs.

/// Largest graph accepted by [`max_clique`].
pub const EXACT_LIMIT: usize = 20;

/// Adjacency as bitmasks; `adj[v]` must not contain `v`.
pub fn max_clique(adj: &[u32]) -> Vec<usize> {
    assert!(adj.len() <= EXACT_LIMIT);
    let all = if adj.is_empty() {
        0
    } else {
        u32::MAX >> (32 - adj.len())
    };
    let mut best = 0u32;
    expand(adj, 0, all, &mut best);
    bits(best)
}

fn expand(adj: &[u32], current: u32, mut candidates: u32, best: &mut u32) {
    if candidates == 0 {
        if current.count_ones() > best.count_ones() {
            *best = current;
        }
        return;
    }
    while candidates != 0 {
        if current.count_ones() + candidates.count_ones() <= best.count_ones() {
            return;
        }
        let v = candidates.trailing_zeros() as usize;
        candidates &= !(1 << v);
        expand(adj, current | (1 << v), candidates & adj[v], best);
    }
}

/// A maximal clique built by adding vertices in order of decreasing degree.
pub fn greedy_clique(adj: &[Vec<bool>]) -> Vec<usize> {
    let n = adj.len();
    let degree: Vec<usize> = adj
        .iter()
        .map(|row| row.iter().filter(|&&e| e).count())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| degree[b].cmp(&degree[a]).then(a.cmp(&b)));
    let mut clique: Vec<usize> = Vec::new();
    for v in order {
        if clique.iter().all(|&u| adj[u][v]) {
            clique.push(v);
        }
    }
    clique.sort_unstable();
    clique
}

fn bits(mask: u32) -> Vec<usize> {
    (0..32).filter(|i| mask & (1 << i) != 0).collect()
}
