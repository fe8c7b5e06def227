//! Maximum antichains of finite posets via Dilworth's theorem.
//!
//! The width of a poset equals the size of a minimum chain cover, which is
//! `n - |maximum matching|` in the bipartite graph that links `x` (left) to
//! `y` (right) whenever `x < y`. The relation must be transitively closed.

use std::collections::VecDeque;

const FREE: usize = usize::MAX;

/// Hopcroft–Karp maximum matching on a bipartite graph with `n` vertices on
/// each side; `adjacency[u]` lists the right vertices of left vertex `u`.
pub fn maximum_matching(n: usize, adjacency: &[Vec<usize>]) -> usize {
    let mut match_left = vec![FREE; n];
    let mut match_right = vec![FREE; n];
    let mut layer = vec![0usize; n];
    let mut matched = 0;
    loop {
        // Layer the free left vertices and everything reachable by alternating paths.
        let mut queue = VecDeque::new();
        let mut reachable_free = false;
        for u in 0..n {
            if match_left[u] == FREE {
                layer[u] = 0;
                queue.push_back(u);
            } else {
                layer[u] = usize::MAX;
            }
        }
        while let Some(u) = queue.pop_front() {
            for &v in &adjacency[u] {
                let w = match_right[v];
                if w == FREE {
                    reachable_free = true;
                } else if layer[w] == usize::MAX {
                    layer[w] = layer[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !reachable_free {
            return matched;
        }
        let mut next_edge = vec![0usize; n];
        for u in 0..n {
            if match_left[u] == FREE
                && augment(
                    u,
                    adjacency,
                    &mut match_left,
                    &mut match_right,
                    &mut layer,
                    &mut next_edge,
                )
            {
                matched += 1;
            }
        }
    }
}

fn augment(
    u: usize,
    adjacency: &[Vec<usize>],
    match_left: &mut [usize],
    match_right: &mut [usize],
    layer: &mut [usize],
    next_edge: &mut [usize],
) -> bool {
    // Iterative DFS along layered alternating paths.
    let mut stack = vec![u];
    while let Some(&x) = stack.last() {
        if next_edge[x] == adjacency[x].len() {
            layer[x] = usize::MAX;
            stack.pop();
            continue;
        }
        let v = adjacency[x][next_edge[x]];
        next_edge[x] += 1;
        let w = match_right[v];
        if w == FREE {
            // Flip the path recorded on the stack.
            let mut right = v;
            while let Some(left) = stack.pop() {
                let previous = match_left[left];
                match_left[left] = right;
                match_right[right] = left;
                right = previous;
            }
            return true;
        }
        if layer[w] == layer[x].wrapping_add(1) {
            stack.push(w);
        }
    }
    false
}

/// Size of a largest antichain of the poset on `0..n` whose strict order is
/// given by `greater[x]` = every `y` with `x < y`.
pub fn dilworth_width(n: usize, greater: &[Vec<usize>]) -> usize {
    n - maximum_matching(n, greater)
}
