//! Enumeration of small graphs, trees, maximal degenerate graphs, request
//! vectors, and list assignments up to color permutation. These catalogs back
//! the exhaustive verification commands and the test batteries.

use std::collections::HashSet;

use itertools::Itertools;

use crate::graph::{Graph, ListAssignment};

/// All labeled graphs on `1..=n` (via edge-subset masks). Guarded to small n.
pub fn all_graphs(n: usize) -> Vec<Graph> {
    assert!(n <= 6, "labeled enumeration limited to n <= 6");
    let pairs: Vec<(usize, usize)> = (1..=n).tuple_combinations().collect();
    (0u64..(1 << pairs.len()))
        .map(|mask| {
            let edges: Vec<(usize, usize)> =
                pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
            Graph::new(n, &edges).expect("mask subsets are simple")
        })
        .collect()
}

pub fn connected_graphs(n: usize) -> Vec<Graph> {
    all_graphs(n).into_iter().filter(|g| g.n() > 0 && g.is_connected()).collect()
}

/// All labeled trees on `1..=n`, decoded from Prüfer sequences.
pub fn labeled_trees(n: usize) -> Vec<Graph> {
    match n {
        0 => vec![],
        1 => vec![Graph::new(1, &[]).unwrap()],
        2 => vec![Graph::complete(2)],
        _ => {
            let seqs = std::iter::repeat(1..=n).take(n - 2).multi_cartesian_product();
            seqs.map(|seq| {
                let mut degree = vec![1usize; n + 1];
                for &s in &seq {
                    degree[s] += 1;
                }
                let mut edges = Vec::with_capacity(n - 1);
                let mut deg = degree.clone();
                for &s in &seq {
                    let leaf = (1..=n).find(|&v| deg[v] == 1).expect("a leaf always remains");
                    edges.push((leaf.min(s), leaf.max(s)));
                    deg[leaf] -= 1;
                    deg[s] -= 1;
                }
                let rest: Vec<usize> = (1..=n).filter(|&v| deg[v] == 1).collect();
                edges.push((rest[0], rest[1]));
                Graph::new(n, &edges).expect("Prüfer decoding yields a tree")
            })
            .collect()
        }
    }
}

fn tree_code_rooted(g: &Graph, v: usize, parent: usize) -> String {
    let mut children: Vec<String> = g
        .neighbors(v)
        .iter()
        .filter(|&&w| w != parent)
        .map(|&w| tree_code_rooted(g, w, v))
        .collect();
    children.sort();
    format!("({})", children.concat())
}

fn canonical_tree_code(g: &Graph) -> String {
    g.vertices().map(|v| tree_code_rooted(g, v, 0)).min().expect("nonempty tree")
}

/// One representative per isomorphism class of trees on `n` vertices.
pub fn trees_up_to_iso(n: usize) -> Vec<Graph> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for t in labeled_trees(n) {
        if seen.insert(canonical_tree_code(&t)) {
            out.push(t);
        }
    }
    out
}

/// One representative per isomorphism class of graphs on `n` vertices
/// (lexicographically smallest edge mask). Guarded to small n.
pub fn graphs_up_to_iso(n: usize) -> Vec<Graph> {
    assert!(n <= 5, "isomorphism reduction limited to n <= 5");
    let pairs: Vec<(usize, usize)> = (1..=n).tuple_combinations().collect();
    let pair_index = |u: usize, v: usize| pairs.iter().position(|&p| p == (u.min(v), u.max(v))).unwrap();
    // Pair remap table per vertex permutation.
    let perms: Vec<Vec<usize>> = (1..=n).permutations(n).collect();
    let remaps: Vec<Vec<usize>> = perms
        .iter()
        .map(|perm| pairs.iter().map(|&(u, v)| pair_index(perm[u - 1], perm[v - 1])).collect())
        .collect();
    let mut out = Vec::new();
    for mask in 0u64..(1 << pairs.len()) {
        let canonical = remaps
            .iter()
            .map(|remap| {
                let mut m = 0u64;
                for (i, &j) in remap.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        m |= 1 << j;
                    }
                }
                m
            })
            .min()
            .unwrap();
        if canonical == mask {
            let edges: Vec<(usize, usize)> =
                pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
            out.push(Graph::new(n, &edges).unwrap());
        }
    }
    out
}

/// Every maximal d-degenerate graph shape on `n` vertices in its natural
/// ordering: the first `min(d, n)` vertices form a clique and each later
/// vertex picks exactly `d` earlier neighbors. Returned with the identity
/// ordering.
pub fn maximal_degenerate_graphs(d: usize, n: usize) -> Vec<(Graph, Vec<usize>)> {
    let ordering: Vec<usize> = (1..=n).collect();
    let clique = d.min(n);
    let base: Vec<(usize, usize)> = (1..=clique).tuple_combinations().collect();
    let mut out = Vec::new();
    fn extend(
        edges: &mut Vec<(usize, usize)>,
        next: usize,
        n: usize,
        d: usize,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if next > n {
            out.push(edges.clone());
            return;
        }
        for back in (1..next).combinations(d) {
            let start = edges.len();
            edges.extend(back.iter().map(|&u| (u, next)));
            extend(edges, next + 1, n, d, out);
            edges.truncate(start);
        }
    }
    let mut edge_sets = Vec::new();
    if n <= d {
        edge_sets.push(base);
    } else {
        let mut edges = base;
        extend(&mut edges, d + 1, n, d, &mut edge_sets);
    }
    for edges in edge_sets {
        out.push((Graph::new(n, &edges).unwrap(), ordering.clone()));
    }
    out
}

/// All vectors of `n` nonnegative integers summing to `total`.
pub fn requests_with_sum(n: usize, total: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut current = vec![0u64; n];
    fn rec(i: usize, remaining: u64, current: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if i + 1 == current.len() {
            current[i] = remaining;
            out.push(current.clone());
            return;
        }
        for v in 0..=remaining {
            current[i] = v;
            rec(i + 1, remaining - v, current, out);
        }
    }
    if n == 0 {
        if total == 0 {
            out.push(vec![]);
        }
        return out;
    }
    rec(0, total, &mut current, &mut out);
    out
}

/// All assignments of size-`size` lists drawn from `universe`, one
/// representative per orbit of the color-permutation action (lexicographically
/// smallest option-index vector).
pub fn assignments_up_to_color_perm(n: usize, size: usize, universe: &[u32]) -> Vec<ListAssignment> {
    assert!(universe.len() <= 5, "color-permutation reduction limited to 5 colors");
    assert!(size >= 1 && size <= universe.len());
    let options: Vec<Vec<u32>> = universe.iter().copied().combinations(size).collect();
    let option_index: std::collections::HashMap<Vec<u32>, usize> =
        options.iter().cloned().enumerate().map(|(i, o)| (o, i)).collect();
    let remaps: Vec<Vec<usize>> = universe
        .iter()
        .copied()
        .permutations(universe.len())
        .map(|perm| {
            let map: std::collections::HashMap<u32, u32> =
                universe.iter().copied().zip(perm).collect();
            options
                .iter()
                .map(|opt| {
                    let mut mapped: Vec<u32> = opt.iter().map(|c| map[c]).collect();
                    mapped.sort_unstable();
                    option_index[&mapped]
                })
                .collect()
        })
        .collect();

    let mut out = Vec::new();
    let mut vector = vec![0usize; n];
    'outer: loop {
        let canonical = remaps.iter().all(|remap| {
            for i in 0..n {
                match remap[vector[i]].cmp(&vector[i]) {
                    std::cmp::Ordering::Less => return false,
                    std::cmp::Ordering::Greater => return true,
                    std::cmp::Ordering::Equal => {}
                }
            }
            true
        });
        if canonical {
            out.push(
                ListAssignment::new(vector.iter().map(|&i| options[i].clone()).collect())
                    .expect("options are nonempty"),
            );
        }
        // Odometer increment.
        for i in (0..n).rev() {
            vector[i] += 1;
            if vector[i] < options.len() {
                continue 'outer;
            }
            vector[i] = 0;
        }
        break;
    }
    out
}
