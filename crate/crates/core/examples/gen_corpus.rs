//! Generates the graph6 fixture streams used by the test suites:
//!
//!   gen_corpus connected <max_n>   all connected graphs up to iso, n <= max_n <= 7
//!   gen_corpus trees <lo> <hi>     all free trees up to iso, lo <= n <= hi (hi <= 12)
//!
//! Graphs are built level by level: every graph on n vertices arises from
//! some graph on n-1 vertices by adding one vertex with an arbitrary
//! neighborhood, so augmenting every parent with every neighborhood and
//! deduplicating by canonical form covers every isomorphism class. Level
//! sizes are asserted against the known counts, which makes the generator
//! self-checking.

use num_rational::BigRational;
use num_traits::One;
use std::collections::BTreeSet;
use walkcent_core::graph::Graph;

fn pair_index(i: usize, j: usize) -> usize {
    debug_assert!(i < j);
    j * (j - 1) / 2 + i
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    fn heap(k: usize, items: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 1 {
            out.push(items.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, items, out);
            if k % 2 == 0 {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
    }
    if n == 0 {
        out.push(Vec::new());
    } else {
        heap(n, &mut items, &mut out);
    }
    out
}

fn permute_mask(mask: u64, n: usize, perm: &[usize]) -> u64 {
    let mut out = 0u64;
    for j in 1..n {
        for i in 0..j {
            if mask >> pair_index(i, j) & 1 == 1 {
                let (a, b) = (perm[i].min(perm[j]), perm[i].max(perm[j]));
                out |= 1 << pair_index(a, b);
            }
        }
    }
    out
}

fn canonical(mask: u64, n: usize, perms: &[Vec<usize>]) -> u64 {
    perms
        .iter()
        .map(|p| permute_mask(mask, n, p))
        .min()
        .unwrap()
}

fn connected(mask: u64, n: usize) -> bool {
    if n == 0 {
        return false;
    }
    let mut adj = vec![0u64; n];
    for j in 1..n {
        for i in 0..j {
            if mask >> pair_index(i, j) & 1 == 1 {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
    }
    let mut seen = 1u64;
    let mut frontier = 1u64;
    while frontier != 0 {
        let mut next = 0u64;
        let mut f = frontier;
        while f != 0 {
            let v = f.trailing_zeros() as usize;
            f &= f - 1;
            next |= adj[v] & !seen;
        }
        seen |= next;
        frontier = next;
    }
    seen.count_ones() as usize == n
}

fn mask_to_graph(mask: u64, n: usize) -> Graph {
    let mut edges = Vec::new();
    for j in 1..n {
        for i in 0..j {
            if mask >> pair_index(i, j) & 1 == 1 {
                edges.push((i, j, BigRational::one()));
            }
        }
    }
    Graph::new(n, false, edges).expect("valid mask graph")
}

fn gen_connected(max_n: usize) {
    assert!(max_n <= 7, "canonical-min dedup is sized for n <= 7");
    // all graphs (including disconnected) per level, as canonical masks
    const ALL_COUNTS: [usize; 7] = [1, 2, 4, 11, 34, 156, 1044];
    const CONNECTED_COUNTS: [usize; 7] = [1, 1, 2, 6, 21, 112, 853];
    let mut level: Vec<u64> = vec![0];
    for n in 1..=max_n {
        if n > 1 {
            let perms = permutations(n);
            let mut next: BTreeSet<u64> = BTreeSet::new();
            for &parent in &level {
                for nb in 0u64..(1 << (n - 1)) {
                    let mut child = parent;
                    for i in 0..(n - 1) {
                        if nb >> i & 1 == 1 {
                            child |= 1 << pair_index(i, n - 1);
                        }
                    }
                    next.insert(canonical(child, n, &perms));
                }
            }
            level = next.into_iter().collect();
        }
        assert_eq!(level.len(), ALL_COUNTS[n - 1], "all-graph count at n={n}");
        let conn: Vec<u64> = level.iter().copied().filter(|&m| connected(m, n)).collect();
        assert_eq!(conn.len(), CONNECTED_COUNTS[n - 1], "connected count at n={n}");
        for mask in conn {
            let g6 = mask_to_graph(mask, n).to_graph6().expect("encodable");
            println!("{g6}");
        }
    }
}

/// Canonical encoding of a free tree: rooted AHU strings at the centroid
/// center(s), minimum over the (at most two) centers.
fn tree_canonical(n: usize, edges: &[(usize, usize)]) -> String {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    // centers by leaf stripping
    let mut degree: Vec<usize> = adj.iter().map(|a| a.len()).collect();
    let mut removed = vec![false; n];
    let mut remaining = n;
    let mut layer: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
    while remaining > 2 {
        let mut next = Vec::new();
        for &v in &layer {
            removed[v] = true;
            remaining -= 1;
            for &w in &adj[v] {
                if !removed[w] {
                    degree[w] -= 1;
                    if degree[w] == 1 {
                        next.push(w);
                    }
                }
            }
        }
        layer = next;
    }
    let centers: Vec<usize> = (0..n).filter(|&v| !removed[v]).collect();

    fn encode(v: usize, parent: Option<usize>, adj: &[Vec<usize>]) -> String {
        let mut kids: Vec<String> = adj[v]
            .iter()
            .filter(|&&w| Some(w) != parent)
            .map(|&w| encode(w, Some(v), adj))
            .collect();
        kids.sort();
        format!("({})", kids.concat())
    }

    centers
        .iter()
        .map(|&c| encode(c, None, &adj))
        .min()
        .unwrap()
}

fn gen_trees(lo: usize, hi: usize) {
    assert!(hi <= 12);
    // known free-tree counts for n = 1..=12
    const TREE_COUNTS: [usize; 12] = [1, 1, 1, 2, 3, 6, 11, 23, 47, 106, 235, 551];
    let mut level: Vec<Vec<(usize, usize)>> = vec![Vec::new()]; // n = 1
    for n in 2..=hi {
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for parent in &level {
            for attach in 0..(n - 1) {
                let mut child = parent.clone();
                child.push((attach, n - 1));
                let key = tree_canonical(n, &child);
                if seen.insert(key) {
                    next.push(child);
                }
            }
        }
        level = next;
        assert_eq!(level.len(), TREE_COUNTS[n - 1], "tree count at n={n}");
        if n >= lo {
            for edges in &level {
                let g = Graph::new(
                    n,
                    false,
                    edges.iter().map(|&(u, v)| (u, v, BigRational::one())).collect(),
                )
                .expect("valid tree");
                println!("{}", g.to_graph6().expect("encodable"));
            }
        }
    }
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    match args.get(1).map(|s| s.as_str()) {
        Some("connected") => {
            let max_n: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(7);
            gen_connected(max_n);
        }
        Some("trees") => {
            let lo: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(8);
            let hi: usize = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(10);
            gen_trees(lo, hi);
        }
        _ => {
            eprintln!("usage: gen_corpus connected <max_n> | gen_corpus trees <lo> <hi>");
            std::process::exit(2);
        }
    }
}
