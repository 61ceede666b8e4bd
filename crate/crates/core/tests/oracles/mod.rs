//! Brute-force reference implementations, written without the library's solvers.
#![allow(dead_code)]

use std::collections::HashMap;

use hypermatch::{Hypergraph, Vertex};
use itertools::Itertools;

fn mask(e: &[Vertex]) -> u64 {
    e.iter().fold(0, |m, &v| m | 1 << v)
}

/// Matching number by memoized recursion on the lowest free vertex.
pub fn nu(h: &Hypergraph) -> usize {
    assert!(h.n() <= 64);
    let edges: Vec<u64> = h.edges().iter().map(|e| mask(e)).collect();
    let full = if h.n() == 64 { u64::MAX } else { (1u64 << h.n()) - 1 };
    let mut memo = HashMap::new();
    nu_rec(&edges, full, &mut memo)
}

fn nu_rec(edges: &[u64], free: u64, memo: &mut HashMap<u64, usize>) -> usize {
    if free == 0 {
        return 0;
    }
    if let Some(&v) = memo.get(&free) {
        return v;
    }
    let low = free & free.wrapping_neg();
    let mut best = nu_rec(edges, free & !low, memo);
    for &e in edges {
        if e & low != 0 && e & free == e {
            best = best.max(1 + nu_rec(edges, free & !e, memo));
        }
    }
    memo.insert(free, best);
    best
}

/// Largest vertex set containing no edge, by scanning all subsets.
pub fn alpha(h: &Hypergraph) -> usize {
    assert!(h.n() <= 20);
    let edges: Vec<u64> = h.edges().iter().map(|e| mask(e)).collect();
    (0u64..1 << h.n())
        .filter(|&s| edges.iter().all(|&e| e & s != e))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Number of edges through every l-set, minimized.
pub fn min_degree(h: &Hypergraph, l: usize) -> usize {
    (0..h.n() as Vertex)
        .combinations(l)
        .map(|t| {
            let t = mask(&t);
            h.edges().iter().filter(|e| mask(e) & t == t).count()
        })
        .min()
        .unwrap_or(0)
}

pub fn degree(h: &Hypergraph, t: &[Vertex]) -> usize {
    let t = mask(t);
    h.edges().iter().filter(|e| mask(e) & t == t).count()
}

/// k-sets meeting `W = {0..m-1}` in between 1 and s vertices.
pub fn barrier(n: usize, k: usize, s: usize, m: usize) -> Vec<Vec<Vertex>> {
    (0..n as Vertex)
        .combinations(k)
        .filter(|e| {
            let hits = e.iter().filter(|&&v| (v as usize) < m).count();
            hits >= 1 && hits <= s
        })
        .collect()
}

/// Stability by comparing every k-set with every edge.
pub fn is_stable(h: &Hypergraph) -> bool {
    (0..h.n() as Vertex).combinations(h.k()).all(|e| {
        h.contains_edge(&e)
            || !h
                .edges()
                .iter()
                .any(|f| e.iter().zip(f).all(|(a, b)| a <= b))
    })
}

pub fn shadow_size(h: &Hypergraph) -> usize {
    let mut seen = std::collections::HashSet::new();
    for e in h.edges() {
        for sub in e.iter().copied().combinations(h.k() - 1) {
            seen.insert(sub);
        }
    }
    seen.len()
}

/// Odd components of the graph after deleting `removed`.
pub fn odd_components(g: &Hypergraph, removed: u64) -> usize {
    let n = g.n();
    let mut seen = removed;
    let mut odd = 0;
    for start in 0..n {
        if seen >> start & 1 == 1 {
            continue;
        }
        let mut stack = vec![start];
        seen |= 1 << start;
        let mut size = 0;
        while let Some(v) = stack.pop() {
            size += 1;
            for e in g.edges() {
                let (a, b) = (e[0] as usize, e[1] as usize);
                let w = if a == v { b } else if b == v { a } else { continue };
                if seen >> w & 1 == 0 {
                    seen |= 1 << w;
                    stack.push(w);
                }
            }
        }
        odd += size % 2;
    }
    odd
}

/// `min_S (n − odd(G − S) + |S|) / 2` over every vertex subset.
pub fn berge_value(g: &Hypergraph) -> usize {
    let n = g.n();
    (0u64..1 << n)
        .map(|s| (n + s.count_ones() as usize - odd_components(g, s)) / 2)
        .min()
        .unwrap()
}

/// Edges all in `h`, pairwise disjoint.
pub fn is_matching_in(h: &Hypergraph, edges: &[Vec<Vertex>]) -> bool {
    let mut used = vec![false; h.n()];
    for e in edges {
        if !h.contains_edge(e) {
            return false;
        }
        for &v in e {
            if std::mem::replace(&mut used[v as usize], true) {
                return false;
            }
        }
    }
    true
}

pub fn binom(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}
