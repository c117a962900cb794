//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;

use tropicount::{LatticePoint, TropicalCurve};

/// Severi degree of plane curves of degree `d` with `nodes` nodes (possibly
/// reducible), from the Caporaso-Harris recursion on relative degrees.
pub fn severi_degree(d: usize, nodes: usize) -> u128 {
    let mut memo = HashMap::new();
    let mut beta = vec![0; d + 1];
    beta[1] = d;
    relative(d, nodes as i64, &vec![0; d + 1], &beta, &mut memo)
}

type Key = (usize, i64, Vec<usize>, Vec<usize>);

/// `N^{d,δ}(α, β)`: curves with tangency profile `α` at fixed points and `β`
/// at free points of a fixed line. Index `k` of the profiles is the contact order.
fn relative(d: usize, delta: i64, alpha: &[usize], beta: &[usize], memo: &mut HashMap<Key, u128>) -> u128 {
    if delta < 0 {
        return 0;
    }
    if d == 0 {
        let empty = alpha.iter().chain(beta).all(|&c| c == 0);
        return u128::from(delta == 0 && empty);
    }
    let key = (d, delta, alpha.to_vec(), beta.to_vec());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let mut total = 0u128;
    // A free tangency point specializes to a fixed one.
    for k in 1..=d {
        if beta[k] > 0 {
            let (mut a, mut b) = (alpha.to_vec(), beta.to_vec());
            a[k] += 1;
            b[k] -= 1;
            total += k as u128 * relative(d, delta, &a, &b, memo);
        }
    }
    // The curve degenerates to the line plus a curve of degree d - 1.
    let weighted = |v: &[usize]| v.iter().enumerate().map(|(k, c)| k * c).sum::<usize>();
    for alpha2 in bounded_vectors(alpha) {
        let rest = d - 1;
        let used = weighted(&alpha2);
        if used > rest {
            continue;
        }
        for beta2 in vectors_above(beta, rest - used, d) {
            let gained: usize = beta2.iter().zip(beta).map(|(b2, b)| b2 - b).sum();
            let delta2 = delta - (d as i64 - 1) + gained as i64;
            if delta2 < 0 {
                continue;
            }
            let mut factor = 1u128;
            for k in 1..=d {
                factor *= (k as u128).pow((beta2[k] - beta[k]) as u32);
                factor *= binomial(alpha[k], alpha2[k]) * binomial(beta2[k], beta[k]);
            }
            let mut a = alpha2.clone();
            let mut b = beta2.clone();
            a.truncate(d);
            b.truncate(d);
            total += factor * relative(d - 1, delta2, &a, &b, memo);
        }
    }
    memo.insert(key, total);
    total
}

/// All vectors `v` with `0 <= v <= bound` componentwise.
fn bounded_vectors(bound: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &b in bound {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=b).map(move |c| {
                    let mut v = prefix.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
    }
    out
}

/// Vectors `w >= floor` (length `len + 1`, index = contact order) with
/// `Σ k (w_k - floor_k) = budget - Σ k floor_k`, i.e. weighted sum `budget`.
fn vectors_above(floor: &[usize], budget: usize, len: usize) -> Vec<Vec<usize>> {
    let base: usize = floor.iter().enumerate().map(|(k, c)| k * c).sum();
    if base > budget {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut current = floor.to_vec();
    current.resize(len + 1, 0);
    extend(&mut current, 1, budget - base, &mut out);
    out
}

fn extend(current: &mut Vec<usize>, k: usize, left: usize, out: &mut Vec<Vec<usize>>) {
    if left == 0 {
        out.push(current.clone());
        return;
    }
    if k >= current.len() {
        return;
    }
    let mut extra = 0;
    while extra * k <= left {
        current[k] += extra;
        extend(current, k + 1, left - extra * k, out);
        current[k] -= extra;
        extra += 1;
    }
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Degree of the discriminant of plane curves of degree `d`.
pub fn discriminant_degree(d: i64) -> i64 {
    3 * (d - 1) * (d - 1)
}

/// Closed form for two nodes, valid for every degree at least 1.
pub fn two_node_polynomial(d: i64) -> i64 {
    3 * (d - 1) * (d - 2) * (3 * d * d - 3 * d - 11) / 2
}

/// Classical degree of the variety of cuspidal plane curves of degree `d`.
pub fn cuspidal_degree(d: i64) -> i64 {
    12 * (d - 1) * (d - 2)
}

/// Nodal conics through the given points are line pairs. Counts the splits
/// of the points into two blocks that each span exactly one line.
pub fn line_pairs_through(points: &[(i64, i64)]) -> usize {
    let spans_one_line = |block: &[(i64, i64)]| {
        block.len() >= 2
            && block.iter().all(|&(x, y)| {
                let (a, b) = (block[0], block[1]);
                (b.0 - a.0) * (y - a.1) - (b.1 - a.1) * (x - a.0) == 0
            })
    };
    let n = points.len();
    let mut count = 0;
    // The first point always goes to the first block, so each split is seen once.
    for mask in (1u32..(1 << n)).filter(|m| m & 1 == 1 && m.count_ones() < n as u32) {
        let (first, second): (Vec<_>, Vec<_>) = (0..n).partition(|&k| mask >> k & 1 == 1);
        let pick = |idx: Vec<usize>| idx.into_iter().map(|k| points[k]).collect::<Vec<_>>();
        if spans_one_line(&pick(first)) && spans_one_line(&pick(second)) {
            count += 1;
        }
    }
    count
}

/// Whether the curve splits into two nonempty balanced subgraphs, each edge
/// belonging entirely to one of them. Exhaustive over edge colorings.
pub fn splits_into_balanced_parts(curve: &TropicalCurve) -> bool {
    struct Piece {
        ends: Vec<usize>,
        // Outgoing weighted direction at each end.
        vectors: Vec<LatticePoint>,
    }
    let mut pieces = Vec::new();
    for e in curve.bounded_edges() {
        pieces.push(Piece {
            ends: vec![e.from, e.to],
            vectors: vec![e.weight * e.direction, -(e.weight * e.direction)],
        });
    }
    for r in curve.rays() {
        pieces.push(Piece {
            ends: vec![r.vertex],
            vectors: vec![r.weight * r.direction],
        });
    }
    let nv = curve.vertices().len();
    // The piece after which each vertex is fully decided.
    let mut last = vec![0; nv];
    for (k, p) in pieces.iter().enumerate() {
        for &v in &p.ends {
            last[v] = k;
        }
    }
    fn search(
        k: usize,
        pieces: &[Piece],
        last: &[usize],
        chosen: &mut Vec<bool>,
        sums: &mut Vec<LatticePoint>,
    ) -> bool {
        if k == pieces.len() {
            let taken = chosen.iter().filter(|&&c| c).count();
            return taken > 0 && taken < pieces.len();
        }
        let options: &[bool] = if k == 0 { &[true] } else { &[false, true] };
        for &take in options {
            chosen.push(take);
            if take {
                for (v, &d) in pieces[k].ends.iter().zip(&pieces[k].vectors) {
                    sums[*v] = sums[*v] + d;
                }
            }
            let balanced = pieces[k]
                .ends
                .iter()
                .all(|&v| last[v] != k || sums[v] == LatticePoint::ORIGIN);
            if balanced && search(k + 1, pieces, last, chosen, sums) {
                return true;
            }
            if take {
                for (v, &d) in pieces[k].ends.iter().zip(&pieces[k].vectors) {
                    sums[*v] = sums[*v] - d;
                }
            }
            chosen.pop();
        }
        false
    }
    search(0, &pieces, &last, &mut Vec::new(), &mut vec![LatticePoint::ORIGIN; nv])
}
