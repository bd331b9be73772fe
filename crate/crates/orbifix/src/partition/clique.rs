//! Heuristic separation of clique inequalities.
//!
//! For a clique `C` of size `tq + r > q` (with `t >= 1`, `0 <= r < q`),
//! every partition into at most `q` parts keeps at least
//! `b = t(t-1)(q-r)/2 + t(t+1)r/2` edges of `C` inside parts, so
//! `sum of y over C's pairs >= b` is valid. Separation builds a support
//! graph on the instance edges with small `y` values, grows a clique
//! greedily from each seed node in descending support degree, and applies
//! one swap-improvement pass.

use super::instance::PartitionInstance;
use crate::{Error, Result};

const VIOLATION_TOL: f64 = 1e-6;

/// A violated clique inequality: `sum y(pairs of nodes) >= rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct CliqueCut {
    pub nodes: Vec<u32>,
    pub rhs: f64,
    pub violation: f64,
}

/// The minimum number of same-part pairs of an `n`-clique under partitions
/// into at most `q` parts: balanced parts, `r` of size `t + 1` and `q - r`
/// of size `t`.
pub fn clique_rhs(n: u32, q: u32) -> Result<f64> {
    if n <= q {
        return Err(Error::Invalid(format!("clique size {n} must exceed q = {q}")));
    }
    let t = u64::from(n / q);
    let r = u64::from(n % q);
    let q = u64::from(q);
    Ok((t * (t - 1) * (q - r) / 2 + t * (t + 1) * r / 2) as f64)
}

/// Brute force over all `q`-part assignments of `n` clique nodes.
pub fn min_intra_pairs_bruteforce(n: u32, q: u32) -> u64 {
    assert!(n <= 10, "enumeration guard");
    let mut best = u64::MAX;
    let mut parts = Vec::with_capacity(n as usize);
    fn rec(i: u32, n: u32, q: u32, max_used: u32, pairs: u64, parts: &mut Vec<u32>, best: &mut u64) {
        if i > n {
            *best = (*best).min(pairs);
            return;
        }
        for j in 1..=(max_used + 1).min(q) {
            let same = parts.iter().filter(|&&x| x == j).count() as u64;
            parts.push(j);
            rec(i + 1, n, q, max_used.max(j), pairs + same, parts, best);
            parts.pop();
        }
    }
    rec(1, n, q, 0, 0, &mut parts, &mut best);
    best
}

/// Separates clique inequalities at the `y`-part of an LP solution.
/// `y_values[e]` matches `instance.edges()[e]`; the support graph keeps the
/// instance edges with `y < threshold`.
pub fn separate_clique(
    y_values: &[f64],
    instance: &PartitionInstance,
    threshold: f64,
    max_cuts: usize,
) -> Vec<CliqueCut> {
    let p = instance.p() as usize;
    let q = instance.q();
    let mut y = vec![vec![f64::INFINITY; p + 1]; p + 1];
    let mut support = vec![vec![false; p + 1]; p + 1];
    let mut degree = vec![0u32; p + 1];
    for (e, &(u, v, _)) in instance.edges().iter().enumerate() {
        let (u, v) = (u as usize, v as usize);
        y[u][v] = y_values[e];
        y[v][u] = y_values[e];
        if y_values[e] < threshold {
            support[u][v] = true;
            support[v][u] = true;
            degree[u] += 1;
            degree[v] += 1;
        }
    }

    let mut seeds: Vec<u32> = (1..=instance.p()).collect();
    seeds.sort_by(|&a, &b| {
        degree[b as usize].cmp(&degree[a as usize]).then(a.cmp(&b))
    });

    let mut cuts: Vec<CliqueCut> = Vec::new();
    let mut seen: std::collections::HashSet<Vec<u32>> = std::collections::HashSet::new();
    for &seed in &seeds {
        if degree[seed as usize] == 0 {
            continue;
        }
        let mut clique = vec![seed];
        let mut best_here: Option<CliqueCut> = None;
        loop {
            // candidates adjacent (in the support graph) to the whole clique
            let mut candidates: Vec<u32> = (1..=instance.p())
                .filter(|&u| {
                    !clique.contains(&u)
                        && clique.iter().all(|&c| support[u as usize][c as usize])
                })
                .collect();
            if candidates.is_empty() || clique.len() as u32 >= 3 * q {
                break;
            }
            // cheapest joint y-weight first, then support degree, then index
            candidates.sort_by(|&a, &b| {
                let wa: f64 = clique.iter().map(|&c| y[a as usize][c as usize]).sum();
                let wb: f64 = clique.iter().map(|&c| y[b as usize][c as usize]).sum();
                wa.total_cmp(&wb)
                    .then(degree[b as usize].cmp(&degree[a as usize]))
                    .then(a.cmp(&b))
            });
            clique.push(candidates[0]);
            if clique.len() as u32 > q {
                if let Some(cut) = evaluate(&clique, q, &y) {
                    if best_here.as_ref().map_or(true, |b| cut.violation > b.violation) {
                        best_here = Some(cut);
                    }
                }
            }
        }
        // one swap-improvement pass on the final clique
        if clique.len() as u32 > q {
            let improved = swap_pass(&mut clique, instance.p(), &support, &y);
            if improved {
                if let Some(cut) = evaluate(&clique, q, &y) {
                    if best_here.as_ref().map_or(true, |b| cut.violation > b.violation) {
                        best_here = Some(cut);
                    }
                }
            }
        }
        if let Some(cut) = best_here {
            if seen.insert(cut.nodes.clone()) {
                cuts.push(cut);
            }
        }
    }
    cuts.sort_by(|a, b| b.violation.total_cmp(&a.violation));
    cuts.truncate(max_cuts);
    cuts
}

fn evaluate(clique: &[u32], q: u32, y: &[Vec<f64>]) -> Option<CliqueCut> {
    let rhs = clique_rhs(clique.len() as u32, q).ok()?;
    let lhs: f64 = pairs(clique).map(|(a, b)| y[a as usize][b as usize]).sum();
    let violation = rhs - lhs;
    if violation > VIOLATION_TOL {
        let mut nodes = clique.to_vec();
        nodes.sort_unstable();
        Some(CliqueCut { nodes, rhs, violation })
    } else {
        None
    }
}

fn pairs(nodes: &[u32]) -> impl Iterator<Item = (u32, u32)> + '_ {
    nodes
        .iter()
        .enumerate()
        .flat_map(move |(i, &a)| nodes[i + 1..].iter().map(move |&b| (a, b)))
}

/// For each member, try the best replacement adjacent to the rest of the
/// clique that lowers the total y-weight; at most one swap per member.
fn swap_pass(clique: &mut [u32], p: u32, support: &[Vec<bool>], y: &[Vec<f64>]) -> bool {
    let mut improved = false;
    for idx in 0..clique.len() {
        let a = clique[idx];
        let weight_a: f64 = clique
            .iter()
            .filter(|&&c| c != a)
            .map(|&c| y[a as usize][c as usize])
            .sum();
        let mut best: Option<(u32, f64)> = None;
        for u in 1..=p {
            if clique.contains(&u) {
                continue;
            }
            if clique.iter().all(|&c| c == a || support[u as usize][c as usize]) {
                let weight_u: f64 = clique
                    .iter()
                    .filter(|&&c| c != a)
                    .map(|&c| y[u as usize][c as usize])
                    .sum();
                if weight_u < weight_a - 1e-12
                    && best.as_ref().map_or(true, |&(_, w)| weight_u < w)
                {
                    best = Some((u, weight_u));
                }
            }
        }
        if let Some((u, _)) = best {
            clique[idx] = u;
            improved = true;
        }
    }
    improved
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::generate_instance;

    #[test]
    fn rhs_formula_examples() {
        // size q+1: one pair must collide
        assert_eq!(clique_rhs(4, 3).unwrap(), 1.0);
        assert_eq!(clique_rhs(5, 4).unwrap(), 1.0);
        // size 2q with q = 3: three pairs
        assert_eq!(clique_rhs(6, 3).unwrap(), 3.0);
        assert!(clique_rhs(3, 3).is_err());
    }

    #[test]
    fn rhs_matches_bruteforce() {
        for q in [3u32, 4] {
            for n in q + 1..=2 * q {
                assert_eq!(
                    clique_rhs(n, q).unwrap(),
                    min_intra_pairs_bruteforce(n, q) as f64,
                    "n={n} q={q}"
                );
            }
        }
    }

    #[test]
    fn integral_points_never_separated() {
        // y from a feasible partition satisfies every clique inequality
        let inst = generate_instance(8, 16, 3, 2).unwrap();
        let parts: Vec<u32> = (0..8).map(|i| i % 3 + 1).collect();
        let y: Vec<f64> = inst
            .edges()
            .iter()
            .map(|&(u, v, _)| {
                if parts[u as usize - 1] == parts[v as usize - 1] {
                    1.0
                } else {
                    0.0
                }
            })
            .collect();
        assert!(separate_clique(&y, &inst, 0.5, 20).is_empty());
    }

    #[test]
    fn all_zero_y_on_a_clique_is_separated() {
        // K5 with q = 3 and y = 0 violates the 4-clique and 5-clique cuts
        let edges: Vec<(u32, u32, u64)> =
            (1..=5u32).flat_map(|u| (u + 1..=5).map(move |v| (u, v, 1))).collect();
        let inst = PartitionInstance::new(5, 3, edges, "k5".into()).unwrap();
        let y = vec![0.0; inst.num_edges()];
        let cuts = separate_clique(&y, &inst, 0.5, 20);
        assert!(!cuts.is_empty());
        for cut in &cuts {
            // every returned pair really is an instance edge
            for (a, b) in pairs(&cut.nodes) {
                assert!(inst
                    .edges()
                    .iter()
                    .any(|&(u, v, _)| (u, v) == (a, b) || (u, v) == (b, a)));
            }
            assert!(cut.violation > 0.0);
        }
    }
}
