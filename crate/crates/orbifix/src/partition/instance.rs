//! Instances, generation, and the enumeration oracle.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// A weighted simple graph with a part count `q`, nodes `1..=p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionInstance {
    p: u32,
    q: u32,
    edges: Vec<(u32, u32, u64)>,
    label: String,
}

impl PartitionInstance {
    pub fn new(p: u32, q: u32, edges: Vec<(u32, u32, u64)>, label: String) -> Result<Self> {
        if q < 2 || q > p {
            return Err(Error::Invalid(format!("need 2 <= q <= p, got q={q}, p={p}")));
        }
        let mut seen = std::collections::HashSet::new();
        for &(u, v, _) in &edges {
            if u == v || u < 1 || v < 1 || u > p || v > p {
                return Err(Error::Invalid(format!("bad edge ({u},{v})")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::Invalid(format!("duplicate edge ({u},{v})")));
            }
        }
        Ok(PartitionInstance { p, q, edges, label })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(u32, u32, u64)] {
        &self.edges
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Total weight of incident edges, per node.
    pub fn star_weights(&self) -> Vec<u64> {
        let mut star = vec![0u64; self.p as usize];
        for &(u, v, w) in &self.edges {
            star[u as usize - 1] += w;
            star[v as usize - 1] += w;
        }
        star
    }

    /// Cost of an assignment (part index per node, values `1..=q`).
    pub fn assignment_cost(&self, parts: &[u32]) -> u64 {
        self.edges
            .iter()
            .filter(|&&(u, v, _)| parts[u as usize - 1] == parts[v as usize - 1])
            .map(|&(_, _, w)| w)
            .sum()
    }

    /// The instance with rows renamed by a permutation: `perm[i-1]` is the
    /// original name of new node `i`.
    pub fn relabeled(&self, perm: &[u32]) -> PartitionInstance {
        let mut position = vec![0u32; self.p as usize];
        for (new_idx, &orig) in perm.iter().enumerate() {
            position[orig as usize - 1] = new_idx as u32 + 1;
        }
        let edges = self
            .edges
            .iter()
            .map(|&(u, v, w)| {
                let (a, b) = (position[u as usize - 1], position[v as usize - 1]);
                (a.min(b), a.max(b), w)
            })
            .collect();
        PartitionInstance { p: self.p, q: self.q, edges, label: self.label.clone() }
    }
}

/// Nodes in non-increasing order of star weight, ties by original index.
pub fn star_weight_order(instance: &PartitionInstance) -> Vec<u32> {
    let star = instance.star_weights();
    let mut order: Vec<u32> = (1..=instance.p).collect();
    order.sort_by(|&a, &b| {
        star[b as usize - 1].cmp(&star[a as usize - 1]).then(a.cmp(&b))
    });
    order
}

/// `m` distinct edges picked uniformly at random, integer weights uniform on
/// `1..=1000`; reproducible per seed.
pub fn generate_instance(p: u32, m: u32, q: u32, seed: u64) -> Result<PartitionInstance> {
    let total = u64::from(p) * u64::from(p - 1) / 2;
    if u64::from(m) > total {
        return Err(Error::Invalid(format!("m = {m} exceeds the {total} possible edges")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen = std::collections::HashSet::new();
    let mut edges = Vec::with_capacity(m as usize);
    while edges.len() < m as usize {
        let t = rng.random_range(0..total);
        if chosen.insert(t) {
            let (u, v) = decode_pair(t, p);
            edges.push((u, v, 0u64));
        }
    }
    for e in &mut edges {
        e.2 = rng.random_range(1..=1000);
    }
    PartitionInstance::new(p, q, edges, format!("p{p}-m{m}-q{q}-s{seed}"))
}

/// Pair index `t` in `0..p(p-1)/2` to `(u, v)` with `u < v`, row-major over
/// the strict upper triangle.
fn decode_pair(t: u64, p: u32) -> (u32, u32) {
    let mut u = 1u64;
    let mut rem = t;
    loop {
        let row = u64::from(p) - u;
        if rem < row {
            return (u as u32, (u + 1 + rem) as u32);
        }
        rem -= row;
        u += 1;
    }
}

/// Exact optimum by enumerating part assignments up to column symmetry
/// (restricted growth strings), with partial-cost pruning.
pub fn brute_force_optimum(instance: &PartitionInstance) -> Result<(u64, Vec<u32>)> {
    if instance.p > 14 {
        return Err(Error::GuardExceeded("partition enumeration needs p <= 14".into()));
    }
    let p = instance.p as usize;
    let mut adj = vec![Vec::new(); p + 1];
    for &(u, v, w) in &instance.edges {
        adj[u.max(v) as usize].push((u.min(v), w));
    }
    let mut best = (u64::MAX, Vec::new());
    let mut parts = Vec::with_capacity(p);
    fn rec(
        i: usize,
        p: usize,
        q: u32,
        cost: u64,
        max_used: u32,
        parts: &mut Vec<u32>,
        adj: &[Vec<(u32, u64)>],
        best: &mut (u64, Vec<u32>),
    ) {
        if cost >= best.0 {
            return;
        }
        if i > p {
            *best = (cost, parts.clone());
            return;
        }
        for j in 1..=(max_used + 1).min(q) {
            let added: u64 = adj[i]
                .iter()
                .filter(|&&(k, _)| parts[k as usize - 1] == j)
                .map(|&(_, w)| w)
                .sum();
            parts.push(j);
            rec(i + 1, p, q, cost + added, max_used.max(j), parts, adj, best);
            parts.pop();
        }
    }
    rec(1, p, instance.q, 0, 0, &mut parts, &adj, &mut best);
    Ok((best.0, best.1))
}

/// Text format: line 1 `p m q`, then `m` lines `i k w`.
pub fn format_instance(instance: &PartitionInstance) -> String {
    let mut out = format!("{} {} {}\n", instance.p, instance.num_edges(), instance.q);
    for &(u, v, w) in &instance.edges {
        out.push_str(&format!("{u} {v} {w}\n"));
    }
    out
}

pub fn parse_instance(text: &str) -> Result<PartitionInstance> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse("empty instance file".into()))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() != 3 {
        return Err(Error::Parse(format!("expected `p m q`, got `{header}`")));
    }
    let p: u32 = head[0].parse().map_err(|_| Error::Parse(format!("bad p `{}`", head[0])))?;
    let m: usize = head[1].parse().map_err(|_| Error::Parse(format!("bad m `{}`", head[1])))?;
    let q: u32 = head[2].parse().map_err(|_| Error::Parse(format!("bad q `{}`", head[2])))?;
    let mut edges = Vec::with_capacity(m);
    for line in lines {
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 3 {
            return Err(Error::Parse(format!("expected `i k w`, got `{line}`")));
        }
        let u: u32 = f[0].parse().map_err(|_| Error::Parse(format!("bad node `{}`", f[0])))?;
        let v: u32 = f[1].parse().map_err(|_| Error::Parse(format!("bad node `{}`", f[1])))?;
        let w: u64 = f[2].parse().map_err(|_| Error::Parse(format!("bad weight `{}`", f[2])))?;
        edges.push((u, v, w));
    }
    if edges.len() != m {
        return Err(Error::Parse(format!("expected {m} edges, found {}", edges.len())));
    }
    let label = format!("file-p{p}-m{m}-q{q}-h{:x}", content_hash(p, q, &edges));
    PartitionInstance::new(p, q, edges, label)
}

fn content_hash(p: u32, q: u32, edges: &[(u32, u32, u64)]) -> u64 {
    // FNV-1a over the canonical byte stream
    let mut h: u64 = 0xcbf29ce484222325;
    let mut eat = |x: u64| {
        for b in x.to_le_bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x100000001b3);
        }
    };
    eat(u64::from(p));
    eat(u64::from(q));
    for &(u, v, w) in edges {
        eat(u64::from(u));
        eat(u64::from(v));
        eat(w);
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_contract() {
        let inst = generate_instance(40, 360, 3, 7).unwrap();
        assert_eq!(inst.num_edges(), 360);
        assert!(inst.edges().iter().all(|&(u, v, w)| u < v && (1..=1000).contains(&w)));
        let again = generate_instance(40, 360, 3, 7).unwrap();
        assert_eq!(inst, again);
        let other = generate_instance(40, 360, 3, 8).unwrap();
        assert_ne!(inst, other);

        // m at the maximum forces the complete graph
        let k4 = generate_instance(4, 6, 2, 1).unwrap();
        assert_eq!(k4.num_edges(), 6);
        assert!(generate_instance(4, 7, 2, 1).is_err());
    }

    #[test]
    fn star_order_examples() {
        // star graph center first
        let star =
            PartitionInstance::new(4, 2, vec![(1, 4, 1), (2, 4, 1), (3, 4, 1)], "star".into())
                .unwrap();
        assert_eq!(star_weight_order(&star)[0], 4);

        // uniform cycle: all tie, identity order
        let cycle = PartitionInstance::new(
            4,
            2,
            vec![(1, 2, 5), (2, 3, 5), (3, 4, 5), (4, 1, 5)],
            "cycle".into(),
        )
        .unwrap();
        assert_eq!(star_weight_order(&cycle), vec![1, 2, 3, 4]);

        // weighted triangle: star weights 6, 7, 3
        let tri =
            PartitionInstance::new(3, 2, vec![(1, 2, 5), (1, 3, 1), (2, 3, 2)], "tri".into())
                .unwrap();
        assert_eq!(star_weight_order(&tri), vec![2, 1, 3]);
    }

    #[test]
    fn brute_force_small() {
        let k3 = PartitionInstance::new(3, 2, vec![(1, 2, 1), (1, 3, 1), (2, 3, 1)], "k3".into())
            .unwrap();
        assert_eq!(brute_force_optimum(&k3).unwrap().0, 1);
        let k3_q3 =
            PartitionInstance::new(3, 3, vec![(1, 2, 1), (1, 3, 1), (2, 3, 1)], "k3".into())
                .unwrap();
        assert_eq!(brute_force_optimum(&k3_q3).unwrap().0, 0);
        let c5 = PartitionInstance::new(
            5,
            2,
            vec![(1, 2, 1), (2, 3, 1), (3, 4, 1), (4, 5, 1), (5, 1, 1)],
            "c5".into(),
        )
        .unwrap();
        assert_eq!(brute_force_optimum(&c5).unwrap().0, 1);
    }

    #[test]
    fn roundtrip() {
        let inst = generate_instance(16, 48, 4, 3).unwrap();
        let text = format_instance(&inst);
        let back = parse_instance(&text).unwrap();
        assert_eq!(back.p(), inst.p());
        assert_eq!(back.q(), inst.q());
        assert_eq!(back.edges(), inst.edges());
        assert!(parse_instance("2 1 5\n1 2 3\n").is_err()); // q > p
        assert!(parse_instance("garbage").is_err());
    }

    #[test]
    fn relabel_preserves_costs() {
        let inst = generate_instance(8, 12, 3, 5).unwrap();
        let perm = star_weight_order(&inst);
        let relabeled = inst.relabeled(&perm);
        // costs agree under the permutation
        let parts_orig: Vec<u32> = (0..8).map(|i| i % 3 + 1).collect();
        // new node i is original perm[i-1]: push the assignment through
        let parts_new: Vec<u32> =
            perm.iter().map(|&orig| parts_orig[orig as usize - 1]).collect();
        assert_eq!(inst.assignment_cost(&parts_orig), relabeled.assignment_cost(&parts_new));
    }
}
