//! The vertex-cover reduction for at-least-one-entry-per-row matrices.
//!
//! Deciding whether some 0/1 matrix with at least one 1 per row and
//! lexicographically non-increasing columns avoids a prescribed zero set
//! `I0` is as hard as vertex cover. Both directions of the reduction are
//! executable here:
//!
//! * [`reduce_vc`] maps a graph and budget `k` to a zero-fixing instance:
//!   `kappa = ceil(log2(k+1))` probe rows on top, one row per edge below,
//!   where an edge row forbids every column except its two endpoints (nodes
//!   are renamed to the even columns `2, 4, ...`), padding the graph with a
//!   matching so the effective budget becomes `2^kappa - 1`;
//! * [`build_cover_vertex`] turns a vertex cover into a feasible matrix by
//!   placing one *alibi* per covered column in the probe rows, scheduled by
//!   a complete binary tree labeled in-order over the sorted cover;
//! * [`covering_feasible_bruteforce`] certifies tiny instances by
//!   column-wise lexicographic backtracking.
//!
//! Covering matrices use the full `p x q` grid (no reduced index set), and
//! `q` may exceed `p`.

use crate::{Error, Result};

/// A vertex cover question: does `graph` have a cover of size at most `k`?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VcInstance {
    num_nodes: u32,
    edges: Vec<(u32, u32)>,
    k: u32,
}

impl VcInstance {
    /// Nodes are `1..=num_nodes`; the edge list must be simple (no loops or
    /// duplicates). Rejects `k = 0` and edgeless graphs, for which the
    /// reduction below degenerates.
    pub fn new(num_nodes: u32, edges: Vec<(u32, u32)>, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::Invalid("a cover budget k >= 1 is required".into()));
        }
        if k > num_nodes {
            return Err(Error::Invalid(format!("k = {k} exceeds the node count {num_nodes}")));
        }
        if edges.is_empty() {
            return Err(Error::Invalid("the graph must have at least one edge".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for &(u, v) in &edges {
            if u == v {
                return Err(Error::Invalid(format!("loop at node {u}")));
            }
            if u < 1 || u > num_nodes || v < 1 || v > num_nodes {
                return Err(Error::Invalid(format!("edge ({u},{v}) out of range")));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(Error::Invalid(format!("duplicate edge ({u},{v})")));
            }
        }
        Ok(VcInstance { num_nodes, edges, k })
    }

    pub fn num_nodes(&self) -> u32 {
        self.num_nodes
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn k(&self) -> u32 {
        self.k
    }
}

/// Independent oracle: subset enumeration.
pub fn has_vertex_cover(num_nodes: u32, edges: &[(u32, u32)], k: u32) -> Result<bool> {
    if num_nodes > 20 {
        return Err(Error::GuardExceeded("vertex cover enumeration needs <= 20 nodes".into()));
    }
    for subset in 0u32..1 << num_nodes {
        if subset.count_ones() > k {
            continue;
        }
        if edges.iter().all(|&(u, v)| subset >> (u - 1) & 1 == 1 || subset >> (v - 1) & 1 == 1) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The zero-fixing instance produced by [`reduce_vc`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringFixInstance {
    pub p: u32,
    pub q: u32,
    pub kappa: u32,
    pub ktilde: u32,
    /// Padded edges as pairs of even column labels; edge `h` (1-based)
    /// occupies row `kappa + h`.
    pub edges: Vec<(u32, u32)>,
}

impl CoveringFixInstance {
    /// Number of padded edges.
    pub fn num_edges(&self) -> u32 {
        self.edges.len() as u32
    }

    /// Whether `(i, j)` (1-based, full grid) is fixed to zero.
    pub fn is_forbidden(&self, i: u32, j: u32) -> bool {
        if i <= self.kappa {
            return false;
        }
        let (v, w) = self.edges[(i - self.kappa) as usize - 1];
        j != v && j != w
    }

    /// All zero-fixed cells in row-major order.
    pub fn zero_cells(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (1..=self.p)
            .flat_map(move |i| (1..=self.q).map(move |j| (i, j)))
            .filter(move |&(i, j)| self.is_forbidden(i, j))
    }
}

/// Builds the fixing-feasibility instance whose answer is "yes" iff the
/// graph has a vertex cover of size at most `k`.
pub fn reduce_vc(instance: &VcInstance) -> CoveringFixInstance {
    let k = instance.k;
    let kappa = u32::BITS - k.leading_zeros(); // ceil(log2(k+1)) for k >= 1
    let ktilde = (1u32 << kappa) - 1;
    let pad = ktilde - k;
    let base_nodes = instance.num_nodes;
    // original node v sits at column 2v; padded matching nodes follow
    let mut edges: Vec<(u32, u32)> =
        instance.edges.iter().map(|&(u, v)| (2 * u.min(v), 2 * u.max(v))).collect();
    for t in 0..pad {
        let a = base_nodes + 2 * t + 1;
        let b = base_nodes + 2 * t + 2;
        edges.push((2 * a, 2 * b));
    }
    let num_padded_nodes = base_nodes + 2 * pad;
    let m = edges.len() as u32;
    CoveringFixInstance { p: kappa + m, q: 2 * num_padded_nodes, kappa, ktilde, edges }
}

/// A dense 0/1 matrix over the full `p x q` grid.
pub type CoveringMatrix = Vec<Vec<u8>>;

/// At least one 1 per row, columns in non-increasing lexicographic order.
pub fn is_covering_vertex(matrix: &CoveringMatrix, p: u32, q: u32) -> bool {
    if matrix.len() != p as usize || matrix.iter().any(|r| r.len() != q as usize) {
        return false;
    }
    if matrix.iter().any(|r| r.iter().all(|&x| x == 0)) {
        return false;
    }
    for j in 0..q as usize - 1 {
        // columns compare lexicographically from row 1 downward
        for row in matrix.iter() {
            match row[j].cmp(&row[j + 1]) {
                std::cmp::Ordering::Greater => break,
                std::cmp::Ordering::Less => return false,
                std::cmp::Ordering::Equal => {}
            }
        }
    }
    true
}

/// Alibis of row `i` (1-based): positions `(i, j)` with a 1 at `j - 1` and a
/// 0 at `j`.
pub fn alibi_count(matrix: &CoveringMatrix, i: u32) -> usize {
    let row = &matrix[i as usize - 1];
    (1..row.len()).filter(|&j| row[j - 1] == 1 && row[j] == 0).count()
}

/// Depth of the in-order label `t` in a complete binary tree with `2^kappa - 1`
/// nodes: `kappa - 1 - trailing_zeros(t)`.
fn label_depth(t: u32, kappa: u32) -> u32 {
    kappa - 1 - t.trailing_zeros()
}

/// Constructs a feasible matrix from a vertex cover of the padded graph.
///
/// `cover` lists even column labels. The alibis come from the sequence
/// `a_1 <= ... <= a_ktilde` (the sorted cover padded with repeats of its
/// maximum, or a caller-supplied sorted sequence containing the cover),
/// arranged by the in-order-labeled complete binary tree: row `i` flips
/// between 1-blocks and 0-blocks at the values `a_t` for labels `t` of depth
/// less than `i`.
pub fn build_cover_vertex(
    instance: &CoveringFixInstance,
    cover: &[u32],
    a_sequence: Option<&[u32]>,
) -> Result<CoveringMatrix> {
    let ktilde = instance.ktilde;
    let cover_set: std::collections::BTreeSet<u32> = cover.iter().copied().collect();
    if cover_set.len() as u32 > ktilde {
        return Err(Error::Invalid(format!(
            "cover has {} nodes, budget is {ktilde}",
            cover_set.len()
        )));
    }
    for &v in &cover_set {
        if v % 2 != 0 || v < 2 || v > instance.q {
            return Err(Error::Invalid(format!("{v} is not a node column")));
        }
    }
    for &(v, w) in &instance.edges {
        if !cover_set.contains(&v) && !cover_set.contains(&w) {
            return Err(Error::Invalid(format!("edge ({v},{w}) is not covered")));
        }
    }
    let a_seq: Vec<u32> = match a_sequence {
        Some(seq) => {
            if seq.len() as u32 != ktilde
                || seq.windows(2).any(|w| w[0] > w[1])
                || !cover_set.iter().all(|v| seq.contains(v))
            {
                return Err(Error::Invalid(
                    "the alibi sequence must be sorted, of length ktilde, and contain the cover"
                        .into(),
                ));
            }
            seq.to_vec()
        }
        None => {
            let mut seq: Vec<u32> = cover_set.iter().copied().collect();
            let max = *seq.last().expect("cover is nonempty: the graph has edges");
            seq.resize(ktilde as usize, max);
            seq
        }
    };

    let mut matrix = vec![vec![0u8; instance.q as usize]; instance.p as usize];
    // probe rows: parity fill driven by the tree labels of depth < i
    for i in 1..=instance.kappa {
        for j in 1..=instance.q {
            let flips = (1..=ktilde)
                .filter(|&t| label_depth(t, instance.kappa) < i && a_seq[t as usize - 1] <= j)
                .count();
            matrix[i as usize - 1][j as usize - 1] = if flips % 2 == 0 { 1 } else { 0 };
        }
    }
    // edge rows: ones exactly at covered endpoints
    for (h, &(v, w)) in instance.edges.iter().enumerate() {
        let row = instance.kappa as usize + h;
        if cover_set.contains(&v) {
            matrix[row][v as usize - 1] = 1;
        }
        if cover_set.contains(&w) {
            matrix[row][w as usize - 1] = 1;
        }
    }

    if !is_covering_vertex(&matrix, instance.p, instance.q) {
        return Err(Error::Invalid("constructed matrix is not a covering vertex".into()));
    }
    for (i, j) in instance.zero_cells() {
        if matrix[i as usize - 1][j as usize - 1] != 0 {
            return Err(Error::Invalid(format!("constructed matrix hits the zero cell ({i},{j})")));
        }
    }
    Ok(matrix)
}

/// Guard for the brute-force feasibility check.
#[derive(Debug, Clone, Copy)]
pub struct CoveringGuard {
    pub max_p: u32,
    pub max_q: u32,
}

impl Default for CoveringGuard {
    fn default() -> Self {
        CoveringGuard { max_p: 6, max_q: 8 }
    }
}

/// Whether some covering vertex avoids all zero-fixed cells, by column-wise
/// lexicographic backtracking with memoized failure states.
pub fn covering_feasible_bruteforce(instance: &CoveringFixInstance) -> Result<bool> {
    covering_feasible_bruteforce_guarded(instance, CoveringGuard::default())
}

pub fn covering_feasible_bruteforce_guarded(
    instance: &CoveringFixInstance,
    guard: CoveringGuard,
) -> Result<bool> {
    if instance.p > guard.max_p || instance.q > guard.max_q {
        return Err(Error::GuardExceeded(format!(
            "covering feasibility needs p <= {} and q <= {}, instance is {}x{}",
            guard.max_p, guard.max_q, instance.p, instance.q
        )));
    }
    if instance.p > 20 {
        return Err(Error::GuardExceeded("covering feasibility supports p <= 20".into()));
    }
    let p = instance.p;
    let full: u32 = (1 << p) - 1;
    // row i occupies bit (p - i): integer order on columns = lex order
    let row_bit = |i: u32| 1u32 << (p - i);
    let allowed: Vec<u32> = (1..=instance.q)
        .map(|j| (1..=p).filter(|&i| !instance.is_forbidden(i, j)).map(row_bit).sum())
        .collect();
    // union of allowed rows over the column suffix starting at j (1-based)
    let mut suffix_allowed = vec![0u32; instance.q as usize + 2];
    for j in (1..=instance.q as usize).rev() {
        suffix_allowed[j] = suffix_allowed[j + 1] | allowed[j - 1];
    }
    let mut failed: std::collections::HashSet<u64> = std::collections::HashSet::new();

    fn search(
        j: u32,
        prev: u32,
        covered: u32,
        full: u32,
        q: u32,
        allowed: &[u32],
        suffix_allowed: &[u32],
        failed: &mut std::collections::HashSet<u64>,
    ) -> bool {
        if covered == full {
            return true; // remaining columns can stay all-zero
        }
        if j > q {
            return false;
        }
        let missing = full & !covered;
        // columns only ever get lexicographically smaller
        let reachable = if prev == 0 { 0 } else { (1u32 << (32 - prev.leading_zeros())) - 1 };
        if missing & !reachable != 0 || missing & !suffix_allowed[j as usize] != 0 {
            return false;
        }
        let key = u64::from(j) << 40 | u64::from(prev) << 20 | u64::from(covered);
        if failed.contains(&key) {
            return false;
        }
        let mask = allowed[j as usize - 1] & reachable;
        let mut v = mask;
        loop {
            if v <= prev
                && search(j + 1, v, covered | v, full, q, allowed, suffix_allowed, failed)
            {
                return true;
            }
            if v == 0 {
                break;
            }
            v = (v - 1) & mask;
        }
        failed.insert(key);
        false
    }

    Ok(search(1, full, 0, full, instance.q, &allowed, &suffix_allowed, &mut failed))
}

/// Enumerates every covering vertex of an unconstrained `p x q` grid.
pub fn enumerate_covering_vertices(p: u32, q: u32) -> Result<Vec<CoveringMatrix>> {
    if p > 5 || q > 6 {
        return Err(Error::GuardExceeded("covering enumeration needs p <= 5, q <= 6".into()));
    }
    let full: u32 = (1 << p) - 1;
    let mut out = Vec::new();
    let mut cols: Vec<u32> = Vec::new();
    fn rec(cols: &mut Vec<u32>, q: u32, p: u32, full: u32, out: &mut Vec<CoveringMatrix>) {
        if cols.len() == q as usize {
            let covered = cols.iter().fold(0, |acc, &c| acc | c);
            if covered == full {
                let matrix: CoveringMatrix = (1..=p)
                    .map(|i| {
                        cols.iter().map(|&c| (c >> (p - i) & 1) as u8).collect::<Vec<u8>>()
                    })
                    .collect();
                out.push(matrix);
            }
            return;
        }
        let cap = cols.last().copied().unwrap_or(full);
        for v in (0..=cap).rev() {
            cols.push(v);
            rec(cols, q, p, full, out);
            cols.pop();
        }
    }
    rec(&mut cols, q, p, full, &mut out);
    Ok(out)
}
