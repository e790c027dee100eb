//! Sparse parity-check matrices: seeded construction from an ensemble,
//! GF(2) syndrome computation, the layered-schedule row partition, and the
//! binary cache format.

use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::randsrc::SeedSpec;

use super::ensemble::MultiEdgeEnsemble;

/// Multi-edge-typed sparse binary parity-check matrix.
///
/// Stored as row-major CSR plus a column-to-edge cross index; edges carry
/// their type tag. Rows are additionally grouped into conflict-free layers
/// (no two rows in a layer share a column) for the layered decoder. The
/// structure is immutable after construction and shareable across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseParityMatrix {
    n: usize,
    m: usize,
    row_ptr: Vec<u32>,
    col_idx: Vec<u32>,
    edge_type: Vec<u8>,
    col_ptr: Vec<u32>,
    /// Edge ids (positions in `col_idx`) grouped by column.
    col_edge: Vec<u32>,
    /// Row of each entry in `col_edge`.
    col_row: Vec<u32>,
    layers: Vec<Vec<u32>>,
    max_row_degree: usize,
}

impl SparseParityMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn edge_count(&self) -> usize {
        self.col_idx.len()
    }

    /// Column indices of one row, sorted.
    pub fn row(&self, r: usize) -> &[u32] {
        &self.col_idx[self.row_ptr[r] as usize..self.row_ptr[r + 1] as usize]
    }

    /// Row indices of one column, sorted.
    pub fn col(&self, v: usize) -> &[u32] {
        &self.col_row[self.col_ptr[v] as usize..self.col_ptr[v + 1] as usize]
    }

    pub(crate) fn row_ptr(&self) -> &[u32] {
        &self.row_ptr
    }

    pub(crate) fn col_idx(&self) -> &[u32] {
        &self.col_idx
    }

    pub(crate) fn col_ptr(&self) -> &[u32] {
        &self.col_ptr
    }

    pub(crate) fn col_edge(&self) -> &[u32] {
        &self.col_edge
    }

    pub fn edge_types(&self) -> &[u8] {
        &self.edge_type
    }

    /// Conflict-free row groups; processing layers in order with immediate
    /// posterior reuse is equivalent to a serial per-row schedule.
    pub fn layers(&self) -> &[Vec<u32>] {
        &self.layers
    }

    pub fn max_row_degree(&self) -> usize {
        self.max_row_degree
    }

    pub fn row_degrees(&self) -> Vec<u32> {
        (0..self.m)
            .map(|r| self.row_ptr[r + 1] - self.row_ptr[r])
            .collect()
    }

    pub fn col_degrees(&self) -> Vec<u32> {
        (0..self.n)
            .map(|v| self.col_ptr[v + 1] - self.col_ptr[v])
            .collect()
    }

    /// Builds a matrix from explicit rows (test/toy codes). Rejects
    /// duplicate entries within a row.
    pub fn from_rows(n: usize, rows: Vec<Vec<u32>>) -> Result<Self> {
        let mut edges = Vec::new();
        for (r, row) in rows.iter().enumerate() {
            let mut sorted = row.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != row.len() {
                return Err(Error::InvalidInput(format!("duplicate entry in row {r}")));
            }
            if sorted.iter().any(|&c| c as usize >= n) {
                return Err(Error::InvalidInput(format!("column out of range in row {r}")));
            }
            for c in sorted {
                edges.push((r as u32, c, 0u8));
            }
        }
        Ok(Self::from_edges(n, rows.len(), edges))
    }

    fn from_edges(n: usize, m: usize, mut edges: Vec<(u32, u32, u8)>) -> Self {
        edges.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0u32; m + 1];
        for &(r, _, _) in &edges {
            row_ptr[r as usize + 1] += 1;
        }
        for i in 0..m {
            row_ptr[i + 1] += row_ptr[i];
        }
        let col_idx: Vec<u32> = edges.iter().map(|&(_, c, _)| c).collect();
        let edge_type: Vec<u8> = edges.iter().map(|&(_, _, t)| t).collect();

        let mut col_ptr = vec![0u32; n + 1];
        for &c in &col_idx {
            col_ptr[c as usize + 1] += 1;
        }
        for i in 0..n {
            col_ptr[i + 1] += col_ptr[i];
        }
        let mut cursor = col_ptr.clone();
        let mut col_edge = vec![0u32; col_idx.len()];
        let mut col_row = vec![0u32; col_idx.len()];
        for r in 0..m {
            for e in row_ptr[r] as usize..row_ptr[r + 1] as usize {
                let c = col_idx[e] as usize;
                let slot = cursor[c] as usize;
                col_edge[slot] = e as u32;
                col_row[slot] = r as u32;
                cursor[c] += 1;
            }
        }
        let max_row_degree = (0..m)
            .map(|r| (row_ptr[r + 1] - row_ptr[r]) as usize)
            .max()
            .unwrap_or(0);
        let mut mat = Self {
            n,
            m,
            row_ptr,
            col_idx,
            edge_type,
            col_ptr,
            col_edge,
            col_row,
            layers: Vec::new(),
            max_row_degree,
        };
        mat.layers = mat.compute_layers();
        mat
    }

    /// Greedy first-fit grouping of rows into layers such that no two rows
    /// in a layer share a variable node. Falls back to opening a new layer
    /// (ultimately single-row layers) whenever no existing layer fits.
    fn compute_layers(&self) -> Vec<Vec<u32>> {
        let mut var_layers: Vec<Vec<u32>> = vec![Vec::new(); self.n];
        let mut layers: Vec<Vec<u32>> = Vec::new();
        let mut forbidden = Vec::new();
        for r in 0..self.m {
            forbidden.clear();
            for &c in self.row(r) {
                forbidden.extend_from_slice(&var_layers[c as usize]);
            }
            forbidden.sort_unstable();
            forbidden.dedup();
            // Smallest label absent from the sorted distinct forbidden set.
            let mut layer = forbidden.len() as u32;
            for (cand, &f) in forbidden.iter().enumerate() {
                if cand as u32 != f {
                    layer = cand as u32;
                    break;
                }
            }
            while layer as usize >= layers.len() {
                layers.push(Vec::new());
            }
            layers[layer as usize].push(r as u32);
            for &c in self.row(r) {
                var_layers[c as usize].push(layer);
            }
        }
        layers
    }

    /// Syndrome `s = H b` over GF(2).
    pub fn syndrome(&self, bits: &[u8]) -> Result<Vec<u8>> {
        if bits.len() != self.n {
            return Err(Error::InvalidInput(format!(
                "bit vector length {} does not match code length {}",
                bits.len(),
                self.n
            )));
        }
        let mut s = vec![0u8; self.m];
        for r in 0..self.m {
            let mut acc = 0u8;
            for &c in self.row(r) {
                acc ^= bits[c as usize];
            }
            s[r] = acc;
        }
        Ok(s)
    }

    /// Writes the cache format: u32 LE header (n, m, edge count), then per
    /// row a u32 length followed by the u32 column indices. Edge-type tags
    /// are construction metadata and are not persisted; decoding only needs
    /// the adjacency.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = BufWriter::new(std::fs::File::create(path)?);
        w.write_all(&(self.n as u32).to_le_bytes())?;
        w.write_all(&(self.m as u32).to_le_bytes())?;
        w.write_all(&(self.edge_count() as u32).to_le_bytes())?;
        for r in 0..self.m {
            let row = self.row(r);
            w.write_all(&(row.len() as u32).to_le_bytes())?;
            for &c in row {
                w.write_all(&c.to_le_bytes())?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let mut r = BufReader::new(std::fs::File::open(path)?);
        let mut b4 = [0u8; 4];
        let mut read_u32 = |r: &mut BufReader<std::fs::File>| -> Result<u32> {
            r.read_exact(&mut b4)?;
            Ok(u32::from_le_bytes(b4))
        };
        let n = read_u32(&mut r)? as usize;
        let m = read_u32(&mut r)? as usize;
        let e = read_u32(&mut r)? as usize;
        let mut edges = Vec::with_capacity(e);
        for row in 0..m {
            let deg = read_u32(&mut r)? as usize;
            for _ in 0..deg {
                let c = read_u32(&mut r)?;
                if c as usize >= n {
                    return Err(Error::InvalidInput(format!(
                        "matrix cache: column {c} out of range in row {row}"
                    )));
                }
                edges.push((row as u32, c, 0u8));
            }
        }
        if edges.len() != e {
            return Err(Error::InvalidInput(format!(
                "matrix cache: header says {e} edges, file has {}",
                edges.len()
            )));
        }
        Ok(Self::from_edges(n, m, edges))
    }
}

/// Apportions `total` nodes to classes by largest remainder.
fn apportion(fractions: &[f64], total: usize) -> Vec<usize> {
    let weight: f64 = fractions.iter().sum();
    let exact: Vec<f64> = fractions
        .iter()
        .map(|f| f / weight * total as f64)
        .collect();
    let mut counts: Vec<usize> = exact.iter().map(|&x| x.floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..fractions.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = exact[a] - exact[a].floor();
        let rb = exact[b] - exact[b].floor();
        rb.partial_cmp(&ra).unwrap().then(a.cmp(&b))
    });
    for i in 0..total - assigned {
        counts[order[i % order.len()]] += 1;
    }
    counts
}

/// Realizes an ensemble at code length `n` by seeded random socket
/// permutation per edge type, with parallel-edge rejection and a bounded
/// 4-cycle-breaking pass on the low-degree subgraph.
pub fn construct_matrix(
    ensemble: &MultiEdgeEnsemble,
    n: usize,
    seed: SeedSpec,
) -> Result<SparseParityMatrix> {
    if n < 1000 {
        return Err(Error::InvalidParameter(format!(
            "code length must be at least 1000, got {n}"
        )));
    }
    let var_fracs: Vec<f64> = ensemble.variable_classes.iter().map(|c| c.fraction).collect();
    let var_counts = apportion(&var_fracs, n);
    let m_target = (ensemble.check_fraction() * n as f64).round() as usize;
    let chk_fracs: Vec<f64> = ensemble.check_classes.iter().map(|c| c.fraction).collect();
    let chk_counts = apportion(&chk_fracs, m_target);
    let m = m_target;

    // Node id ranges per class, in declaration order.
    let var_start: Vec<usize> = var_counts
        .iter()
        .scan(0usize, |acc, &c| {
            let s = *acc;
            *acc += c;
            Some(s)
        })
        .collect();
    let chk_start: Vec<usize> = chk_counts
        .iter()
        .scan(0usize, |acc, &c| {
            let s = *acc;
            *acc += c;
            Some(s)
        })
        .collect();

    // Adjacency under construction, per variable (across all edge types so
    // parallel edges are rejected globally).
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut edges: Vec<(u32, u32, u8)> = Vec::new();

    for et in 0..ensemble.edge_types {
        let mut var_sock: Vec<u32> = Vec::new();
        for (ci, class) in ensemble.variable_classes.iter().enumerate() {
            let d = class.degrees[et];
            for node in 0..var_counts[ci] {
                for _ in 0..d {
                    var_sock.push((var_start[ci] + node) as u32);
                }
            }
        }
        let mut chk_sock: Vec<u32> = Vec::new();
        for (ci, class) in ensemble.check_classes.iter().enumerate() {
            let d = class.degrees[et];
            for node in 0..chk_counts[ci] {
                for _ in 0..d {
                    chk_sock.push((chk_start[ci] + node) as u32);
                }
            }
        }
        if var_sock.is_empty() && chk_sock.is_empty() {
            continue;
        }
        // Integer rounding of node counts can leave a small socket mismatch;
        // repair on the check side, spreading over distinct nodes.
        match var_sock.len() as i64 - chk_sock.len() as i64 {
            0 => {}
            d if d > 0 => {
                // Extra sockets spread over distinct check nodes, from the end.
                let mut extra = Vec::new();
                let mut last = u32::MAX;
                for &c in chk_sock.iter().rev() {
                    if c != last {
                        extra.push(c);
                        last = c;
                        if extra.len() as i64 == d {
                            break;
                        }
                    }
                }
                if (extra.len() as i64) < d {
                    return Err(Error::Construction(format!(
                        "cannot balance sockets on edge type {}",
                        et + 1
                    )));
                }
                chk_sock.extend(extra);
            }
            d => {
                chk_sock.truncate(chk_sock.len() - (-d) as usize);
            }
        }

        pair_sockets(&var_sock, &mut chk_sock, &mut adj, &mut edges, et as u8, seed)?;
    }

    break_short_cycles(&mut adj, &mut edges, ensemble, seed);

    Ok(SparseParityMatrix::from_edges(n, m, edges))
}

/// Pairs variable sockets with a shuffled check socket list, retrying on
/// parallel edges: up to 100 forward swaps per conflict, then bounded
/// cross-swap repair against committed pairs, then a reseeded reshuffle of
/// the whole edge type.
fn pair_sockets(
    var_sock: &[u32],
    chk_sock: &mut Vec<u32>,
    adj: &mut [Vec<u32>],
    edges: &mut Vec<(u32, u32, u8)>,
    edge_type: u8,
    seed: SeedSpec,
) -> Result<()> {
    const FORWARD_TRIES: usize = 100;
    const REPAIR_TRIES: usize = 2000;
    const RESHUFFLES: u64 = 20;

    let len = var_sock.len();
    for reshuffle in 0..RESHUFFLES {
        let mut rng = ChaCha12Rng::seed_from_u64(seed.master_seed);
        rng.set_stream(seed.stream_id ^ (0x9e37_79b9_7f4a_7c15u64
            .wrapping_mul(edge_type as u64 + 1)
            .wrapping_add(reshuffle)));
        // Fisher-Yates.
        for i in (1..len).rev() {
            let j = rng.random_range(0..=i);
            chk_sock.swap(i, j);
        }
        let placed_before = edges.len();
        let mut ok = true;
        'outer: for i in 0..len {
            let v = var_sock[i] as usize;
            let mut placed = false;
            for attempt in 0..FORWARD_TRIES {
                let j = if attempt == 0 {
                    i
                } else {
                    rng.random_range(i..len)
                };
                let c = chk_sock[j];
                if !adj[v].contains(&c) {
                    chk_sock.swap(i, j);
                    adj[v].push(c);
                    edges.push((c, var_sock[i], edge_type));
                    placed = true;
                    break;
                }
            }
            if placed {
                continue;
            }
            // Cross-swap with a committed pair of this edge type.
            let committed = edges.len() - placed_before;
            for _ in 0..REPAIR_TRIES {
                if committed == 0 {
                    break;
                }
                let pick = placed_before + rng.random_range(0..committed);
                let (c2, v2, _) = edges[pick];
                let c1 = chk_sock[i];
                let v1 = var_sock[i] as usize;
                if v2 as usize == v1 || c1 == c2 {
                    continue;
                }
                // Swap partners: (v1,c2) and (v2,c1) must both be new.
                if !adj[v1].contains(&c2) && !adj[v2 as usize].contains(&c1) {
                    let pos = adj[v2 as usize].iter().position(|&c| c == c2).unwrap();
                    adj[v2 as usize].swap_remove(pos);
                    adj[v2 as usize].push(c1);
                    adj[v1].push(c2);
                    edges[pick] = (c1, v2, edge_type);
                    edges.push((c2, var_sock[i], edge_type));
                    placed = true;
                    break;
                }
            }
            if !placed {
                // Roll back this edge type and reshuffle.
                ok = false;
                let dropped: Vec<(u32, u32, u8)> = edges.drain(placed_before..).collect();
                for (c, v, _) in dropped {
                    if let Some(pos) = adj[v as usize].iter().position(|&x| x == c) {
                        adj[v as usize].swap_remove(pos);
                    }
                }
                break 'outer;
            }
        }
        if ok {
            return Ok(());
        }
    }
    Err(Error::Construction(format!(
        "socket pairing deadlocked on edge type {}",
        edge_type + 1
    )))
}

/// Bounded 4-cycle reduction, run separately per edge type on variables
/// whose degree within that type is small (<= 4). High-degree sockets in
/// multi-edge ensembles unavoidably share many checks and belief propagation
/// tolerates that; cycles through the low-degree sockets are the harmful
/// ones and those are cheap to enumerate.
fn break_short_cycles(
    adj: &mut [Vec<u32>],
    edges: &mut [(u32, u32, u8)],
    ensemble: &MultiEdgeEnsemble,
    seed: SeedSpec,
) {
    use std::collections::HashMap;
    const LOW_TYPE_DEGREE: usize = 4;
    const TRIES_PER_CONFLICT: usize = 200;

    let mut rng = ChaCha12Rng::seed_from_u64(seed.master_seed);
    rng.set_stream(seed.stream_id ^ 0x5bd1_e995);

    for et in 0..ensemble.edge_types as u8 {
        // Edges of this type grouped per var, in deterministic edge order.
        let mut type_edges_of: HashMap<u32, Vec<usize>> = HashMap::new();
        let mut vars_in_order: Vec<u32> = Vec::new();
        for (idx, &(_, v, t)) in edges.iter().enumerate() {
            if t == et {
                let slot = type_edges_of.entry(v).or_default();
                if slot.is_empty() {
                    vars_in_order.push(v);
                }
                slot.push(idx);
            }
        }
        // Map (c1, c2) -> one var using the pair; a second var closes a
        // 4-cycle inside this type.
        let mut pair_seen: HashMap<(u32, u32), u32> = HashMap::new();
        let mut conflicts: Vec<(u32, usize)> = Vec::new(); // (var, edge idx to move)
        let mut eligible: Vec<usize> = Vec::new();
        for &v in &vars_in_order {
            let list = &type_edges_of[&v];
            if list.len() > LOW_TYPE_DEGREE {
                continue;
            }
            eligible.extend_from_slice(list);
            for (i, &e1) in list.iter().enumerate() {
                for &e2 in &list[i + 1..] {
                    let key = ordered(edges[e1].0, edges[e2].0);
                    if pair_seen.insert(key, v).is_some() {
                        conflicts.push((v, e2));
                    }
                }
            }
        }
        if conflicts.is_empty() || eligible.len() < 2 {
            continue;
        }
        for (v, eidx) in conflicts {
            let (c, vv, _) = edges[eidx];
            if vv != v {
                // An earlier swap already moved this edge.
                continue;
            }
            for _ in 0..TRIES_PER_CONFLICT {
                let other = eligible[rng.random_range(0..eligible.len())];
                if other == eidx {
                    continue;
                }
                let (oc, ov, _) = edges[other];
                if ov == vv || oc == c {
                    continue;
                }
                // After the swap, (vv, oc) and (ov, c) must be new edges and
                // must not themselves close a known 4-cycle with vv's or
                // ov's remaining checks.
                if adj[vv as usize].contains(&oc) || adj[ov as usize].contains(&c) {
                    continue;
                }
                let closes_cycle = |var: u32, newc: u32, dropc: u32| {
                    adj[var as usize].iter().any(|&cx| {
                        cx != dropc
                            && cx != newc
                            && pair_seen
                                .get(&ordered(cx, newc))
                                .is_some_and(|&owner| owner != var)
                    })
                };
                if closes_cycle(vv, oc, c) || closes_cycle(ov, c, oc) {
                    continue;
                }
                swap_edge_partners(adj, edges, eidx, other);
                break;
            }
        }
    }
}

fn ordered(a: u32, b: u32) -> (u32, u32) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn swap_edge_partners(
    adj: &mut [Vec<u32>],
    edges: &mut [(u32, u32, u8)],
    e1: usize,
    e2: usize,
) {
    let (c1, v1, t1) = edges[e1];
    let (c2, v2, t2) = edges[e2];
    debug_assert_eq!(t1, t2);
    let pos1 = adj[v1 as usize].iter().position(|&c| c == c1).unwrap();
    adj[v1 as usize][pos1] = c2;
    let pos2 = adj[v2 as usize].iter().position(|&c| c == c2).unwrap();
    adj[v2 as usize][pos2] = c1;
    edges[e1] = (c2, v1, t1);
    edges[e2] = (c1, v2, t2);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metldpc::ensemble::load_ensemble;

    const REGULAR_3_6: &str = "rate 0.5\nedge_types 1\nvar 1.0 3\nchk 0.5 6\n";

    #[test]
    fn regular_construction_has_exact_degrees() {
        let e = load_ensemble(REGULAR_3_6).unwrap();
        let h = construct_matrix(&e, 1200, SeedSpec::new(1, 0)).unwrap();
        assert_eq!(h.n(), 1200);
        assert_eq!(h.m(), 600);
        assert!(h.col_degrees().iter().all(|&d| d == 3));
        assert!(h.row_degrees().iter().all(|&d| d == 6));
        assert_eq!(h.edge_count(), 3600);
    }

    #[test]
    fn construction_is_deterministic() {
        let e = load_ensemble(REGULAR_3_6).unwrap();
        let a = construct_matrix(&e, 2000, SeedSpec::new(9, 4)).unwrap();
        let b = construct_matrix(&e, 2000, SeedSpec::new(9, 4)).unwrap();
        assert_eq!(a, b);
        let c = construct_matrix(&e, 2000, SeedSpec::new(9, 5)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn no_parallel_edges() {
        let e = load_ensemble(REGULAR_3_6).unwrap();
        let h = construct_matrix(&e, 3000, SeedSpec::new(3, 0)).unwrap();
        for r in 0..h.m() {
            let row = h.row(r);
            for w in row.windows(2) {
                assert!(w[0] < w[1], "duplicate or unsorted entry in row {r}");
            }
        }
    }

    #[test]
    fn adjacency_is_mutually_consistent() {
        let e = load_ensemble(REGULAR_3_6).unwrap();
        let h = construct_matrix(&e, 1200, SeedSpec::new(5, 0)).unwrap();
        for v in 0..h.n() {
            for &r in h.col(v) {
                assert!(h.row(r as usize).contains(&(v as u32)));
            }
        }
    }

    #[test]
    fn layers_are_conflict_free() {
        let e = load_ensemble(REGULAR_3_6).unwrap();
        let h = construct_matrix(&e, 1200, SeedSpec::new(7, 0)).unwrap();
        let mut covered = 0usize;
        for layer in h.layers() {
            let mut seen = vec![false; h.n()];
            for &r in layer {
                for &c in h.row(r as usize) {
                    assert!(!seen[c as usize], "layer shares variable {c}");
                    seen[c as usize] = true;
                }
            }
            covered += layer.len();
        }
        assert_eq!(covered, h.m());
    }

    #[test]
    fn syndrome_zero_word() {
        let e = load_ensemble(REGULAR_3_6).unwrap();
        let h = construct_matrix(&e, 1200, SeedSpec::new(2, 0)).unwrap();
        let s = h.syndrome(&vec![0u8; 1200]).unwrap();
        assert!(s.iter().all(|&b| b == 0));
    }

    #[test]
    fn syndrome_flip_linearity() {
        let e = load_ensemble(REGULAR_3_6).unwrap();
        let h = construct_matrix(&e, 1200, SeedSpec::new(2, 1)).unwrap();
        let bits = vec![0u8; 1200];
        let base = h.syndrome(&bits).unwrap();
        for &j in &[0usize, 17, 599, 1199] {
            let mut flipped = bits.clone();
            flipped[j] ^= 1;
            let s = h.syndrome(&flipped).unwrap();
            for r in 0..h.m() {
                let expect = base[r] ^ u8::from(h.col(j).contains(&(r as u32)));
                assert_eq!(s[r], expect, "row {r} after flipping {j}");
            }
        }
    }

    #[test]
    fn syndrome_length_mismatch() {
        let e = load_ensemble(REGULAR_3_6).unwrap();
        let h = construct_matrix(&e, 1200, SeedSpec::new(2, 2)).unwrap();
        assert!(h.syndrome(&vec![0u8; 7]).is_err());
    }

    #[test]
    fn cache_roundtrip() {
        let e = load_ensemble(REGULAR_3_6).unwrap();
        let h = construct_matrix(&e, 1200, SeedSpec::new(4, 0)).unwrap();
        let dir = std::env::temp_dir().join("ngrec_matrix_cache_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("h.bin");
        h.save(&path).unwrap();
        let back = SparseParityMatrix::load(&path).unwrap();
        assert_eq!(h.n(), back.n());
        assert_eq!(h.m(), back.m());
        for r in 0..h.m() {
            assert_eq!(h.row(r), back.row(r));
        }
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn from_rows_rejects_duplicates() {
        assert!(SparseParityMatrix::from_rows(4, vec![vec![0, 0, 1]]).is_err());
        assert!(SparseParityMatrix::from_rows(4, vec![vec![0, 9]]).is_err());
    }

    #[test]
    fn apportion_hits_total() {
        let counts = apportion(&[0.0775, 0.0475, 0.875], 100_000);
        assert_eq!(counts.iter().sum::<usize>(), 100_000);
        assert_eq!(counts, vec![7750, 4750, 87500]);
    }

    #[test]
    fn short_code_length_rejected() {
        let e = load_ensemble(REGULAR_3_6).unwrap();
        assert!(construct_matrix(&e, 100, SeedSpec::new(0, 0)).is_err());
    }
}
