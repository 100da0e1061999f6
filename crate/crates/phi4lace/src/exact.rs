//! Exact computation on small finite spin graphs: Gibbs sums, the
//! random-current representation, the double-connection coefficient π⁽⁰⁾,
//! the lace-identity residual, and the correlation-inequality suite.
//!
//! Currents are enumerated in the collapsed per-bond form: each bond is in
//! one of three states — zero, positive even, odd — with weights
//! {1, cosh J − 1, sinh J}. Summing the three reproduces Σ_n J^n/n! = e^J
//! bond-wise, so the collapse is exact, and the double-connection indicator
//! only needs occupation and parity, never the raw multiplicities.

use crate::gs::GsParams;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExactError {
    #[error("graph has {0} vertices; spin enumeration caps at 20")]
    TooManyVertices(usize),
    #[error("graph has {0} bonds; current enumeration caps at 18")]
    TooManyBonds(usize),
    #[error("bond ({0},{1}) is a self-loop")]
    SelfLoop(usize, usize),
    #[error("bond ({0},{1}) appears twice")]
    DuplicateBond(usize, usize),
    #[error("bond ({0},{1}) has negative coupling {2}")]
    NegativeCoupling(usize, usize, f64),
    #[error("bond ({0},{1}) references a vertex out of range")]
    VertexOutOfRange(usize, usize),
    #[error("cut radius {0} leaves no vertices on one side")]
    BadCutRadius(f64),
    #[error("graph file: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Bond {
    pub a: usize,
    pub b: usize,
    pub j: f64,
}

/// A finite simple graph with ferromagnetic couplings, each vertex tagged
/// with a spatial site coordinate and a replica index (plain graphs get the
/// vertex index as a 1-d site and replica 0).
#[derive(Debug, Clone)]
pub struct SpinGraph {
    nv: usize,
    bonds: Vec<Bond>,
    site_coords: Vec<Vec<i32>>,
    replica: Vec<u32>,
}

impl SpinGraph {
    pub fn new(nv: usize, bonds: Vec<(usize, usize, f64)>) -> Result<Self, ExactError> {
        let site_coords = (0..nv).map(|i| vec![i as i32]).collect();
        let replica = vec![0; nv];
        Self::with_tags(nv, bonds, site_coords, replica)
    }

    pub fn with_tags(
        nv: usize,
        bonds: Vec<(usize, usize, f64)>,
        site_coords: Vec<Vec<i32>>,
        replica: Vec<u32>,
    ) -> Result<Self, ExactError> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::with_capacity(bonds.len());
        for (a, b, j) in bonds {
            if a == b {
                return Err(ExactError::SelfLoop(a, b));
            }
            if a >= nv || b >= nv {
                return Err(ExactError::VertexOutOfRange(a, b));
            }
            if j < 0.0 {
                return Err(ExactError::NegativeCoupling(a, b, j));
            }
            let key = (a.min(b), a.max(b));
            if !seen.insert(key) {
                return Err(ExactError::DuplicateBond(a, b));
            }
            out.push(Bond { a, b, j });
        }
        assert_eq!(site_coords.len(), nv);
        assert_eq!(replica.len(), nv);
        Ok(SpinGraph {
            nv,
            bonds: out,
            site_coords,
            replica,
        })
    }

    /// Path graph on n vertices with uniform coupling, sites on a line.
    pub fn path(n: usize, j: f64) -> Self {
        let bonds = (0..n - 1).map(|i| (i, i + 1, j)).collect();
        Self::new(n, bonds).unwrap()
    }

    /// Complete graph on n vertices with uniform coupling.
    pub fn complete(n: usize, j: f64) -> Self {
        let mut bonds = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                bonds.push((a, b, j));
            }
        }
        Self::new(n, bonds).unwrap()
    }

    /// One Griffiths-Simon block: N replicas of a single site, intra-block
    /// coupling I.
    pub fn gs_block_single(params: &GsParams) -> Self {
        let n = params.block_size() as usize;
        let i_val = params.intra_coupling();
        let mut bonds = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                bonds.push((a, b, i_val));
            }
        }
        let sites = vec![vec![0]; n];
        let replica = (0..n as u32).collect();
        Self::with_tags(n, bonds, sites, replica).unwrap()
    }

    /// Two spatial sites of N replicas each: intra-block bonds I at each
    /// site and the scaled spatial bond J = j_spatial·ε_N² between every
    /// replica pair across the sites.
    pub fn gs_block_pair(params: &GsParams, j_spatial: f64) -> Self {
        let n = params.block_size() as usize;
        let i_val = params.intra_coupling();
        let j_val = j_spatial * params.epsilon2();
        let mut bonds = Vec::new();
        for s in 0..2 {
            let base = s * n;
            for a in 0..n {
                for b in a + 1..n {
                    bonds.push((base + a, base + b, i_val));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                bonds.push((a, n + b, j_val));
            }
        }
        let mut sites = vec![vec![0]; n];
        sites.extend(vec![vec![1]; n]);
        let mut replica: Vec<u32> = (0..n as u32).collect();
        replica.extend(0..n as u32);
        Self::with_tags(2 * n, bonds, sites, replica).unwrap()
    }

    /// Edge-list format: first non-comment line is the vertex count, then
    /// one line `a b J` per bond.
    pub fn parse_edge_list(text: &str) -> Result<Self, ExactError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let nv: usize = lines
            .next()
            .ok_or_else(|| ExactError::Parse("empty file".into()))?
            .parse()
            .map_err(|e| ExactError::Parse(format!("vertex count: {e}")))?;
        let mut bonds = Vec::new();
        for line in lines {
            let mut it = line.split_whitespace();
            let a: usize = it
                .next()
                .ok_or_else(|| ExactError::Parse(format!("short line: {line}")))?
                .parse()
                .map_err(|e| ExactError::Parse(format!("{line}: {e}")))?;
            let b: usize = it
                .next()
                .ok_or_else(|| ExactError::Parse(format!("short line: {line}")))?
                .parse()
                .map_err(|e| ExactError::Parse(format!("{line}: {e}")))?;
            let j: f64 = it
                .next()
                .ok_or_else(|| ExactError::Parse(format!("short line: {line}")))?
                .parse()
                .map_err(|e| ExactError::Parse(format!("{line}: {e}")))?;
            bonds.push((a, b, j));
        }
        Self::new(nv, bonds)
    }

    pub fn vertex_count(&self) -> usize {
        self.nv
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn site_coords(&self) -> &[Vec<i32>] {
        &self.site_coords
    }

    pub fn replica(&self) -> &[u32] {
        &self.replica
    }

    /// Spatial site class index of every vertex (dense, in first-seen order).
    pub fn site_ids(&self) -> Vec<usize> {
        let mut seen: Vec<&Vec<i32>> = Vec::new();
        self.site_coords
            .iter()
            .map(|c| {
                if let Some(pos) = seen.iter().position(|s| *s == c) {
                    pos
                } else {
                    seen.push(c);
                    seen.len() - 1
                }
            })
            .collect()
    }

    /// tanh J̃ between a pair of vertices (0 where no bond).
    pub fn tanh_matrix(&self) -> Vec<f64> {
        let mut t = vec![0.0; self.nv * self.nv];
        for b in &self.bonds {
            let v = b.j.tanh();
            t[b.a * self.nv + b.b] = v;
            t[b.b * self.nv + b.a] = v;
        }
        t
    }

    pub fn with_bond_increased(&self, bond_index: usize, delta: f64) -> Self {
        let mut g = self.clone();
        g.bonds[bond_index].j += delta;
        g
    }

    pub fn with_uniform_coupling(&self, j: f64) -> Self {
        let mut g = self.clone();
        for b in &mut g.bonds {
            b.j = j;
        }
        g
    }
}

// ---------------------------------------------------------------------------
// Gibbs spin sums
// ---------------------------------------------------------------------------

/// Exact two-point matrix ⟨σ_a σ_b⟩ by summing over all 2^|V| spin
/// configurations.
pub fn spin_two_point(graph: &SpinGraph) -> Result<Vec<f64>, ExactError> {
    let nv = graph.vertex_count();
    if nv > 20 {
        return Err(ExactError::TooManyVertices(nv));
    }
    let bonds = graph.bonds();
    let mut z = 0.0f64;
    let mut s = vec![0.0f64; nv * nv];
    for config in 0u32..1 << nv {
        let mut energy = 0.0;
        for b in bonds {
            let aligned = (config >> b.a ^ config >> b.b) & 1 == 0;
            energy += if aligned { b.j } else { -b.j };
        }
        let w = energy.exp();
        z += w;
        for a in 0..nv {
            let sa = if config >> a & 1 == 0 { 1.0 } else { -1.0 };
            for b in a + 1..nv {
                let sb = if config >> b & 1 == 0 { 1.0 } else { -1.0 };
                s[a * nv + b] += w * sa * sb;
            }
        }
    }
    let mut out = vec![0.0; nv * nv];
    for a in 0..nv {
        out[a * nv + a] = 1.0;
        for b in a + 1..nv {
            let v = s[a * nv + b] / z;
            out[a * nv + b] = v;
            out[b * nv + a] = v;
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// collapsed random-current enumeration
// ---------------------------------------------------------------------------

#[derive(Clone, Copy)]
struct BondStates {
    parity_mask: u32,
    occupied_bit: u32,
    even_weight: f64, // cosh J − 1
    odd_weight: f64,  // sinh J
}

fn bond_states(bonds: &[Bond]) -> Vec<BondStates> {
    bonds
        .iter()
        .enumerate()
        .map(|(i, b)| BondStates {
            parity_mask: (1 << b.a) | (1 << b.b),
            occupied_bit: 1 << i,
            // cosh J − 1 = 2 sinh²(J/2), stable for small J
            even_weight: 2.0 * (b.j / 2.0).sinh().powi(2),
            odd_weight: b.j.sinh(),
        })
        .collect()
}

#[derive(Clone, Copy)]
struct LeafState {
    weight: f64,
    parity: u32,
    occupied: u32,
    next: usize,
}

fn dfs_currents(
    states: &[BondStates],
    from: LeafState,
    leaf: &mut impl FnMut(f64, u32, u32),
) {
    if from.next == states.len() {
        leaf(from.weight, from.parity, from.occupied);
        return;
    }
    let s = states[from.next];
    let step = |w, parity, occupied| LeafState {
        weight: w,
        parity,
        occupied,
        next: from.next + 1,
    };
    dfs_currents(states, step(from.weight, from.parity, from.occupied), leaf);
    if s.even_weight != 0.0 {
        dfs_currents(
            states,
            step(
                from.weight * s.even_weight,
                from.parity,
                from.occupied | s.occupied_bit,
            ),
            leaf,
        );
    }
    if s.odd_weight != 0.0 {
        dfs_currents(
            states,
            step(
                from.weight * s.odd_weight,
                from.parity ^ s.parity_mask,
                from.occupied | s.occupied_bit,
            ),
            leaf,
        );
    }
}

const PARALLEL_BOND_THRESHOLD: usize = 13;

/// Run `process` over every collapsed current configuration, partitioning
/// the two leading bonds' states across threads for large graphs. The
/// per-prefix accumulators are merged in a fixed order, so results are
/// bit-identical regardless of thread scheduling.
fn accumulate_currents<A: Send>(
    states: &[BondStates],
    make: impl Fn() -> A + Sync,
    process: impl Fn(&mut A, f64, u32, u32) + Sync,
    merge: impl Fn(&mut A, A),
) -> A {
    let root = LeafState {
        weight: 1.0,
        parity: 0,
        occupied: 0,
        next: 0,
    };
    if states.len() < PARALLEL_BOND_THRESHOLD {
        let mut acc = make();
        dfs_currents(states, root, &mut |w, p, o| process(&mut acc, w, p, o));
        return acc;
    }
    // prefixes: all states of the first two bonds
    let mut prefixes = Vec::new();
    dfs_prefix(states, root, 2, &mut prefixes);
    let n_threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let chunk = prefixes.len().div_ceil(n_threads);
    let mut slots: Vec<Option<A>> = (0..prefixes.len()).map(|_| None).collect();
    let make_ref = &make;
    let process_ref = &process;
    std::thread::scope(|scope| {
        for (slot_chunk, prefix_chunk) in slots.chunks_mut(chunk).zip(prefixes.chunks(chunk)) {
            scope.spawn(move || {
                for (slot, &prefix) in slot_chunk.iter_mut().zip(prefix_chunk) {
                    let mut acc = make_ref();
                    dfs_currents(states, prefix, &mut |w, p, o| process_ref(&mut acc, w, p, o));
                    *slot = Some(acc);
                }
            });
        }
    });
    let mut total = make();
    for slot in slots {
        merge(&mut total, slot.unwrap());
    }
    total
}

fn dfs_prefix(states: &[BondStates], from: LeafState, depth: usize, out: &mut Vec<LeafState>) {
    if depth == 0 || from.next == states.len() {
        out.push(from);
        return;
    }
    let s = states[from.next];
    let step = |w, parity, occupied| LeafState {
        weight: w,
        parity,
        occupied,
        next: from.next + 1,
    };
    dfs_prefix(
        states,
        step(from.weight, from.parity, from.occupied),
        depth - 1,
        out,
    );
    if s.even_weight != 0.0 {
        dfs_prefix(
            states,
            step(
                from.weight * s.even_weight,
                from.parity,
                from.occupied | s.occupied_bit,
            ),
            depth - 1,
            out,
        );
    }
    if s.odd_weight != 0.0 {
        dfs_prefix(
            states,
            step(
                from.weight * s.odd_weight,
                from.parity ^ s.parity_mask,
                from.occupied | s.occupied_bit,
            ),
            depth - 1,
            out,
        );
    }
}

fn check_bond_cap(graph: &SpinGraph) -> Result<(), ExactError> {
    if graph.bonds().len() > 18 {
        return Err(ExactError::TooManyBonds(graph.bonds().len()));
    }
    if graph.vertex_count() > 20 {
        return Err(ExactError::TooManyVertices(graph.vertex_count()));
    }
    Ok(())
}

/// Two-point matrix through the random-current representation:
/// ⟨σ_aσ_b⟩ = Σ_{∂n={a,b}} w(n) / Σ_{∂n=∅} w(n).
pub fn current_two_point(graph: &SpinGraph) -> Result<Vec<f64>, ExactError> {
    check_bond_cap(graph)?;
    let nv = graph.vertex_count();
    let states = bond_states(graph.bonds());

    struct Acc {
        z0: f64,
        pairs: Vec<f64>,
    }
    let acc = accumulate_currents(
        &states,
        || Acc {
            z0: 0.0,
            pairs: vec![0.0; nv * nv],
        },
        |acc, w, parity, _| {
            if parity == 0 {
                acc.z0 += w;
            } else if parity.count_ones() == 2 {
                let a = parity.trailing_zeros() as usize;
                let b = (31 - parity.leading_zeros()) as usize;
                acc.pairs[a * nv + b] += w;
            }
        },
        |total, part| {
            total.z0 += part.z0;
            for (t, p) in total.pairs.iter_mut().zip(part.pairs) {
                *t += p;
            }
        },
    );

    let mut out = vec![0.0; nv * nv];
    for a in 0..nv {
        out[a * nv + a] = 1.0;
        for b in a + 1..nv {
            let v = acc.pairs[a * nv + b] / acc.z0;
            out[a * nv + b] = v;
            out[b * nv + a] = v;
        }
    }
    Ok(out)
}

/// At least two bond-disjoint paths of occupied bonds from s to t.
/// Unit-capacity max-flow with both orientations available, stopping as
/// soon as two augmenting paths exist (Menger).
fn doubly_connected(nv: usize, bonds: &[Bond], occupied: u32, s: usize, t: usize) -> bool {
    if s == t {
        return true;
    }
    // residual capacities per occupied bond, one per orientation
    let mut cap = Vec::with_capacity(bonds.len());
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for (i, b) in bonds.iter().enumerate() {
        if occupied >> i & 1 == 1 {
            let e = cap.len();
            cap.push([1i8, 1i8]); // [a->b, b->a]
            adj[b.a].push(e);
            adj[b.b].push(e);
        }
    }
    let ends: Vec<(usize, usize)> = bonds
        .iter()
        .enumerate()
        .filter(|(i, _)| occupied >> i & 1 == 1)
        .map(|(_, b)| (b.a, b.b))
        .collect();

    let mut flow = 0;
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; nv]; // (edge, direction)
    for _ in 0..2 {
        parent.iter_mut().for_each(|p| *p = None);
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(s);
        let mut reached = false;
        'bfs: while let Some(u) = queue.pop_front() {
            for &e in &adj[u] {
                let (a, b) = ends[e];
                let (v, dir) = if a == u { (b, 0) } else { (a, 1) };
                if cap[e][dir] > 0 && parent[v].is_none() && v != s {
                    parent[v] = Some((e, dir));
                    if v == t {
                        reached = true;
                        break 'bfs;
                    }
                    queue.push_back(v);
                }
            }
        }
        if !reached {
            return false;
        }
        // push one unit along the path
        let mut v = t;
        while v != s {
            let (e, dir) = parent[v].unwrap();
            cap[e][dir] -= 1;
            cap[e][1 - dir] += 1;
            v = if dir == 0 { ends[e].0 } else { ends[e].1 };
        }
        flow += 1;
        if flow >= 2 {
            return true;
        }
    }
    false
}

/// π⁽⁰⁾(root, x) for every x: the weight fraction of source configurations
/// {root, x} in which root and x are joined by at least two bond-disjoint
/// occupied paths. π⁽⁰⁾(root, root) = 1 by the zero-length convention.
pub fn pi_zero(graph: &SpinGraph, root: usize) -> Result<Vec<f64>, ExactError> {
    check_bond_cap(graph)?;
    let nv = graph.vertex_count();
    let bonds = graph.bonds().to_vec();
    let states = bond_states(&bonds);

    struct Acc {
        z0: f64,
        num: Vec<f64>,
    }
    let acc = accumulate_currents(
        &states,
        || Acc {
            z0: 0.0,
            num: vec![0.0; nv],
        },
        |acc, w, parity, occupied| {
            if parity == 0 {
                acc.z0 += w;
            } else if parity.count_ones() == 2 && parity >> root & 1 == 1 {
                let other = (parity & !(1 << root)).trailing_zeros() as usize;
                if doubly_connected(nv, &bonds, occupied, root, other) {
                    acc.num[other] += w;
                }
            }
        },
        |total, part| {
            total.z0 += part.z0;
            for (t, p) in total.num.iter_mut().zip(part.num) {
                *t += p;
            }
        },
    );

    let mut out: Vec<f64> = acc.num.iter().map(|n| n / acc.z0).collect();
    out[root] = 1.0;
    Ok(out)
}

/// The lace identity at depth zero and its remainder bound:
/// r(x) = ⟨σ_rootσ_x⟩ − π⁽⁰⁾(root,x) − Σ_{u,v} π⁽⁰⁾(root,u)·tanh(J̃_{u,v})·⟨σ_vσ_x⟩,
/// checked against |r(x)| <= Σ_{u,v} π⁽⁰⁾(root,u)·tanh(J̃_{u,v})·⟨σ_vσ_x⟩.
#[derive(Debug, Clone, Serialize)]
pub struct LaceReport {
    pub root: usize,
    pub residual: Vec<f64>,
    pub bound: Vec<f64>,
    pub slack: Vec<f64>,
    pub min_slack: f64,
}

pub fn lace_residual_check(graph: &SpinGraph, root: usize) -> Result<LaceReport, ExactError> {
    let nv = graph.vertex_count();
    let two_pt = current_two_point(graph)?;
    let pi = pi_zero(graph, root)?;
    let tanh = graph.tanh_matrix();

    let mut residual = vec![0.0; nv];
    let mut bound = vec![0.0; nv];
    for x in 0..nv {
        let mut conv = 0.0;
        for u in 0..nv {
            if pi[u] == 0.0 {
                continue;
            }
            let mut inner = 0.0;
            for v in 0..nv {
                inner += tanh[u * nv + v] * two_pt[v * nv + x];
            }
            conv += pi[u] * inner;
        }
        residual[x] = two_pt[root * nv + x] - pi[x] - conv;
        bound[x] = conv;
    }
    let slack: Vec<f64> = residual
        .iter()
        .zip(&bound)
        .map(|(r, b)| b - r.abs())
        .collect();
    let min_slack = slack.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(LaceReport {
        root,
        residual,
        bound,
        slack,
        min_slack,
    })
}

// ---------------------------------------------------------------------------
// correlation-inequality suite
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub name: &'static str,
    pub location: String,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub records: Vec<CheckRecord>,
    pub min_slack: f64,
}

impl SuiteReport {
    pub fn all_pass(&self, tol: f64) -> bool {
        self.min_slack >= -tol
    }
}

/// Run the a-priori bound, the diagrammatic cube bound, π⁽⁰⁾ − δ >= 0,
/// bond monotonicity, and (when a cut radius is given) the Simon-Lieb
/// factorization, reporting the slack of every instance.
pub fn inequality_suite(graph: &SpinGraph, cut_radius: Option<f64>) -> Result<SuiteReport, ExactError> {
    let nv = graph.vertex_count();
    let two_pt = current_two_point(graph)?;
    let tanh = graph.tanh_matrix();
    let mut records = Vec::new();

    // a-priori: ⟨σ_oσ_x⟩ − δ <= Σ_v tanh(J̃_{o,v}) ⟨σ_vσ_x⟩
    for root in 0..nv {
        for x in 0..nv {
            let lhs = two_pt[root * nv + x] - if root == x { 1.0 } else { 0.0 };
            let rhs: f64 = (0..nv)
                .map(|v| tanh[root * nv + v] * two_pt[v * nv + x])
                .sum();
            records.push(CheckRecord {
                name: "a-priori",
                location: format!("o={root} x={x}"),
                lhs,
                rhs,
                slack: rhs - lhs,
            });
        }
    }

    // cube bound and nonnegativity of π⁰ − δ
    for root in 0..nv {
        let pi = pi_zero(graph, root)?;
        for x in 0..nv {
            if x != root {
                let cube = two_pt[root * nv + x].powi(3);
                records.push(CheckRecord {
                    name: "pi0-cube",
                    location: format!("o={root} x={x}"),
                    lhs: pi[x],
                    rhs: cube,
                    slack: cube - pi[x],
                });
            }
            let delta = if x == root { 1.0 } else { 0.0 };
            records.push(CheckRecord {
                name: "pi0-minus-delta",
                location: format!("o={root} x={x}"),
                lhs: delta,
                rhs: pi[x],
                slack: pi[x] - delta,
            });
        }
    }

    // Simon-Lieb through a spatial cut at radius ell, rooted at vertex 0
    if let Some(ell) = cut_radius {
        let root = 0usize;
        let origin = graph.site_coords()[root].clone();
        let dist = |v: usize| -> f64 {
            graph.site_coords()[v]
                .iter()
                .zip(&origin)
                .map(|(&c, &o)| ((c - o) as f64).powi(2))
                .sum::<f64>()
                .sqrt()
        };
        let inside: Vec<usize> = (0..nv).filter(|&v| dist(v) <= ell).collect();
        let outside: Vec<usize> = (0..nv).filter(|&v| dist(v) > ell).collect();
        if inside.is_empty() || outside.is_empty() {
            return Err(ExactError::BadCutRadius(ell));
        }
        for &x in &outside {
            let lhs = two_pt[root * nv + x];
            let mut rhs = 0.0;
            for b in graph.bonds() {
                let (u, v) = if dist(b.a) <= ell && dist(b.b) > ell {
                    (b.a, b.b)
                } else if dist(b.b) <= ell && dist(b.a) > ell {
                    (b.b, b.a)
                } else {
                    continue;
                };
                rhs += two_pt[root * nv + u] * b.j.tanh() * two_pt[v * nv + x];
            }
            records.push(CheckRecord {
                name: "simon-lieb",
                location: format!("x={x} ell={ell}"),
                lhs,
                rhs,
                slack: rhs - lhs,
            });
        }
    }

    // second Griffiths inequality: raising any J_b never lowers any ⟨σσ⟩
    for (i, b) in graph.bonds().iter().enumerate() {
        let bumped = graph.with_bond_increased(i, 0.05);
        let two_pt_up = current_two_point(&bumped)?;
        let mut worst = f64::INFINITY;
        for (new, old) in two_pt_up.iter().zip(&two_pt) {
            worst = worst.min(new - old);
        }
        records.push(CheckRecord {
            name: "griffiths-monotone",
            location: format!("bond ({},{})", b.a, b.b),
            lhs: 0.0,
            rhs: worst,
            slack: worst,
        });
    }

    let min_slack = records
        .iter()
        .map(|r| r.slack)
        .fold(f64::INFINITY, f64::min);
    Ok(SuiteReport { records, min_slack })
}

/// All labeled connected graphs on 2..=max_vertices vertices with uniform
/// coupling `j`.
pub fn connected_graph_suite(max_vertices: usize, j: f64) -> Vec<SpinGraph> {
    let mut out = Vec::new();
    for n in 2..=max_vertices {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .collect();
        for mask in 1u32..1 << pairs.len() {
            let bonds: Vec<(usize, usize, f64)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &(a, b))| (a, b, j))
                .collect();
            if is_connected(n, &bonds) {
                out.push(SpinGraph::new(n, bonds).unwrap());
            }
        }
    }
    out
}

fn is_connected(n: usize, bonds: &[(usize, usize, f64)]) -> bool {
    let mut adj = vec![Vec::new(); n];
    for &(a, b, _) in bonds {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                count += 1;
                stack.push(v);
            }
        }
    }
    count == n
}
