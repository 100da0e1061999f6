//! Lattices, coupling functions and their moment functionals.
//!
//! A coupling 𝒥 on Z^d is nonnegative, vanishes at the origin and is
//! invariant under the full symmetry group of Z^d (coordinate permutations
//! and sign flips). Everything downstream consumes [`Coupling`] or the
//! tanh-weighted step distribution derived from it, together with a
//! [`TorusGeometry`] standing in for the infinite lattice.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("dimension must be >= 1")]
    BadDimension,
    #[error("coupling amplitude must be nonnegative, got {0}")]
    NegativeAmplitude(f64),
    #[error("self-coupling J(o) must vanish, got {0}")]
    NonzeroSelfCoupling(f64),
    #[error("coupling table is not Z^d-symmetric at {0:?}")]
    AsymmetricTable(Vec<i32>),
    #[error("coupling entry at {0:?} has wrong arity (expected d={1})")]
    BadArity(Vec<i32>, usize),
    #[error("sum of tanh-couplings vanishes; step distribution undefined")]
    ZeroCoupling,
    #[error("torus side must be even and >= 2, got {0}")]
    BadTorusSide(usize),
    #[error("torus volume {0} exceeds supported size")]
    TorusTooLarge(u128),
}

/// How the coupling support is generated.
#[derive(Debug, Clone, PartialEq)]
pub enum CouplingKind {
    NearestNeighbor,
    SpreadOutBox { radius: u32 },
    Explicit,
}

/// A symmetric, summable coupling 𝒥 on Z^d with its derived moments
/// 𝒥̂ = Σ_v 𝒥(v) and V = Σ_x |x|² 𝒥(x)/𝒥̂.
#[derive(Debug, Clone)]
pub struct Coupling {
    d: usize,
    kind: CouplingKind,
    support: Vec<(Vec<i32>, f64)>,
    jhat: f64,
    variance: f64,
}

fn norm2(v: &[i32]) -> f64 {
    v.iter().map(|&c| (c as f64) * (c as f64)).sum()
}

impl Coupling {
    /// Nearest-neighbor coupling: amplitude on each of the 2d unit vectors.
    pub fn nearest_neighbor(d: usize, amplitude: f64) -> Result<Self, LatticeError> {
        if d == 0 {
            return Err(LatticeError::BadDimension);
        }
        if amplitude < 0.0 {
            return Err(LatticeError::NegativeAmplitude(amplitude));
        }
        let mut support = Vec::with_capacity(2 * d);
        for axis in 0..d {
            for sign in [1i32, -1] {
                let mut v = vec![0i32; d];
                v[axis] = sign;
                support.push((v, amplitude));
            }
        }
        Ok(Self::from_support(d, CouplingKind::NearestNeighbor, support))
    }

    /// Uniform coupling on the box {v : 0 < |v|_inf <= radius}.
    pub fn spread_out_box(d: usize, radius: u32, amplitude: f64) -> Result<Self, LatticeError> {
        if d == 0 {
            return Err(LatticeError::BadDimension);
        }
        if amplitude < 0.0 {
            return Err(LatticeError::NegativeAmplitude(amplitude));
        }
        let r = radius as i32;
        let mut support = Vec::new();
        let mut v = vec![-r; d];
        loop {
            if v.iter().any(|&c| c != 0) {
                support.push((v.clone(), amplitude));
            }
            // odometer over the box
            let mut axis = 0;
            loop {
                if axis == d {
                    let kind = CouplingKind::SpreadOutBox { radius };
                    return Ok(Self::from_support(d, kind, support));
                }
                v[axis] += 1;
                if v[axis] <= r {
                    break;
                }
                v[axis] = -r;
                axis += 1;
            }
        }
    }

    /// Explicit table of (displacement, value) pairs. The table is validated
    /// against the Z^d symmetry group, never symmetrized: a missing or
    /// mismatched orbit image is an error.
    pub fn explicit(d: usize, table: Vec<(Vec<i32>, f64)>) -> Result<Self, LatticeError> {
        if d == 0 {
            return Err(LatticeError::BadDimension);
        }
        let mut support = Vec::new();
        for (v, j) in table {
            if v.len() != d {
                return Err(LatticeError::BadArity(v, d));
            }
            if v.iter().all(|&c| c == 0) {
                if j != 0.0 {
                    return Err(LatticeError::NonzeroSelfCoupling(j));
                }
                continue;
            }
            if j < 0.0 {
                return Err(LatticeError::NegativeAmplitude(j));
            }
            if j > 0.0 {
                support.push((v, j));
            }
        }
        // duplicate displacements are a malformed table
        let mut sorted: Vec<&(Vec<i32>, f64)> = support.iter().collect();
        sorted.sort_by(|a, b| a.0.cmp(&b.0));
        for w in sorted.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(LatticeError::AsymmetricTable(w[0].0.clone()));
            }
        }
        let lookup = |v: &[i32]| -> Option<f64> {
            support
                .iter()
                .find(|(u, _)| u.as_slice() == v)
                .map(|&(_, j)| j)
        };
        // every orbit image under sign flips and permutations must carry the
        // same value (relative tolerance; "equal" inputs may come from text)
        for (v, j) in &support {
            for image in orbit_images(v) {
                match lookup(&image) {
                    Some(ji) if (ji - j).abs() <= 1e-12 * j.abs().max(1.0) => {}
                    _ => return Err(LatticeError::AsymmetricTable(image)),
                }
            }
        }
        Ok(Self::from_support(d, CouplingKind::Explicit, support))
    }

    fn from_support(d: usize, kind: CouplingKind, support: Vec<(Vec<i32>, f64)>) -> Self {
        let jhat: f64 = support.iter().map(|(_, j)| j).sum();
        let second: f64 = support.iter().map(|(v, j)| norm2(v) * j).sum();
        let variance = if jhat > 0.0 { second / jhat } else { 0.0 };
        Self {
            d,
            kind,
            support,
            jhat,
            variance,
        }
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    pub fn kind(&self) -> &CouplingKind {
        &self.kind
    }

    /// 𝒥̂ = Σ_v 𝒥(v).
    pub fn jhat(&self) -> f64 {
        self.jhat
    }

    /// V = Σ_x |x|² 𝒥(x) / 𝒥̂, in lattice units.
    pub fn variance(&self) -> f64 {
        self.variance
    }

    /// Displacements with 𝒥(v) > 0 and their values.
    pub fn support(&self) -> &[(Vec<i32>, f64)] {
        &self.support
    }

    /// 𝒥(v), zero off the support.
    pub fn value(&self, v: &[i32]) -> f64 {
        self.support
            .iter()
            .find(|(u, _)| u.as_slice() == v)
            .map(|&(_, j)| j)
            .unwrap_or(0.0)
    }

    /// Per-site table of 𝒥 wrapped onto the torus.
    pub fn torus_table(&self, geom: &TorusGeometry) -> Vec<f64> {
        let mut table = vec![0.0; geom.volume()];
        for (v, j) in &self.support {
            table[geom.index_of(v)] += j;
        }
        table
    }
}

/// All images of `v` under coordinate permutations and sign flips.
/// Exponential in d, but only used to validate explicit tables (small d).
fn orbit_images(v: &[i32]) -> Vec<Vec<i32>> {
    let d = v.len();
    let mut perms: Vec<Vec<i32>> = Vec::new();
    let mut idx: Vec<usize> = (0..d).collect();
    permute_into(&mut idx, 0, v, &mut perms);
    let mut images = Vec::new();
    for p in perms {
        for mask in 0..(1u32 << d) {
            let mut im = p.clone();
            for (axis, c) in im.iter_mut().enumerate() {
                if mask >> axis & 1 == 1 {
                    *c = -*c;
                }
            }
            images.push(im);
        }
    }
    images.sort();
    images.dedup();
    images
}

fn permute_into(idx: &mut [usize], k: usize, v: &[i32], out: &mut Vec<Vec<i32>>) {
    if k == idx.len() {
        out.push(idx.iter().map(|&i| v[i]).collect());
        return;
    }
    for i in k..idx.len() {
        idx.swap(k, i);
        permute_into(idx, k + 1, v, out);
        idx.swap(k, i);
    }
}

/// Random-walk step distribution D(v) = tanh(J_{o,v}) / Σ_v tanh(J_{o,v}),
/// built from a coupling with concrete per-bond values J = scale·𝒥.
#[derive(Debug, Clone)]
pub struct StepDistribution {
    d: usize,
    support: Vec<(Vec<i32>, f64)>,
    tanh_sum: f64,
}

impl StepDistribution {
    /// `bond_scale` multiplies 𝒥 before the tanh (e.g. the Griffiths-Simon
    /// ε_N²). Use 1.0 for raw couplings.
    pub fn from_coupling(coupling: &Coupling, bond_scale: f64) -> Result<Self, LatticeError> {
        let mut support: Vec<(Vec<i32>, f64)> = coupling
            .support()
            .iter()
            .map(|(v, j)| (v.clone(), (bond_scale * j).tanh()))
            .collect();
        let tanh_sum: f64 = support.iter().map(|(_, t)| t).sum();
        if tanh_sum <= 0.0 {
            return Err(LatticeError::ZeroCoupling);
        }
        for (_, t) in &mut support {
            *t /= tanh_sum;
        }
        Ok(Self {
            d: coupling.dimension(),
            support,
            tanh_sum,
        })
    }

    /// The kernel 𝒥/𝒥̂ itself (no tanh); the step distribution of the
    /// Gaussian-model walk.
    pub fn from_coupling_linear(coupling: &Coupling) -> Result<Self, LatticeError> {
        if coupling.jhat() <= 0.0 {
            return Err(LatticeError::ZeroCoupling);
        }
        let support = coupling
            .support()
            .iter()
            .map(|(v, j)| (v.clone(), j / coupling.jhat()))
            .collect();
        Ok(Self {
            d: coupling.dimension(),
            support,
            tanh_sum: coupling.jhat(),
        })
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    /// Σ_v tanh(J_{o,v}) before normalization.
    pub fn tanh_sum(&self) -> f64 {
        self.tanh_sum
    }

    pub fn support(&self) -> &[(Vec<i32>, f64)] {
        &self.support
    }

    pub fn value(&self, v: &[i32]) -> f64 {
        self.support
            .iter()
            .find(|(u, _)| u.as_slice() == v)
            .map(|&(_, p)| p)
            .unwrap_or(0.0)
    }

    pub fn sum(&self) -> f64 {
        self.support.iter().map(|(_, p)| p).sum()
    }

    /// Σ_v |v|² D(v).
    pub fn second_moment(&self) -> f64 {
        self.support.iter().map(|(v, p)| norm2(v) * p).sum()
    }

    /// D̂(k) = Σ_v D(v) cos(k·v), by direct summation over the support.
    pub fn fourier(&self, k: &[f64]) -> f64 {
        self.support
            .iter()
            .map(|(v, p)| {
                let phase: f64 = v.iter().zip(k).map(|(&c, &kc)| c as f64 * kc).sum();
                p * phase.cos()
            })
            .sum()
    }

    /// 1 − D̂(k) = Σ_v D(v)(1 − cos(k·v)), cancellation-free at small k.
    pub fn one_minus_fourier(&self, k: &[f64]) -> f64 {
        self.support
            .iter()
            .map(|(v, p)| {
                let phase: f64 = v.iter().zip(k).map(|(&c, &kc)| c as f64 * kc).sum();
                p * (1.0 - phase.cos())
            })
            .sum()
    }

    pub fn torus_table(&self, geom: &TorusGeometry) -> Vec<f64> {
        let mut table = vec![0.0; geom.volume()];
        for (v, p) in &self.support {
            table[geom.index_of(v)] += p;
        }
        table
    }
}

/// A d-dimensional torus of even side L, with coordinates reduced to the
/// minimal representatives in (−L/2, L/2].
#[derive(Debug, Clone, PartialEq)]
pub struct TorusGeometry {
    d: usize,
    side: usize,
    volume: usize,
}

impl TorusGeometry {
    pub fn new(d: usize, side: usize) -> Result<Self, LatticeError> {
        if d == 0 {
            return Err(LatticeError::BadDimension);
        }
        if side < 2 || side % 2 != 0 {
            return Err(LatticeError::BadTorusSide(side));
        }
        let volume = (side as u128).pow(d as u32);
        if volume > u32::MAX as u128 {
            return Err(LatticeError::TorusTooLarge(volume));
        }
        Ok(Self {
            d,
            side,
            volume: volume as usize,
        })
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn volume(&self) -> usize {
        self.volume
    }

    pub fn dims(&self) -> Vec<usize> {
        vec![self.side; self.d]
    }

    /// Row-major site index of a (possibly unreduced) coordinate vector.
    pub fn index_of(&self, coords: &[i32]) -> usize {
        debug_assert_eq!(coords.len(), self.d);
        let l = self.side as i64;
        let mut idx = 0usize;
        for &c in coords {
            let r = (c as i64).rem_euclid(l) as usize;
            idx = idx * self.side + r;
        }
        idx
    }

    /// Minimal-image coordinates in (−L/2, L/2] of a site index.
    pub fn coords_of(&self, index: usize) -> Vec<i32> {
        let mut idx = index;
        let half = (self.side / 2) as i32;
        let mut coords = vec![0i32; self.d];
        for axis in (0..self.d).rev() {
            let mut c = (idx % self.side) as i32;
            idx /= self.side;
            if c > half {
                c -= self.side as i32;
            }
            coords[axis] = c;
        }
        coords
    }

    /// Minimal-image |x|² of a site index viewed as a displacement.
    pub fn min_image_norm2(&self, index: usize) -> f64 {
        norm2(&self.coords_of(index))
    }

    /// Site index of x + v.
    pub fn shift(&self, index: usize, v: &[i32]) -> usize {
        let mut coords = self.coords_of(index);
        for (c, &dv) in coords.iter_mut().zip(v) {
            *c += dv;
        }
        self.index_of(&coords)
    }

    /// Displacement index of b − a.
    pub fn displacement(&self, a: usize, b: usize) -> usize {
        let ca = self.coords_of(a);
        let cb = self.coords_of(b);
        let diff: Vec<i32> = cb.iter().zip(&ca).map(|(&x, &y)| x - y).collect();
        self.index_of(&diff)
    }

    /// Per-site table of minimal-image |x|².
    pub fn norm2_table(&self) -> Vec<f64> {
        (0..self.volume).map(|i| self.min_image_norm2(i)).collect()
    }

    /// Fourier momentum 2π n / L for the site index interpreted as a mode.
    pub fn momentum_of(&self, index: usize) -> Vec<f64> {
        let two_pi = 2.0 * std::f64::consts::PI;
        let mut idx = index;
        let mut k = vec![0.0; self.d];
        for axis in (0..self.d).rev() {
            let n = (idx % self.side) as f64;
            idx /= self.side;
            k[axis] = two_pi * n / self.side as f64;
        }
        k
    }
}
