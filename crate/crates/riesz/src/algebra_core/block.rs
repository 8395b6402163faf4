//! Finite block-matrix algebra with a designated ideal of blocks.

use nalgebra::{DMatrix, Schur};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::C64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockSpec {
    pub dim: usize,
    pub ideal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockLayout {
    blocks: Vec<BlockSpec>,
}

impl BlockLayout {
    pub fn new(blocks: Vec<BlockSpec>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::InvalidElement("layout needs at least one block".into()));
        }
        if blocks.iter().any(|b| b.dim == 0) {
            return Err(Error::InvalidElement("block dimensions must be positive".into()));
        }
        if blocks.iter().all(|b| b.ideal) {
            return Err(Error::InvalidElement("layout needs a non-ideal block".into()));
        }
        Ok(BlockLayout { blocks })
    }

    pub fn blocks(&self) -> &[BlockSpec] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockElement {
    layout: BlockLayout,
    mats: Vec<DMatrix<C64>>,
}

impl BlockElement {
    pub fn new(layout: BlockLayout, mats: Vec<DMatrix<C64>>) -> Result<Self> {
        if mats.len() != layout.len() {
            return Err(Error::InvalidElement(format!("{} matrices for {} blocks", mats.len(), layout.len())));
        }
        for (i, (m, spec)) in mats.iter().zip(layout.blocks()).enumerate() {
            if m.nrows() != spec.dim || m.ncols() != spec.dim {
                return Err(Error::InvalidElement(format!("block {i} is {}x{}, expected {}", m.nrows(), m.ncols(), spec.dim)));
            }
            if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::InvalidElement(format!("block {i} has non-finite entries")));
            }
        }
        Ok(BlockElement { layout, mats })
    }

    pub fn scalar(layout: &BlockLayout, c: C64) -> Self {
        let mats = layout.blocks().iter().map(|b| DMatrix::from_diagonal_element(b.dim, b.dim, c)).collect();
        BlockElement { layout: layout.clone(), mats }
    }

    pub fn layout(&self) -> &BlockLayout {
        &self.layout
    }

    pub fn blocks(&self) -> &[DMatrix<C64>] {
        &self.mats
    }

    fn check(&self, other: &BlockElement) -> Result<()> {
        if self.layout != other.layout {
            return Err(Error::LayoutMismatch(format!("{:?} vs {:?}", self.layout, other.layout)));
        }
        Ok(())
    }

    fn zip(&self, other: &BlockElement, f: impl Fn(&DMatrix<C64>, &DMatrix<C64>) -> DMatrix<C64>) -> Result<Self> {
        self.check(other)?;
        let mats = self.mats.iter().zip(&other.mats).map(|(a, b)| f(a, b)).collect();
        Ok(BlockElement { layout: self.layout.clone(), mats })
    }

    pub fn map(&self, f: impl Fn(&DMatrix<C64>) -> DMatrix<C64>) -> Self {
        BlockElement { layout: self.layout.clone(), mats: self.mats.iter().map(f).collect() }
    }

    pub fn add(&self, other: &BlockElement) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &BlockElement) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &BlockElement) -> Result<Self> {
        self.zip(other, |a, b| a * b)
    }

    pub fn scale(&self, s: C64) -> Self {
        self.map(|m| m * s)
    }

    pub fn adjoint(&self) -> Self {
        self.map(|m| m.adjoint())
    }

    /// Largest spectral norm over the blocks.
    pub fn norm(&self) -> f64 {
        self.mats.iter().map(spectral_norm).fold(0.0, f64::max)
    }

    /// Every non-ideal block vanishes.
    pub fn in_ideal(&self) -> bool {
        self.mats.iter().zip(self.layout.blocks()).all(|(m, b)| b.ideal || m.iter().all(|z| *z == C64::new(0.0, 0.0)))
    }

    /// Blocks surviving the quotient map.
    pub fn quotient_blocks(&self) -> Vec<DMatrix<C64>> {
        self.mats.iter().zip(self.layout.blocks()).filter(|(_, b)| !b.ideal).map(|(m, _)| m.clone()).collect()
    }

    /// Inverse with a singular-value witness on failure.
    pub fn invert(&self, cfg: &Config) -> Result<Self> {
        let threshold = cfg.tol_inv(self.norm());
        let mut mats = Vec::with_capacity(self.mats.len());
        for (i, m) in self.mats.iter().enumerate() {
            let smin = m.clone().svd(false, false).singular_values.min();
            if smin <= threshold {
                return Err(Error::NotInvertible { witness: format!("block {i}: smallest singular value {smin:e}") });
            }
            let inv = m.clone().lu().try_inverse().ok_or_else(|| Error::NotInvertible {
                witness: format!("block {i}: LU breakdown"),
            })?;
            mats.push(inv);
        }
        Ok(BlockElement { layout: self.layout.clone(), mats })
    }

    /// LU inverse without conditioning checks; used at quadrature nodes away from the spectrum.
    pub fn invert_unchecked(&self) -> Result<Self> {
        let mut mats = Vec::with_capacity(self.mats.len());
        for (i, m) in self.mats.iter().enumerate() {
            mats.push(m.clone().lu().try_inverse().ok_or_else(|| Error::NotInvertible {
                witness: format!("block {i}: singular at quadrature node"),
            })?);
        }
        Ok(BlockElement { layout: self.layout.clone(), mats })
    }
}

pub fn spectral_norm(m: &DMatrix<C64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return f64::INFINITY;
    }
    m.clone().svd(false, false).singular_values.max()
}

/// Complex Schur form `m = q t q*` with `t` upper triangular.
pub fn schur(m: &DMatrix<C64>) -> (DMatrix<C64>, DMatrix<C64>) {
    let n = m.nrows();
    if n == 1 {
        return (DMatrix::identity(1, 1), m.clone());
    }
    let (q, mut t) = stable_schur(m);
    for j in 0..n {
        for i in j + 1..n {
            t[(i, j)] = C64::new(0.0, 0.0);
        }
    }
    (q, t)
}

/// Single-linkage components of `idx` at `radius`.
fn linkage(values: &[C64], idx: &[usize], radius: f64) -> Vec<Vec<usize>> {
    let mut parts: Vec<Vec<usize>> = Vec::new();
    for &i in idx {
        let hits: Vec<usize> = (0..parts.len()).filter(|&p| parts[p].iter().any(|&j| (values[i] - values[j]).norm() <= radius)).collect();
        let mut merged = vec![i];
        for &p in hits.iter().rev() {
            merged.extend(parts.remove(p));
        }
        parts.push(merged);
    }
    parts
}

/// Slack on the rounding radius of a defective eigenvalue cluster.
const DEFECT_FACTOR: f64 = 4.0;

/// Schur form with a capped iteration count. When the QR sweep stalls (nilpotent companion
/// matrices do this), the decomposition of a shifted copy is used: `m + sI` has the same Schur
/// vectors and its triangular factor is `t + sI`.
fn stable_schur(m: &DMatrix<C64>) -> (DMatrix<C64>, DMatrix<C64>) {
    let n = m.nrows();
    let scale = 1.0 + m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let shifts = [C64::new(0.0, 0.0), C64::new(0.137, 0.071), C64::new(-0.293, 0.411), C64::new(0.5, -0.613)];
    for s in shifts {
        let shifted = m + DMatrix::<C64>::identity(n, n) * (s * scale);
        if let Some(sch) = Schur::try_new(shifted, f64::EPSILON, 1000 * n) {
            let (q, t) = sch.unpack();
            return (q, t - DMatrix::<C64>::identity(n, n) * (s * scale));
        }
    }
    panic!("Schur iteration failed to converge for every shift");
}

/// Eigenvalues with multiplicity, read off the Schur diagonal and passed through [`defect_clusters`].
pub fn eigenvalues(m: &DMatrix<C64>) -> Vec<C64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let (_, t) = schur(m);
    let diag: Vec<C64> = (0..m.nrows()).map(|i| t[(i, i)]).collect();
    defect_clusters(&diag, schur_scale(m))
}

fn schur_scale(m: &DMatrix<C64>) -> f64 {
    1.0 + m.iter().map(|z| z.norm()).fold(0.0, f64::max) * m.nrows() as f64
}

/// Replaces each computed eigenvalue by the mean of its defective cluster.
///
/// Rounding spreads an eigenvalue of algebraic multiplicity `k` over a ring of radius about
/// `(eps·scale)^{1/k}`, while the cluster mean stays accurate to `eps·scale`. A group is kept
/// when its diameter is within that bound for its size; otherwise it is split into
/// single-linkage components at the next smaller bound and each component is examined again.
pub fn defect_clusters(values: &[C64], scale: f64) -> Vec<C64> {
    let e = f64::EPSILON * scale;
    let bound = |k: usize| DEFECT_FACTOR * e.powf(1.0 / k as f64);
    let diameter = |g: &[usize]| {
        let mut d = 0.0f64;
        for (x, &i) in g.iter().enumerate() {
            for &j in &g[x + 1..] {
                d = d.max((values[i] - values[j]).norm());
            }
        }
        d
    };
    let mut groups = Vec::new();
    let mut pending = vec![(0..values.len()).collect::<Vec<usize>>()];
    while let Some(g) = pending.pop() {
        if g.len() <= 1 || diameter(&g) <= bound(g.len()) {
            groups.push(g);
            continue;
        }
        let mut k = g.len() - 1;
        loop {
            let parts = linkage(values, &g, bound(k));
            if parts.len() > 1 || k == 1 {
                if parts.len() == 1 {
                    groups.extend(g.iter().map(|&i| vec![i]));
                } else {
                    pending.extend(parts);
                }
                break;
            }
            k -= 1;
        }
    }
    let mut out = values.to_vec();
    for g in groups.iter().filter(|g| g.len() > 1) {
        let mean = g.iter().map(|&i| values[i]).sum::<C64>() / g.len() as f64;
        for &i in g {
            out[i] = mean;
        }
    }
    out
}

/// Groups values closer than `radius` (single linkage) and returns one mean per group.
pub fn merge_points(values: &[C64], radius: f64) -> Vec<C64> {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        let mut j = i;
        while p[j] != r {
            let next = p[j];
            p[j] = r;
            j = next;
        }
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (values[i] - values[j]).norm() <= radius {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[b] = a;
                }
            }
        }
    }
    let mut groups: Vec<(usize, C64, usize)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => {
                g.1 += values[i];
                g.2 += 1;
            }
            None => groups.push((r, values[i], 1)),
        }
    }
    let mut out: Vec<C64> = groups.into_iter().map(|(_, s, k)| s / k as f64).collect();
    out.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    out
}

/// Swaps the adjacent diagonal entries `k`, `k+1` of the triangular factor.
fn swap_adjacent(q: &mut DMatrix<C64>, t: &mut DMatrix<C64>, k: usize) {
    let v1 = t[(k, k + 1)];
    let v2 = t[(k + 1, k + 1)] - t[(k, k)];
    let nv = (v1.norm_sqr() + v2.norm_sqr()).sqrt();
    if nv == 0.0 {
        return;
    }
    // First column spans the eigenvector of the later eigenvalue.
    let (g11, g21) = (v1 / nv, v2 / nv);
    let (g12, g22) = (-g21.conj(), g11.conj());
    let n = t.nrows();
    for j in 0..n {
        let (a, b) = (t[(k, j)], t[(k + 1, j)]);
        t[(k, j)] = g11.conj() * a + g21.conj() * b;
        t[(k + 1, j)] = g12.conj() * a + g22.conj() * b;
    }
    for i in 0..n {
        let (a, b) = (t[(i, k)], t[(i, k + 1)]);
        t[(i, k)] = a * g11 + b * g21;
        t[(i, k + 1)] = a * g12 + b * g22;
        let (a, b) = (q[(i, k)], q[(i, k + 1)]);
        q[(i, k)] = a * g11 + b * g21;
        q[(i, k + 1)] = a * g12 + b * g22;
    }
    t[(k + 1, k)] = C64::new(0.0, 0.0);
}

/// Spectral projection onto the eigenvalues selected by `inside`, along the rest.
pub fn riesz_projection(m: &DMatrix<C64>, inside: impl Fn(C64) -> bool) -> DMatrix<C64> {
    let n = m.nrows();
    let (mut q, mut t) = schur(m);
    let diag: Vec<C64> = (0..n).map(|i| t[(i, i)]).collect();
    let mut sel: Vec<bool> = defect_clusters(&diag, schur_scale(m)).into_iter().map(inside).collect();
    let k = sel.iter().filter(|s| **s).count();
    if k == 0 {
        return DMatrix::zeros(n, n);
    }
    if k == n {
        return DMatrix::identity(n, n);
    }
    // Bubble selected eigenvalues to the leading positions.
    for target in 0..k {
        let src = (target..n).find(|&i| sel[i]).expect("selected count");
        for pos in (target..src).rev() {
            swap_adjacent(&mut q, &mut t, pos);
            sel.swap(pos, pos + 1);
        }
    }
    // Solve t11 r - r t22 = t12 column by column.
    let mut r = DMatrix::<C64>::zeros(k, n - k);
    for j in 0..n - k {
        let mu = t[(k + j, k + j)];
        let mut rhs: Vec<C64> = (0..k).map(|i| t[(i, k + j)]).collect();
        for l in 0..j {
            let c = t[(k + l, k + j)];
            for (i, v) in rhs.iter_mut().enumerate() {
                *v += r[(i, l)] * c;
            }
        }
        for i in (0..k).rev() {
            let mut s = rhs[i];
            for l in i + 1..k {
                s -= t[(i, l)] * r[(l, j)];
            }
            r[(i, j)] = s / (t[(i, i)] - mu);
        }
    }
    let mut p = DMatrix::<C64>::zeros(n, n);
    for i in 0..k {
        p[(i, i)] = C64::new(1.0, 0.0);
        for j in 0..n - k {
            p[(i, k + j)] = r[(i, j)];
        }
    }
    &q * p * q.adjoint()
}
