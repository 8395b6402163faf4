//! Computable compact subsets of the plane.

use crate::algebra_core::block::merge_points;
use crate::algebra_core::{Base, Poly, Rational, Region, TailRule};
use crate::error::{Error, Result};
use crate::C64;

/// Explicit values enumerated from one sequence before falling back to bounds.
const ENUM_CAP: u64 = 200_000;
/// Explicit enumeration length for power rules before switching to the continuous search.
const POWER_SCAN: u64 = 64;
const POWER_GRID: usize = 64;
const REGION_SAMPLES: usize = 400;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointKind {
    Isolated,
    /// Lies on an accumulation part of the set.
    Embedded,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralPoint {
    pub z: C64,
    pub kind: PointKind,
}

/// The values `rule.value(n)` for `n >= start`, closed up by their limit.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSequence {
    pub rule: TailRule,
    pub start: u64,
}

impl PointSequence {
    pub fn limit(&self) -> C64 {
        self.rule.limit().expect("sequence rules have a point limit")
    }

    pub fn value(&self, n: u64) -> C64 {
        self.rule.value(n)
    }

    /// Distance from `z` to the closure of the sequence.
    pub fn distance(&self, z: C64) -> f64 {
        let far = (z - self.limit()).norm();
        let slack = 1e-14 * (1.0 + far);
        let mut best = far;
        let power = matches!(self.rule.base(), Base::Power { .. });
        let end = self.start + if power { POWER_SCAN } else { ENUM_CAP };
        for n in self.start..end {
            let dev = self.rule.deviation_bound(n);
            if far - dev >= best - slack || dev == 0.0 {
                return best;
            }
            best = best.min((z - self.value(n)).norm());
        }
        match self.rule.base() {
            Base::Power { exponent } => best.min(self.power_tail_distance(z, end, *exponent)),
            _ => best,
        }
    }

    /// Distance to the values with index `>= from` of a power rule, by minimizing over the
    /// continuous parameter `x = n^-γ` and checking the neighbouring integer indices.
    fn power_tail_distance(&self, z: C64, from: u64, exponent: f64) -> f64 {
        let map = self.rule.map();
        let d = |x: f64| (z - map.eval(C64::new(x, 0.0))).norm();
        let top = (from as f64).powf(-exponent);
        // Coarse pass picks the bracket, golden section refines it.
        let grid: Vec<f64> = (0..=POWER_GRID).map(|k| top * k as f64 / POWER_GRID as f64).collect();
        let k = (0..grid.len()).min_by(|i, j| d(grid[*i]).total_cmp(&d(grid[*j]))).unwrap_or(0);
        let (mut lo, mut hi) = (grid[k.saturating_sub(1)], grid[(k + 1).min(POWER_GRID)]);
        let ratio = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..80 {
            let a = hi - ratio * (hi - lo);
            let b = lo + ratio * (hi - lo);
            if d(a) <= d(b) {
                hi = b;
            } else {
                lo = a;
            }
        }
        let x = 0.5 * (lo + hi);
        if x <= 0.0 {
            return d(0.0);
        }
        let n = x.powf(-1.0 / exponent).max(from as f64);
        if n >= u64::MAX as f64 / 2.0 {
            return d(x);
        }
        let n = n.floor() as u64;
        (n.saturating_sub(1).max(from)..=n + 2).map(|m| (z - self.value(m)).norm()).fold(f64::INFINITY, f64::min)
    }

    /// First index after which all values lie within `delta` of the limit.
    pub fn settle(&self, delta: f64) -> u64 {
        self.rule.settle_index(self.start, delta)
    }

    fn same_values(&self, other: &PointSequence) -> bool {
        self.rule.approx_eq(&other.rule, 1e-12)
    }
}

/// A bounded piece of a materialised set.
#[derive(Clone, Debug, PartialEq)]
pub enum Piece {
    Point(C64),
    /// Covers the remaining values of a sequence near its limit.
    Ball { center: C64, radius: f64 },
    Region(Region),
}

impl Piece {
    pub fn center(&self) -> C64 {
        match self {
            Piece::Point(z) => *z,
            Piece::Ball { center, .. } => *center,
            Piece::Region(r) => r.centre(),
        }
    }

    /// Largest distance from `c` to the piece.
    pub fn reach_from(&self, c: C64) -> f64 {
        match self {
            Piece::Point(z) => (z - c).norm(),
            Piece::Ball { center, radius } => (center - c).norm() + radius,
            Piece::Region(r) => r.max_distance_from(c),
        }
    }

    /// Smallest distance from `c` to the piece.
    pub fn distance(&self, c: C64) -> f64 {
        match self {
            Piece::Point(z) => (z - c).norm(),
            Piece::Ball { center, radius } => ((center - c).norm() - radius).max(0.0),
            Piece::Region(r) => r.distance(c),
        }
    }
}

/// Finite points plus accumulation regions plus symbolic point sequences.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SpectralSet {
    pub points: Vec<SpectralPoint>,
    pub regions: Vec<Region>,
    pub sequences: Vec<PointSequence>,
}

impl SpectralSet {
    pub fn empty() -> Self {
        SpectralSet::default()
    }

    pub fn point(z: C64) -> Self {
        SpectralSet { points: vec![SpectralPoint { z, kind: PointKind::Isolated }], ..Default::default() }
    }

    pub fn from_points(values: &[C64], cluster_radius: f64) -> Self {
        let mut s = SpectralSet {
            points: values.iter().map(|&z| SpectralPoint { z, kind: PointKind::Isolated }).collect(),
            ..Default::default()
        };
        s.normalize(cluster_radius);
        s
    }

    pub fn from_regions(regions: Vec<Region>) -> Self {
        SpectralSet { regions, ..Default::default() }
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.regions.is_empty() && self.sequences.is_empty()
    }

    pub fn point_values(&self) -> Vec<C64> {
        self.points.iter().map(|p| p.z).collect()
    }

    /// Merges close points, drops duplicate regions and marks points lying on accumulation parts.
    pub fn normalize(&mut self, cluster_radius: f64) {
        let merged = merge_points(&self.point_values(), cluster_radius);
        let mut regions: Vec<Region> = Vec::new();
        for r in self.regions.drain(..) {
            if !regions.contains(&r) {
                regions.push(r);
            }
        }
        self.regions = regions;
        let mut seqs: Vec<PointSequence> = Vec::new();
        for s in self.sequences.drain(..) {
            match seqs.iter_mut().find(|t| t.same_values(&s)) {
                Some(t) => t.start = t.start.min(s.start),
                None => seqs.push(s),
            }
        }
        self.sequences = seqs;
        self.points = merged
            .into_iter()
            .map(|z| {
                let on_acc = self.regions.iter().any(|r| r.distance(z) <= cluster_radius)
                    || self.sequences.iter().any(|s| (s.limit() - z).norm() <= cluster_radius);
                SpectralPoint { z, kind: if on_acc { PointKind::Embedded } else { PointKind::Isolated } }
            })
            .collect();
    }

    pub fn union(&self, other: &SpectralSet, cluster_radius: f64) -> SpectralSet {
        let mut s = self.clone();
        s.points.extend(other.points.iter().copied());
        s.regions.extend(other.regions.iter().cloned());
        s.sequences.extend(other.sequences.iter().cloned());
        s.normalize(cluster_radius);
        s
    }

    pub fn distance(&self, z: C64) -> f64 {
        let p = self.points.iter().map(|p| (p.z - z).norm()).fold(f64::INFINITY, f64::min);
        let r = self.regions.iter().map(|r| r.distance(z)).fold(p, f64::min);
        self.sequences.iter().map(|s| s.distance(z)).fold(r, f64::min)
    }

    pub fn contains(&self, z: C64, tol: f64) -> bool {
        self.distance(z) <= tol
    }

    /// Distance to `rule.value(n)`, exact 0 when one of the sequences carries that very value.
    pub fn distance_to_value(&self, rule: &TailRule, n: u64) -> f64 {
        if self.sequences.iter().any(|t| n >= t.start && t.rule.approx_eq(rule, 1e-12)) {
            return 0.0;
        }
        self.distance(rule.value(n))
    }

    /// Largest modulus; 0 for the empty set.
    pub fn sup_abs(&self) -> f64 {
        let p = self.points.iter().map(|p| p.z.norm()).fold(0.0, f64::max);
        let r = self.regions.iter().map(Region::max_abs).fold(p, f64::max);
        self.sequences.iter().map(|s| s.rule.sup_abs(s.start)).fold(r, f64::max)
    }

    /// Smallest modulus; infinite for the empty set.
    pub fn inf_abs(&self) -> f64 {
        self.distance(C64::new(0.0, 0.0))
    }

    /// Accumulation points: regions and sequence limits.
    pub fn acc(&self, cluster_radius: f64) -> SpectralSet {
        let limits: Vec<C64> = self.sequences.iter().map(PointSequence::limit).collect();
        let mut s = SpectralSet::from_points(&limits, cluster_radius);
        s.regions = self.regions.clone();
        s.normalize(cluster_radius);
        s
    }

    /// Non-degenerate regions only.
    pub fn region_part(&self) -> SpectralSet {
        SpectralSet::from_regions(self.regions.iter().filter(|r| !r.is_point()).cloned().collect())
    }

    /// Removes points within `tol` of `z`.
    pub fn without_point(&self, z: C64, tol: f64) -> SpectralSet {
        let mut s = self.clone();
        s.points.retain(|p| (p.z - z).norm() > tol);
        s
    }

    pub fn conj(&self) -> SpectralSet {
        SpectralSet {
            points: self.points.iter().map(|p| SpectralPoint { z: p.z.conj(), kind: p.kind }).collect(),
            regions: self.regions.iter().map(Region::conj).collect(),
            sequences: self.sequences.iter().map(|s| PointSequence { rule: s.rule.conj(), start: s.start }).collect(),
        }
    }

    /// Image under a polynomial.
    pub fn map_poly(&self, p: &Poly, cluster_radius: f64) -> SpectralSet {
        let map = Rational::from_poly(p.clone());
        let mut s = SpectralSet {
            points: self.points.iter().map(|q| SpectralPoint { z: p.eval(q.z), kind: q.kind }).collect(),
            regions: self.regions.iter().map(|r| r.map(&map)).collect(),
            sequences: Vec::new(),
        };
        for seq in &self.sequences {
            let rule = seq.rule.apply_poly(p);
            if rule.is_sequence() {
                s.sequences.push(PointSequence { rule, start: seq.start });
            } else {
                s.points.push(SpectralPoint { z: rule.value(seq.start), kind: PointKind::Isolated });
            }
        }
        s.normalize(cluster_radius);
        s
    }

    /// Finite cover: points, sequence values until they settle within `delta`, then a ball.
    pub fn materialize(&self, delta: f64) -> Vec<Piece> {
        let mut out: Vec<Piece> = self.points.iter().map(|p| Piece::Point(p.z)).collect();
        out.extend(self.regions.iter().cloned().map(Piece::Region));
        for s in &self.sequences {
            let end = s.settle(delta).min(s.start + ENUM_CAP);
            out.extend((s.start..end).map(|n| Piece::Point(s.value(n))));
            out.push(Piece::Ball { center: s.limit(), radius: s.rule.deviation_bound(end) });
        }
        out
    }

    /// Points sampling the whole set (regions filled, sequences truncated).
    pub fn samples(&self, per_region: usize, per_sequence: u64) -> Vec<C64> {
        let mut out = self.point_values();
        for r in &self.regions {
            out.extend(r.fill_samples(per_region));
            out.extend(r.boundary_samples(per_region));
        }
        for s in &self.sequences {
            out.extend((s.start..s.start + per_sequence).map(|n| s.value(n)));
            out.push(s.limit());
        }
        out
    }

    /// Splits the set by the closed disc `|z| <= radius`.
    pub fn split_by_disc(&self, radius: f64) -> Result<(SpectralSet, SpectralSet)> {
        let mut inside = SpectralSet::empty();
        let mut outside = SpectralSet::empty();
        for p in &self.points {
            if p.z.norm() <= radius {
                inside.points.push(*p);
            } else {
                outside.points.push(*p);
            }
        }
        for r in &self.regions {
            if r.max_abs() <= radius {
                inside.regions.push(r.clone());
            } else if r.distance(C64::new(0.0, 0.0)) > radius {
                outside.regions.push(r.clone());
            } else {
                return Err(Error::TailStraddles(format!("{r:?} meets the circle |z| = {radius}")));
            }
        }
        for s in &self.sequences {
            let l = s.limit().norm();
            let margin = (l - radius).abs();
            if margin == 0.0 {
                return Err(Error::NotClopen(format!("sequence accumulates on |z| = {radius}")));
            }
            let end = s.settle(0.5 * margin).min(s.start + ENUM_CAP);
            for n in s.start..end {
                let z = s.value(n);
                let kind = PointKind::Isolated;
                if z.norm() <= radius {
                    inside.points.push(SpectralPoint { z, kind });
                } else {
                    outside.points.push(SpectralPoint { z, kind });
                }
            }
            let rest = PointSequence { rule: s.rule.clone(), start: end };
            if l <= radius {
                inside.sequences.push(rest);
            } else {
                outside.sequences.push(rest);
            }
        }
        Ok((inside, outside))
    }

    /// `self` minus points of `other`, treating sequences near their limits symbolically.
    pub fn difference(&self, other: &SpectralSet, cluster_radius: f64) -> SpectralSet {
        let mut out = SpectralSet::empty();
        for p in &self.points {
            if other.distance(p.z) > cluster_radius {
                out.points.push(*p);
            }
        }
        for r in &self.regions {
            let covered = other.regions.contains(r)
                || r.boundary_samples(64).iter().chain(r.fill_samples(64).iter()).all(|z| other.distance(*z) <= cluster_radius);
            if !covered {
                out.regions.push(r.clone());
            }
        }
        for s in &self.sequences {
            let l = s.limit();
            // Parts of `other` away from the limit bound how far the sequence must be unrolled.
            let mut clear = f64::INFINITY;
            let mut inside_region = None;
            for p in &other.points {
                let d = (p.z - l).norm();
                if d > cluster_radius {
                    clear = clear.min(d);
                }
            }
            for r in &other.regions {
                let d = r.distance(l);
                if d > cluster_radius {
                    clear = clear.min(d);
                } else if !r.is_point() {
                    inside_region = Some(r.clone());
                }
            }
            for t in &other.sequences {
                let d = t.distance(l);
                if d > cluster_radius {
                    clear = clear.min(d);
                }
            }
            let delta = if clear.is_finite() { 0.5 * clear } else { f64::INFINITY };
            let end = if delta.is_finite() { s.settle(delta).min(s.start + ENUM_CAP) } else { s.start };
            for n in s.start..end {
                let z = s.value(n);
                if other.distance(z) > cluster_radius {
                    out.points.push(SpectralPoint { z, kind: PointKind::Isolated });
                }
            }
            let twin = other.sequences.iter().filter(|t| t.same_values(s)).map(|t| t.start).min();
            if let Some(t) = twin {
                for n in end..t.max(end).min(end + ENUM_CAP) {
                    let z = s.value(n);
                    if other.distance(z) > cluster_radius {
                        out.points.push(SpectralPoint { z, kind: PointKind::Isolated });
                    }
                }
                continue;
            }
            // A limit inside a solid region of `other` absorbs the values close to it.
            let margin = inside_region
                .map(|r| r.boundary_samples(512).iter().map(|b| (b - l).norm()).fold(f64::INFINITY, f64::min))
                .unwrap_or(0.0);
            if margin > cluster_radius {
                let cut = s.rule.settle_index(end, 0.5 * margin).min(end + ENUM_CAP);
                for n in end..cut {
                    let z = s.value(n);
                    if other.distance(z) > cluster_radius {
                        out.points.push(SpectralPoint { z, kind: PointKind::Isolated });
                    }
                }
            } else {
                out.sequences.push(PointSequence { rule: s.rule.clone(), start: end });
            }
        }
        out.normalize(cluster_radius);
        out
    }

    /// One-sided Hausdorff excess `sup_{x in self} d(x, other)`.
    pub fn excess(&self, other: &SpectralSet) -> f64 {
        if self.is_empty() {
            return 0.0;
        }
        if other.is_empty() {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for p in &self.points {
            worst = worst.max(other.distance(p.z));
        }
        for r in &self.regions {
            if other.regions.contains(r) {
                continue;
            }
            for z in r.fill_samples(REGION_SAMPLES).into_iter().chain(r.boundary_samples(REGION_SAMPLES)) {
                worst = worst.max(other.distance(z));
            }
        }
        for s in &self.sequences {
            let twin = other.sequences.iter().filter(|t| t.same_values(s)).map(|t| t.start).min();
            let end = match twin {
                Some(t) if t <= s.start => continue,
                Some(t) => t.min(s.start + ENUM_CAP),
                None => s.settle(1e-10).min(s.start + ENUM_CAP),
            };
            for n in s.start..end {
                worst = worst.max(other.distance(s.value(n)));
            }
            if twin.is_none() {
                worst = worst.max(other.distance(s.limit()) + s.rule.deviation_bound(end));
            }
        }
        worst
    }

    /// Hausdorff distance; 0 for two empty sets, infinite against an empty set.
    pub fn hausdorff(&self, other: &SpectralSet) -> f64 {
        self.excess(other).max(other.excess(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn harmonic(start: u64) -> PointSequence {
        PointSequence { rule: TailRule::power(c(0.0), c(1.0), 1.0).unwrap(), start }
    }

    #[test]
    fn sequence_distance_is_exact() {
        let s = harmonic(1);
        assert!((s.distance(c(0.26)) - 0.01).abs() < 1e-12);
        assert!((s.distance(c(-0.5)) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn split_harmonic_by_disc() {
        let set = SpectralSet { sequences: vec![harmonic(1)], ..Default::default() };
        let (inside, outside) = set.split_by_disc(0.4).unwrap();
        assert_eq!(outside.point_values(), vec![c(1.0), c(0.5)]);
        assert!((inside.sup_abs() - 1.0 / 3.0).abs() < 1e-15);
        assert!(inside.hausdorff(&SpectralSet { sequences: vec![harmonic(3)], ..Default::default() }) < 1e-15);
    }

    #[test]
    fn difference_drops_limit_and_keeps_values() {
        let sigma = SpectralSet { sequences: vec![harmonic(1)], ..Default::default() };
        let mut with_one = sigma.union(&SpectralSet::point(c(1.0)), 1e-8);
        with_one.normalize(1e-8);
        let browder = SpectralSet::from_points(&[c(0.0), c(1.0)], 1e-8);
        let riesz = with_one.difference(&browder, 1e-8);
        assert!(riesz.distance(c(1.0)) > 0.1);
        assert!(riesz.distance(c(0.5)) < 1e-15);
        assert!(riesz.distance(c(0.001)) < 1e-6);
    }

    #[test]
    fn hausdorff_of_regions() {
        let a = SpectralSet::from_regions(vec![Region::circle(c(0.0), 1.0)]);
        let b = SpectralSet::from_regions(vec![Region::circle(c(0.0), 1.5)]);
        assert!((a.hausdorff(&b) - 0.5).abs() < 1e-9);
        assert_eq!(a.hausdorff(&a), 0.0);
    }
}
