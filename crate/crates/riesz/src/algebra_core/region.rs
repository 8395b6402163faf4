//! Compact planar regions that carry accumulation parts of spectra.

use std::f64::consts::TAU;

use super::poly::Rational;
use crate::C64;

const CURVE_SAMPLES: usize = 512;

#[derive(Clone, Debug, PartialEq)]
pub enum Region {
    Point(C64),
    Segment(C64, C64),
    Circle { center: C64, radius: f64 },
    Disc { center: C64, radius: f64 },
    /// Image of a base region under a rational map that is not affine.
    Image { base: Box<Region>, map: Rational },
}

impl Region {
    pub fn circle(center: C64, radius: f64) -> Region {
        assert!(radius > 0.0, "circle radius must be positive");
        Region::Circle { center, radius }
    }

    pub fn disc(center: C64, radius: f64) -> Region {
        assert!(radius > 0.0, "disc radius must be positive");
        Region::Disc { center, radius }
    }

    pub fn is_point(&self) -> bool {
        matches!(self, Region::Point(_))
    }

    /// Image under `map`; affine maps stay inside the primitive family.
    pub fn map(&self, map: &Rational) -> Region {
        if let Region::Image { base, map: inner } = self {
            return Region::image(base, &map.compose(inner));
        }
        Region::image(self, map)
    }

    fn image(base: &Region, map: &Rational) -> Region {
        if let Some(c) = map.as_constant() {
            return Region::Point(c);
        }
        if let Region::Point(z) = base {
            return Region::Point(map.eval(*z));
        }
        if let Some((a, b)) = map.as_affine() {
            let f = |z: C64| a * z + b;
            return match base {
                Region::Segment(z0, z1) => Region::Segment(f(*z0), f(*z1)),
                Region::Circle { center, radius } => Region::Circle { center: f(*center), radius: radius * a.norm() },
                Region::Disc { center, radius } => Region::Disc { center: f(*center), radius: radius * a.norm() },
                _ => unreachable!("points and images handled above"),
            };
        }
        Region::Image { base: Box::new(base.clone()), map: map.clone() }
    }

    pub fn conj(&self) -> Region {
        match self {
            Region::Point(z) => Region::Point(z.conj()),
            Region::Segment(a, b) => Region::Segment(a.conj(), b.conj()),
            Region::Circle { center, radius } => Region::Circle { center: center.conj(), radius: *radius },
            Region::Disc { center, radius } => Region::Disc { center: center.conj(), radius: *radius },
            Region::Image { base, map } => Region::Image { base: Box::new(base.conj()), map: map.conj() },
        }
    }

    /// Point of the boundary curve at parameter `t` in `[0, 1]`.
    fn curve_at(&self, t: f64) -> C64 {
        match self {
            Region::Point(z) => *z,
            Region::Segment(a, b) => a + (b - a) * t,
            Region::Circle { center, radius } | Region::Disc { center, radius } => {
                center + C64::from_polar(*radius, TAU * t)
            }
            Region::Image { base, map } => map.eval(base.curve_at(t)),
        }
    }

    fn closed_curve(&self) -> bool {
        match self {
            Region::Segment(..) | Region::Point(_) => false,
            Region::Image { base, .. } => base.closed_curve(),
            _ => true,
        }
    }

    /// Samples along the boundary (the whole set for curves).
    pub fn boundary_samples(&self, n: usize) -> Vec<C64> {
        if let Region::Point(z) = self {
            return vec![*z];
        }
        let denom = if self.closed_curve() { n as f64 } else { (n - 1).max(1) as f64 };
        (0..n).map(|i| self.curve_at(i as f64 / denom)).collect()
    }

    /// Samples covering the whole set, interior included.
    pub fn fill_samples(&self, n: usize) -> Vec<C64> {
        match self {
            Region::Disc { center, radius } => {
                let rings = ((n as f64).sqrt() as usize).max(2);
                let mut out = vec![*center];
                for k in 1..=rings {
                    let r = radius * k as f64 / rings as f64;
                    let m = (rings * k).max(8);
                    out.extend((0..m).map(|i| center + C64::from_polar(r, TAU * i as f64 / m as f64)));
                }
                out
            }
            Region::Image { base, map } => base.fill_samples(n).into_iter().map(|z| map.eval(z)).collect(),
            _ => self.boundary_samples(n),
        }
    }

    /// Minimises `f` along the boundary curve: coarse sampling, then golden-section refinement.
    fn curve_min(&self, f: impl Fn(C64) -> f64) -> f64 {
        let n = CURVE_SAMPLES;
        let closed = self.closed_curve();
        let denom = if closed { n as f64 } else { (n - 1) as f64 };
        let (mut best_i, mut best) = (0usize, f64::INFINITY);
        for i in 0..n {
            let v = f(self.curve_at(i as f64 / denom));
            if v < best {
                best = v;
                best_i = i;
            }
        }
        let h = 1.0 / denom;
        let centre = best_i as f64 * h;
        let (mut lo, mut hi) = (centre - h, centre + h);
        if !closed {
            lo = lo.max(0.0);
            hi = hi.min(1.0);
        }
        let g = |t: f64| f(self.curve_at(t));
        let phi = 0.5 * (5f64.sqrt() - 1.0);
        let (mut x1, mut x2) = (hi - phi * (hi - lo), lo + phi * (hi - lo));
        let (mut f1, mut f2) = (g(x1), g(x2));
        for _ in 0..60 {
            if f1 < f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - phi * (hi - lo);
                f1 = g(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + phi * (hi - lo);
                f2 = g(x2);
            }
        }
        best.min(f1).min(f2)
    }

    /// Euclidean distance from `z` to the region.
    pub fn distance(&self, z: C64) -> f64 {
        match self {
            Region::Point(p) => (z - p).norm(),
            Region::Segment(a, b) => {
                let d = b - a;
                let len2 = d.norm_sqr();
                if len2 == 0.0 {
                    return (z - a).norm();
                }
                let t = ((z - a) * d.conj()).re / len2;
                (z - (a + d * t.clamp(0.0, 1.0))).norm()
            }
            Region::Circle { center, radius } => ((z - center).norm() - radius).abs(),
            Region::Disc { center, radius } => ((z - center).norm() - radius).max(0.0),
            Region::Image { base, map } => {
                // z is attained when num - z den has a root in the base region.
                let shifted = map.num().add(&map.den().scale(-z));
                let hit = shifted.roots().into_iter().any(|w| base.distance(w) <= 1e-10 * (1.0 + w.norm()));
                if hit {
                    return 0.0;
                }
                // Minimum modulus on the base boundary (valid for discs, exact for curves).
                base.curve_min(|w| (map.eval(w) - z).norm())
            }
        }
    }

    pub fn contains(&self, z: C64, tol: f64) -> bool {
        self.distance(z) <= tol
    }

    pub fn distance_to(&self, other: &Region) -> f64 {
        match (self, other) {
            (Region::Point(z), r) | (r, Region::Point(z)) => r.distance(*z),
            (Region::Disc { center: c1, radius: r1 }, Region::Disc { center: c2, radius: r2 }) => {
                ((c1 - c2).norm() - r1 - r2).max(0.0)
            }
            (Region::Circle { center: c1, radius: r1 }, Region::Circle { center: c2, radius: r2 }) => {
                let d = (c1 - c2).norm();
                if d >= r1 + r2 {
                    d - r1 - r2
                } else if d <= (r1 - r2).abs() {
                    (r1 - r2).abs() - d
                } else {
                    0.0
                }
            }
            (Region::Circle { center: c1, radius: r1 }, Region::Disc { center: c2, radius: r2 })
            | (Region::Disc { center: c2, radius: r2 }, Region::Circle { center: c1, radius: r1 }) => {
                (((c1 - c2).norm() - r1).abs() - r2).max(0.0)
            }
            _ => {
                let a = self.curve_min(|w| other.distance(w));
                let b = other.curve_min(|w| self.distance(w));
                a.min(b)
            }
        }
    }

    /// Largest modulus over the region.
    pub fn max_abs(&self) -> f64 {
        self.max_distance_from(C64::new(0.0, 0.0))
    }

    /// Largest distance from `c` to a point of the region.
    pub fn max_distance_from(&self, c: C64) -> f64 {
        match self {
            Region::Point(z) => (z - c).norm(),
            Region::Segment(a, b) => (a - c).norm().max((b - c).norm()),
            Region::Circle { center, radius } | Region::Disc { center, radius } => (center - c).norm() + radius,
            // Maximum modulus principle: the boundary curve carries the maximum.
            Region::Image { .. } => -self.curve_min(|w| -(w - c).norm()),
        }
    }

    /// Representative point used to centre contours.
    pub fn centre(&self) -> C64 {
        match self {
            Region::Point(z) => *z,
            Region::Segment(a, b) => (a + b) * 0.5,
            Region::Circle { center, .. } | Region::Disc { center, .. } => *center,
            Region::Image { .. } => {
                let s = self.boundary_samples(64);
                s.iter().sum::<C64>() / s.len() as f64
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra_core::poly::Poly;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn affine_images_stay_primitive() {
        let shift = Rational::from_poly(Poly::linear(c(1.0, 0.0), c(-1.0, 0.0)));
        let r = Region::circle(c(0.0, 0.0), 1.0).map(&shift);
        assert_eq!(r, Region::Circle { center: c(1.0, 0.0), radius: 1.0 });
        assert!(r.contains(c(0.0, 0.0), 1e-12));
    }

    #[test]
    fn image_distance_uses_preimage_roots() {
        let sq = Rational::from_poly(Poly::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]));
        let r = Region::circle(c(0.0, 0.0), 1.0).map(&sq);
        assert!(r.distance(c(0.0, 1.0)) < 1e-12);
        assert!((r.distance(c(0.5, 0.0)) - 0.5).abs() < 1e-9);
        assert!((r.max_abs() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn segment_distance() {
        let s = Region::Segment(c(0.0, 0.0), c(1.0, 0.0));
        assert!((s.distance(c(0.5, 2.0)) - 2.0).abs() < 1e-15);
        assert!((s.distance(c(-3.0, 4.0)) - 5.0).abs() < 1e-15);
    }
}
