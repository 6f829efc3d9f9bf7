//! Poisson point fields, rectangular obstacles and line-of-sight queries.
//!
//! Points are stored in polar form about the typical receiver at the origin.
//! Sectors are centred on azimuth 0, i.e. on the receiver boresight.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("invalid sector: theta = {theta}, r_in = {r_in}, r_out = {r_out}")]
    InvalidSector { theta: f64, r_in: f64, r_out: f64 },
    #[error("sampling needs a finite outer radius")]
    UnboundedRegion,
    #[error("invalid parameter {name} = {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("thinning probability {value} at r = {r} is outside [0, 1]")]
    BadKeepProbability { r: f64, value: f64 },
}

/// 𝓑(θ, r_in, r_out): the set of points with |azimuth| ≤ θ/2 and radius in [r_in, r_out].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnulusSector {
    pub theta: f64,
    pub r_in: f64,
    pub r_out: f64,
}

impl AnnulusSector {
    pub fn new(theta: f64, r_in: f64, r_out: f64) -> Result<Self, GeometryError> {
        let ok = theta > 0.0 && theta <= TAU && r_in >= 0.0 && r_out > r_in;
        if !ok {
            return Err(GeometryError::InvalidSector { theta, r_in, r_out });
        }
        Ok(AnnulusSector { theta, r_in, r_out })
    }

    pub fn disk(radius: f64) -> Result<Self, GeometryError> {
        Self::new(TAU, 0.0, radius)
    }

    pub fn area(&self) -> f64 {
        0.5 * self.theta * (self.r_out * self.r_out - self.r_in * self.r_in)
    }

    pub fn contains(&self, p: PolarPoint) -> bool {
        p.r >= self.r_in && p.r <= self.r_out && (self.theta >= TAU || wrap_angle(p.phi).abs() <= 0.5 * self.theta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarPoint {
    pub r: f64,
    pub phi: f64,
}

impl PolarPoint {
    pub fn to_xy(self) -> [f64; 2] {
        [self.r * self.phi.cos(), self.r * self.phi.sin()]
    }

    pub fn from_xy(p: [f64; 2]) -> Self {
        PolarPoint { r: p[0].hypot(p[1]), phi: p[1].atan2(p[0]) }
    }
}

/// Map an angle to [−π, π).
pub fn wrap_angle(a: f64) -> f64 {
    let w = (a + PI).rem_euclid(TAU) - PI;
    if w >= PI {
        w - TAU
    } else {
        w
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointField {
    pub points: Vec<PolarPoint>,
    pub intensity: f64,
    pub region: AnnulusSector,
}

impl PointField {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Draw a Poisson count with the given mean (0 for a zero mean).
pub fn poisson_count<R: Rng + ?Sized>(mean: f64, rng: &mut R) -> usize {
    if mean <= 0.0 {
        return 0;
    }
    let d = Poisson::new(mean).expect("positive finite mean");
    d.sample(rng) as usize
}

fn uniform_in_sector<R: Rng + ?Sized>(region: &AnnulusSector, rng: &mut R) -> PolarPoint {
    let r2 = region.r_in * region.r_in + rng.random::<f64>() * (region.r_out * region.r_out - region.r_in * region.r_in);
    let phi = if region.theta >= TAU {
        rng.random::<f64>() * TAU - PI
    } else {
        (rng.random::<f64>() - 0.5) * region.theta
    };
    PolarPoint { r: r2.sqrt(), phi }
}

fn check_finite(region: &AnnulusSector) -> Result<(), GeometryError> {
    if region.r_out.is_finite() {
        Ok(())
    } else {
        Err(GeometryError::UnboundedRegion)
    }
}

pub fn sample_homogeneous_ppp<R: Rng + ?Sized>(intensity: f64, region: &AnnulusSector, rng: &mut R) -> Result<PointField, GeometryError> {
    check_finite(region)?;
    if !(intensity >= 0.0) || !intensity.is_finite() {
        return Err(GeometryError::InvalidParameter { name: "intensity", value: intensity });
    }
    let n = poisson_count(intensity * region.area(), rng);
    let points = (0..n).map(|_| uniform_in_sector(region, rng)).collect();
    Ok(PointField { points, intensity, region: *region })
}

/// Independent thinning of a homogeneous field: a point at radius r survives
/// with probability `keep_prob(r)`.
pub fn sample_thinned_ppp<R, F>(base_intensity: f64, keep_prob: F, region: &AnnulusSector, rng: &mut R) -> Result<PointField, GeometryError>
where
    R: Rng + ?Sized,
    F: Fn(f64) -> f64,
{
    let base = sample_homogeneous_ppp(base_intensity, region, rng)?;
    let mut points = Vec::with_capacity(base.points.len());
    for p in base.points {
        let q = keep_prob(p.r);
        if !(0.0..=1.0).contains(&q) {
            return Err(GeometryError::BadKeepProbability { r: p.r, value: q });
        }
        if rng.random::<f64>() < q {
            points.push(p);
        }
    }
    Ok(PointField { points, intensity: base_intensity, region: *region })
}

/// Exact sampler for the sector process with intensity `base_intensity·e^{−k r}`.
///
/// Equivalent in law to `sample_thinned_ppp` with `keep_prob = e^{−k r}` but
/// draws only the surviving points: the count is Poisson with the integrated
/// measure and radii follow the density ∝ r e^{−k r} on the annulus.
pub fn sample_exponential_ppp<R: Rng + ?Sized>(base_intensity: f64, k: f64, region: &AnnulusSector, rng: &mut R) -> Result<PointField, GeometryError> {
    check_finite(region)?;
    if !(k >= 0.0) {
        return Err(GeometryError::InvalidParameter { name: "k", value: k });
    }
    if k == 0.0 {
        return sample_homogeneous_ppp(base_intensity, region, rng);
    }
    let mass = |r: f64| crate::special::one_minus_one_plus_x_exp(k * r) / (k * k);
    let measure = base_intensity * region.theta * (mass(region.r_out) - mass(region.r_in));
    let n = poisson_count(measure, rng);
    let mut points = Vec::with_capacity(n);
    while points.len() < n {
        // Gamma(2, 1/k) radius by summing two exponentials, restricted to the annulus
        let r = -(rng.random::<f64>().ln() + rng.random::<f64>().ln()) / k;
        if r < region.r_in || r > region.r_out {
            continue;
        }
        let phi = if region.theta >= TAU {
            rng.random::<f64>() * TAU - PI
        } else {
            (rng.random::<f64>() - 0.5) * region.theta
        };
        points.push(PolarPoint { r, phi });
    }
    Ok(PointField { points, intensity: base_intensity, region: *region })
}

pub fn bernoulli_los<R: Rng + ?Sized>(distance: f64, eps_lambda_o: f64, rng: &mut R) -> bool {
    rng.random::<f64>() < (-eps_lambda_o * distance).exp()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Obstacle {
    pub center: [f64; 2],
    pub width: f64,
    pub length: f64,
    pub orientation: f64,
    pub is_reflector: bool,
    pub penetration_loss_db: f64,
    pub reflection_coeff: f64,
}

impl Obstacle {
    /// Unit vectors along the width and length directions.
    pub fn axes(&self) -> ([f64; 2], [f64; 2]) {
        let (s, c) = self.orientation.sin_cos();
        ([c, s], [-s, c])
    }

    pub fn corners(&self) -> [[f64; 2]; 4] {
        let (u, v) = self.axes();
        let hw = 0.5 * self.width;
        let hl = 0.5 * self.length;
        let mut out = [[0.0; 2]; 4];
        for (i, (su, sv)) in [(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)].iter().enumerate() {
            out[i] = [
                self.center[0] + su * hw * u[0] + sv * hl * v[0],
                self.center[1] + su * hw * u[1] + sv * hl * v[1],
            ];
        }
        out
    }

    /// Whether the rectangle meets the open segment (p, q).
    pub fn intersects_segment(&self, p: [f64; 2], q: [f64; 2]) -> bool {
        OrientedRect::from(self).intersects_segment(p, q)
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        let (u, v) = self.axes();
        let d = [p[0] - self.center[0], p[1] - self.center[1]];
        (d[0] * u[0] + d[1] * u[1]).abs() <= 0.5 * self.width && (d[0] * v[0] + d[1] * v[1]).abs() <= 0.5 * self.length
    }
}

/// An obstacle footprint with its axes precomputed, for repeated queries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrientedRect {
    pub center: [f64; 2],
    pub u: [f64; 2],
    pub v: [f64; 2],
    pub half: [f64; 2],
}

impl From<&Obstacle> for OrientedRect {
    fn from(o: &Obstacle) -> Self {
        let (u, v) = o.axes();
        OrientedRect { center: o.center, u, v, half: [0.5 * o.width, 0.5 * o.length] }
    }
}

impl OrientedRect {
    /// Slab clipping in the rectangle frame; a zero-width side degenerates
    /// to a line segment.
    #[inline]
    pub fn intersects_segment(&self, p: [f64; 2], q: [f64; 2]) -> bool {
        let (u, v) = (self.u, self.v);
        let d = [p[0] - self.center[0], p[1] - self.center[1]];
        let e = [q[0] - p[0], q[1] - p[1]];
        let pos = [d[0] * u[0] + d[1] * u[1], d[0] * v[0] + d[1] * v[1]];
        let dir = [e[0] * u[0] + e[1] * u[1], e[0] * v[0] + e[1] * v[1]];
        let mut t0 = 0.0_f64;
        let mut t1 = 1.0_f64;
        for k in 0..2 {
            if dir[k].abs() < 1e-300 {
                if pos[k].abs() > self.half[k] {
                    return false;
                }
                continue;
            }
            let inv = 1.0 / dir[k];
            let mut ta = (-self.half[k] - pos[k]) * inv;
            let mut tb = (self.half[k] - pos[k]) * inv;
            if ta > tb {
                std::mem::swap(&mut ta, &mut tb);
            }
            t0 = t0.max(ta);
            t1 = t1.min(tb);
            if t0 > t1 {
                return false;
            }
        }
        t1 > 0.0 && t0 < 1.0
    }
}

pub const MAX_OBSTACLE_WIDTH: f64 = 4.0;
pub const MAX_OBSTACLE_LENGTH: f64 = 3.0;

pub fn sample_obstacles<R: Rng + ?Sized>(
    density: f64,
    extent: &AnnulusSector,
    reflector_prob: f64,
    loss_db: f64,
    refl_coeff: f64,
    rng: &mut R,
) -> Result<Vec<Obstacle>, GeometryError> {
    if !(0.0..=1.0).contains(&reflector_prob) {
        return Err(GeometryError::InvalidParameter { name: "reflector_prob", value: reflector_prob });
    }
    if !(refl_coeff > 0.0 && refl_coeff <= 1.0) {
        return Err(GeometryError::InvalidParameter { name: "reflection_coeff", value: refl_coeff });
    }
    if !(loss_db >= 0.0) {
        return Err(GeometryError::InvalidParameter { name: "penetration_loss_db", value: loss_db });
    }
    let centers = sample_homogeneous_ppp(density, extent, rng)?;
    Ok(centers
        .points
        .into_iter()
        .map(|c| Obstacle {
            center: c.to_xy(),
            width: rng.random::<f64>() * MAX_OBSTACLE_WIDTH,
            length: rng.random::<f64>() * MAX_OBSTACLE_LENGTH,
            orientation: rng.random::<f64>() * TAU,
            is_reflector: rng.random::<f64>() < reflector_prob,
            penetration_loss_db: loss_db,
            reflection_coeff: refl_coeff,
        })
        .collect())
}

pub fn count_blockers(tx: [f64; 2], rx: [f64; 2], obstacles: &[Obstacle]) -> usize {
    obstacles.iter().filter(|o| o.intersects_segment(tx, rx)).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rect(cx: f64, cy: f64, w: f64, l: f64, phi: f64) -> Obstacle {
        Obstacle {
            center: [cx, cy],
            width: w,
            length: l,
            orientation: phi,
            is_reflector: false,
            penetration_loss_db: 10.0,
            reflection_coeff: 1.0,
        }
    }

    #[test]
    fn zero_intensity_gives_empty_field() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = sample_homogeneous_ppp(0.0, &AnnulusSector::disk(500.0).unwrap(), &mut rng).unwrap();
        assert!(f.is_empty());
    }

    #[test]
    fn infinite_region_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let region = AnnulusSector::new(TAU, 0.0, f64::INFINITY).unwrap();
        assert_eq!(sample_homogeneous_ppp(1e-3, &region, &mut rng), Err(GeometryError::UnboundedRegion));
    }

    #[test]
    fn invalid_sector_rejected() {
        assert!(AnnulusSector::new(0.0, 0.0, 1.0).is_err());
        assert!(AnnulusSector::new(7.0, 0.0, 1.0).is_err());
        assert!(AnnulusSector::new(1.0, 2.0, 1.0).is_err());
    }

    #[test]
    fn points_lie_in_region() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let region = AnnulusSector::new(PI / 9.0, 10.0, 200.0).unwrap();
        let f = sample_homogeneous_ppp(1e-2, &region, &mut rng).unwrap();
        assert!(!f.is_empty());
        assert!(f.points.iter().all(|&p| region.contains(p)));
    }

    #[test]
    fn bad_keep_probability_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let region = AnnulusSector::disk(100.0).unwrap();
        let err = sample_thinned_ppp(1e-2, |_| 1.5, &region, &mut rng).unwrap_err();
        assert!(matches!(err, GeometryError::BadKeepProbability { .. }));
        let empty = sample_thinned_ppp(1e-2, |_| 0.0, &region, &mut rng).unwrap();
        assert!(empty.is_empty());
    }

    #[test]
    fn centred_rectangle_blocks_segment() {
        let o = rect(10.0, 0.0, 4.0, 3.0, 0.0);
        assert_eq!(count_blockers([0.0, 0.0], [20.0, 0.0], &[o]), 1);
        assert_eq!(count_blockers([0.0, 0.0], [20.0, 0.0], &[]), 0);
    }

    #[test]
    fn rectangle_beside_segment_does_not_block() {
        let o = rect(10.0, 5.0, 4.0, 3.0, 0.3);
        assert_eq!(count_blockers([0.0, 0.0], [20.0, 0.0], &[o]), 0);
    }

    #[test]
    fn degenerate_rectangle_is_a_segment() {
        // zero width: a 3 m bar across the path
        let o = rect(10.0, 0.0, 0.0, 3.0, 0.0);
        assert!(o.intersects_segment([0.0, 0.0], [20.0, 0.0]));
        // zero width and parallel to the path but offset
        let o = rect(10.0, 1.0, 0.0, 3.0, PI / 2.0);
        assert!(!o.intersects_segment([0.0, 0.0], [20.0, 0.0]));
    }

    #[test]
    fn segment_ending_short_of_rectangle() {
        let o = rect(10.0, 0.0, 2.0, 2.0, 0.0);
        assert!(!o.intersects_segment([0.0, 0.0], [8.9, 0.0]));
        assert!(o.intersects_segment([0.0, 0.0], [9.1, 0.0]));
    }

    #[test]
    fn obstacle_marks_follow_parameters() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let region = AnnulusSector::disk(500.0).unwrap();
        let obs = sample_obstacles(0.0, &region, 0.1, 10.0, 0.63, &mut rng).unwrap();
        assert!(obs.is_empty());
        assert!(sample_obstacles(1e-3, &region, 1.2, 10.0, 0.63, &mut rng).is_err());
        assert!(sample_obstacles(1e-3, &region, 0.1, 10.0, 0.0, &mut rng).is_err());
    }

    #[test]
    fn wrap_angle_range() {
        for &a in &[-10.0, -PI, 0.0, PI, 3.0 * PI, 7.5] {
            let w = wrap_angle(a);
            assert!((-PI..PI).contains(&w));
            assert!(((a - w) / TAU - ((a - w) / TAU).round()).abs() < 1e-12);
        }
    }
}
