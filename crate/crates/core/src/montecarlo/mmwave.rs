//! Scenario 4: 28 GHz links among rectangular obstacles.
//!
//! Each trial draws obstacles (10 % of them reflectors), interferers with
//! random boresights, and one shadowing term per path. Paths are the direct
//! segment and first-order specular reflections off the faces of reflectors.
//! The typical link uses its strongest path; interferers contribute every path.
//! Both models see the same geometry and shadowing; they differ only in
//! penetration loss, reflection coefficient and side-lobe gain.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::geometry::{poisson_count, sample_obstacles, wrap_angle, AnnulusSector, Obstacle, OrientedRect};
use crate::interference::LinkBudgetTerm;
use crate::propagation::{db_to_linear, SectorAntenna};

use super::engine::Realization;
use super::MonteCarloError;

/// Paths weaker than this (channel gain, dB) are dropped.
pub const PATH_FLOOR_DB: f64 = -180.0;

const ANGLE_BINS: usize = 1024;
const OBSTACLE_CELL: f64 = 10.0;
const TX_CELL: f64 = 50.0;

/// √(x² + y²) without the overflow guards of `hypot`.
#[inline]
fn norm(x: f64, y: f64) -> f64 {
    (x * x + y * y).sqrt()
}

/// Bucketed lists in compressed rows, rebuilt from (bucket, item) pairs.
#[derive(Debug, Default)]
struct Buckets {
    pairs: Vec<(u32, u32)>,
    start: Vec<u32>,
    items: Vec<u32>,
}

impl Buckets {
    fn reset(&mut self) {
        self.pairs.clear();
    }

    fn push(&mut self, bucket: usize, item: u32) {
        self.pairs.push((bucket as u32, item));
    }

    /// Counting sort into `n` buckets; items keep insertion order within a bucket.
    fn finish(&mut self, n: usize) {
        self.start.clear();
        self.start.resize(n + 1, 0);
        for &(b, _) in &self.pairs {
            self.start[b as usize + 1] += 1;
        }
        for i in 0..n {
            self.start[i + 1] += self.start[i];
        }
        self.items.clear();
        self.items.resize(self.pairs.len(), 0);
        let mut fill = self.start.clone();
        for &(b, it) in &self.pairs {
            self.items[fill[b as usize] as usize] = it;
            fill[b as usize] += 1;
        }
    }

    #[inline]
    fn get(&self, bucket: usize) -> &[u32] {
        &self.items[self.start[bucket] as usize..self.start[bucket + 1] as usize]
    }
}

/// Per-model channel and antenna parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SideParams {
    pub l_o_db: f64,
    pub refl_coeff: f64,
    pub antenna: SectorAntenna,
}

impl SideParams {
    /// Channel gain in dB of a path; −∞ when the path is unusable.
    fn gain_db(&self, base_db: f64, n_blockers: u32, reflected: bool) -> f64 {
        let mut g = base_db;
        if n_blockers > 0 {
            if self.l_o_db.is_infinite() {
                return f64::NEG_INFINITY;
            }
            g -= n_blockers as f64 * self.l_o_db;
        }
        if reflected {
            if self.refl_coeff <= 0.0 {
                return f64::NEG_INFINITY;
            }
            g += 10.0 * self.refl_coeff.log10();
        }
        g
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MmWaveParams {
    pub lambda_t: f64,
    pub lambda_o: f64,
    pub window: f64,
    pub d0: f64,
    pub power: f64,
    pub noise: f64,
    pub c_db: f64,
    pub alpha: f64,
    pub a: f64,
    pub reflector_prob: f64,
    pub shadow_sigma_db: f64,
    pub y: SideParams,
    pub x: SideParams,
}

impl MmWaveParams {
    /// c − 10α log₁₀ d with d clamped at `a`, minus the shadowing term.
    fn base_db(&self, length: f64, shadow: f64) -> f64 {
        self.c_db - 10.0 * self.alpha * length.max(self.a).log10() - shadow
    }
}

/// One candidate propagation path from a transmitter to the receiver at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathGeom {
    pub length: f64,
    pub n_blockers: u32,
    pub reflected: bool,
    /// Direction of departure at the transmitter.
    pub departure: f64,
    /// Direction, seen from the receiver, from which the path arrives.
    pub arrival: f64,
}

/// Obstacles with two acceleration structures: an angular index for
/// segments ending at the origin and a uniform grid for arbitrary segments.
#[derive(Debug, Default)]
pub struct ObstacleIndex {
    pub obstacles: Vec<Obstacle>,
    rects: Vec<OrientedRect>,
    near: Vec<f64>,
    bins: Buckets,
    around_origin: Vec<u32>,
    grid_n: usize,
    grid_half: f64,
    cells: Buckets,
    stamp: Vec<u32>,
    query: u32,
}

impl ObstacleIndex {
    pub fn rebuild(&mut self, obstacles: Vec<Obstacle>, half_extent: f64) {
        self.obstacles = obstacles;
        let n = self.obstacles.len();
        self.near.clear();
        self.bins.reset();
        self.around_origin.clear();
        self.grid_half = half_extent;
        self.grid_n = ((2.0 * half_extent / OBSTACLE_CELL).ceil() as usize).max(1);
        self.cells.reset();
        self.stamp.clear();
        self.stamp.resize(n, 0);
        self.query = 0;
        let bin_w = TAU / ANGLE_BINS as f64;
        self.rects.clear();
        self.rects.extend(self.obstacles.iter().map(OrientedRect::from));
        for (j, o) in self.obstacles.iter().enumerate() {
            let corners = rect_corners(&self.rects[j]);
            let dist = norm(o.center[0], o.center[1]);
            let half_diag = 0.5 * norm(o.width, o.length);
            self.near.push((dist - half_diag).max(0.0));
            if dist <= half_diag + 1e-9 {
                // may contain or touch the origin: always a candidate
                self.around_origin.push(j as u32);
            } else {
                // angular extent of the circumscribed disk
                let mid = o.center[1].atan2(o.center[0]);
                let w = (half_diag / dist).asin();
                let start = ((mid - w + PI) / bin_w).floor() as i64;
                let end = ((mid + w + PI) / bin_w).floor() as i64;
                for b in start..=end {
                    self.bins.push(b.rem_euclid(ANGLE_BINS as i64) as usize, j as u32);
                }
            }
            let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
            for c in &corners {
                x0 = x0.min(c[0]);
                x1 = x1.max(c[0]);
                y0 = y0.min(c[1]);
                y1 = y1.max(c[1]);
            }
            let (i0, j0) = self.cell_of([x0, y0]);
            let (i1, j1) = self.cell_of([x1, y1]);
            for cy in j0..=j1 {
                for cx in i0..=i1 {
                    self.cells.push(cy * self.grid_n + cx, j as u32);
                }
            }
        }
        self.bins.finish(ANGLE_BINS);
        self.cells.finish(self.grid_n * self.grid_n);
    }

    fn cell_of(&self, p: [f64; 2]) -> (usize, usize) {
        let f = |v: f64| (((v + self.grid_half) / OBSTACLE_CELL).floor().max(0.0) as usize).min(self.grid_n - 1);
        (f(p[0]), f(p[1]))
    }

    /// Obstacles crossing the open segment between the origin and `p`, except `skip`.
    pub fn count_from_origin(&self, p: [f64; 2], skip: Option<u32>) -> u32 {
        let origin = [0.0, 0.0];
        let len = norm(p[0], p[1]);
        let phi = p[1].atan2(p[0]);
        let b = (((phi + PI) / (TAU / ANGLE_BINS as f64)).floor() as usize).min(ANGLE_BINS - 1);
        let mut n = 0;
        for &j in self.bins.get(b).iter().chain(&self.around_origin) {
            if Some(j) == skip || self.near[j as usize] >= len {
                continue;
            }
            if self.rects[j as usize].intersects_segment(origin, p) {
                n += 1;
            }
        }
        n
    }

    /// Obstacles crossing the open segment (p, q), except `skip`. Walks the grid.
    pub fn count_segment(&mut self, p: [f64; 2], q: [f64; 2], skip: Option<u32>) -> u32 {
        self.query = self.query.wrapping_add(1);
        if self.query == 0 {
            self.stamp.iter_mut().for_each(|s| *s = 0);
            self.query = 1;
        }
        let (mut cx, mut cy) = self.cell_of(p);
        let (ex, ey) = self.cell_of(q);
        let d = [q[0] - p[0], q[1] - p[1]];
        let step_x: i64 = if d[0] > 0.0 { 1 } else { -1 };
        let step_y: i64 = if d[1] > 0.0 { 1 } else { -1 };
        let boundary = |c: usize, step: i64| -> f64 {
            let k = if step > 0 { c as f64 + 1.0 } else { c as f64 };
            k * OBSTACLE_CELL - self.grid_half
        };
        let mut t_max_x = if d[0] != 0.0 { (boundary(cx, step_x) - p[0]) / d[0] } else { f64::INFINITY };
        let mut t_max_y = if d[1] != 0.0 { (boundary(cy, step_y) - p[1]) / d[1] } else { f64::INFINITY };
        let t_dx = if d[0] != 0.0 { OBSTACLE_CELL / d[0].abs() } else { f64::INFINITY };
        let t_dy = if d[1] != 0.0 { OBSTACLE_CELL / d[1].abs() } else { f64::INFINITY };
        let mut n = 0;
        let limit = 4 * self.grid_n + 4;
        for _ in 0..limit {
            for &j in self.cells.get(cy * self.grid_n + cx) {
                let ju = j as usize;
                if self.stamp[ju] == self.query || Some(j) == skip {
                    continue;
                }
                self.stamp[ju] = self.query;
                if self.rects[ju].intersects_segment(p, q) {
                    n += 1;
                }
            }
            if cx == ex && cy == ey {
                break;
            }
            if t_max_x < t_max_y {
                if t_max_x > 1.0 {
                    break;
                }
                let nx = cx as i64 + step_x;
                if nx < 0 || nx >= self.grid_n as i64 {
                    break;
                }
                cx = nx as usize;
                t_max_x += t_dx;
            } else {
                if t_max_y > 1.0 {
                    break;
                }
                let ny = cy as i64 + step_y;
                if ny < 0 || ny >= self.grid_n as i64 {
                    break;
                }
                cy = ny as usize;
                t_max_y += t_dy;
            }
        }
        n
    }

    /// Reflecting faces of reflector obstacles that face the origin.
    pub fn faces(&self) -> Vec<Face> {
        let mut out = Vec::new();
        for (j, o) in self.obstacles.iter().enumerate() {
            if !o.is_reflector {
                continue;
            }
            let c = rect_corners(&self.rects[j]);
            for k in 0..4 {
                let e1 = c[k];
                let e2 = c[(k + 1) % 4];
                let t = [e2[0] - e1[0], e2[1] - e1[1]];
                let len = norm(t[0], t[1]);
                if len < 1e-9 {
                    continue;
                }
                // outward normal: away from the centre
                let mut nrm = [t[1] / len, -t[0] / len];
                let mid = [0.5 * (e1[0] + e2[0]) - o.center[0], 0.5 * (e1[1] + e2[1]) - o.center[1]];
                if nrm[0] * mid[0] + nrm[1] * mid[1] < 0.0 {
                    nrm = [-nrm[0], -nrm[1]];
                }
                // the receiver must be in front of the face
                let side = -(e1[0] * nrm[0] + e1[1] * nrm[1]);
                if side <= 0.0 {
                    continue;
                }
                let mirror = [-2.0 * side * nrm[0], -2.0 * side * nrm[1]];
                out.push(Face { obstacle: j as u32, e1, e2, normal: nrm, mirror });
            }
        }
        out
    }
}

fn rect_corners(r: &OrientedRect) -> [[f64; 2]; 4] {
    let (u, v, h) = (r.u, r.v, r.half);
    let mut out = [[0.0; 2]; 4];
    for (i, (su, sv)) in [(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)].iter().enumerate() {
        out[i] = [r.center[0] + su * h[0] * u[0] + sv * h[1] * v[0], r.center[1] + su * h[0] * u[1] + sv * h[1] * v[1]];
    }
    out
}

/// A reflecting face together with the image of the receiver in it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Face {
    pub obstacle: u32,
    pub e1: [f64; 2],
    pub e2: [f64; 2],
    pub normal: [f64; 2],
    pub mirror: [f64; 2],
}

impl Face {
    /// Specular point for a transmitter at `p`, if the reflection exists.
    pub fn specular_point(&self, p: [f64; 2]) -> Option<[f64; 2]> {
        let n = self.normal;
        let front = (p[0] - self.e1[0]) * n[0] + (p[1] - self.e1[1]) * n[1];
        if front <= 0.0 {
            return None;
        }
        let d = [self.mirror[0] - p[0], self.mirror[1] - p[1]];
        let den = d[0] * n[0] + d[1] * n[1];
        if den == 0.0 {
            return None;
        }
        let t = ((self.e1[0] - p[0]) * n[0] + (self.e1[1] - p[1]) * n[1]) / den;
        if !(t > 0.0 && t < 1.0) {
            return None;
        }
        let s = [p[0] + t * d[0], p[1] + t * d[1]];
        let e = [self.e2[0] - self.e1[0], self.e2[1] - self.e1[1]];
        let u = ((s[0] - self.e1[0]) * e[0] + (s[1] - self.e1[1]) * e[1]) / (e[0] * e[0] + e[1] * e[1]);
        if (0.0..=1.0).contains(&u) {
            Some(s)
        } else {
            None
        }
    }

    /// Convex region (clipped to the square of half-width `half`) holding
    /// every transmitter that can reflect off this face to the origin.
    fn region(&self, half: f64) -> Vec<[f64; 2]> {
        let mut poly = vec![[-half, -half], [half, -half], [half, half], [-half, half]];
        let n = self.normal;
        let e1 = self.e1;
        poly = clip(&poly, |q| (q[0] - e1[0]) * n[0] + (q[1] - e1[1]) * n[1]);
        let m = self.mirror;
        let mut d1 = [self.e1[0] - m[0], self.e1[1] - m[1]];
        let mut d2 = [self.e2[0] - m[0], self.e2[1] - m[1]];
        if d1[0] * d2[1] - d1[1] * d2[0] < 0.0 {
            std::mem::swap(&mut d1, &mut d2);
        }
        poly = clip(&poly, |q| d1[0] * (q[1] - m[1]) - d1[1] * (q[0] - m[0]));
        clip(&poly, |q| (q[0] - m[0]) * d2[1] - (q[1] - m[1]) * d2[0])
    }
}

/// Sutherland–Hodgman clip of a convex polygon to {q : f(q) ≥ 0} for affine f.
fn clip<F: Fn([f64; 2]) -> f64>(poly: &[[f64; 2]], f: F) -> Vec<[f64; 2]> {
    let mut out = Vec::with_capacity(poly.len() + 2);
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        let fa = f(a);
        let fb = f(b);
        if fa >= 0.0 {
            out.push(a);
        }
        if (fa >= 0.0) != (fb >= 0.0) {
            let t = fa / (fa - fb);
            out.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
        }
    }
    out
}

/// x-extent of a convex polygon inside the band y0 ≤ y ≤ y1.
fn band_x_range(poly: &[[f64; 2]], y0: f64, y1: f64) -> Option<(f64, f64)> {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        if a[1] >= y0 && a[1] <= y1 {
            lo = lo.min(a[0]);
            hi = hi.max(a[0]);
        }
        for y in [y0, y1] {
            if (a[1] - y) * (b[1] - y) < 0.0 {
                let x = a[0] + (y - a[1]) / (b[1] - a[1]) * (b[0] - a[0]);
                lo = lo.min(x);
                hi = hi.max(x);
            }
        }
    }
    (lo <= hi).then_some((lo, hi))
}

/// Uniform grid over transmitter positions.
#[derive(Debug, Default)]
struct TxGrid {
    n: usize,
    half: f64,
    cells: Buckets,
}

impl TxGrid {
    fn rebuild(&mut self, pts: &[[f64; 2]], half: f64) {
        self.half = half;
        self.n = ((2.0 * half / TX_CELL).ceil() as usize).max(1);
        self.cells.reset();
        for (i, p) in pts.iter().enumerate() {
            let (cx, cy) = self.cell_of(*p);
            self.cells.push(cy * self.n + cx, i as u32);
        }
        self.cells.finish(self.n * self.n);
    }

    fn cell_of(&self, p: [f64; 2]) -> (usize, usize) {
        let f = |v: f64| (((v + self.half) / TX_CELL).floor().max(0.0) as usize).min(self.n - 1);
        (f(p[0]), f(p[1]))
    }

    /// Indices of transmitters in cells meeting the convex polygon, cell by cell.
    fn visit_polygon<F: FnMut(u32)>(&self, poly: &[[f64; 2]], mut f: F) {
        if poly.len() < 3 {
            return;
        }
        let (ymin, ymax) = poly.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), q| (a.min(q[1]), b.max(q[1])));
        let (_, r0) = self.cell_of([0.0, ymin]);
        let (_, r1) = self.cell_of([0.0, ymax]);
        for row in r0..=r1 {
            let y0 = row as f64 * TX_CELL - self.half;
            let y1 = y0 + TX_CELL;
            let Some((xmin, xmax)) = band_x_range(poly, y0, y1) else {
                continue;
            };
            let (c0, _) = self.cell_of([xmin, y0]);
            let (c1, _) = self.cell_of([xmax, y0]);
            for col in c0..=c1 {
                for &i in self.cells.get(row * self.n + col) {
                    f(i);
                }
            }
        }
    }
}

/// Per-worker buffers reused across trials.
#[derive(Debug, Default)]
pub struct MmWaveScratch {
    index: ObstacleIndex,
    grid: TxGrid,
    txs: Vec<[f64; 2]>,
    boresight: Vec<f64>,
}

fn in_lobe(direction: f64, boresight: f64, theta: f64) -> bool {
    theta >= TAU || wrap_angle(direction - boresight).abs() <= 0.5 * theta
}

fn draw_shadow<R: Rng + ?Sized>(sigma_db: f64, rng: &mut R) -> f64 {
    if sigma_db > 0.0 {
        let z: f64 = StandardNormal.sample(rng);
        sigma_db * z
    } else {
        0.0
    }
}

impl MmWaveParams {
    fn term(&self, side: &SideParams, path: &PathGeom, base_db: f64, tx_boresight: f64, distance: f64) -> Option<LinkBudgetTerm> {
        let g = side.gain_db(base_db, path.n_blockers, path.reflected);
        if !(g >= PATH_FLOOR_DB) {
            return None;
        }
        let theta = side.antenna.theta;
        Some(LinkBudgetTerm {
            tx_power: self.power,
            tx_gain: side.antenna.gain(in_lobe(path.departure, tx_boresight, theta)),
            channel_gain: db_to_linear(g),
            rx_gain: side.antenna.gain(in_lobe(path.arrival, 0.0, theta)),
            distance,
        })
    }

    /// Draw one topology and fill `out` with the typical link and every interfering path.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, scratch: &mut MmWaveScratch, out: &mut Realization) -> Result<(), MonteCarloError> {
        out.clear();
        out.noise = self.noise;
        out.radius = self.window;
        out.x_shares_y = false;
        let half = self.window + 5.0;
        let obstacles = if self.lambda_o > 0.0 {
            sample_obstacles(self.lambda_o, &AnnulusSector::disk(self.window)?, self.reflector_prob, self.y.l_o_db.max(0.0), 1.0, rng)?
        } else {
            Vec::new()
        };
        scratch.index.rebuild(obstacles, half);
        let n = poisson_count(self.lambda_t * PI * self.window * self.window, rng);
        scratch.txs.clear();
        scratch.boresight.clear();
        for _ in 0..n {
            let r = self.window * rng.random::<f64>().sqrt();
            let phi = rng.random::<f64>() * TAU;
            scratch.txs.push([r * phi.cos(), r * phi.sin()]);
            scratch.boresight.push(rng.random::<f64>() * TAU);
        }
        scratch.grid.rebuild(&scratch.txs, half);
        let faces = scratch.index.faces();

        // typical link: transmitter at (d0, 0) pointing at the receiver
        let t = [self.d0, 0.0];
        let mut best_y: Option<LinkBudgetTerm> = None;
        let mut best_x: Option<LinkBudgetTerm> = None;
        let consider = |path: PathGeom, shadow: f64, best_y: &mut Option<LinkBudgetTerm>, best_x: &mut Option<LinkBudgetTerm>| {
            let base = self.base_db(path.length, shadow);
            for (side, best) in [(&self.y, best_y), (&self.x, best_x)] {
                if let Some(term) = self.term(side, &path, base, PI, self.d0) {
                    if best.is_none_or(|b| term.received_power() > b.received_power()) {
                        *best = Some(term);
                    }
                }
            }
        };
        let direct = PathGeom {
            length: self.d0,
            n_blockers: scratch.index.count_from_origin(t, None),
            reflected: false,
            departure: PI,
            arrival: 0.0,
        };
        let shadow = draw_shadow(self.shadow_sigma_db, rng);
        consider(direct, shadow, &mut best_y, &mut best_x);
        for f in &faces {
            if let Some(path) = reflected_path(&mut scratch.index, f, t) {
                let shadow = draw_shadow(self.shadow_sigma_db, rng);
                consider(path, shadow, &mut best_y, &mut best_x);
            }
        }
        let silent = LinkBudgetTerm { tx_power: self.power, tx_gain: 0.0, channel_gain: 0.0, rx_gain: 0.0, distance: self.d0 };
        out.y_signal = best_y.unwrap_or(silent);
        out.x_signal = best_x.unwrap_or(silent);

        // interferers: direct paths, then reflections face by face
        for i in 0..scratch.txs.len() {
            let p = scratch.txs[i];
            let dist = norm(p[0], p[1]);
            let path = PathGeom {
                length: dist,
                n_blockers: scratch.index.count_from_origin(p, None),
                reflected: false,
                departure: (-p[1]).atan2(-p[0]),
                arrival: p[1].atan2(p[0]),
            };
            let shadow = draw_shadow(self.shadow_sigma_db, rng);
            self.push_interferer(out, &path, shadow, scratch.boresight[i], dist);
        }
        if faces.is_empty() || scratch.txs.is_empty() {
            return Ok(());
        }
        let mut hits = Vec::new();
        for f in &faces {
            hits.clear();
            let region = f.region(half);
            scratch.grid.visit_polygon(&region, |i| hits.push(i));
            hits.sort_unstable();
            for &i in &hits {
                let p = scratch.txs[i as usize];
                if let Some(path) = reflected_path(&mut scratch.index, f, p) {
                    let shadow = draw_shadow(self.shadow_sigma_db, rng);
                    self.push_interferer(out, &path, shadow, scratch.boresight[i as usize], norm(p[0], p[1]));
                }
            }
        }
        Ok(())
    }

    fn push_interferer(&self, out: &mut Realization, path: &PathGeom, shadow: f64, boresight: f64, distance: f64) {
        let base = self.base_db(path.length, shadow);
        let y = self.term(&self.y, path, base, boresight, distance);
        let x = self.term(&self.x, path, base, boresight, distance);
        if y.is_none() && x.is_none() {
            return;
        }
        let zero = LinkBudgetTerm { tx_power: self.power, tx_gain: 0.0, channel_gain: 0.0, rx_gain: 0.0, distance };
        out.y_terms.push(y.unwrap_or(zero));
        out.x_terms.push(x.unwrap_or(zero));
    }
}

/// Geometry of the reflection of a transmitter at `p` off face `f`, if it exists.
fn reflected_path(index: &mut ObstacleIndex, f: &Face, p: [f64; 2]) -> Option<PathGeom> {
    let s = f.specular_point(p)?;
    let skip = Some(f.obstacle);
    let n = index.count_segment(p, s, skip) + index.count_from_origin(s, skip);
    let length = norm(p[0] - s[0], p[1] - s[1]) + norm(s[0], s[1]);
    Some(PathGeom {
        length,
        n_blockers: n,
        reflected: true,
        departure: (s[1] - p[1]).atan2(s[0] - p[0]),
        arrival: s[1].atan2(s[0]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::count_blockers;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_obstacles(n: usize, half: f64, seed: u64) -> Vec<Obstacle> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| Obstacle {
                center: [(rng.random::<f64>() * 2.0 - 1.0) * half, (rng.random::<f64>() * 2.0 - 1.0) * half],
                width: rng.random::<f64>() * 4.0,
                length: rng.random::<f64>() * 3.0,
                orientation: rng.random::<f64>() * TAU,
                is_reflector: rng.random::<f64>() < 0.3,
                penetration_loss_db: 10.0,
                reflection_coeff: 0.7,
            })
            .collect()
    }

    #[test]
    fn indexed_counts_match_brute_force() {
        let obs = random_obstacles(600, 100.0, 3);
        let mut idx = ObstacleIndex::default();
        idx.rebuild(obs.clone(), 105.0);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..2000 {
            let p = [(rng.random::<f64>() * 2.0 - 1.0) * 100.0, (rng.random::<f64>() * 2.0 - 1.0) * 100.0];
            let q = [(rng.random::<f64>() * 2.0 - 1.0) * 100.0, (rng.random::<f64>() * 2.0 - 1.0) * 100.0];
            assert_eq!(idx.count_from_origin(p, None) as usize, count_blockers([0.0, 0.0], p, &obs));
            assert_eq!(idx.count_segment(p, q, None) as usize, count_blockers(p, q, &obs));
        }
    }

    #[test]
    fn specular_point_obeys_mirror_law() {
        let obs = random_obstacles(300, 60.0, 5);
        let mut idx = ObstacleIndex::default();
        idx.rebuild(obs, 65.0);
        let faces = idx.faces();
        assert!(!faces.is_empty());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut found = 0;
        for f in &faces {
            // receiver image is the mirror of the origin in the face line
            let mid = [0.5 * (f.mirror[0]), 0.5 * (f.mirror[1])];
            let off = (mid[0] - f.e1[0]) * f.normal[0] + (mid[1] - f.e1[1]) * f.normal[1];
            assert!(off.abs() < 1e-9);
            for _ in 0..50 {
                let p = [(rng.random::<f64>() * 2.0 - 1.0) * 60.0, (rng.random::<f64>() * 2.0 - 1.0) * 60.0];
                if let Some(s) = f.specular_point(p) {
                    found += 1;
                    let n = f.normal;
                    let a = [p[0] - s[0], p[1] - s[1]];
                    let b = [-s[0], -s[1]];
                    let cos_a = (a[0] * n[0] + a[1] * n[1]) / a[0].hypot(a[1]);
                    let cos_b = (b[0] * n[0] + b[1] * n[1]) / b[0].hypot(b[1]);
                    assert!((cos_a - cos_b).abs() < 1e-9);
                    assert!(cos_a > 0.0);
                }
            }
        }
        assert!(found > 0);
    }

    #[test]
    fn face_region_contains_every_reflecting_transmitter() {
        let obs = random_obstacles(200, 80.0, 21);
        let mut idx = ObstacleIndex::default();
        idx.rebuild(obs, 85.0);
        let faces = idx.faces();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let pts: Vec<[f64; 2]> =
            (0..3000).map(|_| [(rng.random::<f64>() * 2.0 - 1.0) * 80.0, (rng.random::<f64>() * 2.0 - 1.0) * 80.0]).collect();
        let mut grid = TxGrid::default();
        grid.rebuild(&pts, 85.0);
        for f in &faces {
            let mut seen = vec![false; pts.len()];
            grid.visit_polygon(&f.region(85.0), |i| seen[i as usize] = true);
            for (i, p) in pts.iter().enumerate() {
                if f.specular_point(*p).is_some() {
                    assert!(seen[i], "transmitter {i} reflects but was not visited");
                }
            }
        }
    }
}
