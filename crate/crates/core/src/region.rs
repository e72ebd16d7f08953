//! The feasible region ℳ of (error, opportunity-difference) pairs.
//!
//! ℳ is the image of the predictor box `0 ⊑ F ⊑ P` under an affine map to
//! the plane, i.e. a translate of a Minkowski sum of `n` segments — a
//! zonotope. [`zonotope_region`] builds it exactly in `O(n log n)`;
//! [`brute_force_region`] is the exponential oracle (hull of all `2^n`
//! deterministic predictors) used to validate it.

use crate::distribution::{DataSource, PredictorVec};
use crate::error::{Error, Result};
use crate::metrics::{GroupDenominators, MetricPoint};
use crate::numeric::{self, CompensatedSum};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Generators smaller than this (Euclidean norm) are dropped: their rows
/// cannot move the metric point by more than the norm itself.
const NORM_FLOOR: f64 = 1e-14;

/// Relative cross-product tolerance under which two generators are
/// considered parallel and merged.
const PARALLEL_TOL: f64 = 1e-12;

/// Maximum row count accepted by the exponential enumeration.
pub const BRUTE_FORCE_MAX_ROWS: usize = 20;

/// The segment contributed by one row: moving `f_i` from `0` to `p_i`
/// translates the metric point by `(dx, dy)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Generator2D {
    /// Error direction: `p_i·(1 − 2q_i)`.
    pub dx: f64,
    /// Opportunity-difference direction: `p_i·(Q^(1)_i/d1 − Q^(0)_i/d0)`.
    pub dy: f64,
    pub row_index: usize,
}

/// One segment generator per source row (unnormalized direction).
pub fn generators(source: &DataSource) -> Result<Vec<Generator2D>> {
    let denoms = GroupDenominators::compute(source)?;
    Ok(raw_generators(source, &denoms))
}

fn raw_generators(source: &DataSource, denoms: &GroupDenominators) -> Vec<Generator2D> {
    let w = denoms.weights(source);
    source
        .p()
        .iter()
        .zip(source.q())
        .zip(&w)
        .enumerate()
        .map(|(i, ((&p, &q), &wi))| Generator2D {
            dx: p * (1.0 - 2.0 * q),
            dy: p * wi,
            row_index: i,
        })
        .collect()
}

/// ℳ as a convex polygon in counter-clockwise order, each vertex paired
/// with a deterministic predictor realizing it.
///
/// Canonical form: the vertex list starts at the lexicographically
/// smallest `(error, opp_diff)` point. Segments and single points are
/// represented with fewer than three vertices and `degenerate = true`.
#[derive(Debug, Clone)]
pub struct RegionPolygon {
    vertices: Vec<MetricPoint>,
    witnesses: Vec<PredictorVec>,
    degenerate: bool,
}

/// Serialized polygon: witnesses as 0/1 row bits of the deterministic
/// predictor (`1` means `f_i = p_i`).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolygonDoc {
    pub vertices: Vec<VertexDoc>,
    pub degenerate: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VertexDoc {
    pub error: f64,
    pub opp_diff: f64,
    pub witness: Vec<u8>,
}

impl RegionPolygon {
    pub fn vertices(&self) -> &[MetricPoint] {
        &self.vertices
    }

    /// Deterministic predictor realizing each vertex, index-aligned with
    /// [`Self::vertices`].
    pub fn witnesses(&self) -> &[PredictorVec] {
        &self.witnesses
    }

    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// Leftmost/rightmost error over the whole region.
    pub fn error_extent(&self) -> (f64, f64) {
        let xs = self.vertices.iter().map(|v| v.error);
        (
            xs.clone().fold(f64::INFINITY, f64::min),
            xs.fold(f64::NEG_INFINITY, f64::max),
        )
    }

    pub fn opp_diff_extent(&self) -> (f64, f64) {
        let ys = self.vertices.iter().map(|v| v.opp_diff);
        (
            ys.clone().fold(f64::INFINITY, f64::min),
            ys.fold(f64::NEG_INFINITY, f64::max),
        )
    }

    /// Convexity check: every consecutive-edge cross product ≥ `-tol`.
    pub fn is_convex_ccw(&self, tol: f64) -> bool {
        let n = self.vertices.len();
        if n < 3 {
            return true;
        }
        (0..n).all(|i| {
            let o = self.vertices[i];
            let a = self.vertices[(i + 1) % n];
            let b = self.vertices[(i + 2) % n];
            cross(
                (a.error - o.error, a.opp_diff - o.opp_diff),
                (b.error - a.error, b.opp_diff - a.opp_diff),
            ) >= -tol
        })
    }

    fn witness_bits(&self, source: &DataSource) -> Vec<Vec<u8>> {
        self.witnesses
            .iter()
            .map(|w| {
                w.f()
                    .iter()
                    .zip(source.p())
                    .map(|(&f, &p)| u8::from(f == p))
                    .collect()
            })
            .collect()
    }

    pub fn to_doc(&self, source: &DataSource) -> PolygonDoc {
        PolygonDoc {
            vertices: self
                .vertices
                .iter()
                .zip(self.witness_bits(source))
                .map(|(v, witness)| VertexDoc {
                    error: v.error,
                    opp_diff: v.opp_diff,
                    witness,
                })
                .collect(),
            degenerate: self.degenerate,
        }
    }

    pub fn from_doc(doc: &PolygonDoc, source: &DataSource) -> Result<Self> {
        let mut vertices = Vec::with_capacity(doc.vertices.len());
        let mut witnesses = Vec::with_capacity(doc.vertices.len());
        for v in &doc.vertices {
            if v.witness.len() != source.len() {
                return Err(Error::DimensionMismatch {
                    expected: source.len(),
                    got: v.witness.len(),
                });
            }
            let bits: Vec<bool> = v.witness.iter().map(|&b| b != 0).collect();
            vertices.push(MetricPoint {
                error: v.error,
                opp_diff: v.opp_diff,
            });
            witnesses.push(PredictorVec::from_bits(source, &bits)?);
        }
        Ok(Self {
            vertices,
            witnesses,
            degenerate: doc.degenerate,
        })
    }
}

fn cross(a: (f64, f64), b: (f64, f64)) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

/// Exact region via the zonotope boundary walk.
///
/// Generators are flipped into the upper half-plane, sorted by angle,
/// merged when parallel, and accumulated along the boundary starting from
/// the bottom vertex. Witness predictors are maintained alongside by
/// toggling the rows whose segment is traversed at each edge.
pub fn zonotope_region(source: &DataSource) -> Result<RegionPolygon> {
    let denoms = GroupDenominators::compute(source)?;
    let raw = raw_generators(source, &denoms);
    let offset = numeric::dot(source.p(), source.q());

    let n = source.len();
    let mut flipped = vec![false; n];
    // Upper-half-plane directions, with their source rows.
    let mut dirs: Vec<(f64, f64, usize)> = Vec::with_capacity(n);
    for g in &raw {
        if g.dx.hypot(g.dy) < NORM_FLOOR {
            continue;
        }
        if g.dy < 0.0 || (g.dy == 0.0 && g.dx < 0.0) {
            flipped[g.row_index] = true;
            dirs.push((-g.dx, -g.dy, g.row_index));
        } else {
            dirs.push((g.dx, g.dy, g.row_index));
        }
    }
    // Angle-ascending order on [0, π): with both vectors in the upper
    // half-plane the cross-product sign is the angle comparison.
    dirs.sort_by(|a, b| {
        let c = cross((a.0, a.1), (b.0, b.1));
        if c > 0.0 {
            Ordering::Less
        } else if c < 0.0 {
            Ordering::Greater
        } else {
            Ordering::Equal
        }
    });

    struct Edge {
        dx: f64,
        dy: f64,
        rows: Vec<usize>,
    }
    let mut edges: Vec<Edge> = Vec::with_capacity(dirs.len());
    for (dx, dy, row) in dirs {
        if let Some(last) = edges.last_mut() {
            let c = cross((last.dx, last.dy), (dx, dy)).abs();
            if c <= PARALLEL_TOL * last.dx.hypot(last.dy) * dx.hypot(dy) {
                last.dx += dx;
                last.dy += dy;
                last.rows.push(row);
                continue;
            }
        }
        edges.push(Edge {
            dx,
            dy,
            rows: vec![row],
        });
    }

    // Bottom vertex: every flipped row at t=1, the rest at t=0.
    let mut bx = CompensatedSum::new();
    let mut by = CompensatedSum::new();
    bx.add(offset);
    for g in &raw {
        if flipped[g.row_index] {
            bx.add(g.dx);
            by.add(g.dy);
        }
    }
    let mut bits = flipped;

    let mut vertices = Vec::with_capacity(2 * edges.len().max(1));
    let mut witnesses = Vec::with_capacity(2 * edges.len().max(1));
    let mut record = |x: f64, y: f64, bits: &[bool]| {
        vertices.push(MetricPoint {
            error: x,
            opp_diff: y,
        });
        witnesses.push(PredictorVec::from_bits(source, bits).expect("bits are index-aligned"));
    };

    let (mut x, mut y) = (bx.value(), by.value());
    record(x, y, &bits);
    // Right chain (bottom to top), then left chain back down; the final
    // step would re-close at the bottom vertex and is omitted.
    for e in &edges {
        x += e.dx;
        y += e.dy;
        for &r in &e.rows {
            bits[r] = !bits[r];
        }
        record(x, y, &bits);
    }
    let m = edges.len();
    for e in edges.iter().take(m.saturating_sub(1)) {
        x -= e.dx;
        y -= e.dy;
        for &r in &e.rows {
            bits[r] = !bits[r];
        }
        record(x, y, &bits);
    }

    let degenerate = vertices.len() < 3;
    rotate_to_lex_min(&mut vertices, &mut witnesses);
    Ok(RegionPolygon {
        vertices,
        witnesses,
        degenerate,
    })
}

fn lex_cmp(a: &MetricPoint, b: &MetricPoint) -> Ordering {
    a.error
        .total_cmp(&b.error)
        .then(a.opp_diff.total_cmp(&b.opp_diff))
}

fn rotate_to_lex_min(vertices: &mut [MetricPoint], witnesses: &mut [PredictorVec]) {
    if vertices.len() < 2 {
        return;
    }
    let k = vertices
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| lex_cmp(a, b))
        .map(|(i, _)| i)
        .expect("non-empty");
    vertices.rotate_left(k);
    witnesses.rotate_left(k);
    // A 2-vertex segment has no orientation; order its endpoints.
    if vertices.len() == 2 && lex_cmp(&vertices[0], &vertices[1]) == Ordering::Greater {
        vertices.swap(0, 1);
        witnesses.swap(0, 1);
    }
}

/// Oracle region: convex hull of the images of all `2^n` deterministic
/// predictors. Rejects sources with more than [`BRUTE_FORCE_MAX_ROWS`]
/// rows. Runs in parallel when the `parallel` feature is enabled.
pub fn brute_force_region(source: &DataSource) -> Result<RegionPolygon> {
    #[cfg(feature = "parallel")]
    {
        let (raw, offset) = brute_force_setup(source)?;
        let n = source.len();
        let points: Vec<(f64, f64, u32)> = (0u32..1 << n)
            .into_par_iter()
            .map(|mask| mask_point(&raw, offset, mask))
            .collect();
        Ok(hull_region(source, points))
    }
    #[cfg(not(feature = "parallel"))]
    {
        brute_force_region_seq(source)
    }
}

/// Sequential variant of [`brute_force_region`], kept unconditionally for
/// benchmarking the parallel speedup.
pub fn brute_force_region_seq(source: &DataSource) -> Result<RegionPolygon> {
    let (raw, offset) = brute_force_setup(source)?;
    let n = source.len();
    let points: Vec<(f64, f64, u32)> = (0u32..1 << n)
        .map(|mask| mask_point(&raw, offset, mask))
        .collect();
    Ok(hull_region(source, points))
}

fn brute_force_setup(source: &DataSource) -> Result<(Vec<Generator2D>, f64)> {
    let n = source.len();
    if n > BRUTE_FORCE_MAX_ROWS {
        return Err(Error::TooLarge {
            n,
            max: BRUTE_FORCE_MAX_ROWS,
        });
    }
    let denoms = GroupDenominators::compute(source)?;
    let raw = raw_generators(source, &denoms);
    let offset = numeric::dot(source.p(), source.q());
    Ok((raw, offset))
}

fn mask_point(raw: &[Generator2D], offset: f64, mask: u32) -> (f64, f64, u32) {
    let mut x = CompensatedSum::new();
    let mut y = CompensatedSum::new();
    x.add(offset);
    for (i, g) in raw.iter().enumerate() {
        if mask >> i & 1 == 1 {
            x.add(g.dx);
            y.add(g.dy);
        }
    }
    (x.value(), y.value(), mask)
}

fn hull_region(source: &DataSource, mut points: Vec<(f64, f64, u32)>) -> RegionPolygon {
    points.sort_by(|a, b| {
        a.0.total_cmp(&b.0)
            .then(a.1.total_cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });
    points.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1);

    let hull = monotone_chain(&points);
    let n = source.len();
    let mut vertices = Vec::with_capacity(hull.len());
    let mut witnesses = Vec::with_capacity(hull.len());
    for &(x, y, mask) in &hull {
        let bits: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
        vertices.push(MetricPoint {
            error: x,
            opp_diff: y,
        });
        witnesses.push(PredictorVec::from_bits(source, &bits).expect("aligned"));
    }
    let degenerate = vertices.len() < 3;
    rotate_to_lex_min(&mut vertices, &mut witnesses);
    RegionPolygon {
        vertices,
        witnesses,
        degenerate,
    }
}

/// Monotone chain on lexicographically sorted distinct points; returns the
/// hull counter-clockwise starting at the smallest point. Collinear
/// interior points are removed.
fn monotone_chain(points: &[(f64, f64, u32)]) -> Vec<(f64, f64, u32)> {
    if points.len() <= 2 {
        return points.to_vec();
    }
    let turn = |o: &(f64, f64, u32), a: &(f64, f64, u32), b: &(f64, f64, u32)| {
        cross((a.0 - o.0, a.1 - o.1), (b.0 - o.0, b.1 - o.1))
    };
    let mut lower: Vec<(f64, f64, u32)> = Vec::new();
    for p in points {
        while lower.len() >= 2 && turn(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0.0
        {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<(f64, f64, u32)> = Vec::new();
    for p in points.iter().rev() {
        while upper.len() >= 2 && turn(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0.0
        {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// The EO segment: ℳ ∩ {opp_diff = 0}, returned as the attainable error
/// interval. Always non-empty when EO is defined, since both constant
/// classifiers satisfy EO.
pub fn eo_slice(region: &RegionPolygon) -> (f64, f64) {
    let v = region.vertices();
    let n = v.len();
    assert!(n >= 1, "empty polygon");
    if n == 1 {
        assert!(v[0].opp_diff.abs() <= 1e-9, "point region off the axis");
        return (v[0].error, v[0].error);
    }
    let mut min_x = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut found = false;
    let count = if n == 2 { 1 } else { n };
    for i in 0..count {
        let a = v[i];
        let b = v[(i + 1) % n];
        let (ya, yb) = (a.opp_diff, b.opp_diff);
        if ya == 0.0 && yb == 0.0 {
            for x in [a.error, b.error] {
                min_x = min_x.min(x);
                max_x = max_x.max(x);
            }
            found = true;
        } else if (ya <= 0.0 && yb >= 0.0) || (ya >= 0.0 && yb <= 0.0) {
            let t = ya / (ya - yb);
            let x = a.error + t * (b.error - a.error);
            min_x = min_x.min(x);
            max_x = max_x.max(x);
            found = true;
        }
    }
    assert!(
        found,
        "region misses the opp_diff = 0 axis; constant classifiers always lie on it"
    );
    (min_x, max_x)
}

/// Point-in-region test with an absolute distance tolerance: accepts
/// points within `tol` of the (possibly degenerate) polygon.
pub fn contains(region: &RegionPolygon, pt: MetricPoint, tol: f64) -> bool {
    let v = region.vertices();
    match v.len() {
        0 => false,
        1 => {
            (pt.error - v[0].error).hypot(pt.opp_diff - v[0].opp_diff) <= tol
        }
        2 => segment_distance(v[0], v[1], pt) <= tol,
        n => (0..n).all(|i| {
            let a = v[i];
            let b = v[(i + 1) % n];
            let e = (b.error - a.error, b.opp_diff - a.opp_diff);
            let r = (pt.error - a.error, pt.opp_diff - a.opp_diff);
            let len = e.0.hypot(e.1);
            cross(e, r) >= -tol * len
        }),
    }
}

fn segment_distance(a: MetricPoint, b: MetricPoint, p: MetricPoint) -> f64 {
    let d = (b.error - a.error, b.opp_diff - a.opp_diff);
    let r = (p.error - a.error, p.opp_diff - a.opp_diff);
    let len2 = d.0 * d.0 + d.1 * d.1;
    let t = if len2 == 0.0 {
        0.0
    } else {
        ((r.0 * d.0 + r.1 * d.1) / len2).clamp(0.0, 1.0)
    };
    (r.0 - t * d.0).hypot(r.1 - t * d.1)
}

/// Tolerant polygon equality: both vertex cycles are simplified by
/// dropping vertices within `tol` of the line through their neighbours,
/// then compared cyclically coordinate-by-coordinate.
///
/// This absorbs the one-vertex discrepancies that arise when two nearly
/// parallel generators are merged by one construction and kept by the
/// other.
pub fn same_polygon(a: &RegionPolygon, b: &RegionPolygon, tol: f64) -> bool {
    let sa = simplify(a.vertices(), tol);
    let sb = simplify(b.vertices(), tol);
    if sa.len() != sb.len() {
        return false;
    }
    if sa.is_empty() {
        return true;
    }
    let n = sa.len();
    // Both are canonically rotated already, but simplification may drop
    // the lex-min vertex itself; realign on the best offset.
    (0..n).any(|shift| {
        (0..n).all(|i| {
            let p = sa[i];
            let q = sb[(i + shift) % n];
            (p.error - q.error).abs() <= tol && (p.opp_diff - q.opp_diff).abs() <= tol
        })
    })
}

fn simplify(v: &[MetricPoint], tol: f64) -> Vec<MetricPoint> {
    if v.len() < 3 {
        return v.to_vec();
    }
    let n = v.len();
    let keep: Vec<MetricPoint> = (0..n)
        .filter(|&i| {
            let prev = v[(i + n - 1) % n];
            let next = v[(i + 1) % n];
            segment_distance(prev, next, v[i]) > tol
        })
        .map(|i| v[i])
        .collect();
    keep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::fixtures;
    use crate::distribution::SourceRow;
    use crate::metrics;

    fn check_region_pair(source: &DataSource) {
        let z = zonotope_region(source).unwrap();
        let b = brute_force_region_seq(source).unwrap();
        assert!(
            same_polygon(&z, &b, 1e-9),
            "zonotope {:?} vs brute force {:?}",
            z.vertices(),
            b.vertices()
        );
        assert!(z.is_convex_ccw(1e-12));
        assert!(b.is_convex_ccw(1e-12));
        for (v, w) in z.vertices().iter().zip(z.witnesses()) {
            assert!(w.is_deterministic(source));
            let pt = metrics::metric_point(source, w).unwrap();
            assert!((pt.error - v.error).abs() < 1e-9);
            assert!((pt.opp_diff - v.opp_diff).abs() < 1e-9);
        }
    }

    #[test]
    fn cloud_region_matches_brute_force() {
        check_region_pair(&fixtures::cloud());
    }

    #[test]
    fn non_example_region_matches_brute_force() {
        let source = fixtures::non_example();
        check_region_pair(&source);
        let z = zonotope_region(&source).unwrap();
        assert!(z.vertices().len() >= 4);
        // Both constant classifiers and the Bayes point lie inside.
        let py = numeric::dot(source.p(), source.q());
        assert!(contains(&z, MetricPoint { error: py, opp_diff: 0.0 }, 1e-9));
        assert!(contains(
            &z,
            MetricPoint { error: 1.0 - py, opp_diff: 0.0 },
            1e-9
        ));
        let bpt = metrics::metric_point(&source, &metrics::bayes(&source, metrics::Tie::Strict))
            .unwrap();
        assert!(contains(&z, bpt, 1e-9));
        assert!(!contains(&z, MetricPoint { error: 0.0, opp_diff: 1.0 }, 1e-6));
    }

    #[test]
    fn half_rate_source_degenerates_to_vertical_segment() {
        let source = DataSource::new(vec![
            SourceRow::new("u", 0, 0.5, 0.5),
            SourceRow::new("v", 1, 0.5, 0.5),
        ])
        .unwrap();
        let z = zonotope_region(&source).unwrap();
        assert!(z.is_degenerate());
        assert_eq!(z.vertices().len(), 2);
        for v in z.vertices() {
            assert!((v.error - 0.5).abs() < 1e-12);
        }
        let (lo, hi) = z.opp_diff_extent();
        assert!(lo < -0.9 && hi > 0.9);
        assert_eq!(eo_slice(&z), (0.5, 0.5));
        let b = brute_force_region_seq(&source).unwrap();
        assert!(b.is_degenerate());
        assert!(same_polygon(&z, &b, 1e-9));
    }

    #[test]
    fn one_row_per_group_all_positive_labels() {
        let source = DataSource::new(vec![
            SourceRow::new("u", 0, 0.3, 1.0),
            SourceRow::new("v", 1, 0.7, 1.0),
        ])
        .unwrap();
        // Invertible affine image of the unit square: a quadrilateral.
        let z = zonotope_region(&source).unwrap();
        assert_eq!(z.vertices().len(), 4);
        assert!(!z.is_degenerate());
        check_region_pair(&source);
        let (lo, hi) = eo_slice(&z);
        assert!((lo - 0.0).abs() < 1e-12 && (hi - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_row_source_has_no_region() {
        let source = DataSource::new(vec![SourceRow::new("u", 0, 1.0, 0.7)]).unwrap();
        assert!(matches!(
            zonotope_region(&source),
            Err(Error::UndefinedEO { .. })
        ));
        assert!(matches!(
            brute_force_region_seq(&source),
            Err(Error::UndefinedEO { .. })
        ));
    }

    #[test]
    fn brute_force_guard_rejects_large_sources() {
        let rows: Vec<SourceRow> = (0..21)
            .map(|i| SourceRow::new(format!("x{i}"), (i % 2) as u8, 1.0 / 21.0, 0.4))
            .collect();
        let source = DataSource::new(rows).unwrap();
        assert!(matches!(
            brute_force_region_seq(&source),
            Err(Error::TooLarge { n: 21, max: 20 })
        ));
        assert!(zonotope_region(&source).is_ok());
    }

    #[test]
    fn point_symmetry_about_center() {
        let source = fixtures::non_example();
        let z = zonotope_region(&source).unwrap();
        for v in z.vertices() {
            let mirror = MetricPoint {
                error: 1.0 - v.error,
                opp_diff: -v.opp_diff,
            };
            assert!(
                z.vertices()
                    .iter()
                    .any(|u| (u.error - mirror.error).abs() < 1e-9
                        && (u.opp_diff - mirror.opp_diff).abs() < 1e-9),
                "no mirror for {v:?}"
            );
        }
        assert!(contains(&z, MetricPoint { error: 0.5, opp_diff: 0.0 }, 1e-9));
    }

    #[test]
    fn eo_slice_is_symmetric_and_bracketed_by_constants() {
        for source in [fixtures::cloud(), fixtures::non_example()] {
            let z = zonotope_region(&source).unwrap();
            let (lo, hi) = eo_slice(&z);
            assert!((hi - (1.0 - lo)).abs() < 1e-9);
            let e0 = numeric::dot(source.p(), source.q());
            assert!(lo <= e0.min(1.0 - e0) + 1e-12);
            assert!(hi >= e0.max(1.0 - e0) - 1e-12);
        }
    }

    #[test]
    fn leftmost_extent_is_bayes_error() {
        for source in [fixtures::cloud(), fixtures::non_example()] {
            let z = zonotope_region(&source).unwrap();
            let (min_err, max_err) = z.error_extent();
            let bayes_err = 1.0 - metrics::bayes_accuracy(&source);
            assert!((min_err - bayes_err).abs() < 1e-9);
            assert!((max_err - (1.0 - bayes_err)).abs() < 1e-9);
        }
    }

    #[test]
    fn polygon_doc_round_trip() {
        let source = fixtures::cloud();
        let z = zonotope_region(&source).unwrap();
        let doc = z.to_doc(&source);
        let back = RegionPolygon::from_doc(&doc, &source).unwrap();
        assert_eq!(z.vertices().len(), back.vertices().len());
        for (a, b) in z.vertices().iter().zip(back.vertices()) {
            assert_eq!(a.error, b.error);
            assert_eq!(a.opp_diff, b.opp_diff);
        }
        for (a, b) in z.witnesses().iter().zip(back.witnesses()) {
            assert_eq!(a.f(), b.f());
        }
        assert_eq!(z.is_degenerate(), back.is_degenerate());
    }

    #[test]
    fn parallel_and_sequential_enumeration_agree() {
        let source = fixtures::non_example();
        let a = brute_force_region(&source).unwrap();
        let b = brute_force_region_seq(&source).unwrap();
        assert_eq!(a.vertices().len(), b.vertices().len());
        for (u, v) in a.vertices().iter().zip(b.vertices()) {
            assert_eq!(u.error, v.error);
            assert_eq!(u.opp_diff, v.opp_diff);
        }
    }
}
